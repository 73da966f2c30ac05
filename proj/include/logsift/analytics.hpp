#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "logsift/core.hpp"

namespace logsift {

// ---------------------------------------------------------------------------
// Fingerprint table: one row per template however often it occurs.

struct FingerprintRow {
  std::string template_id;
  std::string pattern;
  std::uint64_t count = 0;
  std::optional<std::int64_t> first_seen_ns;
  std::optional<std::int64_t> last_seen_ns;
  Severity severity = Severity::Unknown;  // most severe seen; UNKNOWN only if nothing else
  std::uint64_t distinct_hosts = 0;
};

class FingerprintTable {
 public:
  void add(std::string_view template_id, std::string_view pattern, std::optional<std::int64_t> timestamp_ns,
           const std::optional<std::string>& host, Severity severity);
  void add(const ParsedEvent& event, std::string_view pattern);
  void merge(const FingerprintTable& other);

  std::uint64_t event_count() const noexcept { return events_; }

  /// Sorted by descending count, then template id.
  std::vector<FingerprintRow> rows() const;

 private:
  struct Entry {
    FingerprintRow row;
    std::unordered_set<std::string> hosts;
  };
  std::unordered_map<std::string, Entry> entries_;
  std::uint64_t events_ = 0;
};

/// Convenience wrapper: aggregate parsed events given their patterns.
std::vector<FingerprintRow> fingerprint(std::span<const ParsedEvent> events,
                                        const std::unordered_map<std::string, std::string>& pattern_by_id);

// ---------------------------------------------------------------------------

struct SeverityShare {
  Severity severity = Severity::Unknown;
  std::uint64_t count = 0;
  double percent = 0.0;
};

/// Rows for the severities present, sorted by descending count.
std::vector<SeverityShare> severity_distribution(std::span<const Severity> severities);
std::vector<SeverityShare> severity_distribution(const std::map<Severity, std::uint64_t>& counts);

// ---------------------------------------------------------------------------
// Temporal windows

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Counts per half-open window [k*w, (k+1)*w) and category. Rows are
/// windows from the first to the last occupied one (empty windows included),
/// columns follow `categories`.
struct TemporalSeries {
  std::int64_t window_ns = 0;
  std::vector<std::string> categories;         // sorted
  std::vector<std::int64_t> window_starts_ns;  // one per row
  CountMatrix counts;

  std::int64_t total() const { return counts.sum(); }
};

class TemporalAccumulator {
 public:
  explicit TemporalAccumulator(std::int64_t window_ns = 300'000'000'000);

  void add(std::int64_t timestamp_ns, std::string_view category);
  void merge(const TemporalAccumulator& other);
  std::uint64_t event_count() const noexcept { return events_; }

  /// Throws Error{NoTimestamps} when nothing was added.
  TemporalSeries finish() const;

 private:
  std::int64_t window_ns_;
  std::uint64_t events_ = 0;
  std::map<std::int64_t, std::map<std::string, std::int64_t, std::less<>>> windows_;
};

struct TimedEvent {
  std::int64_t timestamp_ns = 0;
  std::string category;
};

TemporalSeries temporal_histogram(std::span<const TimedEvent> events,
                                  std::int64_t window_ns = 300'000'000'000);

/// Cumulative fraction per category over the series windows. Each column is
/// non-decreasing and its last entry is exactly 1.0.
struct CdfCurves {
  std::vector<std::string> categories;
  std::vector<std::int64_t> window_starts_ns;
  Eigen::MatrixXd fraction;
};

CdfCurves category_cdf(const TemporalSeries& series);

// ---------------------------------------------------------------------------
// Error categories

inline constexpr std::string_view kOtherCategoryId = "ZZ";
inline constexpr std::string_view kOtherCategoryName = "Other";

struct Category {
  std::string id;
  std::string name;
};

/// First-match keyword rules over a pattern.
///
/// File format: `ID<TAB>Name<TAB>expression`, `#` comments. An expression is
/// alternatives separated by `|`, each a `+`-joined list of keywords that
/// must all occur. Keywords are case-insensitive and must begin at a word
/// boundary.
class CategoryRules {
 public:
  static CategoryRules parse(std::string_view text);
  static CategoryRules load(const std::string& path);
  static const CategoryRules& defaults();

  const Category& categorize(std::string_view pattern) const;

  /// Rule categories in file order, followed by ZZ/Other.
  std::vector<Category> categories() const;

 private:
  struct Rule {
    Category category;
    std::vector<std::vector<std::string>> alternatives;
  };
  std::vector<Rule> rules_;
  Category other_{std::string(kOtherCategoryId), std::string(kOtherCategoryName)};
};

inline const Category& categorize(std::string_view pattern) {
  return CategoryRules::defaults().categorize(pattern);
}

/// Category ids printed in the published error-category table.
const std::vector<std::string>& published_category_ids();

}  // namespace logsift
