#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "logsift/core.hpp"

namespace logsift {

/// Result of binding one message to a template.
struct TemplateMatch {
  std::size_t template_index = 0;
  std::vector<std::pair<std::string, std::string>> variables;
};

/// Immutable, shareable set of templates compiled for matching.
///
/// A template is matched word by word against the whitespace-normalized
/// message: a fully literal word must equal the message word, and a word
/// holding placeholders matches when its literal segments line up, each
/// placeholder taking a non-empty, whitespace-free run. Candidates come
/// from an index keyed by (first word, word count); templates whose first
/// word is not fully literal live in a wildcard bucket for their word count.
class CompiledTemplateSet {
 public:
  /// Deduplicates by id. Throws Error{EmptyTemplateSet}.
  static CompiledTemplateSet compile(std::vector<LogTemplate> templates);

  const std::vector<LogTemplate>& templates() const noexcept { return templates_; }
  std::size_t size() const noexcept { return templates_.size(); }

  /// Number of fully literal words in template `index`.
  std::size_t specificity(std::size_t index) const { return compiled_[index].specificity; }

  /// Template indices indexed under (first_word, word_count); `first_word`
  /// empty selects the wildcard bucket.
  std::vector<std::size_t> bucket(std::string_view first_word, std::size_t word_count) const;

  /// Most specific matching template; ties go to the smallest template id.
  std::optional<TemplateMatch> match(std::string_view message) const;

 private:
  struct Segment {
    bool placeholder = false;
    std::string text;  // literal text or placeholder name
  };
  struct Word {
    std::vector<Segment> segments;
    bool literal = true;
  };
  struct Compiled {
    std::vector<Word> words;
    std::size_t specificity = 0;
  };

  static bool match_word(const Word& word, std::string_view text,
                         std::vector<std::pair<std::string, std::string>>& vars);
  bool match_template(std::size_t index, const std::vector<std::string_view>& words,
                      std::vector<std::pair<std::string, std::string>>& vars) const;
  static std::string bucket_key(std::string_view first_word, std::size_t word_count);

  std::vector<LogTemplate> templates_;
  std::vector<Compiled> compiled_;
  // Each bucket sorted by (specificity desc, id asc).
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> wildcard_;
};

/// Binds a message to the best template. `severity` comes from the given
/// rules (defaults when null).
std::optional<ParsedEvent> match_line(const CompiledTemplateSet& set, const RawLogRecord& record,
                                      const SeverityRules* rules = nullptr);
std::optional<ParsedEvent> match_line(const CompiledTemplateSet& set, std::string_view message);

struct CoverageReport {
  static constexpr std::size_t kMaxUnmatchedExamples = 100;

  std::uint64_t total = 0;
  std::uint64_t parsed = 0;
  double coverage_pct = 0.0;
  std::vector<std::string> unmatched_examples;  // first occurrences, input order
  bool empty_input = false;                     // total == 0 warning

  void add(std::string_view message, bool matched);
  /// Associative merge; `other` must cover records after this one's.
  void merge(const CoverageReport& other);
  void finalize();
};

/// Successfully parsed / total x 100 over the record stream.
CoverageReport coverage(const CompiledTemplateSet& set, std::span<const RawLogRecord> records,
                        unsigned threads = 1);

}  // namespace logsift
