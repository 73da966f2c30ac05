#include "logsift/analytics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "logsift_embedded_data.hpp"

namespace logsift {

namespace {

Severity more_severe(Severity a, Severity b) {
  if (a == Severity::Unknown) return b;
  if (b == Severity::Unknown) return a;
  return severity_less(a, b) ? b : a;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

void FingerprintTable::add(std::string_view template_id, std::string_view pattern,
                           std::optional<std::int64_t> timestamp_ns, const std::optional<std::string>& host,
                           Severity severity) {
  ++events_;
  auto [it, inserted] = entries_.try_emplace(std::string(template_id));
  Entry& e = it->second;
  if (inserted) {
    e.row.template_id = std::string(template_id);
    e.row.pattern = std::string(pattern);
    e.row.severity = severity;
  } else {
    e.row.severity = more_severe(e.row.severity, severity);
  }
  ++e.row.count;
  if (timestamp_ns) {
    if (!e.row.first_seen_ns || *timestamp_ns < *e.row.first_seen_ns) e.row.first_seen_ns = timestamp_ns;
    if (!e.row.last_seen_ns || *timestamp_ns > *e.row.last_seen_ns) e.row.last_seen_ns = timestamp_ns;
  }
  if (host && e.hosts.insert(*host).second) e.row.distinct_hosts = e.hosts.size();
}

void FingerprintTable::add(const ParsedEvent& event, std::string_view pattern) {
  static const std::optional<std::string> kNoHost;
  const RawLogRecord* r = event.record;
  add(event.template_id, pattern, r ? r->timestamp_ns : std::nullopt, r ? r->host : kNoHost,
      event.severity);
}

void FingerprintTable::merge(const FingerprintTable& other) {
  events_ += other.events_;
  for (const auto& [id, src] : other.entries_) {
    auto [it, inserted] = entries_.try_emplace(id, src);
    if (inserted) continue;
    FingerprintRow& row = it->second.row;
    row.count += src.row.count;
    row.severity = more_severe(row.severity, src.row.severity);
    if (src.row.first_seen_ns && (!row.first_seen_ns || *src.row.first_seen_ns < *row.first_seen_ns)) {
      row.first_seen_ns = src.row.first_seen_ns;
    }
    if (src.row.last_seen_ns && (!row.last_seen_ns || *src.row.last_seen_ns > *row.last_seen_ns)) {
      row.last_seen_ns = src.row.last_seen_ns;
    }
    it->second.hosts.insert(src.hosts.begin(), src.hosts.end());
    row.distinct_hosts = it->second.hosts.size();
  }
}

std::vector<FingerprintRow> FingerprintTable::rows() const {
  std::vector<FingerprintRow> out;
  out.reserve(entries_.size());
  for (const auto& [_, e] : entries_) out.push_back(e.row);
  std::sort(out.begin(), out.end(), [](const FingerprintRow& a, const FingerprintRow& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.template_id < b.template_id;
  });
  return out;
}

std::vector<FingerprintRow> fingerprint(std::span<const ParsedEvent> events,
                                        const std::unordered_map<std::string, std::string>& pattern_by_id) {
  FingerprintTable table;
  for (const ParsedEvent& ev : events) {
    auto it = pattern_by_id.find(ev.template_id);
    table.add(ev, it == pattern_by_id.end() ? std::string_view{} : std::string_view{it->second});
  }
  return table.rows();
}

// ---------------------------------------------------------------------------

std::vector<SeverityShare> severity_distribution(const std::map<Severity, std::uint64_t>& counts) {
  std::uint64_t total = 0;
  for (const auto& [_, c] : counts) total += c;
  std::vector<SeverityShare> out;
  for (const auto& [s, c] : counts) {
    if (c == 0) continue;
    out.push_back({s, c, 100.0 * static_cast<double>(c) / static_cast<double>(total)});
  }
  std::sort(out.begin(), out.end(), [](const SeverityShare& a, const SeverityShare& b) {
    if (a.count != b.count) return a.count > b.count;
    return severity_less(a.severity, b.severity);
  });
  return out;
}

std::vector<SeverityShare> severity_distribution(std::span<const Severity> severities) {
  std::map<Severity, std::uint64_t> counts;
  for (Severity s : severities) ++counts[s];
  return severity_distribution(counts);
}

// ---------------------------------------------------------------------------

TemporalAccumulator::TemporalAccumulator(std::int64_t window_ns) : window_ns_(window_ns) {
  if (window_ns <= 0) throw Error(ErrorCode::InvalidArgument, "window must be positive");
}

void TemporalAccumulator::add(std::int64_t timestamp_ns, std::string_view category) {
  ++events_;
  auto& cats = windows_[floor_div(timestamp_ns, window_ns_)];
  auto it = cats.find(category);
  if (it == cats.end()) {
    cats.emplace(std::string(category), 1);
  } else {
    ++it->second;
  }
}

void TemporalAccumulator::merge(const TemporalAccumulator& other) {
  if (other.window_ns_ != window_ns_) throw Error(ErrorCode::InvalidArgument, "window mismatch in merge");
  events_ += other.events_;
  for (const auto& [w, cats] : other.windows_) {
    auto& dst = windows_[w];
    for (const auto& [c, n] : cats) dst[c] += n;
  }
}

TemporalSeries TemporalAccumulator::finish() const {
  if (windows_.empty()) throw Error(ErrorCode::NoTimestamps, "no timestamped events");
  TemporalSeries s;
  s.window_ns = window_ns_;
  std::map<std::string, std::size_t, std::less<>> col;
  for (const auto& [_, cats] : windows_) {
    for (const auto& [c, __] : cats) col.emplace(c, 0);
  }
  for (auto& [name, idx] : col) {
    idx = s.categories.size();
    s.categories.push_back(name);
  }
  const std::int64_t first = windows_.begin()->first;
  const std::int64_t last = windows_.rbegin()->first;
  const auto rows = static_cast<Eigen::Index>(last - first + 1);
  s.counts = CountMatrix::Zero(rows, static_cast<Eigen::Index>(s.categories.size()));
  for (std::int64_t k = first; k <= last; ++k) s.window_starts_ns.push_back(k * window_ns_);
  for (const auto& [w, cats] : windows_) {
    for (const auto& [c, n] : cats) {
      s.counts(static_cast<Eigen::Index>(w - first), static_cast<Eigen::Index>(col.find(c)->second)) += n;
    }
  }
  return s;
}

TemporalSeries temporal_histogram(std::span<const TimedEvent> events, std::int64_t window_ns) {
  TemporalAccumulator acc(window_ns);
  for (const TimedEvent& e : events) acc.add(e.timestamp_ns, e.category);
  return acc.finish();
}

CdfCurves category_cdf(const TemporalSeries& series) {
  CdfCurves out;
  out.categories = series.categories;
  out.window_starts_ns = series.window_starts_ns;
  const Eigen::Index rows = series.counts.rows(), cols = series.counts.cols();
  out.fraction = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const std::int64_t total = series.counts.col(c).sum();
    if (total == 0) continue;
    std::int64_t running = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      running += series.counts(r, c);
      out.fraction(r, c) = static_cast<double>(running) / static_cast<double>(total);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string trimmed(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

bool keyword_at_boundary(std::string_view haystack, std::string_view needle) {
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + 1)) {
    if (pos == 0 || !std::isalnum(static_cast<unsigned char>(haystack[pos - 1]))) return true;
  }
  return false;
}

}  // namespace

CategoryRules CategoryRules::parse(std::string_view text) {
  CategoryRules rules;
  std::size_t line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw Error(ErrorCode::Parse, "category rules line " + std::to_string(line_no) +
                                        ": expected ID<TAB>Name<TAB>expression");
    }
    Rule rule;
    rule.category = {trimmed(fields[0]), trimmed(fields[1])};
    if (rule.category.id.empty()) {
      throw Error(ErrorCode::Parse, "category rules line " + std::to_string(line_no) + ": empty id");
    }
    for (const std::string& alt : split(fields[2], '|')) {
      std::vector<std::string> all;
      for (const std::string& kw : split(alt, '+')) {
        std::string k = to_lower(trimmed(kw));
        if (!k.empty()) all.push_back(std::move(k));
      }
      if (!all.empty()) rule.alternatives.push_back(std::move(all));
    }
    if (rule.alternatives.empty()) {
      throw Error(ErrorCode::Parse, "category rules line " + std::to_string(line_no) + ": empty expression");
    }
    rules.rules_.push_back(std::move(rule));
  }
  return rules;
}

CategoryRules CategoryRules::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open category rules '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const CategoryRules& CategoryRules::defaults() {
  static const CategoryRules rules = parse(embedded::kCategoryRules);
  return rules;
}

const Category& CategoryRules::categorize(std::string_view pattern) const {
  const std::string lower = to_lower(pattern);
  for (const Rule& rule : rules_) {
    for (const auto& all : rule.alternatives) {
      if (std::all_of(all.begin(), all.end(),
                      [&](const std::string& kw) { return keyword_at_boundary(lower, kw); })) {
        return rule.category;
      }
    }
  }
  return other_;
}

std::vector<Category> CategoryRules::categories() const {
  std::vector<Category> out;
  for (const Rule& r : rules_) {
    if (std::none_of(out.begin(), out.end(), [&](const Category& c) { return c.id == r.category.id; })) {
      out.push_back(r.category);
    }
  }
  out.push_back(other_);
  return out;
}

const std::vector<std::string>& published_category_ids() {
  static const std::vector<std::string> ids = {
      "AA", "AB", "AC", "AD", "AE", "AF", "AH", "AI", "AJ", "AK", "AL", "AM", "AO",
      "AP", "AQ", "AR", "AS", "AT", "AU", "AV", "AW", "AX", "AY", "AZ", "BA", "BB"};
  return ids;
}

}  // namespace logsift
