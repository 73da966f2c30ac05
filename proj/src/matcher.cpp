#include "logsift/matcher.hpp"

#include <algorithm>
#include <unordered_set>

#include "logsift/parallel.hpp"

namespace logsift {

std::string CompiledTemplateSet::bucket_key(std::string_view first_word, std::size_t word_count) {
  std::string key(first_word);
  key.push_back('\0');
  key += std::to_string(word_count);
  return key;
}

CompiledTemplateSet CompiledTemplateSet::compile(std::vector<LogTemplate> templates) {
  if (templates.empty()) throw Error(ErrorCode::EmptyTemplateSet, "no templates to compile");
  CompiledTemplateSet set;
  std::unordered_set<std::string> seen;
  for (auto& t : templates) {
    if (seen.insert(t.id()).second) set.templates_.push_back(std::move(t));
  }

  for (const LogTemplate& t : set.templates_) {
    Compiled c;
    c.words.emplace_back();
    for (const Token& tok : t.tokens()) {
      if (const auto* ph = std::get_if<Placeholder>(&tok)) {
        c.words.back().segments.push_back({true, ph->name});
        c.words.back().literal = false;
        continue;
      }
      for (char ch : std::get<Literal>(tok).text) {
        if (ch == ' ') {
          c.words.emplace_back();
          continue;
        }
        auto& segs = c.words.back().segments;
        if (segs.empty() || segs.back().placeholder) segs.push_back({false, {}});
        segs.back().text.push_back(ch);
      }
    }
    for (const Word& w : c.words) c.specificity += w.literal ? 1 : 0;
    set.compiled_.push_back(std::move(c));
  }

  for (std::size_t i = 0; i < set.templates_.size(); ++i) {
    const Compiled& c = set.compiled_[i];
    const Word& first = c.words.front();
    if (first.literal) {
      set.index_[bucket_key(first.segments.front().text, c.words.size())].push_back(i);
    } else {
      set.wildcard_[c.words.size()].push_back(i);
    }
  }
  auto order = [&set](std::size_t a, std::size_t b) {
    if (set.compiled_[a].specificity != set.compiled_[b].specificity) {
      return set.compiled_[a].specificity > set.compiled_[b].specificity;
    }
    return set.templates_[a].id() < set.templates_[b].id();
  };
  for (auto& [_, ids] : set.index_) std::sort(ids.begin(), ids.end(), order);
  for (auto& [_, ids] : set.wildcard_) std::sort(ids.begin(), ids.end(), order);
  return set;
}

std::vector<std::size_t> CompiledTemplateSet::bucket(std::string_view first_word,
                                                     std::size_t word_count) const {
  if (first_word.empty()) {
    auto it = wildcard_.find(word_count);
    return it == wildcard_.end() ? std::vector<std::size_t>{} : it->second;
  }
  auto it = index_.find(bucket_key(first_word, word_count));
  return it == index_.end() ? std::vector<std::size_t>{} : it->second;
}

bool CompiledTemplateSet::match_word(const Word& word, std::string_view text,
                                     std::vector<std::pair<std::string, std::string>>& vars) {
  if (word.literal) return word.segments.front().text == text;

  const auto& segs = word.segments;
  const std::size_t mark = vars.size();
  // Depth-first over segment alignments; placeholders try the shortest value
  // first. Words are short and placeholders never touch, so this stays small.
  auto rec = [&](auto&& self, std::size_t si, std::size_t pos) -> bool {
    if (si == segs.size()) return pos == text.size();
    const Segment& seg = segs[si];
    if (!seg.placeholder) {
      if (text.compare(pos, seg.text.size(), seg.text) != 0) return false;
      return self(self, si + 1, pos + seg.text.size());
    }
    if (si + 1 == segs.size()) {
      if (pos >= text.size()) return false;
      vars.emplace_back(seg.text, std::string(text.substr(pos)));
      return true;
    }
    const std::string& next = segs[si + 1].text;
    for (std::size_t at = text.find(next, pos + 1); at != std::string_view::npos;
         at = text.find(next, at + 1)) {
      vars.emplace_back(seg.text, std::string(text.substr(pos, at - pos)));
      if (self(self, si + 1, at)) return true;
      vars.pop_back();
    }
    return false;
  };
  if (rec(rec, 0, 0)) return true;
  vars.resize(mark);
  return false;
}

bool CompiledTemplateSet::match_template(std::size_t index, const std::vector<std::string_view>& words,
                                         std::vector<std::pair<std::string, std::string>>& vars) const {
  const Compiled& c = compiled_[index];
  if (c.words.size() != words.size()) return false;
  vars.clear();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!match_word(c.words[i], words[i], vars)) return false;
  }
  return true;
}

std::optional<TemplateMatch> CompiledTemplateSet::match(std::string_view message) const {
  const std::vector<std::string_view> words = split_ws(message);
  if (words.empty()) return std::nullopt;

  std::optional<TemplateMatch> best;
  std::vector<std::pair<std::string, std::string>> vars;
  auto better = [this](std::size_t a, std::size_t b) {
    if (compiled_[a].specificity != compiled_[b].specificity) {
      return compiled_[a].specificity > compiled_[b].specificity;
    }
    return templates_[a].id() < templates_[b].id();
  };
  auto scan = [&](const std::vector<std::size_t>& ids) {
    for (std::size_t idx : ids) {
      if (best && !better(idx, best->template_index)) return;
      if (match_template(idx, words, vars)) {
        best = TemplateMatch{idx, vars};
        return;
      }
    }
  };
  if (auto it = index_.find(bucket_key(words.front(), words.size())); it != index_.end()) scan(it->second);
  if (auto it = wildcard_.find(words.size()); it != wildcard_.end()) scan(it->second);
  return best;
}

std::optional<ParsedEvent> match_line(const CompiledTemplateSet& set, const RawLogRecord& record,
                                      const SeverityRules* rules) {
  auto m = set.match(record.message);
  if (!m) return std::nullopt;
  ParsedEvent ev;
  ev.record = &record;
  ev.template_id = set.templates()[m->template_index].id();
  ev.variables = std::move(m->variables);
  ev.severity = (rules ? *rules : SeverityRules::defaults()).classify(record.message);
  return ev;
}

std::optional<ParsedEvent> match_line(const CompiledTemplateSet& set, std::string_view message) {
  auto m = set.match(message);
  if (!m) return std::nullopt;
  ParsedEvent ev;
  ev.template_id = set.templates()[m->template_index].id();
  ev.variables = std::move(m->variables);
  ev.severity = classify_severity(message);
  return ev;
}

void CoverageReport::add(std::string_view message, bool matched) {
  ++total;
  if (matched) {
    ++parsed;
  } else if (unmatched_examples.size() < kMaxUnmatchedExamples) {
    unmatched_examples.emplace_back(message);
  }
}

void CoverageReport::merge(const CoverageReport& other) {
  total += other.total;
  parsed += other.parsed;
  for (const auto& ex : other.unmatched_examples) {
    if (unmatched_examples.size() >= kMaxUnmatchedExamples) break;
    unmatched_examples.push_back(ex);
  }
}

void CoverageReport::finalize() {
  empty_input = total == 0;
  coverage_pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(parsed) / static_cast<double>(total);
}

CoverageReport coverage(const CompiledTemplateSet& set, std::span<const RawLogRecord> records,
                        unsigned threads) {
  std::vector<char> matched(records.size(), 0);
  parallel_chunks(records.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) matched[i] = set.match(records[i].message).has_value();
  });
  CoverageReport report;
  for (std::size_t i = 0; i < records.size(); ++i) report.add(records[i].message, matched[i] != 0);
  report.finalize();
  return report;
}

}  // namespace logsift
