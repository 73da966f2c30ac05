#include "logsift/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "logsift/core.hpp"

namespace logsift {

std::size_t lcs_length(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double avg_similarity(std::string_view a, std::string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(lcs_length(a, b)) / static_cast<double>(total);
}

double mean_similarity(const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [a, b] : pairs) sum += avg_similarity(a, b);
  return sum / static_cast<double>(pairs.size());
}

namespace {

template <typename Seq>
std::size_t edit_distance(const Seq& a, const Seq& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool is_strip_char(char c) {
  switch (c) {
    case '(': case ')': case '[': case ']': case '{': case '}':
    case '"': case '\'': case '`': case '.': case ',': case ';':
    case ':': case '!': case '?':
      return true;
    default:
      return false;
  }
}

}  // namespace

std::size_t levenshtein_distance(std::string_view a, std::string_view b) { return edit_distance(a, b); }

double levenshtein_norm(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(longest);
}

std::vector<std::string> wer_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view tok : split_ws(text)) {
    std::size_t b = 0, e = tok.size();
    while (b < e && is_strip_char(tok[b])) ++b;
    while (e > b && is_strip_char(tok[e - 1])) --e;
    if (e > b) out.push_back(to_lower(tok.substr(b, e - b)));
  }
  return out;
}

std::size_t word_edit_distance(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  return edit_distance(ref, hyp);
}

double word_error_rate(std::string_view ref, std::string_view hyp) {
  const auto r = wer_tokens(ref);
  if (r.empty()) throw Error(ErrorCode::EmptyReference, "reference has no words");
  const auto h = wer_tokens(hyp);
  return static_cast<double>(word_edit_distance(r, h)) / static_cast<double>(r.size());
}

}  // namespace logsift
