#include <doctest.h>

#include "logsift/error.hpp"
#include "logsift/metrics.hpp"
#include "logsift/random.hpp"
#include "oracles.hpp"

using namespace logsift;

namespace {

std::string random_text(SplitMix64& rng, std::size_t max_len) {
  static const std::string alphabet = "abcde (),.<>_ ";
  std::string s;
  const std::size_t len = rng.below(max_len + 1);
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
  return s;
}

}  // namespace

TEST_CASE("metric values for hand-checked pairs") {
  CHECK(lcs_length("abcde", "ace") == 3);
  CHECK(avg_similarity("abc", "abc") == 1.0);
  CHECK(avg_similarity("", "") == 1.0);
  CHECK(avg_similarity("abc", "") == 0.0);
  CHECK(avg_similarity("abcd", "abxd") == doctest::Approx(0.75));
  CHECK(levenshtein_distance("kitten", "sitting") == 3);
  CHECK(levenshtein_norm("kitten", "sitting") == doctest::Approx(3.0 / 7.0));
  CHECK(levenshtein_norm("", "") == 0.0);
  CHECK(word_error_rate("a b c d", "a x c") == doctest::Approx(0.5));
  CHECK_THROWS_AS(word_error_rate("  ", "x"), Error);
  CHECK(mean_similarity({}) == 0.0);
}

TEST_CASE("metrics agree exactly with brute-force oracles on random pairs") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string a = random_text(rng, 40), b = random_text(rng, 40);
    const std::size_t lcs = oracle::lcs(a, b);
    REQUIRE(lcs_length(a, b) == lcs);
    const double sim = a.empty() && b.empty() ? 1.0 : 2.0 * static_cast<double>(lcs) / static_cast<double>(a.size() + b.size());
    CHECK(avg_similarity(a, b) == sim);

    const std::size_t lev = oracle::edit_distance(a, b);
    REQUIRE(levenshtein_distance(a, b) == lev);
    const std::size_t longest = std::max(a.size(), b.size());
    CHECK(levenshtein_norm(a, b) == (longest == 0 ? 0.0 : static_cast<double>(lev) / static_cast<double>(longest)));

    const auto ra = oracle::words(a), hb = oracle::words(b);
    CHECK(wer_tokens(a) == ra);
    if (!ra.empty()) {
      CHECK(word_error_rate(a, b) == static_cast<double>(oracle::edit_distance(ra, hb)) / static_cast<double>(ra.size()));
    }
  }
}

TEST_CASE("delimiter substitution alone costs no words") {
  CHECK(word_error_rate("tx nic (<id>) pid", "tx nic [<id>] pid") == 0.0);
  CHECK(word_error_rate("Error: (disk)", "error {disk}") == 0.0);
}

TEST_CASE("a one-letter typo is one character but a whole word") {
  const std::string ref = "out of memory: killed process <pid>";
  const std::string hyp = "ovt of memory: killed process <pid>";
  CHECK(levenshtein_distance(ref, hyp) == 1);
  CHECK(word_error_rate(ref, hyp) > 0.0);
  CHECK(word_error_rate(ref, hyp) == doctest::Approx(1.0 / 6.0));
}
