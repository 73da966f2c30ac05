#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logsift/core.hpp"
#include "logsift/random.hpp"
#include "logsift/signature.hpp"

namespace logsift {

/// A fresh value that the masker classifies as `cls`.
std::string random_value(MaskClass cls, SplitMix64& rng);

struct CorpusOptions {
  std::size_t templates = 100;
  std::uint64_t lines = 10'000;
  std::uint64_t seed = 42;
  double zipf_exponent = 1.1;
  std::int64_t start_epoch_s = 1'700'000'000;
  double mean_interval_s = 0.25;
  std::size_t hosts = 64;
};

struct GeneratedLine {
  std::uint64_t line_no = 0;
  std::int64_t timestamp_ns = 0;
  std::string host;
  std::string message;
  std::size_t template_index = 0;
};

/// Synthetic corpus with known ground truth: k random templates of 2-12
/// words with 0-4 placeholders drawn from the masking classes, sampled with
/// Zipf weights (rank i gets weight 1/i^s). Lines are produced lazily.
class CorpusGenerator {
 public:
  explicit CorpusGenerator(const CorpusOptions& options);

  const std::vector<LogTemplate>& templates() const noexcept { return templates_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// False once options.lines lines have been produced.
  bool next(GeneratedLine& out);

  /// Instantiates template `index` with fresh variable values.
  std::string instantiate(std::size_t index, SplitMix64& rng) const;

 private:
  struct Slot {
    bool variable = false;
    std::string text;  // literal word, or prefix for `key=` placeholders
    MaskClass cls = MaskClass::None;
  };

  CorpusOptions options_;
  std::vector<LogTemplate> templates_;
  std::vector<std::vector<Slot>> slots_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  SplitMix64 rng_;
  std::uint64_t produced_ = 0;
  std::int64_t clock_ns_ = 0;
};

/// Writes `<dir>/corpus.log` (epoch<TAB>host<TAB>message lines),
/// `<dir>/gold_templates.txt` and `<dir>/gold_map.tsv` (line_no<TAB>id).
void write_corpus(const CorpusOptions& options, const std::string& dir);

}  // namespace logsift
