#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logsift/core.hpp"
#include "logsift/matcher.hpp"

namespace logsift {

enum class PerturbationKind : std::uint8_t {
  ParamChange,
  Typo,
  Whitespace,
  WordReorder,
  Punctuation,
  MissingWords,
  ExtraWords,
};

inline constexpr std::array<PerturbationKind, 7> kAllPerturbations = {
    PerturbationKind::ParamChange, PerturbationKind::Typo,         PerturbationKind::Whitespace,
    PerturbationKind::WordReorder, PerturbationKind::Punctuation,  PerturbationKind::MissingWords,
    PerturbationKind::ExtraWords};

/// Report label, e.g. "Param Change".
std::string_view perturbation_label(PerturbationKind k) noexcept;
/// Flag spelling, e.g. "param_change".
std::string_view perturbation_id(PerturbationKind k) noexcept;
std::optional<PerturbationKind> perturbation_from_id(std::string_view id);

struct PerturbationParams {
  std::vector<std::string> extra_words = {"warning:", "note:", "debug:"};
};

struct Perturbation {
  PerturbationKind kind = PerturbationKind::Typo;
  std::uint64_t seed = 0;
  PerturbationParams params;
};

/// Applies one perturbation. Same (message, kind, seed, params) -> same
/// output. Token-level kinds rejoin words with single spaces.
/// Throws Error{Inapplicable} when the message offers nothing to perturb.
std::string perturb(std::string_view message, const Perturbation& p);

/// One robustness sample handed to a pattern extractor.
struct RobustnessSample {
  std::string original_message;
  std::string perturbed_message;
  const LogTemplate* gold = nullptr;
  Perturbation perturbation;
};

/// Produces a pattern string for the perturbed message. May throw; a throw
/// counts as a failed sample with an empty pattern.
using PatternExtractor = std::function<std::string(const RobustnessSample&)>;

struct RobustnessRow {
  PerturbationKind kind = PerturbationKind::Typo;
  double accuracy_pct = 0.0;
  double avg_similarity = 0.0;
  double levenshtein_norm = 0.0;
  double wer_pct = 0.0;
  std::uint64_t sample_count = 0;
  std::uint64_t exact_matches = 0;
  std::uint64_t inapplicable = 0;
  std::uint64_t extractor_errors = 0;
  std::vector<std::pair<std::string, std::string>> failure_examples;  // (original, transformed)
};

struct EvaluateOptions {
  std::vector<PerturbationKind> kinds{kAllPerturbations.begin(), kAllPerturbations.end()};
  std::uint64_t seed = 42;
  PerturbationParams params;
  /// Lev. and WER between raw messages instead of patterns.
  bool message_level = false;
  std::size_t max_failure_examples = 20;
  unsigned threads = 1;
};

/// Runs every message through every kind, extracts a pattern from the
/// perturbed message and scores it against the gold pattern. One row per
/// kind, in `options.kinds` order. Throws Error{InvalidArgument} if a
/// message matches no gold template.
std::vector<RobustnessRow> evaluate(const CompiledTemplateSet& gold, std::span<const std::string> messages,
                                    const PatternExtractor& extractor, const EvaluateOptions& options);

/// Returns the gold template that matches the perturbed message, or the
/// masked-form pattern when none does.
PatternExtractor make_heuristic_extractor(const CompiledTemplateSet& gold);

}  // namespace logsift
