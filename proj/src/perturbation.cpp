#include "logsift/perturbation.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "logsift/corpus.hpp"
#include "logsift/metrics.hpp"
#include "logsift/parallel.hpp"
#include "logsift/random.hpp"
#include "logsift/signature.hpp"
#include "logsift/template_generation.hpp"

namespace logsift {

std::string_view perturbation_label(PerturbationKind k) noexcept {
  switch (k) {
    case PerturbationKind::ParamChange: return "Param Change";
    case PerturbationKind::Typo: return "Typo";
    case PerturbationKind::Whitespace: return "Whitespace";
    case PerturbationKind::WordReorder: return "Word Reorder";
    case PerturbationKind::Punctuation: return "Punctuation";
    case PerturbationKind::MissingWords: return "Missing Words";
    case PerturbationKind::ExtraWords: return "Extra Words";
  }
  return "?";
}

std::string_view perturbation_id(PerturbationKind k) noexcept {
  switch (k) {
    case PerturbationKind::ParamChange: return "param_change";
    case PerturbationKind::Typo: return "typo";
    case PerturbationKind::Whitespace: return "whitespace";
    case PerturbationKind::WordReorder: return "word_reorder";
    case PerturbationKind::Punctuation: return "punctuation";
    case PerturbationKind::MissingWords: return "missing_words";
    case PerturbationKind::ExtraWords: return "extra_words";
  }
  return "?";
}

std::optional<PerturbationKind> perturbation_from_id(std::string_view id) {
  for (PerturbationKind k : kAllPerturbations) {
    if (perturbation_id(k) == id) return k;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void inapplicable(PerturbationKind k, std::string_view why) {
  throw Error(ErrorCode::Inapplicable, std::string(perturbation_label(k)) + ": " + std::string(why));
}

std::string join(const std::vector<std::string_view>& words) {
  std::string out;
  for (std::string_view w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

std::string param_change(std::string_view message, SplitMix64& rng) {
  struct Site {
    std::size_t offset, length;
    MaskClass cls;
  };
  std::vector<Site> sites;
  std::size_t i = 0;
  while (i < message.size()) {
    while (i < message.size() && is_space(message[i])) ++i;
    std::size_t start = i;
    while (i < message.size() && !is_space(message[i])) ++i;
    if (i == start) break;
    MaskedSpan span = locate_variable(message.substr(start, i - start));
    if (span.cls != MaskClass::None) sites.push_back({start + span.offset, span.length, span.cls});
  }
  if (sites.empty()) inapplicable(PerturbationKind::ParamChange, "no variable token");
  const Site& s = sites[rng.below(sites.size())];
  std::string_view old = message.substr(s.offset, s.length);
  std::string fresh = random_value(s.cls, rng);
  for (int attempt = 0; attempt < 16 && fresh == old; ++attempt) fresh = random_value(s.cls, rng);
  std::string out(message);
  out.replace(s.offset, s.length, fresh);
  return out;
}

std::string typo(std::string_view message, SplitMix64& rng) {
  std::vector<std::size_t> letters;
  for (std::size_t i = 0; i < message.size(); ++i) {
    if (std::isalpha(static_cast<unsigned char>(message[i]))) letters.push_back(i);
  }
  if (letters.empty()) inapplicable(PerturbationKind::Typo, "no alphabetic character");
  const std::size_t at = letters[rng.below(letters.size())];
  const char c = message[at];
  const bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
  const int old = std::tolower(static_cast<unsigned char>(c)) - 'a';
  int repl = static_cast<int>(rng.below(25));
  if (repl >= old) ++repl;
  std::string out(message);
  out[at] = static_cast<char>((upper ? 'A' : 'a') + repl);
  return out;
}

std::string whitespace(std::string_view message, SplitMix64& rng) {
  std::vector<std::size_t> spaces;
  for (std::size_t i = 0; i < message.size(); ++i) {
    if (message[i] == ' ') spaces.push_back(i);
  }
  if (spaces.empty()) inapplicable(PerturbationKind::Whitespace, "no space");
  const std::size_t at = spaces[rng.below(spaces.size())];
  std::string out(message);
  switch (rng.below(3)) {
    case 0: out.erase(at, 1); break;
    case 1: out.insert(at, 1, ' '); break;
    default: out[at] = '\t'; break;
  }
  return out;
}

std::string word_reorder(std::string_view message, SplitMix64& rng) {
  auto words = split_ws(message);
  if (words.size() < 2) inapplicable(PerturbationKind::WordReorder, "fewer than two words");
  const std::size_t from = 1 + rng.below(words.size() - 1);
  std::rotate(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(from),
              words.begin() + static_cast<std::ptrdiff_t>(from) + 1);
  return join(words);
}

std::string punctuation(std::string_view message, SplitMix64& rng) {
  static constexpr std::array<std::array<char, 2>, 3> kPairs = {{{'(', ')'}, {'[', ']'}, {'{', '}'}}};
  std::vector<std::size_t> present;
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    if (message.find(kPairs[p][0]) != std::string_view::npos ||
        message.find(kPairs[p][1]) != std::string_view::npos) {
      present.push_back(p);
    }
  }
  if (present.empty()) inapplicable(PerturbationKind::Punctuation, "no delimiter pair");
  const std::size_t src = present[rng.below(present.size())];
  std::size_t dst = rng.below(2);
  if (dst >= src) ++dst;
  std::string out(message);
  for (char& c : out) {
    if (c == kPairs[src][0]) {
      c = kPairs[dst][0];
    } else if (c == kPairs[src][1]) {
      c = kPairs[dst][1];
    }
  }
  return out;
}

std::string missing_words(std::string_view message, SplitMix64& rng) {
  auto words = split_ws(message);
  if (words.size() < 2) inapplicable(PerturbationKind::MissingWords, "fewer than two words");
  words.erase(words.begin() + static_cast<std::ptrdiff_t>(rng.below(words.size())));
  return join(words);
}

std::string extra_words(std::string_view message, SplitMix64& rng, const PerturbationParams& params) {
  if (params.extra_words.empty()) inapplicable(PerturbationKind::ExtraWords, "no extra words configured");
  auto words = split_ws(message);
  if (words.empty()) inapplicable(PerturbationKind::ExtraWords, "empty message");
  std::string_view extra = params.extra_words[rng.below(params.extra_words.size())];
  if (rng.below(2) == 0) {
    words.insert(words.begin(), extra);
  } else {
    words.push_back(extra);
  }
  return join(words);
}

}  // namespace

std::string perturb(std::string_view message, const Perturbation& p) {
  if (message.empty()) throw Error(ErrorCode::InvalidArgument, "empty message");
  SplitMix64 rng(mix_seed(p.seed, static_cast<std::uint64_t>(p.kind) + 1));
  switch (p.kind) {
    case PerturbationKind::ParamChange: return param_change(message, rng);
    case PerturbationKind::Typo: return typo(message, rng);
    case PerturbationKind::Whitespace: return whitespace(message, rng);
    case PerturbationKind::WordReorder: return word_reorder(message, rng);
    case PerturbationKind::Punctuation: return punctuation(message, rng);
    case PerturbationKind::MissingWords: return missing_words(message, rng);
    case PerturbationKind::ExtraWords: return extra_words(message, rng, p.params);
  }
  return std::string(message);
}

namespace {

struct SampleOutcome {
  bool applicable = false;
  bool exact = false;
  bool extractor_error = false;
  double similarity = 0.0;
  double lev = 0.0;
  double wer = 0.0;
  std::string gold;
  std::string extracted;
};

double safe_wer(std::string_view ref, std::string_view hyp) {
  try {
    return word_error_rate(ref, hyp);
  } catch (const Error&) {
    return wer_tokens(hyp).empty() ? 0.0 : 1.0;
  }
}

}  // namespace

std::vector<RobustnessRow> evaluate(const CompiledTemplateSet& gold, std::span<const std::string> messages,
                                    const PatternExtractor& extractor, const EvaluateOptions& options) {
  std::vector<const LogTemplate*> gold_of(messages.size());
  for (std::size_t i = 0; i < messages.size(); ++i) {
    auto m = gold.match(messages[i]);
    if (!m) throw Error(ErrorCode::InvalidArgument, "message matches no gold template: " + messages[i]);
    gold_of[i] = &gold.templates()[m->template_index];
  }

  std::vector<RobustnessRow> rows;
  for (PerturbationKind kind : options.kinds) {
    std::vector<SampleOutcome> outcomes(messages.size());
    parallel_chunks(messages.size(), options.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        SampleOutcome& out = outcomes[i];
        RobustnessSample sample;
        sample.original_message = messages[i];
        sample.gold = gold_of[i];
        sample.perturbation = {kind, mix_seed(options.seed, i), options.params};
        try {
          sample.perturbed_message = perturb(messages[i], sample.perturbation);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::Inapplicable) throw;
          continue;
        }
        out.applicable = true;
        out.gold = sample.gold->raw();
        try {
          out.extracted = extractor(sample);
        } catch (const std::exception&) {
          out.extractor_error = true;
          out.extracted.clear();
        }
        out.exact = !out.extractor_error && out.extracted == out.gold;
        out.similarity = avg_similarity(out.gold, out.extracted);
        if (out.extracted.empty()) out.similarity = 0.0;
        if (options.message_level) {
          out.lev = levenshtein_norm(sample.original_message, sample.perturbed_message);
          out.wer = safe_wer(sample.original_message, sample.perturbed_message);
        } else {
          out.lev = levenshtein_norm(out.gold, out.extracted);
          out.wer = safe_wer(out.gold, out.extracted);
        }
      }
    });

    RobustnessRow row;
    row.kind = kind;
    double sim = 0.0, lev = 0.0, wer = 0.0;
    for (const SampleOutcome& o : outcomes) {
      if (!o.applicable) {
        ++row.inapplicable;
        continue;
      }
      ++row.sample_count;
      row.exact_matches += o.exact ? 1 : 0;
      row.extractor_errors += o.extractor_error ? 1 : 0;
      sim += o.similarity;
      lev += o.lev;
      wer += o.wer;
      if (!o.exact && row.failure_examples.size() < options.max_failure_examples) {
        row.failure_examples.emplace_back(o.gold, o.extracted);
      }
    }
    if (row.sample_count > 0) {
      const double n = static_cast<double>(row.sample_count);
      row.accuracy_pct = 100.0 * static_cast<double>(row.exact_matches) / n;
      row.avg_similarity = sim / n;
      row.levenshtein_norm = lev / n;
      row.wer_pct = 100.0 * wer / n;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

PatternExtractor make_heuristic_extractor(const CompiledTemplateSet& gold) {
  return [&gold](const RobustnessSample& s) -> std::string {
    if (auto m = gold.match(s.perturbed_message)) return gold.templates()[m->template_index].raw();
    SignatureGroup g;
    g.signature = make_signature(s.perturbed_message);
    g.member_count = 1;
    RawLogRecord r;
    r.line_no = 1;
    r.message = s.perturbed_message;
    g.representatives.push_back(std::move(r));
    return heuristic_templates(g).front().raw();
  };
}

}  // namespace logsift
