#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logsift/template_generation.hpp"

namespace logsift {

enum class TemplateMode { Heuristic, Llm };

struct RunConfig {
  std::vector<std::string> inputs;
  std::optional<std::string> templates_path;
  LlmEndpointConfig llm;
  std::size_t n_samples = 5;
  std::uint64_t seed = 42;
  std::int64_t window_s = 300;
  std::optional<std::string> output_dir;
  TemplateMode mode = TemplateMode::Heuristic;
  unsigned threads = 0;  // 0 = all cores

  /// Checks that every input path exists (`-` is standard input) and that
  /// the endpoint is well formed in LLM mode. Throws Error{Io} or
  /// Error{InvalidArgument}.
  void validate() const;
};

/// `[section]` headers and `key = value` lines, `#` or `;` comments. Keys
/// are flattened to `section.key`.
std::map<std::string, std::string> parse_config_text(std::string_view text);

/// Applies known keys onto `cfg`; unknown keys raise Error{InvalidArgument}.
///
///   [pipeline] inputs (comma separated), templates, n_samples, seed,
///              window_s, output_dir, mode, threads
///   [llm]      base_url, model, temperature, max_tokens, timeout_s,
///              max_concurrent_requests, retry_limit, backoff_ms, token
void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& entries);

/// LOGSIFT_LLM_URL and LOGSIFT_LLM_TOKEN.
void apply_env(RunConfig& cfg);

std::optional<TemplateMode> mode_from_string(std::string_view s);

}  // namespace logsift
