#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logsift/core.hpp"
#include "logsift/signature.hpp"

namespace logsift {

/// The three prompt sections, in render order: example logs, instructions,
/// reasoning directive.
struct PromptSpec {
  std::vector<std::string> example_logs;
  std::string instructions;
  std::string cot_directive;
  std::size_t max_examples = 5;

  /// Default instruction and reasoning text with no examples.
  static PromptSpec defaults();
};

/// Output contract appended to every reasoning directive: the answer must end
/// with one fenced block holding one template per line.
std::string_view output_contract();

/// Renders a spec. Throws Error{InvalidPromptSpec} on empty instructions,
/// empty directive, max_examples == 0 or no examples.
std::string render_prompt(const PromptSpec& spec);

/// Fills `spec.example_logs` from the group's representatives (first
/// max_examples) and renders. Pure function of (group, spec).
std::string build_prompt(const SignatureGroup& group, const PromptSpec& spec);

struct TemplateLineError {
  std::size_t line = 0;  // 1-based line within the response text
  ErrorCode code = ErrorCode::MalformedPlaceholder;
  std::string message;
};

struct ExtractionResult {
  std::vector<LogTemplate> templates;  // valid lines, deduplicated, in order
  std::vector<TemplateLineError> errors;
};

/// Parses the last complete fenced block of a model response. Prose before
/// it is ignored. Bad lines are reported in `errors` without discarding the
/// good ones. Throws Error{NoTemplateBlock} when no closed block exists.
ExtractionResult extract_templates(std::string_view response);

/// Offline oracle standing in for the model. Positions where the sampled
/// representatives disagree, or where the group's masked form holds a
/// variable marker, become placeholders <v1>, <v2>, ... left to right; the
/// rest stays literal. Representatives with unequal token counts fall back
/// to one verbatim template each.
std::vector<LogTemplate> heuristic_templates(const SignatureGroup& group);

// ---------------------------------------------------------------------------
// Model endpoint

struct LlmEndpointConfig {
  std::string base_url = "http://127.0.0.1:8000/v1";
  std::string model_name = "default";
  double temperature = 0.0;
  int max_tokens = 2048;
  std::chrono::milliseconds timeout{120'000};
  unsigned max_concurrent_requests = 1;
  unsigned retry_limit = 3;
  std::chrono::milliseconds backoff_base{1000};
  std::optional<std::string> bearer_token;

  /// Throws Error{InvalidArgument} on out-of-range fields.
  void validate() const;
};

/// JSON request body sent to the chat-completions endpoint.
std::string make_chat_request(std::string_view prompt, const LlmEndpointConfig& cfg);

/// First choice's text from a chat-completions response body.
/// Throws Error{MalformedResponse}.
std::string parse_chat_response(std::string_view body);

/// POSTs the prompt and returns the model text. Retries timeouts, connection
/// failures, 429 and 5xx up to retry_limit times with jittered exponential
/// backoff. Throws Error{Timeout | HttpStatus | MalformedResponse}.
std::string request_templates(std::string_view prompt, const LlmEndpointConfig& cfg);

struct GroupTemplates {
  std::vector<LogTemplate> templates;
  std::vector<TemplateLineError> line_errors;
  std::optional<ErrorCode> failure;  // request or NoTemplateBlock failure
  std::string failure_message;
};

/// Stage 2 over many groups with at most cfg.max_concurrent_requests calls in
/// flight. Results are in group order. Per-group failures are recorded, not
/// thrown.
std::vector<GroupTemplates> generate_llm_templates(const std::vector<SignatureGroup>& groups,
                                                   const PromptSpec& spec,
                                                   const LlmEndpointConfig& cfg);

}  // namespace logsift
