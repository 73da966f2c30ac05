#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace logsift {

enum class ErrorCode {
  InvalidArgument,
  MalformedPlaceholder,
  AdjacentPlaceholders,
  EmptyInput,
  InvalidPromptSpec,
  NoTemplateBlock,
  Timeout,
  HttpStatus,
  MalformedResponse,
  EmptyTemplateSet,
  Inapplicable,
  EmptyReference,
  NoTimestamps,
  OverlappingAllocations,
  EmptyMatrix,
  ShapeMismatch,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code);

// Every library failure surfaces as this exception; `code()` lets callers
// branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, int http_status = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        http_status_(http_status) {}

  ErrorCode code() const noexcept { return code_; }

  // Status of a failed endpoint call; 0 when no HTTP response arrived.
  int http_status() const noexcept { return http_status_; }

  // True for failures talking to the model endpoint (CLI exit code 3).
  bool is_endpoint_error() const noexcept {
    return code_ == ErrorCode::Timeout || code_ == ErrorCode::HttpStatus ||
           code_ == ErrorCode::MalformedResponse;
  }

 private:
  ErrorCode code_;
  int http_status_;
};

}  // namespace logsift
