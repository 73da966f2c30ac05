#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "logsift/error.hpp"

namespace logsift {

/// One ingested log line.
struct RawLogRecord {
  std::uint64_t line_no = 0;                 // 1-based physical line
  std::optional<std::int64_t> timestamp_ns;  // UTC epoch nanoseconds
  std::optional<std::string> host;
  std::string message;
  std::optional<std::string> source_file;
};

struct Literal {
  std::string text;
  bool operator==(const Literal&) const = default;
};

struct Placeholder {
  std::string name;
  bool operator==(const Placeholder&) const = default;
};

using Token = std::variant<Literal, Placeholder>;

/// A log pattern mixing literal text and `<name>` placeholders.
///
/// Literal `<` and `\` are written `\<` and `\\` in the canonical form. Runs
/// of whitespace collapse to one space and the ends are trimmed, so two
/// templates that differ only in spacing share an id.
class LogTemplate {
 public:
  /// Throws Error{MalformedPlaceholder | AdjacentPlaceholders | InvalidArgument}.
  static LogTemplate parse(std::string_view raw);

  /// Builds from tokens; validates the same invariants as parse().
  static LogTemplate from_tokens(std::vector<Token> tokens);

  const std::vector<Token>& tokens() const noexcept { return tokens_; }
  const std::string& raw() const noexcept { return raw_; }
  const std::string& id() const noexcept { return id_; }

  std::vector<std::string> placeholder_names() const;

  bool operator==(const LogTemplate& other) const { return raw_ == other.raw_; }

 private:
  LogTemplate() = default;
  std::vector<Token> tokens_;
  std::string raw_;
  std::string id_;
};

inline LogTemplate parse_template(std::string_view raw) { return LogTemplate::parse(raw); }

/// Canonical string form of a token sequence (inverse of parse).
std::string render(const std::vector<Token>& tokens);

/// Escapes `<` and `\` so that arbitrary text parses back as one literal.
std::string escape_literal(std::string_view text);

bool is_valid_placeholder_name(std::string_view name);

/// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t value);

/// Splits on runs of spaces and tabs.
std::vector<std::string_view> split_ws(std::string_view text);

bool is_space(char c) noexcept;

// ---------------------------------------------------------------------------
// Severity

enum class Severity : std::uint8_t {
  Info,
  Warning,
  Error,
  DiskError,
  HardwareError,
  CriticalFatal,
  KernelPanicCrash,
  Unknown,
};

inline constexpr std::array<Severity, 8> kAllSeverities = {
    Severity::Info,          Severity::Warning,       Severity::Error,
    Severity::DiskError,     Severity::HardwareError, Severity::CriticalFatal,
    Severity::KernelPanicCrash, Severity::Unknown};

/// Reporting rank. ERROR and DISK_ERROR share a rank; UNKNOWN sorts last.
int severity_rank(Severity s) noexcept;

/// Total order used for sorting: rank first, then enum order.
bool severity_less(Severity a, Severity b) noexcept;

/// Machine name, e.g. "DISK_ERROR".
std::string_view severity_name(Severity s) noexcept;

/// Display name, e.g. "DISK ERROR", "KERNEL PANIC/CRASH".
std::string_view severity_label(Severity s) noexcept;

std::optional<Severity> severity_from_name(std::string_view name);

/// Case-insensitive substring rules, evaluated in fixed priority order
/// KERNEL_PANIC_CRASH > CRITICAL_FATAL > HARDWARE_ERROR > DISK_ERROR > ERROR >
/// WARNING > INFO. Nothing matches -> UNKNOWN.
class SeverityRules {
 public:
  /// Rule file: `SEVERITY<TAB>substring` per line, `#` comments.
  static SeverityRules parse(std::string_view text);
  static SeverityRules load(const std::string& path);
  static const SeverityRules& defaults();

  Severity classify(std::string_view message) const;

  std::size_t size() const noexcept;
  const std::vector<std::string>& substrings(Severity s) const;

 private:
  // Indexed by Severity; UNKNOWN slot stays empty.
  std::array<std::vector<std::string>, 8> rules_;
};

inline Severity classify_severity(std::string_view message) {
  return SeverityRules::defaults().classify(message);
}

/// Parsed log line bound to a template.
struct ParsedEvent {
  const RawLogRecord* record = nullptr;
  std::string template_id;
  // In template order; a repeated placeholder name appears once per use.
  std::vector<std::pair<std::string, std::string>> variables;
  Severity severity = Severity::Unknown;
};

/// Re-substitutes variables into the template.
std::string substitute(const LogTemplate& tmpl,
                       const std::vector<std::pair<std::string, std::string>>& variables);

std::string to_lower(std::string_view text);

}  // namespace logsift
