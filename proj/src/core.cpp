#include "logsift/core.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "logsift_embedded_data.hpp"

namespace logsift {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedPlaceholder: return "MalformedPlaceholder";
    case ErrorCode::AdjacentPlaceholders: return "AdjacentPlaceholders";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidPromptSpec: return "InvalidPromptSpec";
    case ErrorCode::NoTemplateBlock: return "NoTemplateBlock";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::HttpStatus: return "HttpStatus";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::EmptyTemplateSet: return "EmptyTemplateSet";
    case ErrorCode::Inapplicable: return "Inapplicable";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::NoTimestamps: return "NoTimestamps";
    case ErrorCode::OverlappingAllocations: return "OverlappingAllocations";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < n && !is_space(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}

bool is_valid_placeholder_name(std::string_view name) {
  if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string escape_literal(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '<' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string render(const std::vector<Token>& tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (const auto* lit = std::get_if<Literal>(&t)) {
      out += escape_literal(lit->text);
    } else {
      out += '<';
      out += std::get<Placeholder>(t).name;
      out += '>';
    }
  }
  return out;
}

namespace {

// Appends literal text, collapsing whitespace runs to one space.
void append_literal(std::vector<Token>& tokens, std::string_view text) {
  if (text.empty()) return;
  if (tokens.empty() || !std::holds_alternative<Literal>(tokens.back())) {
    tokens.emplace_back(Literal{});
  }
  std::string& dst = std::get<Literal>(tokens.back()).text;
  for (char c : text) {
    if (is_space(c) || c == '\n') {
      if (dst.empty() || dst.back() != ' ') dst.push_back(' ');
    } else {
      dst.push_back(c);
    }
  }
}

// Trims leading/trailing spaces and drops literals that become empty.
void trim_tokens(std::vector<Token>& tokens) {
  if (!tokens.empty()) {
    if (auto* lit = std::get_if<Literal>(&tokens.front())) {
      std::size_t k = lit->text.find_first_not_of(' ');
      lit->text.erase(0, k == std::string::npos ? lit->text.size() : k);
      if (lit->text.empty()) tokens.erase(tokens.begin());
    }
  }
  if (!tokens.empty()) {
    if (auto* lit = std::get_if<Literal>(&tokens.back())) {
      std::size_t k = lit->text.find_last_not_of(' ');
      lit->text.erase(k == std::string::npos ? 0 : k + 1);
      if (lit->text.empty()) tokens.pop_back();
    }
  }
}

void check_tokens(const std::vector<Token>& tokens) {
  if (tokens.empty()) throw Error(ErrorCode::InvalidArgument, "empty template");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (const auto* ph = std::get_if<Placeholder>(&tokens[i])) {
      if (!is_valid_placeholder_name(ph->name)) {
        throw Error(ErrorCode::MalformedPlaceholder, "illegal placeholder name '" + ph->name + "'");
      }
      if (i + 1 < tokens.size() && std::holds_alternative<Placeholder>(tokens[i + 1])) {
        throw Error(ErrorCode::AdjacentPlaceholders,
                    "<" + ph->name + "><" + std::get<Placeholder>(tokens[i + 1]).name + ">");
      }
    } else if (std::get<Literal>(tokens[i]).text.empty()) {
      throw Error(ErrorCode::InvalidArgument, "empty literal token");
    }
  }
}

}  // namespace

LogTemplate LogTemplate::parse(std::string_view raw) {
  std::vector<Token> tokens;
  std::string pending;
  const std::size_t n = raw.size();
  std::size_t i = 0;
  while (i < n) {
    char c = raw[i];
    if (c == '\\' && i + 1 < n && (raw[i + 1] == '<' || raw[i + 1] == '\\')) {
      pending.push_back(raw[i + 1]);
      i += 2;
    } else if (c == '<') {
      std::size_t close = raw.find('>', i + 1);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::MalformedPlaceholder,
                    "unclosed '<' at offset " + std::to_string(i));
      }
      std::string_view name = raw.substr(i + 1, close - i - 1);
      if (!is_valid_placeholder_name(name)) {
        throw Error(ErrorCode::MalformedPlaceholder,
                    "illegal placeholder name '" + std::string(name) + "' at offset " +
                        std::to_string(i));
      }
      append_literal(tokens, pending);
      pending.clear();
      if (!tokens.empty() && std::holds_alternative<Placeholder>(tokens.back())) {
        throw Error(ErrorCode::AdjacentPlaceholders,
                    "<" + std::get<Placeholder>(tokens.back()).name + "><" + std::string(name) + ">");
      }
      tokens.emplace_back(Placeholder{std::string(name)});
      i = close + 1;
    } else {
      pending.push_back(c);
      ++i;
    }
  }
  append_literal(tokens, pending);
  return from_tokens(std::move(tokens));
}

LogTemplate LogTemplate::from_tokens(std::vector<Token> tokens) {
  std::vector<Token> normalized;
  normalized.reserve(tokens.size());
  for (Token& tok : tokens) {
    if (auto* lit = std::get_if<Literal>(&tok)) {
      append_literal(normalized, lit->text);
    } else {
      normalized.push_back(std::move(tok));
    }
  }
  trim_tokens(normalized);
  check_tokens(normalized);
  LogTemplate t;
  t.tokens_ = std::move(normalized);
  t.raw_ = render(t.tokens_);
  t.id_ = hex64(fnv1a64(t.raw_));
  return t;
}

std::vector<std::string> LogTemplate::placeholder_names() const {
  std::vector<std::string> names;
  for (const Token& t : tokens_) {
    if (const auto* ph = std::get_if<Placeholder>(&t)) names.push_back(ph->name);
  }
  return names;
}

std::string substitute(const LogTemplate& tmpl,
                       const std::vector<std::pair<std::string, std::string>>& variables) {
  std::string out;
  std::size_t next = 0;
  for (const Token& t : tmpl.tokens()) {
    if (const auto* lit = std::get_if<Literal>(&t)) {
      out += lit->text;
    } else {
      if (next >= variables.size()) {
        throw Error(ErrorCode::InvalidArgument, "too few variables for template " + tmpl.raw());
      }
      out += variables[next++].second;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

int severity_rank(Severity s) noexcept {
  switch (s) {
    case Severity::Info: return 0;
    case Severity::Warning: return 1;
    case Severity::Error:
    case Severity::DiskError: return 2;
    case Severity::HardwareError: return 3;
    case Severity::CriticalFatal: return 4;
    case Severity::KernelPanicCrash: return 5;
    case Severity::Unknown: return 6;
  }
  return 6;
}

bool severity_less(Severity a, Severity b) noexcept {
  int ra = severity_rank(a), rb = severity_rank(b);
  if (ra != rb) return ra < rb;
  return static_cast<int>(a) < static_cast<int>(b);
}

std::string_view severity_name(Severity s) noexcept {
  switch (s) {
    case Severity::Info: return "INFO";
    case Severity::Warning: return "WARNING";
    case Severity::Error: return "ERROR";
    case Severity::DiskError: return "DISK_ERROR";
    case Severity::HardwareError: return "HARDWARE_ERROR";
    case Severity::CriticalFatal: return "CRITICAL_FATAL";
    case Severity::KernelPanicCrash: return "KERNEL_PANIC_CRASH";
    case Severity::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::string_view severity_label(Severity s) noexcept {
  switch (s) {
    case Severity::Info: return "INFO";
    case Severity::Warning: return "WARNING";
    case Severity::Error: return "ERROR";
    case Severity::DiskError: return "DISK ERROR";
    case Severity::HardwareError: return "HARDWARE ERROR";
    case Severity::CriticalFatal: return "CRITICAL/FATAL";
    case Severity::KernelPanicCrash: return "KERNEL PANIC/CRASH";
    case Severity::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::optional<Severity> severity_from_name(std::string_view name) {
  for (Severity s : kAllSeverities) {
    if (severity_name(s) == name) return s;
  }
  return std::nullopt;
}

SeverityRules SeverityRules::parse(std::string_view text) {
  SeverityRules rules;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::Parse, "severity rules line " + std::to_string(line_no) +
                                        ": expected SEVERITY<TAB>substring");
    }
    auto sev = severity_from_name(line.substr(0, tab));
    if (!sev || *sev == Severity::Unknown) {
      throw Error(ErrorCode::Parse, "severity rules line " + std::to_string(line_no) +
                                        ": unknown severity '" + std::string(line.substr(0, tab)) + "'");
    }
    std::string needle = to_lower(line.substr(tab + 1));
    if (needle.empty()) {
      throw Error(ErrorCode::Parse, "severity rules line " + std::to_string(line_no) + ": empty substring");
    }
    rules.rules_[static_cast<std::size_t>(*sev)].push_back(std::move(needle));
  }
  return rules;
}

SeverityRules SeverityRules::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open severity rules '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const SeverityRules& SeverityRules::defaults() {
  static const SeverityRules rules = parse(embedded::kSeverityRules);
  return rules;
}

Severity SeverityRules::classify(std::string_view message) const {
  static constexpr std::array<Severity, 7> kPriority = {
      Severity::KernelPanicCrash, Severity::CriticalFatal, Severity::HardwareError,
      Severity::DiskError,        Severity::Error,         Severity::Warning,
      Severity::Info};
  if (message.empty()) return Severity::Unknown;
  const std::string lower = to_lower(message);
  for (Severity s : kPriority) {
    for (const std::string& needle : rules_[static_cast<std::size_t>(s)]) {
      if (lower.find(needle) != std::string::npos) return s;
    }
  }
  return Severity::Unknown;
}

std::size_t SeverityRules::size() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rules_) n += r.size();
  return n;
}

const std::vector<std::string>& SeverityRules::substrings(Severity s) const {
  return rules_[static_cast<std::size_t>(s)];
}

}  // namespace logsift
