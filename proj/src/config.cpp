#include "logsift/config.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <type_traits>

#include "logsift/error.hpp"

namespace logsift {

namespace {

std::string trim(std::string_view s) {
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T to_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    T v{};
    if constexpr (std::is_floating_point_v<T>) {
      v = static_cast<T>(std::stod(value, &used));
    } else if constexpr (std::is_signed_v<T>) {
      v = static_cast<T>(std::stoll(value, &used));
    } else {
      if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
      v = static_cast<T>(std::stoull(value, &used));
    }
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "config key '" + key + "' expects a number, got '" + value + "'");
  }
}

}  // namespace

std::optional<TemplateMode> mode_from_string(std::string_view s) {
  if (s == "heuristic") return TemplateMode::Heuristic;
  if (s == "llm") return TemplateMode::Llm;
  return std::nullopt;
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::string section;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": unterminated section header");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": empty key");
    out[section.empty() ? key : section + "." + key] = trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "pipeline.inputs") {
      cfg.inputs.clear();
      std::size_t p = 0;
      while (p <= value.size()) {
        const std::size_t c = value.find(',', p);
        std::string item = trim(std::string_view(value).substr(p, c == std::string::npos ? std::string::npos : c - p));
        if (!item.empty()) cfg.inputs.push_back(std::move(item));
        if (c == std::string::npos) break;
        p = c + 1;
      }
    } else if (key == "pipeline.templates") {
      cfg.templates_path = value;
    } else if (key == "pipeline.n_samples") {
      cfg.n_samples = to_number<std::size_t>(key, value);
    } else if (key == "pipeline.seed") {
      cfg.seed = to_number<std::uint64_t>(key, value);
    } else if (key == "pipeline.window_s") {
      cfg.window_s = to_number<std::int64_t>(key, value);
    } else if (key == "pipeline.output_dir") {
      cfg.output_dir = value;
    } else if (key == "pipeline.mode") {
      auto m = mode_from_string(value);
      if (!m) throw Error(ErrorCode::InvalidArgument, "pipeline.mode must be llm or heuristic");
      cfg.mode = *m;
    } else if (key == "pipeline.threads") {
      cfg.threads = to_number<unsigned>(key, value);
    } else if (key == "llm.base_url") {
      cfg.llm.base_url = value;
    } else if (key == "llm.model") {
      cfg.llm.model_name = value;
    } else if (key == "llm.temperature") {
      cfg.llm.temperature = to_number<double>(key, value);
    } else if (key == "llm.max_tokens") {
      cfg.llm.max_tokens = to_number<int>(key, value);
    } else if (key == "llm.timeout_s") {
      cfg.llm.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(to_number<double>(key, value) * 1000));
    } else if (key == "llm.max_concurrent_requests") {
      cfg.llm.max_concurrent_requests = to_number<unsigned>(key, value);
    } else if (key == "llm.retry_limit") {
      cfg.llm.retry_limit = to_number<unsigned>(key, value);
    } else if (key == "llm.backoff_ms") {
      cfg.llm.backoff_base = std::chrono::milliseconds(to_number<std::int64_t>(key, value));
    } else if (key == "llm.token") {
      if (!value.empty()) cfg.llm.bearer_token = value;
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    }
  }
}

void apply_env(RunConfig& cfg) {
  if (const char* url = std::getenv("LOGSIFT_LLM_URL"); url && *url) cfg.llm.base_url = url;
  if (const char* token = std::getenv("LOGSIFT_LLM_TOKEN"); token && *token) cfg.llm.bearer_token = token;
}

void RunConfig::validate() const {
  for (const std::string& p : inputs) {
    if (p != "-" && !std::filesystem::is_regular_file(p)) {
      throw Error(ErrorCode::Io, "input '" + p + "' does not exist or is not a file");
    }
  }
  if (templates_path && !std::filesystem::is_regular_file(*templates_path)) {
    throw Error(ErrorCode::Io, "templates file '" + *templates_path + "' does not exist");
  }
  if (n_samples == 0) throw Error(ErrorCode::InvalidArgument, "n_samples must be at least 1");
  if (window_s <= 0) throw Error(ErrorCode::InvalidArgument, "window_s must be positive");
  if (mode == TemplateMode::Llm) llm.validate();
}

}  // namespace logsift
