#include "logsift/template_generation.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>
#include <unordered_set>

#include <httplib.h>
#include <json.hpp>

namespace logsift {

using nlohmann::json;

namespace {

constexpr std::string_view kDefaultInstructions =
    "The example log messages above were produced by the same logging statement(s). "
    "Identify which parts are constant text and which parts are variable values. "
    "Keep constant words and punctuation exactly as written. Replace every variable "
    "value (numbers, identifiers, node or host names, addresses, paths, timestamps) "
    "with a short descriptive placeholder such as <pid>, <node>, <addr> or <ts>. "
    "A placeholder stands for one value containing no whitespace. Produce the fewest "
    "templates that together cover every example.";

constexpr std::string_view kDefaultDirective =
    "Think step by step before answering: compare the examples token by token, decide "
    "which positions vary and what each variable means, then write the templates.";

constexpr std::string_view kOutputContract =
    "After your reasoning, finish with exactly one fenced code block (```) containing "
    "only the templates, one per line. Write each variable as <name> where name uses "
    "lowercase letters, digits and underscores and starts with a letter. Always keep "
    "literal text between two placeholders. Write a literal '<' as '\\<'.";

bool is_fence(std::string_view line) {
  std::size_t first = line.find_first_not_of(" \t");
  return first != std::string_view::npos && line.substr(first, 3) == "```";
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (is_space(s[b]) || s[b] == '\n')) ++b;
  while (e > b && (is_space(s[e - 1]) || s[e - 1] == '\n')) --e;
  return s.substr(b, e - b);
}

void push_literal(std::vector<Token>& tokens, std::string_view text) {
  if (text.empty()) return;
  if (!tokens.empty()) {
    if (auto* lit = std::get_if<Literal>(&tokens.back())) {
      lit->text += text;
      return;
    }
  }
  tokens.emplace_back(Literal{std::string(text)});
}

// Position and length of the variable marker inside a masked word.
std::optional<std::pair<std::size_t, std::size_t>> find_marker(std::string_view word) {
  for (MaskClass c : {MaskClass::Path, MaskClass::Num, MaskClass::Hex, MaskClass::Ts, MaskClass::Ip}) {
    std::string_view m = mask_marker(c);
    if (std::size_t pos = word.find(m); pos != std::string_view::npos) {
      return std::make_pair(pos, m.size());
    }
  }
  return std::nullopt;
}

}  // namespace

PromptSpec PromptSpec::defaults() {
  PromptSpec spec;
  spec.instructions = std::string(kDefaultInstructions);
  spec.cot_directive = std::string(kDefaultDirective);
  return spec;
}

std::string_view output_contract() { return kOutputContract; }

std::string render_prompt(const PromptSpec& spec) {
  if (trim(spec.instructions).empty()) throw Error(ErrorCode::InvalidPromptSpec, "empty instructions");
  if (trim(spec.cot_directive).empty()) throw Error(ErrorCode::InvalidPromptSpec, "empty reasoning directive");
  if (spec.max_examples == 0) throw Error(ErrorCode::InvalidPromptSpec, "max_examples must be >= 1");
  if (spec.example_logs.empty()) throw Error(ErrorCode::InvalidPromptSpec, "no example logs");

  std::string out;
  out += "### Example Logs\n";
  const std::size_t n = std::min(spec.max_examples, spec.example_logs.size());
  for (std::size_t i = 0; i < n; ++i) {
    out += std::to_string(i + 1);
    out += ". ";
    out += spec.example_logs[i];
    out += '\n';
  }
  out += "\n### Instructions\n";
  out += trim(spec.instructions);
  out += "\n\n### Reasoning Directive\n";
  out += trim(spec.cot_directive);
  out += '\n';
  out += kOutputContract;
  out += '\n';
  return out;
}

std::string build_prompt(const SignatureGroup& group, const PromptSpec& spec) {
  if (group.representatives.empty()) {
    throw Error(ErrorCode::InvalidArgument, "group has no representatives");
  }
  PromptSpec filled = spec;
  filled.example_logs.clear();
  const std::size_t n = std::min(spec.max_examples, group.representatives.size());
  for (std::size_t i = 0; i < n; ++i) filled.example_logs.push_back(group.representatives[i].message);
  return render_prompt(filled);
}

ExtractionResult extract_templates(std::string_view response) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;  // (1-based no, text)
  std::size_t pos = 0, no = 0;
  while (pos <= response.size()) {
    std::size_t eol = response.find('\n', pos);
    if (eol == std::string_view::npos) eol = response.size();
    std::string_view line = response.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(++no, line);
    pos = eol + 1;
  }

  std::optional<std::size_t> open, block_begin, block_end;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!is_fence(lines[i].second)) continue;
    if (!open) {
      open = i;
    } else {
      block_begin = *open + 1;
      block_end = i;
      open.reset();
    }
  }
  if (!block_begin) throw Error(ErrorCode::NoTemplateBlock, "response has no closed fenced block");

  ExtractionResult result;
  std::unordered_set<std::string> seen;
  for (std::size_t i = *block_begin; i < *block_end; ++i) {
    std::string_view text = trim(lines[i].second);
    if (text.empty()) continue;
    try {
      LogTemplate t = LogTemplate::parse(text);
      if (seen.insert(t.id()).second) result.templates.push_back(std::move(t));
    } catch (const Error& e) {
      result.errors.push_back({lines[i].first, e.code(), e.what()});
    }
  }
  return result;
}

std::vector<LogTemplate> heuristic_templates(const SignatureGroup& group) {
  const auto& reps = group.representatives;
  if (reps.empty()) throw Error(ErrorCode::InvalidArgument, "group has no representatives");

  std::vector<std::vector<std::string_view>> words;
  words.reserve(reps.size());
  for (const auto& r : reps) words.push_back(split_ws(r.message));
  const std::size_t width = words.front().size();
  const bool equal_width = std::all_of(words.begin(), words.end(),
                                       [&](const auto& w) { return w.size() == width; });

  std::vector<std::string_view> masked = split_ws(group.signature.masked_form);
  const bool use_mask = !masked.empty() && masked.size() == width;

  if (!equal_width || (reps.size() < 2 && !use_mask)) {
    std::vector<LogTemplate> out;
    std::unordered_set<std::string> seen;
    for (const auto& r : reps) {
      LogTemplate t = LogTemplate::from_tokens({Literal{r.message}});
      if (seen.insert(t.id()).second) out.push_back(std::move(t));
    }
    return out;
  }

  std::vector<Token> tokens;
  int next_var = 1;
  auto placeholder = [&] { tokens.emplace_back(Placeholder{"v" + std::to_string(next_var++)}); };
  for (std::size_t pos = 0; pos < width; ++pos) {
    if (pos > 0) push_literal(tokens, " ");
    const std::string_view first = words.front()[pos];
    const bool agree = std::all_of(words.begin(), words.end(),
                                   [&](const auto& w) { return w[pos] == first; });
    auto marker = use_mask ? find_marker(masked[pos]) : std::nullopt;
    if (marker) {
      std::string_view m = masked[pos];
      push_literal(tokens, m.substr(0, marker->first));
      placeholder();
      push_literal(tokens, m.substr(marker->first + marker->second));
    } else if (agree) {
      push_literal(tokens, first);
    } else {
      placeholder();
    }
  }
  return {LogTemplate::from_tokens(std::move(tokens))};
}

// ---------------------------------------------------------------------------

void LlmEndpointConfig::validate() const {
  if (base_url.empty()) throw Error(ErrorCode::InvalidArgument, "llm base_url is empty");
  if (!(temperature >= 0.0 && temperature <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "temperature must be in [0, 1]");
  }
  if (max_tokens <= 0) throw Error(ErrorCode::InvalidArgument, "max_tokens must be positive");
  if (max_concurrent_requests == 0) {
    throw Error(ErrorCode::InvalidArgument, "max_concurrent_requests must be >= 1");
  }
  if (timeout.count() <= 0) throw Error(ErrorCode::InvalidArgument, "timeout must be positive");
}

std::string make_chat_request(std::string_view prompt, const LlmEndpointConfig& cfg) {
  json body = {
      {"model", cfg.model_name},
      {"messages", json::array({{{"role", "user"}, {"content", std::string(prompt)}}})},
      {"temperature", cfg.temperature},
      {"max_tokens", cfg.max_tokens},
  };
  return body.dump();
}

std::string parse_chat_response(std::string_view body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::MalformedResponse, "response is not JSON");
  if (!doc.is_object() || !doc.contains("choices") || !doc["choices"].is_array() ||
      doc["choices"].empty()) {
    throw Error(ErrorCode::MalformedResponse, "response has no choices");
  }
  const json& choice = doc["choices"][0];
  if (choice.contains("message") && choice["message"].is_object() &&
      choice["message"].contains("content") && choice["message"]["content"].is_string()) {
    return choice["message"]["content"].get<std::string>();
  }
  if (choice.contains("text") && choice["text"].is_string()) return choice["text"].get<std::string>();
  throw Error(ErrorCode::MalformedResponse, "first choice has no text content");
}

namespace {

struct Endpoint {
  std::string scheme_host_port;
  std::string path;
};

Endpoint split_url(const std::string& base_url) {
  std::size_t scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "base_url needs a scheme: " + base_url);
  }
  std::string scheme = base_url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::InvalidArgument, "unsupported scheme: " + scheme);
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") {
    throw Error(ErrorCode::InvalidArgument, "https endpoints need a TLS-enabled build");
  }
#endif
  std::size_t path_begin = base_url.find('/', scheme_end + 3);
  Endpoint ep;
  ep.scheme_host_port = base_url.substr(0, path_begin);
  std::string path = path_begin == std::string::npos ? "" : base_url.substr(path_begin);
  while (!path.empty() && path.back() == '/') path.pop_back();
  constexpr std::string_view kSuffix = "/chat/completions";
  if (path.size() < kSuffix.size() || path.compare(path.size() - kSuffix.size(), kSuffix.size(), kSuffix) != 0) {
    path += kSuffix;
  }
  ep.path = path;
  return ep;
}

bool retryable(const Error& e) {
  if (e.code() == ErrorCode::Timeout) return true;
  if (e.code() != ErrorCode::HttpStatus) return false;
  const int status = e.http_status();
  return status == 0 || status == 429 || status >= 500;
}

std::string post_once(const Endpoint& ep, const std::string& body, const LlmEndpointConfig& cfg) {
  httplib::Client client(ep.scheme_host_port);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (cfg.bearer_token && !cfg.bearer_token->empty()) {
    headers.emplace("Authorization", "Bearer " + *cfg.bearer_token);
  }
  auto res = client.Post(ep.path, headers, body, "application/json");
  if (!res) {
    auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      throw Error(ErrorCode::Timeout, "no response from " + ep.scheme_host_port + ep.path + " (" +
                                          httplib::to_string(err) + ")");
    }
    throw Error(ErrorCode::HttpStatus,
                httplib::to_string(err) + " for " + ep.scheme_host_port + ep.path, 0);
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::HttpStatus,
                "status " + std::to_string(res->status) + " from " + ep.scheme_host_port + ep.path,
                res->status);
  }
  return parse_chat_response(res->body);
}

}  // namespace

std::string request_templates(std::string_view prompt, const LlmEndpointConfig& cfg) {
  cfg.validate();
  const Endpoint ep = split_url(cfg.base_url);
  const std::string body = make_chat_request(prompt, cfg);
  std::mt19937_64 jitter_rng(std::random_device{}());
  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  for (unsigned attempt = 0;; ++attempt) {
    try {
      return post_once(ep, body, cfg);
    } catch (const Error& e) {
      if (attempt >= cfg.retry_limit || !retryable(e)) throw;
    }
    const double scale = static_cast<double>(1u << std::min(attempt, 16u)) * jitter(jitter_rng);
    std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(
        static_cast<double>(cfg.backoff_base.count()) * scale));
  }
}

std::vector<GroupTemplates> generate_llm_templates(const std::vector<SignatureGroup>& groups,
                                                   const PromptSpec& spec,
                                                   const LlmEndpointConfig& cfg) {
  cfg.validate();
  std::vector<GroupTemplates> results(groups.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < groups.size(); i = next++) {
      GroupTemplates& out = results[i];
      try {
        std::string response = request_templates(build_prompt(groups[i], spec), cfg);
        ExtractionResult ex = extract_templates(response);
        out.templates = std::move(ex.templates);
        out.line_errors = std::move(ex.errors);
      } catch (const Error& e) {
        out.failure = e.code();
        out.failure_message = e.what();
      }
    }
  };
  const unsigned n = std::min<std::size_t>(cfg.max_concurrent_requests, std::max<std::size_t>(groups.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace logsift
