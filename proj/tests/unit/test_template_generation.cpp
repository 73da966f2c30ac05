#include <doctest.h>

#include "logsift/matcher.hpp"
#include "logsift/template_generation.hpp"

using namespace logsift;

namespace {

SignatureGroup group_of(const std::vector<std::string>& messages) {
  SignatureGroup g;
  g.signature = make_signature(messages.front());
  g.member_count = messages.size();
  for (std::size_t i = 0; i < messages.size(); ++i) {
    RawLogRecord r;
    r.line_no = i + 1;
    r.message = messages[i];
    g.representatives.push_back(std::move(r));
  }
  return g;
}

}  // namespace

TEST_CASE("prompt has the three sections in order") {
  auto spec = PromptSpec::defaults();
  spec.example_logs = {"a 1", "a 2", "a 3"};
  spec.max_examples = 2;
  const std::string p = render_prompt(spec);
  const auto logs = p.find("### Example Logs");
  const auto inst = p.find("### Instructions");
  const auto cot = p.find("### Reasoning Directive");
  REQUIRE(logs != std::string::npos);
  CHECK(logs < inst);
  CHECK(inst < cot);
  CHECK(p.find("1. a 1\n2. a 2\n") != std::string::npos);
  CHECK(p.find("a 3") == std::string::npos);
  CHECK(p.find(output_contract()) != std::string::npos);
}

TEST_CASE("invalid prompt specs are rejected") {
  auto spec = PromptSpec::defaults();
  spec.example_logs = {"x"};
  auto bad = [&](auto mutate) {
    PromptSpec s = spec;
    mutate(s);
    try {
      render_prompt(s);
    } catch (const Error& e) {
      return e.code() == ErrorCode::InvalidPromptSpec;
    }
    return false;
  };
  CHECK(bad([](PromptSpec& s) { s.instructions = "  "; }));
  CHECK(bad([](PromptSpec& s) { s.cot_directive.clear(); }));
  CHECK(bad([](PromptSpec& s) { s.max_examples = 0; }));
  CHECK(bad([](PromptSpec& s) { s.example_logs.clear(); }));
}

TEST_CASE("build_prompt is a pure function of group and spec") {
  auto g = group_of({"job 1 ok", "job 2 ok"});
  auto spec = PromptSpec::defaults();
  CHECK(build_prompt(g, spec) == build_prompt(g, spec));
  CHECK(build_prompt(g, spec).find("2. job 2 ok") != std::string::npos);
}

TEST_CASE("the last closed fenced block is parsed") {
  const std::string response =
      "Reasoning: position 2 varies.\n```\nignored <x>\n```\nSo the answer:\n"
      "```text\nuser <name> logged in\n\nuser <name> logged in\nbad <Name>\nstate <a><b>\n```\n";
  auto r = extract_templates(response);
  REQUIRE(r.templates.size() == 1);
  CHECK(r.templates[0].raw() == "user <name> logged in");
  REQUIRE(r.errors.size() == 2);
  CHECK(r.errors[0].line == 10);
  CHECK(r.errors[0].code == ErrorCode::MalformedPlaceholder);
  CHECK(r.errors[1].line == 11);
  CHECK(r.errors[1].code == ErrorCode::AdjacentPlaceholders);
}

TEST_CASE("no closed block is an error") {
  CHECK_THROWS_AS(extract_templates("just prose"), Error);
  try {
    extract_templates("```\nopen <x>\n");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoTemplateBlock);
  }
}

TEST_CASE("heuristic templates cover their representatives") {
  auto g = group_of({"job 17 finished on nid001 state=ok", "job 9 finished on nid044 state=ok",
                     "job 123 finished on nid001 state=ok"});
  auto ts = heuristic_templates(g);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].raw() == "job <v1> finished on <v2> state=ok");
  auto set = CompiledTemplateSet::compile(ts);
  for (const auto& r : g.representatives) CHECK(set.match(r.message).has_value());
}

TEST_CASE("heuristic keeps punctuation around masked values") {
  auto g = group_of({"tx nic (42) pid=7"});
  auto ts = heuristic_templates(g);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].raw() == "tx nic (<v1>) pid=<v2>");
}

TEST_CASE("heuristic falls back to verbatim lines on ragged groups") {
  auto g = group_of({"a b", "a b c"});
  g.signature.masked_form = "a b";
  auto ts = heuristic_templates(g);
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].placeholder_names().empty());
}

TEST_CASE("chat request and response bodies") {
  LlmEndpointConfig cfg;
  cfg.model_name = "m1";
  cfg.temperature = 0.5;
  const std::string body = make_chat_request("hi", cfg);
  CHECK(body.find("\"model\":\"m1\"") != std::string::npos);
  CHECK(body.find("\"content\":\"hi\"") != std::string::npos);
  CHECK(parse_chat_response(R"({"choices":[{"message":{"content":"ok"}}]})") == "ok");
  CHECK(parse_chat_response(R"({"choices":[{"text":"legacy"}]})") == "legacy");
  CHECK_THROWS_AS(parse_chat_response("not json"), Error);
  CHECK_THROWS_AS(parse_chat_response(R"({"choices":[]})"), Error);
}

TEST_CASE("endpoint config validation") {
  LlmEndpointConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.temperature = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.temperature = 0;
  cfg.max_concurrent_requests = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
