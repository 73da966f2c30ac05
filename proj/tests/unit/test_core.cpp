#include <doctest.h>

#include <set>

#include "logsift/core.hpp"
#include "logsift/random.hpp"

using namespace logsift;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

std::string random_literal(SplitMix64& rng) {
  static const std::string alphabet = "abcxyz019 :=()[]<>\\/-_.,";
  std::string s;
  const std::size_t len = 1 + rng.below(8);
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
  return s;
}

}  // namespace

TEST_CASE("parse_template splits literals and placeholders") {
  auto t = parse_template("out of memory: killed process <pid>");
  REQUIRE(t.tokens().size() == 2);
  CHECK(std::get<Literal>(t.tokens()[0]).text == "out of memory: killed process ");
  CHECK(std::get<Placeholder>(t.tokens()[1]).name == "pid");
  CHECK(t.placeholder_names() == std::vector<std::string>{"pid"});
}

TEST_CASE("placeholder between punctuation literals") {
  auto t = parse_template("tx nic (<id>) pid");
  REQUIRE(t.tokens().size() == 3);
  CHECK(std::get<Literal>(t.tokens()[0]).text == "tx nic (");
  CHECK(std::get<Placeholder>(t.tokens()[1]).name == "id");
  CHECK(std::get<Literal>(t.tokens()[2]).text == ") pid");
}

TEST_CASE("malformed templates are rejected with specific codes") {
  CHECK(code_of([] { parse_template("<a><b>"); }) == ErrorCode::AdjacentPlaceholders);
  CHECK(code_of([] { parse_template("value <pid"); }) == ErrorCode::MalformedPlaceholder);
  CHECK(code_of([] { parse_template("value <Pid>"); }) == ErrorCode::MalformedPlaceholder);
  CHECK(code_of([] { parse_template("value <1x>"); }) == ErrorCode::MalformedPlaceholder);
  CHECK(code_of([] { parse_template("value <a b>"); }) == ErrorCode::MalformedPlaceholder);
  CHECK(code_of([] { parse_template("   "); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("whitespace is collapsed and trimmed in the canonical form") {
  auto t = parse_template("  a \t  b   <x>  c ");
  CHECK(t.raw() == "a b <x> c");
  CHECK(t == parse_template("a b <x> c"));
  CHECK(t.id() == parse_template("a b <x> c").id());
}

TEST_CASE("escaped angle bracket is a literal") {
  auto t = parse_template("cmp a \\< b at <addr>");
  REQUIRE(t.tokens().size() == 2);
  CHECK(std::get<Literal>(t.tokens()[0]).text == "cmp a < b at ");
  CHECK(t.raw() == "cmp a \\< b at <addr>");
  CHECK(escape_literal("a<b\\c") == "a\\<b\\\\c");
}

TEST_CASE("template id is FNV-1a of the canonical form") {
  // Reference values of 64-bit FNV-1a.
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  auto t = parse_template("x <y>");
  CHECK(t.id() == hex64(fnv1a64("x <y>")));
}

TEST_CASE("parse(render(T)) == T over random templates") {
  SplitMix64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<Token> tokens;
    const std::size_t n = 1 + rng.below(6);
    bool last_ph = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!last_ph && rng.below(2) == 0) {
        tokens.emplace_back(Placeholder{"v" + std::to_string(rng.below(5))});
        last_ph = true;
      } else {
        tokens.emplace_back(Literal{random_literal(rng)});
        last_ph = false;
      }
    }
    LogTemplate t = [&] {
      try {
        return LogTemplate::from_tokens(tokens);
      } catch (const Error&) {
        // Whitespace-only literal between placeholders collapses into adjacency.
        return parse_template("fallback");
      }
    }();
    LogTemplate back = LogTemplate::parse(render(t.tokens()));
    CHECK(back.tokens() == t.tokens());
    CHECK(back.raw() == t.raw());
    ++checked;
  }
  CHECK(checked == 2000);
}

TEST_CASE("substitute fills placeholders in order") {
  auto t = parse_template("user <name> from <ip> as <name>");
  CHECK(substitute(t, {{"name", "bob"}, {"ip", "1.2.3.4"}, {"name", "root"}}) == "user bob from 1.2.3.4 as root");
}

TEST_CASE("severity rules follow the fixed priority") {
  CHECK(classify_severity("kernel panic - not syncing") == Severity::KernelPanicCrash);
  CHECK(classify_severity("out of memory: killed process 42") == Severity::Error);
  CHECK(classify_severity("") == Severity::Unknown);
  CHECK(classify_severity("FATAL: cannot mount") == Severity::CriticalFatal);
  CHECK(classify_severity("EDAC MC0: 1 CE memory read error") == Severity::HardwareError);
  CHECK(classify_severity("blk_update_request: I/O error, dev sda") == Severity::DiskError);
  CHECK(classify_severity("link degraded to x8") == Severity::Warning);
  CHECK(classify_severity("Started Session 4 of user root.") == Severity::Info);
  CHECK(classify_severity("zzz qqq") == Severity::Unknown);
}

TEST_CASE("severity names round trip") {
  for (Severity s : kAllSeverities) {
    auto back = severity_from_name(severity_name(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  CHECK(severity_label(Severity::KernelPanicCrash) == "KERNEL PANIC/CRASH");
  CHECK(severity_less(Severity::Info, Severity::KernelPanicCrash));
}

TEST_CASE("custom severity rule files") {
  auto rules = SeverityRules::parse("# comment\nWARNING\tflaky\nERROR\tbroken\n");
  CHECK(rules.size() == 2);
  CHECK(rules.classify("a flaky and broken thing") == Severity::Error);
  CHECK(rules.classify("FLAKY link") == Severity::Warning);
  CHECK(code_of([] { SeverityRules::parse("NOPE\tx\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { SeverityRules::parse("ERROR no tab\n"); }) == ErrorCode::Parse);
}

TEST_CASE("classification is deterministic across calls") {
  std::set<Severity> seen;
  for (int i = 0; i < 100; ++i) seen.insert(classify_severity("machine check exception on cpu 3"));
  CHECK(seen.size() == 1);
}
