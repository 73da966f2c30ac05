#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "logsift/config.hpp"
#include "logsift/io.hpp"

using namespace logsift;

TEST_CASE("epoch parsing keeps nanosecond precision") {
  CHECK(parse_epoch_ns("1700000000") == 1'700'000'000'000'000'000LL);
  CHECK(parse_epoch_ns("1700000000.5") == 1'700'000'000'500'000'000LL);
  CHECK(parse_epoch_ns("1.000000001") == 1'000'000'001LL);
  CHECK(parse_epoch_ns("-2.5") == -2'500'000'000LL);
  CHECK_FALSE(parse_epoch_ns("").has_value());
  CHECK_FALSE(parse_epoch_ns("abc").has_value());
  CHECK_FALSE(parse_epoch_ns("12x").has_value());
  CHECK(format_epoch(1'700'000'000'500'000'000LL) == "1700000000.5");
  CHECK(format_epoch(300'000'000'000LL) == "300");
}

TEST_CASE("record lines with and without the epoch/host prefix") {
  auto r = parse_record_line("1700000000.25\tnid001\tlink down on port 3", 4);
  REQUIRE(r.has_value());
  CHECK(r->line_no == 4);
  CHECK(r->timestamp_ns == 1'700'000'000'250'000'000LL);
  CHECK(r->host == "nid001");
  CHECK(r->message == "link down on port 3");

  auto plain = parse_record_line("no prefix here", 1);
  REQUIRE(plain.has_value());
  CHECK_FALSE(plain->timestamp_ns.has_value());
  CHECK_FALSE(plain->host.has_value());

  // A tab-separated message whose first field is not an epoch stays whole.
  auto tabs = parse_record_line("key\tvalue\tmore", 1);
  REQUIRE(tabs.has_value());
  CHECK(tabs->message == "key\tvalue\tmore");

  CHECK_FALSE(parse_record_line("   ", 1).has_value());
  CHECK_FALSE(parse_record_line("", 1).has_value());
}

TEST_CASE("reader streams in batches and keeps physical line numbers") {
  std::istringstream in("a\n\nb\r\nc\n");
  RecordReader reader(in);
  std::vector<RawLogRecord> batch;
  std::vector<std::uint64_t> lines;
  while (reader.next_batch(batch, 2)) {
    CHECK(batch.size() <= 2);
    for (const auto& r : batch) lines.push_back(r.line_no);
  }
  CHECK(lines == std::vector<std::uint64_t>{1, 3, 4});
}

TEST_CASE("template files skip comments and report bad lines") {
  std::istringstream ok("# header\nuser <name> logged in\n\n  \nfail <code>\n");
  auto ts = read_templates(ok);
  REQUIRE(ts.size() == 2);
  CHECK(ts[1].raw() == "fail <code>");

  std::istringstream bad("good <x>\nbad <X>\n");
  try {
    read_templates(bad);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  std::ostringstream out;
  write_templates(out, ts);
  CHECK(out.str() == "user <name> logged in\nfail <code>\n");
}

TEST_CASE("config text sections flatten to dotted keys") {
  auto kv = parse_config_text("# c\n[pipeline]\nseed = 7\n; other\n[llm]\nbase_url=http://h:1/v1\n");
  CHECK(kv.at("pipeline.seed") == "7");
  CHECK(kv.at("llm.base_url") == "http://h:1/v1");
  CHECK_THROWS_AS(parse_config_text("[open\n"), Error);
  CHECK_THROWS_AS(parse_config_text("novalue\n"), Error);
}

TEST_CASE("config values apply and unknown keys fail") {
  RunConfig cfg;
  apply_config(cfg, parse_config_text("[pipeline]\nseed=9\nn_samples=3\nwindow_s=60\nmode=llm\n"
                                      "inputs = a.log, b.log\n[llm]\nmodel=m\ntimeout_s=1.5\ntoken=abc\n"));
  CHECK(cfg.seed == 9);
  CHECK(cfg.n_samples == 3);
  CHECK(cfg.window_s == 60);
  CHECK(cfg.mode == TemplateMode::Llm);
  CHECK(cfg.inputs == std::vector<std::string>{"a.log", "b.log"});
  CHECK(cfg.llm.model_name == "m");
  CHECK(cfg.llm.timeout == std::chrono::milliseconds(1500));
  CHECK(cfg.llm.bearer_token == "abc");
  CHECK_THROWS_AS(apply_config(cfg, {{"pipeline.bogus", "1"}}), Error);
  CHECK_THROWS_AS(apply_config(cfg, {{"pipeline.seed", "x1"}}), Error);
  CHECK_THROWS_AS(apply_config(cfg, {{"pipeline.seed", "-1"}}), Error);
}

TEST_CASE("environment overrides the endpoint URL and token") {
  RunConfig cfg;
  setenv("LOGSIFT_LLM_URL", "http://10.0.0.1:9000/v1", 1);
  setenv("LOGSIFT_LLM_TOKEN", "secret", 1);
  apply_env(cfg);
  unsetenv("LOGSIFT_LLM_URL");
  unsetenv("LOGSIFT_LLM_TOKEN");
  CHECK(cfg.llm.base_url == "http://10.0.0.1:9000/v1");
  CHECK(cfg.llm.bearer_token == "secret");
}

TEST_CASE("validation checks paths before any stage runs") {
  RunConfig cfg;
  cfg.inputs = {"/nonexistent/file.log"};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.inputs = {"-"};
  CHECK_NOTHROW(cfg.validate());
  cfg.mode = TemplateMode::Llm;
  cfg.llm.base_url = "";
  CHECK_THROWS_AS(cfg.validate(), Error);
}
