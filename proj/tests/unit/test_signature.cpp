#include <doctest.h>

#include <map>
#include <set>

#include "logsift/corpus.hpp"
#include "logsift/signature.hpp"

using namespace logsift;

namespace {

std::vector<RawLogRecord> records_of(const std::vector<std::string>& messages) {
  std::vector<RawLogRecord> out;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    RawLogRecord r;
    r.line_no = i + 1;
    r.message = messages[i];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RawLogRecord> corpus_records(std::size_t templates, std::uint64_t lines, std::uint64_t seed) {
  CorpusOptions opts;
  opts.templates = templates;
  opts.lines = lines;
  opts.seed = seed;
  CorpusGenerator gen(opts);
  std::vector<RawLogRecord> out;
  GeneratedLine g;
  while (gen.next(g)) {
    RawLogRecord r;
    r.line_no = g.line_no;
    r.timestamp_ns = g.timestamp_ns;
    r.host = g.host;
    r.message = g.message;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

TEST_CASE("value classes") {
  CHECK(classify_value("42") == MaskClass::Num);
  CHECK(classify_value("-3.5e2") == MaskClass::Num);
  CHECK(classify_value("0x1f2e") == MaskClass::Hex);
  CHECK(classify_value("7fa3b2c0") == MaskClass::Hex);
  CHECK(classify_value("deadbeef") == MaskClass::None);
  CHECK(classify_value("10.1.2.3") == MaskClass::Ip);
  CHECK(classify_value("10.1.2.3:8080") == MaskClass::Ip);
  CHECK(classify_value("fe80::1") == MaskClass::Ip);
  CHECK(classify_value("2024-03-01T12:00:00.123Z") == MaskClass::Ts);
  CHECK(classify_value("2024-03-01") == MaskClass::Ts);
  CHECK(classify_value("12:00:01") == MaskClass::Ts);
  CHECK(classify_value("/var/log/job123.out") == MaskClass::Path);
  CHECK(classify_value("/usr/bin/env") == MaskClass::None);
  CHECK(classify_value("error") == MaskClass::None);
  CHECK(classify_value("") == MaskClass::None);
}

TEST_CASE("variables inside punctuation and key=value") {
  auto s = locate_variable("(123)");
  CHECK(s.cls == MaskClass::Num);
  CHECK(s.offset == 1);
  CHECK(s.length == 3);
  auto kv = locate_variable("pid=4711,");
  CHECK(kv.cls == MaskClass::Num);
  CHECK(kv.offset == 4);
  CHECK(kv.length == 4);
  CHECK(locate_variable("state=up").cls == MaskClass::None);
  CHECK(mask_token("pid=4711,") == "pid=§NUM,");
  CHECK(mask("Accepted password for root from 10.0.0.7 port 52211 ssh2") ==
        "Accepted password for root from §IP port §NUM ssh2");
}

TEST_CASE("masking is idempotent and normalises whitespace") {
  auto recs = corpus_records(50, 500, 3);
  for (const auto& r : recs) {
    const std::string once = mask(r.message);
    CHECK(mask(once) == once);
  }
  CHECK(mask("  a   1\tb ") == "a §NUM b");
}

TEST_CASE("signature key hashes the masked form") {
  auto a = make_signature("job 17 done in 3.2s");
  auto b = make_signature("job 99 done   in 3.2s");
  CHECK(a.key == b.key);
  CHECK(a.masked_form == "job §NUM done in 3.2s");
  CHECK(a.token_count == 5);
  CHECK(a.key == fnv1a64(a.masked_form));
}

TEST_CASE("grouping partitions the input") {
  auto recs = corpus_records(40, 3000, 11);
  auto groups = group(recs, 5, 42);
  std::uint64_t members = 0;
  std::set<std::string> forms;
  for (const auto& g : groups) {
    members += g.member_count;
    CHECK(forms.insert(g.signature.masked_form).second);
    CHECK(g.representatives.size() == std::min<std::uint64_t>(5, g.member_count));
    for (const auto& r : g.representatives) CHECK(mask(r.message) == g.signature.masked_form);
  }
  CHECK(members == recs.size());
  for (std::size_t i = 1; i < groups.size(); ++i) {
    CHECK(groups[i - 1].member_count >= groups[i].member_count);
  }
}

TEST_CASE("group output is independent of thread count and batching") {
  auto recs = corpus_records(30, 5000, 5);
  auto one = group(recs, 4, 9, 1);
  auto many = group(recs, 4, 9, 4);
  SignatureGrouper chunked(4, 9);
  for (std::size_t i = 0; i < recs.size(); i += 333) {
    const std::size_t n = std::min<std::size_t>(333, recs.size() - i);
    chunked.add_batch(std::span(recs).subspan(i, n), 3);
  }
  auto third = chunked.finish();
  REQUIRE(one.size() == many.size());
  REQUIRE(one.size() == third.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].signature.masked_form == many[i].signature.masked_form);
    CHECK(one[i].member_count == many[i].member_count);
    REQUIRE(one[i].representatives.size() == many[i].representatives.size());
    for (std::size_t k = 0; k < one[i].representatives.size(); ++k) {
      CHECK(one[i].representatives[k].line_no == many[i].representatives[k].line_no);
      CHECK(one[i].representatives[k].line_no == third[i].representatives[k].line_no);
    }
  }
}

TEST_CASE("reservoir samples are roughly uniform") {
  // One group of 10 members, n = 1: each member should be chosen about 1/10 of the time.
  std::vector<std::string> msgs;
  for (int i = 0; i < 10; ++i) msgs.push_back("tick " + std::to_string(i));
  auto recs = records_of(msgs);
  std::map<std::uint64_t, int> hits;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    auto gs = group(recs, 1, seed);
    REQUIRE(gs.size() == 1);
    ++hits[gs[0].representatives[0].line_no];
  }
  CHECK(hits.size() == 10);
  for (const auto& [line, count] : hits) {
    CHECK(count > 300);
    CHECK(count < 500);
  }
}

TEST_CASE("an empty grouping is an error") {
  SignatureGrouper g(5, 1);
  CHECK_THROWS_AS(g.finish(), Error);
  CHECK_THROWS_AS(SignatureGrouper(0, 1), Error);
}

TEST_CASE("compression: 500 templates give at most 1000 groups") {
  auto recs = corpus_records(500, 100000, 7);
  auto groups = group(recs, 5, 42, 2);
  CHECK(groups.size() <= 1000);
}
