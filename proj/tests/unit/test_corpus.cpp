#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>

#include "doctest.h"
#include "reviewforge/corpus.hpp"
#include "reviewforge/io.hpp"
#include "reviewforge/sample_corpus.hpp"

using namespace reviewforge;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* tag) {
  fs::path dir = fs::temp_directory_path() / (std::string("reviewforge_test_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RawRecord sample_record() {
  RawRecord rec;
  rec.review_text = "Great pasta, will return!";
  rec.rating = 4;
  rec.business_name = "Mario's Trattoria";
  rec.city = "Las Vegas";
  rec.state = "NV";
  rec.tags = {"Italian", "Restaurants"};
  return rec;
}

}  // namespace

TEST_CASE("build_context cleans fields and renders a fixed order") {
  Context ctx = build_context(sample_record());
  CHECK(ctx.rating == 4);
  CHECK(ctx.name == "mario ' s trattoria");
  CHECK(ctx.city == "las vegas");
  CHECK(ctx.state == "nv");
  REQUIRE(ctx.tags.size() == 2);
  CHECK(ctx.tags[0] == "italian");
  CHECK(ctx.tags[1] == "restaurants");
  CHECK(ctx.text() == "4 mario ' s trattoria las vegas nv italian restaurants");
  CHECK(ctx.tokens().size() == 10);
}

TEST_CASE("build_context rejects out-of-range ratings") {
  RawRecord rec = sample_record();
  rec.rating = 0;
  CHECK_THROWS_AS(build_context(rec), IngestError);
  rec.rating = 6;
  CHECK_THROWS_AS(build_context(rec), IngestError);
}

TEST_CASE("parse_record reads the default field layout") {
  const std::string line =
      R"({"text":"Nice spot.","stars":5,"name":"Cafe One","city":"Reno","state":"NV",)"
      R"("categories":["Coffee","Restaurants"]})";
  RawRecord rec = parse_record(line, FieldMap{});
  CHECK(rec.review_text == "Nice spot.");
  CHECK(rec.rating == 5);
  CHECK(rec.business_name == "Cafe One");
  CHECK(rec.city == "Reno");
  CHECK(rec.state == "NV");
  REQUIRE(rec.tags.size() == 2);
  CHECK(rec.tags[1] == "Restaurants");
}

TEST_CASE("parse_record accepts numeric-string and float-integer ratings") {
  FieldMap fields;
  const std::string base =
      R"(,"name":"A","city":"B","state":"C","categories":[]})";
  CHECK(parse_record(R"({"text":"x","stars":"3")" + base, fields).rating == 3);
  CHECK(parse_record(R"({"text":"x","stars":4.0)" + base, fields).rating == 4);
  CHECK_THROWS_AS(parse_record(R"({"text":"x","stars":4.5)" + base, fields), IngestError);
  CHECK_THROWS_AS(parse_record(R"({"text":"x","stars":"4x")" + base, fields), IngestError);
}

TEST_CASE("parse_record splits comma-separated category strings") {
  const std::string line =
      R"({"text":"x","stars":2,"name":"A","city":"B","state":"C",)"
      R"("categories":"Pizza, Italian , Restaurants"})";
  RawRecord rec = parse_record(line, FieldMap{});
  REQUIRE(rec.tags.size() == 3);
  CHECK(rec.tags[0] == "Pizza");
  CHECK(rec.tags[1] == "Italian");
  CHECK(rec.tags[2] == "Restaurants");
}

TEST_CASE("parse_record names the offending field and line") {
  FieldMap fields;
  try {
    parse_record(R"({"stars":1,"name":"A","city":"B","state":"C","categories":[]})", fields,
                 "line 12");
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    std::string msg = e.what();
    CHECK(msg.find("line 12") != std::string::npos);
    CHECK(msg.find("text") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_record("not json", fields), IngestError);
  CHECK_THROWS_AS(parse_record("[1,2]", fields), IngestError);
}

TEST_CASE("parse_record honors a remapped field layout") {
  FieldMap fields;
  fields.review_text = "body";
  fields.rating = "score";
  fields.tags = "labels";
  const std::string line =
      R"({"body":"ok","score":3,"name":"A","city":"B","state":"C","labels":["Restaurants"]})";
  RawRecord rec = parse_record(line, fields);
  CHECK(rec.review_text == "ok");
  CHECK(rec.rating == 3);
}

TEST_CASE("make_pairs filters by tag and drops empty reviews") {
  std::vector<RawRecord> records;
  records.push_back(sample_record());
  RawRecord bar = sample_record();
  bar.tags = {"Bars"};
  records.push_back(bar);
  RawRecord blank = sample_record();
  blank.review_text = "   ";
  records.push_back(blank);

  IngestStats stats;
  auto pairs = make_pairs(records, IngestOptions{}, &stats);
  REQUIRE(pairs.size() == 1);
  CHECK(stats.parsed == 3);
  CHECK(stats.kept == 1);
  CHECK(stats.dropped_by_tag == 1);
  CHECK(stats.dropped_empty == 1);
  CHECK(pairs[0].review == TokenSequence{"great", "pasta", ",", "will", "return", "!"});

  IngestOptions keep_all;
  keep_all.keep_tags.clear();
  auto all = make_pairs(records, keep_all, &stats);
  CHECK(all.size() == 2);
  CHECK(stats.dropped_by_tag == 0);
}

TEST_CASE("tag matching uses cleaned forms") {
  RawRecord rec = sample_record();
  rec.tags = {"RESTAURANTS"};
  IngestOptions options;
  options.keep_tags = {"Restaurants"};
  auto pairs = make_pairs({rec}, options);
  CHECK(pairs.size() == 1);
}

TEST_CASE("split_corpus cuts val then test deterministically") {
  std::vector<ReviewPair> pairs;
  for (int i = 0; i < 20; ++i) {
    ReviewPair pair;
    pair.context.rating = 1 + i % 5;
    pair.review = {"token" + std::to_string(i)};
    pairs.push_back(pair);
  }
  ParallelCorpus a = split_corpus(pairs, 4, 6, 99);
  CHECK(a.val.size() == 4);
  CHECK(a.test.size() == 6);
  CHECK(a.train.size() == 10);

  ParallelCorpus b = split_corpus(pairs, 4, 6, 99);
  for (std::size_t i = 0; i < a.val.size(); ++i) CHECK(a.val[i].review == b.val[i].review);
  for (std::size_t i = 0; i < a.test.size(); ++i) CHECK(a.test[i].review == b.test[i].review);

  std::multiset<std::string> before, after;
  for (const auto& p : pairs) before.insert(p.review[0]);
  for (const auto& p : a.train) after.insert(p.review[0]);
  for (const auto& p : a.val) after.insert(p.review[0]);
  for (const auto& p : a.test) after.insert(p.review[0]);
  CHECK(before == after);

  CHECK_THROWS_AS(split_corpus(pairs, 10, 10, 1), std::invalid_argument);
}

TEST_CASE("parse_context_line keeps a leading star token as the rating") {
  Context ctx = parse_context_line("4 mario pizza las vegas");
  CHECK(ctx.rating == 4);
  CHECK(ctx.name == "mario pizza las vegas");
  CHECK(ctx.text() == "4 mario pizza las vegas");

  Context no_rating = parse_context_line("mario pizza");
  CHECK(no_rating.rating == 0);
  CHECK(no_rating.text() == "mario pizza");

  Context two_digit = parse_context_line("42 main street");
  CHECK(two_digit.rating == 0);
  CHECK(two_digit.text() == "42 main street");
}

TEST_CASE("pair files round-trip contexts and reviews") {
  fs::path dir = temp_dir("pairs");
  std::vector<RawRecord> records = {sample_record()};
  auto pairs = make_pairs(records, IngestOptions{});
  REQUIRE(pairs.size() == 1);

  write_pair_files(dir / "c.txt", dir / "r.txt", pairs);
  auto loaded = read_pair_files(dir / "c.txt", dir / "r.txt");
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].context.text() == pairs[0].context.text());
  CHECK(loaded[0].context.rating == 4);
  CHECK(loaded[0].review == pairs[0].review);

  write_lines(dir / "short.txt", std::vector<std::string>{});
  CHECK_THROWS_AS(read_pair_files(dir / "c.txt", dir / "short.txt"), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("ingest_jsonl parses a file end to end") {
  fs::path dir = temp_dir("ingest");
  write_sample_jsonl(dir / "sample.jsonl", {.count = 50, .seed = 3});
  IngestStats stats;
  auto pairs = ingest_jsonl(dir / "sample.jsonl", IngestOptions{}, &stats);
  CHECK(stats.parsed == 50);
  CHECK(pairs.size() == 50);  // every sample record carries the restaurants tag
  for (const auto& pair : pairs) {
    CHECK(pair.context.rating >= 1);
    CHECK(pair.context.rating <= 5);
    CHECK_FALSE(pair.review.empty());
  }
  fs::remove_all(dir);
}

TEST_CASE("sample corpus is deterministic in its seed") {
  auto a = make_sample_records({.count = 30, .seed = 7});
  auto b = make_sample_records({.count = 30, .seed = 7});
  auto c = make_sample_records({.count = 30, .seed = 8});
  REQUIRE(a.size() == 30);
  bool all_equal = true;
  bool any_diff_seed = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].review_text != b[i].review_text || a[i].rating != b[i].rating) all_equal = false;
    if (a[i].review_text != c[i].review_text) any_diff_seed = true;
  }
  CHECK(all_equal);
  CHECK(any_diff_seed);
}
