#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "fixtures.h"
#include "trac/dataset.h"
#include "trac/error.h"

using namespace trac;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("trac_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<DatasetRecord> small_dataset(TaskKind task, std::size_t count, std::uint64_t seed) {
  GenConfig c;
  c.name = "small";
  c.task = task;
  c.length = 2;
  c.count = count;
  c.seed = seed;
  return dataset_records(gen_dataset(c), SplitSpec::defaults_for(count));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("record layout") {
  ProblemInstance p = fixtures::build(fixtures::table_examples()[2]);
  DatasetRecord r = to_record(p);
  std::string line = serialize_record(r);
  CHECK(line.rfind("{\"id\":\"" + p.id + "\",\"task\":\"planning\",\"context\":", 0) == 0);
  CHECK(line.find("\"label\":1,\"symbolic\":{\"initial_state\":[\"clear(Blue)\",") != std::string::npos);
  CHECK(line.find("\"condition\":\"!on(Blue, Magenta)\"") != std::string::npos);
  CHECK(line.find("\"meta\":{\"objects\":3,\"length\":1,\"ge_tag\":\"none\",\"pool\":\"standard\","
                  "\"names\":[\"Blue\",\"Magenta\",\"White\"],") != std::string::npos);
  CHECK(line.find('\n') == std::string::npos);

  DatasetRecord back = record_from_json(Json::parse(line));
  CHECK(serialize_record(back) == line);
  ProblemInstance q = from_record(back);
  CHECK(canonical_form(q) == canonical_form(p));
  CHECK(q.initial_state == p.initial_state);

  DatasetRecord ex = to_record(fixtures::build(fixtures::table_examples()[1]));
  CHECK(serialize_record(ex).find("\"condition\":null") != std::string::npos);
}

TEST_CASE("malformed records are rejected") {
  CHECK_THROWS_AS(record_from_json(Json::parse("[1,2]")), Error);
  CHECK_THROWS_AS(record_from_json(Json::parse("{\"id\":\"x\"}")), Error);
  Json j = to_json(to_record(fixtures::build(fixtures::table_examples()[0])));
  j["label"] = 2;
  CHECK_THROWS_AS(record_from_json(j), Error);
  j["label"] = "yes";
  CHECK_THROWS_AS(record_from_json(j), Error);

  fs::path dir = temp_dir("malformed");
  {
    std::ofstream out(dir / "bad.jsonl");
    out << serialize_record(to_record(fixtures::build(fixtures::table_examples()[0]))) << "\n{oops\n";
  }
  try {
    read_dataset(dir / "bad.jsonl");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position().line == 2);
  }
}

TEST_CASE("write and read are byte-stable") {
  fs::path dir = temp_dir("io");
  auto records = small_dataset(TaskKind::projection, 30, 3);
  write_dataset(records, dir / "a.jsonl");
  auto back = read_dataset(dir / "a.jsonl");
  write_dataset(back, dir / "b.jsonl");
  std::string a = slurp(dir / "a.jsonl");
  CHECK(a == slurp(dir / "b.jsonl"));
  CHECK(a.find('\r') == std::string::npos);
  CHECK(std::count(a.begin(), a.end(), '\n') == 30);
  CHECK_FALSE(fs::exists(dir / "a.jsonl.tmp"));
  CHECK(sha256_file(dir / "a.jsonl") == sha256_hex(a));
}

TEST_CASE("sha256 test vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("splits are stratified and seeded") {
  auto records = small_dataset(TaskKind::executability, 60, 4);
  SplitSpec spec{40, 8, 12};
  Splits s = split_dataset(records, spec, 1);
  CHECK(s.train.size() == 40);
  CHECK(s.dev.size() == 8);
  CHECK(s.test.size() == 12);
  for (const auto* part : {&s.train, &s.dev, &s.test}) {
    std::size_t pos = 0;
    for (const DatasetRecord& r : *part) pos += r.label;
    CHECK(pos * 2 == part->size());
  }
  CHECK(s.train.front().meta.split == "train");
  Splits again = split_dataset(records, spec, 1);
  CHECK(again.dev.front().id == s.dev.front().id);
  Splits other = split_dataset(records, spec, 2);
  std::set<std::string> a, b;
  for (const auto& r : s.test) a.insert(r.id);
  for (const auto& r : other.test) b.insert(r.id);
  CHECK(a != b);

  CHECK_THROWS_AS(split_dataset(records, {40, 8, 10}, 1), Error);
  CHECK_THROWS_AS(split_dataset(records, {41, 7, 12}, 1), Error);
  SplitSpec d = SplitSpec::defaults_for(15000);
  CHECK((d.train == 10000 && d.dev == 2000 && d.test == 3000));
  SplitSpec small = SplitSpec::defaults_for(3000);
  CHECK(small.total() == 3000);
  CHECK(small.train % 2 == 0);
  CHECK(small.dev % 2 == 0);
  CHECK(SplitSpec::parse("6,2,2").train == 6);
  CHECK_THROWS_AS(SplitSpec::parse("6,2"), Error);
}

TEST_CASE("verify recomputes labels and text") {
  auto records = small_dataset(TaskKind::goal_recognition, 20, 5);
  VerifyReport ok = verify_records(records);
  CHECK(ok.ok());
  CHECK(ok.balanced());
  CHECK(ok.records == 20);

  auto tampered = records;
  tampered[3].label = 1 - tampered[3].label;
  tampered[5].context += " ";
  tampered[7].query = "Jane juggles.";
  tampered[9] = tampered[8];
  VerifyReport bad = verify_records(tampered, TemplateSet::builtin(), 3);
  CHECK_FALSE(bad.ok());
  CHECK(bad.label_mismatches == 1);
  CHECK(bad.render_mismatches == 2);
  CHECK(bad.duplicates == 1);
  CHECK_FALSE(bad.balanced());
  REQUIRE_FALSE(bad.issues.empty());
  CHECK(bad.issues.front().line == 4);
  CHECK(bad.issues.front().kind == "label");

  auto broken = records;
  broken[0].initial_state.pop_back();
  VerifyReport b2 = verify_records(broken);
  CHECK(b2.other_issues >= 1);
}

TEST_CASE("stats") {
  auto records = small_dataset(TaskKind::executability, 40, 6);
  DatasetStats s = compute_stats(records);
  CHECK(s.records == 40);
  CHECK(s.labels[1] == 20);
  CHECK(s.labels[0] == 20);
  std::size_t failures = 0;
  for (const auto& [k, n] : s.failure_index) failures += n;
  CHECK(failures == 20);
  CHECK(s.mean_context_sentences > 4);
  CHECK(s.to_json()["splits"]["train"].get<std::size_t>() == SplitSpec::defaults_for(40).train);
}

TEST_CASE("merge keeps labels balanced per input") {
  auto a = small_dataset(TaskKind::projection, 20, 7);
  auto b = small_dataset(TaskKind::planning, 40, 8);
  auto merged = merge_datasets({a, b}, {1, 2});
  CHECK(merged.size() == 60);
  std::size_t pos = 0;
  for (const auto& r : merged) pos += r.label;
  CHECK(pos == 30);
  CHECK_THROWS_AS(merge_datasets({a, b}, {1}), Error);
}

TEST_CASE("suite plan splits") {
  auto plan = suite_plan(1);
  REQUIRE(plan.size() == 32);
  for (const SuiteEntry& e : plan) {
    CHECK(e.split.total() == e.config.count);
    bool trainable = e.config.ge_tag == "none" || e.config.ge_tag == "GE4-lit";
    CHECK((e.split.train > 0) == trainable);
  }
}

TEST_CASE("small suite end to end") {
  fs::path dir = temp_dir("suite");
  SuiteOptions opts;
  opts.count = 20;
  opts.small_count = 10;
  Json m = run_suite(dir, 9, 2, opts);
  REQUIRE(m["datasets"].size() == 32);
  for (const auto& d : m["datasets"]) {
    fs::path f = dir / d["file"].get<std::string>();
    CHECK(fs::exists(f));
    CHECK(sha256_file(f) == d["sha256"].get<std::string>());
  }
  CHECK(fs::exists(dir / "manifest.json"));
  Json again = run_suite(temp_dir("suite2"), 9, 1, opts);
  CHECK(again["datasets"] == m["datasets"]);
}
