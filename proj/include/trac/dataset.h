#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "trac/instance.h"
#include "trac/taskgen.h"
#include "trac/textgen.h"

namespace trac {

using Json = nlohmann::ordered_json;

// One JSON Lines record: rendered text plus the full symbolic instance.
struct DatasetRecord {
  std::string id;
  TaskKind task = TaskKind::projection;
  std::string context;
  std::string query;
  int label = 0;
  // Surface syntax; initial_state in display order.
  std::vector<std::string> initial_state;
  std::vector<std::string> actions;
  std::optional<std::string> condition;
  InstanceMeta meta;
  std::vector<std::string> names;  // universe order
};

DatasetRecord to_record(const ProblemInstance& p, const TemplateSet& t = TemplateSet::builtin());
// Rebuilds the symbolic instance; the label is taken from the record.
ProblemInstance from_record(const DatasetRecord& r);

Json to_json(const DatasetRecord& r);
DatasetRecord record_from_json(const Json& j);
// Compact single-line JSON with fixed key order.
std::string serialize_record(const DatasetRecord& r);

// JSON Lines, UTF-8, LF endings. Written to a temporary file and renamed.
void write_dataset(std::span<const DatasetRecord> records, const std::filesystem::path& path);
std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path);
// Writes `content` atomically.
void write_text_file(const std::filesystem::path& path, std::string_view content);

struct SplitSpec {
  std::size_t train = 10000;
  std::size_t dev = 2000;
  std::size_t test = 3000;

  std::size_t total() const { return train + dev + test; }
  // 10k/2k/3k for 15k; the same 2/3, 2/15, 1/5 proportions (rounded to even
  // sizes) otherwise.
  static SplitSpec defaults_for(std::size_t count);
  static SplitSpec test_only(std::size_t count) { return {0, 0, count}; }
  static SplitSpec parse(std::string_view text);  // "10000,2000,3000"
};

struct Splits {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> dev;
  std::vector<DatasetRecord> test;
};

/// Stratified by label: each label is shuffled with `seed` and dealt out so
/// every split holds exactly half true labels. Records keep dataset order
/// within a split; meta.split is set. Throws Error if the sizes do not sum to
/// the record count, a split size is odd, or the input is unbalanced.
Splits split_dataset(std::span<const DatasetRecord> records, SplitSpec spec, std::uint64_t seed);
// Same assignment, written into meta.split of `records` in place.
void assign_splits(std::vector<DatasetRecord>& records, SplitSpec spec, std::uint64_t seed);

struct VerifyIssue {
  std::size_t line = 0;  // 1-based
  std::string id;
  std::string kind;  // label, render, id, symbolic, duplicate
  std::string detail;
};

struct VerifyReport {
  std::size_t records = 0;
  std::size_t true_labels = 0;
  std::size_t label_mismatches = 0;
  std::size_t render_mismatches = 0;
  std::size_t duplicates = 0;
  std::size_t other_issues = 0;
  std::vector<VerifyIssue> issues;

  bool ok() const {
    return label_mismatches == 0 && render_mismatches == 0 && duplicates == 0 && other_issues == 0;
  }
  bool balanced() const { return records % 2 == 0 && true_labels * 2 == records; }
  Json to_json() const;
};

/// Recomputes every label with the engine and planner, re-renders the text
/// from the symbolic fields and compares byte-wise, and checks ids, state
/// legality and canonical-form uniqueness.
VerifyReport verify_records(std::span<const DatasetRecord> records,
                            const TemplateSet& t = TemplateSet::builtin(), std::size_t workers = 1);
VerifyReport verify_dataset(const std::filesystem::path& path, std::size_t workers = 1);

struct DatasetStats {
  std::size_t records = 0;
  std::map<int, std::size_t> labels;
  std::map<std::size_t, std::size_t> context_sentences;
  std::map<std::size_t, std::size_t> query_tokens;
  std::map<std::size_t, std::size_t> failure_index;  // executability negatives
  std::map<std::string, std::size_t> condition_shapes;
  std::map<std::string, std::size_t> splits;
  double mean_context_sentences = 0;
  double mean_context_words = 0;

  Json to_json() const;
};

DatasetStats compute_stats(std::span<const DatasetRecord> records);
Json to_json(const GenCounters& c);
Json to_json(const GenConfig& c);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Takes ratio[i] units from input i, where a unit is the largest even
/// number of records every input can supply in proportion; each input
/// contributes half true, half false labels, in file order.
std::vector<DatasetRecord> merge_datasets(const std::vector<std::vector<DatasetRecord>>& inputs,
                                          const std::vector<std::size_t>& ratio);

struct SuiteEntry {
  GenConfig config;
  SplitSpec split;
};

// Standard and GE4-literal datasets get the 10k/2k/3k split; evaluation-only
// datasets (GE1-GE3, GE4 conjunctions) are all test.
std::vector<SuiteEntry> suite_plan(std::uint64_t base_seed, SuiteOptions options = {});

using ProgressFn = std::function<void(const std::string&)>;

/// Generates every suite dataset into `dir` as <name>.jsonl plus
/// manifest.json. Returns the manifest.
Json run_suite(const std::filesystem::path& dir, std::uint64_t base_seed, std::size_t workers,
               SuiteOptions options = {}, const ProgressFn& progress = {});

// Records for a generated dataset, with splits assigned.
std::vector<DatasetRecord> dataset_records(const Dataset& d, SplitSpec split,
                                           const TemplateSet& t = TemplateSet::builtin());

// Manifest header fields shared by `generate` and `suite`.
Json manifest_header(std::uint64_t base_seed);

}  // namespace trac
