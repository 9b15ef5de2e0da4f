// trac: generate, verify and inspect reasoning-about-action datasets.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <thread>

#include "trac/blocksworld.h"
#include "trac/dataset.h"
#include "trac/error.h"
#include "trac/oracles.h"
#include "trac/planner.h"
#include "trac/taskgen.h"
#include "trac/textgen.h"

using namespace trac;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kVerifyFailed = 3 };

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    auto b = cur.find_first_not_of(' ');
    auto e = cur.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

std::size_t default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

struct GenerateArgs {
  std::string task;
  std::size_t objects = 5;
  std::size_t length = 1;
  std::size_t count = 15000;
  std::uint64_t seed = 0;
  std::string pool = "standard";
  std::string shape = "mixed";
  std::string ge_tag = "none";
  std::string name;
  std::string out;
  std::string splits;
  bool split_files = false;
  std::size_t workers = 0;
};

int run_generate(const GenerateArgs& a) {
  GenConfig cfg;
  cfg.task = parse_task_kind(a.task);
  cfg.objects = a.objects;
  cfg.length = a.length;
  cfg.count = a.count;
  cfg.seed = a.seed;
  cfg.pool = blocksworld::parse_pool_kind(a.pool);
  cfg.shape = parse_condition_shape(a.shape);
  cfg.ge_tag = a.ge_tag;
  cfg.name = a.name.empty() ? std::string(to_string(cfg.task)) + "_L" + std::to_string(cfg.length)
                            : a.name;
  cfg.validate();
  SplitSpec split = a.splits.empty() ? SplitSpec::defaults_for(cfg.count) : SplitSpec::parse(a.splits);
  if (split.total() != cfg.count) throw Error("split sizes do not add up to --count");

  Dataset d = gen_dataset(cfg, a.workers ? a.workers : default_workers());
  std::vector<DatasetRecord> records = dataset_records(d, split);
  std::filesystem::path out = a.out.empty() ? cfg.name + ".jsonl" : a.out;
  write_dataset(records, out);

  Json summary = manifest_header(cfg.seed);
  summary["config"] = to_json(cfg);
  summary["file"] = out.string();
  summary["sha256"] = sha256_file(out);
  summary["counters"] = to_json(d.counters);
  if (a.split_files) {
    Splits s = split_dataset(records, split, cfg.seed);
    Json files;
    for (auto [label, part] : {std::pair{"train", &s.train}, {"dev", &s.dev}, {"test", &s.test}}) {
      std::filesystem::path p = out;
      p.replace_extension(std::string(".") + label + ".jsonl");
      write_dataset(*part, p);
      files[label] = p.string();
    }
    summary["split_files"] = std::move(files);
  }
  print_json(summary);
  return kOk;
}

int run_verify(const std::string& file, std::size_t workers, bool full) {
  VerifyReport rep = verify_dataset(file, workers ? workers : default_workers());
  Json j = rep.to_json();
  if (!full && j["issues"].size() > 50) {
    Json head = Json::array();
    for (std::size_t i = 0; i < 50; ++i) head.push_back(j["issues"][i]);
    j["issues"] = std::move(head);
    j["issues_truncated"] = true;
  }
  print_json(j);
  return rep.ok() && rep.balanced() ? kOk : kVerifyFailed;
}

int run_format_lm(const std::string& file, const std::string& style, const std::string& out) {
  LmStyle s = parse_lm_style(style);
  std::string buf;
  for (const DatasetRecord& r : read_dataset(file)) {
    LmExample ex = format_for_lm({r.context, r.query, r.label != 0}, s);
    Json j;
    j["id"] = r.id;
    j["split"] = r.meta.split;
    j["input"] = ex.input;
    j["target"] = ex.target;
    buf += j.dump();
    buf += '\n';
  }
  if (out.empty() || out == "-") {
    std::cout << buf;
  } else {
    write_text_file(out, buf);
  }
  return kOk;
}

struct SolveArgs {
  std::string names;
  std::string init;
  std::string goal;
  std::size_t plans = 1;
  bool oracle = false;
};

int run_solve(const SolveArgs& a) {
  std::vector<std::string> names = split_list(a.names, ',');
  GroundTask task = blocksworld::make_task(names);
  std::vector<AtomId> atoms;
  for (const std::string& s : split_list(a.init, ';')) atoms.push_back(task.parse_atom(s));
  State s = task.make_state(atoms);
  auto violations = blocksworld::physical_violations(task, s);
  if (!violations.empty()) throw Error("illegal initial state: " + violations.front());
  Condition g = task.parse_condition(a.goal);

  Json j;
  PlanCost cost = optimal_cost(task, s, g, default_bound(task));
  j["cost"] = cost.str();
  Json plans = Json::array();
  if (cost.is_finite()) {
    PlanSet set = enumerate_optimal_plans(task, s, g, a.plans);
    for (const ActionSequence& p : set.plans) {
      Json steps = Json::array();
      for (ActionId id : p) steps.push_back(task.format_action(id));
      plans.push_back(std::move(steps));
    }
  }
  j["plans"] = std::move(plans);
  if (a.oracle) {
    PlanCost oc = oracles::oracle_optimal_cost(task, s, g, {});
    j["oracle_cost"] = oc.str();
    j["agree"] = oc == cost;
  }
  print_json(j);
  return a.oracle && !(j["agree"].get<bool>()) ? kVerifyFailed : kOk;
}

int run_merge(const std::vector<std::string>& inputs, const std::string& ratio, const std::string& out) {
  std::vector<std::vector<DatasetRecord>> data;
  for (const std::string& f : inputs) data.push_back(read_dataset(f));
  std::vector<std::size_t> weights;
  if (ratio.empty()) {
    weights.assign(inputs.size(), 1);
  } else {
    for (const std::string& w : split_list(ratio, ':')) weights.push_back(std::stoull(w));
  }
  std::vector<DatasetRecord> merged = merge_datasets(data, weights);
  write_dataset(merged, out);
  print_json({{"file", out}, {"records", merged.size()}, {"sha256", sha256_file(out)}});
  return kOk;
}

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "parse_error";
  if (dynamic_cast<const BudgetExceeded*>(&e)) return "budget_exceeded";
  if (dynamic_cast<const YieldFailure*>(&e)) return "yield_failure";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition_error";
  if (dynamic_cast<const Error*>(&e)) return "error";
  return "internal_error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate and check reasoning-about-action benchmark datasets"};
  app.set_version_flag("--version", std::string(TRAC_VERSION));
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate one dataset as JSON Lines");
  generate->add_option("--task", gen.task, "projection | executability | planning | goal_recognition")
      ->required();
  generate->add_option("--objects,-m", gen.objects, "Number of blocks");
  generate->add_option("--length,-n", gen.length, "Action sequence length");
  generate->add_option("--count", gen.count, "Number of instances (even)");
  generate->add_option("--seed", gen.seed, "Base seed")->required();
  generate->add_option("--pool", gen.pool, "standard | unseen");
  generate->add_option("--shape", gen.shape, "mixed | literals_only | conjunctions_only");
  generate->add_option("--ge-tag", gen.ge_tag, "Tag recorded in metadata");
  generate->add_option("--name", gen.name, "Dataset name");
  generate->add_option("--out,-o", gen.out, "Output file");
  generate->add_option("--splits", gen.splits, "TRAIN,DEV,TEST sizes");
  generate->add_flag("--split-files", gen.split_files, "Also write one file per split");
  generate->add_option("--workers,-j", gen.workers, "Worker threads");

  std::uint64_t suite_seed = 0;
  std::string suite_out = "suite";
  std::size_t suite_workers = 0;
  SuiteOptions suite_opts;
  auto* suite = app.add_subcommand("suite", "Generate every dataset of the benchmark plus a manifest");
  suite->add_option("--seed", suite_seed, "Base seed")->required();
  suite->add_option("--out,-o", suite_out, "Output directory");
  suite->add_option("--workers,-j", suite_workers, "Worker threads");
  suite->add_option("--count", suite_opts.count, "Size of full datasets");
  suite->add_option("--small-count", suite_opts.small_count, "Size of GE4 conjunction datasets");
  suite->add_flag("--ge2-goal-recognition", suite_opts.include_ge2_goal_recognition,
                  "Include goal recognition at L4/L5");

  std::string verify_file;
  std::size_t verify_workers = 0;
  bool verify_full = false;
  auto* verify = app.add_subcommand("verify", "Recompute labels and re-render text for a dataset");
  verify->add_option("file", verify_file)->required()->check(CLI::ExistingFile);
  verify->add_option("--workers,-j", verify_workers, "Worker threads");
  verify->add_flag("--all-issues", verify_full, "List every issue");

  std::string stats_file;
  auto* stats = app.add_subcommand("stats", "Print dataset statistics");
  stats->add_option("file", stats_file)->required()->check(CLI::ExistingFile);

  std::string lm_file, lm_style = "separator", lm_out;
  auto* lm = app.add_subcommand("format-lm", "Convert records to model input/target pairs");
  lm->add_option("file", lm_file)->required()->check(CLI::ExistingFile);
  lm->add_option("--style", lm_style, "separator | concat | text2text");
  lm->add_option("--out,-o", lm_out, "Output file (default stdout)");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Optimal plans for a goal from a state");
  solve->add_option("--names", solve_args.names, "Comma-separated block names")->required();
  solve->add_option("--init", solve_args.init, "Semicolon-separated atoms, e.g. 'onTable(Red); clear(Red)'")
      ->required();
  solve->add_option("--goal", solve_args.goal, "Literal or 'l1 & l2'")->required();
  solve->add_option("--plans", solve_args.plans, "Maximum number of plans to list");
  solve->add_flag("--oracle", solve_args.oracle, "Cross-check the cost with the reference search");

  std::vector<std::string> merge_inputs;
  std::string merge_ratio, merge_out;
  auto* merge = app.add_subcommand("merge", "Combine datasets with per-input weights");
  merge->add_option("inputs", merge_inputs)->required()->check(CLI::ExistingFile);
  merge->add_option("--ratio", merge_ratio, "Weights such as 2:1");
  merge->add_option("--out,-o", merge_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*suite) {
      Json m = run_suite(suite_out, suite_seed, suite_workers ? suite_workers : default_workers(),
                         suite_opts, [](const std::string& msg) { std::cerr << msg << "\n"; });
      std::cout << (std::filesystem::path(suite_out) / "manifest.json").string() << "\n";
      return kOk;
    }
    if (*verify) return run_verify(verify_file, verify_workers, verify_full);
    if (*stats) {
      print_json(compute_stats(read_dataset(stats_file)).to_json());
      return kOk;
    }
    if (*lm) return run_format_lm(lm_file, lm_style, lm_out);
    if (*solve) return run_solve(solve_args);
    if (*merge) return run_merge(merge_inputs, merge_ratio, merge_out);
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = {{"type", error_type(e)}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return kFailure;
  }
  return kUsage;
}
