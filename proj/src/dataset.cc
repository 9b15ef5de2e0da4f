#include "trac/dataset.h"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "trac/blocksworld.h"
#include "trac/error.h"
#include "trac/rng.h"

#ifndef TRAC_VERSION
#define TRAC_VERSION "0.0.0"
#endif

namespace trac {

namespace {

constexpr std::uint64_t kSplitSalt = 0x73706c6974ULL;

std::size_t even_floor(std::size_t x) { return x - x % 2; }

template <typename T>
T field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(std::string("record is missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(std::string("record field '") + key + "' has the wrong type");
  }
}

const Json& object_field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_object()) {
    throw Error(std::string("record is missing object '") + key + "'");
  }
  return *it;
}

std::size_t count_char(std::string_view s, char c) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), c));
}

std::size_t count_words(std::string_view s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    bool space = c == ' ' || c == '\n' || c == '\t';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

template <typename K>
Json histogram(const std::map<K, std::size_t>& h) {
  Json out = Json::object();
  for (const auto& [k, v] : h) {
    if constexpr (std::is_same_v<K, std::string>) {
      out[k] = v;
    } else {
      out[std::to_string(k)] = v;
    }
  }
  return out;
}

}  // namespace

DatasetRecord to_record(const ProblemInstance& p, const TemplateSet& t) {
  RenderedInstance r = render_instance(p, t);
  DatasetRecord rec;
  rec.id = p.id.empty() ? instance_id(p) : p.id;
  rec.task = p.kind;
  rec.context = std::move(r.context);
  rec.query = std::move(r.query);
  rec.label = p.label ? 1 : 0;
  for (AtomId a : p.initial_state) rec.initial_state.push_back(p.world.format_atom(a));
  for (ActionId a : p.actions) rec.actions.push_back(p.world.format_action(a));
  if (p.condition) rec.condition = p.world.format_condition(*p.condition);
  rec.meta = p.meta;
  rec.names = p.world.universe().names();
  return rec;
}

ProblemInstance from_record(const DatasetRecord& r) {
  ProblemInstance p{blocksworld::make_task(r.names)};
  p.kind = r.task;
  for (const std::string& a : r.initial_state) p.initial_state.push_back(p.world.parse_atom(a));
  for (const std::string& a : r.actions) p.actions.push_back(p.world.parse_action(a));
  if (r.condition) p.condition = p.world.parse_condition(*r.condition);
  p.label = r.label != 0;
  p.meta = r.meta;
  p.id = r.id;
  return p;
}

Json to_json(const DatasetRecord& r) {
  Json j;
  j["id"] = r.id;
  j["task"] = std::string(to_string(r.task));
  j["context"] = r.context;
  j["query"] = r.query;
  j["label"] = r.label;
  Json sym;
  sym["initial_state"] = r.initial_state;
  sym["actions"] = r.actions;
  sym["condition"] = r.condition ? Json(*r.condition) : Json(nullptr);
  j["symbolic"] = std::move(sym);
  Json meta;
  meta["objects"] = r.meta.objects;
  meta["length"] = r.meta.length;
  meta["ge_tag"] = r.meta.ge_tag;
  meta["pool"] = std::string(blocksworld::to_string(r.meta.pool));
  meta["names"] = r.names;
  meta["seed"] = r.meta.dataset_seed;
  meta["instance_seed"] = r.meta.instance_seed;
  meta["index"] = r.meta.index;
  meta["split"] = r.meta.split;
  j["meta"] = std::move(meta);
  return j;
}

DatasetRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw Error("record is not a JSON object");
  DatasetRecord r;
  r.id = field<std::string>(j, "id");
  r.task = parse_task_kind(field<std::string>(j, "task"));
  r.context = field<std::string>(j, "context");
  r.query = field<std::string>(j, "query");
  r.label = field<int>(j, "label");
  if (r.label != 0 && r.label != 1) throw Error("record label must be 0 or 1");
  const Json& sym = object_field(j, "symbolic");
  r.initial_state = field<std::vector<std::string>>(sym, "initial_state");
  r.actions = field<std::vector<std::string>>(sym, "actions");
  auto cond = sym.find("condition");
  if (cond != sym.end() && !cond->is_null()) {
    if (!cond->is_string()) throw Error("record field 'condition' has the wrong type");
    r.condition = cond->get<std::string>();
  }
  const Json& meta = object_field(j, "meta");
  r.meta.objects = field<std::size_t>(meta, "objects");
  r.meta.length = field<std::size_t>(meta, "length");
  r.meta.ge_tag = field<std::string>(meta, "ge_tag");
  r.meta.pool = blocksworld::parse_pool_kind(field<std::string>(meta, "pool"));
  r.names = field<std::vector<std::string>>(meta, "names");
  r.meta.dataset_seed = field<std::uint64_t>(meta, "seed");
  r.meta.instance_seed = field<std::uint64_t>(meta, "instance_seed");
  r.meta.index = field<std::size_t>(meta, "index");
  r.meta.split = field<std::string>(meta, "split");
  return r;
}

std::string serialize_record(const DatasetRecord& r) { return to_json(r).dump(); }

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_dataset(std::span<const DatasetRecord> records, const std::filesystem::path& path) {
  std::string buf;
  for (const DatasetRecord& r : records) {
    buf += serialize_record(r);
    buf += '\n';
  }
  write_text_file(path, buf);
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError({lineno, 1}, std::string("invalid JSON: ") + e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError({lineno, 1}, e.what());
    }
  }
  return out;
}

SplitSpec SplitSpec::defaults_for(std::size_t count) {
  if (count == 15000) return {};
  SplitSpec s;
  s.train = even_floor(count * 2 / 3);
  s.dev = even_floor(count * 2 / 15);
  s.test = count - s.train - s.dev;
  return s;
}

SplitSpec SplitSpec::parse(std::string_view text) {
  std::vector<std::size_t> parts;
  std::string cur;
  auto flush = [&] {
    if (cur.empty() || cur.find_first_not_of("0123456789") != std::string::npos) {
      throw Error("split sizes must look like TRAIN,DEV,TEST, got '" + std::string(text) + "'");
    }
    parts.push_back(std::stoull(cur));
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  if (parts.size() != 3) throw Error("split sizes must look like TRAIN,DEV,TEST");
  return {parts[0], parts[1], parts[2]};
}

namespace {

std::vector<std::string> split_labels(std::span<const DatasetRecord> records, SplitSpec spec,
                                      std::uint64_t seed) {
  if (spec.total() != records.size()) {
    throw Error("split sizes sum to " + std::to_string(spec.total()) + " but the dataset has " +
                std::to_string(records.size()) + " records");
  }
  if (spec.train % 2 || spec.dev % 2 || spec.test % 2) {
    throw Error("split sizes must be even to keep labels balanced");
  }
  std::vector<std::size_t> by_label[2];
  for (std::size_t i = 0; i < records.size(); ++i) by_label[records[i].label != 0].push_back(i);
  if (by_label[0].size() != by_label[1].size()) throw Error("dataset labels are not balanced");

  std::vector<std::string> out(records.size());
  SeededRng rng(derive_seed(seed, kSplitSalt));
  for (auto& group : by_label) {
    rng.shuffle(std::span<std::size_t>(group));
    std::size_t k = 0;
    for (; k < spec.train / 2; ++k) out[group[k]] = "train";
    for (; k < (spec.train + spec.dev) / 2; ++k) out[group[k]] = "dev";
    for (; k < group.size(); ++k) out[group[k]] = "test";
  }
  return out;
}

}  // namespace

Splits split_dataset(std::span<const DatasetRecord> records, SplitSpec spec, std::uint64_t seed) {
  std::vector<std::string> names = split_labels(records, spec, seed);
  Splits s;
  for (std::size_t i = 0; i < records.size(); ++i) {
    DatasetRecord r = records[i];
    r.meta.split = names[i];
    if (names[i] == "train") {
      s.train.push_back(std::move(r));
    } else if (names[i] == "dev") {
      s.dev.push_back(std::move(r));
    } else {
      s.test.push_back(std::move(r));
    }
  }
  return s;
}

void assign_splits(std::vector<DatasetRecord>& records, SplitSpec spec, std::uint64_t seed) {
  std::vector<std::string> names = split_labels(records, spec, seed);
  for (std::size_t i = 0; i < records.size(); ++i) records[i].meta.split = std::move(names[i]);
}

Json VerifyReport::to_json() const {
  Json j;
  j["ok"] = ok();
  j["records"] = records;
  j["true_labels"] = true_labels;
  j["balanced"] = balanced();
  j["label_mismatches"] = label_mismatches;
  j["render_mismatches"] = render_mismatches;
  j["duplicates"] = duplicates;
  j["other_issues"] = other_issues;
  Json list = Json::array();
  for (const VerifyIssue& i : issues) {
    Json e;
    e["line"] = i.line;
    e["id"] = i.id;
    e["kind"] = i.kind;
    e["detail"] = i.detail;
    list.push_back(std::move(e));
  }
  j["issues"] = std::move(list);
  return j;
}

namespace {

struct RecordCheck {
  std::vector<VerifyIssue> issues;
  std::string canonical;
};

RecordCheck check_record(const DatasetRecord& r, std::size_t line, const TemplateSet& t) {
  RecordCheck out;
  auto issue = [&](std::string kind, std::string detail) {
    out.issues.push_back({line, r.id, std::move(kind), std::move(detail)});
  };
  try {
    ProblemInstance p = from_record(r);
    out.canonical = canonical_form(p);
    std::string id = instance_id(p);
    if (id != r.id) issue("id", "expected " + id);
    auto violations = blocksworld::physical_violations(p.world, p.state());
    if (!violations.empty()) issue("symbolic", "illegal state: " + violations.front());
    RenderedInstance rendered = render_instance(p, t);
    if (rendered.context != r.context) issue("render", "context differs from re-rendered text");
    if (rendered.query != r.query) issue("render", "query differs from re-rendered text");
    bool label = compute_label(p);
    if (label != (r.label != 0)) {
      issue("label", "recorded " + std::to_string(r.label) + ", recomputed " + (label ? "1" : "0"));
    }
  } catch (const Error& e) {
    issue("symbolic", e.what());
  }
  return out;
}

}  // namespace

VerifyReport verify_records(std::span<const DatasetRecord> records, const TemplateSet& t,
                            std::size_t workers) {
  std::vector<RecordCheck> checks(records.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      checks[i] = check_record(records[i], i + 1, t);
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, records.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  VerifyReport rep;
  rep.records = records.size();
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].label != 0) ++rep.true_labels;
    for (VerifyIssue& issue : checks[i].issues) {
      if (issue.kind == "label") {
        ++rep.label_mismatches;
      } else if (issue.kind == "render") {
        ++rep.render_mismatches;
      } else {
        ++rep.other_issues;
      }
      rep.issues.push_back(std::move(issue));
    }
    if (!checks[i].canonical.empty() && !seen.insert(checks[i].canonical).second) {
      ++rep.duplicates;
      rep.issues.push_back({i + 1, records[i].id, "duplicate", "same instance as an earlier record"});
    }
  }
  return rep;
}

VerifyReport verify_dataset(const std::filesystem::path& path, std::size_t workers) {
  std::vector<DatasetRecord> records = read_dataset(path);
  return verify_records(records, TemplateSet::builtin(), workers);
}

Json DatasetStats::to_json() const {
  Json j;
  j["records"] = records;
  j["labels"] = histogram(labels);
  j["mean_context_sentences"] = mean_context_sentences;
  j["mean_context_words"] = mean_context_words;
  j["context_sentences"] = histogram(context_sentences);
  j["query_tokens"] = histogram(query_tokens);
  j["failure_index"] = histogram(failure_index);
  j["condition_shapes"] = histogram(condition_shapes);
  j["splits"] = histogram(splits);
  return j;
}

DatasetStats compute_stats(std::span<const DatasetRecord> records) {
  DatasetStats s;
  s.records = records.size();
  double sentences = 0;
  double words = 0;
  for (const DatasetRecord& r : records) {
    ++s.labels[r.label];
    std::size_t n = count_char(r.context, '.');
    ++s.context_sentences[n];
    sentences += static_cast<double>(n);
    words += static_cast<double>(count_words(r.context));
    ++s.query_tokens[count_words(r.query)];
    if (r.condition) {
      ++s.condition_shapes[r.condition->find('&') == std::string::npos ? "literal" : "conjunction"];
    }
    if (!r.meta.split.empty()) ++s.splits[r.meta.split];
    if (r.task == TaskKind::executability && r.label == 0) {
      ProblemInstance p = from_record(r);
      ExecutionResult res = execute(p.world, p.state(), p.actions);
      if (!res.success) ++s.failure_index[res.failed_index];
    }
  }
  if (s.records) {
    s.mean_context_sentences = sentences / static_cast<double>(s.records);
    s.mean_context_words = words / static_cast<double>(s.records);
  }
  return s;
}

Json to_json(const GenCounters& c) {
  Json j;
  j["condition_redraws"] = c.condition_redraws;
  j["goal_rejections"] = c.goal_rejections;
  j["budget_skips"] = c.budget_skips;
  j["sequence_redraws"] = c.sequence_redraws;
  j["planner_fallbacks"] = c.planner_fallbacks;
  j["full_resamples"] = c.full_resamples;
  j["duplicate_rejections"] = c.duplicate_rejections;
  return j;
}

Json to_json(const GenConfig& c) {
  Json j;
  j["name"] = c.name;
  j["task"] = std::string(to_string(c.task));
  j["objects"] = c.objects;
  j["length"] = c.length;
  j["count"] = c.count;
  j["seed"] = c.seed;
  j["pool"] = std::string(blocksworld::to_string(c.pool));
  j["shape"] = std::string(to_string(c.shape));
  j["ge_tag"] = c.ge_tag;
  return j;
}

namespace {

std::string hex(const unsigned char* data, unsigned int n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(n * 2);
  for (unsigned int i = 0; i < n; ++i) {
    out += digits[data[i] >> 4];
    out += digits[data[i] & 15];
  }
  return out;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_, data, n) != 1) throw Error("sha256 update failed");
  }
  std::string finish() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    if (EVP_DigestFinal_ex(ctx_, md, &n) != 1) throw Error("sha256 final failed");
    return hex(md, n);
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.finish();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Sha256 h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) h.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return h.finish();
}

std::vector<DatasetRecord> merge_datasets(const std::vector<std::vector<DatasetRecord>>& inputs,
                                          const std::vector<std::size_t>& ratio) {
  if (inputs.empty()) throw Error("nothing to merge");
  if (ratio.size() != inputs.size()) throw Error("need one ratio weight per input");
  std::size_t unit = SIZE_MAX;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (ratio[i] == 0) continue;
    std::size_t counts[2] = {0, 0};
    for (const DatasetRecord& r : inputs[i]) ++counts[r.label != 0];
    unit = std::min(unit, std::min(counts[0], counts[1]) / ratio[i]);
  }
  if (unit == SIZE_MAX) throw Error("ratio weights are all zero");

  std::vector<DatasetRecord> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::size_t want = unit * ratio[i];
    std::size_t taken[2] = {0, 0};
    for (const DatasetRecord& r : inputs[i]) {
      std::size_t& n = taken[r.label != 0];
      if (n == want) continue;
      if (!seen.insert(std::string(to_string(r.task)) + ":" + r.id).second) continue;
      ++n;
      out.push_back(r);
    }
    if (taken[0] != want || taken[1] != want) {
      throw Error("input " + std::to_string(i + 1) + " lacks enough distinct records for the ratio");
    }
  }
  return out;
}

std::vector<SuiteEntry> suite_plan(std::uint64_t base_seed, SuiteOptions options) {
  std::vector<SuiteEntry> out;
  for (GenConfig& cfg : ge_suite(base_seed, options)) {
    bool eval_only = cfg.ge_tag == "GE1" || cfg.ge_tag == "GE2" || cfg.ge_tag == "GE3" ||
                     cfg.ge_tag == "GE4-conj";
    SplitSpec split = eval_only ? SplitSpec::test_only(cfg.count) : SplitSpec::defaults_for(cfg.count);
    out.push_back({std::move(cfg), split});
  }
  return out;
}

std::vector<DatasetRecord> dataset_records(const Dataset& d, SplitSpec split, const TemplateSet& t) {
  std::vector<DatasetRecord> out;
  out.reserve(d.instances.size());
  for (const ProblemInstance& p : d.instances) out.push_back(to_record(p, t));
  assign_splits(out, split, d.config.seed);
  return out;
}

Json manifest_header(std::uint64_t base_seed) {
  const auto& pool = blocksworld::NamePool::builtin();
  Json j;
  j["tool"] = "trac";
  j["version"] = TRAC_VERSION;
  j["base_seed"] = base_seed;
  j["domain_sha256"] = sha256_hex(blocksworld::builtin_pddl());
  j["templates_version"] = TemplateSet::builtin().version();
  j["templates_sha256"] = sha256_hex(TemplateSet::builtin_text());
  j["names_sha256"] = sha256_hex(blocksworld::NamePool::builtin_text());
  Json pools;
  pools["standard"] = pool.get(blocksworld::PoolKind::standard);
  pools["unseen"] = pool.get(blocksworld::PoolKind::unseen);
  j["name_pools"] = std::move(pools);
  j["label_encoding"] = {{"true", 1}, {"false", 0}};
  return j;
}

Json run_suite(const std::filesystem::path& dir, std::uint64_t base_seed, std::size_t workers,
               SuiteOptions options, const ProgressFn& progress) {
  std::filesystem::create_directories(dir);
  Json manifest = manifest_header(base_seed);
  Json datasets = Json::array();
  for (const SuiteEntry& e : suite_plan(base_seed, options)) {
    if (progress) progress("generating " + e.config.name);
    Dataset d = gen_dataset(e.config, workers);
    std::vector<DatasetRecord> records = dataset_records(d, e.split);
    std::string file = e.config.name + ".jsonl";
    write_dataset(records, dir / file);
    DatasetStats stats = compute_stats(records);

    Json entry;
    entry["name"] = e.config.name;
    entry["file"] = file;
    entry["sha256"] = sha256_file(dir / file);
    entry["records"] = records.size();
    entry["config"] = to_json(e.config);
    entry["split"] = {{"train", e.split.train}, {"dev", e.split.dev}, {"test", e.split.test}};
    entry["counters"] = to_json(d.counters);
    entry["true_labels"] = stats.labels[1];
    entry["mean_context_sentences"] = stats.mean_context_sentences;
    entry["mean_context_words"] = stats.mean_context_words;
    datasets.push_back(std::move(entry));
  }
  manifest["datasets"] = std::move(datasets);
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace trac
