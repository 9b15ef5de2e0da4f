#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trac/blocksworld.h"
#include "trac/dataset.h"
#include "trac/domain.h"
#include "trac/error.h"
#include "trac/planner.h"
#include "trac/taskgen.h"
#include "trac/textgen.h"

namespace py = pybind11;
using namespace trac;

namespace {

// Records cross the boundary as JSON text; the Python side decodes them.
std::string record_json(const DatasetRecord& r) { return serialize_record(r); }

DatasetRecord parse_record(const std::string& text) { return record_from_json(Json::parse(text)); }

struct World {
  GroundTask task;
  State state;
};

World make_world(const std::vector<std::string>& names, const std::vector<std::string>& atoms) {
  GroundTask task = blocksworld::make_task(names);
  std::vector<AtomId> ids;
  for (const std::string& a : atoms) ids.push_back(task.parse_atom(a));
  State s = task.make_state(ids);
  auto bad = blocksworld::physical_violations(task, s);
  if (!bad.empty()) throw Error("illegal state: " + bad.front());
  return {task, s};
}

std::vector<std::string> format_state(const GroundTask& t, const State& s) {
  std::vector<std::string> out;
  for (AtomId a : s.atoms()) out.push_back(t.format_atom(a));
  return out;
}

ActionSequence parse_actions(const GroundTask& t, const std::vector<std::string>& actions) {
  ActionSequence seq;
  for (const std::string& a : actions) seq.push_back(t.parse_action(a));
  return seq;
}

GenConfig make_config(const std::string& task, std::size_t objects, std::size_t length, std::size_t count,
                      std::uint64_t seed, const std::string& pool, const std::string& shape,
                      const std::string& name) {
  GenConfig cfg;
  cfg.task = parse_task_kind(task);
  cfg.objects = objects;
  cfg.length = length;
  cfg.count = count;
  cfg.seed = seed;
  cfg.pool = blocksworld::parse_pool_kind(pool);
  cfg.shape = parse_condition_shape(shape);
  cfg.name = name.empty() ? std::string(to_string(cfg.task)) + "_L" + std::to_string(length) : name;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_trac, m) {
  m.doc() = "Native core of the trac benchmark generator";
  m.attr("__version__") = TRAC_VERSION;

  // Translators registered later are tried first, so the base class goes first.
  auto& error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", error.ptr());
  py::register_exception<YieldFailure>(m, "YieldFailure", error.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());

  m.def("builtin_domain_pddl", [] { return std::string(blocksworld::builtin_pddl()); });
  m.def(
      "check_domain",
      [](const std::string& text) {
        DomainSpec d = parse_domain(text);
        ValidationReport rep = validate_domain(d);
        py::dict out;
        out["ok"] = rep.ok();
        out["report"] = rep.str();
        out["canonical"] = to_pddl(d);
        return out;
      },
      py::arg("text"), "Parse and validate PDDL domain text.");

  m.def("count_configurations",
        [](std::size_t n) {
          // Python ints are arbitrary precision; go through a decimal string.
          unsigned __int128 c = blocksworld::count_configurations(n);
          std::string digits;
          do {
            digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(c % 10)));
            c /= 10;
          } while (c != 0);
          return py::int_(py::str(digits));
        },
        py::arg("m"));
  m.def(
      "sample_state",
      [](std::size_t n, std::uint64_t seed) {
        SeededRng rng(seed);
        GroundTask t = blocksworld::make_task(n);
        return format_state(t, blocksworld::configuration_to_state(t, blocksworld::sample_configuration(n, rng)));
      },
      py::arg("m"), py::arg("seed"), "Uniform random configuration over placeholder names B0..");
  m.def("ground_action_count", [](std::size_t n) { return blocksworld::make_task(n).actions().size(); },
        py::arg("m"));

  m.def(
      "execute",
      [](const std::vector<std::string>& names, const std::vector<std::string>& state,
         const std::vector<std::string>& actions) {
        World w = make_world(names, state);
        ExecutionResult r = execute(w.task, w.state, parse_actions(w.task, actions));
        py::dict out;
        out["success"] = r.success;
        out["failed_index"] = r.success ? py::object(py::none()) : py::object(py::int_(r.failed_index));
        out["state"] = format_state(w.task, r.state);
        return out;
      },
      py::arg("names"), py::arg("state"), py::arg("actions"));
  m.def(
      "holds",
      [](const std::vector<std::string>& names, const std::vector<std::string>& state,
         const std::string& condition) {
        World w = make_world(names, state);
        return eval_condition(w.state, w.task.parse_condition(condition));
      },
      py::arg("names"), py::arg("state"), py::arg("condition"));
  m.def(
      "optimal_cost",
      [](const std::vector<std::string>& names, const std::vector<std::string>& state,
         const std::string& goal) -> py::object {
        World w = make_world(names, state);
        Condition g = w.task.parse_condition(goal);
        PlanCost c = astar_cost(w.task, w.state, g, blocksworld::goal_heuristic(w.task, g),
                                default_bound(w.task));
        if (!c.is_finite()) return py::none();
        return py::int_(c.value());
      },
      py::arg("names"), py::arg("state"), py::arg("goal"), "Optimal plan length, or None.");
  m.def(
      "optimal_plans",
      [](const std::vector<std::string>& names, const std::vector<std::string>& state,
         const std::string& goal, std::size_t cap) {
        World w = make_world(names, state);
        PlanSet set = enumerate_optimal_plans(w.task, w.state, w.task.parse_condition(goal), cap);
        std::vector<std::vector<std::string>> out;
        for (const ActionSequence& p : set.plans) {
          std::vector<std::string> steps;
          for (ActionId a : p) steps.push_back(w.task.format_action(a));
          out.push_back(std::move(steps));
        }
        return out;
      },
      py::arg("names"), py::arg("state"), py::arg("goal"), py::arg("cap") = 100);
  m.def(
      "is_optimal_prefix",
      [](const std::vector<std::string>& names, const std::vector<std::string>& state,
         const std::string& goal, const std::vector<std::string>& actions) {
        World w = make_world(names, state);
        Condition g = w.task.parse_condition(goal);
        return is_optimal_prefix(w.task, w.state, g, parse_actions(w.task, actions),
                                 blocksworld::goal_heuristic(w.task, g), default_bound(w.task));
      },
      py::arg("names"), py::arg("state"), py::arg("goal"), py::arg("actions"));

  m.def(
      "make_record",
      [](const std::string& task, const std::vector<std::string>& names,
         const std::vector<std::string>& state, const std::vector<std::string>& actions,
         std::optional<std::string> condition) {
        ProblemInstance p = make_instance(parse_task_kind(task), names, state, actions, condition);
        return record_json(to_record(p));
      },
      py::arg("task"), py::arg("names"), py::arg("state"), py::arg("actions"),
      py::arg("condition") = py::none(),
      "Label and render a hand-written instance; returns the record as JSON text.");

  m.def(
      "generate",
      [](const std::string& task, std::size_t objects, std::size_t length, std::size_t count,
         std::uint64_t seed, const std::string& pool, const std::string& shape, const std::string& name,
         std::size_t workers) {
        GenConfig cfg = make_config(task, objects, length, count, seed, pool, shape, name);
        std::vector<DatasetRecord> records;
        {
          py::gil_scoped_release release;
          cfg.validate();
          Dataset d = gen_dataset(cfg, workers);
          records = dataset_records(d, SplitSpec::defaults_for(cfg.count));
        }
        std::vector<std::string> out;
        for (const DatasetRecord& r : records) out.push_back(record_json(r));
        return out;
      },
      py::arg("task"), py::arg("objects") = 5, py::arg("length") = 1, py::arg("count") = 100,
      py::arg("seed") = 0, py::arg("pool") = "standard", py::arg("shape") = "mixed",
      py::arg("name") = "", py::arg("workers") = 1);

  m.def(
      "verify",
      [](const std::vector<std::string>& records, std::size_t workers) {
        std::vector<DatasetRecord> rs;
        for (const std::string& r : records) rs.push_back(parse_record(r));
        VerifyReport rep;
        {
          py::gil_scoped_release release;
          rep = verify_records(rs, TemplateSet::builtin(), workers);
        }
        return rep.to_json().dump();
      },
      py::arg("records"), py::arg("workers") = 1, "Verification report as JSON text.");
  m.def(
      "stats",
      [](const std::vector<std::string>& records) {
        std::vector<DatasetRecord> rs;
        for (const std::string& r : records) rs.push_back(parse_record(r));
        return compute_stats(rs).to_json().dump();
      },
      py::arg("records"));
  m.def(
      "format_lm",
      [](const std::string& context, const std::string& query, bool label, const std::string& style) {
        LmExample ex = format_for_lm({context, query, label}, parse_lm_style(style));
        return py::make_tuple(ex.input, ex.target);
      },
      py::arg("context"), py::arg("query"), py::arg("label"), py::arg("style") = "separator");

  m.def(
      "read_dataset",
      [](const std::string& path) {
        std::vector<std::string> out;
        for (const DatasetRecord& r : read_dataset(path)) out.push_back(record_json(r));
        return out;
      },
      py::arg("path"));
  m.def(
      "write_dataset",
      [](const std::vector<std::string>& records, const std::string& path) {
        std::vector<DatasetRecord> rs;
        for (const std::string& r : records) rs.push_back(parse_record(r));
        write_dataset(rs, path);
      },
      py::arg("records"), py::arg("path"));
  m.def(
      "suite_plan",
      [](std::uint64_t seed) {
        std::vector<std::string> out;
        for (const SuiteEntry& e : suite_plan(seed)) out.push_back(to_json(e.config).dump());
        return out;
      },
      py::arg("seed"));
  m.def(
      "run_suite",
      [](const std::string& dir, std::uint64_t seed, std::size_t workers, std::size_t count,
         std::size_t small_count) {
        SuiteOptions opts;
        opts.count = count;
        opts.small_count = small_count;
        Json manifest;
        {
          py::gil_scoped_release release;
          manifest = run_suite(dir, seed, workers, opts);
        }
        return manifest.dump();
      },
      py::arg("out_dir"), py::arg("seed"), py::arg("workers") = 1, py::arg("count") = 15000,
      py::arg("small_count") = 3000);
}
