"""Python interface to the trac benchmark generator.

Records are returned as plain dicts with the same layout as the JSON Lines
files written by the `trac` command-line tool.
"""

import json

from . import _trac
from ._trac import (
    BudgetExceeded,
    Error,
    ParseError,
    PreconditionError,
    YieldFailure,
    builtin_domain_pddl,
    check_domain,
    count_configurations,
    execute,
    format_lm,
    ground_action_count,
    holds,
    is_optimal_prefix,
    optimal_cost,
    optimal_plans,
    sample_state,
)

__version__ = _trac.__version__

TASKS = ("projection", "executability", "planning", "goal_recognition")


def make_record(task, names, state, actions, condition=None):
    return json.loads(_trac.make_record(task, list(names), list(state), list(actions), condition))


def generate(task, objects=5, length=1, count=100, seed=0, pool="standard", shape="mixed",
             name="", workers=1):
    raw = _trac.generate(task, objects, length, count, seed, pool, shape, name, workers)
    return [json.loads(r) for r in raw]


def verify(records, workers=1):
    return json.loads(_trac.verify([json.dumps(r) for r in records], workers))


def stats(records):
    return json.loads(_trac.stats([json.dumps(r) for r in records]))


def read_dataset(path):
    return [json.loads(r) for r in _trac.read_dataset(str(path))]


def write_dataset(records, path):
    _trac.write_dataset([json.dumps(r) for r in records], str(path))


def suite_plan(seed):
    return [json.loads(c) for c in _trac.suite_plan(seed)]


def run_suite(out_dir, seed, workers=1, count=15000, small_count=3000):
    return json.loads(_trac.run_suite(str(out_dir), seed, workers, count, small_count))
