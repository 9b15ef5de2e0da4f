import itertools
import json
import os
import subprocess
from collections import deque

import pytest

import trac

NAMES = ["Blue", "Magenta", "White"]
TOWER = ["clear(Blue)", "on(Blue, Magenta)", "on(Magenta, White)", "onTable(White)"]


def successors(state, names):
    """Plain-Python blocks world: yields (action, next_state)."""
    for x in names:
        if f"clear({x})" not in state:
            continue
        below = [y for y in names if f"on({x}, {y})" in state]
        if below:
            y = below[0]
            nxt = set(state) - {f"on({x}, {y})"} | {f"onTable({x})", f"clear({y})"}
            yield f"moveToTable({x}, {y})", frozenset(nxt)
        for z in names:
            if z == x or f"clear({z})" not in state:
                continue
            if below:
                y = below[0]
                if z == y:
                    continue
                nxt = set(state) - {f"on({x}, {y})", f"clear({z})"} | {f"on({x}, {z})", f"clear({y})"}
                yield f"move({x}, {y}, {z})", frozenset(nxt)
            else:
                nxt = set(state) - {f"onTable({x})", f"clear({z})"} | {f"on({x}, {z})"}
                yield f"moveFromTable({x}, {z})", frozenset(nxt)


def holds(state, literal):
    if literal.startswith("!"):
        return literal[1:] not in state
    return literal in state


def bfs_cost(state, goal, names):
    lits = [l.strip() for l in goal.split("&")]
    start = frozenset(state)
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        s, d = queue.popleft()
        if all(holds(s, l) for l in lits):
            return d
        for _, n in successors(s, names):
            if n not in seen:
                seen.add(n)
                queue.append((n, d + 1))
    return None


def all_states(names):
    start = frozenset(f"onTable({n})" for n in names) | {f"clear({n})" for n in names}
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for _, n in successors(s, names):
            if n not in seen:
                seen.add(n)
                queue.append(n)
    return seen


def test_counts():
    assert [trac.count_configurations(m) for m in range(1, 6)] == [1, 3, 13, 73, 501]
    assert len(all_states(NAMES)) == 13
    assert trac.ground_action_count(5) == 100
    assert trac.count_configurations(20) > 2**64


def test_domain_roundtrip():
    info = trac.check_domain(trac.builtin_domain_pddl())
    assert info["ok"]
    assert trac.check_domain(info["canonical"])["canonical"] == info["canonical"]
    with pytest.raises(trac.ParseError):
        trac.check_domain("(define (domain x)")


def test_execute_and_holds():
    r = trac.execute(NAMES, TOWER, ["moveToTable(Blue, Magenta)", "moveToTable(Blue, Magenta)"])
    assert not r["success"]
    assert r["failed_index"] == 1
    assert trac.holds(NAMES, TOWER, "on(Blue, Magenta) & !clear(White)")


def test_optimal_cost_matches_python_search():
    atoms = [f"clear({x})" for x in NAMES] + [f"onTable({x})" for x in NAMES]
    atoms += [f"on({x}, {y})" for x, y in itertools.permutations(NAMES, 2)]
    goals = atoms + ["!" + a for a in atoms]
    for state in sorted(all_states(NAMES), key=sorted):
        for goal in goals:
            assert trac.optimal_cost(NAMES, sorted(state), goal) == bfs_cost(state, goal, NAMES)


def test_plans_and_prefixes():
    plans = trac.optimal_plans(NAMES, TOWER, "on(White, Blue)")
    assert plans and all(len(p) == 3 for p in plans)
    for p in plans:
        assert trac.is_optimal_prefix(NAMES, TOWER, "on(White, Blue)", p[:1])
    assert not trac.is_optimal_prefix(NAMES, TOWER, "on(Blue, Magenta)", ["moveToTable(Blue, Magenta)"])


def test_make_record_worked_example():
    rec = trac.make_record("executability", ["Olive", "Yellow", "Indigo"],
                           ["onTable(Olive)", "on(Yellow, Olive)", "clear(Indigo)", "on(Indigo, Yellow)"],
                           ["moveToTable(Indigo, Yellow)"])
    assert rec["label"] == 1
    assert rec["query"] == "Jane moves the indigo block from the yellow block onto the table."
    assert list(rec) == ["id", "task", "context", "query", "label", "symbolic", "meta"]


def test_format_lm():
    assert trac.format_lm("A.", "B.", False, "separator") == ("<s> A. </s> B. </s>", "0")
    assert trac.format_lm("A.", "B.", True, "text2text") == ("A. B.", "Yes")


@pytest.mark.parametrize("task", trac.TASKS)
def test_generate_verify(task, tmp_path):
    records = trac.generate(task, objects=4, length=2, count=20, seed=5)
    assert len(records) == 20
    assert sum(r["label"] for r in records) == 10
    report = trac.verify(records)
    assert report["label_mismatches"] == 0 and report["render_mismatches"] == 0
    path = tmp_path / "d.jsonl"
    trac.write_dataset(records, path)
    assert trac.read_dataset(path) == records
    assert trac.stats(records)["records"] == 20
    flipped = [dict(r) for r in records]
    flipped[0]["label"] = 1 - flipped[0]["label"]
    assert trac.verify(flipped)["label_mismatches"] == 1


def test_generation_is_deterministic():
    a = trac.generate("goal_recognition", count=10, seed=8)
    b = trac.generate("goal_recognition", count=10, seed=8, workers=3)
    assert a == b


def test_suite_plan():
    plan = trac.suite_plan(1)
    assert len(plan) == 32
    assert sum(c["ge_tag"] == "none" for c in plan) == 12


def test_errors():
    with pytest.raises(trac.Error):
        trac.generate("juggling")
    with pytest.raises(trac.Error):
        trac.generate("projection", count=3)


@pytest.mark.skipif("TRAC_CLI" not in os.environ, reason="command-line tool not built")
def test_cli_generate_and_verify(tmp_path):
    cli = os.environ["TRAC_CLI"]
    out = tmp_path / "p.jsonl"
    subprocess.run([cli, "generate", "--task", "projection", "--count", "20", "--seed", "4",
                    "--out", str(out)], check=True, capture_output=True)
    lines = out.read_text().splitlines()
    assert len(lines) == 20
    assert json.loads(lines[0])["task"] == "projection"
    res = subprocess.run([cli, "verify", str(out)], capture_output=True, text=True)
    assert res.returncode == 0
    bad = subprocess.run([cli, "generate", "--task", "projection", "--count", "3", "--seed", "1"],
                         capture_output=True, text=True)
    assert bad.returncode == 1
    assert "error" in json.loads(bad.stderr)
