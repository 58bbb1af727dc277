from fractions import Fraction
from itertools import product
from pathlib import Path

import pytest

from conftest import S, V
from uryson.lattice import EcSeq, Vec
from uryson.scenario import (
    ScenarioError,
    dump_scenario,
    load_scenario,
    loads_scenario,
    parse_element_literal,
)
from uryson.operators import Domain

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def test_minimal_scenario_loads():
    sc = loads_scenario("domain: finite:1\ncodomain: 1\noperators:\n  T: {kernel: [[1]]}\n")
    assert sc.operator("T").apply(V(3)) == V(3)


def test_kernel_entry_not_vanishing_at_zero_is_named():
    text = """
domain: finite:1
operators:
  T:
    kernel:
      - - {breakpoints: [[0, 1]], left_slope: 0, right_slope: 0}
"""
    with pytest.raises(ScenarioError, match=r"operator T: kernel entry \(1,1\)"):
        loads_scenario(text)


def test_sequence_scenario_with_tail_loads_and_applies():
    text = """
domain: ecseq:2
operators:
  K: {kernel: [[1, abs]], tail: [pos]}
elements:
  x: {prefix: [5, -1], tail: 3}
"""
    sc = loads_scenario(text)
    assert sc.operator("K").apply(sc.element("x")) == V(9)


def test_parse_errors_report_position():
    with pytest.raises(ScenarioError, match=r"line 3, column 20"):
        loads_scenario("domain: finite:1\noperators:\n  T: {kernel: [[1]]]\n")


@pytest.mark.parametrize("text, message", [
    ("domain: finite:1\nbogus: 1\n", "unknown top-level"),
    ("domain: grid:2\n", "domain"),
    ("domain: finite:1\noperators:\n  T: {kernel: [[1, 2]]}\n", "operator T"),
    ("domain: finite:1\noperators:\n  T: {matrix: [[1]]}\n", "needs a kernel"),
    ("domain: finite:1\nelements:\n  x: 5\n", "element x"),
    ("domain: finite:2\nadmissible_sets:\n  D: {kind: fragments, of: nope}\n", "unknown element"),
    ("domain: finite:2\nadmissible_sets:\n  D: {kind: shapes}\n", "unknown kind"),
    ("domain: finite:2\nadmissible_sets:\n  D: {kind: c00}\n", "sequence domain"),
    ("domain: finite:1\noperators:\n  T: {kernel: [[1]]}\n"
     "admissible_sets:\n  D: {kind: null_set, operator: T}\n", "positive"),
    ("domain: finite:1\noperators:\n  T: {kernel: [[1]]}\nelements:\n  T: [1]\n", "used twice"),
    ("domain: finite:1\nsuites: {speed: 3}\n", "suite parameters"),
])
def test_invalid_scenarios_are_rejected(text, message):
    with pytest.raises(ScenarioError, match=message):
        loads_scenario(text)


def test_missing_file():
    with pytest.raises(ScenarioError, match="cannot read"):
        load_scenario("/nonexistent/scenario.yaml")


def test_element_literals():
    fin, seq = Domain("finite", 2), Domain("ecseq", 1)
    assert parse_element_literal("1,-2/3", fin) == V(1, Fraction(-2, 3))
    assert parse_element_literal("5,0|3", seq) == S([5, 0], 3)
    assert parse_element_literal("|3", seq) == S([], 3)
    assert parse_element_literal("0", fin) == V(0, 0)
    assert parse_element_literal("0", seq) == EcSeq.zero()
    with pytest.raises(ScenarioError):
        parse_element_literal("1,x", fin)


@pytest.mark.parametrize("name", ["demo.yaml", "sequence.yaml"])
def test_shipped_scenarios_round_trip(name):
    sc = load_scenario(SCENARIOS / name)
    again = loads_scenario(dump_scenario(sc))
    assert again.domain == sc.domain and again.suites == sc.suites
    assert again.elements == sc.elements
    assert set(again.admissible_sets) == set(sc.admissible_sets)
    grid = [Fraction(k, 2) for k in range(-6, 7)]
    for name, T in sc.operators.items():
        T2 = again.operator(name)
        if sc.domain.is_finite:
            probes = [Vec(c) for c in product(grid[::3], repeat=sc.domain.size)]
        else:
            probes = [EcSeq((a, b), t) for a in grid[::3] for b in grid[::4] for t in grid[::4]]
        assert all(T.apply(x) == T2.apply(x) for x in probes)


def test_unknown_names():
    sc = load_scenario(SCENARIOS / "demo.yaml")
    with pytest.raises(ScenarioError):
        sc.operator("nope")
    with pytest.raises(ScenarioError):
        sc.admissible("c00")
    assert sc.admissible("E").laterally_dense
