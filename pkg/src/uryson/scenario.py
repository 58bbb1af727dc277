"""Scenario files: operators, elements and admissible sets by name.

A scenario is YAML (JSON is accepted too, being a subset)::

    domain: finite:2          # or ecseq:J
    codomain: 2
    operators:
      T:
        kernel:               # kernel[i][j], one row per output coordinate
          - [abs, 0]
          - [0, abs]
      phi:
        codomain: 1
        kernel: [[abs, abs]]
      K:
        domain: ecseq:1
        kernel:
          - - {breakpoints: [[0, 0]], left_slope: -1, right_slope: 1}
        tail: [abs]
    elements:
      e: [1, 1]
      x: {prefix: [5], tail: 3}
    admissible_sets:
      Fe: {kind: fragments, of: e}
    suites: {seed: 7, trials: 20, resolution: 8, max_dim: 4}

A kernel entry is either a mapping with ``breakpoints`` and end slopes, a
rational ``c`` (the linear function ``c*t``), or one of ``abs``, ``pos``, ``neg``
(``|t|``, ``max(t, 0)``, ``max(-t, 0)``). Rationals may be written ``p/q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .lateral import (
    AdmissibleSet,
    c00,
    fragments_of,
    ideal_by_mask,
    null_set,
    whole_space,
)
from .lattice import EcSeq, Vec
from .operators import Domain, InvalidKernelError, UrysonOperator
from .plfn import PiecewiseLinearFn
from .rational import fmt_q, to_q

SUITE_DEFAULTS = {"seed": 0, "trials": 20, "resolution": 8, "max_dim": 4}


class ScenarioError(ValueError):
    """A scenario file is malformed or violates an operator invariant."""


@dataclass
class Scenario:
    domain: Domain
    codomain: int
    operators: dict = field(default_factory=dict)
    elements: dict = field(default_factory=dict)
    admissible_sets: dict = field(default_factory=dict)
    suites: dict = field(default_factory=lambda: dict(SUITE_DEFAULTS))
    # admissible-set specs as written, kept for round-tripping
    admissible_specs: dict = field(default_factory=dict)

    def operator(self, name: str) -> UrysonOperator:
        try:
            return self.operators[name]
        except KeyError:
            raise ScenarioError(f"unknown operator {name!r}") from None

    def admissible(self, name: str) -> AdmissibleSet:
        if name in self.admissible_sets:
            return self.admissible_sets[name]
        if name == "E":
            return whole_space(self.domain)
        if name == "c00" and not self.domain.is_finite:
            return c00()
        raise ScenarioError(f"unknown admissible set {name!r}")

    def element(self, ref: str, domain: Domain | None = None):
        """An element by name, or parsed from a literal.

        Literals: ``1,2/3,0`` (a vector), ``5,0|3`` (prefix 5,0 and tail 3),
        ``|3`` (constant 3), and ``0`` for the zero of ``domain``.
        """
        if ref in self.elements:
            return self.elements[ref]
        domain = domain or self.domain
        return parse_element_literal(ref, domain)


def parse_element_literal(text: str, domain: Domain):
    text = text.strip()
    try:
        if text == "0":
            return domain.zero()
        if "|" in text:
            head, _, tail = text.partition("|")
            prefix = [to_q(c) for c in head.split(",") if c.strip()]
            return EcSeq(tuple(prefix), to_q(tail))
        return Vec(tuple(to_q(c) for c in text.split(",")))
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"cannot read element {text!r}") from exc


_SHORTHANDS = {
    "abs": lambda: PiecewiseLinearFn.abs(),
    "pos": lambda: PiecewiseLinearFn(((0, 0),), 0, 1),
    "neg": lambda: PiecewiseLinearFn(((0, 0),), -1, 0),
}


def parse_fn(spec: Any, where: str) -> PiecewiseLinearFn:
    try:
        if isinstance(spec, dict):
            unknown = set(spec) - {"breakpoints", "left_slope", "right_slope"}
            if unknown:
                raise ScenarioError(f"{where}: unknown fields {sorted(unknown)}")
            pts = [(to_q(t), to_q(v)) for t, v in spec["breakpoints"]]
            return PiecewiseLinearFn(
                tuple(pts), to_q(spec.get("left_slope", 0)), to_q(spec.get("right_slope", 0))
            )
        if isinstance(spec, str) and spec.strip() in _SHORTHANDS:
            return _SHORTHANDS[spec.strip()]()
        return PiecewiseLinearFn.linear(to_q(spec))
    except ScenarioError:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise ScenarioError(f"{where}: bad function {spec!r} ({exc})") from exc


def fn_to_spec(fn: PiecewiseLinearFn) -> dict:
    return {
        "breakpoints": [[fmt_q(t), fmt_q(v)] for t, v in fn.breakpoints],
        "left_slope": fmt_q(fn.left_slope),
        "right_slope": fmt_q(fn.right_slope),
    }


def parse_operator(name: str, spec: dict, domain: Domain, codomain: int) -> UrysonOperator:
    if not isinstance(spec, dict) or "kernel" not in spec:
        raise ScenarioError(f"operator {name}: needs a kernel")
    unknown = set(spec) - {"domain", "codomain", "kernel", "tail"}
    if unknown:
        raise ScenarioError(f"operator {name}: unknown fields {sorted(unknown)}")
    dom = Domain.parse(spec["domain"]) if "domain" in spec else domain
    if dom != domain:
        raise ScenarioError(f"operator {name}: domain {dom} differs from scenario domain {domain}")
    m = int(spec.get("codomain", codomain))
    rows = spec["kernel"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ScenarioError(f"operator {name}: kernel must be a list of rows")
    kernel = tuple(
        tuple(parse_fn(c, f"operator {name}: kernel entry ({i + 1},{j + 1})") for j, c in enumerate(row))
        for i, row in enumerate(rows)
    )
    tail = None
    if spec.get("tail") is not None:
        tail = tuple(parse_fn(c, f"operator {name}: tail entry {i + 1}") for i, c in enumerate(spec["tail"]))
    try:
        return UrysonOperator(dom, m, kernel, tail)
    except (InvalidKernelError, ValueError) as exc:
        raise ScenarioError(f"operator {name}: {exc}") from exc


def operator_to_spec(T: UrysonOperator) -> dict:
    out = {
        "domain": str(T.domain),
        "codomain": T.m,
        "kernel": [[fn_to_spec(fn) for fn in row] for row in T.kernel],
    }
    if T.tail is not None:
        out["tail"] = [fn_to_spec(fn) for fn in T.tail]
    return out


def parse_element(name: str, spec: Any):
    try:
        if isinstance(spec, dict):
            return EcSeq(tuple(to_q(c) for c in spec.get("prefix", [])), to_q(spec.get("tail", 0)))
        if isinstance(spec, list):
            return Vec(tuple(to_q(c) for c in spec))
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"element {name}: {exc}") from exc
    raise ScenarioError(f"element {name}: expected a list or a prefix/tail mapping")


def element_to_spec(x) -> Any:
    if isinstance(x, Vec):
        return [fmt_q(c) for c in x.coords]
    return {"prefix": [fmt_q(c) for c in x.prefix], "tail": fmt_q(x.tail)}


def _build_admissible(name: str, spec: dict, sc: Scenario) -> AdmissibleSet:
    kind = spec.get("kind") if isinstance(spec, dict) else None
    if kind == "whole":
        return whole_space(sc.domain)
    if kind == "c00":
        if sc.domain.is_finite:
            raise ScenarioError(f"admissible set {name}: c00 needs a sequence domain")
        return c00()
    if kind == "ideal":
        mask = spec.get("mask")
        if not isinstance(mask, list):
            raise ScenarioError(f"admissible set {name}: ideal needs a mask list")
        return ideal_by_mask(sc.domain, mask)
    if kind == "fragments":
        ref = spec.get("of")
        if ref not in sc.elements:
            raise ScenarioError(f"admissible set {name}: unknown element {ref!r}")
        try:
            return fragments_of(sc.elements[ref], sc.domain)
        except ValueError as exc:
            raise ScenarioError(f"admissible set {name}: {exc}") from exc
    if kind == "null_set":
        ref = spec.get("operator")
        T = sc.operators.get(ref)
        if T is None:
            raise ScenarioError(f"admissible set {name}: unknown operator {ref!r}")
        if not T.is_positive():
            raise ScenarioError(f"admissible set {name}: N_T needs a positive operator")
        return null_set(T)
    raise ScenarioError(f"admissible set {name}: unknown kind {kind!r}")


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a mapping")
    unknown = set(data) - {"domain", "codomain", "operators", "elements", "admissible_sets", "suites"}
    if unknown:
        raise ScenarioError(f"unknown top-level fields {sorted(unknown)}")
    try:
        domain = Domain.parse(data.get("domain", "finite:1"))
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    sc = Scenario(domain, int(data.get("codomain", 1)))
    for name, spec in (data.get("operators") or {}).items():
        sc.operators[str(name)] = parse_operator(str(name), spec, domain, sc.codomain)
    for name, spec in (data.get("elements") or {}).items():
        if str(name) in sc.operators:
            raise ScenarioError(f"name {name!r} is used twice")
        sc.elements[str(name)] = parse_element(str(name), spec)
    for name, spec in (data.get("admissible_sets") or {}).items():
        if str(name) in sc.operators or str(name) in sc.elements:
            raise ScenarioError(f"name {name!r} is used twice")
        sc.admissible_sets[str(name)] = _build_admissible(str(name), spec, sc)
        sc.admissible_specs[str(name)] = spec
    suites = dict(SUITE_DEFAULTS)
    extra = set(data.get("suites") or {}) - set(SUITE_DEFAULTS)
    if extra:
        raise ScenarioError(f"unknown suite parameters {sorted(extra)}")
    suites.update({k: int(v) for k, v in (data.get("suites") or {}).items()})
    sc.suites = suites
    return sc


def scenario_to_dict(sc: Scenario) -> dict:
    return {
        "domain": str(sc.domain),
        "codomain": sc.codomain,
        "operators": {k: operator_to_spec(v) for k, v in sc.operators.items()},
        "elements": {k: element_to_spec(v) for k, v in sc.elements.items()},
        "admissible_sets": dict(sc.admissible_specs),
        "suites": dict(sc.suites),
    }


def loads_scenario(text: str) -> Scenario:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
        raise ScenarioError(f"parse error at {where}{getattr(exc, 'problem', exc)}") from exc
    return scenario_from_dict(data or {})


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from exc
    return loads_scenario(text)


def dump_scenario(sc: Scenario) -> str:
    return yaml.safe_dump(scenario_to_dict(sc), sort_keys=False)
