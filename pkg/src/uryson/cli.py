"""Command-line interface: ``uryson <subcommand> ...``.

Exit status is 0 on success, 1 when a check fails and 2 for usage or
scenario errors. Every number is printed as an exact ``p/q``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .bands import EXACT, GRID, band_project
from .calculus import BINARY_OPS, OPS
from .lateral import DEFAULT_RESOLUTION, check_admissible, continuous_part_at
from .lattice import ModelMismatchError, Vec
from .operators import InvalidKernelError, NotPositiveError
from .rational import fmt_q
from .report import Report, encode
from .scenario import Scenario, ScenarioError, load_scenario
from .suites import SUITES, UnknownSuiteError, run_suite


class UsageError(Exception):
    pass


def _vec_text(v: Vec) -> str:
    return " ".join(fmt_q(c) for c in v.coords)


def _emit(args, command: str, fields: dict) -> None:
    """Print ``fields`` as ``name: values`` lines or as one JSON object."""
    if args.format == "machine":
        print(json.dumps({"command": command, **encode(fields)}, sort_keys=True, separators=(",", ":")))
        return
    if len(fields) == 1:
        print(_vec_text(next(iter(fields.values()))))
        return
    for name, value in fields.items():
        print(f"{name}: {_vec_text(value)}")


def _scenario(args) -> Scenario:
    if not args.scenario:
        raise UsageError(f"{args.command} needs --scenario FILE")
    return load_scenario(args.scenario)


def _resolution(x, args) -> Optional[int]:
    if isinstance(x, Vec):
        return None
    return max(_base_resolution(args), x.prefix_len)


def _base_resolution(args) -> int:
    return DEFAULT_RESOLUTION if args.resolution is None else args.resolution


def cmd_eval(args) -> int:
    sc = _scenario(args)
    T = sc.operator(args.operator)
    x = sc.element(args.element, T.domain)
    _emit(args, "eval", {"value": T.apply(x)})
    return 0


def cmd_calc(args) -> int:
    sc = _scenario(args)
    binary = args.op in BINARY_OPS
    needed = 3 if binary else 2
    if len(args.operands) != needed:
        shape = "T S x" if binary else "T x"
        raise UsageError(f"calc {args.op} takes {shape}")
    T = sc.operator(args.operands[0])
    x = sc.element(args.operands[-1], T.domain)
    res = _resolution(x, args)
    if binary:
        value = OPS[args.op](T, sc.operator(args.operands[1]), x, res)
    else:
        value = OPS[args.op](T, x, res)
    _emit(args, f"calc {args.op}", {"value": value})
    return 0


def cmd_band_project(args) -> int:
    sc = _scenario(args)
    T, S = sc.operator(args.T), sc.operator(args.S)
    e = sc.element(args.element, T.domain)
    if args.mode == EXACT and args.eps is not None:
        raise UsageError("--eps only applies with --mode grid")
    value = band_project(T, S, e, args.mode, _resolution(e, args), args.eps)
    _emit(args, "band-project", {"pi": value.pi_part, "sigma": value.sigma_part})
    return 0


def cmd_decompose(args) -> int:
    sc = _scenario(args)
    T = sc.operator(args.operator)
    e = sc.element(args.element, T.domain)
    res = _resolution(e, args)
    d = continuous_part_at(T, e, res if res is not None else DEFAULT_RESOLUTION)
    _emit(args, "decompose", {"continuous": d.continuous_part, "singular": d.singular_part})
    return 0


def _print_report(args, report: Report) -> None:
    if args.format == "machine":
        sys.stdout.write(report.to_machine())
    else:
        sys.stdout.write(report.to_table())


def cmd_admissible(args) -> int:
    sc = _scenario(args)
    D = sc.admissible(args.name)
    if not args.check:
        info = {
            "name": D.name,
            "domain": str(D.domain),
            "laterally_dense": D.laterally_dense,
            "justification": D.justification,
            "samples": len(D.samples(_base_resolution(args))),
        }
        if args.format == "machine":
            print(json.dumps({"command": "admissible", **info}, sort_keys=True, separators=(",", ":")))
        else:
            for k, v in info.items():
                print(f"{k}: {v}")
        return 0
    report = check_admissible(D, _base_resolution(args))
    _print_report(args, report)
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    sc = load_scenario(args.scenario) if args.scenario else None
    seed = args.seed
    if seed is None:
        if args.format == "machine":
            raise UsageError("verify in machine format needs --seed")
        seed = sc.suites["seed"] if sc is not None else 0
    report = run_suite(sc, args.suite, seed, corrupt=args.inject_corruption,
                       trials=args.trials, resolution=args.resolution)
    _print_report(args, report)
    return 0 if report.passed else 1


def cmd_report(args) -> int:
    try:
        with open(args.file) as fh:
            report = Report.from_machine(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from exc
    except (json.JSONDecodeError, TypeError) as exc:
        raise UsageError(f"{args.file} is not a machine report: {exc}") from exc
    _print_report(args, report)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", metavar="FILE", help="scenario file (YAML or JSON)")
    common.add_argument("--format", choices=("table", "machine"), default="table")
    common.add_argument("--resolution", type=int,
                        help=f"free prefix coordinates for sequence fragments (default {DEFAULT_RESOLUTION})")

    parser = argparse.ArgumentParser(prog="uryson", description="Exact calculus of Uryson operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate T at x")
    p.add_argument("operator")
    p.add_argument("element")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("calc", parents=[common], help="lattice operation at a point")
    p.add_argument("op", choices=sorted(OPS))
    p.add_argument("operands", nargs="+", metavar="ARG", help="T [S] x")
    p.set_defaults(func=cmd_calc)

    p = sub.add_parser("band-project", parents=[common], help="π and σ parts of Te for the band of S")
    p.add_argument("T")
    p.add_argument("S")
    p.add_argument("element")
    p.add_argument("--mode", choices=(EXACT, GRID), default=EXACT)
    p.add_argument("--eps", help="grid parameter, e.g. 1/1024")
    p.set_defaults(func=cmd_band_project)

    p = sub.add_parser("decompose", parents=[common], help="laterally continuous and singular parts")
    p.add_argument("operator")
    p.add_argument("element")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("admissible", parents=[common], help="describe or check an admissible set")
    p.add_argument("name")
    p.add_argument("--check", action="store_true", help="check the closure rules on samples")
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("verify", parents=[common], help="run a randomized verification suite")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, help="override the scenario's trial count")
    p.add_argument("--inject-corruption", action="store_true",
                   help="negative control: add a cross term that breaks orthogonal additivity")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", parents=[common], help="render a saved machine report")
    p.add_argument("file")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ScenarioError, UnknownSuiteError, ModelMismatchError,
            NotPositiveError, InvalidKernelError, ValueError) as exc:
        print(f"uryson {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
