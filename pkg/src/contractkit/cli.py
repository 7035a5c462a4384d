"""Command-line front end.

Exit codes: 0 when a verdict holds (or a command succeeds), 1 when a
verdict fails, 2 on usage, parse or dimension errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import contracts, simulation
from .composition import compose
from .documents import (
    dump_contract,
    dump_system,
    dumps,
    load_contract,
    load_system,
    subspace_to_json,
)
from .errors import ContractkitError
from .system import consistent_subspace
from .trajectory import (
    DEFAULT_DT,
    DEFAULT_T_END,
    DrivingSignal,
    VehicleParams,
    csv_text,
    run_vehicle_experiment,
)

EXIT_HOLDS, EXIT_FAILS, EXIT_ERROR = 0, 1, 2


def _fmt_vector(v) -> str:
    return "  " + " ".join(str(x) for x in v)


def _basis_lines(V) -> list[str]:
    return [_fmt_vector(v) for v in V.vectors]


def _verdict_json(v: simulation.SimulationVerdict) -> dict:
    out = {
        "holds": v.holds,
        "failure_reason": None if v.failure_reason is None else str(v.failure_reason),
        "is_relation": v.is_relation,
    }
    if v.witness is not None:
        out["witness"] = {
            "left_dim": v.witness.left_dim,
            "right_dim": v.witness.right_dim,
            "relation": subspace_to_json(v.witness.relation),
        }
    return out


def _report_verdict(v: simulation.SimulationVerdict, args) -> int:
    if args.json:
        print(json.dumps(_verdict_json(v), indent=2))
    else:
        print(v.describe())
        if args.witness and v.witness is not None:
            w = v.witness
            print(f"witness dim {w.dim} in {w.left_dim}+{w.right_dim}")
            print(f"left projection dim {w.left_projection().dim}")
            for line in _basis_lines(w.relation):
                print(line)
    return EXIT_HOLDS if v.holds else EXIT_FAILS


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_consistent(args) -> int:
    V = consistent_subspace(load_system(args.system))
    if args.json:
        print(json.dumps(subspace_to_json(V), indent=2))
    else:
        print(f"dim {V.dim}")
        print("basis:")
        for line in _basis_lines(V):
            print(line)
    return EXIT_HOLDS


def cmd_compose(args) -> int:
    composed = compose(load_system(args.first), load_system(args.second))
    _write(dumps(dump_system(composed)), args.out)
    return EXIT_HOLDS


def cmd_simulates(args) -> int:
    return _report_verdict(simulation.simulates(load_system(args.first), load_system(args.second)), args)


def cmd_implements(args) -> int:
    return _report_verdict(contracts.implements(load_system(args.system), load_contract(args.contract)), args)


def cmd_compatible(args) -> int:
    verdict = contracts.is_compatible_environment(load_system(args.environment), load_contract(args.contract))
    return _report_verdict(verdict, args)


def cmd_refines(args) -> int:
    r = contracts.refines(load_contract(args.refined), load_contract(args.contract))
    if args.json:
        print(json.dumps({
            "holds": r.holds,
            "assumptions": _verdict_json(r.env_part),
            "guarantees": _verdict_json(r.guar_part),
        }, indent=2))
    else:
        print(r.describe())
        print(f"assumptions: {r.env_part.describe()}")
        print(f"guarantees: {r.guar_part.describe()}")
    return EXIT_HOLDS if r.holds else EXIT_FAILS


def cmd_saturate(args) -> int:
    _write(dumps(dump_contract(contracts.saturate(load_contract(args.contract)))), args.out)
    return EXIT_HOLDS


def _floats(text: str, count: int, what: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ContractkitError(f"{what}: expected {count} comma-separated numbers, got {text!r}") from None
    if len(values) != count:
        raise ContractkitError(f"{what}: expected {count} values, got {len(values)}")
    return values


def cmd_simulate(args) -> int:
    h, k, c = _floats(args.params, 3, "--params")
    x0 = _floats(args.x0, 4, "--x0")
    try:
        params = VehicleParams(h, k, c)
        result = run_vehicle_experiment(params, x0, DrivingSignal.step_then_sine(), args.dt, args.t_end)
    except ValueError as exc:
        raise ContractkitError(str(exc)) from None
    _write(csv_text(result), args.out)
    return EXIT_HOLDS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contractkit",
        description="Simulation and assume/guarantee contract checks for linear systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def verdict_flags(p):
        p.add_argument("--witness", action="store_true", help="print the witness relation")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("consistent", help="consistent subspace of a system")
    p.add_argument("system")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_consistent)

    p = sub.add_parser("compose", help="variable-sharing composition of two systems")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("simulates", help="is FIRST simulated by SECOND?")
    p.add_argument("first")
    p.add_argument("second")
    verdict_flags(p)
    p.set_defaults(func=cmd_simulates)

    p = sub.add_parser("implements", help="does SYSTEM implement CONTRACT?")
    p.add_argument("system")
    p.add_argument("contract")
    verdict_flags(p)
    p.set_defaults(func=cmd_implements)

    p = sub.add_parser("compatible", help="is ENVIRONMENT compatible with CONTRACT?")
    p.add_argument("environment")
    p.add_argument("contract")
    verdict_flags(p)
    p.set_defaults(func=cmd_compatible)

    p = sub.add_parser("refines", help="does REFINED refine CONTRACT?")
    p.add_argument("refined")
    p.add_argument("contract")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_refines)

    p = sub.add_parser("saturate", help="replace guarantees by assumptions ∘ guarantees")
    p.add_argument("contract")
    p.add_argument("--out")
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("simulate", help="vehicle-following experiment as CSV (t,v1,v2,e)")
    p.add_argument("--params", default="1,0.25,0.5", help="h,k,c")
    p.add_argument("--x0", default="1,2,0,1", help="s1,v1,s2,v2")
    p.add_argument("--dt", type=float, default=DEFAULT_DT)
    p.add_argument("--t-end", type=float, default=DEFAULT_T_END)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ContractkitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
