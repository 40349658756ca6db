"""Command-line interface: figure sweeps, one-off bound reports, selftest.

Exit codes: 0 on success, 1 on validation errors (bad flags, malformed
scenario or state files), 2 when the selftest finds a failing suite.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .bounds import (
    TripartiteScenario,
    ci_upper_bound,
    dc_capacity,
    maassen_uffink_bound,
    memory_bound,
    one_way_ci_pure,
    post_ci_bound,
)
from .entropy import von_neumann_entropy
from .measurement import ObservablePair, named_basis
from .optimize import OptimizerConfig
from .scenarios import parse_scenario, run_scenario
from .selftest import run_selftest
from .states import Ket, ket_to_density, load_state_file, partial_trace


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entrobound",
        description="Memory-assisted entropic uncertainty bounds and "
        "information-concentration sweeps.",
    )
    parser.add_argument("--seed", type=int, default=0, help="optimizer seed (default 0)")
    parser.add_argument("--restarts", type=int, default=32, help="optimizer restarts (default 32)")
    parser.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    fig2 = sub.add_parser("fig2", help="single-excitation family sweep over theta")
    fig2.add_argument("--phi", type=float, default=None, help="azimuthal angle in radians (default pi/4)")
    fig2.add_argument("--steps", type=int, default=201)
    fig2.add_argument("--out", required=True, help="CSV output path")
    fig2.add_argument("--ensemble-size", type=int, default=None, help="decomposition ensemble size")

    fig3 = sub.add_parser("fig3", help="pair-with-classical-ancilla sweep over theta")
    fig3.add_argument("--p", type=float, default=None, help="ancilla weight in [0,1] (default 1/3)")
    fig3.add_argument("--steps", type=int, default=201)
    fig3.add_argument("--out", required=True, help="CSV output path")
    fig3.add_argument("--discord-measured", choices=["A", "B"], default="B",
                      help="which side the discord measurement conditions on")

    fig4 = sub.add_parser("fig4", help="correlated-branch family sweep over alpha")
    fig4.add_argument("--steps", type=int, default=201)
    fig4.add_argument("--out", required=True, help="CSV output path")
    fig4.add_argument("--ensemble-size", type=int, default=None, help="decomposition ensemble size")

    bound = sub.add_parser("bound", help="evaluate bounds on a JSON state file")
    bound.add_argument("--state", required=True, help="JSON state file (matrix or ket)")
    bound.add_argument("--qbasis", default="z", help="first observable basis name")
    bound.add_argument("--rbasis", default="x", help="second observable basis name")
    bound.add_argument("--memory", choices=["B", "C"], default="C",
                       help="which party holds the quantum memory (tripartite states)")
    bound.add_argument("--ensemble-size", type=int, default=None)

    selftest = sub.add_parser("selftest", help="run the built-in invariant suites")
    selftest.add_argument("--full", action="store_true", help="1000 base draws instead of 100")
    return parser


def _scenario_doc(args: argparse.Namespace) -> str:
    doc = {
        "kind": args.command,
        "steps": args.steps,
        "out": args.out,
        "seed": args.seed,
        "restarts": args.restarts,
    }
    if args.command == "fig2" and args.phi is not None:
        doc["phi"] = args.phi
    if args.command == "fig3":
        if args.p is not None:
            doc["p"] = args.p
        doc["discord_measured"] = args.discord_measured
    if args.command in ("fig2", "fig4") and args.ensemble_size is not None:
        doc["ensemble_size"] = args.ensemble_size
    return json.dumps(doc)


def _run_figure(args: argparse.Namespace) -> int:
    cfg = parse_scenario(_scenario_doc(args))
    rows = run_scenario(cfg)
    if args.json:
        payload = {"kind": cfg.kind, "out": cfg.out, "rows": [asdict(r) for r in rows]}
        print(json.dumps(payload))
    else:
        print(f"{cfg.kind}: wrote {len(rows)} rows to {cfg.out}")
    return 0


def _run_bound(args: argparse.Namespace) -> int:
    state = load_state_file(args.state)
    pair = ObservablePair.from_bases(named_basis(args.qbasis), named_basis(args.rbasis))
    config = OptimizerConfig(restarts=args.restarts, seed=args.seed)
    is_ket = isinstance(state, Ket)
    rho = ket_to_density(state) if is_ket else state

    report: dict = {
        "dims": list(rho.dims),
        "pure_input": is_ket,
        "log2_inv_c": maassen_uffink_bound(pair),
    }
    if rho.subsystem_count == 2:
        mem = memory_bound(rho, pair)
        report.update(dict(mem.components))
        report["memory_bound"] = mem.bound
        report["dense_coding_capacity"] = dc_capacity(rho)
    elif rho.subsystem_count == 3:
        sc = TripartiteScenario(rho, pair)
        keep = (0, 1) if args.memory == "B" else (0, 2)
        mem = memory_bound(partial_trace(rho, keep), pair)
        report["memory_party"] = args.memory
        report["before_bound"] = mem.bound
        report["state_entropy_a"] = float(
            von_neumann_entropy(partial_trace(rho, (0,)))
        )
        upper = ci_upper_bound(sc)
        report["ci_upper_bound"] = upper
        if is_ket and rho.dims == (2, 2, 2):
            ci = one_way_ci_pure(state, args.ensemble_size, config)
            report["ci_one_way"] = ci
        else:
            ci = upper
        report["after_bound"] = post_ci_bound(sc, ci).bound
    else:
        raise ValueError(
            f"bound evaluation supports 2 or 3 subsystems, got {rho.subsystem_count}"
        )

    if args.json:
        print(json.dumps(report))
    else:
        for key, value in report.items():
            print(f"{key}: {value}")
    return 0


def _run_selftest(args: argparse.Namespace) -> int:
    results = run_selftest("full" if args.full else "quick")
    if args.json:
        print(json.dumps([asdict(r) for r in results]))
    else:
        for r in results:
            status = "PASS" if r.passed else f"FAIL ({r.failures} failures: {r.detail})"
            print(f"{r.name}: {status} [{r.draws} draws]")
        total_failures = sum(r.failures for r in results)
        print(f"suites: {len(results)}, failures: {total_failures}")
    return 0 if all(r.passed for r in results) else 2


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("fig2", "fig3", "fig4"):
            return _run_figure(args)
        if args.command == "bound":
            return _run_bound(args)
        return _run_selftest(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
