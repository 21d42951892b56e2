"""Command-line interface: solve, simulate, replicate, compare, serve.

Exit codes are part of the contract: 0 success, 1 input problem (missing or
invalid scenario, bad flags, busy port), 2 regime tie. Human output rounds
currency and units to 2 decimals and times to 4; ``--json`` switches to the
full-precision payloads the HTTP API serves.
"""

from __future__ import annotations

import argparse
import json
import socket
import sys
from pathlib import Path

from .engine import SimulationConfig, compare_alternate, simulate
from .model import ModelError, RegimeTieError
from .optimizer import optimize_at
from .payloads import comparison_payload, solve_report_payload, trace_payload
from .replication import FIGURES, all_passed, replicate_all, replicate_figure
from .scenario_io import (
    ScenarioDocument,
    export_trace,
    list_presets,
    resolve_scenario,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_TIE = 2


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


def _load_document(args) -> ScenarioDocument:
    ref = args.scenario_flag or args.scenario
    if not ref:
        raise FileNotFoundError("no scenario given (pass a file path or preset name)")
    return resolve_scenario(ref)


def _add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "scenario", nargs="?", help="scenario file path or bundled preset name"
    )
    parser.add_argument(
        "--scenario", dest="scenario_flag", metavar="FILE", help="same as the positional form"
    )


def _cmd_solve(args) -> int:
    try:
        doc = _load_document(args)
        report = optimize_at(doc.scenario, args.time)
    except RegimeTieError as exc:
        print(f"regime tie: {exc}", file=sys.stderr)
        return EXIT_TIE
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    if args.json:
        print(json.dumps(solve_report_payload(report)))
        return EXIT_OK
    s = doc.scenario
    print(f"time: {report.time:.4f}")
    print(f"regime: {report.regime}")
    print(f"status: {report.status}")
    print(f"near-insolvent at t: {report.near_insolvent}")
    print("allocation:")
    for i, perf in enumerate(s.performances):
        for j, inst in enumerate(s.installments):
            quantity = report.allocation.z[i, j]
            if perf.kind == "money" and j > 0:
                continue  # structurally absent in the simple shape
            unit_label = "units" if perf.kind == "units" else "USD"
            print(f"  {perf.id}[{inst.index}] = {quantity:.2f} {unit_label}")
    print(f"objective: {report.allocation.objective:.2f}")
    print(f"binding: {', '.join(sorted(report.binding_constraints)) or 'none'}")
    print(f"demand gap: {report.demand_gap:.2f}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    try:
        doc = _load_document(args)
        config = doc.simulation or SimulationConfig()
        if args.t_max is not None or args.steps is not None:
            config = SimulationConfig(
                t_max=args.t_max if args.t_max is not None else config.t_max,
                steps=args.steps if args.steps is not None else config.steps,
                settlement_rule=config.settlement_rule,
            )
        trace = simulate(doc.scenario, config)
    except RegimeTieError as exc:
        print(f"regime tie: {exc}", file=sys.stderr)
        return EXIT_TIE
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    if args.out:
        Path(args.out).write_text(export_trace(trace, args.format), encoding="utf-8")
    if args.json:
        print(json.dumps(trace_payload(trace)))
        return EXIT_OK
    print(f"regime: {trace.regime}")
    print(f"points: {len(trace.points)}")
    event = trace.settlement
    if event is None:
        print(f"no settlement within t_max = {trace.config.t_max:.4f}")
    else:
        print(
            f"settlement: t* = {event.t_star:.4f}, units = {event.units_settled:.2f}, "
            f"money = {event.money_settled:.2f}, G = {event.buyer_value:.2f} "
            f"(rule: {event.rule_used})"
        )
    if args.out:
        print(f"trace written to {args.out} ({args.format})")
    return EXIT_OK


def _cmd_replicate(args) -> int:
    try:
        checks = replicate_all() if args.figure == "all" else replicate_figure(args.figure)
    except ValueError as exc:
        return _fail(str(exc))
    width = max(len(c.name) for c in checks)
    for c in checks:
        verdict = "INFO" if c.informational else ("PASS" if c.passed else "FAIL")
        print(f"{c.figure}  {c.name:<{width}}  expected {c.expected}  computed {c.computed}  {verdict}")
    ok = all_passed(checks)
    print(f"overall: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_INPUT


def _cmd_compare(args) -> int:
    try:
        doc = _load_document(args)
        offer = doc.alternate_offer
        if args.alternate:
            import yaml

            from .scenario_io import alternate_offer_from_mapping

            raw = yaml.safe_load(Path(args.alternate).read_text(encoding="utf-8"))
            block = raw.get("alternate_offer", raw) if isinstance(raw, dict) else None
            if not isinstance(block, dict):
                return _fail(f"{args.alternate} does not contain an alternate_offer mapping")
            offer = alternate_offer_from_mapping(block, "alternate_offer")
        if offer is None:
            return _fail("no alternate offer: embed alternate_offer in the scenario or pass --alternate")
        config = doc.simulation or SimulationConfig()
        trace = simulate(doc.scenario, config)
        result = compare_alternate(trace, offer)
    except RegimeTieError as exc:
        print(f"regime tie: {exc}", file=sys.stderr)
        return EXIT_TIE
    except (OSError, ValueError, TypeError) as exc:
        return _fail(str(exc))
    if args.json:
        print(json.dumps(comparison_payload(result)))
        return EXIT_OK
    print(f"threshold: {result.threshold:.2f}")
    print(f"at t = {result.at_time:.4f}: {result.decision} (margin {result.margin:.2f})")
    if result.flip_time is None:
        print("the supplier's offers never beat the alternate within the horizon")
    else:
        print(f"decision flips to stay_with_supplier at t = {result.flip_time:.4f}")
    return EXIT_OK


def _port_is_free(host: str, port: int) -> bool:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            probe.bind((host, port))
        except OSError:
            return False
    return True


def _cmd_serve(args) -> int:
    if not _port_is_free(args.host, args.port):
        return _fail(f"cannot bind {args.host}:{args.port} (already in use?)")
    import uvicorn

    from .service import create_app

    app = create_app(persist_dir=args.store_dir, console_dir=args.console_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        return _fail(str(exc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mediate",
        description="Settlement allocation optimizer and mediation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="optimal allocation at one mediation time")
    _add_scenario_arguments(solve)
    solve.add_argument("--time", type=float, default=0.0, help="mediation time (default 0)")
    solve.add_argument("--json", action="store_true", help="full-precision JSON output")
    solve.set_defaults(func=_cmd_solve)

    simulate_cmd = sub.add_parser("simulate", help="run the time-stepped mediation")
    _add_scenario_arguments(simulate_cmd)
    simulate_cmd.add_argument("--t-max", type=float, default=None)
    simulate_cmd.add_argument("--steps", type=int, default=None)
    simulate_cmd.add_argument("--out", metavar="FILE", help="write the trace to this file")
    simulate_cmd.add_argument("--format", choices=("csv", "json"), default="csv")
    simulate_cmd.add_argument("--json", action="store_true", help="print the trace payload as JSON")
    simulate_cmd.set_defaults(func=_cmd_simulate)

    replicate = sub.add_parser("replicate", help="grade the bundled presets' reference checkpoints")
    replicate.add_argument("figure", choices=FIGURES + ("all",))
    replicate.set_defaults(func=_cmd_replicate)

    compare = sub.add_parser("compare", help="score the settlement against an alternate supplier")
    _add_scenario_arguments(compare)
    compare.add_argument("--alternate", metavar="FILE", help="YAML file with an alternate_offer mapping")
    compare.add_argument("--json", action="store_true")
    compare.set_defaults(func=_cmd_compare)

    serve = sub.add_parser("serve", help="start the JSON HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--store-dir", default=None, help="persist saved scenarios to this directory")
    serve.add_argument("--console-dir", default=None, help="serve the mediator console from this directory")
    serve.set_defaults(func=_cmd_serve)

    presets = sub.add_parser("presets", help="list bundled presets")
    presets.set_defaults(func=lambda args: (print("\n".join(list_presets())), EXIT_OK)[1])

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ModelError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
