#!/usr/bin/env python3
"""Sweep concession dynamics and supplier reassessment speed on fig2_red.

Shows how the settlement moves when the supplier concedes later/slower
(concession delay/rate) or reassesses its own ceilings more slowly (phase
rate): outcomes degrade relative to the early-assessment red curve. Writes
a CSV table to stdout or --out.
"""

import argparse
import sys
from dataclasses import replace

from mediate.engine import SimulationConfig, simulate
from mediate.model import GompertzParams, PhasorConstraint
from mediate.scenario_io import load_preset


def sweep(out):
    base = load_preset("fig2_red").scenario
    out.write("concession_delay,concession_rate,supplier_phase_rate,t_star,units,money,buyer_value\n")
    for delay in (1.0, 2.0, 4.0):
        for rate in (5.0, 10.0, 20.0):
            for phase_rate in (0.75, 1.0, 1.5):
                scenario = replace(
                    base,
                    gompertz=GompertzParams(delay, rate),
                    supplier_solvency=PhasorConstraint(
                        base.supplier_solvency.core,
                        base.supplier_solvency.modulation,
                        phase_rate,
                    ),
                    supplier_capacity=PhasorConstraint(
                        base.supplier_capacity.core,
                        base.supplier_capacity.modulation,
                        phase_rate,
                    ),
                )
                event = simulate(scenario, SimulationConfig(steps=400)).settlement
                if event is None:
                    out.write(f"{delay},{rate},{phase_rate},,,,\n")
                    continue
                out.write(
                    f"{delay},{rate},{phase_rate},{event.t_star:.4f},"
                    f"{event.units_settled:.2f},{event.money_settled:.2f},"
                    f"{event.buyer_value:.2f}\n"
                )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", help="write the CSV here instead of stdout")
    args = parser.parse_args()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            sweep(fh)
        print(f"wrote {args.out}")
    else:
        sweep(sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
