"""Plain-data payload builders shared by the CLI JSON output and the API.

Keeping one serialization path guarantees both surfaces emit bit-identical
numbers: floats go straight into ``json.dumps``/response bodies with no
intermediate rounding.
"""

from __future__ import annotations

from .engine import (
    ComparisonResult,
    Decomposition,
    SettlementEvent,
    SimulationTrace,
    value_decomposition,
)
from .optimizer import SolveReport
from .scenario_io import settlement_to_mapping


def allocation_payload(report: SolveReport) -> dict:
    return {
        "z": report.allocation.z.tolist(),
        "objective": report.allocation.objective,
    }


def solve_report_payload(report: SolveReport) -> dict:
    return {
        "time": report.time,
        "regime": report.regime,
        "status": report.status,
        "allocation": allocation_payload(report),
        "binding_constraints": sorted(report.binding_constraints),
        "demand_gap": report.demand_gap,
        "near_insolvent": report.near_insolvent,
    }


def trace_payload(trace: SimulationTrace) -> dict:
    decomposition = None
    if trace.settlement is not None:
        at = min(trace.points, key=lambda p: abs(p.t - trace.settlement.t_star))
        decomposition = decomposition_payload(value_decomposition(trace.scenario, at))
    return {
        "regime": trace.regime,
        "rule": trace.rule,
        "t_max": trace.config.t_max,
        "steps": trace.config.steps,
        "points": [
            {
                "t": p.t,
                "offers": p.offers.tolist(),
                "demand": p.demand,
                "solvency": p.solvency,
                "capacity": p.capacity,
                "buyer_value": p.buyer_value,
                "gompertz": p.gompertz,
            }
            for p in trace.points
        ],
        "settlement": settlement_to_mapping(trace.settlement),
        "decomposition_at_settlement": decomposition,
    }


def comparison_payload(result: ComparisonResult) -> dict:
    return {
        "decision": result.decision,
        "margin": result.margin,
        "threshold": result.threshold,
        "at_time": result.at_time,
        "flip_time": result.flip_time,
    }


def decomposition_payload(breakdown: Decomposition) -> dict:
    return {
        "terms": [
            {"performance": t.performance, "installment": t.installment, "value": t.value}
            for t in breakdown.terms
        ],
        "total": breakdown.total,
    }
