"""Time-stepped mediation dynamics: offers, settlement, peaks, comparisons.

At every grid time the supplier's feasible optimum is recomputed against the
constraints as currently perceived, then scaled by the Gompertz concession
ramp; the result is what the supplier is modelled to have on the table.
Settlement detection depends on the allocation regime:

* crossing (units-preferred) — the parties meet when cumulative unit offers
  first climb above the buyer's declining minimum demand;
* core_target (reimbursement-preferred) — settlement waits until unit
  offers sit at the buyer's fully assessed core demand and the money
  component has stopped moving (its capacity phase has settled).

Grid events are refined below grid resolution by bisection on continuous
re-evaluations, so coarse grids still localise events accurately. A run is
deterministic: identical inputs produce bit-identical traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import (
    AcceptanceResult,
    AlternateSupplierOffer,
    InvariantViolation,
    QUARTER_TURN,
    Scenario,
    UNITS_PREFERRED,
    acceptance_check,
    discount,
    gompertz_factor,
    phasor_eval,
    regime,
    require_simple_shape,
)
from .optimizer import SolveReport, optimize_at

RULE_CROSSING = "crossing"
RULE_CORE_TARGET = "core_target"

#: how close unit offers must sit to the core demand for the core_target rule
UNIT_SETTLEMENT_TOLERANCE = 0.5
#: bisection stops once the bracketing interval is this narrow
REFINE_WIDTH = 1e-6


@dataclass(frozen=True)
class SimulationConfig:
    t_max: float = math.pi
    steps: int = 400
    settlement_rule: str | None = None  # default: chosen from the regime

    def __post_init__(self):
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            raise InvariantViolation("simulation_config", "t_max must be positive and finite")
        if self.steps < 2:
            raise InvariantViolation("simulation_config", "steps must be >= 2")
        if self.settlement_rule not in (None, RULE_CROSSING, RULE_CORE_TARGET):
            raise InvariantViolation(
                "simulation_config", f"unknown settlement rule {self.settlement_rule!r}"
            )


@dataclass(frozen=True)
class TracePoint:
    t: float
    offers: np.ndarray  # Gompertz-scaled per-t optimum, (performances, installments)
    demand: float
    solvency: float
    capacity: float
    buyer_value: float
    gompertz: float


@dataclass(frozen=True)
class SettlementEvent:
    t_star: float
    units_settled: float
    money_settled: float
    buyer_value: float
    rule_used: str


@dataclass
class SimulationTrace:
    scenario: Scenario
    config: SimulationConfig
    regime: str
    rule: str
    points: list[TracePoint] = field(default_factory=list)
    settlement: SettlementEvent | None = None

    @property
    def times(self) -> list[float]:
        return [p.t for p in self.points]


def offers_at(scenario: Scenario, t: float) -> tuple[SolveReport, np.ndarray, float]:
    """Per-t optimum, the concession-scaled offers, and the ramp factor."""
    report = optimize_at(scenario, t)
    factor = gompertz_factor(scenario.gompertz, t)
    return report, report.allocation.z * factor, factor


def _unit_offers(scenario: Scenario, t: float) -> float:
    report, offers, _ = offers_at(scenario, t)
    total = 0.0
    for i, perf in enumerate(scenario.performances):
        if perf.kind == "units":
            total += float(offers[i].sum())
    return total


def _money_offers(scenario: Scenario, t: float) -> float:
    _, offers, _ = offers_at(scenario, t)
    total = 0.0
    for i, perf in enumerate(scenario.performances):
        if perf.kind == "money":
            total += float(offers[i].sum())
    return total


def _buyer_value(scenario: Scenario, t: float) -> float:
    report, _, factor = offers_at(scenario, t)
    return report.allocation.objective * factor


def _trace_point(scenario: Scenario, t: float) -> TracePoint:
    report, offers, factor = offers_at(scenario, t)
    return TracePoint(
        t=t,
        offers=offers,
        demand=phasor_eval(scenario.buyer_demand, t),
        solvency=phasor_eval(scenario.supplier_solvency, t),
        capacity=phasor_eval(scenario.supplier_capacity, t),
        buyer_value=report.allocation.objective * factor,
        gompertz=factor,
    )


def simulate(scenario: Scenario, config: SimulationConfig | None = None) -> SimulationTrace:
    """Walk the time grid, recording offers and detecting settlement."""
    config = config or SimulationConfig()
    require_simple_shape(scenario)
    scenario_regime = regime(scenario)
    rule = config.settlement_rule or (
        RULE_CROSSING if scenario_regime == UNITS_PREFERRED else RULE_CORE_TARGET
    )
    times = [config.t_max * i / config.steps for i in range(config.steps + 1)]
    trace = SimulationTrace(
        scenario=scenario,
        config=config,
        regime=scenario_regime,
        rule=rule,
        points=[_trace_point(scenario, t) for t in times],
    )
    trace.settlement = detect_settlement(trace)
    return trace


def _bisect(fn, lo: float, hi: float) -> float:
    """Root of a sign change of ``fn`` on [lo, hi]; fn(lo) < 0 <= fn(hi)."""
    for _ in range(200):
        if hi - lo <= REFINE_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        if fn(mid) < 0:
            lo = mid
        else:
            hi = mid
    return hi


def detect_settlement(trace: SimulationTrace) -> SettlementEvent | None:
    """Locate the settlement event on the trace, refined by bisection."""
    scenario = trace.scenario
    if trace.rule == RULE_CROSSING:
        gap = lambda t: _unit_offers(scenario, t) - phasor_eval(scenario.buyer_demand, t)
        previous = None
        for point in trace.points:
            value = gap(point.t)
            if value >= 0:
                if previous is None:
                    t_star = point.t
                else:
                    t_star = _bisect(gap, previous, point.t)
                return SettlementEvent(
                    t_star=t_star,
                    units_settled=_unit_offers(scenario, t_star),
                    money_settled=_money_offers(scenario, t_star),
                    buyer_value=_buyer_value(scenario, t_star),
                    rule_used=RULE_CROSSING,
                )
            previous = point.t
        return None

    core = scenario.buyer_demand.core
    stabilised_after = scenario.supplier_capacity.settling_time

    def readiness(t: float) -> float:
        # positive once unit offers sit at the core AND the money side has settled
        at_core = UNIT_SETTLEMENT_TOLERANCE - abs(_unit_offers(scenario, t) - core)
        return min(at_core, t - stabilised_after)

    previous = None
    for point in trace.points:
        if readiness(point.t) >= 0:
            if previous is None:
                t_star = point.t
            else:
                t_star = _bisect(readiness, previous, point.t)
            # money reported at its stabilised value, after every phase-out
            t_stable = max(
                t_star,
                scenario.buyer_demand.settling_time,
                scenario.supplier_solvency.settling_time,
                scenario.supplier_capacity.settling_time,
            )
            return SettlementEvent(
                t_star=t_star,
                units_settled=_unit_offers(scenario, t_star),
                money_settled=_money_offers(scenario, t_stable),
                buyer_value=_buyer_value(scenario, t_star),
                rule_used=RULE_CORE_TARGET,
            )
        previous = point.t
    return None


@dataclass(frozen=True)
class ValueTerm:
    performance: str
    installment: int
    value: float


@dataclass(frozen=True)
class Decomposition:
    terms: tuple[ValueTerm, ...]
    total: float


def value_decomposition(scenario: Scenario, point: TracePoint) -> Decomposition:
    """Each additive buyer-value term of the offers at one trace point."""
    require_simple_shape(scenario)
    unit, money = scenario.performances
    d1 = discount(scenario.discount, scenario.installments[0].delay)
    d2 = discount(scenario.discount, scenario.installments[1].delay)
    terms = (
        ValueTerm(unit.id, 1, unit.value_per_unit * d1 * float(point.offers[0, 0])),
        ValueTerm(unit.id, 2, unit.value_per_unit * d2 * float(point.offers[0, 1])),
        ValueTerm(money.id, 1, money.value_per_unit * d1 * float(point.offers[1, 0])),
    )
    return Decomposition(terms=terms, total=sum(term.value for term in terms))


def peak_scan(
    trace: SimulationTrace, performance_index: int, installment_index: int
) -> tuple[float, float]:
    """Grid argmax of one offer entry, refined by bisection on the slope sign.

    Ties take the earliest grid point; boundary maxima are returned as-is.
    """
    scenario = trace.scenario
    values = [float(p.offers[performance_index, installment_index]) for p in trace.points]
    times = trace.times
    peak = int(np.argmax(values))
    if peak == 0 or peak == len(values) - 1:
        return times[peak], values[peak]

    def entry(t: float) -> float:
        _, offers, _ = offers_at(scenario, t)
        return float(offers[performance_index, installment_index])

    step = times[1] - times[0]
    h = min(1e-6, step / 16.0)
    slope = lambda t: (entry(t + h) - entry(t - h)) / (2.0 * h)
    lo, hi = times[peak - 1], times[peak + 1]
    if slope(lo) <= 0 or slope(hi) >= 0:
        return times[peak], values[peak]
    t_peak = _bisect(lambda t: -slope(t), lo, hi)
    candidates = [(times[peak], values[peak]), (t_peak, entry(t_peak))]
    return max(candidates, key=lambda pair: pair[1])


@dataclass(frozen=True)
class ComparisonResult:
    decision: str
    margin: float
    threshold: float
    at_time: float
    flip_time: float | None


def compare_alternate(
    trace: SimulationTrace,
    offer: AlternateSupplierOffer,
    point: TracePoint | None = None,
) -> ComparisonResult:
    """Accept/reject verdict at one point plus the earliest staying time.

    Defaults to the settlement moment when one exists, else the end of the
    trace. The flip time is the first instant the offered value strictly
    exceeds the switch threshold, bisection-refined between grid points.
    """
    scenario = trace.scenario
    if point is None:
        if trace.settlement is not None:
            at_time = trace.settlement.t_star
            offered = trace.settlement.buyer_value
        else:
            at_time = trace.points[-1].t
            offered = trace.points[-1].buyer_value
    else:
        at_time = point.t
        offered = point.buyer_value
    verdict: AcceptanceResult = acceptance_check(offered, offer, scenario.discount)

    advantage = lambda t: _buyer_value(scenario, t) - verdict.threshold
    flip_time = None
    previous = None
    for trace_point in trace.points:
        if trace_point.buyer_value - verdict.threshold > 0:
            flip_time = (
                trace_point.t if previous is None else _bisect(advantage, previous, trace_point.t)
            )
            break
        previous = trace_point.t
    return ComparisonResult(
        decision=verdict.decision,
        margin=verdict.margin,
        threshold=verdict.threshold,
        at_time=at_time,
        flip_time=flip_time,
    )
