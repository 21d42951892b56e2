"""Optimal settlement allocations at a given mediation time.

Two independent routes compute the allocation. `build_lp` assembles the
supply-side constraint program (installment caps, the during-performance
spend ceiling, the post-performance capacity ceiling) and `simplex_solve`
finds its vertex optimum; `analytic_oracle` evaluates the closed forms the
constraint structure admits. `optimize_at` picks the solve strategy from the
scenario's regime:

* units_preferred — late replacement units out-value reimbursement per
  contract dollar, so the LP maximises buyer value directly. The buyer's
  minimum-demand floor is deliberately NOT a feasibility row: early in
  mediation the supply ceilings make it unreachable, so it is treated as a
  target whose shortfall is reported as ``demand_gap``.
* reimbursement_preferred — units are first pushed to the lesser of the
  perceived demand and the supply ceilings (most valuable schedule first),
  then the reimbursement takes whatever post-performance capacity remains.
  A single-objective LP would over-allocate units here because forgoing a
  unit frees only its cost margin of capacity; the lexicographic rule is
  authoritative and the report carries a diagnostic flag instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    Allocation,
    EPSILON,
    REIMBURSEMENT_PREFERRED,
    Scenario,
    UNITS_PREFERRED,
    contract_value,
    discount,
    near_insolvency,
    phasor_eval,
    regime,
    require_simple_shape,
)
from .simplex import INFEASIBLE, OPTIMAL, LinearProgram, SimplexResult, simplex_solve

DEMAND = "demand"
SOLVENCY = "solvency_S"
CAPACITY = "capacity_R"

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible_demand_relaxed"
STATUS_UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpMetadata:
    """Context the LP itself cannot carry: solve time, regime, demand target."""

    time: float
    regime: str
    demand_target: float
    lexicographic_money: bool


@dataclass(frozen=True)
class SolveReport:
    allocation: Allocation
    status: str
    binding_constraints: frozenset[str]
    demand_gap: float
    regime: str
    time: float
    near_insolvent: bool


def cap_label(installment_index: int) -> str:
    return f"cap_{installment_index}"


def build_lp(
    scenario: Scenario, t: float, regime_override: str | None = None
) -> tuple[LinearProgram, LpMetadata]:
    """Supply-side LP for the two-installment units + reimbursement shape.

    Rows: per-installment unit caps (finite ones only), the spend ceiling on
    alternative units, and the post-performance capacity ceiling covering
    both the unit cost margin and the reimbursement.
    """
    require_simple_shape(scenario)
    solve_regime = regime_override or regime(scenario)
    unit, money = scenario.performances
    d1 = discount(scenario.discount, scenario.installments[0].delay)
    d2 = discount(scenario.discount, scenario.installments[1].delay)
    objective = np.array(
        [unit.value_per_unit * d1, unit.value_per_unit * d2, money.value_per_unit * d1]
    )
    rows: list[list[float]] = []
    rhs: list[float] = []
    labels: list[str] = []
    for m_index, cap in enumerate(scenario.unit_caps, start=1):
        if math.isfinite(cap):
            coeffs = [0.0, 0.0, 0.0]
            coeffs[m_index - 1] = 1.0
            rows.append(coeffs)
            rhs.append(cap)
            labels.append(cap_label(m_index))
    alt_cost = unit.cost_per_unit
    rows.append([alt_cost, alt_cost, 0.0])
    rhs.append(phasor_eval(scenario.supplier_solvency, t))
    labels.append(SOLVENCY)
    margin = alt_cost - scenario.contract_unit_cost
    rows.append([margin, margin, 1.0])
    rhs.append(phasor_eval(scenario.supplier_capacity, t))
    labels.append(CAPACITY)
    lp = LinearProgram(
        objective=objective,
        lhs=np.array(rows),
        rhs=np.array(rhs),
        variable_names=("z_1_1", "z_1_2", "z_2_1"),
        row_names=tuple(labels),
    )
    meta = LpMetadata(
        time=t,
        regime=solve_regime,
        demand_target=phasor_eval(scenario.buyer_demand, t),
        lexicographic_money=solve_regime == REIMBURSEMENT_PREFERRED,
    )
    return lp, meta


def _binding_labels(lp: LinearProgram, meta: LpMetadata, x: np.ndarray) -> frozenset[str]:
    labels = set()
    residuals = lp.rhs - lp.lhs @ x
    for name, slack, bound in zip(lp.row_names, residuals, lp.rhs):
        if abs(slack) <= EPSILON * max(1.0, abs(bound)):
            labels.add(name)
    units_total = float(x[0] + x[1])
    if abs(units_total - meta.demand_target) <= EPSILON * max(1.0, abs(meta.demand_target)):
        labels.add(DEMAND)
    return frozenset(labels)


def _lexicographic_units(
    scenario: Scenario, lp: LinearProgram, meta: LpMetadata
) -> SimplexResult:
    # stage 1: most valuable unit schedule within supply, clamped at demand
    unit_lp = LinearProgram(
        objective=lp.objective[:2],
        lhs=np.vstack([lp.lhs[:, :2], [[1.0, 1.0]]]),
        rhs=np.concatenate([lp.rhs, [meta.demand_target]]),
        variable_names=lp.variable_names[:2],
        row_names=lp.row_names + (DEMAND,),
    )
    return simplex_solve(unit_lp)


def _report_failure(scenario: Scenario, meta: LpMetadata, status: str) -> SolveReport:
    zeros = np.zeros((len(scenario.performances), len(scenario.installments)))
    return SolveReport(
        allocation=Allocation(z=zeros, objective=0.0),
        status=status,
        binding_constraints=frozenset(),
        demand_gap=max(0.0, meta.demand_target),
        regime=meta.regime,
        time=meta.time,
        near_insolvent=near_insolvency(scenario, meta.time),
    )


def optimize_at(
    scenario: Scenario, t: float, regime_override: str | None = None
) -> SolveReport:
    """Optimal allocation against the constraints as perceived at time ``t``."""
    lp, meta = build_lp(scenario, t, regime_override)
    if meta.regime == UNITS_PREFERRED:
        result = simplex_solve(lp)
        if result.status != OPTIMAL:
            return _report_failure(
                scenario,
                meta,
                STATUS_INFEASIBLE if result.status == INFEASIBLE else STATUS_UNBOUNDED,
            )
        x = result.x
    else:
        stage = _lexicographic_units(scenario, lp, meta)
        if stage.status != OPTIMAL:
            return _report_failure(
                scenario,
                meta,
                STATUS_INFEASIBLE if stage.status == INFEASIBLE else STATUS_UNBOUNDED,
            )
        units = stage.x
        margin = scenario.unit_performance.cost_per_unit - scenario.contract_unit_cost
        remaining = phasor_eval(scenario.supplier_capacity, t) - margin * float(units.sum())
        x = np.array([units[0], units[1], max(0.0, remaining)])
    z = np.zeros((len(scenario.performances), len(scenario.installments)))
    z[0, 0], z[0, 1], z[1, 0] = x
    allocation = Allocation(z=z, objective=contract_value(scenario, z))
    units_total = float(x[0] + x[1])
    return SolveReport(
        allocation=allocation,
        status=STATUS_OPTIMAL,
        binding_constraints=_binding_labels(lp, meta, x),
        demand_gap=max(0.0, meta.demand_target - units_total),
        regime=meta.regime,
        time=t,
        near_insolvent=near_insolvency(scenario, t),
    )


def analytic_oracle(scenario: Scenario, t: float) -> Allocation:
    """Closed-form optimum, used to cross-validate the LP route.

    Negative closed-form quantities clamp to zero (the corresponding ceiling
    is exhausted); no LP machinery is involved.
    """
    require_simple_shape(scenario)
    solve_regime = regime(scenario)
    unit, _ = scenario.performances
    alt_cost = unit.cost_per_unit
    margin = alt_cost - scenario.contract_unit_cost
    cap_first, cap_second = scenario.unit_caps
    solvency = phasor_eval(scenario.supplier_solvency, t)
    capacity = phasor_eval(scenario.supplier_capacity, t)
    if solve_regime == UNITS_PREFERRED:
        first = min(cap_first, max(0.0, solvency / alt_cost))
        second = max(0.0, (solvency - alt_cost * first) / alt_cost)
        if math.isfinite(cap_second):
            second = min(second, cap_second)
        reimburse = max(0.0, capacity - margin * (first + second))
    else:
        demand = phasor_eval(scenario.buyer_demand, t)
        first = min(cap_first, max(0.0, demand))
        second = max(0.0, demand - first)
        if math.isfinite(cap_second):
            second = min(second, cap_second)
        reimburse = max(0.0, capacity - margin * demand)
    z = np.zeros((len(scenario.performances), len(scenario.installments)))
    z[0, 0], z[0, 1], z[1, 0] = first, second, reimburse
    return Allocation(z=z, objective=contract_value(scenario, z))
