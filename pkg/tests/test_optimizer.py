import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import build_scenario
from mediate.model import QUARTER_TURN, REIMBURSEMENT_PREFERRED, UNITS_PREFERRED, phasor_eval
from mediate.optimizer import (
    CAPACITY,
    DEMAND,
    SOLVENCY,
    analytic_oracle,
    build_lp,
    optimize_at,
)
from mediate.simplex import simplex_solve

PHASE_OUT = 1.2  # past both supplier settling times for the default scenario (q=1.5)


def rhs_by_label(lp):
    return dict(zip(lp.row_names, lp.rhs))


# ---------------------------------------------------------------- build_lp


def test_lp_bounds_after_phase_out(fig2_scenario):
    lp, meta = build_lp(fig2_scenario, PHASE_OUT)
    bounds = rhs_by_label(lp)
    assert bounds["cap_1"] == 100.0
    assert bounds[SOLVENCY] == 200000.0
    assert bounds[CAPACITY] == 100000.0
    assert meta.regime == UNITS_PREFERRED


def test_lp_bounds_at_start(fig2_scenario):
    bounds = rhs_by_label(build_lp(fig2_scenario, 0.0)[0])
    assert bounds[SOLVENCY] == pytest.approx(170000.0)
    assert bounds[CAPACITY] == pytest.approx(95000.0)


def test_lp_constant_without_modulation():
    s = build_scenario(solvency=(180000.0, 0.0, 1.5), capacity=(90000.0, 0.0, 1.5))
    early = rhs_by_label(build_lp(s, 0.01)[0])
    late = rhs_by_label(build_lp(s, 3.0)[0])
    assert early == late


def test_lp_skips_unbounded_caps(fig2_scenario):
    lp, _ = build_lp(fig2_scenario, 0.0)
    assert "cap_2" not in lp.row_names
    s = build_scenario(caps=(100.0, 140.0))
    lp2, _ = build_lp(s, 0.0)
    assert "cap_2" in lp2.row_names


# -------------------------------------------------------------- optimize_at


def test_fig2_allocation_after_phase_out(fig2_scenario):
    report = optimize_at(fig2_scenario, PHASE_OUT)
    z = report.allocation.z
    assert z[0, 0] == pytest.approx(100.0, abs=1e-9)
    assert z[0, 1] == pytest.approx(90000.0 / 1100.0, rel=1e-9)
    assert z[1, 0] == pytest.approx(27272.727272727272, rel=1e-9)
    assert report.status == "optimal"
    assert report.demand_gap == 0.0
    assert {SOLVENCY, CAPACITY, "cap_1"} <= report.binding_constraints


def test_fig2_allocation_at_start(fig2_scenario):
    report = optimize_at(fig2_scenario, 0.0)
    z = report.allocation.z
    assert z[0, 0] == pytest.approx(100.0, abs=1e-9)
    assert z[0, 1] == pytest.approx(60000.0 / 1100.0, rel=1e-9)  # 54.5454...
    assert z[1, 0] == pytest.approx(33181.81818181818, rel=1e-9)
    # demand 200 vs 154.55 achievable: gap reported, not infeasible
    assert report.demand_gap == pytest.approx(200.0 - 170000.0 / 1100.0, rel=1e-9)
    assert report.near_insolvent is True


def test_fig5_allocation_after_full_phase_out(fig5_scenario):
    report = optimize_at(fig5_scenario, QUARTER_TURN)
    z = report.allocation.z
    assert report.regime == REIMBURSEMENT_PREFERRED
    assert z[0, 0] == pytest.approx(100.0, abs=1e-9)
    assert z[0, 1] == pytest.approx(70.0, abs=1e-9)
    assert z[1, 0] == pytest.approx(32000.0, abs=1e-6)
    assert DEMAND in report.binding_constraints
    assert CAPACITY in report.binding_constraints


def test_fig5_supply_clamps_units_early(fig5_scenario):
    # at t=0 solvency allows only 154.5 units although demand wants 200
    report = optimize_at(fig5_scenario, 0.0)
    z = report.allocation.z
    assert z[0, 0] + z[0, 1] == pytest.approx(170000.0 / 1100.0, rel=1e-9)
    assert report.demand_gap > 0
    assert SOLVENCY in report.binding_constraints


def test_objective_recomputes_from_allocation(fig2_scenario):
    from mediate.model import contract_value

    report = optimize_at(fig2_scenario, 0.7)
    assert report.allocation.objective == pytest.approx(
        contract_value(fig2_scenario, report.allocation.z), rel=1e-12
    )


def test_near_insolvency_binds_solvency(fig2_scenario):
    # whenever the solvency test trips, the spend ceiling must be active and
    # the allocation must fall short of perceived demand
    for t in np.linspace(0.0, math.pi, 41):
        from mediate.model import near_insolvency

        if near_insolvency(fig2_scenario, t):
            report = optimize_at(fig2_scenario, t)
            units = report.allocation.z[0].sum()
            assert units < phasor_eval(fig2_scenario.buyer_demand, t)
            assert SOLVENCY in report.binding_constraints


def test_allocations_respect_supply_constraints(fig2_scenario, fig5_scenario):
    for scenario in (fig2_scenario, fig5_scenario):
        for t in np.linspace(0.0, math.pi, 37):
            lp, _ = build_lp(scenario, t)
            report = optimize_at(scenario, t)
            x = np.array(
                [report.allocation.z[0, 0], report.allocation.z[0, 1], report.allocation.z[1, 0]]
            )
            slack = lp.rhs - lp.lhs @ x
            assert (slack >= -1e-7 * np.maximum(1.0, np.abs(lp.rhs))).all()
            assert (x >= 0).all()


def test_objective_monotone_in_solvency_and_capacity(fig2_scenario):
    base = optimize_at(fig2_scenario, 0.5).allocation.objective
    richer_s = build_scenario(solvency=(210000.0, -30000.0, 1.5))
    richer_r = build_scenario(capacity=(110000.0, -5000.0, 1.5))
    assert optimize_at(richer_s, 0.5).allocation.objective >= base - 1e-9
    assert optimize_at(richer_r, 0.5).allocation.objective >= base - 1e-9


def test_units_non_decreasing_when_solvency_relaxes(fig2_scenario):
    # negative solvency modulation phases out, so supply only grows
    totals = [optimize_at(fig2_scenario, t).allocation.z[0].sum() for t in np.linspace(0, 3, 61)]
    assert all(b >= a - 1e-9 for a, b in zip(totals, totals[1:]))


def test_regime_override_switches_rule(fig2_scenario):
    forced = optimize_at(fig2_scenario, PHASE_OUT, regime_override=REIMBURSEMENT_PREFERRED)
    # clamped to the current demand target instead of the 181.8 supply allows
    target = phasor_eval(fig2_scenario.buyer_demand, PHASE_OUT)
    assert forced.allocation.z[0].sum() == pytest.approx(target, rel=1e-9)
    free = optimize_at(fig2_scenario, PHASE_OUT)
    assert free.allocation.z[0].sum() > target


# ---------------------------------------------------------- analytic oracle


def test_oracle_matches_lp_on_grid(fig2_scenario):
    for t in np.linspace(0.0, math.pi, 101):
        report = optimize_at(fig2_scenario, t)
        oracle = analytic_oracle(fig2_scenario, t)
        np.testing.assert_allclose(report.allocation.z, oracle.z, rtol=1e-6, atol=1e-9)
        assert report.allocation.objective == pytest.approx(oracle.objective, rel=1e-6)


def test_oracle_second_installment_zero_at_boundary():
    # spend ceiling exactly covers the capped first installment
    s = build_scenario(solvency=(110000.0, 0.0, 1.5))
    alloc = analytic_oracle(s, 2.0)
    assert alloc.z[0, 1] == 0.0


def test_oracle_fig5_values(fig5_scenario):
    alloc = analytic_oracle(fig5_scenario, QUARTER_TURN)
    assert alloc.z[0, 0] == pytest.approx(100.0)
    assert alloc.z[0, 1] == pytest.approx(70.0)
    assert alloc.z[1, 0] == pytest.approx(32000.0)


@st.composite
def units_preferred_scenarios(draw):
    """Interior units-preferred instances: caps and ceilings never clamp the
    closed forms negative, so LP and oracle must coincide exactly."""
    unit_value = draw(st.floats(min_value=500, max_value=2000))
    value_ratio = draw(st.floats(min_value=0.8, max_value=1.2))
    contract_value = unit_value / value_ratio
    rate = draw(st.floats(min_value=0.0, max_value=0.5))
    u1 = draw(st.floats(min_value=0.0, max_value=2.0))
    u2 = u1 + draw(st.floats(min_value=0.1, max_value=2.5))
    d1 = 1.0 / (1.0 + rate * u1)
    d2 = 1.0 / (1.0 + rate * u2)
    # choose the money fraction safely inside the units-preferred region
    ceiling = min(0.95, 0.9 * value_ratio * d2 / d1)
    money_value = draw(st.floats(min_value=0.01, max_value=max(0.02, ceiling)))
    contract_cost = draw(st.floats(min_value=0.3, max_value=0.85)) * contract_value
    alt_cost = contract_cost * draw(st.floats(min_value=1.05, max_value=1.8))
    cap1 = draw(st.floats(min_value=30, max_value=200))
    demand_core = cap1 * draw(st.floats(min_value=1.1, max_value=2.5))
    demand_mod = draw(st.floats(min_value=0.0, max_value=0.4)) * demand_core
    solvency_core = alt_cost * (cap1 + draw(st.floats(min_value=5, max_value=150)))
    slack = solvency_core - alt_cost * cap1 * 1.02
    solvency_mod = -draw(st.floats(min_value=0.0, max_value=1.0)) * min(
        0.35 * solvency_core, max(slack, 0.0)
    )
    units_max = (solvency_core) / alt_cost
    needed = max(0.0, (alt_cost - contract_cost) * units_max) * 1.05
    capacity_core = needed * draw(st.floats(min_value=1.1, max_value=2.0)) + 1000.0
    capacity_mod = -draw(st.floats(min_value=0.0, max_value=0.3)) * (capacity_core - needed)
    return build_scenario(
        unit_value=unit_value,
        alt_unit_cost=alt_cost,
        money_value=money_value,
        delays=(u1, u2),
        rate=rate,
        demand=(demand_core, demand_mod, draw(st.floats(min_value=0.4, max_value=2.5))),
        solvency=(solvency_core, solvency_mod, draw(st.floats(min_value=0.4, max_value=2.5))),
        capacity=(capacity_core, capacity_mod, draw(st.floats(min_value=0.4, max_value=2.5))),
        caps=(cap1, math.inf),
        contract_value=contract_value,
        contract_cost=contract_cost,
        concessions=(
            draw(st.floats(min_value=0.5, max_value=4.0)),
            draw(st.floats(min_value=3.0, max_value=40.0)),
        ),
    )


@settings(max_examples=60, deadline=None)
@given(scenario=units_preferred_scenarios(), frac=st.floats(min_value=0, max_value=1))
def test_oracle_equivalence_random_scenarios(scenario, frac):
    assert scenario is not None
    t = frac * math.pi
    report = optimize_at(scenario, t)
    oracle = analytic_oracle(scenario, t)
    np.testing.assert_allclose(report.allocation.z, oracle.z, rtol=1e-6, atol=1e-6)
    assert report.allocation.objective == pytest.approx(
        oracle.objective, rel=1e-6, abs=1e-6
    )
