import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mediate.model import (
    AlternateSupplierOffer,
    DiscountModel,
    GompertzParams,
    Installment,
    InvariantViolation,
    ModelError,
    PerformanceType,
    PhasorConstraint,
    QUARTER_TURN,
    RegimeTieError,
    REIMBURSEMENT_PREFERRED,
    STAY_WITH_SUPPLIER,
    PREFER_ALTERNATE,
    UNITS_PREFERRED,
    ShapeError,
    acceptance_check,
    alternate_value,
    contract_value,
    discount,
    gompertz_factor,
    near_insolvency,
    offered_value,
    phasor_eval,
    regime,
    regime_sides,
)
from conftest import build_scenario

finite = st.floats(allow_nan=False, allow_infinity=False)


# -------------------------------------------------------------- discount


def test_discount_zero_delay_is_identity():
    assert discount(DiscountModel(0.2), 0.0) == 1.0


def test_discount_values():
    # frozen: 1 / (1 + 0.2 * 1.1) and 1 / (1 + 0.2 * 4)
    assert discount(DiscountModel(0.2), 1.1) == pytest.approx(0.819672131147541, rel=1e-12)
    assert discount(DiscountModel(0.2), 4.0) == pytest.approx(0.5555555555555556, rel=1e-12)


def test_discount_negative_delay_rejected():
    with pytest.raises(ModelError):
        discount(DiscountModel(0.2), -0.1)


@given(
    rate=st.floats(min_value=1e-6, max_value=10, allow_nan=False),
    u1=st.floats(min_value=0, max_value=50, allow_nan=False),
    du=st.floats(min_value=1e-6, max_value=50, allow_nan=False),
)
def test_discount_strictly_decreasing(rate, u1, du):
    model = DiscountModel(rate)
    assert discount(model, u1 + du) < discount(model, u1)
    assert 0.0 < discount(model, u1) <= 1.0


# ---------------------------------------------------------------- phasor


def test_phasor_endpoints():
    c = PhasorConstraint(core=170.0, modulation=30.0, phase_rate=1.0)
    assert phasor_eval(c, 0.0) == 200.0
    assert phasor_eval(c, QUARTER_TURN) == 170.0
    assert phasor_eval(c, 3.0) == 170.0


def test_phasor_mid_values():
    c = PhasorConstraint(170.0, 30.0, 1.0)
    # 170 + 30 cos(1.16); the crossing the settlement checks target
    assert phasor_eval(c, 1.16) == pytest.approx(181.9801858821882, rel=1e-12)
    s = PhasorConstraint(200000.0, -30000.0, 1.5)
    # frozen: 200000 - 30000 cos(0.45)
    assert phasor_eval(s, 0.30) == pytest.approx(172986.5869294197, rel=1e-12)


def test_phasor_requires_positive_rate():
    with pytest.raises(InvariantViolation):
        PhasorConstraint(100.0, 0.0, 0.0)


@given(
    core=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
    mod=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
    rate=st.floats(min_value=1e-3, max_value=10, allow_nan=False),
    frac=st.floats(min_value=0, max_value=1, allow_nan=False),
)
def test_phasor_monotone_and_continuous(core, mod, rate, frac):
    c = PhasorConstraint(core, mod, rate)
    settle = QUARTER_TURN / rate
    assert phasor_eval(c, 0.0) == pytest.approx(core + mod, abs=1e-9 * max(1, abs(core)))
    # monotone toward the core on the relaxation window
    t1 = frac * settle
    t2 = min(settle, t1 + 0.1 * settle)
    v1, v2 = phasor_eval(c, t1), phasor_eval(c, t2)
    if mod > 0:
        assert v2 <= v1 + 1e-9
    elif mod < 0:
        assert v2 >= v1 - 1e-9
    # continuity at the settling point, constant afterwards
    eps = 1e-9
    assert phasor_eval(c, settle - eps) == pytest.approx(core, abs=1e-6 * max(1.0, abs(mod)))
    assert phasor_eval(c, settle + 1.0) == core


# -------------------------------------------------------------- gompertz


def test_gompertz_values():
    p = GompertzParams(2.0, 20.0)
    assert gompertz_factor(p, 0.0) == pytest.approx(math.exp(-2), rel=1e-12)
    # frozen: exp(-2 exp(-6))
    assert gompertz_factor(p, 0.30) == pytest.approx(0.9950547637898769, rel=1e-12)
    assert gompertz_factor(p, 1.16) > 1 - 1e-9


@given(
    delay=st.floats(min_value=1e-3, max_value=20, allow_nan=False),
    rate=st.floats(min_value=1e-3, max_value=20, allow_nan=False),
    t=st.floats(min_value=0, max_value=1, allow_nan=False),
    dt=st.floats(min_value=1e-6, max_value=10, allow_nan=False),
)
def test_gompertz_increasing_and_bounded(delay, rate, t, dt):
    # argument kept where the ramp is resolvable in float64; the factor
    # saturates to 1.0 exactly once delay * exp(-rate*t) underflows
    p = GompertzParams(delay, rate)
    f1, f2 = gompertz_factor(p, t), gompertz_factor(p, t + dt)
    assert 0.0 < f1 < 1.0
    assert f2 >= f1
    if f2 < 1.0:
        assert f2 > f1


# -------------------------------------------------------- value functions


def test_contract_value_zero_allocation(fig2_scenario):
    assert contract_value(fig2_scenario, np.zeros((2, 2))) == 0.0


def test_contract_value_reference_allocation(fig2_scenario):
    z = np.array([[100.0, 90000.0 / 1100.0], [100000.0 - 400.0 * (100.0 + 90000.0 / 1100.0), 0.0]])
    # frozen: 81967.2131 + 62937.0629 + 17883.7556
    assert contract_value(fig2_scenario, z) == pytest.approx(162788.03164049066, rel=1e-12)


def test_contract_value_single_unit_identity_discount():
    s = build_scenario(delays=(0.0, 0.0), rate=0.5)
    z = np.array([[1.0, 0.0], [0.0, 0.0]])
    assert contract_value(s, z) == pytest.approx(1000.0)


def test_contract_value_shape_mismatch(fig2_scenario):
    with pytest.raises(ShapeError):
        contract_value(fig2_scenario, np.zeros((3, 2)))


@given(
    alpha=st.floats(min_value=0, max_value=10, allow_nan=False),
    beta=st.floats(min_value=0, max_value=10, allow_nan=False),
    seed=st.integers(min_value=0, max_value=2**31),
)
def test_contract_value_linear(alpha, beta, seed):
    s = build_scenario()
    rng = np.random.default_rng(seed)
    z1 = rng.uniform(0, 100, size=(2, 2))
    z2 = rng.uniform(0, 100, size=(2, 2))
    lhs = contract_value(s, alpha * z1 + beta * z2)
    rhs = alpha * contract_value(s, z1) + beta * contract_value(s, z2)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-6)


def test_offered_value_saturates(fig2_scenario):
    z = np.array([[100.0, 50.0], [20000.0, 0.0]])
    base = contract_value(fig2_scenario, z)
    assert offered_value(fig2_scenario, z, 0.0) == pytest.approx(base * math.exp(-2), rel=1e-12)
    assert offered_value(fig2_scenario, z, 100.0) == pytest.approx(base, rel=1e-12)
    for t in (0.0, 0.3, 1.0, 5.0):
        assert offered_value(fig2_scenario, z, t) <= base


def test_alternate_value_matches_contract_value_for_same_rate(fig2_scenario):
    z = np.array([[10.0, 20.0], [500.0, 0.0]])
    same = alternate_value(
        fig2_scenario.performances, fig2_scenario.installments, fig2_scenario.discount, z
    )
    assert same == pytest.approx(contract_value(fig2_scenario, z), rel=1e-12)


def test_alternate_value_direct():
    perf = (PerformanceType(id="alt", kind="units", value_per_unit=1000.0, cost_per_unit=900.0),)
    inst = (Installment(index=1, delay=1.1),)
    # frozen: 100000 / 1.55
    value = alternate_value(perf, inst, DiscountModel(0.5), np.array([[100.0]]))
    assert value == pytest.approx(64516.12903225806, rel=1e-12)


# ------------------------------------------------------- acceptance check


def _offer(**kw):
    base = dict(
        alternate_value=150000.0,
        expected_damages=50000.0,
        damages_delay=3.0,
        litigation_risk=0.5,
        alternate_failure_risk=0.9,
        termination_cost=10000.0,
    )
    base.update(kw)
    return AlternateSupplierOffer(**base)


def test_acceptance_reference_numbers():
    result = acceptance_check(162788.0, _offer(), DiscountModel(0.2))
    # threshold: 0.9*150000 + 0.5*50000/1.6 - 10000
    assert result.threshold == pytest.approx(140625.0, rel=1e-12)
    assert result.margin == pytest.approx(22163.0, rel=1e-12)
    assert result.decision == STAY_WITH_SUPPLIER


def test_acceptance_boundary_is_strict():
    result = acceptance_check(140625.0, _offer(), DiscountModel(0.2))
    assert result.decision == PREFER_ALTERNATE
    assert result.margin == 0.0


def test_acceptance_huge_termination_cost_dominates():
    result = acceptance_check(0.0, _offer(termination_cost=10**9), DiscountModel(0.2))
    assert result.decision == STAY_WITH_SUPPLIER


@given(
    b1=st.floats(min_value=0, max_value=1e6, allow_nan=False),
    db=st.floats(min_value=1e-3, max_value=1e6, allow_nan=False),
    g=st.floats(min_value=0, max_value=1e6, allow_nan=False),
)
def test_acceptance_margin_grows_dollar_for_dollar_in_termination_cost(b1, db, g):
    model = DiscountModel(0.2)
    m1 = acceptance_check(g, _offer(termination_cost=b1), model).margin
    m2 = acceptance_check(g, _offer(termination_cost=b1 + db), model).margin
    assert m2 - m1 == pytest.approx(db, rel=1e-9, abs=1e-6)


def test_offer_risk_validation():
    with pytest.raises(InvariantViolation) as err:
        _offer(litigation_risk=1.5)
    assert err.value.invariant == "litigation_risk_range"


# ----------------------------------------------------------------- regime


def test_regime_units_preferred(fig2_scenario):
    lhs, rhs = regime_sides(fig2_scenario)
    assert lhs == pytest.approx(0.7692307692307693, rel=1e-12)
    assert rhs == pytest.approx(0.6557377049180327, rel=1e-12)
    assert regime(fig2_scenario) == UNITS_PREFERRED


def test_regime_reimbursement_preferred(fig5_scenario):
    lhs, rhs = regime_sides(fig5_scenario)
    assert lhs == pytest.approx(0.5555555555555556, rel=1e-12)
    assert regime(fig5_scenario) == REIMBURSEMENT_PREFERRED


def test_regime_zero_rate_prefers_units():
    s = build_scenario(rate=0.0)
    assert regime(s) == UNITS_PREFERRED


def test_regime_tie_raises():
    # V2/(1+r*u1) == (V1/Vinit)/(1+r*u2) when u1 == u2 and V2 == V1/Vinit... use equal sides
    s = build_scenario(money_value=0.5, unit_value=500.0, contract_value=1000.0, delays=(1.0, 1.0))
    with pytest.raises(RegimeTieError):
        regime(s)


@given(scale=st.floats(min_value=1e-3, max_value=1e3, allow_nan=False))
def test_regime_invariant_under_joint_value_scaling(scale):
    base = build_scenario()
    scaled = build_scenario(unit_value=1000.0 * scale, contract_value=1000.0 * scale)
    assert regime(base) == regime(scaled)


# -------------------------------------------------------- near insolvency


def test_near_insolvency_fig2(fig2_scenario):
    # 170000 < 700*100 + 1100*(200 - 100) = 180000
    assert near_insolvency(fig2_scenario, 0.0) is True
    # 200000 vs 70000 + 1100*70 = 147000 after both phase-outs
    assert near_insolvency(fig2_scenario, QUARTER_TURN) is False


def test_near_insolvency_rich_supplier():
    s = build_scenario(solvency=(10**9, 0.0, 1.5))
    assert near_insolvency(s) is False


def test_default_probe_time_is_start(fig2_scenario):
    assert near_insolvency(fig2_scenario) == near_insolvency(fig2_scenario, 0.0)


# ------------------------------------------------------------- validation


def test_money_value_must_be_fraction():
    with pytest.raises(InvariantViolation) as err:
        PerformanceType(id="cash", kind="money", value_per_unit=1.2)
    assert err.value.invariant == "money_value_in_unit_interval"


def test_unit_performance_needs_positive_values():
    with pytest.raises(InvariantViolation):
        PerformanceType(id="u", kind="units", value_per_unit=0.0, cost_per_unit=5.0)
    with pytest.raises(InvariantViolation):
        PerformanceType(id="u", kind="units", value_per_unit=10.0, cost_per_unit=-1.0)


def test_scenario_rejects_decreasing_delays():
    with pytest.raises(InvariantViolation) as err:
        build_scenario(delays=(2.0, 1.0))
    assert err.value.invariant == "installment_delays_nondecreasing"


def test_scenario_rejects_money_before_units():
    from mediate.model import Scenario

    s = build_scenario()
    with pytest.raises(InvariantViolation) as err:
        Scenario(
            performances=(s.performances[1], s.performances[0]),
            installments=s.installments,
            discount=s.discount,
            buyer_demand=s.buyer_demand,
            supplier_solvency=s.supplier_solvency,
            supplier_capacity=s.supplier_capacity,
            unit_caps=s.unit_caps,
            contract_unit_value=s.contract_unit_value,
            contract_unit_cost=s.contract_unit_cost,
            gompertz=s.gompertz,
        )
    assert err.value.invariant == "performances_order"
