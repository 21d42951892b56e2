import math
import random

import pytest

from mediate.model import (
    DiscountModel,
    GompertzParams,
    Installment,
    PerformanceType,
    PhasorConstraint,
    Scenario,
)


def build_scenario(
    *,
    unit_value=1000.0,
    alt_unit_cost=1100.0,
    money_value=0.8,
    delays=(1.1, 1.5),
    rate=0.2,
    demand=(170.0, 30.0, 1.0),
    solvency=(200000.0, -30000.0, 1.5),
    capacity=(100000.0, -5000.0, 1.5),
    caps=(100.0, math.inf),
    contract_value=1000.0,
    contract_cost=700.0,
    concessions=(2.0, 20.0),
) -> Scenario:
    return Scenario(
        performances=(
            PerformanceType(
                id="replacement_units",
                kind="units",
                value_per_unit=unit_value,
                cost_per_unit=alt_unit_cost,
            ),
            PerformanceType(id="reimbursement", kind="money", value_per_unit=money_value),
        ),
        installments=tuple(Installment(index=i + 1, delay=d) for i, d in enumerate(delays)),
        discount=DiscountModel(rate=rate),
        buyer_demand=PhasorConstraint(*demand),
        supplier_solvency=PhasorConstraint(*solvency),
        supplier_capacity=PhasorConstraint(*capacity),
        unit_caps=caps,
        contract_unit_value=contract_value,
        contract_unit_cost=contract_cost,
        gompertz=GompertzParams(*concessions),
    )


@pytest.fixture
def fig2_scenario() -> Scenario:
    """The two-installment units + reimbursement instance used across the suite."""
    return build_scenario()


@pytest.fixture
def fig5_scenario() -> Scenario:
    """Same instance with the second delivery pushed out to delay 4."""
    return build_scenario(delays=(1.1, 4.0))


def random_units_preferred_scenario(rng: random.Random) -> Scenario:
    """Interior units-preferred instance: no supply ceiling ever clamps the
    closed forms negative, so the LP and the closed forms must coincide."""
    unit_value = rng.uniform(500, 2000)
    value_ratio = rng.uniform(0.8, 1.2)
    contract_value = unit_value / value_ratio
    rate = rng.uniform(0.0, 0.5)
    u1 = rng.uniform(0.0, 2.0)
    u2 = u1 + rng.uniform(0.1, 2.5)
    d1 = 1.0 / (1.0 + rate * u1)
    d2 = 1.0 / (1.0 + rate * u2)
    ceiling = min(0.95, 0.9 * value_ratio * d2 / d1)
    money_value = rng.uniform(0.01, max(0.02, ceiling))
    contract_cost = rng.uniform(0.3, 0.85) * contract_value
    alt_cost = contract_cost * rng.uniform(1.05, 1.8)
    cap1 = rng.uniform(30, 200)
    demand_core = cap1 * rng.uniform(1.1, 2.5)
    demand_mod = rng.uniform(0.0, 0.4) * demand_core
    solvency_core = alt_cost * (cap1 + rng.uniform(5, 150))
    slack = max(0.0, solvency_core - alt_cost * cap1 * 1.02)
    solvency_mod = -rng.uniform(0.0, 1.0) * min(0.35 * solvency_core, slack)
    units_max = solvency_core / alt_cost
    needed = max(0.0, (alt_cost - contract_cost) * units_max) * 1.05
    capacity_core = needed * rng.uniform(1.1, 2.0) + 1000.0
    capacity_mod = -rng.uniform(0.0, 0.3) * (capacity_core - needed)
    return build_scenario(
        unit_value=unit_value,
        alt_unit_cost=alt_cost,
        money_value=money_value,
        delays=(u1, u2),
        rate=rate,
        demand=(demand_core, demand_mod, rng.uniform(0.4, 2.5)),
        solvency=(solvency_core, solvency_mod, rng.uniform(0.4, 2.5)),
        capacity=(capacity_core, capacity_mod, rng.uniform(0.4, 2.5)),
        caps=(cap1, math.inf),
        contract_value=contract_value,
        contract_cost=contract_cost,
        concessions=(rng.uniform(0.5, 4.0), rng.uniform(3.0, 40.0)),
    )


def random_document(rng: random.Random):
    """A syntactically arbitrary but invariant-respecting scenario document."""
    from mediate.engine import SimulationConfig
    from mediate.model import AlternateSupplierOffer
    from mediate.scenario_io import ScenarioDocument

    u1 = rng.uniform(0, 3)
    scenario = build_scenario(
        unit_value=rng.uniform(1, 1e5),
        money_value=rng.uniform(0, 0.99),
        delays=(u1, u1 + rng.uniform(0, 5)),
        rate=rng.uniform(0, 2),
        demand=(rng.uniform(1, 1e4), rng.uniform(-100, 100), rng.uniform(0.1, 5)),
        caps=(rng.uniform(0, 1e4), rng.choice([math.inf, rng.uniform(0, 1e4)])),
        concessions=(rng.uniform(1e-3, 10), rng.uniform(1e-3, 50)),
    )
    offer = None
    if rng.random() < 0.5:
        offer = AlternateSupplierOffer(
            alternate_value=rng.uniform(0, 1e6),
            expected_damages=rng.uniform(0, 1e6),
            damages_delay=rng.uniform(0, 10),
            litigation_risk=rng.random(),
            alternate_failure_risk=rng.random(),
            termination_cost=rng.uniform(0, 1e6),
        )
    simulation = None
    if rng.random() < 0.5:
        simulation = SimulationConfig(t_max=rng.uniform(0.5, 10), steps=rng.randint(2, 5000))
    return ScenarioDocument(scenario=scenario, alternate_offer=offer, simulation=simulation)
