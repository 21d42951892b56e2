"""Domain model for buyer/supplier settlement mediation.

A supplier that cannot deliver its contracted units offers substitute
performances instead: replacement units delivered late and/or a partial
reimbursement. This module holds the value model everything else composes:

* hyperbolic discounting of delayed deliveries,
* perceived party constraints that relax over mediation time (phasor form:
  a fixed core plus a modulation whose real part cosine-decays to zero by a
  quarter turn of the phase),
* the Gompertz concession ramp scaling what the supplier actually has on
  the table at a given time,
* buyer-side value of an allocation, of time-scaled offers, and of a rival
  supplier's package, plus the accept/reject comparison between them.

All operations are pure functions of their inputs and all types are frozen,
so values are safe to share between concurrent callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

QUARTER_TURN = math.pi / 2
#: absolute tolerance for constraint comparisons, in natural units
EPSILON = 1e-9

Kind = Literal["units", "money"]
Regime = Literal["units_preferred", "reimbursement_preferred"]
Decision = Literal["stay_with_supplier", "prefer_alternate"]

UNITS_PREFERRED: Regime = "units_preferred"
REIMBURSEMENT_PREFERRED: Regime = "reimbursement_preferred"
STAY_WITH_SUPPLIER: Decision = "stay_with_supplier"
PREFER_ALTERNATE: Decision = "prefer_alternate"


class ModelError(ValueError):
    """Base class for domain errors raised by this package."""


class InvariantViolation(ModelError):
    """A typed invariant broke; ``invariant`` is the stable machine name."""

    def __init__(self, invariant: str, message: str):
        super().__init__(message)
        self.invariant = invariant


class RegimeTieError(ModelError):
    """Both allocation regimes score identically; no strict preference exists."""


class ShapeError(ModelError):
    """Scenario or matrix does not have the layout an operation requires."""


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class PerformanceType:
    """One class of substitute performance the supplier can offer.

    For ``kind="units"`` both fields are per physical unit. For
    ``kind="money"`` quantities are dollars reimbursed: ``value_per_unit``
    is the fraction the buyer keeps after handling overhead (strictly below
    one) and the supplier's cost per dollar reimbursed is one.
    """

    id: str
    kind: Kind
    value_per_unit: float
    cost_per_unit: float = 1.0

    def __post_init__(self):
        if self.kind not in ("units", "money"):
            raise InvariantViolation(
                "performance_kind", f"unknown performance kind {self.kind!r}"
            )
        if self.kind == "money":
            if not 0.0 <= self.value_per_unit < 1.0:
                raise InvariantViolation(
                    "money_value_in_unit_interval",
                    f"money performance {self.id!r} requires value_per_unit in "
                    f"[0, 1), got {self.value_per_unit}",
                )
            if self.cost_per_unit <= 0.0:
                raise InvariantViolation(
                    "unit_cost_positive",
                    f"performance {self.id!r} requires cost_per_unit > 0",
                )
        else:
            if self.value_per_unit <= 0.0:
                raise InvariantViolation(
                    "unit_value_positive",
                    f"unit performance {self.id!r} requires value_per_unit > 0",
                )
            if self.cost_per_unit <= 0.0:
                raise InvariantViolation(
                    "unit_cost_positive",
                    f"unit performance {self.id!r} requires cost_per_unit > 0",
                )


@dataclass(frozen=True)
class Installment:
    """A delivery moment; ``delay`` is the wait until it lands, in mediation time units."""

    index: int
    delay: float

    def __post_init__(self):
        if self.index < 1:
            raise InvariantViolation("installment_index", "installment index is 1-based")
        if self.delay < 0:
            raise InvariantViolation(
                "delay_nonnegative", f"installment {self.index} has negative delay"
            )


@dataclass(frozen=True)
class DiscountModel:
    """Hyperbolic devaluation of delayed performances: factor 1/(1 + rate * delay)."""

    rate: float

    def __post_init__(self):
        if self.rate < 0:
            raise InvariantViolation(
                "discount_rate_nonnegative", f"discount rate must be >= 0, got {self.rate}"
            )


@dataclass(frozen=True)
class PhasorConstraint:
    """A perceived constraint that relaxes from ``core + modulation`` to ``core``.

    The modulation rides on a rotating phase; only its real part matters, so
    the perceived value is ``core + modulation * cos(phase_rate * t)`` until
    the phase completes a quarter turn, and exactly ``core`` afterwards. A
    negative modulation makes the constraint tighten toward its core instead
    of loosening.
    """

    core: float
    modulation: float
    phase_rate: float

    def __post_init__(self):
        if self.phase_rate <= 0:
            raise InvariantViolation(
                "phase_rate_positive", f"phase_rate must be > 0, got {self.phase_rate}"
            )

    @property
    def settling_time(self) -> float:
        """Time at which the modulation has fully phased out."""
        return QUARTER_TURN / self.phase_rate


@dataclass(frozen=True)
class GompertzParams:
    """Concession ramp exp(-delay * exp(-rate * t)).

    ``concession_delay`` is the supplier's reluctance to start conceding,
    ``concession_rate`` how quickly concessions accelerate once started.
    """

    concession_delay: float
    concession_rate: float

    def __post_init__(self):
        if self.concession_delay <= 0 or self.concession_rate <= 0:
            raise InvariantViolation(
                "concession_params_positive",
                "concession_delay and concession_rate must both be > 0",
            )


@dataclass(frozen=True)
class Scenario:
    """One full problem instance.

    ``performances`` lists unit-type performances before money-type ones.
    ``unit_caps`` gives the per-installment ceiling on replacement units
    (``inf`` for uncapped installments). ``contract_unit_value`` and
    ``contract_unit_cost`` describe the originally contracted units, against
    which substitutes are scored.
    """

    performances: tuple[PerformanceType, ...]
    installments: tuple[Installment, ...]
    discount: DiscountModel
    buyer_demand: PhasorConstraint
    supplier_solvency: PhasorConstraint
    supplier_capacity: PhasorConstraint
    unit_caps: tuple[float, ...]
    contract_unit_value: float
    contract_unit_cost: float
    gompertz: GompertzParams

    def __post_init__(self):
        object.__setattr__(self, "performances", tuple(self.performances))
        object.__setattr__(self, "installments", tuple(self.installments))
        object.__setattr__(self, "unit_caps", tuple(float(c) for c in self.unit_caps))
        if not self.performances:
            raise InvariantViolation("performances_nonempty", "at least one performance required")
        seen_money = False
        for perf in self.performances:
            if perf.kind == "money":
                seen_money = True
            elif seen_money:
                raise InvariantViolation(
                    "performances_order", "unit performances must precede money performances"
                )
        if not self.installments:
            raise InvariantViolation("installments_nonempty", "at least one installment required")
        delays = [inst.delay for inst in self.installments]
        if any(b < a for a, b in zip(delays, delays[1:])):
            raise InvariantViolation(
                "installment_delays_nondecreasing",
                f"installment delays must be non-decreasing, got {delays}",
            )
        if len(self.unit_caps) != len(self.installments):
            raise InvariantViolation(
                "unit_caps_length", "unit_caps must list one cap per installment"
            )
        if any(c < 0 for c in self.unit_caps):
            raise InvariantViolation("unit_caps_nonnegative", "unit caps must be >= 0")
        if self.contract_unit_value <= 0 or self.contract_unit_cost <= 0:
            raise InvariantViolation(
                "contract_values_positive",
                "contract_unit_value and contract_unit_cost must be > 0",
            )

    @property
    def unit_performance(self) -> PerformanceType:
        return self.performances[0]

    @property
    def money_performance(self) -> PerformanceType | None:
        for perf in self.performances:
            if perf.kind == "money":
                return perf
        return None


@dataclass(frozen=True, eq=False)
class Allocation:
    """A settlement proposal: quantity of performance n delivered at installment m.

    ``z`` has shape (performances, installments); every entry is a
    nonnegative real quantity. ``objective`` is the buyer value of the
    allocation under the scenario it was computed for.
    """

    z: np.ndarray
    objective: float


@dataclass(frozen=True)
class AlternateSupplierOffer:
    """A rival package the buyer could switch to, with the switching frictions."""

    alternate_value: float
    expected_damages: float
    damages_delay: float
    litigation_risk: float
    alternate_failure_risk: float
    termination_cost: float

    def __post_init__(self):
        if not 0.0 <= self.litigation_risk <= 1.0:
            raise InvariantViolation("litigation_risk_range", "litigation_risk must be in [0, 1]")
        if not 0.0 <= self.alternate_failure_risk <= 1.0:
            raise InvariantViolation(
                "failure_risk_range", "alternate_failure_risk must be in [0, 1]"
            )
        if self.expected_damages < 0:
            raise InvariantViolation("damages_nonnegative", "expected_damages must be >= 0")
        if self.termination_cost < 0:
            raise InvariantViolation(
                "termination_cost_nonnegative", "termination_cost must be >= 0"
            )
        if self.damages_delay < 0:
            raise InvariantViolation("damages_delay_nonnegative", "damages_delay must be >= 0")


@dataclass(frozen=True)
class AcceptanceResult:
    decision: Decision
    margin: float
    threshold: float


# ------------------------------------------------------------- operations


def discount(model: DiscountModel, delay: float) -> float:
    """Present-value factor of a performance delivered ``delay`` time units late."""
    if delay < 0:
        raise ModelError(f"delay must be >= 0, got {delay}")
    return 1.0 / (1.0 + model.rate * delay)


def phasor_eval(constraint: PhasorConstraint, t: float) -> float:
    """Perceived value of a relaxing constraint at mediation time ``t`` (>= 0)."""
    # branch on t itself so evaluate(settling_time) is the core exactly,
    # immune to the rounding of phase_rate * t back and forth
    if t >= constraint.settling_time:
        return constraint.core
    return constraint.core + constraint.modulation * math.cos(constraint.phase_rate * t)


def gompertz_factor(params: GompertzParams, t: float) -> float:
    """Fraction of its constrained optimum the supplier actually offers at ``t``."""
    return math.exp(-params.concession_delay * math.exp(-params.concession_rate * t))


def installment_discounts(
    installments: Sequence[Installment], model: DiscountModel
) -> np.ndarray:
    return np.array([discount(model, inst.delay) for inst in installments])


def _weighted_value(
    performances: Sequence[PerformanceType],
    installments: Sequence[Installment],
    model: DiscountModel,
    z,
) -> float:
    z = np.asarray(z, dtype=float)
    expected = (len(performances), len(installments))
    if z.shape != expected:
        raise ShapeError(
            f"allocation shape {z.shape} does not match "
            f"{expected[0]} performances x {expected[1]} installments"
        )
    values = np.array([p.value_per_unit for p in performances])
    factors = installment_discounts(installments, model)
    return float(values @ z @ factors)


def contract_value(scenario: Scenario, z) -> float:
    """Buyer value of an allocation: sum of value * discount * quantity terms."""
    return _weighted_value(scenario.performances, scenario.installments, scenario.discount, z)


def offered_value(scenario: Scenario, z, t: float) -> float:
    """Buyer value of the allocation scaled by the concession ramp at time ``t``."""
    return contract_value(scenario, z) * gompertz_factor(scenario.gompertz, t)


def alternate_value(
    performances: Sequence[PerformanceType],
    installments: Sequence[Installment],
    discount_alt: DiscountModel,
    z,
) -> float:
    """Buyer value of a rival supplier's package under that supplier's discount rate."""
    return _weighted_value(performances, installments, discount_alt, z)


def acceptance_check(
    offered: float, offer: AlternateSupplierOffer, buyer_discount: DiscountModel
) -> AcceptanceResult:
    """Compare a settlement value against the switch-to-rival threshold.

    The threshold nets the rival package (weighted by its failure risk) and
    the discounted litigation recovery against the cost of terminating the
    incumbent. Staying requires strictly exceeding it.
    """
    threshold = (
        offer.alternate_failure_risk * offer.alternate_value
        + offer.litigation_risk
        * offer.expected_damages
        * discount(buyer_discount, offer.damages_delay)
        - offer.termination_cost
    )
    decision = STAY_WITH_SUPPLIER if offered > threshold else PREFER_ALTERNATE
    return AcceptanceResult(decision=decision, margin=offered - threshold, threshold=threshold)


def require_simple_shape(scenario: Scenario) -> None:
    """Check the two-installment replacement-units-plus-reimbursement layout."""
    perfs = scenario.performances
    if len(perfs) != 2 or perfs[0].kind != "units" or perfs[1].kind != "money":
        raise ShapeError(
            "expected exactly one unit performance followed by one money performance"
        )
    if len(scenario.installments) != 2:
        raise ShapeError("expected exactly two installments")
    if not math.isfinite(scenario.unit_caps[0]):
        raise ShapeError("first-installment unit cap must be finite")


def regime_sides(scenario: Scenario) -> tuple[float, float]:
    """The two per-contract-dollar scores deciding the allocation regime.

    Left side: late replacement units relative to the contracted unit value.
    Right side: immediate reimbursement after the buyer's handling haircut.
    """
    require_simple_shape(scenario)
    unit, money = scenario.performances
    lhs = (unit.value_per_unit / scenario.contract_unit_value) * discount(
        scenario.discount, scenario.installments[1].delay
    )
    rhs = money.value_per_unit * discount(scenario.discount, scenario.installments[0].delay)
    return lhs, rhs


def regime(scenario: Scenario) -> Regime:
    """Which alternative the buyer values more per contract dollar.

    Ties are an explicit error: the model defines only strict preferences.
    """
    lhs, rhs = regime_sides(scenario)
    if abs(lhs - rhs) <= EPSILON:
        raise RegimeTieError(
            f"regime condition is a tie (both sides evaluate to {lhs:.12g})"
        )
    return UNITS_PREFERRED if lhs > rhs else REIMBURSEMENT_PREFERRED


def near_insolvency(scenario: Scenario, t: float = 0.0) -> bool:
    """Whether current solvency cannot fund substitutes meeting buyer demand.

    Compares the perceived spend ceiling against the cost of the capped
    first installment plus alternative units covering the remaining demand.
    Defaults to the start of mediation; pass ``t`` to probe later times.
    """
    require_simple_shape(scenario)
    cap_first = scenario.unit_caps[0]
    alt_cost = scenario.unit_performance.cost_per_unit
    funding_needed = scenario.contract_unit_cost * cap_first + alt_cost * (
        phasor_eval(scenario.buyer_demand, t) - cap_first
    )
    return phasor_eval(scenario.supplier_solvency, t) < funding_needed


def kind_totals(scenario: Scenario, z) -> tuple[float, float]:
    """Total replacement units and total reimbursement dollars in an allocation."""
    z = np.asarray(z, dtype=float)
    units = 0.0
    money = 0.0
    for i, perf in enumerate(scenario.performances):
        if perf.kind == "units":
            units += float(z[i].sum())
        else:
            money += float(z[i].sum())
    return units, money
