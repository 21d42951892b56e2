"""Settlement mediation toolkit: value model, optimizer, dynamics engine, IO, CLI, API."""

from .model import (
    Allocation,
    AlternateSupplierOffer,
    DiscountModel,
    GompertzParams,
    Installment,
    InvariantViolation,
    ModelError,
    PerformanceType,
    PhasorConstraint,
    RegimeTieError,
    Scenario,
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
)

from .engine import (
    SimulationConfig,
    compare_alternate,
    peak_scan,
    simulate,
    value_decomposition,
)
from .optimizer import SolveReport, analytic_oracle, build_lp, optimize_at
from .scenario_io import (
    ScenarioDocument,
    export_trace,
    list_presets,
    load_preset,
    parse_scenario,
    serialize_scenario,
)

__all__ = [
    "Allocation",
    "AlternateSupplierOffer",
    "DiscountModel",
    "GompertzParams",
    "Installment",
    "InvariantViolation",
    "ModelError",
    "PerformanceType",
    "PhasorConstraint",
    "RegimeTieError",
    "Scenario",
    "ScenarioDocument",
    "ShapeError",
    "SimulationConfig",
    "SolveReport",
    "acceptance_check",
    "alternate_value",
    "analytic_oracle",
    "build_lp",
    "compare_alternate",
    "contract_value",
    "discount",
    "export_trace",
    "gompertz_factor",
    "list_presets",
    "load_preset",
    "near_insolvency",
    "offered_value",
    "optimize_at",
    "parse_scenario",
    "peak_scan",
    "phasor_eval",
    "regime",
    "serialize_scenario",
    "simulate",
    "value_decomposition",
]

__version__ = "0.1.0"
