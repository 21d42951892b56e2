"""Scenario documents: YAML parsing/serialization, bundled presets, exports.

A scenario file is one YAML mapping with named sections (performances,
installments, discount, contract, constraints, unit_caps, dynamics, plus
optional simulation and alternate_offer blocks); docs/scenario-format.md
holds the grammar. Parsing is strict: YAML problems surface with line and
column, structural problems name the offending path, and model invariants
are enforced while building the domain objects. ``serialize_scenario``
emits the canonical form, and parsing it back reproduces the document
exactly.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import yaml

from .engine import SettlementEvent, SimulationConfig, SimulationTrace
from .model import (
    AlternateSupplierOffer,
    DiscountModel,
    GompertzParams,
    Installment,
    PerformanceType,
    PhasorConstraint,
    Scenario,
    require_simple_shape,
)

SCHEMA_VERSION = 1
PRESET_ENV_VAR = "MEDIATE_PRESET_DIR"

CSV_HEADER = "t,g_1_1,g_1_2,g_2_1,N_min,S,R,G,gompertz"


class ScenarioSyntaxError(ValueError):
    """Malformed document text; carries the 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


class ScenarioFormatError(ValueError):
    """Structurally wrong document; carries the offending key path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class ScenarioDocument:
    scenario: Scenario
    schema_version: int = SCHEMA_VERSION
    alternate_offer: AlternateSupplierOffer | None = None
    simulation: SimulationConfig | None = None


# ----------------------------------------------------------------- parsing


def _require(mapping: Mapping, key: str, path: str) -> Any:
    if not isinstance(mapping, Mapping):
        raise ScenarioFormatError(path or "<root>", "expected a mapping")
    if key not in mapping:
        raise ScenarioFormatError(f"{path}{key}", "missing required field")
    return mapping[key]


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioFormatError(path, f"expected a number, got {value!r}")
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioFormatError(path, f"expected an integer, got {value!r}")
    return value


def _phasor(raw: Any, path: str) -> PhasorConstraint:
    return PhasorConstraint(
        core=_number(_require(raw, "core", f"{path}."), f"{path}.core"),
        modulation=_number(raw.get("modulation", 0.0), f"{path}.modulation"),
        phase_rate=_number(_require(raw, "phase_rate", f"{path}."), f"{path}.phase_rate"),
    )


def _performance(raw: Any, path: str) -> PerformanceType:
    kind = _require(raw, "kind", f"{path}.")
    perf_id = _require(raw, "id", f"{path}.")
    if not isinstance(perf_id, str) or not perf_id:
        raise ScenarioFormatError(f"{path}.id", "expected a non-empty string")
    value = _number(_require(raw, "value_per_unit", f"{path}."), f"{path}.value_per_unit")
    cost = _number(raw.get("cost_per_unit", 1.0), f"{path}.cost_per_unit")
    return PerformanceType(id=perf_id, kind=kind, value_per_unit=value, cost_per_unit=cost)


def alternate_offer_from_mapping(raw: Any, path: str) -> AlternateSupplierOffer:
    return AlternateSupplierOffer(
        alternate_value=_number(_require(raw, "alternate_value", f"{path}."), f"{path}.alternate_value"),
        expected_damages=_number(raw.get("expected_damages", 0.0), f"{path}.expected_damages"),
        damages_delay=_number(raw.get("damages_delay", 0.0), f"{path}.damages_delay"),
        litigation_risk=_number(raw.get("litigation_risk", 0.0), f"{path}.litigation_risk"),
        alternate_failure_risk=_number(
            raw.get("alternate_failure_risk", 1.0), f"{path}.alternate_failure_risk"
        ),
        termination_cost=_number(raw.get("termination_cost", 0.0), f"{path}.termination_cost"),
    )


def _simulation(raw: Any, path: str) -> SimulationConfig:
    kwargs: dict[str, Any] = {}
    if "t_max" in raw:
        kwargs["t_max"] = _number(raw["t_max"], f"{path}.t_max")
    if "steps" in raw:
        kwargs["steps"] = _integer(raw["steps"], f"{path}.steps")
    if raw.get("settlement_rule") is not None:
        kwargs["settlement_rule"] = raw["settlement_rule"]
    return SimulationConfig(**kwargs)


def document_from_mapping(raw: Mapping) -> ScenarioDocument:
    """Build and validate a document from an already-decoded mapping.

    Shared by the YAML reader and the HTTP service (which receives JSON).
    """
    if not isinstance(raw, Mapping):
        raise ScenarioFormatError("<root>", "expected a mapping of named sections")
    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ScenarioFormatError("schema_version", f"unsupported version {version!r}")

    perf_raw = _require(raw, "performances", "")
    if not isinstance(perf_raw, list) or not perf_raw:
        raise ScenarioFormatError("performances", "expected a non-empty list")
    performances = tuple(
        _performance(entry, f"performances[{i}]") for i, entry in enumerate(perf_raw)
    )

    inst_raw = _require(raw, "installments", "")
    if not isinstance(inst_raw, list) or not inst_raw:
        raise ScenarioFormatError("installments", "expected a non-empty list")
    installments = tuple(
        Installment(
            index=i + 1, delay=_number(_require(entry, "delay", f"installments[{i}]."), f"installments[{i}].delay")
        )
        for i, entry in enumerate(inst_raw)
    )

    discount_raw = _require(raw, "discount", "")
    discount = DiscountModel(rate=_number(_require(discount_raw, "rate", "discount."), "discount.rate"))

    contract_raw = _require(raw, "contract", "")
    contract_value = _number(_require(contract_raw, "unit_value", "contract."), "contract.unit_value")
    contract_cost = _number(_require(contract_raw, "unit_cost", "contract."), "contract.unit_cost")

    constraints_raw = _require(raw, "constraints", "")
    buyer_demand = _phasor(_require(constraints_raw, "buyer_demand", "constraints."), "constraints.buyer_demand")
    solvency = _phasor(
        _require(constraints_raw, "supplier_solvency", "constraints."), "constraints.supplier_solvency"
    )
    capacity = _phasor(
        _require(constraints_raw, "supplier_capacity", "constraints."), "constraints.supplier_capacity"
    )

    caps_raw = _require(raw, "unit_caps", "")
    if not isinstance(caps_raw, list):
        raise ScenarioFormatError("unit_caps", "expected a list (null entries mean uncapped)")
    caps = tuple(
        math.inf if entry is None else _number(entry, f"unit_caps[{i}]")
        for i, entry in enumerate(caps_raw)
    )

    dynamics_raw = _require(raw, "dynamics", "")
    gompertz = GompertzParams(
        concession_delay=_number(
            _require(dynamics_raw, "concession_delay", "dynamics."), "dynamics.concession_delay"
        ),
        concession_rate=_number(
            _require(dynamics_raw, "concession_rate", "dynamics."), "dynamics.concession_rate"
        ),
    )

    scenario = Scenario(
        performances=performances,
        installments=installments,
        discount=discount,
        buyer_demand=buyer_demand,
        supplier_solvency=solvency,
        supplier_capacity=capacity,
        unit_caps=caps,
        contract_unit_value=contract_value,
        contract_unit_cost=contract_cost,
        gompertz=gompertz,
    )

    offer = None
    if raw.get("alternate_offer") is not None:
        offer = alternate_offer_from_mapping(raw["alternate_offer"], "alternate_offer")
    simulation = None
    if raw.get("simulation") is not None:
        simulation = _simulation(raw["simulation"], "simulation")
    return ScenarioDocument(
        scenario=scenario, schema_version=version, alternate_offer=offer, simulation=simulation
    )


def parse_scenario(text: str) -> ScenarioDocument:
    """Parse document text; every model invariant is enforced here."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise ScenarioSyntaxError(
                getattr(exc, "problem", None) or "malformed YAML",
                line=mark.line + 1,
                column=mark.column + 1,
            ) from exc
        raise ScenarioSyntaxError(str(exc)) from exc
    if raw is None:
        raise ScenarioSyntaxError("document is empty", line=1, column=1)
    if not isinstance(raw, dict):
        raise ScenarioSyntaxError("top level must be a mapping of named sections", line=1, column=1)
    return document_from_mapping(raw)


def load_scenario_file(path: str | Path) -> ScenarioDocument:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


# ----------------------------------------------------------- serialization


def _cap_entry(cap: float) -> float | None:
    return None if math.isinf(cap) else cap


def document_to_mapping(doc: ScenarioDocument) -> dict:
    """Canonical plain-data form of a document (stable key order)."""
    s = doc.scenario
    data: dict[str, Any] = {
        "schema_version": doc.schema_version,
        "performances": [
            {
                "id": p.id,
                "kind": p.kind,
                "value_per_unit": p.value_per_unit,
                "cost_per_unit": p.cost_per_unit,
            }
            for p in s.performances
        ],
        "installments": [{"delay": inst.delay} for inst in s.installments],
        "discount": {"rate": s.discount.rate},
        "contract": {"unit_value": s.contract_unit_value, "unit_cost": s.contract_unit_cost},
        "constraints": {
            name: {
                "core": c.core,
                "modulation": c.modulation,
                "phase_rate": c.phase_rate,
            }
            for name, c in (
                ("buyer_demand", s.buyer_demand),
                ("supplier_solvency", s.supplier_solvency),
                ("supplier_capacity", s.supplier_capacity),
            )
        },
        "unit_caps": [_cap_entry(c) for c in s.unit_caps],
        "dynamics": {
            "concession_delay": s.gompertz.concession_delay,
            "concession_rate": s.gompertz.concession_rate,
        },
    }
    if doc.alternate_offer is not None:
        o = doc.alternate_offer
        data["alternate_offer"] = {
            "alternate_value": o.alternate_value,
            "expected_damages": o.expected_damages,
            "damages_delay": o.damages_delay,
            "litigation_risk": o.litigation_risk,
            "alternate_failure_risk": o.alternate_failure_risk,
            "termination_cost": o.termination_cost,
        }
    if doc.simulation is not None:
        data["simulation"] = {
            "t_max": doc.simulation.t_max,
            "steps": doc.simulation.steps,
            "settlement_rule": doc.simulation.settlement_rule,
        }
    return data


def serialize_scenario(doc: ScenarioDocument) -> str:
    return yaml.safe_dump(document_to_mapping(doc), sort_keys=False, default_flow_style=False)


# ----------------------------------------------------------------- presets


def preset_dir() -> Path:
    override = os.environ.get(PRESET_ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files("mediate").joinpath("presets")))


def list_presets() -> list[str]:
    directory = preset_dir()
    if not directory.is_dir():
        return []
    return sorted(p.stem for p in directory.glob("*.yaml"))


def load_preset(name: str) -> ScenarioDocument:
    path = preset_dir() / f"{name}.yaml"
    if not path.is_file():
        raise FileNotFoundError(f"unknown preset {name!r} (looked in {path.parent})")
    return load_scenario_file(path)


def resolve_scenario(ref: str) -> ScenarioDocument:
    """Accept either a file path or a bundled preset name."""
    path = Path(ref)
    if path.is_file():
        return load_scenario_file(path)
    if ref in list_presets():
        return load_preset(ref)
    raise FileNotFoundError(f"no scenario file or preset named {ref!r}")


# ------------------------------------------------------------------ export


def _sig6(value: float) -> str:
    return format(value, ".6g")


def export_trace(trace: SimulationTrace, format: str = "csv") -> str:
    """Render a trace as CSV (6 significant digits) or JSON (full precision).

    CSV rows follow the fixed column schema in ``CSV_HEADER``; a settlement,
    when present, is appended as one trailing ``# settlement,...`` record.
    """
    if format == "csv":
        require_simple_shape(trace.scenario)
        lines = [CSV_HEADER]
        for p in trace.points:
            lines.append(
                ",".join(
                    _sig6(v)
                    for v in (
                        p.t,
                        p.offers[0, 0],
                        p.offers[0, 1],
                        p.offers[1, 0],
                        p.demand,
                        p.solvency,
                        p.capacity,
                        p.buyer_value,
                        p.gompertz,
                    )
                )
            )
        if trace.settlement is not None:
            e = trace.settlement
            lines.append(
                "# settlement,"
                f"t_star={_sig6(e.t_star)},units={_sig6(e.units_settled)},"
                f"money={_sig6(e.money_settled)},G={_sig6(e.buyer_value)},rule={e.rule_used}"
            )
        return "\n".join(lines) + "\n"
    if format == "json":
        payload = {
            "regime": trace.regime,
            "rule": trace.rule,
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
        }
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"unknown export format {format!r}")


def settlement_to_mapping(event: SettlementEvent | None) -> dict | None:
    if event is None:
        return None
    return {
        "t_star": event.t_star,
        "units_settled": event.units_settled,
        "money_settled": event.money_settled,
        "buyer_value": event.buyer_value,
        "rule_used": event.rule_used,
    }
