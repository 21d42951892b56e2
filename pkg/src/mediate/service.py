"""JSON-over-HTTP facade for the optimizer and the simulation engine.

Versioned under ``/v1``. Stateless between requests except for the named
scenario store, which keeps revisioned documents in memory (optionally
mirrored to a directory of YAML files). Numeric payloads are the library's
floats untouched; nothing is rounded in this layer.
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .engine import SimulationConfig, compare_alternate, simulate
from .model import InvariantViolation, ModelError, RegimeTieError
from .optimizer import optimize_at
from .payloads import comparison_payload, solve_report_payload, trace_payload
from .scenario_io import (
    ScenarioDocument,
    ScenarioFormatError,
    document_from_mapping,
    document_to_mapping,
    list_presets,
    load_preset,
    serialize_scenario,
)

MAX_TRACE_POINTS = 10_000


class ApiError(Exception):
    def __init__(self, status: int, body: dict):
        super().__init__(body.get("detail", ""))
        self.status = status
        self.body = body


def _invalid(invariant: str, detail: str) -> ApiError:
    return ApiError(422, {"error": "invalid_document", "invariant": invariant, "detail": detail})


class ScenarioStore:
    """Named, revisioned scenario documents; reads always see the latest write."""

    def __init__(self, persist_dir: str | Path | None = None):
        self._lock = threading.Lock()
        self._items: dict[str, tuple[int, dict]] = {}
        self._dir = Path(persist_dir) if persist_dir else None
        if self._dir is not None:
            self._dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self._dir.glob("*.yaml")):
                from .scenario_io import load_scenario_file

                doc = load_scenario_file(path)
                self._items[path.stem] = (1, document_to_mapping(doc))

    def _write_back(self, key: str, doc: ScenarioDocument) -> None:
        if self._dir is not None:
            (self._dir / f"{key}.yaml").write_text(serialize_scenario(doc), encoding="utf-8")

    def create(self, mapping: dict, doc: ScenarioDocument) -> tuple[str, int]:
        key = uuid.uuid4().hex[:12]
        with self._lock:
            self._items[key] = (1, mapping)
            self._write_back(key, doc)
        return key, 1

    def update(
        self, key: str, mapping: dict, doc: ScenarioDocument, expected_revision: int | None
    ) -> int:
        with self._lock:
            if key not in self._items:
                raise ApiError(404, {"error": "not_found", "detail": f"no scenario {key!r}"})
            revision, _ = self._items[key]
            if expected_revision is not None and expected_revision != revision:
                raise ApiError(
                    409,
                    {
                        "error": "revision_conflict",
                        "detail": f"expected revision {expected_revision}, store has {revision}",
                    },
                )
            self._items[key] = (revision + 1, mapping)
            self._write_back(key, doc)
            return revision + 1

    def get(self, key: str) -> tuple[int, dict]:
        with self._lock:
            if key not in self._items:
                raise ApiError(404, {"error": "not_found", "detail": f"no scenario {key!r}"})
            return self._items[key]

    def delete(self, key: str) -> None:
        with self._lock:
            if key not in self._items:
                raise ApiError(404, {"error": "not_found", "detail": f"no scenario {key!r}"})
            del self._items[key]
            if self._dir is not None:
                (self._dir / f"{key}.yaml").unlink(missing_ok=True)

    def keys(self) -> list[tuple[str, int]]:
        with self._lock:
            return [(key, revision) for key, (revision, _) in sorted(self._items.items())]


def _parse_document(mapping: Any) -> ScenarioDocument:
    if not isinstance(mapping, Mapping):
        raise _invalid("document", "body field 'document' must be a mapping")
    try:
        return document_from_mapping(mapping)
    except InvariantViolation as exc:
        raise _invalid(exc.invariant, str(exc)) from exc
    except ScenarioFormatError as exc:
        raise _invalid(exc.path, str(exc)) from exc


def create_app(
    store: ScenarioStore | None = None,
    persist_dir: str | Path | None = None,
    console_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="mediate", version="1")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    scenarios = store or ScenarioStore(persist_dir)

    @app.exception_handler(ApiError)
    async def _api_error(_, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body)

    def _resolve_document(body: Mapping) -> ScenarioDocument:
        given = [key for key in ("document", "id", "preset") if body.get(key) is not None]
        if len(given) != 1:
            raise _invalid("scenario_reference", "pass exactly one of 'document', 'id', 'preset'")
        if "document" in given:
            return _parse_document(body["document"])
        if "id" in given:
            _, mapping = scenarios.get(str(body["id"]))
            return _parse_document(mapping)
        name = str(body["preset"])
        if name not in list_presets():
            raise ApiError(404, {"error": "not_found", "detail": f"no preset {name!r}"})
        return load_preset(name)

    def _simulation_config(body: Mapping, doc: ScenarioDocument) -> SimulationConfig:
        base = doc.simulation or SimulationConfig()
        t_max = body.get("t_max", base.t_max)
        steps = body.get("steps", base.steps)
        if not isinstance(steps, int) or isinstance(steps, bool):
            raise _invalid("simulation_config", "steps must be an integer")
        if steps + 1 > MAX_TRACE_POINTS:
            raise _invalid("simulation_config", f"trace capped at {MAX_TRACE_POINTS} points")
        try:
            return SimulationConfig(t_max=t_max, steps=steps, settlement_rule=base.settlement_rule)
        except InvariantViolation as exc:
            raise _invalid(exc.invariant, str(exc)) from exc

    # ------------------------------------------------------------ scenarios

    @app.get("/v1/presets")
    async def get_presets():
        return list_presets()

    @app.get("/v1/presets/{name}")
    async def get_preset(name: str):
        if name not in list_presets():
            raise ApiError(404, {"error": "not_found", "detail": f"no preset {name!r}"})
        return {"name": name, "document": document_to_mapping(load_preset(name))}

    @app.get("/v1/scenarios")
    async def list_scenarios():
        return [{"id": key, "revision": revision} for key, revision in scenarios.keys()]

    @app.post("/v1/scenarios", status_code=201)
    async def post_scenario(body: dict):
        doc = _parse_document(body.get("document"))
        key, revision = scenarios.create(dict(body["document"]), doc)
        return {"id": key, "revision": revision}

    @app.get("/v1/scenarios/{key}")
    async def get_scenario(key: str):
        revision, mapping = scenarios.get(key)
        return {"id": key, "revision": revision, "document": mapping}

    @app.put("/v1/scenarios/{key}")
    async def put_scenario(key: str, body: dict):
        doc = _parse_document(body.get("document"))
        expected = body.get("expected_revision")
        if expected is not None and not isinstance(expected, int):
            raise _invalid("expected_revision", "expected_revision must be an integer")
        revision = scenarios.update(key, dict(body["document"]), doc, expected)
        return {"id": key, "revision": revision}

    @app.delete("/v1/scenarios/{key}", status_code=204)
    async def delete_scenario(key: str):
        scenarios.delete(key)
        return Response(status_code=204)

    # ------------------------------------------------------------- compute

    @app.post("/v1/optimize")
    async def post_optimize(body: dict):
        doc = _resolve_document(body)
        t = body.get("t", 0.0)
        if isinstance(t, bool) or not isinstance(t, (int, float)):
            raise _invalid("time", "t must be a number")
        try:
            report = optimize_at(doc.scenario, float(t))
        except RegimeTieError as exc:
            raise ApiError(409, {"error": "regime_tie", "detail": str(exc)}) from exc
        except ModelError as exc:
            raise _invalid("scenario", str(exc)) from exc
        return solve_report_payload(report)

    @app.post("/v1/simulate")
    async def post_simulate(body: dict):
        doc = _resolve_document(body)
        config = _simulation_config(body, doc)
        try:
            trace = simulate(doc.scenario, config)
        except RegimeTieError as exc:
            raise ApiError(409, {"error": "regime_tie", "detail": str(exc)}) from exc
        except ModelError as exc:
            raise _invalid("scenario", str(exc)) from exc
        return trace_payload(trace)

    @app.post("/v1/compare")
    async def post_compare(body: dict):
        doc = _resolve_document(body)
        offer = doc.alternate_offer
        if body.get("alternate") is not None:
            from .scenario_io import alternate_offer_from_mapping

            try:
                offer = alternate_offer_from_mapping(body["alternate"], "alternate")
            except InvariantViolation as exc:
                raise _invalid(exc.invariant, str(exc)) from exc
            except ScenarioFormatError as exc:
                raise _invalid(exc.path, str(exc)) from exc
        if offer is None:
            raise _invalid("alternate_offer", "no alternate offer given or embedded")
        config = _simulation_config(body, doc)
        try:
            trace = simulate(doc.scenario, config)
            result = compare_alternate(trace, offer)
        except RegimeTieError as exc:
            raise ApiError(409, {"error": "regime_tie", "detail": str(exc)}) from exc
        except ModelError as exc:
            raise _invalid("scenario", str(exc)) from exc
        payload = comparison_payload(result)
        payload["settlement"] = trace_payload(trace)["settlement"]
        return payload

    if console_dir is not None and Path(console_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(console_dir), html=True), name="console")

    return app
