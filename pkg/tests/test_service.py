import json
import math
import threading

import pytest
from fastapi.testclient import TestClient

from mediate.cli import main
from mediate.scenario_io import document_to_mapping, load_preset
from mediate.service import ScenarioStore, create_app


@pytest.fixture
def client():
    return TestClient(create_app())


def fig2_mapping():
    return document_to_mapping(load_preset("fig2_red"))


# ---------------------------------------------------------------- scenarios


def test_presets_endpoint(client):
    response = client.get("/v1/presets")
    assert response.status_code == 200
    assert response.json() == ["fig2_red", "fig3", "fig4", "fig5"]


def test_preset_document_fetch(client):
    response = client.get("/v1/presets/fig2_red")
    assert response.status_code == 200
    body = response.json()
    assert body["name"] == "fig2_red"
    assert body["document"]["contract"]["unit_value"] == 1000.0
    assert client.get("/v1/presets/fig99").status_code == 404


def test_scenario_crud_with_revisions(client):
    created = client.post("/v1/scenarios", json={"document": fig2_mapping()})
    assert created.status_code == 201
    key = created.json()["id"]
    assert created.json()["revision"] == 1

    fetched = client.get(f"/v1/scenarios/{key}")
    assert fetched.status_code == 200
    assert fetched.json()["revision"] == 1

    updated_doc = fig2_mapping()
    updated_doc["constraints"]["buyer_demand"]["core"] = 150.0
    updated = client.put(f"/v1/scenarios/{key}", json={"document": updated_doc})
    assert updated.status_code == 200
    assert updated.json()["revision"] == 2
    assert client.get(f"/v1/scenarios/{key}").json()["document"]["constraints"][
        "buyer_demand"
    ]["core"] == 150.0

    stale = client.put(
        f"/v1/scenarios/{key}", json={"document": updated_doc, "expected_revision": 1}
    )
    assert stale.status_code == 409

    assert client.delete(f"/v1/scenarios/{key}").status_code == 204
    assert client.get(f"/v1/scenarios/{key}").status_code == 404


def test_invalid_document_names_invariant(client):
    bad = fig2_mapping()
    bad["performances"][1]["value_per_unit"] = 1.2
    response = client.put("/v1/scenarios/whatever", json={"document": bad})
    assert response.status_code == 422
    assert response.json()["invariant"] == "money_value_in_unit_interval"

    created = client.post("/v1/scenarios", json={"document": bad})
    assert created.status_code == 422


def test_file_backed_store_round_trip(tmp_path):
    app = create_app(persist_dir=tmp_path)
    with TestClient(app) as client:
        key = client.post("/v1/scenarios", json={"document": fig2_mapping()}).json()["id"]
    assert (tmp_path / f"{key}.yaml").is_file()
    revived = TestClient(create_app(persist_dir=tmp_path))
    assert revived.get(f"/v1/scenarios/{key}").status_code == 200


def test_concurrent_writes_keep_revisions_monotonic():
    store = ScenarioStore()
    app = create_app(store=store)
    client = TestClient(app)
    key = client.post("/v1/scenarios", json={"document": fig2_mapping()}).json()["id"]

    def bump():
        for _ in range(20):
            client.put(f"/v1/scenarios/{key}", json={"document": fig2_mapping()})

    threads = [threading.Thread(target=bump) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert client.get(f"/v1/scenarios/{key}").json()["revision"] == 81


# ------------------------------------------------------------------ compute


def test_optimize_with_preset_reference(client):
    response = client.post("/v1/optimize", json={"preset": "fig2_red", "t": 1.5708})
    assert response.status_code == 200
    body = response.json()
    z = body["allocation"]["z"]
    assert z[0][0] == pytest.approx(100.0)
    assert z[0][1] == pytest.approx(81.81818181818181)
    assert z[1][0] == pytest.approx(27272.727272727272)
    assert body["regime"] == "units_preferred"
    assert "near_insolvent" in body and "binding_constraints" in body


def test_optimize_fig5(client):
    body = client.post("/v1/optimize", json={"preset": "fig5", "t": 1.5708}).json()
    z = body["allocation"]["z"]
    assert z[0][1] == pytest.approx(70.0)
    assert z[1][0] == pytest.approx(32000.0)


def test_optimize_with_stored_and_inline_documents(client):
    key = client.post("/v1/scenarios", json={"document": fig2_mapping()}).json()["id"]
    by_id = client.post("/v1/optimize", json={"id": key, "t": 0.0}).json()
    inline = client.post("/v1/optimize", json={"document": fig2_mapping(), "t": 0.0}).json()
    assert by_id == inline
    assert by_id["near_insolvent"] is True


def test_optimize_regime_tie_conflict(client):
    mapping = fig2_mapping()
    mapping["performances"][0]["value_per_unit"] = 500.0
    mapping["performances"][1]["value_per_unit"] = 0.5
    mapping["installments"] = [{"delay": 1.0}, {"delay": 1.0}]
    response = client.post("/v1/optimize", json={"document": mapping, "t": 0.0})
    assert response.status_code == 409
    assert response.json()["error"] == "regime_tie"


def test_optimize_requires_exactly_one_reference(client):
    assert client.post("/v1/optimize", json={"t": 0.0}).status_code == 422
    both = {"preset": "fig2_red", "document": fig2_mapping(), "t": 0.0}
    assert client.post("/v1/optimize", json=both).status_code == 422


def test_simulate_reports_settlement(client):
    body = client.post("/v1/simulate", json={"preset": "fig2_red"}).json()
    assert len(body["points"]) == 401
    assert body["settlement"]["t_star"] == pytest.approx(1.166, abs=0.02)
    assert body["settlement"]["units_settled"] == pytest.approx(181.8, abs=1.0)


def test_simulate_rejects_bad_steps(client):
    assert client.post("/v1/simulate", json={"preset": "fig2_red", "steps": 1}).status_code == 422
    too_many = client.post("/v1/simulate", json={"preset": "fig2_red", "steps": 10_000})
    assert too_many.status_code == 422


def test_compare_endpoint(client):
    body = client.post("/v1/compare", json={"preset": "fig4"}).json()
    assert body["decision"] == "stay_with_supplier"
    assert body["threshold"] == pytest.approx(140625.0)
    assert body["settlement"]["t_star"] == pytest.approx(1.166, abs=0.02)

    dominated = client.post(
        "/v1/compare",
        json={
            "preset": "fig2_red",
            "alternate": {"alternate_value": 0.0, "termination_cost": 10**9},
        },
    ).json()
    assert dominated["decision"] == "stay_with_supplier"
    assert dominated["flip_time"] == 0.0


def test_compare_requires_offer(client):
    assert client.post("/v1/compare", json={"preset": "fig2_red"}).status_code == 422


def test_optimize_is_pure_given_body(client):
    first = client.post("/v1/optimize", json={"preset": "fig2_red", "t": 0.7}).json()
    second = client.post("/v1/optimize", json={"preset": "fig2_red", "t": 0.7}).json()
    assert first == second


# ------------------------------------------------------------------ parity


def test_cli_and_api_payloads_match_bit_for_bit(client, capsys):
    for preset in ("fig2_red", "fig3", "fig4", "fig5"):
        for t in (0.0, 0.3, 1.5708):
            assert main(["solve", preset, "--time", str(t), "--json"]) == 0
            cli_payload = json.loads(capsys.readouterr().out)
            api_payload = client.post("/v1/optimize", json={"preset": preset, "t": t}).json()
            assert cli_payload == api_payload
