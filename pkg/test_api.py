import pytest
from fastapi.testclient import TestClient

from main import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


@pytest.fixture
def body(load_document):
    def dump(name: str) -> dict:
        return load_document(name).model_dump(exclude_none=True)
    return dump


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    payload = response.json()
    assert payload["status"] == "healthy"
    assert "max_entries" in payload["basis_cache"]
    assert response.headers["X-Request-ID"]


def test_root_lists_endpoints(client):
    endpoints = client.get("/").json()["endpoints"]
    assert endpoints["decompose"] == "/api/v1/decompose"
    assert endpoints["analyze"] == "/api/v1/complex/analyze"


def test_analyze(client, body):
    response = client.post("/api/v1/complex/analyze", json=body("closed_path"))
    assert response.status_code == 200
    assert response.json()["closed"] is True


def test_decompose_with_verification(client, body):
    response = client.post("/api/v1/decompose", params={"verify": "true"}, json=body("full_skeleton_2x3"))
    assert response.status_code == 200
    assert response.json()["verification"]["verdict"] == "pass"


def test_failed_verification_is_still_ok(client, body):
    response = client.post("/api/v1/decompose", params={"verify": "true", "candidate": "[1|1]"},
                           json=body("full_skeleton_2x3"))
    assert response.status_code == 200
    assert response.json()["verification"]["verdict"] == "fail"


def test_candidate_without_verify_is_rejected(client, body):
    response = client.post("/api/v1/decompose", params={"candidate": "[1|1]"}, json=body("full_skeleton_2x3"))
    assert response.status_code == 422
    assert response.json()["error"] == "ArgumentError"


def test_structural_error_is_a_conflict(client, body):
    response = client.post("/api/v1/decompose", params={"mode": "block"}, json=body("union"))
    assert response.status_code == 409
    assert response.json()["error"] == "StructuralError"


def test_unsupported_shape_is_a_conflict(client, body):
    response = client.post("/api/v1/betti", params={"method": "formula"}, json=body("four_cliques"))
    assert response.status_code == 409
    assert response.json()["error"] == "UnsupportedShapeError"


def test_betti_formula(client, body):
    response = client.post("/api/v1/betti", params={"method": "formula"}, json=body("full_skeleton_2x3"))
    assert response.status_code == 200
    assert list(response.json()["tables"]) == ["formula"]


def test_bad_field_is_unprocessable(client, body):
    response = client.post("/api/v1/complex/gb", params={"field": "prime:4"}, json=body("full_skeleton_2x3"))
    assert response.status_code == 422
    assert response.json()["error"] == "ConfigurationError"


def test_step_limit_is_too_large(client, body):
    response = client.post("/api/v1/complex/gb", params={"limit_steps": 1}, json=body("closed_path"))
    assert response.status_code == 413
    assert response.json()["limit"] == "step_limit"


def test_schema_violation(client):
    response = client.post("/api/v1/complex/gb", json={"rows": 2, "facets": [[1, 2, 3]]})
    assert response.status_code == 422


def test_probe(client, body):
    response = client.post("/api/v1/complex/probe", params={"trials": 3, "seed": 2}, json=body("full_skeleton_2x3"))
    assert response.status_code == 200
    assert response.json()["passed"] == 3


def test_metrics_count_requests(client):
    client.get("/health")
    response = client.get("/metrics")
    assert response.status_code == 200
    assert "http_requests_total" in response.text
