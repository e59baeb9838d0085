import base64
import json

import pytest
from fastapi.testclient import TestClient

from fraxdim.service import app

client = TestClient(app)


def scene_doc(fixtures_dir, name):
    return json.loads((fixtures_dir / f"{name}.json").read_text())


def test_healthz():
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_validate_endpoint(fixtures_dir):
    doc = scene_doc(fixtures_dir, "moran_pair")
    resp = client.post("/v1/validate", json={"scene": doc})
    assert resp.status_code == 200
    body = resp.json()
    assert body["valid"] is True
    assert any(s["stage"] == "assemble-gifs" for s in body["stages"])


def test_validate_endpoint_rejects(fixtures_dir):
    doc = scene_doc(fixtures_dir, "noncontractive")
    resp = client.post("/v1/validate", json={"scene": doc})
    assert resp.status_code == 422
    detail = resp.json()["detail"]
    assert detail["exit_code"] == 2
    assert "non-contractive" in detail["message"]


def test_dim_endpoint(fixtures_dir):
    doc = scene_doc(fixtures_dir, "cylinder_sierpinski")
    resp = client.post("/v1/dim", json={"scene": doc})
    assert resp.status_code == 200
    body = resp.json()
    assert body["method"] == "gosc"
    assert abs(body["alpha"] - 1.5849625007) < 1e-8
    assert abs(body["lambda_at_alpha"] - 1.0) < 1e-7


def test_ftc_endpoint(fixtures_dir):
    doc = scene_doc(fixtures_dir, "golden_triangle")
    resp = client.post("/v1/ftc", json={"scene": doc})
    assert resp.status_code == 200
    body = resp.json()
    assert body["finite"] is True
    assert body["type_count"] == 6


def test_render_endpoint(fixtures_dir):
    doc = scene_doc(fixtures_dir, "moran_pair")
    resp = client.post(
        "/v1/render", json={"scene": doc, "depth": 6, "width": 64, "height": 8}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["width"] == 64
    data = base64.b64decode(body["ppm_base64"])
    assert data.startswith(b"P6\n64 8\n")


def test_bad_scene_is_422():
    resp = client.post("/v1/dim", json={"scene": {"field": "nope"}})
    assert resp.status_code == 422
