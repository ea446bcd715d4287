from __future__ import annotations

from fastapi.testclient import TestClient

from api.index import app

TOY_TEXT = "vars: x, y\nx + y - 3\nx*y - 2\n"

client = TestClient(app)


def test_health() -> None:
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_solve_toy() -> None:
    response = client.post("/solve", json={"system": TOY_TEXT, "isolate": True})
    assert response.status_code == 200
    body = response.json()
    assert body["certification"] == "verified"
    assert body["minpoly"] == ["2", "-3", "1"]
    assert [s["coordinates"]["x"]["lo"] for s in body["solutions"]] == ["2", "1"]
    assert "giac" not in body


def test_solve_parse_error() -> None:
    response = client.post("/solve", json={"system": "vars: x\nx + z\n"})
    assert response.status_code == 422
    assert response.json()["detail"] == {
        "message": "undeclared variable 'z'",
        "line": 2,
        "column": 5,
    }


def test_solve_positive_dimensional() -> None:
    response = client.post("/solve", json={"system": "vars: x, y\nx*y - 1\n"})
    assert response.status_code == 409


def test_solve_rejects_bad_options() -> None:
    response = client.post("/solve", json={"system": TOY_TEXT, "certify": -1})
    assert response.status_code == 422


def test_system_text() -> None:
    response = client.get("/systems/katsura", params={"size": 3})
    assert response.status_code == 200
    assert response.json()["system"].startswith("vars: x1, x2, x3\n")

    assert client.get("/systems/cyclic").status_code == 404
    assert client.get("/systems/katsura", params={"size": 1}).status_code == 422
