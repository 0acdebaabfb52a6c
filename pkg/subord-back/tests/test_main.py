import json

import pytest

import main

NUNOKAWA = {"family": "linear-deriv", "A": 1, "B": 0, "D": 1, "E": 0, "k": 0}


@pytest.fixture
def client():
    main.app.config["TESTING"] = True
    return main.app.test_client()


def test_home_lists_families(client):
    response = client.get("/")
    assert response.status_code == 200
    payload = response.get_json()
    assert len(payload["families"]) == 10
    assert "check" in payload["commands"]


def test_invoke_check(client):
    response = client.post("/invoke", json={"command": "check", **NUNOKAWA, "beta": [1, 0]})
    assert response.status_code == 200
    payload = json.loads(response.data)
    assert payload["schema"] == 1
    assert payload["passed"] is True
    assert payload["margin"] == 0


def test_invoke_region_returns_rows(client):
    response = client.post("/invoke", json={"command": "region", "A": 1, "B": 0, "points": 8})
    assert response.status_code == 200
    assert len(json.loads(response.data)["rows"]) == 8


def test_invoke_starlike_inline_series(client):
    body = {"command": "starlike", "variant": "ii", "A": 1, "B": -1, "D": 0.5, "E": -0.5, "beta": 40, "series": [0, 1]}
    response = client.post("/invoke", json=body)
    assert response.status_code == 200
    payload = json.loads(response.data)
    assert payload["hypothesis_margin"] == pytest.approx(1)
    assert payload["conclusion_margin"] == pytest.approx(1)


@pytest.mark.parametrize(
    "body, message",
    [
        ({}, "command is required"),
        ({"command": "check", **NUNOKAWA, "family": "nope", "beta": 1}, "unknown family"),
        ({"command": "check", **NUNOKAWA, "beta": 1, "colour": "red"}, "unknown fields"),
        ({"command": "starlike", "variant": "a", "series": "/etc/f.json"}, "inline"),
    ],
)
def test_invoke_rejects_invalid_input(client, body, message):
    response = client.post("/invoke", json=body)
    assert response.status_code == 400
    assert message in json.loads(response.data)["error"]


def test_invoke_malformed_grid_is_a_client_error(client):
    response = client.post("/invoke", json={"command": "admissible", **NUNOKAWA, "beta": 1, "m_grid": ["x"]})
    assert response.status_code == 400
    assert "m_grid" in json.loads(response.data)["error"]
