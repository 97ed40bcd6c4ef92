from fastapi.testclient import TestClient

from lewalk.service.app import app

from .test_document import LEGGED_CYCLE_DOC

client = TestClient(app, raise_server_exceptions=False)

PATH_CHAIN_DOC = """format: 1
kind: conductivity
vertex: a boundary
vertex: m
vertex: b boundary
edge: a m 1
edge: m b 1
"""


def test_health():
    reply = client.get("/health")
    assert reply.status_code == 200
    assert reply.json()["status"] == "ok"


def test_hitting_matrix_endpoint():
    reply = client.post("/hitting-matrix", json={"document": LEGGED_CYCLE_DOC})
    assert reply.status_code == 200
    body = reply.json()
    assert body["rows"] == ["a1", "a2", "b1", "b2", "u", "v", "w"]
    assert body["cols"] == ["b1", "b2"]
    assert body["entries"][0] == ["2/7", "1/14"]
    assert body["entries"][1] == ["1/14", "1/7"]


def test_minor_endpoint():
    reply = client.post(
        "/minor",
        json={
            "document": LEGGED_CYCLE_DOC,
            "rows": ["a1", "a2"],
            "cols": ["b1", "b2"],
            "hitting": True,
        },
    )
    assert reply.status_code == 200
    assert reply.json()["value"] == "1/28"


def test_minor_series_mode():
    reply = client.post(
        "/minor",
        json={
            "document": LEGGED_CYCLE_DOC,
            "rows": ["a1"],
            "cols": ["b1"],
            "hitting": True,
            "mode": "series",
            "order": 5,
        },
    )
    assert reply.status_code == 200
    assert reply.json()["value"] == "0,0,1/4,0,0,1/32"


def test_walk_matrix_series_endpoint():
    doc = (
        "format: 1\nkind: directed\nvertex: a\nvertex: b\nedge: a b 1/2\n"
    )
    reply = client.post(
        "/walk-matrix", json={"document": doc, "mode": "series", "order": 3}
    )
    assert reply.status_code == 200
    body = reply.json()
    assert body["kind"] == "series"
    assert body["entries"][0][1] == "0,1/2,0,0"


def test_oracle_check_endpoint():
    reply = client.post(
        "/oracle-check",
        json={
            "document": LEGGED_CYCLE_DOC,
            "rows": ["a1", "a2"],
            "cols": ["b1", "b2"],
            "order": 7,
            "hitting": True,
        },
    )
    assert reply.status_code == 200
    body = reply.json()
    assert body["status"] == "match"
    assert body["coefficients"][4]["oracle"] == body["coefficients"][4]["determinant"]


def test_le_endpoint():
    reply = client.post(
        "/le", json={"document": LEGGED_CYCLE_DOC, "walk": [2, 3, 5, 6, 3]}
    )
    assert reply.status_code == 200
    body = reply.json()
    assert body["edges"] == [2, 3]
    assert body["vertices"] == ["a2", "u", "v"]


def test_tnn_check_endpoint():
    reply = client.post(
        "/tnn-check",
        json={
            "document": LEGGED_CYCLE_DOC,
            "rows": ["a1", "a2"],
            "cols": ["b1", "b2"],
            "hitting": True,
            "max_minor": 2,
        },
    )
    assert reply.status_code == 200
    assert reply.json()["totally_nonnegative"] is True


def test_tnn_witness_reported():
    doc = (
        "format: 1\nkind: directed\nvertex: a\nvertex: b\n"
        "edge: a b -1/2\n"
    )
    reply = client.post(
        "/tnn-check", json={"document": doc, "max_minor": 1}
    )
    assert reply.status_code == 200
    body = reply.json()
    assert body["totally_nonnegative"] is False
    assert body["witness"]["value"] == "-1/2"


def test_resistor_endpoints():
    reply = client.post(
        "/resistor/response", json={"document": PATH_CHAIN_DOC}
    )
    assert reply.json()["entries"] == [["1/2", "-1/2"], ["-1/2", "1/2"]]
    reply = client.post(
        "/resistor/hitting", json={"document": PATH_CHAIN_DOC}
    )
    assert reply.json()["entries"] == [["1/2", "1/2"], ["1/2", "1/2"]]
    reply = client.post(
        "/resistor/markov", json={"document": PATH_CHAIN_DOC}
    )
    assert "edge: m a 1/2" in reply.json()["document"]
    reply = client.post(
        "/resistor/ingerman",
        json={"document": PATH_CHAIN_DOC, "rows": ["a"], "cols": ["b"]},
    )
    body = reply.json()
    assert body["response_minor"] == "-1/2"
    assert body["hitting_minor"] == "1/2"
    assert len(body["families"]) == 1


def test_mc_endpoint_deterministic():
    request = {
        "document": LEGGED_CYCLE_DOC,
        "rows": ["a1", "a2"],
        "cols": ["b1", "b2"],
        "samples": 20000,
        "seed": 9,
        "max_steps": 500,
    }
    first = client.post("/mc/hitting-minor", json=request).json()
    second = client.post("/mc/hitting-minor", json=request).json()
    assert first == second
    assert abs(first["mean"] - 1 / 28) < 4 * first["stderr"]


def test_bernoulli_endpoint():
    reply = client.post(
        "/bernoulli", json={"p": "3/4", "k": 1, "l": 1, "m": 1}
    )
    body = reply.json()
    assert body["w"] == "2"
    assert body["e2"] == "4/3"
    assert body["e3"] == "12/13"


def test_brownian_endpoints():
    reply = client.post(
        "/brownian/quadrant-det2",
        json={"x1": 1, "x2": 2, "y1": 1, "y2": 2},
    )
    assert abs(float(reply.json()["value"]) - 0.018237813055620798) < 1e-15
    reply = client.post(
        "/brownian/cond", json={"x1": 1, "x2": 2, "y1": 1, "y2": 2}
    )
    assert float(reply.json()["value"]) == 0.36
    reply = client.post(
        "/brownian/nonint", json={"alpha": 2.0, "quadrature": True}
    )
    body = reply.json()
    assert abs(float(body["value"]) - float(body["quadrature"])) < 1e-6
    reply = client.post(
        "/brownian/tp-check",
        json={"kernel": "strip", "xs": [0, 1, 2], "ys": [0, 1, 2]},
    )
    assert reply.json()["totally_positive"] is True


def test_discretize_endpoint():
    reply = client.post(
        "/brownian/discretize", json={"h": "1/2", "radius": "1"}
    )
    assert reply.status_code == 200
    doc = reply.json()["document"]
    assert "vertex: x0y0 boundary" in doc
    assert "vertex: x1y1" in doc


def test_grid_endpoint_round_trip():
    reply = client.post(
        "/grid", json={"rows": 2, "cols": 3, "kind": "directed"}
    )
    doc = reply.json()["document"]
    reply2 = client.post(
        "/minor",
        json={
            "document": doc,
            "rows": ["r0c0", "r1c0"],
            "cols": ["r0c2", "r1c2"],
            "hitting": True,
        },
    )
    assert reply2.status_code == 200


def test_error_mapping_parse():
    reply = client.post("/walk-matrix", json={"document": "format: 7\n"})
    assert reply.status_code == 400
    body = reply.json()
    assert body["status"] == "error"
    assert body["error"] == "ParseError"


def test_error_mapping_domain():
    doc = "format: 1\nkind: directed\nvertex: a\nedge: a a 2\n"
    reply = client.post("/walk-matrix", json={"document": doc})
    assert reply.status_code == 422
    assert reply.json()["error"] == "Divergent"


def test_error_mapping_drift():
    reply = client.post(
        "/bernoulli", json={"p": "1/3", "k": 1, "l": 1, "m": 1}
    )
    assert reply.status_code == 422
    assert reply.json()["error"] == "DriftViolation"


def test_matrix_output_is_name_sorted():
    # document order differs from name order; output must sort by name
    doc = (
        "format: 1\nkind: directed\n"
        "vertex: zz\nvertex: aa boundary\nvertex: mm\n"
        "edge: zz mm 1/4\nedge: mm aa 1/4\nedge: mm zz 1/4\n"
    )
    reply = client.post("/hitting-matrix", json={"document": doc})
    body = reply.json()
    assert body["rows"] == ["aa", "mm", "zz"]
    assert body["cols"] == ["aa"]
    reply = client.post(
        "/walk-matrix", json={"document": doc, "mode": "series", "order": 2}
    )
    assert reply.json()["rows"] == ["aa", "mm", "zz"]
