import math

import numpy as np
import pytest

import ratnear


def suslin():
    return ratnear.chart(["(x1^2 - x2^2)/2", "x1*x2"], 2)


def test_chart_roundtrip():
    c = suslin()
    assert (c.n, c.R, c.eps0) == (2, 2, 0.5)
    back = ratnear.chart_from_json(c.to_json())
    assert back.to_json() == c.to_json()
    assert c.value(1, np.array([0.5, 0.25])) == pytest.approx(0.125)
    with pytest.raises(ratnear.ParseError):
        ratnear.chart(["x1 +"], 1)


def test_curvature():
    rep = ratnear.verify_condition1(suslin())
    assert rep["condition1_holds"]
    assert rep["c1"] == pytest.approx(1.0)
    assert rep["kappa"] == pytest.approx(0.25)
    bad = ratnear.verify_condition1(ratnear.chart(["(x1^2 + x2^2)/2", "x1*x2"], 2))
    assert not bad["condition1_holds"]


def test_selberg_and_fejer():
    p = ratnear.selberg_pair(0.25, 3)
    assert p.plus_coeffs[3].real == pytest.approx(0.75)
    assert p.minus_coeffs[3].real == pytest.approx(0.25)
    assert p.sandwich()["pass"]
    assert p.minus_at(0.1) <= ratnear.interval_indicator(0.25, 0.1) <= p.plus_at(0.1)
    assert ratnear.fejer_eval(5, 0.0) == pytest.approx(1.0)
    with pytest.raises(ratnear.DomainError):
        ratnear.selberg_pair(0.7, 3)


def test_counting():
    c = ratnear.chart(["(x1^2 + x2^2)/2"], 2, "1/4")
    r = ratnear.count_near(c, 50, "0.1")
    assert r["exact"]
    assert r["main_term"] == pytest.approx(0.2 * r["N0"])
    rule = ratnear.count_near(suslin(), 40, "Q^-1/4", weight_center=np.zeros(2), weight_radius=0.2)
    assert rule["weighted"] and rule["delta"] == pytest.approx(40 ** -0.25)
    flat = ratnear.chart(["0"], 2, "1/3")
    assert ratnear.count_on(flat, 10)["hits"] == ratnear.count_near(flat, 10, "0")["points_scanned"]
    with pytest.raises(ratnear.BudgetExceededError):
        ratnear.count_near(suslin(), 1000, "0.1", scan_cap=1e3)


def test_legendre_and_phase():
    c = ratnear.chart(["(x1^2 + x2^2)/2 + x1^4/20"], 2)
    s = ratnear.legendre_round_trip(c, 0, 200)
    assert s["failures"] == 0 and s["max_error"] <= 1e-8
    x = ratnear.invert_gradient(c, 0, np.array([0.1, -0.2]))
    assert x[1] == pytest.approx(-0.2)
    q = ratnear.chart(["(x1^2 + x2^2)/2"], 2)
    r1 = ratnear.stationary_phase(q, 100, [1], [0, 0], 0.5)
    r2 = ratnear.stationary_phase(q, 200, [1], [0, 0], 0.5)
    assert 1.6 <= r1["relative_error"] / r2["relative_error"] <= 2.6
    assert r1["signature"] == 2


def test_matrix_families():
    mats = ratnear.suslin_family(3)
    assert len(mats) == 3 and mats[0].shape == (4, 4)
    assert ratnear.pencil_certificate(mats)["exact"]
    t = [2, -3, 5]
    assert ratnear.pencil_determinant(mats, t) ** 2 == sum(v * v for v in t) ** 4
    assert ratnear.radon_hurwitz(8) == 8 and ratnear.radon_hurwitz(9) == 1
    x = np.ones(4) / 2
    fields = ratnear.tangent_fields(3, x)
    assert len(fields) == 2
    assert all(abs(v @ x) < 1e-12 for v in fields)
    assert ratnear.chart_from_suslin(3).n == 4


def test_harness(tmp_path, monkeypatch):
    monkeypatch.setenv("RATNEAR_RESULTS_DIR", str(tmp_path))
    config = {
        "manifold": json_chart(),
        "Q": [20, 40, 80, 160],
        "delta": "Q^-1/4",
        "weight": {"center": [0, 0], "radius": 0.2},
        "output": {"record": "run.json", "csv": "rows.csv"},
    }
    rec = ratnear.run_experiment(config)
    assert [row["Q"] for row in rec["rows"]] == [20, 40, 80, 160]
    assert all(math.isfinite(row["ratio"]) for row in rec["rows"])
    assert (tmp_path / "rows.csv").read_text().startswith("Q,delta,count,N0,main_term,ratio\n")
    fit = ratnear.fit_error_envelope(rec)
    assert fit["bounded"]
    synth = ratnear.fit_synthetic_envelope(2, 2, 3.0, 0.5, [100, 200, 400, 800], 0.25)
    assert synth["A"] == pytest.approx(3.0, rel=0.05)
    assert ratnear.dimension_growth_bound(4, 3) == 3.5
    with pytest.raises(ratnear.CurvatureRefusal):
        ratnear.run_experiment({**config, "manifold": {**json_chart(), "maps": ["(x1^2 + x2^2)/2", "x1*x2"]}})


def json_chart():
    import json

    return json.loads(suslin().to_json())
