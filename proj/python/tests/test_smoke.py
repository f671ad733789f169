import json
import math

import pytest

import bbnf


def test_classify_quarter_turn():
    r = bbnf.classify([-0.25])
    assert r["class"] == "elliptic"
    assert r["alpha"] == pytest.approx(math.pi / 2, abs=1e-12)


def test_forward_and_invert_round_trip():
    a = [-0.3, 0.01, -0.002]
    b = bbnf.forward_map(a, 2)
    back = bbnf.invert(b)
    assert back == pytest.approx(a, rel=1e-9)


def test_resonance_is_reported():
    with pytest.raises(bbnf.NumericalError):
        bbnf.forward_map([-0.25], 1)
    assert bbnf.forward_map([-0.25, 0.01], 1, resonance="keep")[1] == pytest.approx(-0.49, rel=1e-12)


def test_validation_errors_are_value_errors():
    with pytest.raises(ValueError):
        bbnf.classify([])
    with pytest.raises(bbnf.ValidationError):
        bbnf.run({"task": "nf", "unknown": 1})


def test_poincare_trace_matches_formula():
    a0 = -0.1
    r = bbnf.poincare_trace({"kind": "jet", "coeffs": [a0]})
    A = 2 * (2 * a0 + 1)
    assert r["trace"] == pytest.approx(2 * (A - 1), abs=1e-5)


def test_straightening_alpha():
    d = bbnf.straightening(5.0, 5.0, 2.0)
    assert d["alpha"] == pytest.approx(2 * math.atan(0.5), abs=1e-12)
    assert d["ode_residual"] < 1e-10


def test_disk_first_eigenvalue():
    lam = bbnf.dirichlet_eigenvalues({"kind": "ellipse", "semi_x": 1.0, "semi_y": 1.0}, "EE", 1)
    assert lam[0] == pytest.approx(5.783185962946784, rel=1e-9)


def test_square_trace_peaks():
    lam = sorted((m * m + n * n) * math.pi**2 for m in range(1, 80) for n in range(1, 80))[:4000]
    t = [0.004 * i for i in range(876)]
    peaks = bbnf.wave_trace_peaks(lam, 0.02, t, 0.05)
    found = [p["t"] for p in peaks]
    assert min(abs(x - 2.0) for x in found) < 0.01
    assert min(abs(x - 2 * math.sqrt(2)) for x in found) < 0.01


def test_run_is_deterministic():
    cfg = {"task": "nf", "order": 2, "domain": {"kind": "jet", "coeffs": [-0.3, 0.01]}}
    assert bbnf.run_json(json.dumps(cfg)) == bbnf.run_json(json.dumps(cfg))
    report = bbnf.run(cfg)
    assert report["result"]["b"][0] == pytest.approx(bbnf.forward_map([-0.3, 0.01], 2)[0])
