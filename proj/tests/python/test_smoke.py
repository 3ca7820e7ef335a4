import json
import math

import pytest

import _merglift as ml


def test_parse_print_round_trip():
    printed = ml.parse_print("exp(z1*z2) + 1/(1 - z3)")
    assert ml.parse_print(printed) == printed


def test_evaluate():
    assert ml.evaluate("1/(1-z1)", {1: 0.5}) == pytest.approx(2.0)
    assert ml.evaluate("z1*z2", {1: 2j, 2: 3.0}) == pytest.approx(6j)


def test_differentiate_matches_cauchy_oracle():
    sym = ml.evaluate(ml.differentiate("exp(2*z1)", {1: 1}), {1: 0.1})
    num = ml.numeric_derivative("exp(2*z1)", {1: 1}, {1: 0.1}, 0.25)
    assert sym == pytest.approx(num, abs=1e-8)


def test_chi():
    assert ml.chi(0.0, 1.0) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-10)
    assert ml.chi(0.0, None) == 1.0
    assert ml.chi(None, None) == 0.0


def test_counterexample_growth():
    assert ml.counterexample_directional(1) == pytest.approx(1.0)
    assert ml.counterexample_directional(10) == pytest.approx(2.354, abs=1e-3)
    assert ml.counterexample_directional(10000) > 8.0


def test_estimate_path_bound():
    (m,) = ml.estimate_path_bound("domain 1 disc 0 0 1", resolution=0.02)
    assert m == pytest.approx(2.0, abs=0.1)


def test_lift_polynomial_exact():
    out = ml.lift("z1^2 - 0.5", "domain 1 disc 0 0 1", n=1, eps=1e-6)
    assert out["converged"]
    assert out["max_alpha_error"] <= 1e-10
    poly = json.loads(out["polynomial"])
    coeffs = {tuple(map(tuple, t["vars"])): complex(t["re"], t["im"]) for t in poly}
    assert coeffs[((1, 2),)] == pytest.approx(1.0)
    assert coeffs[()] == pytest.approx(-0.5)
