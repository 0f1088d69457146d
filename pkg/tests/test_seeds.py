import math

import numpy as np
import pytest

from spps.seeds import available_seeds, get_seed


def test_registry_contents():
    names = available_seeds()
    assert set(names) >= {"constant", "exp", "x_exp_a_over_x"}


def test_unknown_seed_rejected():
    with pytest.raises(ValueError):
        get_seed("nope")


def test_bad_parameters_rejected():
    with pytest.raises(ValueError):
        get_seed("constant", value=0.0)
    with pytest.raises(ValueError):
        get_seed("x_exp_a_over_x", a=0.0)
    with pytest.raises(ValueError):
        get_seed("exp", rate=1.0)


@pytest.mark.parametrize("name,params,points", [
    ("constant", {"value": 2.5}, [0.0, 0.7]),
    ("exp", {"c": 1.5}, [0.0, 0.3, 1.0]),
    ("x_exp_a_over_x", {"a": 1.0}, [0.5, 1.0, 2.0]),
])
def test_dfunc_matches_central_difference(name, params, points):
    seed = get_seed(name, **params)
    h = 1e-6
    for x in points:
        fd = (seed.func(x + h) - seed.func(x - h)) / (2 * h)
        assert abs(seed.dfunc(x) - fd) <= 1e-6 * (1 + abs(fd))


def test_exp_jet_coefficients():
    seed = get_seed("exp", c=2.0)
    j = seed.jet(0.5, 5)
    expect = [math.exp(1.0) * 2.0**k / math.factorial(k) for k in range(6)]
    assert np.max(np.abs(j.coeffs - expect)) < 1e-12


def test_jet_leading_coefficients_match_func():
    for name, params, x0 in [
        ("constant", {"value": 3.0}, 0.2),
        ("exp", {"c": -1.0}, 0.4),
        ("x_exp_a_over_x", {"a": 2.0}, 1.5),
    ]:
        seed = get_seed(name, **params)
        j = seed.jet(x0, 4)
        assert abs(j.coeffs[0] - seed.func(x0)) < 1e-12
        assert abs(j.coeffs[1] - seed.dfunc(x0)) < 1e-12


def test_product_seed_phi_jet():
    # f = a*x*e^{a/x} at a = 1, x0 = 1: phi(1) = e^2 and phi'(1) = 0
    seed = get_seed("x_exp_a_over_x", a=1.0)
    pj = seed.phi_jet(1.0, 4)
    assert abs(pj.coeffs[0] - math.exp(2.0)) < 1e-12
    assert abs(pj.coeffs[1]) < 1e-12


def test_product_seed_rejects_zero_anchor():
    seed = get_seed("x_exp_a_over_x", a=1.0)
    with pytest.raises(ValueError):
        seed.jet(0.0, 3)


def test_jet_taylor_evaluates_near_anchor():
    for name, params, x0 in [
        ("exp", {"c": 0.8}, 0.1),
        ("x_exp_a_over_x", {"a": 1.5}, 1.2),
    ]:
        seed = get_seed(name, **params)
        j = seed.jet(x0, 10)
        x = x0 + 0.05
        assert abs(j.eval(x) - seed.func(x)) < 1e-10
