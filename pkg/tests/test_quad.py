import math

import numpy as np
import pytest

from dunkl.poly import Polynomial, hermite
from dunkl.quad import (
    BoxGrid,
    GaussianWeighted,
    QuadratureRule,
    UncertifiedDecayError,
    fourier_quadrature,
    gauss_rule,
    gaussian_moment,
    integrate,
    monte_carlo,
)


def test_single_point_rule():
    rule = gauss_rule(1, 1)
    assert rule.nodes.shape == (1, 1)
    assert abs(rule.nodes[0, 0]) < 1e-15
    assert abs(rule.weights[0] - 1.0) < 1e-15


def test_two_point_rule_matches_moments():
    rule = gauss_rule(1, 2)
    assert sorted(round(z, 12) for z in rule.nodes[:, 0]) == [-1.0, 1.0]
    assert np.allclose(rule.weights, [0.5, 0.5])


def test_tensor_rule_2d():
    rule = gauss_rule(2, 3)
    assert len(rule.nodes) == 9
    p = Polynomial.monomial(2, (2, 2), 1.0)
    assert abs(integrate(p, rule) - 1.0) < 1e-13


def test_integrate_examples():
    rule = gauss_rule(1, 6)
    assert abs(integrate(Polynomial.constant(1, 1.0), rule) - 1.0) < 1e-14
    assert abs(integrate(Polynomial.monomial(1, (4,), 1.0), rule) - 3.0) < 1e-12


def test_hermite_pairs_delta():
    rule = gauss_rule(1, 8)
    h2, h3 = hermite((2,)), hermite((3,))
    p22 = integrate(lambda z: h2.polynomial().evaluate_many(z) ** 2, rule)
    p23 = integrate(
        lambda z: h2.polynomial().evaluate_many(z) * h3.polynomial().evaluate_many(z),
        rule,
    )
    assert abs(p22 - 1.0) < 1e-12
    assert abs(p23) < 1e-12


def test_moment_sweep_and_symmetry():
    for d, q in ((1, 7), (2, 5)):
        rule = gauss_rule(d, q)
        assert abs(rule.weights.sum() - 1.0) < 1e-14
        # nodes closed under negation with equal weights
        key = {tuple(round(t, 10) for t in z): w for z, w in zip(rule.nodes, rule.weights)}
        for z, w in key.items():
            nz = tuple(round(-t, 10) for t in z)
            assert nz in key and abs(key[nz] - w) < 1e-15
        # all monomials within the exact degree match the closed-form moments
        for total in range(rule.exact_degree + 1):
            for first in range(total + 1):
                nu = (first, total - first)[:d] if d == 2 else (total,)
                if sum(nu) != total:
                    continue
                got = integrate(Polynomial.monomial(d, nu, 1.0), rule)
                want = gaussian_moment(nu)
                assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_monte_carlo_examples():
    res = monte_carlo(lambda z: np.ones(len(z)), 1, 100, seed=7)
    assert res.value == 1.0 and res.standard_error == 0.0
    res = monte_carlo(lambda z: z[:, 0] ** 2, 1, 1_000_000, seed=42)
    assert abs(res.value - 1.0) <= 4 * res.standard_error
    x = np.array([0.3, -0.7])
    res = monte_carlo(lambda z: np.exp(z @ x), 2, 400_000, seed=11)
    want = math.exp(float(x @ x) / 2)
    assert abs(res.value - want) <= 4 * res.standard_error


def test_monte_carlo_deterministic():
    a = monte_carlo(lambda z: z[:, 0] ** 4, 1, 5000, seed=3)
    b = monte_carlo(lambda z: z[:, 0] ** 4, 1, 5000, seed=3)
    assert a.value == b.value and a.standard_error == b.standard_error


def test_fourier_gaussian_self_transform():
    rule = gauss_rule(1, 40)
    one = Polynomial.constant(1, 1.0)
    for y in (0.0, 0.8, 2.5, 4.0):
        val, bound = fourier_quadrature(GaussianWeighted(one), (y,), rule)
        assert bound == 0.0
        assert abs(val - math.exp(-y * y / 2)) < 1e-10


def test_fourier_at_zero_is_plain_integral():
    rule = gauss_rule(1, 20)
    z1 = Polynomial.monomial(1, (2,), 1.0)
    val, _ = fourier_quadrature(GaussianWeighted(z1), (0.0,), rule)
    assert abs(val - 1.0) < 1e-12


def test_fourier_first_moment():
    rule = gauss_rule(1, 40)
    z1 = Polynomial.monomial(1, (1,), 1.0)
    for y in (0.5, 1.5):
        val, _ = fourier_quadrature(GaussianWeighted(z1), (y,), rule)
        want = -1j * y * math.exp(-y * y / 2)
        assert abs(val - want) < 1e-10


def test_fourier_box_grid_path():
    grid = BoxGrid((-8.0,), (8.0,), 400)
    val, bound = fourier_quadrature(
        lambda z: math.exp(-float(z[0]) ** 2 / 2), (1.0,), grid
    )
    assert abs(val - math.exp(-0.5)) < 1e-6
    assert bound < 1e-10


def test_fourier_uncertified_decay_rejected():
    rule = gauss_rule(1, 10)
    with pytest.raises(UncertifiedDecayError):
        fourier_quadrature(lambda z: 1.0, (0.0,), rule)


def test_rule_is_frozen_dataclass():
    rule = gauss_rule(1, 3)
    assert isinstance(rule, QuadratureRule)
    with pytest.raises(Exception):
        rule.exact_degree = 5
