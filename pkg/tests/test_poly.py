import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dunkl.poly import (
    NonHomogeneousError,
    Polynomial,
    directional_derivative,
    fischer,
    fischer_via_gaussian,
    heat_half,
    hermite,
    inverse_heat_half,
    laplacian,
    sphere_sup_norm,
)
from dunkl.quad import QuadratureDegreeError, gauss_rule

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def poly_strategy(dim, max_degree):
    exponents = st.tuples(*([st.integers(0, max_degree)] * dim)).filter(
        lambda nu: sum(nu) <= max_degree
    )
    return st.dictionaries(exponents, rationals, max_size=5).map(
        lambda terms: Polynomial(dim, terms)
    )


def var(d, j):
    return Polynomial.variable(d, j)


def test_basic_arithmetic():
    x, y = var(2, 0), var(2, 1)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert (p - p) == Polynomial.zero(2)
    assert p.degree == 2
    assert (x * y + 1).degree == 2
    assert Polynomial.zero(2).degree == -1


@settings(max_examples=40)
@given(poly_strategy(2, 4), poly_strategy(2, 4))
def test_ring_commutes(p, q):
    assert p * q == q * p
    assert p + q == q + p


def test_directional_derivative_examples():
    x1, x2 = var(2, 0), var(2, 1)
    p = x1 * x1 * x2
    assert directional_derivative((1, 0), p) == 2 * x1 * x2
    assert directional_derivative((Fraction(2), Fraction(-1)), Polynomial.constant(2, 5)) == Polynomial.zero(2)
    assert directional_derivative((1, 1), x1 * x2) == x1 + x2


def test_laplacian_examples():
    x1, x2 = var(2, 0), var(2, 1)
    assert laplacian(x1 * x1 + x2 * x2) == Polynomial.constant(2, 4)
    assert laplacian(x1 + 3 * x2) == Polynomial.zero(2)
    # <xi, x>^2 has Laplacian 2 |xi|^2
    xi = (Fraction(2), Fraction(-3))
    form = xi[0] * x1 + xi[1] * x2
    assert laplacian(form * form) == Polynomial.constant(2, 2 * (4 + 9))


def test_heat_examples():
    x = var(1, 0)
    assert heat_half(x * x) == x * x - 1
    assert heat_half(x) == x
    assert inverse_heat_half(x * x) == x * x + 1


@settings(max_examples=30)
@given(poly_strategy(2, 8))
def test_heat_roundtrip(p):
    assert inverse_heat_half(heat_half(p)) == p


def test_heat_roundtrip_degree_ten():
    p = Polynomial(
        2, {(10, 0): Fraction(1, 3), (4, 6): Fraction(-2, 7), (1, 1): Fraction(5)}
    )
    assert heat_half(inverse_heat_half(p)) == p


def test_fischer_examples():
    d = 2
    x1, x2 = var(d, 0), var(d, 1)
    p = 3 * x1 * x1 + x2 + Fraction(7)
    one = Polynomial.constant(d, 1)
    assert fischer(one, p) == p.evaluate((0, 0))
    assert fischer(x1 * x2, x1 * x2) == 1
    assert fischer(Polynomial.monomial(d, (3, 1)), Polynomial.monomial(d, (3, 1))) == 6
    assert fischer(x1, x2) == 0


def test_fischer_pairing_with_power_of_linear_form():
    # [<x0, .>^n, y^nu] = n! x0^nu for |nu| = n
    d = 2
    x0 = (Fraction(2), Fraction(-1, 2))
    n = 3
    form = x0[0] * var(d, 0) + x0[1] * var(d, 1)
    power = form**n
    for nu in [(3, 0), (2, 1), (1, 2), (0, 3)]:
        lhs = fischer(power, Polynomial.monomial(d, nu))
        want = math.factorial(n) * x0[0] ** nu[0] * x0[1] ** nu[1]
        assert lhs == want


@settings(max_examples=30)
@given(poly_strategy(2, 5), poly_strategy(2, 5))
def test_fischer_symmetric_and_adjoint(p, q):
    assert fischer(p, q) == fischer(q, p)
    for i in range(2):
        assert fischer(var(2, i) * p, q) == fischer(p, q.partial(i))


@settings(max_examples=20)
@given(poly_strategy(2, 4), poly_strategy(2, 4))
def test_fischer_graded_orthogonality(p, q):
    comps_p = p.homogeneous_components()
    comps_q = q.homogeneous_components()
    for n, pn in comps_p.items():
        for m, qm in comps_q.items():
            if n != m:
                assert fischer(pn, qm) == 0


def test_fischer_via_gaussian_examples():
    rule = gauss_rule(2, 12)
    one = Polynomial.constant(2, 1)
    assert abs(fischer_via_gaussian(one, one, rule) - 1) < 1e-14
    x1 = var(2, 0)
    assert abs(fischer_via_gaussian(x1, x1, rule) - 1) < 1e-13
    p = Polynomial.monomial(2, (2, 0))
    q = Polynomial.monomial(2, (0, 2))
    assert abs(fischer_via_gaussian(p, q, rule) - 0) < 1e-12


def test_fischer_via_gaussian_degree_guard():
    rule = gauss_rule(1, 2)  # exact to degree 3
    p = Polynomial.monomial(1, (4,))
    with pytest.raises(QuadratureDegreeError):
        fischer_via_gaussian(p, p, rule)


def test_hermite_examples():
    h0 = hermite((0,))
    assert h0.unscaled == Polynomial.constant(1, 1)
    assert h0.scale_sq == 1
    h1 = hermite((1,))
    assert h1.unscaled == var(1, 0)
    h2 = hermite((2,))
    assert h2.unscaled == var(1, 0) * var(1, 0) - 1
    assert h2.scale_sq == Fraction(1, 2)
    # H_2(z) = (z^2 - 1)/sqrt(2)
    assert abs(h2.evaluate((2.0,)) - 3 / math.sqrt(2)) < 1e-14
    want = math.exp(-2.0) * 3 / math.sqrt(2)
    assert abs(h2.evaluate_windowed((2.0,)) - want) < 1e-14


def test_hermite_gram_identity_to_degree_five():
    import numpy as np

    rule = gauss_rule(2, 12)
    hs = []
    for n in range(6):
        for a in range(n + 1):
            hs.append(hermite((a, n - a)))
    vals = np.stack([h.polynomial().evaluate_many(rule.nodes) for h in hs])
    gram = (vals * rule.weights[None, :]) @ vals.T
    assert float(np.max(np.abs(gram - np.eye(len(hs))))) < 1e-10


def test_evaluate_examples():
    x1, x2 = var(2, 0), var(2, 1)
    assert (x1 * x2).evaluate((2, 3)) == 6
    p = x1 * x1 + 5
    assert p.evaluate((0, 0)) == 5
    assert var(1, 0).__pow__(2).evaluate((1j,)) == -1  # bilinear, no conjugation


def test_substitute_linear():
    x1, x2 = var(2, 0), var(2, 1)
    rot = ((Fraction(0), Fraction(-1)), (Fraction(1), Fraction(0)))
    assert (x1 * x1).substitute_linear(rot) == x2 * x2
    assert (x1 * x2).substitute_linear(rot) == -(x1 * x2)


def test_sphere_sup_norm_examples():
    p = Polynomial.monomial(2, (5, 0))
    est = sphere_sup_norm(p)
    assert abs(est.value - 1.0) < 1e-9
    assert est.samples > 4000
    xi = (3.0, 4.0)
    form = xi[0] * var(2, 0) + xi[1] * var(2, 1)
    est = sphere_sup_norm(form)
    assert est.value <= 5.0 + 1e-12
    assert est.value > 5.0 - 1e-6
    est = sphere_sup_norm(var(2, 0) * var(2, 1))
    assert est.value <= 0.5 + 1e-12
    assert est.value > 0.5 - 1e-6


def test_sphere_sup_norm_rejects_inhomogeneous():
    with pytest.raises(NonHomogeneousError):
        sphere_sup_norm(var(1, 0) + 1)


def test_normalized_monomial_orthonormal():
    from dunkl.poly import NormalizedMonomial

    phi = NormalizedMonomial.from_index((2, 1))
    psi = NormalizedMonomial.from_index((1, 2))
    # [phi_nu, phi_mu] = delta via the exact squared scales
    self_pair = fischer(phi.unscaled, phi.unscaled) * phi.scale_sq
    cross_pair = fischer(phi.unscaled, psi.unscaled)
    assert self_pair == 1
    assert cross_pair == 0
