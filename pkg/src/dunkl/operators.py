"""Dunkl operators and the intertwining operator on polynomials.

For a reflection group G with positive roots R+ and a G-invariant weight k,
the Dunkl operator in direction xi is

    T_xi p = d_xi p + sum_{a in R+} k(a) <a, xi> (p - p o s_a) / <a, x>,

where the difference quotient divides exactly because p - p o s_a vanishes
on the hyperplane <a, x> = 0.  The weighted reflection sum

    A p = sum_{a in R+} k(a) p o s_a

preserves each homogeneous space P_n, and W_n = (n + gamma) - A (with gamma
the sum of the weights over R+) coincides with sum_j x_j T_j on P_n.  When
every W_n is invertible the intertwining operator V is computed degree by
degree from V(1) = 1 and

    V p = H_n( sum_j x_j V(d_j p) ),     H_n = W_n^{-1},  p in P_n,

which makes T_xi V = V d_xi an exact identity of rational polynomials.  H_n
is realized in the group algebra (an |G| x |G| linear solve for coefficients
lam_n(g) with H_n = sum_g lam_n(g) L_g) whenever that system is nonsingular,
with a dense inverse on the monomial basis of P_n as fallback; either way
the composition W_n H_n is verified to be the identity on a basis.

The homogeneous kernel pieces

    E_n(x, y) = (1/n!) V(<., y>^n)(x) = sum_{|nu|=n} V(x^nu)(x) y^nu / nu!

sum to the generalized exponential E(x, y) = V(e^{<., y>})(x); truncation is
controlled by the growth envelope delta_hat >= n * max_g |lam_n(g)|.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import SingularMatrixError, invert_matrix, solve_columns
from .poly import Polynomial, _multi_factorial, directional_derivative
from .reflection_groups import (
    MultiplicityFunction,
    PositiveSystem,
    ReflectionGroup,
    act_on_polynomial,
    dot,
    reflection_matrix,
)


class NotInMStarError(ValueError):
    """The weight makes W_n singular on P_n at some degree."""

    def __init__(self, degree):
        self.degree = degree
        super().__init__(f"weight is not admissible: W_n is singular at degree {degree}")


class ExactDivisionError(ArithmeticError):
    """Division by a root pairing left a remainder; signals an internal bug."""


class TruncationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GroupAlgebraElement:
    """A finite combination sum_g coefficients[g] L_g acting on polynomials."""

    coefficients: tuple  # scalar per group element index

    def apply(self, group: ReflectionGroup, p: Polynomial) -> Polynomial:
        out = Polynomial.zero(p.dim)
        for idx, c in enumerate(self.coefficients):
            if not c:
                continue
            out = out + act_on_polynomial(group.elements[idx], p) * c
        return out


@dataclass(frozen=True)
class DegreeInverse:
    """Fallback realization of H_n: the inverse of W_n on the monomial basis."""

    degree: int
    basis: tuple  # exponent multi-indices spanning P_n
    inverse_rows: tuple  # rows of W_n^{-1} in that basis

    def apply(self, group, p: Polynomial) -> Polynomial:
        coeffs = [p.terms.get(nu, 0) for nu in self.basis]
        terms = {}
        for i, nu in enumerate(self.basis):
            val = 0
            row = self.inverse_rows[i]
            for j, c in enumerate(coeffs):
                if c:
                    val = val + row[j] * c
            if val:
                terms[nu] = val
        return Polynomial(len(self.basis[0]), terms)


@dataclass(eq=False)
class DunklContext:
    group: ReflectionGroup
    positives: PositiveSystem
    k: MultiplicityFunction
    reflections: tuple = field(default=())  # (alpha, k(alpha), matrix, group index)
    h_cache: dict = field(default_factory=dict)
    vk_cache: dict = field(default_factory=dict)
    inverse_cache: dict = field(default_factory=dict)
    delta_hat: float | None = None
    delta_table: list = field(default_factory=list)
    fallback_degrees: list = field(default_factory=list)
    prepared_to: int = 0

    @property
    def dimension(self):
        return self.group.dimension

    @property
    def gamma(self):
        return self.k.gamma

    @property
    def is_exact(self):
        return self.group.arithmetic_mode == "exact"

    def prepare(self, n_max):
        """Fill the degree caches and the growth table up to n_max."""
        if self.prepared_to >= n_max:
            return self
        for n in range(1, n_max + 1):
            solve_H(self, n)
        estimate_delta(self, n_max)
        self.prepared_to = n_max
        return self


def make_context(group, positives, k) -> DunklContext:
    refl = []
    for alpha in positives.positives:
        mat = reflection_matrix(alpha)
        idx = group.element_index(mat)
        refl.append((alpha, k.value(alpha), mat, idx))
    return DunklContext(group=group, positives=positives, k=k, reflections=tuple(refl))


# -- the operators -------------------------------------------------------------

def divide_by_root_pairing(p: Polynomial, alpha, float_tol=None):
    """Exact division of p by the linear form <alpha, x>.

    Terms are eliminated level by level in the exponent of a pivot variable;
    whatever survives at level zero is the remainder, which must vanish (up
    to float_tol in the floating layer).
    """
    d = p.dim
    pivot = next(i for i, a in enumerate(alpha) if a != 0)
    apiv = alpha[pivot]
    levels = {}
    for nu, c in p.terms.items():
        levels.setdefault(nu[pivot], {})[nu] = c
    if not levels:
        return Polynomial.zero(d)
    quotient = {}
    for m in range(max(levels), 0, -1):
        for nu, c in list(levels.get(m, {}).items()):
            if not c:
                continue
            qc = c / apiv
            qnu = nu[:pivot] + (m - 1,) + nu[pivot + 1 :]
            quotient[qnu] = quotient.get(qnu, 0) + qc
            lower = levels.setdefault(m - 1, {})
            for j, aj in enumerate(alpha):
                if j == pivot or aj == 0:
                    continue
                key = qnu[:j] + (qnu[j] + 1,) + qnu[j + 1 :]
                lower[key] = lower.get(key, 0) - qc * aj
    residue = levels.get(0, {})
    scale = max((abs(complex(c)) for c in p.terms.values()), default=0.0)
    tol = 0.0 if float_tol is None else float_tol * max(scale, 1.0)
    for nu, c in residue.items():
        if c and abs(complex(c)) > tol:
            raise ExactDivisionError(
                "difference term not divisible by the root pairing (internal bug)"
            )
    return Polynomial(d, quotient)


def dunkl_apply(ctx: DunklContext, xi, p: Polynomial) -> Polynomial:
    """T_xi p."""
    out = directional_derivative(xi, p)
    float_tol = None if ctx.is_exact else 1e-10
    for alpha, ka, mat, _ in ctx.reflections:
        if ka == 0:
            continue
        pairing = dot(alpha, xi)
        if pairing == 0:
            continue
        diff = p - act_on_polynomial(mat, p)
        if not diff:
            continue
        out = out + divide_by_root_pairing(diff, alpha, float_tol) * (ka * pairing)
    return out


def operator_A(ctx: DunklContext, p: Polynomial) -> Polynomial:
    """A p = sum over positive roots of k(a) * (p o s_a); degree preserving."""
    out = Polynomial.zero(p.dim)
    for _, ka, mat, _ in ctx.reflections:
        if ka == 0:
            continue
        out = out + act_on_polynomial(mat, p) * ka
    return out


def euler_W(ctx: DunklContext, n, p: Polynomial) -> Polynomial:
    """W_n p = (n + gamma) p - A p for homogeneous p, cross-checked against
    the Euler form sum_j x_j T_j p."""
    if p and (not p.is_homogeneous() or p.degree != n):
        raise ValueError(f"expected a homogeneous polynomial of degree {n}")
    direct = p * (n + ctx.gamma) - operator_A(ctx, p)
    euler = Polynomial.zero(p.dim)
    for j in range(ctx.dimension):
        xj = Polynomial.variable(p.dim, j)
        ej = tuple(1 if i == j else 0 for i in range(ctx.dimension))
        euler = euler + xj * dunkl_apply(ctx, ej, p)
    if ctx.is_exact:
        if direct != euler:
            raise AssertionError("the two Euler-operator forms disagree (internal bug)")
    else:
        gap = max(
            (abs(complex(c)) for c in (direct - euler).terms.values()), default=0.0
        )
        if gap > 1e-8 * max(1.0, _coeff_scale(direct)):
            raise AssertionError("the two Euler-operator forms disagree (internal bug)")
    return direct


def _coeff_scale(p):
    return max((abs(complex(c)) for c in p.terms.values()), default=0.0)


def _apply_W(ctx, n, p):
    return p * (n + ctx.gamma) - operator_A(ctx, p)


def monomial_basis(d, n):
    """Exponent multi-indices of total degree n, lexicographic."""
    if d == 1:
        return [(n,)]
    out = []
    for first in range(n, -1, -1):
        for rest in monomial_basis(d - 1, n - first):
            out.append((first,) + rest)
    return out


def solve_H(ctx: DunklContext, n):
    """Realize H_n = ((n + gamma) - A)^{-1} on P_n.

    Primary path: solve ((n+gamma) e - a) h = e in the group algebra, where
    a = sum k(a) s_a; the |G| x |G| system is degree-independent.  If that
    system is singular, invert W_n on the monomial basis instead.  If W_n
    itself is singular the weight is inadmissible at this degree.  The
    result is always verified to invert W_n on a monomial basis.
    """
    if n < 1:
        raise ValueError("H_n is defined for degrees n >= 1")
    cached = ctx.h_cache.get(n)
    if cached is not None:
        return cached
    group = ctx.group
    size = group.order
    shift = n + ctx.gamma
    zero = Fraction(0) if ctx.is_exact else 0.0
    matrix = [[zero] * size for _ in range(size)]
    for h in range(size):
        matrix[h][h] = matrix[h][h] + shift
        for _, ka, _, sidx in ctx.reflections:
            g = group.multiply(h, sidx)
            matrix[h][g] = matrix[h][g] - ka
    rhs = [zero] * size
    rhs[group.identity_index] = rhs[group.identity_index] + 1
    try:
        sol = solve_columns(matrix, [rhs])[0]
        result = GroupAlgebraElement(tuple(sol))
    except SingularMatrixError:
        result = _solve_H_on_basis(ctx, n)
        ctx.fallback_degrees.append(n)
    _verify_H(ctx, n, result)
    ctx.h_cache[n] = result
    return result


def _solve_H_on_basis(ctx, n):
    d = ctx.dimension
    basis = monomial_basis(d, n)
    cols = []
    for nu in basis:
        w = _apply_W(ctx, n, Polynomial.monomial(d, nu))
        cols.append([w.terms.get(mu, 0) for mu in basis])
    # cols[j][i] = coefficient of basis[i] in W(basis[j]); rows index mu
    w_matrix = [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]
    try:
        inv = invert_matrix(w_matrix)
    except SingularMatrixError:
        raise NotInMStarError(n) from None
    return DegreeInverse(n, tuple(basis), tuple(tuple(r) for r in inv))


def _verify_H(ctx, n, h):
    d = ctx.dimension
    for nu in monomial_basis(d, n):
        mono = Polynomial.monomial(d, nu)
        back = _apply_W(ctx, n, h.apply(ctx.group, mono))
        if ctx.is_exact:
            if back != mono:
                raise NotInMStarError(n)
        else:
            gap = _coeff_scale(back - mono)
            if gap > 1e-8:
                raise NotInMStarError(n)


def apply_H(ctx: DunklContext, n, p: Polynomial) -> Polynomial:
    return solve_H(ctx, n).apply(ctx.group, p)


# -- the intertwining operator -----------------------------------------------------

def _vk_monomial(ctx: DunklContext, nu):
    cached = ctx.vk_cache.get(nu)
    if cached is not None:
        return cached
    d = ctx.dimension
    n = sum(nu)
    if n == 0:
        result = Polynomial.constant(d, Fraction(1) if ctx.is_exact else 1.0)
    else:
        acc = Polynomial.zero(d)
        for j in range(d):
            if nu[j] == 0:
                continue
            lower = nu[:j] + (nu[j] - 1,) + nu[j + 1 :]
            acc = acc + Polynomial.variable(d, j) * _vk_monomial(ctx, lower) * nu[j]
        result = apply_H(ctx, n, acc)
    ctx.vk_cache[nu] = result
    return result


def intertwine(ctx: DunklContext, p: Polynomial) -> Polynomial:
    """V p, computed degree by degree; exact and degree preserving."""
    out = Polynomial.zero(p.dim)
    for nu, c in p.terms.items():
        out = out + _vk_monomial(ctx, nu) * c
    return out


def intertwine_inverse(ctx: DunklContext, q: Polynomial) -> Polynomial:
    """Invert the degree-graded action of V; intertwine o intertwine_inverse = id."""
    out = Polynomial.zero(q.dim)
    for n, comp in q.homogeneous_components().items():
        if n == 0:
            out = out + comp
            continue
        basis, inv = _vk_degree_inverse(ctx, n)
        coeffs = [comp.terms.get(nu, 0) for nu in basis]
        terms = {}
        for i, nu in enumerate(basis):
            val = 0
            for j, c in enumerate(coeffs):
                if c:
                    val = val + inv[i][j] * c
            if val:
                terms[nu] = val
        out = out + Polynomial(q.dim, terms)
    return out


def _vk_degree_inverse(ctx, n):
    cached = ctx.inverse_cache.get(n)
    if cached is not None:
        return cached
    basis = monomial_basis(ctx.dimension, n)
    matrix = [
        [_vk_monomial(ctx, nu).terms.get(mu, 0) for nu in basis] for mu in basis
    ]
    inv = invert_matrix(matrix)
    ctx.inverse_cache[n] = (tuple(basis), tuple(tuple(r) for r in inv))
    return ctx.inverse_cache[n]


# -- growth estimate -----------------------------------------------------------------

@dataclass(frozen=True)
class DeltaEstimate:
    value: float
    n_max: int
    table: tuple  # (n, n * max_g |lam_n(g)|)
    excluded_degrees: tuple  # degrees realized by the fallback path


def estimate_delta(ctx: DunklContext, n_max) -> DeltaEstimate:
    """delta_hat = max over computed degrees of n * max_g |lam_n(g)|.

    An empirical lower envelope for the growth constant in |lam_n(g)| <=
    delta/n; by construction |lam_n(g)| <= delta_hat/n holds for every
    computed degree, so truncation bounds built from delta_hat are valid on
    the computed range.  Fallback degrees carry no lam table and are
    excluded (and reported).
    """
    table = []
    excluded = []
    for n in range(1, n_max + 1):
        h = solve_H(ctx, n)
        if isinstance(h, GroupAlgebraElement):
            row = n * max(abs(complex(c)) for c in h.coefficients)
            table.append((n, row))
        else:
            excluded.append(n)
    value = max((row for _, row in table), default=1.0)
    ctx.delta_hat = value
    ctx.delta_table = table
    est = DeltaEstimate(value, n_max, tuple(table), tuple(excluded))
    return est


# -- homogeneous kernel pieces and the generalized exponential -------------------------

@dataclass(frozen=True)
class HomogeneousKernel:
    degree: int
    x: tuple
    poly_in_y: Polynomial


def homogeneous_kernel(ctx: DunklContext, n, x) -> HomogeneousKernel:
    """E_n(x, .) as a polynomial in y for fixed numeric x."""
    d = ctx.dimension
    terms = {}
    for nu in monomial_basis(d, n):
        val = _vk_monomial(ctx, nu).evaluate(x)
        if val:
            terms[nu] = val * Fraction(1, _multi_factorial(nu))
    return HomogeneousKernel(n, tuple(x), Polynomial(d, terms))


def homogeneous_kernel_bivariate(ctx: DunklContext, n) -> Polynomial:
    """E_n as an exact polynomial in the 2d variables (x_1..x_d, y_1..y_d)."""
    d = ctx.dimension
    out = Polynomial.zero(2 * d)
    for nu in monomial_basis(d, n):
        vk = _vk_monomial(ctx, nu)
        lifted = {}
        for mu, c in vk.terms.items():
            lifted[mu + nu] = c * Fraction(1, _multi_factorial(nu))
        out = out + Polynomial(2 * d, lifted)
    return out


def en_expansion_oracle(ctx: DunklContext, n, x) -> Polynomial:
    """Brute-force E_n(x, .) from the |G|^n product expansion.

    Unrolling the degree recursion gives

        E_n(x, y) = sum over (g_1..g_n) of
                    prod_i lam_i(g_i) * prod_i <g_i g_{i+1} ... g_n x, y>,

    where the factor at position i carries the degree-i coefficient table
    (the innermost inverse applied is H_n, whose element right-multiplies
    onto x and so appears in every pairing).  The coefficient product obeys
    |prod lam_i(g_i)| <= delta^n / n!.  Exponential in n; intended as a
    cross-check for n <= 3 on small groups.
    """
    d = ctx.dimension
    group = ctx.group
    if n == 0:
        return Polynomial.constant(d, Fraction(1))
    tables = []
    for i in range(1, n + 1):
        h = solve_H(ctx, i)
        if not isinstance(h, GroupAlgebraElement):
            raise ValueError("expansion oracle needs the group-algebra realization")
        tables.append(h.coefficients)
    out = Polynomial.zero(d)
    from .reflection_groups import mat_vec

    for combo in itertools.product(range(group.order), repeat=n):
        coeff = 1
        for i, gi in enumerate(combo):
            coeff = coeff * tables[i][gi]
        if not coeff:
            continue
        prod = Polynomial.constant(d, 1)
        vec = tuple(x)
        # suffix products g_i ... g_n applied to x, built right to left
        for gi in reversed(combo):
            vec = mat_vec(group.elements[gi], vec)
            linear = Polynomial(
                d,
                {
                    tuple(1 if l == j else 0 for l in range(d)): vec[j]
                    for j in range(d)
                    if vec[j]
                },
            )
            prod = prod * linear
        out = out + prod * coeff
    return out


@dataclass(frozen=True)
class KernelValue:
    value: complex
    tail_bound: float
    degree_used: int
    last_term: float


def ek_tail_bound(ctx: DunklContext, x_norm, y_norm, n_trunc) -> float:
    """Bound sum_{n > N} (delta_hat |G| |x|)^n |y|^n / n! by forward summation."""
    if ctx.delta_hat is None:
        raise ValueError("estimate_delta must run before truncation bounds")
    t = ctx.delta_hat * ctx.group.order * x_norm * y_norm
    if t == 0:
        return 0.0
    total = 0.0
    term = t ** (n_trunc + 1) / math.factorial(n_trunc + 1) if n_trunc < 170 else math.exp(
        (n_trunc + 1) * math.log(t) - math.lgamma(n_trunc + 2)
    )
    n = n_trunc + 1
    while term > 0 and n < n_trunc + 2000:
        total += term
        n += 1
        term *= t / n
        if term < total * 1e-18:
            total += term * 2
            break
    return total


def dunkl_kernel(ctx: DunklContext, x, y, tol, degree_cap=160) -> KernelValue:
    """Truncated generalized exponential sum_{n<=N} E_n(x, y) with a certified
    tail bound below tol; N is the smallest degree achieving the bound."""
    xf = [complex(t) for t in x]
    yf = [complex(t) for t in y]
    x_norm = math.sqrt(sum(abs(t) ** 2 for t in xf))
    y_norm = math.sqrt(sum(abs(t) ** 2 for t in yf))
    n_trunc = None
    for n in range(0, degree_cap + 1):
        if ek_tail_bound(ctx, x_norm, y_norm, n) < tol:
            n_trunc = n
            break
    if n_trunc is None:
        raise TruncationError(
            f"tail bound does not reach {tol} within the degree cap {degree_cap}"
        )
    total = 0
    last = 0.0
    for n in range(n_trunc + 1):
        term = evaluate_en(ctx, n, x, y)
        total = total + term
        last = abs(complex(term))
    return KernelValue(total, ek_tail_bound(ctx, x_norm, y_norm, n_trunc), n_trunc, last)


def evaluate_en(ctx: DunklContext, n, x, y):
    """E_n(x, y) for numeric (exact or floating) points."""
    d = ctx.dimension
    total = 0
    for nu in monomial_basis(d, n):
        c = _vk_monomial(ctx, nu).evaluate(x)
        if not c:
            continue
        mono = 1
        for i, e in enumerate(nu):
            if e:
                mono = mono * y[i] ** e
        total = total + c * mono * Fraction(1, _multi_factorial(nu))
    return total
