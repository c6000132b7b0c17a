"""Sparse multivariate polynomial algebra over exact scalars.

Polynomials are stored as a map from exponent multi-indices to coefficients
(Fraction / ComplexRational in the exact layer, float / complex in the
floating layer); zero coefficients are never stored.  On top of the ring
operations this module provides the half-heat operators

    e^{-L/2} p = sum_m (-1)^m L^m p / (2^m m!)        (L = Laplacian)

which terminate because L^m p = 0 once 2m exceeds deg p, the Fischer pairing

    [p, q] = p(d/dx) q |_{x=0},    [x^a, x^b] = delta_ab * a!,

its Gaussian-integral realization, and the associated Hermite polynomials.
Normalized monomials x^a / sqrt(a!) carry an irrational scale; quantities
built from them store the exact squared scale 1/a! and take a single square
root at the float boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .quad import QuadratureDegreeError


class NonHomogeneousError(ValueError):
    pass


def _multi_factorial(nu):
    out = 1
    for e in nu:
        out *= math.factorial(e)
    return out


class Polynomial:
    """Immutable sparse polynomial in ``dim`` variables."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim, terms=None):
        clean = {}
        if terms:
            for nu, c in terms.items():
                if len(nu) != dim:
                    raise ValueError(f"exponent {nu} has wrong length for dim {dim}")
                if _is_zero(c):
                    continue
                clean[tuple(nu)] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, dim):
        return cls(dim, {})

    @classmethod
    def constant(cls, dim, c):
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def monomial(cls, dim, nu, coeff=1):
        return cls(dim, {tuple(nu): coeff})

    @classmethod
    def variable(cls, dim, j):
        nu = [0] * dim
        nu[j] = 1
        return cls(dim, {tuple(nu): 1})

    # -- ring structure -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.dim, other)
        terms = dict(self.terms)
        for nu, c in other.terms.items():
            cur = terms.get(nu)
            if cur is None:
                terms[nu] = c
            else:
                s = cur + c
                if _is_zero(s):
                    del terms[nu]
                else:
                    terms[nu] = s
        out = Polynomial.__new__(Polynomial)
        object.__setattr__(out, "dim", self.dim)
        object.__setattr__(out, "terms", terms)
        return out

    __radd__ = __add__

    def __neg__(self):
        return self.map_coefficients(lambda c: -c)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.dim, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if _is_zero(other):
                return Polynomial.zero(self.dim)
            return self.map_coefficients(lambda c: c * other)
        terms = {}
        for nu, c in self.terms.items():
            for mu, d in other.terms.items():
                key = tuple(a + b for a, b in zip(nu, mu))
                prod = c * d
                cur = terms.get(key)
                if cur is None:
                    terms[key] = prod
                else:
                    terms[key] = cur + prod
        return Polynomial(self.dim, terms)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        out = Polynomial.constant(self.dim, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction, float, complex)) or other == 0:
                return self == Polynomial.constant(self.dim, other)
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        parts = []
        for nu in sorted(self.terms, key=lambda t: (sum(t), t), reverse=True):
            mono = " ".join(
                f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
                for i, e in enumerate(nu)
                if e
            )
            parts.append(f"{self.terms[nu]}*{mono}" if mono else f"{self.terms[nu]}")
        return "Polynomial(" + " + ".join(parts) + ")"

    # -- structure -------------------------------------------------------------
    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(nu) for nu in self.terms)

    def is_homogeneous(self):
        degs = {sum(nu) for nu in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, n):
        return Polynomial(
            self.dim, {nu: c for nu, c in self.terms.items() if sum(nu) == n}
        )

    def homogeneous_components(self):
        comps = {}
        for nu, c in self.terms.items():
            comps.setdefault(sum(nu), {})[nu] = c
        return {n: Polynomial(self.dim, t) for n, t in sorted(comps.items())}

    def map_coefficients(self, fn):
        return Polynomial(self.dim, {nu: fn(c) for nu, c in self.terms.items()})

    def to_float(self):
        """Coefficients coerced to float/complex (the floating layer)."""
        return self.map_coefficients(_to_float_scalar)

    # -- calculus ---------------------------------------------------------------
    def partial(self, j):
        terms = {}
        for nu, c in self.terms.items():
            e = nu[j]
            if e == 0:
                continue
            key = nu[:j] + (e - 1,) + nu[j + 1 :]
            add = c * e
            cur = terms.get(key)
            terms[key] = add if cur is None else cur + add
        return Polynomial(self.dim, terms)

    def laplacian(self):
        out = Polynomial.zero(self.dim)
        for j in range(self.dim):
            out = out + self.partial(j).partial(j)
        return out

    # -- substitution and evaluation ----------------------------------------------
    def substitute_linear(self, matrix):
        """p(M x): replace each variable x_i by the linear form sum_j M[i][j] x_j."""
        forms = [
            Polynomial(
                self.dim,
                {
                    tuple(1 if l == j else 0 for l in range(self.dim)): matrix[i][j]
                    for j in range(self.dim)
                    if not _is_zero(matrix[i][j])
                },
            )
            for i in range(self.dim)
        ]
        power_cache = [{} for _ in range(self.dim)]
        out = Polynomial.zero(self.dim)
        for nu, c in self.terms.items():
            piece = Polynomial.constant(self.dim, c)
            for i, e in enumerate(nu):
                if e == 0:
                    continue
                cached = power_cache[i].get(e)
                if cached is None:
                    cached = forms[i] ** e
                    power_cache[i][e] = cached
                piece = piece * cached
            out = out + piece
        return out

    def evaluate(self, point):
        """Plain substitution; bilinear in complex arguments (no conjugation)."""
        if len(point) != self.dim:
            raise ValueError("point has wrong dimension")
        max_exp = [0] * self.dim
        for nu in self.terms:
            for i, e in enumerate(nu):
                if e > max_exp[i]:
                    max_exp[i] = e
        powers = []
        for i in range(self.dim):
            ps = [1]
            for _ in range(max_exp[i]):
                ps.append(ps[-1] * point[i])
            powers.append(ps)
        total = 0
        for nu, c in self.terms.items():
            v = c
            for i, e in enumerate(nu):
                if e:
                    v = v * powers[i][e]
            total = total + v
        return total

    def evaluate_many(self, points):
        """Vectorized float evaluation on an (n, dim) array."""
        pts = np.asarray(points, dtype=complex)
        if pts.ndim == 1:
            pts = pts[None, :]
        vals = np.zeros(pts.shape[0], dtype=complex)
        for nu, c in self.terms.items():
            term = np.full(pts.shape[0], _to_float_scalar(c), dtype=complex)
            for i, e in enumerate(nu):
                if e:
                    term *= pts[:, i] ** e
            vals += term
        return vals


def _is_zero(c):
    if isinstance(c, (float, complex)):
        return c == 0
    return not bool(c)


def _to_float_scalar(c):
    if isinstance(c, Fraction):
        return float(c)
    if isinstance(c, (int, float)):
        return float(c)
    return complex(c)


# -- calculus and pairings on polynomials ------------------------------------------

def directional_derivative(xi, p: Polynomial) -> Polynomial:
    """sum_j xi_j d/dx_j p."""
    out = Polynomial.zero(p.dim)
    for j, w in enumerate(xi):
        if _is_zero(w):
            continue
        out = out + p.partial(j) * w
    return out


def laplacian(p: Polynomial) -> Polynomial:
    return p.laplacian()


def _heat(p: Polynomial, sign: int) -> Polynomial:
    out = p
    power = p
    m = 0
    while power:
        m += 1
        power = power.laplacian()
        if not power:
            break
        coeff = Fraction(sign**m, 2**m * math.factorial(m))
        out = out + power * coeff
    return out


def heat_half(p: Polynomial) -> Polynomial:
    """e^{-Laplacian/2} p; maps x^nu to sqrt(nu!) H_nu."""
    return _heat(p, -1)


def inverse_heat_half(p: Polynomial) -> Polynomial:
    """e^{+Laplacian/2} p; exact inverse of heat_half on polynomials."""
    return _heat(p, +1)


def fischer(p: Polynomial, q: Polynomial):
    """[p, q] = p(d)q(0) = sum_nu nu! p_nu q_nu (bilinear, not Hermitian)."""
    if p.dim != q.dim:
        raise ValueError("dimension mismatch")
    total = 0
    small, large = (p.terms, q.terms) if len(p.terms) <= len(q.terms) else (q.terms, p.terms)
    for nu, c in small.items():
        d = large.get(nu)
        if d is not None:
            total = total + c * d * _multi_factorial(nu)
    return total


def fischer_via_gaussian(p: Polynomial, q: Polynomial, rule):
    """[p, q] as the Gaussian integral of the two half-heat images.

    Exact (up to roundoff) when the rule integrates degree deg p + deg q.
    """
    need = max(p.degree, 0) + max(q.degree, 0)
    if rule.exact_degree < need:
        raise QuadratureDegreeError(
            f"rule exact to degree {rule.exact_degree}, need {need}"
        )
    hp = heat_half(p).to_float()
    hq = heat_half(q).to_float()
    vals = hp.evaluate_many(rule.nodes) * hq.evaluate_many(rule.nodes)
    out = complex(np.dot(rule.weights, vals))
    return out.real if abs(out.imag) < 1e-300 else out


@dataclass(frozen=True)
class NormalizedMonomial:
    """x^nu scaled by 1/sqrt(nu!); the squared scale is kept exact."""

    nu: tuple
    scale_sq: Fraction

    @classmethod
    def from_index(cls, nu):
        nu = tuple(nu)
        return cls(nu, Fraction(1, _multi_factorial(nu)))

    @property
    def dim(self):
        return len(self.nu)

    @property
    def unscaled(self) -> Polynomial:
        return Polynomial.monomial(self.dim, self.nu)

    @property
    def scale(self) -> float:
        return math.sqrt(float(self.scale_sq))

    def float_poly(self) -> Polynomial:
        return Polynomial.monomial(self.dim, self.nu, self.scale)


@dataclass(frozen=True)
class HermiteData:
    """Hermite polynomial H_nu = e^{-Laplacian/2}(x^nu / sqrt(nu!)).

    ``unscaled`` is the exact-rational polynomial e^{-Laplacian/2} x^nu, so
    H_nu = sqrt(scale_sq) * unscaled with scale_sq = 1/nu!.  The Gaussian-
    windowed value h_nu(z) = e^{-|z|^2/2} H_nu(z) is exposed as a method.
    """

    nu: tuple
    unscaled: Polynomial
    scale_sq: Fraction

    @property
    def degree(self):
        return sum(self.nu)

    def polynomial(self) -> Polynomial:
        """H_nu with its irrational scale, as a float polynomial."""
        return self.unscaled.to_float() * math.sqrt(float(self.scale_sq))

    def evaluate(self, z):
        return self.unscaled.evaluate(z) * math.sqrt(float(self.scale_sq))

    def evaluate_windowed(self, z):
        w = math.exp(-sum(float(t) ** 2 for t in z) / 2.0)
        return self.evaluate(z) * w


def hermite(nu) -> HermiteData:
    nu = tuple(nu)
    mono = Polynomial.monomial(len(nu), nu)
    return HermiteData(nu, heat_half(mono), Fraction(1, _multi_factorial(nu)))


@dataclass(frozen=True)
class SupNormEstimate:
    value: float
    samples: int


def sphere_sup_norm(p: Polynomial, n_samples=4096, ascent_steps=20) -> SupNormEstimate:
    """Lower estimate of sup_{|x|=1} |p(x)| for homogeneous p.

    Quasi-uniform sphere samples plus projected local ascent; by construction
    the value never exceeds the true supremum, which makes it conservative in
    the inequality checks that consume it.
    """
    if not p.is_homogeneous():
        raise NonHomogeneousError("sphere sup norm needs a homogeneous polynomial")
    d = p.dim
    if not p.terms:
        return SupNormEstimate(0.0, 0)
    pf = p.to_float()
    pts = _sphere_points(d, n_samples)
    vals = np.abs(pf.evaluate_many(pts))
    best_idx = int(np.argmax(vals))
    best_x = pts[best_idx]
    best = float(vals[best_idx])
    grads = [pf.partial(j) for j in range(d)]
    x = best_x.astype(float)
    step = 0.5
    for _ in range(ascent_steps):
        v = pf.evaluate_many(x[None, :])[0]
        g = np.array([gj.evaluate_many(x[None, :])[0] for gj in grads])
        direction = np.real(np.conj(v) * g)
        nrm = np.linalg.norm(direction)
        if nrm == 0:
            break
        cand = x + step * direction / nrm
        cand /= np.linalg.norm(cand)
        cv = abs(pf.evaluate_many(cand[None, :])[0])
        if cv > best:
            best = float(cv)
            x = cand
            step *= 1.2
        else:
            step *= 0.5
    return SupNormEstimate(best, len(pts))


def _sphere_points(d, n):
    axes = []
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        axes.extend([e, -e])
    if d == 1:
        pts = np.array([[1.0], [-1.0]])
    elif d == 2:
        theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        pts = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    elif d == 3:
        # Fibonacci spiral
        idx = np.arange(n) + 0.5
        phi = np.arccos(1.0 - 2.0 * idx / n)
        golden = np.pi * (1.0 + 5.0**0.5)
        theta = golden * idx
        pts = np.stack(
            [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)],
            axis=1,
        )
    else:
        rng = np.random.default_rng(20389)
        pts = rng.standard_normal((n, d))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return np.concatenate([pts, np.array(axes)], axis=0)


def evaluate(p: Polynomial, z):
    return p.evaluate(z)
