"""Root systems, reflections, and the finite groups they generate.

The standard crystallographic families A, B, D and the coordinate-sign
system Z2^d are realized with exact rational entries; dihedral systems
I2(m) fall back to floats except for m in {1, 2, 4} where a rational
realization exists.  Reflections act by

    s_a(x) = x - 2 <x, a> a / |a|^2,

and the group is the closure of {s_a : a positive} under composition.  The
action on functions is (L_g f)(x) = f(g x), so composing actions reverses
the matrix product: L_g L_h = L_{hg}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math

from .exact import is_real_scalar


class UnsupportedFamilyError(ValueError):
    pass


class GroupClosureError(RuntimeError):
    pass


class MultiplicityError(ValueError):
    pass


FLOAT_MATCH_TOL = 1e-12
DEDUP_TOL = 1e-10


# -- small tuple-based matrix helpers -----------------------------------------

def mat_identity(d, exact=True):
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    return tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d))


def mat_mul(a, b):
    d = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d))
        for i in range(d)
    )


def mat_vec(m, x):
    return tuple(sum(m[i][j] * x[j] for j in range(len(x))) for i in range(len(m)))


def mat_transpose(m):
    d = len(m)
    return tuple(tuple(m[j][i] for j in range(d)) for i in range(d))


def dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def _dedup_key(m, exact):
    if exact:
        return m
    return tuple(tuple(int(round(float(e) / DEDUP_TOL)) for e in row) for row in m)


# -- domain types ---------------------------------------------------------------

@dataclass(frozen=True)
class RootSystem:
    dimension: int
    roots: tuple
    family_tag: str

    @property
    def is_exact(self):
        return all(
            isinstance(e, (int, Fraction)) for root in self.roots for e in root
        )


@dataclass(frozen=True)
class PositiveSystem:
    base: RootSystem
    beta: tuple
    positives: tuple


@dataclass(frozen=True, eq=False)
class ReflectionGroup:
    dimension: int
    elements: tuple
    identity_index: int
    cayley: tuple
    arithmetic_mode: str  # "exact" | "floating"

    @property
    def order(self):
        return len(self.elements)

    def multiply(self, i, j):
        return self.cayley[i][j]

    def inverse_index(self, i):
        row = self.cayley[i]
        for j, prod in enumerate(row):
            if prod == self.identity_index:
                return j
        raise GroupClosureError(f"element {i} has no inverse in the table")

    def element_index(self, matrix):
        exact = self.arithmetic_mode == "exact"
        key = _dedup_key(matrix, exact)
        for i, g in enumerate(self.elements):
            if _dedup_key(g, exact) == key:
                return i
        raise KeyError("matrix is not a group element")


@dataclass(eq=False)
class MultiplicityFunction:
    by_root: dict
    orbits: tuple  # tuple of tuples of root indices into the system's roots
    gamma: object = field(default=None)

    def value(self, root):
        return self.by_root[tuple(root)]

    @property
    def is_real(self):
        return all(is_real_scalar(v) for v in self.by_root.values())

    @property
    def is_nonnegative(self):
        if not self.is_real:
            return False
        return all(v >= 0 for v in self.by_root.values())

    @property
    def is_zero(self):
        return all(v == 0 for v in self.by_root.values())


# -- root system construction -----------------------------------------------------

def build_root_system(family_tag, d=None, m=None) -> RootSystem:
    """Standard root list for a family.

    A is realized as A_{d-1} inside R^d ({e_i - e_j}); B_d and D_d use the
    usual signed lists; Z2^d is {+-e_i}; I2(m) gives 2m planar roots at
    angles j*pi/m (rational only for m in {1, 2, 4}).
    """
    tag = family_tag.upper() if family_tag.lower() != "z2^d" else "Z2^d"
    if tag in ("Z2^D", "Z2"):
        tag = "Z2^d"
    roots = []
    if tag == "Z2^d":
        if d is None or d < 1:
            raise UnsupportedFamilyError("Z2^d needs d >= 1")
        for i in range(d):
            roots.append(_axis(d, i, 1))
            roots.append(_axis(d, i, -1))
    elif tag == "A":
        if d is None or d < 2:
            raise UnsupportedFamilyError("A needs ambient dimension d >= 2")
        for i in range(d):
            for j in range(d):
                if i != j:
                    v = [Fraction(0)] * d
                    v[i] = Fraction(1)
                    v[j] = Fraction(-1)
                    roots.append(tuple(v))
    elif tag == "B":
        if d is None or d < 2:
            raise UnsupportedFamilyError("B needs d >= 2")
        for i in range(d):
            roots.append(_axis(d, i, 1))
            roots.append(_axis(d, i, -1))
        roots.extend(_pair_roots(d))
    elif tag == "D":
        if d is None or d < 2:
            raise UnsupportedFamilyError("D needs d >= 2")
        roots.extend(_pair_roots(d))
    elif tag in ("I2", "I2(M)", "I"):
        if m is None or m < 2:
            raise UnsupportedFamilyError("I2(m) needs m >= 2")
        roots = _dihedral_roots(m)
        tag = "I2(m)"
    else:
        raise UnsupportedFamilyError(f"unknown family {family_tag!r}")
    system = RootSystem(d if d is not None else 2, tuple(roots), tag)
    _validate_root_system(system)
    return system


def _axis(d, i, sign):
    v = [Fraction(0)] * d
    v[i] = Fraction(sign)
    return tuple(v)


def _pair_roots(d):
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            for si in (1, -1):
                for sj in (1, -1):
                    v = [Fraction(0)] * d
                    v[i] = Fraction(si)
                    v[j] = Fraction(sj)
                    out.append(tuple(v))
    return out


def _dihedral_roots(m):
    if m == 1:
        return [(Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0))]
    if m == 2:
        return [
            (Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(1)),
            (Fraction(-1), Fraction(0)),
            (Fraction(0), Fraction(-1)),
        ]
    if m == 4:
        # rational realization: the B_2 list, angles j*pi/4 up to root lengths
        return _pair_roots(2) + [
            (Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(1)),
            (Fraction(-1), Fraction(0)),
            (Fraction(0), Fraction(-1)),
        ]
    return [
        (math.cos(j * math.pi / m), math.sin(j * math.pi / m)) for j in range(2 * m)
    ]


def _validate_root_system(system: RootSystem):
    exact = system.is_exact
    roots = system.roots
    for a in roots:
        if all(e == 0 for e in a):
            raise UnsupportedFamilyError("zero vector among the roots")
    keys = _root_key_set(roots, exact)
    for a in roots:
        neg = tuple(-e for e in a)
        if _root_key(neg, exact) not in keys:
            raise UnsupportedFamilyError(f"root list not closed under negation at {a}")
        for b in roots:
            if _root_key(reflect(a, b), exact) not in keys:
                raise UnsupportedFamilyError(
                    f"root list not stable under the reflection in {a}"
                )


def _root_key(v, exact):
    if exact:
        return tuple(Fraction(e) for e in v)
    return tuple(int(round(float(e) / FLOAT_MATCH_TOL)) for e in v)


def _root_key_set(roots, exact):
    return {_root_key(r, exact) for r in roots}


# -- reflections -------------------------------------------------------------------

def reflect(alpha, x):
    """s_alpha(x) = x - 2 <x, alpha> alpha / |alpha|^2."""
    nrm2 = dot(alpha, alpha)
    if nrm2 == 0:
        raise ValueError("cannot reflect in the zero vector")
    factor = 2 * dot(x, alpha) / nrm2
    return tuple(xi - factor * ai for xi, ai in zip(x, alpha))


def reflection_matrix(alpha):
    d = len(alpha)
    nrm2 = dot(alpha, alpha)
    if nrm2 == 0:
        raise ValueError("cannot reflect in the zero vector")
    exact = all(isinstance(e, (int, Fraction)) for e in alpha)
    eye = mat_identity(d, exact=exact)
    return tuple(
        tuple(eye[i][j] - 2 * alpha[i] * alpha[j] / nrm2 for j in range(d))
        for i in range(d)
    )


# -- positive system ------------------------------------------------------------------

def select_positive(system: RootSystem) -> PositiveSystem:
    """Split R into halves by a generic direction beta = (1, eps, eps^2, ...).

    eps starts at 1/127 and is halved whenever some root is orthogonal to
    beta; only finitely many eps values can collide with a finite root list.
    """
    d = system.dimension
    eps = Fraction(1, 127)
    exact = system.is_exact
    for _ in range(128):
        beta = tuple(eps**i for i in range(d))
        if exact:
            pairings = [dot(a, beta) for a in system.roots]
            if all(p != 0 for p in pairings):
                positives = tuple(
                    a for a, p in zip(system.roots, pairings) if p > 0
                )
                return PositiveSystem(system, beta, positives)
        else:
            betaf = tuple(float(b) for b in beta)
            pairings = [float(dot(a, betaf)) for a in system.roots]
            if all(abs(p) > FLOAT_MATCH_TOL for p in pairings):
                positives = tuple(
                    a for a, p in zip(system.roots, pairings) if p > 0
                )
                return PositiveSystem(system, betaf, positives)
        eps = eps / 2
    raise UnsupportedFamilyError("could not separate the roots from a hyperplane")


# -- group generation -------------------------------------------------------------------

def generate_group(positive: PositiveSystem, element_cap=4096) -> ReflectionGroup:
    """Close the generating reflections under composition and build the table."""
    system = positive.base
    d = system.dimension
    exact = system.is_exact
    mode = "exact" if exact else "floating"
    identity = mat_identity(d, exact=exact)
    generators = [reflection_matrix(a) for a in positive.positives]

    elements = [identity]
    index = {_dedup_key(identity, exact): 0}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in generators:
                prod = mat_mul(g, s)
                key = _dedup_key(prod, exact)
                if key not in index:
                    if len(elements) >= element_cap:
                        raise GroupClosureError(
                            "not a finite reflection group at this tolerance "
                            f"(closure exceeded {element_cap} elements)"
                        )
                    index[key] = len(elements)
                    elements.append(prod)
                    nxt.append(prod)
        frontier = nxt

    n = len(elements)
    cayley = []
    for i in range(n):
        row = []
        for j in range(n):
            key = _dedup_key(mat_mul(elements[i], elements[j]), exact)
            if key not in index:
                raise GroupClosureError("composition left the generated set")
            row.append(index[key])
        cayley.append(tuple(row))
    group = ReflectionGroup(d, tuple(elements), 0, tuple(cayley), mode)
    _validate_group(group)
    return group


def _validate_group(group: ReflectionGroup):
    n = group.order
    for i in range(n):
        if sorted(group.cayley[i]) != list(range(n)):
            raise GroupClosureError("Cayley row is not a permutation")
        group.inverse_index(i)  # raises if missing
    exact = group.arithmetic_mode == "exact"
    for g in group.elements:
        gtg = mat_mul(mat_transpose(g), g)
        eye = mat_identity(group.dimension, exact=exact)
        for i in range(group.dimension):
            for j in range(group.dimension):
                diff = gtg[i][j] - eye[i][j]
                ok = diff == 0 if exact else abs(float(diff)) <= FLOAT_MATCH_TOL
                if not ok:
                    raise GroupClosureError("element is not orthogonal")


_FORM_POWER_CACHE = {}
_MONO_IMAGE_CACHE = {}


def _form_power(matrix, i, e, dim):
    """((M x)_i)^e, cached per matrix row and exponent."""
    from .poly import Polynomial

    key = (matrix, i, e)
    cached = _FORM_POWER_CACHE.get(key)
    if cached is None:
        if e == 1:
            cached = Polynomial(
                dim,
                {
                    tuple(1 if l == j else 0 for l in range(dim)): matrix[i][j]
                    for j in range(dim)
                    if matrix[i][j]
                },
            )
        else:
            cached = _form_power(matrix, i, e - 1, dim) * _form_power(matrix, i, 1, dim)
        _FORM_POWER_CACHE[key] = cached
    return cached


def _monomial_image(matrix, nu, dim):
    from .poly import Polynomial

    key = (matrix, nu)
    cached = _MONO_IMAGE_CACHE.get(key)
    if cached is None:
        cached = Polynomial.constant(dim, 1)
        for i, e in enumerate(nu):
            if e:
                cached = cached * _form_power(matrix, i, e, dim)
        _MONO_IMAGE_CACHE[key] = cached
    return cached


def act_on_polynomial(g, p):
    """(L_g p)(x) = p(g x); exact substitution, degree preserving.

    Monomial images under each matrix are cached, which makes the repeated
    group-averaging in the degree recursions cheap.
    """
    from .poly import Polynomial

    g = tuple(tuple(row) for row in g)
    out = Polynomial.zero(p.dim)
    for nu, c in p.terms.items():
        out = out + _monomial_image(g, nu, p.dim) * c
    return out


# -- multiplicity functions -----------------------------------------------------------------

def root_orbits(group: ReflectionGroup, system: RootSystem):
    """Orbits of the root list under the group, as tuples of root indices."""
    exact = system.is_exact
    key_to_idx = {_root_key(r, exact): i for i, r in enumerate(system.roots)}
    seen = set()
    orbits = []
    for i, root in enumerate(system.roots):
        if i in seen:
            continue
        orbit = set()
        stack = [root]
        while stack:
            r = stack.pop()
            idx = key_to_idx[_root_key(r, exact)]
            if idx in orbit:
                continue
            orbit.add(idx)
            for g in group.elements:
                img = mat_vec(g, r)
                j = key_to_idx.get(_root_key(img, exact))
                if j is None:
                    raise MultiplicityError("group action does not preserve the roots")
                if j not in orbit:
                    stack.append(system.roots[j])
        seen |= orbit
        orbits.append(tuple(sorted(orbit)))
    orbits.sort(key=lambda orb: (float(dot(system.roots[orb[0]], system.roots[orb[0]])), orb))
    return tuple(orbits)


def validate_multiplicity(group, positive: PositiveSystem, values) -> MultiplicityFunction:
    """Build a G-invariant weight from per-root, per-orbit, or scalar data.

    ``values`` may be a single scalar (every orbit), a list with one scalar
    per orbit (canonical orbit order), or a mapping from root tuples to
    scalars covering at least one root per orbit.  Conflicting values inside
    an orbit raise MultiplicityError.
    """
    system = positive.base
    orbits = root_orbits(group, system)
    per_orbit = [None] * len(orbits)

    if isinstance(values, (list, tuple)):
        if len(values) != len(orbits):
            raise MultiplicityError(
                f"{len(values)} values supplied for {len(orbits)} orbits"
            )
        per_orbit = list(values)
    elif isinstance(values, dict):
        root_index = {tuple(r): i for i, r in enumerate(system.roots)}
        orbit_of = {}
        for oi, orb in enumerate(orbits):
            for ri in orb:
                orbit_of[ri] = oi
        for root, val in values.items():
            ri = root_index.get(tuple(root))
            if ri is None:
                raise MultiplicityError(f"{root} is not a root of the system")
            oi = orbit_of[ri]
            if per_orbit[oi] is None:
                per_orbit[oi] = val
            elif not _scalars_agree(per_orbit[oi], val):
                raise MultiplicityError(
                    f"conflicting values on one orbit: {per_orbit[oi]} vs {val}"
                )
        if any(v is None for v in per_orbit):
            raise MultiplicityError("some root orbit received no value")
    else:
        per_orbit = [values] * len(orbits)

    by_root = {}
    for oi, orb in enumerate(orbits):
        for ri in orb:
            by_root[tuple(system.roots[ri])] = per_orbit[oi]
    gamma = 0
    for a in positive.positives:
        gamma = gamma + by_root[tuple(a)]
    return MultiplicityFunction(by_root=by_root, orbits=orbits, gamma=gamma)


def _scalars_agree(a, b):
    if isinstance(a, (float, complex)) or isinstance(b, (float, complex)):
        return abs(complex(a) - complex(b)) <= FLOAT_MATCH_TOL
    return a == b


def orbit_norms(system: RootSystem, orbits):
    return tuple(float(dot(system.roots[orb[0]], system.roots[orb[0]])) for orb in orbits)
