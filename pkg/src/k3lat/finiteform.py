"""Discriminant groups with their torsion quadratic form q: A -> Q/2Z and
bilinear form b: A x A -> Q/Z, plus value censuses and small-group
isometry testing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import GuardError, K3latError, OddLatticeError
from .lattice import GramLattice, discriminant_group

Q_CENSUS_GUARD = 1 << 20
ISO_GUARD = 1 << 10


@dataclass(frozen=True)
class QValue:
    """A value of q, reduced to the half-open interval [0, 2)."""

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value) % 2)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """q-values (mod 2) on the diagonal, b-values (mod 1) off it."""

    orders: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    lifts: tuple[tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        k = len(self.orders)
        if len(self.matrix) != k or any(len(r) != k for r in self.matrix):
            raise K3latError("q-matrix shape must match the generator count")
        canon = []
        for i in range(k):
            row = []
            for j in range(k):
                v = Fraction(self.matrix[i][j])
                row.append(v % 2 if i == j else v % 1)
            canon.append(tuple(row))
        object.__setattr__(self, "matrix", tuple(canon))
        object.__setattr__(self, "orders", tuple(int(d) for d in self.orders))

    @property
    def order(self) -> int:
        n = 1
        for d in self.orders:
            n *= d
        return n

    def elements(self):
        return itertools.product(*(range(d) for d in self.orders))

    def element_order(self, e) -> int:
        n = 1
        for a, d in zip(e, self.orders):
            if a:
                g = _gcd(a, d)
                sub = d // g
                n = n * sub // _gcd(n, sub)
        return n

    def q(self, e) -> Fraction:
        total = Fraction(0)
        k = len(self.orders)
        for i in range(k):
            if e[i]:
                total += e[i] * e[i] * self.matrix[i][i]
                for j in range(i + 1, k):
                    if e[j]:
                        total += 2 * e[i] * e[j] * self.matrix[i][j]
        return total % 2

    def b(self, e1, e2) -> Fraction:
        total = Fraction(0)
        k = len(self.orders)
        for i in range(k):
            if not e1[i]:
                continue
            for j in range(k):
                if not e2[j]:
                    continue
                bij = self.matrix[i][j] % 1  # on the diagonal: b(g,g) = q(g) mod 1
                total += e1[i] * e2[j] * bij
        return total % 1

    def add(self, e1, e2):
        return tuple((a + b) % d for a, b, d in zip(e1, e2, self.orders))

    def negate(self) -> "FiniteQuadraticForm":
        mat = tuple(tuple(-x for x in row) for row in self.matrix)
        return FiniteQuadraticForm(self.orders, mat)

    def direct_sum(self, other: "FiniteQuadraticForm") -> "FiniteQuadraticForm":
        k1, k2 = len(self.orders), len(other.orders)
        mat = [[Fraction(0)] * (k1 + k2) for _ in range(k1 + k2)]
        for i in range(k1):
            for j in range(k1):
                mat[i][j] = self.matrix[i][j]
        for i in range(k2):
            for j in range(k2):
                mat[k1 + i][k1 + j] = other.matrix[i][j]
        return FiniteQuadraticForm(self.orders + other.orders,
                                   tuple(map(tuple, mat)))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def discriminant_form(lattice: GramLattice) -> FiniteQuadraticForm:
    """The discriminant quadratic form of an even nondegenerate lattice."""
    if not lattice.is_even:
        raise OddLatticeError("q is defined modulo 2Z only for even lattices")
    group = discriminant_group(lattice)
    k = len(group.orders)
    gram = lattice.gram_rows()
    mat = [[Fraction(0)] * k for _ in range(k)]

    def pair(u, v) -> Fraction:
        return sum(u[i] * sum(gram[i][j] * v[j] for j in range(lattice.rank))
                   for i in range(lattice.rank))

    for i in range(k):
        mat[i][i] = pair(group.lifts[i], group.lifts[i]) % 2
        for j in range(i + 1, k):
            mat[i][j] = mat[j][i] = pair(group.lifts[i], group.lifts[j]) % 1
    return FiniteQuadraticForm(group.orders, tuple(map(tuple, mat)), group.lifts)


def q_census(form: FiniteQuadraticForm) -> dict[Fraction, int]:
    """Multiset of q-values over the nonzero elements."""
    if form.order > Q_CENSUS_GUARD:
        raise GuardError("discriminant group too large for a full census")
    census: dict[Fraction, int] = {}
    zero = tuple([0] * len(form.orders))
    for e in form.elements():
        if e == zero:
            continue
        v = form.q(e)
        census[v] = census.get(v, 0) + 1
    return census


def _fingerprint_census(form: FiniteQuadraticForm):
    census: dict[tuple, int] = {}
    for e in form.elements():
        key = (form.element_order(e), form.q(e))
        census[key] = census.get(key, 0) + 1
    return census


def forms_isomorphic(f1: FiniteQuadraticForm, f2: FiniteQuadraticForm,
                     guard: int = ISO_GUARD):
    """Group isomorphism preserving q, by pruned generator-image search.

    Returns (True, witness) where witness maps each generator of f1 to an
    element tuple of f2, or (False, None).  The search keys every element
    by its (order, q) profile, prunes candidate images against all pairwise
    b-values of the already placed generators, and tracks the subgroup the
    partial images generate so dependent choices die immediately.  Values
    of q and b are scaled to integers mod 2e and mod e (e the exponent of
    the group), which keeps the inner loops free of Fraction arithmetic.
    """
    if f1.order > guard or f2.order > guard:
        raise GuardError("groups too large for isomorphism search")
    if f1.orders != f2.orders:
        return False, None
    if _fingerprint_census(f1) != _fingerprint_census(f2):
        return False, None

    k = len(f1.orders)
    exp = 1
    for d in f1.orders:
        exp = exp * d // _gcd(exp, d)

    def scaled_b_matrix(form):
        mat = []
        for i in range(k):
            row = []
            for j in range(k):
                v = form.matrix[i][j] % 1 if i == j else form.matrix[i][j]
                row.append(int(v * exp) % exp)
            mat.append(row)
        return mat

    b1 = scaled_b_matrix(f1)
    b2 = scaled_b_matrix(f2)

    def q_scaled(form, bmat, e) -> int:
        # q(e) * exp  mod  2*exp, from the unscaled diagonal of the form
        total = Fraction(0)
        for i in range(k):
            if e[i]:
                total += e[i] * e[i] * form.matrix[i][i]
                for j in range(i + 1, k):
                    if e[j]:
                        total += 2 * e[i] * e[j] * form.matrix[i][j]
        return int((total % 2) * exp)

    def b2_elems(x, y) -> int:
        total = 0
        for i in range(k):
            if x[i]:
                row = b2[i]
                total += x[i] * sum(row[j] * y[j] for j in range(k) if y[j])
        return total % exp

    elements2 = list(f2.elements())
    by_profile: dict[tuple, list] = {}
    for e in elements2:
        by_profile.setdefault((f2.element_order(e), q_scaled(f2, b2, e)), []).append(e)

    orders = f1.orders
    images: list[tuple] = []
    zero = tuple([0] * k)
    span: set[tuple] = {zero}
    add = f2.add

    def grow_span(base: set, e) -> set:
        out = set(base)
        current = e
        order = f2.element_order(e)
        for _ in range(order - 1):
            out |= {add(x, current) for x in base}
            current = add(current, e)
        return out

    # b-values required between f1 generators, scaled
    target_b = b1
    sizes = [1] * (k + 1)
    for i in range(k):
        sizes[i + 1] = sizes[i] * orders[i]
    q_keys = [(orders[i], q_scaled(f1, b1, _unit(f1, i))) for i in range(k)]

    def backtrack(i: int, span: set) -> bool:
        if i == k:
            return len(span) == f1.order
        for cand in by_profile.get(q_keys[i], []):
            if any(b2_elems(images[j], cand) != target_b[j][i] for j in range(i)):
                continue
            if cand in span:
                continue
            new_span = grow_span(span, cand)
            if len(new_span) != sizes[i + 1]:
                continue
            images.append(cand)
            if backtrack(i + 1, new_span):
                return True
            images.pop()
        return False

    if backtrack(0, span):
        return True, tuple(images)
    return False, None


def _unit(form: FiniteQuadraticForm, i: int):
    e = [0] * len(form.orders)
    e[i] = 1
    return tuple(e)


def verify_form_matches(lattice: GramLattice, orders, expected_matrix) -> bool:
    """True iff disc(lattice) is isometric to the form given by the matrix."""
    expected = FiniteQuadraticForm(tuple(orders),
                                   tuple(tuple(Fraction(x) for x in row)
                                         for row in expected_matrix))
    actual = discriminant_form(lattice)
    ok, _ = forms_isomorphic(actual, expected)
    return ok
