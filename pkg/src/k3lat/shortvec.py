"""Complete short-vector enumeration in negative definite lattices.

The search is a Fincke-Pohst branch and bound on an LLL-reduced copy of
the (negated) Gram matrix; bounds are computed with exact integer square
roots, so the output is provably complete.
"""

from __future__ import annotations

import os
from fractions import Fraction

from . import exact
from .errors import DegenerateError, GuardError, K3latError

DEFAULT_GUARD = 100


def _guard() -> int:
    raw = os.environ.get("K3LAT_GUARD")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_GUARD


def _cholesky(a) -> tuple[list[Fraction], list[list[Fraction]]]:
    """a = R^T diag(q) R with R unit upper triangular; a positive definite."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] for i in range(n)]
    q = [Fraction(0)] * n
    r = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        q[i] = m[i][i]
        if q[i] <= 0:
            raise DegenerateError("matrix is not positive definite")
        for j in range(i + 1, n):
            r[i][j] = m[i][j] / q[i]
        for k in range(i + 1, n):
            for l in range(k, n):
                m[k][l] -= q[i] * r[i][k] * r[i][l]
    return q, r


def _coord_range(c: Fraction, bound: Fraction) -> range:
    """Integers x with (x + c)^2 <= bound."""
    if bound < 0:
        return range(0)
    root = exact.floor_sqrt_fraction(bound)  # floor(sqrt(bound)) as int
    # conservative endpoints from the integer part, then exact adjustment
    lo = _ceil(-c - root)
    hi = _floor(-c + root)
    while (Fraction(hi + 1) + c) ** 2 <= bound:
        hi += 1
    while (Fraction(lo - 1) + c) ** 2 <= bound:
        lo -= 1
    while lo <= hi and (Fraction(lo) + c) ** 2 > bound:
        lo += 1
    while lo <= hi and (Fraction(hi) + c) ** 2 > bound:
        hi -= 1
    return range(lo, hi + 1)


def _floor(f: Fraction) -> int:
    return f.numerator // f.denominator


def _ceil(f: Fraction) -> int:
    return -((-f.numerator) // f.denominator)


def canonical_sign(v: tuple[int, ...]) -> tuple[int, ...]:
    for x in v:
        if x > 0:
            return v
        if x < 0:
            return tuple(-y for y in v)
    return v


def enumerate_vectors(lattice, norm: int, guard: int | None = None) -> list[tuple[int, ...]]:
    """All vectors of the given norm in a negative definite lattice.

    Returned up to sign with the canonical representative (first nonzero
    coordinate positive), sorted lexicographically.  norm must be a
    negative even integer with |norm| within the guard (default 100,
    raised via the K3LAT_GUARD environment variable).
    """
    gram = lattice.gram_rows() if hasattr(lattice, "gram_rows") else [list(r) for r in lattice]
    n = len(gram)
    if norm >= 0 or norm % 2 != 0:
        raise K3latError("norm must be a negative even integer")
    limit = guard if guard is not None else _guard()
    if -norm > limit:
        raise GuardError(f"|norm| exceeds the enumeration guard {limit}")
    pos, neg = exact.inertia(gram)
    if pos or neg != n:
        raise K3latError("lattice is not negative definite")
    target = -norm

    a = [[-x for x in row] for row in gram]
    u, a_red = exact.lll_gram(a)
    q, r = _cholesky(a_red)

    found: set[tuple[int, ...]] = set()
    x = [0] * n

    def descend(i: int, remaining: Fraction):
        c = sum(r[i][j] * x[j] for j in range(i + 1, n)) if i + 1 < n else Fraction(0)
        for xi in _coord_range(c, remaining / q[i]):
            x[i] = xi
            used = q[i] * (xi + c) ** 2
            if i == 0:
                if remaining - used == 0:
                    vec = tuple(exact.vec_mat(x, u))
                    found.add(canonical_sign(vec))
            else:
                descend(i - 1, remaining - used)
        x[i] = 0

    descend(n - 1, Fraction(target))
    found.discard(tuple([0] * n))
    return sorted(found)
