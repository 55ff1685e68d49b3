"""Integral lattices presented by Gram matrices, and the exact operations
on them: pairings, invariants, discriminant groups, complements,
saturations and finite-index overlattices.

Vectors are coordinate tuples in the basis of their lattice.  Rational
vectors (glue classes, dual lifts) are tuples of Fractions in the same
basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .errors import DegenerateError, DimensionError, GlueError, K3latError


@dataclass(frozen=True)
class GramLattice:
    """A lattice given by a symmetric integer Gram matrix with labeled basis."""

    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    name: str | None = None

    def __post_init__(self):
        n = len(self.gram)
        object.__setattr__(self, "gram", tuple(tuple(int(x) for x in row) for row in self.gram))
        for row in self.gram:
            if len(row) != n:
                raise DimensionError("gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise K3latError("gram matrix must be symmetric")
        if len(self.labels) != n:
            raise DimensionError("need one label per basis vector")
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def gram_rows(self) -> list[list[int]]:
        return [list(row) for row in self.gram]

    def pairing(self, u, v) -> int:
        u = _coords(u, self)
        v = _coords(v, self)
        return exact.dot(u, v, self.gram_rows())

    def norm(self, v) -> int:
        return self.pairing(v, v)

    def dual_contains(self, v) -> bool:
        """v (rational coords in this basis) pairs integrally with the lattice."""
        w = exact.mat_vec(self.gram_rows(), [Fraction(x) for x in v])
        return all(x.denominator == 1 for x in w)

    def renamed(self, name: str) -> "GramLattice":
        return GramLattice(self.gram, self.labels, name)


@dataclass(frozen=True)
class LatticeVector:
    """Integer coordinate vector bound to its lattice."""

    coords: tuple[int, ...]
    lattice: GramLattice

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))
        if len(self.coords) != self.lattice.rank:
            raise DimensionError("vector length must equal lattice rank")

    def norm(self) -> int:
        return self.lattice.norm(self.coords)

    def pairing(self, other) -> int:
        return self.lattice.pairing(self.coords, other)


@dataclass(frozen=True)
class RationalVector:
    """Rational coordinate vector, stored in lowest terms."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in self.coords))

    @property
    def denominators(self) -> tuple[int, ...]:
        return tuple(c.denominator for c in self.coords)


def _coords(v, lattice: GramLattice | None = None):
    if isinstance(v, LatticeVector):
        if lattice is not None and v.lattice.gram != lattice.gram:
            raise DimensionError("vector belongs to a different lattice")
        return list(v.coords)
    if isinstance(v, RationalVector):
        return list(v.coords)
    return list(v)


def pairing(lattice: GramLattice, u, v) -> int:
    """Evaluate the bilinear form u^T . gram . v."""
    uu, vv = _coords(u, lattice), _coords(v, lattice)
    if len(uu) != lattice.rank or len(vv) != lattice.rank:
        raise DimensionError("vector length must equal lattice rank")
    return exact.dot(uu, vv, lattice.gram_rows())


@dataclass(frozen=True)
class LatticeInvariants:
    rank: int
    signature: tuple[int, int]
    det: int
    is_even: bool

    @property
    def abs_det(self) -> int:
        return abs(self.det)


def invariants(lattice: GramLattice) -> LatticeInvariants:
    """(rank, signature, signed determinant, evenness), all exact."""
    det = exact.bareiss_det(lattice.gram_rows())
    if det == 0:
        raise DegenerateError("lattice is degenerate")
    sig = exact.inertia(lattice.gram_rows())
    return LatticeInvariants(lattice.rank, sig, det, lattice.is_even)


def smith_normal_form(m) -> tuple[list, list, list]:
    """U.m.V = D with the divisibility-chained diagonal D."""
    return exact.smith_normal_form(m)


@dataclass(frozen=True)
class DiscriminantGroup:
    """L^dual / L presented by cyclic orders with rational lifts in L."""

    lattice: GramLattice
    orders: tuple[int, ...]
    lifts: tuple[tuple[Fraction, ...], ...]

    @property
    def order(self) -> int:
        n = 1
        for d in self.orders:
            n *= d
        return n

    def lift(self, element) -> tuple[Fraction, ...]:
        """Rational vector in L-coordinates representing the element."""
        vec = [Fraction(0)] * self.lattice.rank
        for a, g in zip(element, self.lifts):
            if a:
                vec = [x + a * y for x, y in zip(vec, g)]
        return tuple(vec)

    def elements(self):
        """All elements as coordinate tuples (a_i mod orders)."""
        import itertools

        return itertools.product(*(range(d) for d in self.orders))

    def class_of(self, rational_vec) -> tuple[int, ...]:
        """Discriminant class of a vector of L^dual (rational L-coordinates)."""
        v = [Fraction(x) for x in _coords(rational_vec)]
        w = exact.mat_vec(self.lattice.gram_rows(), v)
        if any(x.denominator != 1 for x in w):
            raise K3latError("vector is not in the dual lattice")
        y = exact.mat_vec(self._u, [int(x) for x in w])
        out = []
        for i, d in enumerate(self._nontrivial):
            out.append(y[d] % self.orders[i])
        return tuple(out)


def discriminant_group(lattice: GramLattice) -> DiscriminantGroup:
    """Finite abelian group L^dual/L with lift map, via Smith normal form."""
    det = exact.bareiss_det(lattice.gram_rows())
    if det == 0:
        raise DegenerateError("lattice is degenerate")
    u, d, _ = exact.smith_normal_form(lattice.gram_rows())
    n = lattice.rank
    ug = exact.mat_mul(u, lattice.gram_rows())
    lifts_all = exact.invert_rational(ug)  # columns are the generator lifts
    orders = []
    lifts = []
    nontrivial = []
    for i in range(n):
        if d[i][i] > 1:
            orders.append(d[i][i])
            lifts.append(tuple(lifts_all[r][i] for r in range(n)))
            nontrivial.append(i)
    group = DiscriminantGroup(lattice, tuple(orders), tuple(lifts))
    object.__setattr__(group, "_u", u)
    object.__setattr__(group, "_nontrivial", nontrivial)
    return group


@dataclass(frozen=True)
class Embedding:
    """A sublattice of an ambient lattice, by basis rows in ambient coordinates."""

    ambient: GramLattice
    rows: tuple[tuple[int, ...], ...]
    sub: GramLattice = None

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(int(x) for x in r) for r in self.rows))
        for r in self.rows:
            if len(r) != self.ambient.rank:
                raise DimensionError("embedding rows must live in the ambient lattice")
        induced = self.induced_gram()
        if self.sub is None:
            labels = tuple(f"s{i}" for i in range(len(self.rows)))
            object.__setattr__(self, "sub", GramLattice(tuple(map(tuple, induced)), labels))
        elif [list(r) for r in self.sub.gram] != induced:
            raise K3latError("induced gram does not match the declared sublattice")

    def induced_gram(self) -> list[list[int]]:
        r = [list(x) for x in self.rows]
        g = self.ambient.gram_rows()
        return exact.mat_mul(exact.mat_mul(r, g), exact.transpose(r))

    @property
    def matrix_columns(self) -> list[list[int]]:
        """Basis as columns, ambient coordinates."""
        return exact.transpose([list(r) for r in self.rows])

    def to_ambient(self, v) -> list:
        return exact.vec_mat(_coords(v), [list(r) for r in self.rows])


def sublattice_span(ambient: GramLattice, vectors) -> Embedding:
    rows = [tuple(_coords(v, ambient)) for v in vectors]
    return Embedding(ambient, tuple(rows))


def orthogonal_complement(ambient: GramLattice, sub: Embedding) -> Embedding:
    """Primitive sublattice orthogonal to sub inside ambient.

    Rejects degenerate sub (e.g. isotropic lines): every consumer here
    needs a nondegenerate complement.
    """
    if exact.bareiss_det(sub.induced_gram()) == 0:
        raise DegenerateError("sublattice is degenerate in the ambient lattice")
    a = exact.mat_mul([list(r) for r in sub.rows], ambient.gram_rows())
    kern = exact.integer_kernel(a)
    return Embedding(ambient, tuple(tuple(r) for r in kern))


def saturation(ambient: GramLattice, sub: Embedding) -> tuple[Embedding, int]:
    """Primitive closure of sub in ambient and the index [closure : sub]."""
    rows = [list(r) for r in sub.rows]
    u, d, v = exact.smith_normal_form(rows)
    k = sum(1 for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i])
    index = 1
    for i in range(k):
        index *= d[i][i]
    vinv = exact.inverse_unimodular(v)
    closure = tuple(tuple(vinv[i]) for i in range(k))
    return Embedding(ambient, closure), index


@dataclass(frozen=True)
class OverlatticeResult:
    """A finite-index overlattice, with its basis in the old coordinates."""

    base: GramLattice
    lattice: GramLattice
    basis: tuple[tuple[Fraction, ...], ...]  # rows: new basis in old coordinates
    index: int

    def coords_of(self, v) -> tuple[int, ...] | None:
        """Coordinates in the overlattice of a rational vector in base
        coordinates, or None when the vector is not in the overlattice."""
        sol = exact.solve_rational(self._basis_t(), [Fraction(x) for x in _coords(v)])
        if sol is None or any(x.denominator != 1 for x in sol):
            return None
        return tuple(int(x) for x in sol)

    def contains(self, v) -> bool:
        return self.coords_of(v) is not None

    def rational_coords_of(self, v) -> tuple[Fraction, ...]:
        """Coordinates in the overlattice basis of any rational vector."""
        sol = exact.solve_rational(self._basis_t(), [Fraction(x) for x in _coords(v)])
        if sol is None:
            raise K3latError("vector does not lie in the rational span")
        return tuple(sol)

    def dual_contains(self, v) -> bool:
        """v (rational, base coordinates) pairs integrally with the overlattice."""
        g = self.base.gram_rows()
        vv = [Fraction(x) for x in _coords(v)]
        for row in self.basis:
            if exact.dot(list(row), vv, g).denominator != 1:
                return False
        return True

    def to_base(self, v) -> tuple[Fraction, ...]:
        """Old-basis rational coordinates of an overlattice vector."""
        return tuple(exact.vec_mat([Fraction(x) for x in _coords(v)],
                                   [list(r) for r in self.basis]))

    def _basis_t(self):
        return exact.transpose([list(r) for r in self.basis])


def overlattice(base: GramLattice, glue, name: str | None = None) -> OverlatticeResult:
    """Even overlattice of base generated by the rational glue vectors.

    Every glue vector must pair integrally with base and with the other
    glue vectors, and have even self-pairing; violations raise GlueError.
    """
    n = base.rank
    g = base.gram_rows()
    glue_rows = [[Fraction(x) for x in _coords(v)] for v in glue]
    for row in glue_rows:
        if len(row) != n:
            raise DimensionError("glue vector has wrong length")
        w = exact.mat_vec(g, row)
        if any(x.denominator != 1 for x in w):
            raise GlueError("glue vector does not pair integrally with the lattice")
    for i, u in enumerate(glue_rows):
        for j, v in enumerate(glue_rows):
            val = exact.dot(u, v, g)
            if val.denominator != 1:
                raise GlueError("glue vectors do not pair integrally with each other")
            if i == j and int(val) % 2 != 0:
                raise GlueError("glue vector has odd self-intersection")
    denom = 1
    for row in glue_rows:
        for x in row:
            denom = denom * x.denominator // _gcd(denom, x.denominator)
    rows = [[denom if i == j else 0 for j in range(n)] for i in range(n)]
    rows += [[int(x * denom) for x in row] for row in glue_rows]
    hnf = exact.hnf_rows(rows, n)
    if len(hnf) != n:
        raise K3latError("overlattice is not full rank")
    basis = tuple(tuple(Fraction(x, denom) for x in row) for row in hnf)
    bmat = [list(r) for r in basis]
    new_gram = exact.mat_mul(exact.mat_mul(bmat, g), exact.transpose(bmat))
    out = []
    for row in new_gram:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise GlueError("glue does not produce an integral lattice")
            r.append(int(x))
        out.append(tuple(r))
    det_basis = exact.det_rational(bmat)
    index = Fraction(1) / abs(det_basis)
    if index.denominator != 1:
        raise K3latError("overlattice index is not integral")
    labels = tuple(f"b{i}" for i in range(n))
    lat = GramLattice(tuple(out), labels, name or (base.name and base.name + "+glue"))
    if lat.is_even is False and base.is_even:
        raise GlueError("glue does not produce an even lattice")
    return OverlatticeResult(base, lat, basis, int(index))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# standard constructors


def hyperbolic_u(scale: int = 1, name: str | None = None) -> GramLattice:
    return GramLattice(((0, scale), (scale, 0)), ("e", "f"),
                       name or ("U" if scale == 1 else f"U({scale})"))


def rank_one(m: int, label: str = "v") -> GramLattice:
    return GramLattice(((m,),), (label,), f"<{m}>")


def diagonal_lattice(entries, name: str | None = None, labels=None) -> GramLattice:
    entries = [int(x) for x in entries]
    n = len(entries)
    gram = tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))
    if labels is None:
        labels = tuple(f"d{i}" for i in range(n))
    return GramLattice(gram, tuple(labels), name)


def a_lattice(k: int) -> GramLattice:
    """A_k(-1): chain of (-2)-vectors."""
    gram = [[0] * k for _ in range(k)]
    for i in range(k):
        gram[i][i] = -2
        if i + 1 < k:
            gram[i][i + 1] = gram[i + 1][i] = 1
    return GramLattice(tuple(map(tuple, gram)), tuple(f"a{i+1}" for i in range(k)), f"A{k}(-1)")


def d_lattice(k: int) -> GramLattice:
    """D_k(-1): fork at the third node from the end."""
    if k < 4:
        raise K3latError("D_k needs k >= 4")
    gram = [[0] * k for _ in range(k)]
    for i in range(k):
        gram[i][i] = -2
    for i in range(k - 2):
        gram[i][i + 1] = gram[i + 1][i] = 1
    gram[k - 3][k - 1] = gram[k - 1][k - 3] = 1
    return GramLattice(tuple(map(tuple, gram)), tuple(f"d{i+1}" for i in range(k)), f"D{k}(-1)")


def e8_negative() -> GramLattice:
    """E8(-1) with basis E1..E8: E1..E7 an A7(-1) chain and E3.E8 = 1."""
    gram = [[0] * 8 for _ in range(8)]
    for i in range(8):
        gram[i][i] = -2
    for i in range(6):
        gram[i][i + 1] = gram[i + 1][i] = 1
    gram[2][7] = gram[7][2] = 1
    return GramLattice(tuple(map(tuple, gram)), tuple(f"E{i+1}" for i in range(8)), "E8(-1)")


def direct_sum(*lattices: GramLattice, name: str | None = None) -> GramLattice:
    n = sum(l.rank for l in lattices)
    gram = [[0] * n for _ in range(n)]
    labels = []
    off = 0
    for idx, l in enumerate(lattices):
        for i in range(l.rank):
            for j in range(l.rank):
                gram[off + i][off + j] = l.gram[i][j]
        prefix = "" if len(lattices) == 1 else f"{idx}."
        labels.extend(prefix + s for s in l.labels)
        off += l.rank
    return GramLattice(tuple(map(tuple, gram)), tuple(labels), name)


def rescale(lattice: GramLattice, n: int) -> GramLattice:
    gram = tuple(tuple(n * x for x in row) for row in lattice.gram)
    name = f"{lattice.name}({n})" if lattice.name else None
    return GramLattice(gram, lattice.labels, name)


def standard_lattice(spec: str) -> GramLattice:
    """Build a lattice from a compact text spec.

    Terms are joined with '+': U, U(n), <m>, Ak, Dk, E8 (root lattices in
    the negative definite convention), each optionally followed by ^k.
    Example: "U(2)^3+<-2>^16".
    """
    parts = []
    for term in spec.replace(" ", "").split("+"):
        if not term:
            raise K3latError(f"empty term in lattice spec {spec!r}")
        power = 1
        if "^" in term:
            term, p = term.split("^", 1)
            power = int(p)
        if term == "U":
            base = hyperbolic_u()
        elif term.startswith("U(") and term.endswith(")"):
            base = hyperbolic_u(int(term[2:-1]))
        elif term.startswith("<") and term.endswith(">"):
            base = rank_one(int(term[1:-1]))
        elif term == "E8":
            base = e8_negative()
        elif term.startswith("A"):
            base = a_lattice(int(term[1:]))
        elif term.startswith("D"):
            base = d_lattice(int(term[1:]))
        else:
            raise K3latError(f"unknown lattice name {term!r}")
        parts.extend([base] * power)
    out = parts[0] if len(parts) == 1 else direct_sum(*parts)
    return out.renamed(spec)


# ---------------------------------------------------------------------------
# lattice file format


def lattice_to_json(lattice: GramLattice, glue=None) -> str:
    """Canonical JSON document: fields name, labels, gram, optional glue."""
    doc = {
        "name": lattice.name,
        "labels": list(lattice.labels),
        "gram": [list(row) for row in lattice.gram],
    }
    if glue:
        doc["glue"] = [[str(Fraction(x)) for x in _coords(v)] for v in glue]
    return json.dumps(doc, indent=1) + "\n"


def lattice_from_json(text: str) -> tuple[GramLattice, list[tuple[Fraction, ...]]]:
    doc = json.loads(text)
    lat = GramLattice(tuple(tuple(int(x) for x in row) for row in doc["gram"]),
                      tuple(doc["labels"]), doc.get("name"))
    glue = [tuple(Fraction(s) for s in row) for row in doc.get("glue", [])]
    return lat, glue


def write_lattice_file(path, lattice: GramLattice, glue=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(lattice_to_json(lattice, glue))


def read_lattice_file(path) -> tuple[GramLattice, list[tuple[Fraction, ...]]]:
    with open(path, encoding="utf-8") as fh:
        return lattice_from_json(fh.read())
