"""Constructors and verifiers for the named lattices of the Kummer circle:
the rank-16 lattice K spanned by the sixteen exceptional curves, the
rank-8 Nikulin lattice, the rank-15 quotient lattice M_G, the rank-17
Neron-Severi lattices K'_4d, the rank-16 quotient NS lattices, the glued
rank-22 K3 lattice, the invariant-complement lattice Omega, and the
transcendental lattices of each family.

All glue recipes are half-sums of exceptional classes over subsets of
F_2^4; subsets are handled as bitmasks via the f2 module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import exact, f2
from .errors import K3latError
from .finiteform import FiniteQuadraticForm, discriminant_form, forms_isomorphic, q_census
from .lattice import (
    Embedding,
    GramLattice,
    OverlatticeResult,
    diagonal_lattice,
    direct_sum,
    discriminant_group,
    hyperbolic_u,
    invariants,
    orthogonal_complement,
    overlattice,
    rank_one,
    saturation,
    sublattice_span,
)

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# glue recipes over F_2^4


def _half_sum(mask: int, size: int, offset: int = 0) -> list[Fraction]:
    """Ambient vector (1/2) * sum of the unit classes indexed by mask."""
    v = [Fraction(0)] * size
    for i in range(size - offset):
        if (mask >> i) & 1:
            v[offset + i] = HALF
    return v


def kummer_glue_masks() -> list[int]:
    """Supports of the five standard glue classes of K: the full set and
    the four hyperplanes {a_i = 0}."""
    masks = [f2.mask_of(f2.ALL_POINTS)]
    for i in range(4):
        masks.append(f2.hyperplane(f2.ALPHA[i], 0))
    return masks


def mg_glue_masks() -> list[int]:
    """Supports (in the 15 nonzero points) of the four M_G glue classes:
    the hyperplanes {a_i = 1}, none of which contains (0,0,0,0)."""
    return [f2.hyperplane(f2.ALPHA[i], 1) for i in range(4)]


def v4d_support(d: int) -> int:
    """Support of the glue partner v of H in K'_4d, by the parity of d."""
    v12 = f2.v_plane(1, 2)
    if d % 2 == 0:
        return v12
    return f2.star(v12, f2.v_plane(3, 4))


NSY_W_SUPPORT = {
    "i": ((1, 1, 0, 1), (1, 1, 1, 0), (1, 1, 1, 1), (1, 0, 0, 0), (0, 1, 0, 0)),
    "ii": ((0, 0, 0, 1), (0, 0, 1, 0), (0, 0, 1, 1), (1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)),
    "iii": ((0, 0, 0, 1), (0, 0, 1, 0), (0, 0, 1, 1)),
    "iv": tuple(f2.ALL_POINTS[1:]),
    "v": ((1, 1, 0, 0), (1, 1, 1, 0), (1, 1, 0, 1), (1, 1, 1, 1)),
}


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class GluedModel:
    """A lattice built by gluing, with distinguished classes by name.

    Class coordinates are in the basis of .lattice; the ambient (pre-glue)
    coordinates stay available through .over.
    """

    over: OverlatticeResult
    classes: dict

    @property
    def lattice(self) -> GramLattice:
        return self.over.lattice

    def class_vector(self, name: str) -> tuple[int, ...]:
        return self.classes[name]

    def curve(self, p) -> tuple[int, ...]:
        return self.classes[f2.point_label(p)]


def _curve_classes(over: OverlatticeResult, points, offset: int) -> dict:
    out = {}
    n = over.base.rank
    for k, p in enumerate(points):
        unit = [0] * n
        unit[offset + k] = 1
        coords = over.coords_of(unit)
        if coords is None:
            raise K3latError("exceptional class fell outside the glued lattice")
        out[f2.point_label(p)] = coords
    return out


def kummer_lattice() -> GluedModel:
    """Rank-16 lattice of the sixteen disjoint (-2)-curves on a Kummer
    surface, glued by half-sums over the full set and four hyperplanes."""
    base = diagonal_lattice([-2] * 16, "K.base",
                            labels=[f"K{f2.point_label(p)}" for p in f2.ALL_POINTS])
    glue = [_half_sum(m, 16) for m in kummer_glue_masks()]
    over = overlattice(base, glue, name="K")
    classes = _curve_classes(over, f2.ALL_POINTS, 0)
    return GluedModel(over, classes)


def kummer_contains_half_sum(model: GluedModel, mask: int) -> bool:
    return model.over.contains(_half_sum(mask, 16))


def kummer_dual_contains_half_sum(model: GluedModel, mask: int) -> bool:
    return model.over.dual_contains(_half_sum(mask, 16))


def nikulin_lattice() -> GluedModel:
    """Rank-8 lattice of eight disjoint (-2)-curves glued by half their sum."""
    base = diagonal_lattice([-2] * 8, "N.base", labels=[f"N{i+1}" for i in range(8)])
    over = overlattice(base, [[HALF] * 8], name="N")
    classes = {f"N{i+1}": over.coords_of([1 if j == i else 0 for j in range(8)])
               for i in range(8)}
    return GluedModel(over, classes)


def mg_lattice() -> GluedModel:
    """Rank-15 lattice of the fifteen quotient (-2)-curves, glued by
    half-sums over the four hyperplanes missing the origin."""
    points = f2.ALL_POINTS[1:]
    base = diagonal_lattice([-2] * 15, "MG.base",
                            labels=[f"M{f2.point_label(p)}" for p in points])
    glue = []
    for m in mg_glue_masks():
        v = [HALF if (m >> f2.point_index(p)) & 1 else Fraction(0) for p in points]
        glue.append(v)
    over = overlattice(base, glue, name="MG")
    classes = _curve_classes(over, points, 0)
    return GluedModel(over, classes)


def mg_from_complement() -> tuple[GramLattice, Embedding, GluedModel]:
    """M_G realized inside K as the complement of the curve at the origin."""
    km = kummer_lattice()
    origin = km.curve((0, 0, 0, 0))
    emb = orthogonal_complement(km.lattice, sublattice_span(km.lattice, [origin]))
    return emb.sub, emb, km


def matching_root_isometry(a: GramLattice, b: GramLattice):
    """Isometry between two lattices spanned by orthogonal (-2)-roots plus
    half-sum glue, found by identifying their even-set codes.

    Both lattices must contain exactly 15 roots up to sign whose even-set
    code is a 4-dimensional all-weight-8 code.  Returns an integer matrix T
    with rows the images of a's basis in b's basis, satisfying
    T . gram_b . T^T = gram_a.
    """
    from .shortvec import enumerate_vectors

    def code_data(lat: GramLattice):
        roots = enumerate_vectors(lat, -2)
        k = len(roots)
        cols = []
        for r in roots:
            cols.append(sum((x & 1) << i for i, x in enumerate(r)))
        kernel = f2.gf2_kernel(cols, lat.rank)
        return roots, kernel

    roots_a, ker_a = code_data(a)
    roots_b, ker_b = code_data(b)
    if len(roots_a) != len(roots_b) or len(ker_a) != len(ker_b):
        return None

    def column_points(kernel, k):
        # column i of a generator matrix of the code, as an F2^dim vector
        return [tuple((kernel[row] >> i) & 1 for row in range(len(kernel)))
                for i in range(k)]

    cols_a = column_points(ker_a, len(roots_a))
    cols_b = column_points(ker_b, len(roots_b))
    if len(set(cols_a)) != len(cols_a) or set(cols_a) != set(cols_b):
        return None
    perm = [cols_b.index(c) for c in cols_a]
    ra = [list(r) for r in roots_a]
    rb = [list(roots_b[perm[i]]) for i in range(len(roots_a))]
    t = exact.mat_mul(exact.invert_rational(ra), rb)
    out = []
    for row in t:
        irow = []
        for x in row:
            if Fraction(x).denominator != 1:
                return None
            irow.append(int(x))
        out.append(irow)
    if abs(exact.bareiss_det(out)) != 1:
        return None
    check = exact.mat_mul(exact.mat_mul(out, b.gram_rows()), exact.transpose(out))
    if not exact.mat_eq(check, a.gram_rows()):
        return None
    return out


def k4d_prime(d: int) -> GluedModel:
    """Rank-17 Neron-Severi lattice of a degree-4d Kummer surface:
    <4d> + K glued by (H + v)/2 with the parity-dependent partner v."""
    if d < 1:
        raise K3latError("d must be a positive integer")
    labels = ["H"] + [f"K{f2.point_label(p)}" for p in f2.ALL_POINTS]
    base = direct_sum(rank_one(4 * d, "H"), diagonal_lattice([-2] * 16),
                      name=f"K4d.base(d={d})")
    base = GramLattice(base.gram, tuple(labels), base.name)
    glue = [_half_sum(m, 17, offset=1) for m in kummer_glue_masks()]
    hv = _half_sum(v4d_support(d), 17, offset=1)
    hv[0] = HALF
    glue.append(hv)
    over = overlattice(base, glue, name=f"K'_{4*d}")
    classes = _curve_classes(over, f2.ALL_POINTS, 1)
    h = over.coords_of([1] + [0] * 16)
    classes["H"] = h
    classes["half_sum"] = over.coords_of([Fraction(0)] + [HALF] * 16)
    return GluedModel(over, classes)


def divisible_class_census(d: int) -> dict[int, int]:
    """Counts, by support size, of the classes (H - sum_{p in J} K_p)/2
    lying in K'_4d; computed as a coset of the even-set code over GF(2)."""
    model = k4d_prime(d)
    code = f2.gf2_span(kummer_glue_masks())
    v = v4d_support(d)
    census: dict[int, int] = {}
    for s in code:
        j = s ^ v
        vec = [HALF] + [-HALF if (j >> i) & 1 else Fraction(0) for i in range(16)]
        if not model.over.contains(vec):
            raise K3latError("predicted divisible class is missing")
        size = f2.mask_size(j)
        census[size] = census.get(size, 0) + 1
    return dict(sorted(census.items()))


def nsy_case_for(d: int, case: str = "auto") -> str:
    if case == "auto":
        return {1: "i", 2: "ii", 3: "iii", 0: "v"}[d % 4]
    if case == "iv":
        if d % 4 != 3:
            raise K3latError("case iv requires d = 3 mod 4")
        return "iv"
    if case in NSY_W_SUPPORT:
        expected = {1: "i", 2: "ii", 3: "iii", 0: "v"}[d % 4]
        if case not in (expected, "iv"):
            raise K3latError(f"case {case} is illegal for d={d}")
        return case
    raise K3latError(f"unknown case {case!r}")


def nsy_lattice(d: int, case: str = "auto") -> GluedModel:
    """Rank-16 Neron-Severi lattice of a 15-nodal quotient surface:
    <2d> + M_G glued by (L + sum_{p in W} M_p)/2 with W fixed by d mod 4."""
    if d < 1:
        raise K3latError("d must be a positive integer")
    tag = nsy_case_for(d, case)
    points = f2.ALL_POINTS[1:]
    labels = ["L"] + [f"M{f2.point_label(p)}" for p in points]
    base = direct_sum(rank_one(2 * d, "L"), diagonal_lattice([-2] * 15),
                      name=f"NSY.base(d={d})")
    base = GramLattice(base.gram, tuple(labels), base.name)
    glue = []
    for m in mg_glue_masks():
        v = [Fraction(0)] + [HALF if (m >> f2.point_index(p)) & 1 else Fraction(0)
                             for p in points]
        glue.append(v)
    w = [HALF] + [HALF if p in NSY_W_SUPPORT[tag] else Fraction(0) for p in points]
    glue.append(w)
    over = overlattice(base, glue, name=f"NS_Y(2d={2*d},{tag})")
    classes = _curve_classes(over, points, 1)
    classes["L"] = over.coords_of([1] + [0] * 15)
    classes["case"] = tag
    return GluedModel(over, classes)


def nsy_expected_form(d: int, case: str) -> FiniteQuadraticForm:
    """The stated discriminant form of NS_Y: for case iv the mixed block
    on generators of orders (2, 2d), negated to the NS side; otherwise the
    discriminant form of U(2)+U(2)+<2>+<2d>."""
    u2 = discriminant_form(hyperbolic_u(2))
    if case == "iv":
        block = FiniteQuadraticForm(
            (2, 2 * d),
            ((Fraction(0), Fraction(1, 2)),
             (Fraction(1, 2), Fraction(-d - 1, 2 * d))),
        ).negate()
    else:
        block = FiniteQuadraticForm((2,), ((Fraction(-1, 2),),)).negate().direct_sum(
            FiniteQuadraticForm((2 * d,), ((Fraction(-1, 2 * d),),)).negate())
    return u2.direct_sum(u2).direct_sum(block)


def k3_lattice_glued() -> GluedModel:
    """The even unimodular rank-22 lattice glued from U(2)^3 + <-2>^16 by
    the five Kummer classes and the six mixed classes u_ij."""
    pairs = [(1, 2), (3, 4), (1, 3), (2, 4), (1, 4), (2, 3)]
    labels = [f"w{i}{j}" for i, j in pairs] + [f"K{f2.point_label(p)}" for p in f2.ALL_POINTS]
    base = direct_sum(hyperbolic_u(2), hyperbolic_u(2), hyperbolic_u(2),
                      diagonal_lattice([-2] * 16), name="Lambda.base")
    base = GramLattice(base.gram, tuple(labels), base.name)
    glue = [_half_sum(m, 22, offset=6) for m in kummer_glue_masks()]
    for k, (i, j) in enumerate(pairs):
        zero_set = [p for p in f2.ALL_POINTS if p[i - 1] == 0 and p[j - 1] == 0]
        v = _half_sum(f2.mask_of(zero_set), 22, offset=6)
        v[k] = HALF
        glue.append(v)
    over = overlattice(base, glue, name="Lambda_K3")
    classes = _curve_classes(over, f2.ALL_POINTS, 6)
    return GluedModel(over, classes)


@dataclass(frozen=True)
class OmegaResult:
    omega: GramLattice
    omega_embedding: Embedding
    l_lattice: GramLattice
    l_embedding: Embedding
    w_norm: int
    k4d: GluedModel


def omega_g(d: int) -> OmegaResult:
    """The rank-15 coinvariant lattice inside K'_4d, as the complement of
    the span of H and the half-sum class, together with the rank-16
    complement of the half-sum class alone."""
    model = k4d_prime(d)
    lat = model.lattice
    h = model.classes["H"]
    hs = model.classes["half_sum"]
    omega_emb = orthogonal_complement(lat, sublattice_span(lat, [h, hs]))
    l_emb = orthogonal_complement(lat, sublattice_span(lat, [hs]))
    # express omega inside the rank-16 complement and take its complement there
    l_rows = [list(r) for r in l_emb.rows]
    inside = []
    for row in omega_emb.rows:
        sol = exact.solve_rational(exact.transpose(l_rows), list(row))
        if sol is None or any(x.denominator != 1 for x in sol):
            raise K3latError("omega does not sit inside the half-sum complement")
        inside.append([int(x) for x in sol])
    w_emb = orthogonal_complement(l_emb.sub, Embedding(l_emb.sub, tuple(map(tuple, inside))))
    if len(w_emb.rows) != 1:
        raise K3latError("complement of omega should have rank one")
    w_norm = w_emb.sub.gram[0][0]
    return OmegaResult(omega_emb.sub, omega_emb, l_emb.sub, l_emb, w_norm, model)


def omega_reference_complement() -> GramLattice:
    """<-8> + U(2)^3, the invariant lattice orthogonal to omega."""
    return direct_sum(rank_one(-8), hyperbolic_u(2), hyperbolic_u(2),
                      hyperbolic_u(2), name="<-8>+U(2)^3")


@dataclass(frozen=True)
class MgOrbit:
    tag: str
    q: Fraction
    size: int
    representative_mask: int
    elements: tuple


def mg_discriminant_orbits() -> list[MgOrbit]:
    """The six orbits of the discriminant group of M_G, built from subset
    recipes over F_2^4 (full set, hyperplanes, planes, plane stars), with
    the value of q on each orbit."""
    model = mg_lattice()
    group = discriminant_group(model.lattice)
    form = discriminant_form(model.lattice)
    points = f2.ALL_POINTS[1:]
    origin_bit = 1

    def disc_class(mask: int):
        amb = [HALF if (mask >> f2.point_index(p)) & 1 else Fraction(0) for p in points]
        return group.class_of(model.over.rational_coords_of(amb))

    def strip_origin(mask: int) -> int:
        return mask & ~origin_bit

    full = f2.mask_of(points)
    hyper_in = [m for m in f2.all_hyperplanes() if m & origin_bit]
    hyper_out = [m for m in f2.all_hyperplanes() if not m & origin_bit]
    planes_lin = f2.linear_planes()
    planes_aff = [m for m in f2.affine_planes() if not m & origin_bit]
    stars_in, stars_out = [], []
    aff = f2.affine_planes()
    for v, w in itertools.combinations(aff, 2):
        if f2.mask_size(v & w) == 1:
            s = f2.star(v, w)
            (stars_in if s & origin_bit else stars_out).append(s)

    recipes = [
        ("1-2b", [full] + [strip_origin(m) for m in hyper_in], Fraction(1, 2)),
        ("2a", hyper_out, Fraction(0)),
        ("3a", planes_aff, Fraction(0)),
        ("3b", [strip_origin(m) for m in planes_lin], Fraction(1, 2)),
        ("4a", stars_out, Fraction(1)),
        ("4b", [strip_origin(m) for m in stars_in], Fraction(3, 2)),
    ]
    orbits = []
    for tag, masks, expected_q in recipes:
        classes = {}
        for m in masks:
            cls = disc_class(m)
            classes.setdefault(cls, m)
        for cls in classes:
            if form.q(cls) != expected_q and not (tag == "2a" and any(cls)):
                raise K3latError(f"orbit {tag} carries an unexpected q value")
        if tag == "2a":
            zero = tuple([0] * len(group.orders))
            if set(classes) != {zero}:
                raise K3latError("hyperplanes missing the origin must glue to zero")
        orbits.append(MgOrbit(tag, expected_q, len(classes), masks[0],
                              tuple(sorted(classes))))
    return orbits


def transcendental_lattice(family: str, param: int) -> GramLattice:
    """The stated transcendental lattice of each family.

    families: kummer(d), x-w1(t), x-w2(s), x-w3(u), y(d).
    """
    u2 = hyperbolic_u(2)
    if family == "kummer":
        return direct_sum(rank_one(-4 * param), u2, u2, name=f"T_Km(d={param})")
    if family == "x-w1":
        return direct_sum(rank_one(-8), rank_one(-4 * param), u2, u2,
                          name=f"T_X(w1,t={param})")
    if family == "x-w2":
        block = GramLattice(((-8, 4), (4, -4 * param)), ("g1", "g2"))
        return direct_sum(block, u2, u2, name=f"T_X(w2,s={param})")
    if family == "x-w3":
        block = GramLattice(((-8, 2), (2, -4 * param)), ("g1", "g2"))
        return direct_sum(block, u2, u2, name=f"T_X(w3,u={param})")
    if family == "y":
        return direct_sum(u2, u2, rank_one(-2), rank_one(-2 * param),
                          name=f"T_Y(d={param})")
    raise K3latError(f"unknown transcendental family {family!r}")


def transcendental_matches_ns(t_lattice: GramLattice, ns_lattice: GramLattice) -> bool:
    """q_T = -q_NS as finite quadratic forms."""
    ok, _ = forms_isomorphic(discriminant_form(t_lattice).negate(),
                             discriminant_form(ns_lattice))
    return ok


# ---------------------------------------------------------------------------
# reports


def named_lattice_report(name: str, lattice: GramLattice, expected: dict) -> dict:
    """Check a lattice against expected (rank, |det|, disc orders, census)."""
    inv = invariants(lattice)
    report = {"name": name, "rank": inv.rank, "signature": list(inv.signature),
              "det": inv.det, "abs_det": inv.abs_det, "even": inv.is_even,
              "verified": {}}
    if "rank" in expected:
        report["verified"]["rank"] = inv.rank == expected["rank"]
    if "abs_det" in expected:
        report["verified"]["abs_det"] = inv.abs_det == expected["abs_det"]
    if "signature" in expected:
        report["verified"]["signature"] = tuple(inv.signature) == tuple(expected["signature"])
    if "even" in expected:
        report["verified"]["even"] = inv.is_even == expected["even"]
    if "disc_orders" in expected:
        orders = discriminant_group(lattice).orders
        report["disc_orders"] = list(orders)
        report["verified"]["disc_orders"] = tuple(orders) == tuple(expected["disc_orders"])
    if "q_census" in expected:
        census = q_census(discriminant_form(lattice))
        report["q_census"] = {str(k): v for k, v in sorted(census.items())}
        report["verified"]["q_census"] = census == expected["q_census"]
    return report
