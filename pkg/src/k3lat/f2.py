"""Finite geometry over F_2^4 and bitset GF(2) linear algebra.

Points of F_2^4 are 4-tuples over {0,1}, kept in lexicographic order;
subsets are 16-bit masks indexed by that order.
"""

from __future__ import annotations

import itertools

F2Point = tuple  # 4-tuple of 0/1

ALL_POINTS: list[F2Point] = [tuple(p) for p in itertools.product((0, 1), repeat=4)]
POINT_INDEX = {p: i for i, p in enumerate(ALL_POINTS)}

ALPHA = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]


def point_index(p: F2Point) -> int:
    return POINT_INDEX[tuple(p)]


def point_label(p: F2Point) -> str:
    return "".join(str(x) for x in p)


def mask_of(points) -> int:
    m = 0
    for p in points:
        m |= 1 << point_index(p)
    return m


def points_of(mask: int) -> list[F2Point]:
    return [ALL_POINTS[i] for i in range(16) if (mask >> i) & 1]


def mask_size(mask: int) -> int:
    return bin(mask).count("1")


def hyperplane(alpha: F2Point, eps: int) -> int:
    """Mask of the affine hyperplane {x : alpha.x = eps}; alpha nonzero."""
    if not any(alpha):
        raise ValueError("hyperplane normal must be nonzero")
    m = 0
    for i, p in enumerate(ALL_POINTS):
        if sum(a * x for a, x in zip(alpha, p)) % 2 == eps:
            m |= 1 << i
    return m


def all_hyperplanes() -> list[int]:
    """The 30 affine hyperplanes (8 points each)."""
    out = []
    for alpha in ALL_POINTS[1:]:
        for eps in (0, 1):
            out.append(hyperplane(alpha, eps))
    return out


def span_mask(vectors) -> int:
    """Mask of the linear span of the given points."""
    pts = {(0, 0, 0, 0)}
    for _ in range(4):
        new = set(pts)
        for v in vectors:
            for p in pts:
                new.add(tuple((a + b) % 2 for a, b in zip(p, v)))
        pts = new
    return mask_of(pts)


def v_plane(i: int, j: int) -> int:
    """The linear plane V_{i,j} = span(alpha_i, alpha_j), 1-based indices."""
    return span_mask([ALPHA[i - 1], ALPHA[j - 1]])


def linear_planes() -> list[int]:
    """The 35 two-dimensional linear subspaces."""
    seen = set()
    for a, b in itertools.combinations(ALL_POINTS[1:], 2):
        m = span_mask([a, b])
        if mask_size(m) == 4:
            seen.add(m)
    return sorted(seen)


def affine_planes() -> list[int]:
    """All 2-dimensional affine subspaces (cosets of linear planes)."""
    seen = set()
    for lin in linear_planes():
        pts = points_of(lin)
        for t in ALL_POINTS:
            coset = mask_of(tuple((a + b) % 2 for a, b in zip(p, t)) for p in pts)
            seen.add(coset)
    return sorted(seen)


def star(v: int, w: int) -> int:
    """V * V' = (V u V') - (V n V'), as masks this is the symmetric difference."""
    return v ^ w


def gf2_kernel(columns: list[int], nbits: int) -> list[int]:
    """Kernel of the map F_2^k -> F_2^nbits, subset mask -> xor of columns.

    columns[i] is the bitmask image of basis vector i; returns masks (over
    the k inputs) forming a basis of the kernel.
    """
    k = len(columns)
    rows = [(columns[i], 1 << i) for i in range(k)]  # (image, preimage tracker)
    basis: list[tuple[int, int]] = []
    kernel: list[int] = []
    for img, pre in rows:
        for bimg, bpre in basis:
            low = bimg & -bimg
            if img & low:
                img ^= bimg
                pre ^= bpre
        if img:
            basis.append((img, pre))
            basis.sort(key=lambda t: t[0] & -t[0])
        else:
            kernel.append(pre)
    return kernel


def gf2_span(generators: list[int]) -> list[int]:
    """All elements of the GF(2) span of the given masks (incl. zero)."""
    span = {0}
    for g in generators:
        span |= {x ^ g for x in span}
    return sorted(span)
