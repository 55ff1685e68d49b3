"""Exact integer and rational matrix kernels.

Everything here works on plain lists of lists holding Python ints or
Fractions, so all results are exact; there is deliberately no floating
point anywhere in the package.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import DegenerateError

Matrix = list  # list of rows


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Matrix, v) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vec_mat(v, a: Matrix) -> list:
    return [sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0]))]


def dot(u, v, gram: Matrix):
    """u^T . gram . v"""
    acc = 0
    for i, ui in enumerate(u):
        if ui:
            row = gram[i]
            acc += ui * sum(row[j] * v[j] for j in range(len(v)) if v[j])
    return acc


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(list(x) == list(y) for x, y in zip(a, b))


def bareiss_det(m: Matrix) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det_rational(m: Matrix) -> Fraction:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def invert_rational(m: Matrix) -> Matrix:
    """Exact inverse; raises DegenerateError when singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise DegenerateError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def solve_rational(m: Matrix, b: list) -> list | None:
    """One exact solution of m.x = b, or None when inconsistent."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(m)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if a[i][cols]:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = a[i][cols]
    return x


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q with pivot column indices."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[Fraction(x) for x in row] for row in m]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def kernel_rational(m: Matrix) -> list[list[Fraction]]:
    """Basis of the right kernel {x : m.x = 0} over Q."""
    cols = len(m[0]) if m else 0
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        basis.append(v)
    return basis


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, s, t with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _hnf_with_transform(m: Matrix) -> tuple[Matrix, Matrix]:
    """Row Hermite form H of m with a unimodular U such that U.m = H.

    Column entries are killed by single Bezout row combinations (bounded
    cofactors) rather than repeated euclidean exchanges, and every touched
    row is immediately re-reduced against the earlier pivots; both are
    needed to keep the intermediate integers from exploding.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[int(x) for x in row] for row in m]
    u = identity(rows)
    pivots: list[tuple[int, int]] = []  # (row, col) of settled pivots

    def reduce_row(i: int) -> None:
        for pr, pc in pivots:
            if a[i][pc]:
                q = a[i][pc] // a[pr][pc]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[pr])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[pr])]

    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if a[i][c] and (piv is None or abs(a[i][c]) < abs(a[piv][c])):
                piv = i
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, rows):
            if not a[i][c]:
                continue
            x, y = a[r][c], a[i][c]
            if y % x == 0:
                q = y // x
                a[i] = [p - q * t for p, t in zip(a[i], a[r])]
                u[i] = [p - q * t for p, t in zip(u[i], u[r])]
            else:
                g, s, t = _xgcd(x, y)
                xg, yg = x // g, y // g
                ar, ai = a[r], a[i]
                a[r] = [s * p + t * q for p, q in zip(ar, ai)]
                a[i] = [-yg * p + xg * q for p, q in zip(ar, ai)]
                ur, ui = u[r], u[i]
                u[r] = [s * p + t * q for p, q in zip(ur, ui)]
                u[i] = [-yg * p + xg * q for p, q in zip(ur, ui)]
            reduce_row(i)
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        pivots.append((r, c))
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
        if r == rows:
            break
    return a, u


def _is_diagonal(a: Matrix) -> bool:
    return all(x == 0 for i, row in enumerate(a) for j, x in enumerate(row) if i != j)


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form with transforms: U.m.V = D.

    U and V are unimodular; D is diagonal with nonnegative entries in a
    divisibility chain d1 | d2 | ... (zeros last).  Diagonalization is by
    alternating row and column Hermite passes, whose reduced entries stay
    bounded by minors of m; a naive gcd cascade blows up on matrices as
    small as 16 x 16.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[int(x) for x in row] for row in m]
    u = identity(rows)
    v = identity(cols)
    for _ in range(10000):
        if _is_diagonal(a):
            break
        a, r = _hnf_with_transform(a)
        u = mat_mul(r, u)
        if _is_diagonal(a):
            break
        at, c = _hnf_with_transform(transpose(a))
        a = transpose(at)
        v = mat_mul(v, transpose(c))
    else:
        raise RuntimeError("smith normal form alternation failed to converge")

    def col_add(i, j, q):
        for row in a:
            row[i] += q * row[j]
        for row in v:
            row[i] += q * row[j]

    def row_add(i, j, q):
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    # zeros last, then the divisibility chain via 2x2 gcd steps
    diag = min(rows, cols)
    pos = 0
    for i in range(diag):
        if a[i][i]:
            if i != pos:
                swap_rows(pos, i)
                swap_cols(pos, i)
            pos += 1
    rank = pos
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            di, dj = a[i][i], a[i + 1][i + 1]
            if dj % di != 0:
                col_add(i, i + 1, 1)
                while True:
                    if a[i + 1][i]:
                        q = a[i + 1][i] // a[i][i]
                        row_add(i + 1, i, -q)
                        if a[i + 1][i]:
                            swap_rows(i, i + 1)
                            continue
                    if a[i][i + 1]:
                        q = a[i][i + 1] // a[i][i]
                        col_add(i + 1, i, -q)
                        if a[i][i + 1]:
                            swap_cols(i, i + 1)
                            continue
                    break
                changed = True
    for i in range(rank):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    return u, a, v


def elementary_divisors(m: Matrix) -> list[int]:
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def inverse_unimodular(u: Matrix) -> Matrix:
    """Integer inverse of a unimodular integer matrix."""
    inv = invert_rational(u)
    out = []
    for row in inv:
        irow = []
        for x in row:
            if x.denominator != 1:
                raise DegenerateError("matrix is not unimodular")
            irow.append(int(x))
        out.append(irow)
    return out


def hnf_rows(rows: Matrix, width: int | None = None) -> Matrix:
    """Row Hermite normal form basis of the integer row span.

    Returns the nonzero rows: pivots positive, entries above each pivot
    reduced into [0, pivot).
    """
    if not rows:
        return []
    n = width if width is not None else len(rows[0])
    work = [[int(x) for x in row] for row in rows if any(row)]
    if not work:
        return []
    h, _ = _hnf_with_transform([row[:n] for row in work])
    return [row for row in h if any(row)]


def integer_kernel(m: Matrix) -> Matrix:
    """Basis rows of {x in Z^n : m.x^T = 0}; the result is saturated.

    Found as the rows of the Hermite transform of m^T that map onto zero
    rows; the transform only ever works across len(m) columns, so it stays
    cheap when the number of equations is small.  For corank-one kernels
    the basis comes straight from the rational kernel.
    """
    k = len(m)
    n = len(m[0]) if k else 0
    if k == 0:
        return identity(n)
    rat = kernel_rational(m)
    if not rat:
        return []
    if len(rat) == 1:
        denom = 1
        for x in rat[0]:
            denom = denom * x.denominator // _int_gcd(denom, x.denominator)
        v = [int(x * denom) for x in rat[0]]
        g = 0
        for x in v:
            g = _int_gcd(g, x)
        return [[x // g for x in v]]
    h, u = _hnf_with_transform(transpose(m))
    nonzero = sum(1 for row in h if any(row))
    return [u[i] for i in range(nonzero, n)]


def _int_gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def inertia(gram: Matrix) -> tuple[int, int]:
    """Signature (positive, negative) of a nondegenerate symmetric matrix.

    Exact congruence diagonalization over Q; raises DegenerateError when
    the form is degenerate.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    pos = neg = 0
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j]), None)
            if j is not None:
                for t in range(n):
                    a[k][t], a[j][t] = a[j][t], a[k][t]
                for t in range(n):
                    a[t][k], a[t][j] = a[t][j], a[t][k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j]), None)
                if j is None:
                    raise DegenerateError("degenerate symmetric form")
                for t in range(n):
                    a[k][t] += a[j][t]
                for t in range(n):
                    a[t][k] += a[t][j]
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            c = a[i][k] / d
            if c:
                for j in range(k + 1, n):
                    a[i][j] -= c * a[k][j]
        for i in range(k + 1, n):
            a[i][k] = Fraction(0)
            a[k][i] = Fraction(0)
    return pos, neg


def lll_gram(gram: Matrix) -> tuple[Matrix, Matrix]:
    """All-integer LLL reduction driven by a positive definite Gram matrix.

    Returns (U, G') with U unimodular and G' = U.gram.U^T reduced.  This is
    the classic fraction-free formulation that tracks the Gram-Schmidt data
    through the scaled integers lam[i][j] and the subdeterminants d[i], so
    every intermediate quantity is an exact integer.
    """
    n = len(gram)
    g = [[int(x) for x in row] for row in gram]
    u = identity(n)
    if n <= 1:
        return u, g
    lam = [[0] * n for _ in range(n)]
    d = [1] * (n + 1)

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            u[k] = [x - q * y for x, y in zip(u[k], u[l])]
            g[k] = [x - q * y for x, y in zip(g[k], g[l])]
            for t in range(n):
                g[t][k] -= q * g[t][l]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        u[k], u[k - 1] = u[k - 1], u[k]
        g[k], g[k - 1] = g[k - 1], g[k]
        for r in g:
            r[k], r[k - 1] = r[k - 1], r[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lam_ = lam[k][k - 1]
        b = (d[k - 1] * d[k + 1] + lam_ * lam_) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lam_ * t) // d[k]
            lam[i][k - 1] = (b * t + lam_ * lam[i][k]) // d[k + 1]
        d[k] = b

    k = 1
    kmax = 0
    d[1] = g[0][0]
    if d[1] <= 0:
        raise DegenerateError("gram matrix is not positive definite")
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                val = g[k][j]
                for i in range(j):
                    val = (d[i + 1] * val - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = val
                else:
                    if val <= 0:
                        raise DegenerateError("gram matrix is not positive definite")
                    d[k + 1] = val
        while True:
            red(k, k - 1)
            if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] ** 2:
                swap(k, kmax)
                k = max(1, k - 1)
            else:
                for l in range(k - 2, -1, -1):
                    red(k, l)
                k += 1
                break
    return u, g


def floor_sqrt_fraction(f: Fraction) -> int:
    """floor(sqrt(f)) for f >= 0."""
    if f < 0:
        raise ValueError("negative radicand")
    p, q = f.numerator, f.denominator
    return isqrt(p * q) // q
