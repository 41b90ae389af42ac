"""Integer matrix algorithms: Smith normal form and saturated kernels.

Matrices here are plain lists of lists of Python ints.  The Smith form
returns unimodular U, V with U @ m @ V = D, D diagonal with
d1 | d2 | ... and nonnegative entries.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def det_int(mat) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(r) for r in mat]
    sign, prev = 1, 1
    for c in range(n - 1):
        piv = -1
        for i in range(c, n):
            if m[i][c] != 0:
                piv = i
                break
        if piv < 0:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[c][c] * m[i][j] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def is_unimodular(mat) -> bool:
    return len(mat) == len(mat[0]) and det_int(mat) in (1, -1)


def _xgcd(a, b):
    a0, b0 = a, b
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    assert a == x0 * a0 + y0 * b0
    return a, x0, y0


class _Worker:
    def __init__(self, mat):
        self.nr = len(mat)
        self.nc = len(mat[0]) if self.nr else 0
        self.A = [[int(x) for x in row] for row in mat]
        self.U = _identity(self.nr)
        self.V = _identity(self.nc)

    def row_combine(self, i, j, a, b, c, d):
        # (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j)
        for M in (self.A, self.U):
            ri, rj = M[i], M[j]
            M[i] = [a * x + b * y for x, y in zip(ri, rj)]
            M[j] = [c * x + d * y for x, y in zip(ri, rj)]

    def col_combine(self, i, j, a, b, c, d):
        for M in (self.A, self.V):
            for r in M:
                x, y = r[i], r[j]
                r[i] = a * x + b * y
                r[j] = c * x + d * y

    def negate_row(self, i):
        for M in (self.A, self.U):
            M[i] = [-x for x in M[i]]

    def diagonalize(self, start=0):
        A = self.A
        t = start
        while t < min(self.nr, self.nc):
            # smallest-magnitude pivot keeps the Bezout steps short
            pos = None
            for i in range(t, self.nr):
                for j in range(t, self.nc):
                    if A[i][j] and (pos is None
                                    or abs(A[i][j]) < abs(A[pos[0]][pos[1]])):
                        pos = (i, j)
            if pos is None:
                break
            if pos[0] != t:
                self.row_combine(t, pos[0], 0, 1, 1, 0)
            if pos[1] != t:
                self.col_combine(t, pos[1], 0, 1, 1, 0)
            while True:
                dirty = False
                for i in range(t + 1, self.nr):
                    if A[i][t]:
                        a, b = A[t][t], A[i][t]
                        if b % a == 0:
                            # plain elimination keeps the pivot row fixed
                            self.row_combine(t, i, 1, 0, -(b // a), 1)
                        else:
                            g, x, y = _xgcd(a, b)
                            self.row_combine(t, i, x, y, -(b // g), a // g)
                        dirty = True
                for j in range(t + 1, self.nc):
                    if A[t][j]:
                        a, b = A[t][t], A[t][j]
                        if b % a == 0:
                            self.col_combine(t, j, 1, 0, -(b // a), 1)
                        else:
                            g, x, y = _xgcd(a, b)
                            self.col_combine(t, j, x, y, -(b // g), a // g)
                        dirty = True
                if not dirty:
                    break
            t += 1


def _fix_2x2(w, t):
    """Turn a folded diagonal pair [[a, a], [0, b]] with a not dividing
    b into diag(gcd, +-lcm), by operations confined to rows/cols
    t, t+1."""
    A = w.A
    a, b = A[t][t], A[t + 1][t + 1]
    g, x, y = _xgcd(a, b)
    w.row_combine(t, t + 1, x, y, -(b // g), a // g)
    # state [[x a, g], [-ab/g, 0]]; clear the corner with the gcd
    m = A[t][t] // A[t][t + 1]
    w.col_combine(t, t + 1, 1, -m, 0, 1)   # col_t -= m col_{t+1}
    w.col_combine(t, t + 1, 0, 1, 1, 0)    # swap columns t, t+1


def smith_normal_form(mat):
    """Smith normal form of an integer matrix.

    Returns (U, D, V) with U (rows x rows) and V (cols x cols)
    unimodular, U m V = D diagonal, entries nonnegative with each
    dividing the next.
    """
    w = _Worker(mat)
    w.diagonalize(0)
    n = min(w.nr, w.nc)
    # bubble divisibility: each local fix replaces a diagonal pair with
    # its gcd and lcm, strictly shrinking the partial products
    changed = True
    while changed:
        changed = False
        for t in range(n - 1):
            a, b = w.A[t][t], w.A[t + 1][t + 1]
            if a == 0 and b != 0:
                w.row_combine(t, t + 1, 0, 1, 1, 0)
                w.col_combine(t, t + 1, 0, 1, 1, 0)
                changed = True
            elif a != 0 and b % a != 0:
                w.col_combine(t, t + 1, 1, 0, 1, 1)  # col_{t+1} += col_t
                _fix_2x2(w, t)
                changed = True
    for t in range(n):
        if w.A[t][t] < 0:
            w.negate_row(t)
    D = [[w.A[i][j] if i == j else 0 for j in range(w.nc)]
         for i in range(w.nr)]
    assert w.A == D, "Smith reduction left off-diagonal entries"
    return w.U, D, w.V


def smith_diagonal(mat):
    U, D, V = smith_normal_form(mat)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def integer_kernel(mat):
    """Basis of {x in Z^n : mat @ x = 0}, saturated (a basis of the full
    kernel lattice), via the Smith form."""
    nr = len(mat)
    nc = len(mat[0]) if nr else 0
    if nr == 0:
        return [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]
    U, D, V = smith_normal_form(mat)
    rank = sum(1 for i in range(min(nr, nc)) if D[i][i] != 0)
    return [[V[i][j] for i in range(nc)] for j in range(rank, nc)]


def hermite_row(mat):
    """Row Hermite normal form over Z.

    Unimodular row operations only, so the row lattice is preserved;
    pivots are positive with the entries above them reduced into
    [0, pivot).  Zero rows are dropped: the result is the canonical
    basis of the integer row lattice.
    """
    rows = [list(r) for r in mat if any(r)]
    if not rows:
        return []
    nc = len(rows[0])
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                a, b = rows[r][c], rows[i][c]
                g, x, y = _xgcd(a, b)
                new_r = [x * p + y * q for p, q in zip(rows[r], rows[i])]
                new_i = [-(b // g) * p + (a // g) * q
                         for p, q in zip(rows[r], rows[i])]
                rows[r], rows[i] = new_r, new_i
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        for i in range(r):
            q = rows[i][c] // rows[r][c]
            if q:
                rows[i] = [p - q * s for p, s in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return rows[:r]


def rational_rows_to_integer(rows):
    """Scale each rational row to a primitive integer row."""
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in row]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g > 1:
            ints = [x // g for x in ints]
        out.append(ints)
    return out


def minor_gcd_diagonal(mat):
    """Oracle for Smith invariants: d_1 * ... * d_k equals the gcd of
    all k x k minors.  Exponential; intended for sizes <= 4."""
    from itertools import combinations

    nr = len(mat)
    nc = len(mat[0]) if nr else 0
    diag = []
    prev = 1
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for rows in combinations(range(nr), k):
            for cols in combinations(range(nc), k):
                sub = [[mat[i][j] for j in cols] for i in rows]
                g = gcd(g, det_int(sub))
        if g == 0:
            break
        diag.append(g // prev)
        prev = g
    while len(diag) < min(nr, nc):
        diag.append(0)
    return diag
