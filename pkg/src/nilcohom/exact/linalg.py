"""Exact dense linear algebra over any of the scalar fields.

Matrices act on column vectors.  Two independent elimination routines
are provided: ``rref`` (Gauss-Jordan with exact division) drives all
rank/kernel computations, and ``rank_fraction_free`` is a Bareiss-style
one-step fraction-free elimination with largest-numerator pivoting,
kept as a cross-checking oracle.

``Subspace`` stores a canonical reduced-row-echelon basis, so equality
of subspaces is plain equality of bases.
"""

from __future__ import annotations

from .fields import _inv


class Matrix:
    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows, ncols=None):
        rows = [tuple(field.coerce(x) for x in r) for r in rows]
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
        elif ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, field, n):
        one, zero = field.one(), field.zero()
        return cls(field, [[one if i == j else zero for j in range(n)]
                           for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, field, nrows, ncols):
        zero = field.zero()
        return cls(field, [[zero] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def from_columns(cls, field, cols, nrows=None):
        if cols:
            nrows = len(cols[0])
        elif nrows is None:
            raise ValueError("empty column list needs a row count")
        return cls(field, [[c[i] for c in cols] for i in range(nrows)],
                   ncols=len(cols))

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        return Matrix(self.field, [self.column(j) for j in range(self.ncols)],
                      ncols=self.nrows)

    def apply(self, vec):
        if len(vec) != self.ncols:
            raise ValueError("dimension mismatch")
        vec = [self.field.coerce(x) for x in vec]
        zero = self.field.zero()
        return tuple(sum((r[j] * vec[j] for j in range(self.ncols)), zero)
                     for r in self.rows)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        zero = self.field.zero()
        ocols = other.columns()
        return Matrix(self.field,
                      [[sum((r[k] * c[k] for k in range(self.ncols)), zero)
                        for c in ocols] for r in self.rows],
                      ncols=other.ncols)

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return Matrix(self.field,
                      [[a + b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.rows, other.rows)],
                      ncols=self.ncols)

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return Matrix(self.field,
                      [[a - b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.rows, other.rows)],
                      ncols=self.ncols)

    def __neg__(self):
        return Matrix(self.field, [[-x for x in r] for r in self.rows],
                      ncols=self.ncols)

    def scale(self, c):
        c = self.field.coerce(c)
        return Matrix(self.field, [[x * c for x in r] for r in self.rows],
                      ncols=self.ncols)

    def augment(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix(self.field,
                      [r1 + r2 for r1, r2 in zip(self.rows, other.rows)],
                      ncols=self.ncols + other.ncols)

    def is_zero(self):
        return all(not x for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"


def rref(m: Matrix):
    """Reduced row echelon form.

    Returns (reduced matrix, rank, pivot column tuple).  Pivot rows are
    picked by the field's pivot key (largest rational numerator first),
    which is a deterministic tie-break; results are exact either way.
    """
    field = m.field
    rows = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    pivots = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        best, best_key = -1, -1
        for i in range(r, nr):
            if rows[i][c]:
                key = field.pivot_key(rows[i][c])
                if key > best_key:
                    best, best_key = i, key
        if best < 0:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        inv = _inv(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return Matrix(field, rows, ncols=nc), r, tuple(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[1]


def kernel_basis(m: Matrix):
    """Basis of the right kernel, one vector per free column, ordered by
    free column index."""
    field = m.field
    red, rk, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivot_set]
    zero, one = field.zero(), field.one()
    basis = []
    for j in free:
        v = [zero] * m.ncols
        v[j] = one
        for i, pc in enumerate(pivots):
            v[pc] = -red.rows[i][j]
        basis.append(tuple(v))
    return basis


def rank_fraction_free(m: Matrix) -> int:
    """Bareiss one-step fraction-free elimination; rank oracle
    independent of :func:`rref`.

    Pivot selection prefers the largest pivot key in the current
    column, falling back to first-nonzero for fields without a
    meaningful key.
    """
    field = m.field
    rows = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    prev = field.one()
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        best, best_key = -1, -1
        for i in range(r, nr):
            if rows[i][c]:
                key = field.pivot_key(rows[i][c])
                if key > best_key:
                    best, best_key = i, key
        if best < 0:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][c]
        inv_prev = _inv(prev)
        for i in range(r + 1, nr):
            fi = rows[i][c]
            rows[i] = [(piv * rows[i][j] - fi * rows[r][j]) * inv_prev
                       for j in range(nc)]
        prev = piv
        r += 1
    return r


def solve(m: Matrix, vec):
    """One solution x of m x = vec, or None if inconsistent."""
    field = m.field
    aug = m.augment(Matrix.from_columns(field, [list(vec)], nrows=m.nrows))
    red, rk, pivots = rref(aug)
    if m.ncols in pivots:
        return None
    zero = field.zero()
    x = [zero] * m.ncols
    for i, pc in enumerate(pivots):
        x[pc] = red.rows[i][m.ncols]
    return tuple(x)


def invert(m: Matrix) -> Matrix:
    if m.nrows != m.ncols:
        raise ValueError("only square matrices invert")
    n = m.nrows
    red, rk, pivots = rref(m.augment(Matrix.identity(m.field, n)))
    if any(p >= n for p in pivots[:n]) or len(pivots) < n \
            or pivots[n - 1] >= n:
        raise ValueError("matrix is singular")
    return Matrix(m.field, [r[n:] for r in red.rows], ncols=n)


class Subspace:
    """A subspace of field^n with a canonical RREF basis."""

    __slots__ = ("field", "ambient_dim", "basis", "_pivots")

    def __init__(self, field, ambient_dim, vectors):
        vectors = [v for v in vectors]
        if vectors:
            red, rk, piv = rref(Matrix(field, vectors, ncols=ambient_dim))
            basis = tuple(red.rows[i] for i in range(rk))
        else:
            basis, piv = (), ()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_pivots", piv)

    def __setattr__(self, *a):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def zero(cls, field, n):
        return cls(field, n, [])

    @classmethod
    def full(cls, field, n):
        return cls(field, n, Matrix.identity(field, n).rows)

    @property
    def dim(self):
        return len(self.basis)

    def matrix(self) -> Matrix:
        return Matrix(self.field, list(self.basis), ncols=self.ambient_dim)

    def contains(self, vec) -> bool:
        vec = [self.field.coerce(x) for x in vec]
        for i, pc in enumerate(self._pivots):
            if vec[pc]:
                f = vec[pc]
                vec = [a - f * b for a, b in zip(vec, self.basis[i])]
        return not any(vec)

    def coords(self, vec):
        """Coordinates of vec in the canonical basis, or None."""
        vec = [self.field.coerce(x) for x in vec]
        out = []
        for i, pc in enumerate(self._pivots):
            f = vec[pc]
            out.append(f)
            if f:
                vec = [a - f * b for a, b in zip(vec, self.basis[i])]
        if any(vec):
            return None
        return tuple(out)

    def __le__(self, other):
        return all(other.contains(v) for v in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def sum_(self, other):
        return Subspace(self.field, self.ambient_dim,
                        list(self.basis) + list(other.basis))

    def intersect(self, other):
        if not self.basis or not other.basis:
            return Subspace.zero(self.field, self.ambient_dim)
        cols = [list(v) for v in self.basis] + [list(v) for v in other.basis]
        big = Matrix.from_columns(self.field, cols, nrows=self.ambient_dim)
        vecs = []
        k = len(self.basis)
        zero = self.field.zero()
        for ker in kernel_basis(big):
            v = [zero] * self.ambient_dim
            for i in range(k):
                if ker[i]:
                    v = [a + ker[i] * b for a, b in zip(v, self.basis[i])]
            vecs.append(v)
        return Subspace(self.field, self.ambient_dim, vecs)

    def annihilator(self):
        """Functionals (as vectors of the dual) vanishing on this
        subspace."""
        if not self.basis:
            return Subspace.full(self.field, self.ambient_dim)
        return Subspace(self.field, self.ambient_dim,
                        kernel_basis(self.matrix()))

    def image_under(self, m: Matrix):
        return Subspace(m.field, m.nrows, [m.apply(v) for v in self.basis])

    def preimage_under(self, m: Matrix):
        """{x : m x in self} as a subspace of the domain."""
        ann = self.annihilator()
        if not ann.basis:
            return Subspace.full(m.field, m.ncols)
        proj = ann.matrix() * m
        return Subspace(m.field, m.ncols, kernel_basis(proj))

    def extend_basis_within(self, other):
        """Vectors of ``other`` extending this subspace's basis to a
        basis of ``other`` (self must be contained in other)."""
        chosen = list(self.basis)
        out = []
        cur = self
        for v in other.basis:
            if not cur.contains(v):
                chosen.append(v)
                out.append(v)
                cur = Subspace(self.field, self.ambient_dim, chosen)
        return out

    def __repr__(self):
        return f"Subspace(dim={self.dim} of {self.ambient_dim})"
