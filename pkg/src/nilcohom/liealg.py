"""Nilpotent Lie algebras from structure equations.

Structure equations come in the compact tuple notation: the k-th entry
lists the 2-form value of d on the k-th dual generator, e.g.
``(0,0,0,12,13,23)`` encodes d e^4 = e^1^e^2, d e^5 = e^1^e^3,
d e^6 = e^2^e^3 on a 6-dimensional algebra.  The sign convention fixed
throughout the package is

    d e^k (e_i, e_j) = - e^k([e_i, e_j]),

so entry "12" in position 4 means the structure constant c_{12}^4 = -1,
i.e. [e_1, e_2] = -e_4.  Cohomology dimensions do not depend on this
choice; fixing it makes every matrix in the package reproducible.

Indices are 0-based internally; the text format and all reported
witnesses are 1-based.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from .errors import ParseError, StructureError
from .exact.fields import QQ, embed
from .exact.intlattice import (
    hermite_row,
    integer_kernel,
    rational_rows_to_integer,
)
from .exact.linalg import Matrix, Subspace, invert, kernel_basis, rank


def wedge_merge(u, v):
    """Merge two strictly increasing index tuples into the sorted wedge
    monomial; returns (tuple, sign) or (None, 0) on a repeated index."""
    out = []
    i = j = 0
    inversions = 0
    while i < len(u) and j < len(v):
        if u[i] == v[j]:
            return None, 0
        if u[i] < v[j]:
            out.append(u[i])
            i += 1
        else:
            out.append(v[j])
            j += 1
            inversions += len(u) - i
    out.extend(u[i:])
    out.extend(v[j:])
    return tuple(out), (1 if inversions % 2 == 0 else -1)


def wedge_basis(n: int, k: int):
    """Sorted index sets of size k, lexicographically ordered."""
    return list(combinations(range(n), k))


def exterior_differential(field, n: int, gen_image, k: int) -> Matrix:
    """Matrix of the degree-k exterior differential determined by its
    values on dual generators.

    ``gen_image[m]`` is a dict (a, b) -> coefficient (a < b) giving the
    2-form d e^m.  The differential extends by the graded Leibniz rule;
    the returned matrix maps coordinates on the sorted k-monomials to
    coordinates on the sorted (k+1)-monomials.
    """
    basis_k = wedge_basis(n, k)
    basis_k1 = wedge_basis(n, k + 1)
    index = {mono: i for i, mono in enumerate(basis_k1)}
    zero = field.zero()
    cols = []
    for mono in basis_k:
        col = [zero] * len(basis_k1)
        for pos in range(len(mono)):
            letter = mono[pos]
            rest = mono[:pos] + mono[pos + 1:]
            outer_sign = 1 if pos % 2 == 0 else -1
            for (a, b), coeff in gen_image[letter].items():
                merged, sgn = wedge_merge((a, b), rest)
                if merged is None:
                    continue
                c = coeff if outer_sign > 0 else -coeff
                if sgn < 0:
                    c = -c
                col[index[merged]] = col[index[merged]] + c
        cols.append(col)
    return Matrix.from_columns(field, cols, nrows=len(basis_k1))


class LieAlgebra:
    """Dimension, scalar field, and structure constants c_{ij}^k
    (stored for i < j, 0-based)."""

    def __init__(self, field, n: int, constants, validate: bool = True):
        self.field = field
        self.n = n
        c = {}
        for (i, j), comps in constants.items():
            if not (0 <= i < j < n):
                raise ValueError(f"bad index pair {(i, j)}")
            row = {k: field.coerce(v) for k, v in comps.items() if v}
            for k in row:
                if not 0 <= k < n:
                    raise ValueError(f"bad target index {k}")
            if row:
                c[(i, j)] = row
        self.c = c
        self._gen_image = None
        if validate:
            witness = check_jacobi(self)
            if witness is not None:
                raise StructureError(
                    f"Jacobi identity fails on basis triple {witness}",
                    witness=witness)

    def zero_vector(self):
        return tuple(self.field.zero() for _ in range(self.n))

    def basis_vector(self, i):
        z = self.field.zero()
        return tuple(self.field.one() if j == i else z for j in range(self.n))

    def bracket_basis(self, i: int, j: int):
        if i == j:
            return self.zero_vector()
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        comps = self.c.get((i, j), {})
        z = self.field.zero()
        out = [z] * self.n
        for k, v in comps.items():
            out[k] = v if sign > 0 else -v
        return tuple(out)

    def bracket(self, x, y):
        x = [self.field.coerce(v) for v in x]
        y = [self.field.coerce(v) for v in y]
        out = [self.field.zero()] * self.n
        for (i, j), comps in self.c.items():
            f = x[i] * y[j] - x[j] * y[i]
            if f:
                for k, v in comps.items():
                    out[k] = out[k] + f * v
        return tuple(out)

    def dual_generator_image(self):
        """d e^m as dicts (i, j) -> coefficient, from the fixed sign
        convention d e^m(e_i, e_j) = -c_{ij}^m."""
        if self._gen_image is None:
            img = [dict() for _ in range(self.n)]
            for (i, j), comps in self.c.items():
                for k, v in comps.items():
                    img[k][(i, j)] = -v
            self._gen_image = img
        return self._gen_image

    def extend_field(self, new_field) -> "LieAlgebra":
        consts = {
            pair: {k: embed(v, self.field, new_field)
                   for k, v in comps.items()}
            for pair, comps in self.c.items()
        }
        return LieAlgebra(new_field, self.n, consts, validate=False)

    def full_space(self) -> Subspace:
        return Subspace.full(self.field, self.n)

    def __repr__(self):
        return f"LieAlgebra(n={self.n}, field={self.field!r})"


# ---------------------------------------------------------------------------
# structure-equation text format


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self):
        ch = self.peek()
        self.pos += 1
        return ch

    def expect(self, ch):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def read_digits(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected digits", start)
        return self.text[start:self.pos], start


def _parse_pair(sc: _Scanner, n: int):
    if sc.peek() == "[":
        sc.expect("[")
        si, pos_i = sc.read_digits()
        sc.expect(",")
        sj, pos_j = sc.read_digits()
        sc.expect("]")
        i, j = int(si), int(sj)
    else:
        digits, pos_i = sc.read_digits()
        if len(digits) != 2:
            raise ParseError(
                "wedge pair must be exactly two digits (use [i,j] for "
                "dimensions above 9)", pos_i)
        i, j = int(digits[0]), int(digits[1])
        pos_j = pos_i
    for idx, pos in ((i, pos_i), (j, pos_j)):
        if not 1 <= idx <= n:
            raise ParseError(f"index {idx} out of range 1..{n}", pos)
    if i == j:
        raise ParseError(f"repeated index {i} in wedge pair", pos_i)
    return i, j


def _parse_entry(sc: _Scanner, n: int):
    """Parse one tuple entry into a dict (i,j) -> rational coefficient
    of e^i ^ e^j (1-based, i < j)."""
    terms = {}
    sign = 1
    if sc.peek() == "0":
        save = sc.pos
        sc.take()
        if sc.peek() in (",", ")", ""):
            return terms
        sc.pos = save
    if sc.peek() in "+-":
        sign = -1 if sc.take() == "-" else 1
    while True:
        coeff = Fraction(1)
        if sc.peek() == "[":
            i, j = _parse_pair(sc, n)
        else:
            digits, pos = sc.read_digits()
            if sc.peek() == "/":
                sc.take()
                den, dpos = sc.read_digits()
                if int(den) == 0:
                    raise ParseError("zero denominator", dpos)
                coeff = Fraction(int(digits), int(den))
                sc.expect("*")
                i, j = _parse_pair(sc, n)
            elif sc.peek() == "*":
                sc.take()
                coeff = Fraction(int(digits))
                i, j = _parse_pair(sc, n)
            else:
                if len(digits) != 2:
                    raise ParseError(
                        "wedge pair must be exactly two digits (use [i,j] "
                        "for dimensions above 9)", pos)
                i, j = _parse_pair(_Scanner(digits), n)
                for idx in (i, j):
                    if not 1 <= idx <= n:
                        raise ParseError(f"index {idx} out of range 1..{n}",
                                         pos)
        if i > j:
            i, j, coeff = j, i, -coeff
        key = (i, j)
        terms[key] = terms.get(key, Fraction(0)) + sign * coeff
        nxt = sc.peek()
        if nxt in (",", ")", ""):
            break
        if nxt not in "+-":
            raise ParseError(f"unexpected character {nxt!r}", sc.pos)
        sign = -1 if sc.take() == "-" else 1
    return {k: v for k, v in terms.items() if v}


def parse_structure_equations(text: str, field=QQ) -> LieAlgebra:
    """Parse the tuple notation into a validated Lie algebra.

    Raises :class:`ParseError` on malformed text or out-of-range
    indices, :class:`StructureError` (with the offending triple) when
    the Jacobi identity fails.
    """
    sc = _Scanner(text)
    sc.expect("(")
    entries_text = []
    depth = 1
    start = sc.pos
    # first pass only counts entries so index bounds are known
    while True:
        if sc.pos >= len(sc.text):
            raise ParseError("unterminated tuple", len(text))
        ch = sc.text[sc.pos]
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 1:
            entries_text.append((sc.text[start:sc.pos], start))
            start = sc.pos + 1
        elif ch == ")" and depth == 1:
            entries_text.append((sc.text[start:sc.pos], start))
            sc.pos += 1
            break
        sc.pos += 1
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise ParseError("trailing input after tuple", sc.pos)
    n = len(entries_text)
    constants = {}
    for k, (chunk, offset) in enumerate(entries_text):
        sub = _Scanner(chunk)
        if not sub.peek():
            raise ParseError("empty entry", offset)
        try:
            terms = _parse_entry(sub, n)
        except ParseError as exc:
            raise ParseError(str(exc).split(" (at position")[0],
                             offset + (exc.position or 0)) from None
        sub.skip_ws()
        if sub.pos != len(chunk.rstrip()):
            raise ParseError("unexpected trailing text in entry",
                             offset + sub.pos)
        for (i, j), coeff in terms.items():
            pair = (i - 1, j - 1)
            constants.setdefault(pair, {})
            # d e^k = sum coeff e^{ij}  <=>  c_{ij}^k = -coeff
            constants[pair][k] = constants[pair].get(k, Fraction(0)) - coeff
    return LieAlgebra(field, n, constants, validate=True)


def pretty_structure_equations(g: LieAlgebra) -> str:
    """Canonical tuple text; parse o pretty is the identity on
    canonical forms."""
    bracket_form = g.n > 9
    entries = []
    for k in range(g.n):
        terms = []
        for (i, j) in sorted(g.c):
            coeff = -g.c[(i, j)].get(k, g.field.zero())
            if not coeff:
                continue
            coeff = Fraction(coeff) if isinstance(coeff, Fraction) else coeff
            pair = f"[{i + 1},{j + 1}]" if bracket_form else f"{i + 1}{j + 1}"
            if coeff == 1:
                body = pair
            elif coeff == -1:
                body = f"-{pair}"
            else:
                body = f"{coeff}*{pair}"
            if terms and not body.startswith("-"):
                terms.append("+" + body)
            else:
                terms.append(body)
        entries.append("".join(terms) if terms else "0")
    return "(" + ",".join(entries) + ")"


# ---------------------------------------------------------------------------
# validation and cohomology


def check_jacobi(g: LieAlgebra):
    """None when the Jacobi identity holds; otherwise the first failing
    basis triple, 1-based."""
    for i, j, k in combinations(range(g.n), 3):
        s = [a + b + c for a, b, c in zip(
            g.bracket(g.bracket_basis(i, j), g.basis_vector(k)),
            g.bracket(g.bracket_basis(j, k), g.basis_vector(i)),
            g.bracket(g.bracket_basis(k, i), g.basis_vector(j)))]
        if any(s):
            return (i + 1, j + 1, k + 1)
    return None


def check_jacobi_via_differential(g: LieAlgebra):
    """Equivalent d o d = 0 test on the dual exterior algebra; must give
    the same verdict as :func:`check_jacobi`."""
    for k in range(g.n - 1):
        d_k = ce_differential(g, k)
        d_k1 = ce_differential(g, k + 1)
        if not (d_k1 * d_k).is_zero():
            return False
    return True


def ce_differential(g: LieAlgebra, k: int) -> Matrix:
    """Matrix of d from degree-k to degree-(k+1) invariant forms in the
    sorted multi-index basis."""
    if not 0 <= k <= g.n:
        raise ValueError(f"degree {k} out of range 0..{g.n}")
    return exterior_differential(g.field, g.n, g.dual_generator_image(), k)


def betti_numbers(g: LieAlgebra):
    """All Betti numbers b_0..b_n of the invariant-forms complex."""
    out = []
    prev_rank = 0
    for k in range(g.n + 1):
        dim_k = math.comb(g.n, k)
        rank_k = rank(ce_differential(g, k)) if k < g.n else 0
        out.append(dim_k - rank_k - prev_rank)
        prev_rank = rank_k
    return out


def bracket_subspace(g: LieAlgebra, A: Subspace, B: Subspace) -> Subspace:
    vecs = [g.bracket(a, b) for a in A.basis for b in B.basis]
    return Subspace(g.field, g.n, vecs)


def commutator_ideal(g: LieAlgebra) -> Subspace:
    return Subspace(g.field, g.n,
                    [g.bracket_basis(i, j)
                     for i, j in combinations(range(g.n), 2)])


def lower_central_series(g: LieAlgebra):
    """Chain g >= [g,g] >= [g,[g,g]] >= ... and the nilpotency class
    (math.inf with the stabilised nonzero term when not nilpotent)."""
    full = g.full_space()
    chain = [full]
    current = full
    while True:
        nxt = bracket_subspace(g, full, current)
        if nxt == current:
            return chain + [nxt], math.inf
        chain.append(nxt)
        current = nxt
        if current.dim == 0:
            return chain, len(chain) - 1


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g)[1] is not math.inf


def is_ideal(g: LieAlgebra, W: Subspace) -> bool:
    """True iff [g, W] is contained in W."""
    for i in range(g.n):
        ei = g.basis_vector(i)
        for w in W.basis:
            if not W.contains(g.bracket(ei, w)):
                return False
    return True


def is_abelian_subspace(g: LieAlgebra, W: Subspace) -> bool:
    return all(not any(g.bracket(a, b))
               for a in W.basis for b in W.basis)


# ---------------------------------------------------------------------------
# rational structures


class QStructure:
    """A rational structure: n independent generators whose Z-span is
    the lattice log and whose Q-span is the rational form."""

    def __init__(self, ambient: LieAlgebra, generators):
        self.ambient = ambient
        field = ambient.field
        gens = [tuple(field.coerce(x) for x in v) for v in generators]
        if len(gens) != ambient.n:
            raise ValueError(
                f"need {ambient.n} generators, got {len(gens)}")
        m = Matrix.from_columns(field, [list(v) for v in gens],
                                nrows=ambient.n)
        if rank(m) != ambient.n:
            raise StructureError("lattice generators are linearly dependent")
        self.generators = tuple(gens)
        self._gen_matrix = m
        self._gen_inverse = invert(m)

    def coords(self, vec):
        """Coordinates of an ambient vector in the generator basis."""
        return self._gen_inverse.apply(vec)

    def __repr__(self):
        return f"QStructure(n={self.ambient.n})"


class SubringReport:
    def __init__(self, is_subring, doubly_divisible, failures, coords):
        self.is_subring = is_subring
        self.doubly_divisible = doubly_divisible
        self.failures = failures
        self.coords = coords

    def __repr__(self):
        return (f"SubringReport(is_subring={self.is_subring}, "
                f"doubly_divisible={self.doubly_divisible})")


def _rational_integer(x, field):
    """The plain integer a field element equals, or None."""
    labels = field.q_labels(x)
    if not labels:
        return 0
    if set(labels) != {(0, 0)}:
        return None
    q = labels[(0, 0)]
    return int(q) if q.denominator == 1 else None


def is_lie_subring(L: QStructure) -> SubringReport:
    """Whether all generator brackets lie in the Z-span, with the
    companion report on divisibility by 2 (the closure condition for
    the degree-2 group law x + y + [x,y]/2)."""
    g, field = L.ambient, L.ambient.field
    coords = {}
    failures = []
    doubly = True
    for i, j in combinations(range(len(L.generators)), 2):
        w = g.bracket(L.generators[i], L.generators[j])
        cs = L.coords(w)
        ints = [_rational_integer(c, field) for c in cs]
        if any(v is None for v in ints):
            failures.append((i + 1, j + 1, cs))
            doubly = False
            continue
        coords[(i + 1, j + 1)] = tuple(ints)
        if any(v % 2 for v in ints):
            doubly = False
    return SubringReport(not failures, doubly and not failures,
                         failures, coords)


def _rational_constraint_rows(L: QStructure, W: Subspace):
    """Rational rows cutting out {r in Q^n : sum r_i v_i in W}."""
    field = L.ambient.field
    ann = W.annihilator()
    rows = []
    for f in ann.basis:
        pairing = [sum((fi * vi for fi, vi in zip(f, v)), field.zero())
                   for v in L.generators]
        labels = sorted({lab for x in pairing for lab in field.q_labels(x)})
        for lab in labels:
            rows.append([field.q_labels(x).get(lab, Fraction(0))
                         for x in pairing])
    return rows


def rational_intersection(L: QStructure, W: Subspace):
    """Dimension and basis of (Q-span of the generators) meet W, solved
    over the ambient field with formal parameters kept formal.

    Returns (dim, coefficient vectors, Subspace spanned inside the
    ambient).
    """
    field = L.ambient.field
    n = L.ambient.n
    rows = _rational_constraint_rows(L, W)
    if rows:
        coeffs = kernel_basis(Matrix(QQ, rows, ncols=n))
    else:
        coeffs = [tuple(Fraction(1) if i == j else Fraction(0)
                        for j in range(n)) for i in range(n)]
    vectors = []
    for r in coeffs:
        v = [field.zero()] * n
        for i, c in enumerate(r):
            if c:
                v = [a + c * b for a, b in zip(v, L.generators[i])]
        vectors.append(tuple(v))
    return len(coeffs), coeffs, Subspace(field, n, vectors)


def is_gamma_rational(L: QStructure, W: Subspace) -> bool:
    """True iff the rational points of W span it."""
    dim, _, _ = rational_intersection(L, W)
    return dim == W.dim


def lattice_intersection(L: QStructure, W: Subspace):
    """Z-basis of {x in Z-span(generators) : x in W}, canonical
    (Hermite-reduced coefficient rows).

    Returns (integer coefficient rows, ambient vectors).
    """
    rows = _rational_constraint_rows(L, W)
    n = L.ambient.n
    if rows:
        int_rows = rational_rows_to_integer(rows)
        coeffs = integer_kernel(int_rows)
    else:
        coeffs = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    coeffs = hermite_row(coeffs)
    field = L.ambient.field
    vectors = []
    for r in coeffs:
        v = [field.zero()] * n
        for i, c in enumerate(r):
            if c:
                v = [a + field.coerce(c) * b
                     for a, b in zip(v, L.generators[i])]
        vectors.append(tuple(v))
    return coeffs, vectors
