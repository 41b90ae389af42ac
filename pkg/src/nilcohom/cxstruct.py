"""Complex structures on Lie algebras and the bigraded invariant
complex.

The eigenbasis convention is fixed so that for the standard pairing
J e_{2i-1} = e_{2i} the holomorphic frame comes out as
X_i = e_{2i-1} + i e_{2i}: the (1,0) projector is (id + iJ)/2 and the
(0,1) projector its conjugate.  Hodge numbers are insensitive to this
orientation; fixing it makes every basis and matrix reproducible.
"""

from __future__ import annotations

from itertools import combinations

from .errors import StructureError
from .exact.fields import complexify
from .exact.linalg import Matrix, Subspace, invert, rank
from .liealg import (
    LieAlgebra,
    commutator_ideal,
    exterior_differential,
    is_abelian_subspace,
    is_ideal,
    wedge_basis,
)


class AlmostComplexStructure:
    """An exact matrix J on a Lie algebra with J^2 = -id."""

    def __init__(self, ambient: LieAlgebra, J: Matrix):
        if ambient.n % 2:
            raise StructureError("ambient dimension must be even")
        if J.nrows != ambient.n or J.ncols != ambient.n:
            raise StructureError("J has the wrong shape")
        if J.field != ambient.field:
            J = Matrix(ambient.field, J.rows)
        if (J * J) != Matrix.identity(ambient.field, ambient.n).scale(-1):
            raise StructureError("J^2 is not -id")
        self.ambient = ambient
        self.J = J

    @classmethod
    def standard(cls, ambient: LieAlgebra):
        """The pairing J e_{2i-1} = e_{2i} (1-based)."""
        pairs = [(2 * i + 1, 2 * i + 2) for i in range(ambient.n // 2)]
        return cls.from_pairs(ambient, pairs)

    @classmethod
    def from_pairs(cls, ambient: LieAlgebra, pairs):
        """J e_a = e_b and J e_b = -e_a for each 1-based pair (a, b)."""
        field = ambient.field
        zero = field.zero()
        one = field.one()
        cols = [[zero] * ambient.n for _ in range(ambient.n)]
        seen = set()
        for a, b in pairs:
            for idx in (a, b):
                if not 1 <= idx <= ambient.n or idx in seen:
                    raise StructureError(f"bad or repeated index {idx} in pairs")
                seen.add(idx)
            cols[a - 1][b - 1] = one
            cols[b - 1][a - 1] = -one
        if len(seen) != ambient.n:
            raise StructureError("pairs must cover every basis index")
        return cls(ambient, Matrix.from_columns(field, cols))

    def apply(self, vec):
        return self.J.apply(vec)

    def __repr__(self):
        return f"AlmostComplexStructure(n={self.ambient.n})"


def nijenhuis(J: AlmostComplexStructure):
    """Values N(e_i, e_j) on all basis pairs, keyed 1-based."""
    g = J.ambient
    out = {}
    for i, j in combinations(range(g.n), 2):
        x, y = g.basis_vector(i), g.basis_vector(j)
        jx, jy = J.apply(x), J.apply(y)
        term = [a - b + c + d for a, b, c, d in zip(
            g.bracket(x, y), g.bracket(jx, jy),
            J.apply(g.bracket(jx, y)), J.apply(g.bracket(x, jy)))]
        out[(i + 1, j + 1)] = tuple(term)
    return out


def nijenhuis_witness(J: AlmostComplexStructure):
    for pair, val in nijenhuis(J).items():
        if any(val):
            return pair, val
    return None


def is_integrable(J: AlmostComplexStructure) -> bool:
    return nijenhuis_witness(J) is None


def holomorphic_closure_test(J: AlmostComplexStructure) -> bool:
    """Equivalent integrability test: the (1,0) space is closed under
    the complexified bracket."""
    split = pq_splitting(J)
    gc = J.ambient.extend_field(split.field)
    span = Subspace(split.field, J.ambient.n, [list(x) for x in split.X])
    return all(span.contains(gc.bracket(a, b))
               for a, b in combinations(split.X, 2))


class PQSplitting:
    """Holomorphic frame X_1..X_m, its conjugate, and the complexified
    structure constants in that frame."""

    def __init__(self, field, X, Xbar, T, Tinv, gamma):
        self.field = field
        self.X = X
        self.Xbar = Xbar
        self.T = T
        self.Tinv = Tinv
        self.gamma = gamma

    @property
    def m(self):
        return len(self.X)

    def gen_image(self):
        """d of the dual frame, for the exterior differential."""
        img = [dict() for _ in range(2 * self.m)]
        for (a, b), comps in self.gamma.items():
            for c, v in comps.items():
                img[c][(a, b)] = -v
        return img


def pq_splitting(J: AlmostComplexStructure) -> PQSplitting:
    """Frames of the +-i eigenspaces via the exact projectors
    (id +- iJ)/2, leading coefficients normalised to 1."""
    g = J.ambient
    n, m = g.n, g.n // 2
    cfield = complexify(g.field)
    i_scalar = cfield.i()
    jc = Matrix(cfield, [[cfield.coerce(x) for x in row] for row in J.J.rows])
    ident = Matrix.identity(cfield, n)
    half = cfield.coerce(g.field.one()) * cfield.from_int(1)
    proj10 = (ident + jc.scale(i_scalar))
    X = []
    span = Subspace.zero(cfield, n)
    for k in range(n):
        cand = proj10.apply([cfield.from_int(1 if t == k else 0)
                             for t in range(n)])
        if span.contains(cand):
            continue
        lead = next(x for x in cand if x)
        cand = tuple(x * lead.inverse() for x in cand)
        X.append(cand)
        span = span.sum_(Subspace(cfield, n, [list(cand)]))
        if len(X) == m:
            break
    Xbar = tuple(tuple(cfield.conj(x) for x in v) for v in X)
    T = Matrix.from_columns(cfield, [list(v) for v in X]
                            + [list(v) for v in Xbar], nrows=n)
    Tinv = invert(T)
    gc = g.extend_field(cfield)
    frame = list(X) + list(Xbar)
    gamma = {}
    for a, b in combinations(range(2 * m), 2):
        w = Tinv.apply(gc.bracket(frame[a], frame[b]))
        comps = {c: v for c, v in enumerate(w) if v}
        if comps:
            gamma[(a, b)] = comps
    return PQSplitting(cfield, tuple(X), Xbar, T, Tinv, gamma)


def monomial_bidegree(mono, m: int):
    p = sum(1 for letter in mono if letter < m)
    return p, len(mono) - p


class BigradedComplex:
    """One row of the bigraded complex: fixed holomorphic degree p,
    bases of the (p, q) pieces and the matrices of the (0,1)-part of d."""

    def __init__(self, p, m, field, bases, dbar):
        self.p = p
        self.m = m
        self.field = field
        self.bases = bases      # q -> list of letter tuples
        self.dbar = dbar        # q -> Matrix (p,q) -> (p,q+1)

    def dimension(self, q):
        return len(self.bases.get(q, []))

    def cohomology(self):
        out = []
        prev_rank = 0
        for q in range(self.m + 1):
            d_q = self.dbar[q]
            rank_q = rank(d_q)
            out.append(self.dimension(q) - rank_q - prev_rank)
            prev_rank = rank_q
        return out


class _Bigraded:
    """Internal: the whole bigraded complex of an integrable structure."""

    def __init__(self, J: AlmostComplexStructure):
        split = pq_splitting(J)
        m = split.m
        field = split.field
        gen_image = split.gen_image()
        self.split = split
        self.m = m
        self.field = field
        self.bases = {}
        index = {}
        for k in range(2 * m + 1):
            for mono in wedge_basis(2 * m, k):
                pq = monomial_bidegree(mono, m)
                self.bases.setdefault(pq, []).append(mono)
        for pq, monos in self.bases.items():
            for pos, mono in enumerate(monos):
                index[mono] = (pq, pos)
        self.index = index
        self.full_d = {k: exterior_differential(field, 2 * m, gen_image, k)
                       for k in range(2 * m + 1)}
        self.full_bases = {k: wedge_basis(2 * m, k)
                           for k in range(2 * m + 2)}

    def basis(self, p, q):
        return self.bases.get((p, q), [])

    def dbar_matrix(self, p, q):
        """The (p, q+1) component of d restricted to the (p, q) basis;
        raises when d has components outside bidegrees (p+1, q) and
        (p, q+1)."""
        src = self.basis(p, q)
        tgt = self.basis(p, q + 1)
        k = p + q
        zero = self.field.zero()
        full = self.full_d[k]
        full_src = self.full_bases[k]
        full_tgt = self.full_bases[k + 1]
        rows = [[zero] * len(src) for _ in range(len(tgt))]
        tgt_pos = {mono: i for i, mono in enumerate(tgt)}
        for cj, mono in enumerate(src):
            col = full.column(full_src.index(mono))
            for ri, val in enumerate(col):
                if not val:
                    continue
                out_pq = monomial_bidegree(full_tgt[ri], self.m)
                if out_pq == (p, q + 1):
                    rows[tgt_pos[full_tgt[ri]]][cj] = val
                elif out_pq != (p + 1, q):
                    raise StructureError(
                        "d does not split as del + delbar (structure is "
                        "not integrable)")
        return Matrix(self.field, rows, ncols=len(src))


def dolbeault_complex(J: AlmostComplexStructure, p: int) -> BigradedComplex:
    """The complex of (p, *) invariant forms with the (0,1)-part of d.

    Raises for non-integrable J: d only splits into bidegrees
    (p+1, q) + (p, q+1) when the structure is integrable.
    """
    if not is_integrable(J):
        w = nijenhuis_witness(J)
        raise StructureError(
            "d does not split as del + delbar: Nijenhuis tensor is nonzero "
            f"on basis pair {w[0]}", witness=w)
    big = _Bigraded(J)
    m = big.m
    if not 0 <= p <= m:
        raise ValueError(f"holomorphic degree {p} out of range 0..{m}")
    bases = {q: big.basis(p, q) for q in range(m + 1)}
    dbar = {q: big.dbar_matrix(p, q) for q in range(m + 1)}
    for q in range(m):
        if not (dbar[q + 1] * dbar[q]).is_zero():
            raise StructureError("delbar^2 is nonzero; internal error")
    return BigradedComplex(p, m, big.field, bases, dbar)


def hodge_table(J: AlmostComplexStructure):
    """The full table h^{p,q} as a tuple of rows indexed by p."""
    m = J.ambient.n // 2
    return tuple(tuple(dolbeault_complex(J, p).cohomology())
                 for p in range(m + 1))


def hodge_table_ranks_oracle(J: AlmostComplexStructure):
    """Same table computed from the independent fraction-free
    elimination routine."""
    from .exact.linalg import rank_fraction_free

    big = _Bigraded(J)
    m = big.m
    table = []
    for p in range(m + 1):
        row = []
        prev_rank = 0
        for q in range(m + 1):
            d_q = big.dbar_matrix(p, q)
            r = rank_fraction_free(d_q)
            row.append(len(big.basis(p, q)) - r - prev_rank)
            prev_rank = r
        table.append(tuple(row))
    return tuple(table)


# ---------------------------------------------------------------------------
# J-invariant subspace calculus


def j_image(J: AlmostComplexStructure, W: Subspace) -> Subspace:
    return W.image_under(J.J)


def j_core(J: AlmostComplexStructure, W: Subspace) -> Subspace:
    """Largest J-invariant subspace of W, namely W meet JW."""
    return W.intersect(j_image(J, W))

def j_hull(J: AlmostComplexStructure, W: Subspace) -> Subspace:
    """Smallest J-invariant subspace containing W, namely W + JW."""
    return W.sum_(j_image(J, W))


def is_j_invariant(J: AlmostComplexStructure, W: Subspace) -> bool:
    return j_image(J, W) == W


def antiholomorphic_part(J: AlmostComplexStructure, W: Subspace) -> Subspace:
    """W^{0,1}: the image of W under the (0,1) projector (id - iJ)/2,
    inside the complexified coordinate space."""
    split = pq_splitting(J)
    cfield = split.field
    n = J.ambient.n
    jc = Matrix(cfield, [[cfield.coerce(x) for x in row] for row in J.J.rows])
    proj = Matrix.identity(cfield, n) - jc.scale(cfield.i())
    vecs = [proj.apply([cfield.coerce(x) for x in w]) for w in W.basis]
    return Subspace(cfield, n, vecs)


def antiholomorphic_space(J: AlmostComplexStructure) -> Subspace:
    split = pq_splitting(J)
    return Subspace(split.field, J.ambient.n,
                    [list(v) for v in split.Xbar])


def span_of_frame(J: AlmostComplexStructure, labels) -> Subspace:
    """Complex span of frame vectors named like "X1" or "Xbar3"."""
    split = pq_splitting(J)
    vecs = []
    for lab in labels:
        lab = lab.strip()
        if lab.startswith("Xbar"):
            vecs.append(list(split.Xbar[int(lab[4:]) - 1]))
        elif lab.startswith("X"):
            vecs.append(list(split.X[int(lab[1:]) - 1]))
        else:
            raise ValueError(f"unknown frame label {lab!r}")
    return Subspace(split.field, J.ambient.n, vecs)


def check_complex_subalgebra(J: AlmostComplexStructure, S: Subspace) -> bool:
    """True iff [S, S] stays inside S in the complexified algebra."""
    split = pq_splitting(J)
    gc = J.ambient.extend_field(split.field)
    return all(S.contains(gc.bracket(a, b))
               for a, b in combinations(S.basis, 2))


class DiagramReport:
    """Pass/fail record for the exactness checks of the subalgebra
    diagram tying the leaf, the chosen subalgebra, and the base."""

    def __init__(self, items):
        self.items = items  # list of (name, bool, detail)

    @property
    def all_pass(self):
        return all(ok for _, ok, _ in self.items)

    def __repr__(self):
        return f"DiagramReport(all_pass={self.all_pass})"


def check_foliation_diagram(J: AlmostComplexStructure, f: Subspace,
                            f0: Subspace, g0_01: Subspace) -> DiagramReport:
    """Verify every row and column of the three-by-three diagram built
    from f^{0,1} -> g^{0,1} -> h^{0,1} and the chosen g0^{0,1}."""
    g = J.ambient
    if not is_j_invariant(J, f):
        raise StructureError("f is not J-invariant")
    if not is_ideal(g, f):
        raise StructureError("f is not an ideal")
    if not is_abelian_subspace(g, f):
        raise StructureError("f is not abelian")
    if not (f0 <= f):
        raise StructureError("f0 is not contained in f")
    if not is_j_invariant(J, f0):
        raise StructureError("f0 is not J-invariant")
    f01 = antiholomorphic_part(J, f)
    f001 = antiholomorphic_part(J, f0)
    g01 = antiholomorphic_space(J)
    items = []
    inter = g0_01.intersect(f01)
    items.append(("g0^{0,1} meet f^{0,1} equals f0^{0,1}", inter == f001,
                  f"dim {inter.dim} vs {f001.dim}"))
    onto = g0_01.sum_(f01) == g01
    items.append(("g0^{0,1} surjects onto h^{0,1}", onto,
                  f"dim(g0+f^{{0,1}}) = {g0_01.sum_(f01).dim} of {g01.dim}"))
    k_dim = g01.dim - g0_01.dim
    items.append(("f^{0,1}/f0^{0,1} matches k^{0,1}",
                  f01.dim - f001.dim == k_dim,
                  f"{f01.dim - f001.dim} vs {k_dim}"))
    items.append(("g0^{0,1} is a subalgebra",
                  check_complex_subalgebra(J, g0_01), ""))
    return DiagramReport(items)


# ---------------------------------------------------------------------------
# hypothesis checklist for the foliated-leaf isomorphism theorem

VERDICT_TORUS = "torus (conjecture known)"
VERDICT_FIBRATION = "fibration/torus-bundle case (conjecture known)"
VERDICT_APPLIES = "theorem applies"
VERDICT_NOT_APPLICABLE = "does not apply"
VERDICT_UNDETERMINED = "undetermined"

KNOWN_BASE_CLASSES = (
    "abelian (torus) base; other bases with principal or stable "
    "torus-bundle towers, or complex-parallelisable structure, are known "
    "classes but are reported as assumed, not certified")


class ConjectureReport:
    def __init__(self, items, verdict, leaf=None):
        self.items = items      # list of (name, status, detail)
        self.verdict = verdict
        self.leaf = leaf

    def __repr__(self):
        return f"ConjectureReport({self.verdict!r})"


def conjecture_status(g: LieAlgebra, J: AlmostComplexStructure, L,
                      f: Subspace, f0: Subspace, g0_01: Subspace,
                      param_spec=None, scan_bound: int = 1000):
    """Run the full hypothesis checklist: invariant abelian ideal,
    abelian quotient, diagram exactness, lattice rationality of the
    ideal, and the toroidal classification of the leaf.

    Unknown subcases are reported as undetermined, never guessed.
    """
    from .liealg import is_gamma_rational, rational_intersection
    from .toroidal import leaf_analysis

    items = []

    def item(name, ok, detail=""):
        items.append((name, "pass" if ok else "fail", detail))
        return ok

    if not commutator_ideal(g).dim:
        items.append(("algebra abelian", "pass", "nilmanifold is a torus"))
        return ConjectureReport(items, VERDICT_TORUS)

    ok = True
    ok &= item("f is J-invariant", is_j_invariant(J, f))
    ok &= item("f is an ideal", is_ideal(g, f))
    ok &= item("f is abelian", is_abelian_subspace(g, f))
    quotient_abelian = commutator_ideal(g) <= f
    item("quotient g/f abelian (base is a torus)", quotient_abelian,
         KNOWN_BASE_CLASSES if not quotient_abelian else "")
    if not ok:
        return ConjectureReport(items, f"{VERDICT_NOT_APPLICABLE}: "
                                "f is not an abelian J-invariant ideal")
    try:
        diagram = check_foliation_diagram(J, f, f0, g0_01)
    except StructureError as exc:
        items.append(("diagram preconditions", "fail", str(exc)))
        return ConjectureReport(items,
                                f"{VERDICT_NOT_APPLICABLE}: {exc}")
    for name, okd, detail in diagram.items:
        item(f"diagram: {name}", okd, detail)
    if not diagram.all_pass:
        return ConjectureReport(items, f"{VERDICT_NOT_APPLICABLE}: "
                                "diagram is not exact")

    rational = is_gamma_rational(L, f)
    dim_int, _, _ = rational_intersection(L, f)
    items.append(("f Gamma-rational", "pass" if rational else "info",
                  f"rational points span dimension {dim_int} of {f.dim}"))
    if rational:
        if not quotient_abelian:
            return ConjectureReport(
                items, f"{VERDICT_UNDETERMINED}: fibration over a "
                "non-torus base; base conjecture assumed, not certified")
        return ConjectureReport(items, VERDICT_FIBRATION)

    leaf = leaf_analysis(g, J, L, f, param_spec=param_spec,
                         scan_bound=scan_bound)
    items.append(("leaf classification", "info", leaf.classification))
    if leaf.classification.startswith("toroidal"):
        if not quotient_abelian:
            return ConjectureReport(
                items, f"{VERDICT_UNDETERMINED}: toroidal leaf but "
                "non-torus base; base conjecture assumed", leaf)
        return ConjectureReport(
            items,
            f"{VERDICT_APPLIES} (foliation case; leaf {leaf.classification})",
            leaf)
    if leaf.classification == "compact torus":
        return ConjectureReport(items, VERDICT_FIBRATION, leaf)
    return ConjectureReport(
        items, f"{VERDICT_UNDETERMINED}: leaf is {leaf.classification}",
        leaf)
