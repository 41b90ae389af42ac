"""Spectral sequences of finite filtered cochain complexes.

Pages are computed by explicit linear algebra on the classical
subspaces Z_r = F^p meet d^{-1} F^{p+r}: no derived machinery, only
kernels, images, sums and intersections over an exact field.  The two
instances used downstream are the column filtration of the bigraded
invariant complex and the subalgebra (annihilator) filtration of a
Lie algebra complex with module coefficients; the latter's second page
is recomputed independently as cohomology-of-cohomology and compared.
"""

from __future__ import annotations

from itertools import combinations

from .errors import StructureError, UnsupportedError
from .exact.linalg import Matrix, Subspace, kernel_basis, rank, solve
from .cxstruct import (
    AlmostComplexStructure,
    _Bigraded,
    is_integrable,
    monomial_bidegree,
    nijenhuis_witness,
    pq_splitting,
)
from .liealg import LieAlgebra, exterior_differential, wedge_basis, wedge_merge


class FilteredComplex:
    """A finite cochain complex with a bounded decreasing filtration
    preserved by the differential."""

    def __init__(self, field, dims, d, filtration, validate=True):
        self.field = field
        self.dims = dict(dims)
        self.degrees = sorted(self.dims)
        self.d = dict(d)
        self.filtration = {k: list(v) for k, v in filtration.items()}
        self.plevels = max(len(v) - 1 for v in self.filtration.values())
        if validate:
            self._validate()

    def _validate(self):
        for k in self.degrees[:-1]:
            if k + 1 not in self.dims:
                raise StructureError(f"degree gap at {k + 1}")
        for k, mat in self.d.items():
            if mat.ncols != self.dims[k] or mat.nrows != self.dims.get(k + 1, 0):
                raise StructureError(f"differential shape mismatch at {k}")
        for k in self.degrees:
            if k in self.d and (k + 1) in self.d:
                prod = self.d[k + 1] * self.d[k]
                if not prod.is_zero():
                    raise StructureError(f"d o d nonzero at degree {k}")
        for k in self.degrees:
            chain = self.filtration.get(k, [])
            if not chain:
                raise StructureError(f"missing filtration at degree {k}")
            if chain[0].dim != self.dims[k]:
                raise StructureError(
                    f"filtration not exhaustive at degree {k}")
            if chain[-1].dim != 0:
                raise StructureError(f"filtration not bounded at degree {k}")
            for p in range(len(chain) - 1):
                if not (chain[p + 1] <= chain[p]):
                    raise StructureError(
                        f"filtration not decreasing at degree {k}, "
                        f"level {p + 1}")
        for k in self.degrees:
            if k not in self.d:
                continue
            for p, sub in enumerate(self.filtration[k]):
                img = sub.image_under(self.d[k])
                if not (img <= self.F(p, k + 1)):
                    raise StructureError(
                        "filtration not preserved by d",
                        witness=(k, p))

    def F(self, p, k) -> Subspace:
        dim_k = self.dims.get(k, 0)
        if p <= 0:
            return Subspace.full(self.field, dim_k)
        chain = self.filtration.get(k)
        if chain is None or p >= len(chain):
            return Subspace.zero(self.field, dim_k)
        return chain[p]

    def total_cohomology(self):
        out = {}
        for k in self.degrees:
            rank_k = rank(self.d[k]) if k in self.d else 0
            rank_km1 = rank(self.d[k - 1]) if (k - 1) in self.d else 0
            out[k] = self.dims[k] - rank_k - rank_km1
        return out


class SpectralPages:
    """Computed pages: dimensions per (p, q), differential ranks, the
    stable page, and explicit representative bases for r <= 2."""

    def __init__(self, pages, d_ranks, e_inf, stabilized_at,
                 total_cohomology, bases):
        self.pages = pages
        self.d_ranks = d_ranks
        self.e_inf = e_inf
        self.stabilized_at = stabilized_at
        self.total_cohomology = total_cohomology
        self.bases = bases

    def page(self, r):
        return self.pages[min(r, len(self.pages) - 1)]

    def e_inf_totals(self):
        out = {}
        for (p, q), dim in self.e_inf.items():
            out[p + q] = out.get(p + q, 0) + dim
        return {k: v for k, v in sorted(out.items()) if v}

    def table(self, r):
        """Nonzero entries of page r as a sorted dict."""
        return {pq: v for pq, v in sorted(self.page(r).items()) if v}

    def __repr__(self):
        return (f"SpectralPages(stabilized_at={self.stabilized_at}, "
                f"E_inf={self.table(len(self.pages) - 1)})")


def pages(fc: FilteredComplex, keep_bases_up_to: int = 2) -> SpectralPages:
    """All pages of the spectral sequence of a filtered complex,
    iterated until the differentials vanish on two consecutive pages
    past the filtration length."""
    field = fc.field
    degrees = fc.degrees
    pmax = fc.plevels
    zcache = {}

    def Z(r, p, q):
        k = p + q
        if k not in fc.dims:
            return Subspace.zero(field, 0)
        key = (r, p, q)
        if key in zcache:
            return zcache[key]
        base = fc.F(p, k)
        if r >= 1 and k in fc.d:
            pre = fc.F(p + r, k + 1).preimage_under(fc.d[k])
            base = base.intersect(pre)
        zcache[key] = base
        return base

    bcache = {}

    def boundary(r, p, q):
        key = (r, p, q)
        if key in bcache:
            return bcache[key]
        a = Z(r - 1, p + 1, q - 1)
        k = p + q
        src = Z(r - 1, p - r + 1, q + r - 2)
        if (k - 1) in fc.d and src.dim:
            b = src.image_under(fc.d[k - 1])
            a = a.sum_(b)
        bcache[key] = a
        return a

    spots = [(p, k - p) for p in range(pmax + 1) for k in degrees
             if k - p >= -pmax]
    page_list, rank_list, bases = [], [], {}
    consecutive_zero = 0
    r = 0
    while True:
        table = {}
        reps = {}
        for p, q in spots:
            z = Z(r, p, q)
            d_sub = boundary(r, p, q)
            denom = d_sub.intersect(z) if not (d_sub <= z) else d_sub
            table[(p, q)] = z.dim - denom.dim
            if r <= keep_bases_up_to and table[(p, q)]:
                reps[(p, q)] = denom.extend_basis_within(z)
        ranks = {}
        total_rank = 0
        for p, q in spots:
            k = p + q
            if k not in fc.d:
                continue
            z = Z(r, p, q)
            if not z.dim:
                continue
            img = z.image_under(fc.d[k])
            tgt = boundary(r, p + r, q - r + 1)
            rk = tgt.sum_(img).dim - tgt.dim
            if rk:
                ranks[(p, q)] = rk
                total_rank += rk
        page_list.append(table)
        rank_list.append(ranks)
        if r <= keep_bases_up_to:
            bases[r] = reps
        consecutive_zero = consecutive_zero + 1 if total_rank == 0 else 0
        if r > pmax and consecutive_zero >= 2:
            break
        r += 1
        if r > pmax + 2 * len(degrees) + 4:
            raise StructureError("spectral sequence failed to stabilise")

    e_inf = page_list[-1]
    totals = fc.total_cohomology()
    got = {}
    for (p, q), dim in e_inf.items():
        got[p + q] = got.get(p + q, 0) + dim
    for k in degrees:
        if got.get(k, 0) != totals[k]:
            raise StructureError(
                f"convergence failure at degree {k}: E_inf total "
                f"{got.get(k, 0)} vs cohomology {totals[k]}")
    return SpectralPages(page_list, rank_list, e_inf,
                         len(page_list) - 1, totals, bases)


# ---------------------------------------------------------------------------
# instance: column filtration of the bigraded complex


def bigraded_filtered_complex(J: AlmostComplexStructure) -> FilteredComplex:
    """Total complexified invariant complex with the holomorphic-degree
    (column) filtration F^p = spans of monomials with at least p
    unbarred letters."""
    if not is_integrable(J):
        w = nijenhuis_witness(J)
        raise StructureError(
            "structure not integrable: Nijenhuis tensor nonzero on basis "
            f"pair {w[0]}", witness=w)
    big = _Bigraded(J)
    m = big.m
    field = big.field
    dims = {k: len(big.full_bases[k]) for k in range(2 * m + 1)}
    d = {k: big.full_d[k] for k in range(2 * m)}
    filtration = {}
    zero, one = field.zero(), field.one()
    for k in range(2 * m + 1):
        monos = big.full_bases[k]
        chain = []
        for p in range(m + 2):
            vecs = []
            for idx, mono in enumerate(monos):
                if monomial_bidegree(mono, m)[0] >= p:
                    vecs.append([one if t == idx else zero
                                 for t in range(len(monos))])
            chain.append(Subspace(field, len(monos), vecs))
        filtration[k] = chain
    return FilteredComplex(field, dims, d, filtration)


def frolicher(g: LieAlgebra, J: AlmostComplexStructure) -> SpectralPages:
    """Spectral sequence of the column-filtered bigraded complex: the
    first page is the Dolbeault table, the stable page totals the
    complexified de Rham numbers."""
    return pages(bigraded_filtered_complex(J))


# ---------------------------------------------------------------------------
# Lie algebra complexes with module coefficients


def derivation_power(field, B: Matrix, p: int) -> Matrix:
    """Extend an operator on dual generators (omega_t -> sum_s B[s][t]
    omega_s) to degree-p monomials as a derivation."""
    m = B.ncols
    basis = wedge_basis(m, p)
    index = {mono: i for i, mono in enumerate(basis)}
    zero = field.zero()
    cols = []
    for mono in basis:
        col = [zero] * len(basis)
        for t in mono:
            rest = tuple(x for x in mono if x != t)
            for s in range(m):
                c = B.rows[s][t]
                if not c:
                    continue
                if s == t:
                    col[index[mono]] = col[index[mono]] + c
                    continue
                if s in rest:
                    continue
                merged, sgn = wedge_merge((s,), rest)
                # sign of moving omega_s from t's slot into sorted order
                pos_t = mono.index(t)
                base_sign = -1 if pos_t % 2 else 1
                total = c if sgn > 0 else -c
                total = total if base_sign > 0 else -total
                col[index[merged]] = col[index[merged]] + total
        cols.append(col)
    return Matrix.from_columns(field, cols, nrows=len(basis))


def lie_module_complex(field, ell: int, brackets, actions, mdim: int):
    """Chevalley-Eilenberg complex of an ell-dimensional algebra with a
    module of dimension mdim.

    ``brackets``: dict (a, b) -> dict c -> coefficient (a < b);
    ``actions``: per-generator mdim x mdim matrices.
    Returns (dims, d) with basis (monomial, module-vector), monomial
    major.
    """
    gen_image = [dict() for _ in range(ell)]
    for (a, b), comps in brackets.items():
        for c, v in comps.items():
            gen_image[c][(a, b)] = -v
    zero = field.zero()
    dims = {}
    d = {}
    for k in range(ell + 1):
        basis_k = wedge_basis(ell, k)
        dims[k] = len(basis_k) * mdim
    for k in range(ell):
        basis_k = wedge_basis(ell, k)
        basis_k1 = wedge_basis(ell, k + 1)
        index1 = {mono: i for i, mono in enumerate(basis_k1)}
        dce = exterior_differential(field, ell, gen_image, k)
        rows = [[zero] * dims[k] for _ in range(dims[k + 1])]
        for cj, mono in enumerate(basis_k):
            # Chevalley-Eilenberg part, tensored with the identity on M
            col = dce.column(cj)
            for ri, val in enumerate(col):
                if val:
                    for v in range(mdim):
                        rows[ri * mdim + v][cj * mdim + v] = val
            # module-action part: sum_a omega^a wedge mono (x) rho_a
            for a in range(ell):
                merged, sgn = wedge_merge((a,), mono)
                if merged is None:
                    continue
                ri = index1[merged]
                act = actions[a]
                for w in range(mdim):
                    for v in range(mdim):
                        c = act.rows[w][v]
                        if c:
                            c = c if sgn > 0 else -c
                            rows[ri * mdim + w][cj * mdim + v] = (
                                rows[ri * mdim + w][cj * mdim + v] + c)
        d[k] = Matrix(field, rows, ncols=dims[k])
    return dims, d


def cohomology_with_reps(field, dims, d):
    """Cohomology of a finite complex with explicit representative
    cocycles and a reducer expressing any cocycle in those
    representatives modulo coboundaries."""
    degrees = sorted(dims)
    out = {}
    for k in degrees:
        dim_k = dims[k]
        if k in d:
            ker = Subspace(field, dim_k, kernel_basis(d[k]))
        else:
            ker = Subspace.full(field, dim_k)
        if (k - 1) in d:
            img = Subspace(field, dim_k,
                           [d[k - 1].column(j) for j in range(d[k - 1].ncols)])
        else:
            img = Subspace.zero(field, dim_k)
        reps = img.extend_basis_within(ker)
        sol_matrix = Matrix.from_columns(
            field, [list(v) for v in reps] + [list(v) for v in img.basis],
            nrows=dim_k) if (reps or img.basis) else None

        def reducer(vec, _sol=sol_matrix, _nreps=len(reps), _dim=dim_k):
            if _sol is None:
                return tuple()
            x = solve(_sol, vec)
            if x is None:
                raise StructureError("vector is not a cocycle mod boundaries")
            return tuple(x[:_nreps])

        out[k] = (reps, reducer)
    return out


class HochschildSerre:
    def __init__(self, pages_, e2_direct, e2_filtration, module_dims):
        self.pages = pages_
        self.e2_direct = e2_direct
        self.e2_filtration = e2_filtration
        self.module_dims = module_dims

    @property
    def e2_matches(self):
        keys = set(self.e2_direct) | set(self.e2_filtration)
        return all(self.e2_direct.get(k, 0) == self.e2_filtration.get(k, 0)
                   for k in keys)

    def __repr__(self):
        return (f"HochschildSerre(e2_matches={self.e2_matches}, "
                f"E2={self.e2_direct})")


def _adapted_frame(field, n, sub: Subspace, ambient: Subspace):
    if not (sub <= ambient):
        raise StructureError("sub is not contained in the ambient algebra")
    frame = [list(v) for v in sub.basis]
    frame += [list(v) for v in sub.extend_basis_within(ambient)]
    return frame


def _frame_coords(field, frame, n):
    mat = Matrix.from_columns(field, frame, nrows=n)

    def coords(vec):
        x = solve(mat, vec)
        if x is None:
            raise StructureError("bracket leaves the chosen subalgebra")
        return x

    return coords


def hochschild_serre(g: LieAlgebra, J, sub_labels_or_space, p: int = 0,
                     ambient_space=None) -> HochschildSerre:
    """Subalgebra-filtered spectral sequence of the Lie algebra complex
    with coefficients, plus the independently computed second page
    H^r(quotient, H^s(sub, module)); the two tables must agree.

    Complex case (J given): the ambient algebra is a bracket-closed
    subspace of the (0,1) space (default: all of it), the module is the
    p-th exterior power of the dual (1,0) space under the projected
    adjoint action, and ``sub`` must be a d-stable ideal of the ambient.
    Real case (J None): the ambient is the whole algebra, p must be 0,
    and ``sub`` is an ideal.
    """
    if J is not None:
        split = pq_splitting(J)
        field = split.field
        n = g.n
        m = split.m
        gc = g.extend_field(field)
        if ambient_space is None:
            ambient_space = Subspace(field, n, [list(v) for v in split.Xbar])
        sub = sub_labels_or_space
        frame = _adapted_frame(field, n, sub, ambient_space)
        ell = len(frame)
        coords = _frame_coords(field, frame, n)
        brackets = {}
        for a, b in combinations(range(ell), 2):
            w = coords(gc.bracket(frame[a], frame[b]))
            comps = {c: v for c, v in enumerate(w) if v}
            if comps:
                brackets[(a, b)] = comps
        # module: Lambda^p of the dual (1,0) space
        mdim_vec = m
        actions = []
        for a in range(ell):
            cols = []
            for v in range(mdim_vec):
                w = split.Tinv.apply(gc.bracket(frame[a], split.X[v]))
                cols.append(list(w[:mdim_vec]))
            A = Matrix.from_columns(field, cols, nrows=mdim_vec)
            Bdual = Matrix(field, [[-A.rows[t][s] for t in range(mdim_vec)]
                                   for s in range(mdim_vec)],
                           ncols=mdim_vec)
            actions.append(derivation_power(field, Bdual, p))
        mdim = len(wedge_basis(mdim_vec, p))
    else:
        if p != 0:
            raise UnsupportedError(
                "real-coefficient case supports only trivial coefficients "
                "(p = 0)")
        field = g.field
        n = g.n
        sub = sub_labels_or_space
        if ambient_space is None:
            ambient_space = g.full_space()
        frame = _adapted_frame(field, n, sub, ambient_space)
        ell = len(frame)
        coords = _frame_coords(field, frame, n)
        brackets = {}
        for a, b in combinations(range(ell), 2):
            w = coords(g.bracket(frame[a], frame[b]))
            comps = {c: v for c, v in enumerate(w) if v}
            if comps:
                brackets[(a, b)] = comps
        mdim = 1
        actions = [Matrix.zeros(field, 1, 1) for _ in range(ell)]

    r_sub = sub.dim
    n_quot = ell - r_sub
    # ideal check: [ambient, sub] inside sub (adapted letters < r_sub)
    for a in range(ell):
        for b in range(r_sub):
            if a == b:
                continue
            lo, hi = min(a, b), max(a, b)
            comps = brackets.get((lo, hi), {})
            if any(c >= r_sub for c in comps):
                raise StructureError(
                    "sub is not an ideal of the ambient algebra",
                    witness=(a + 1, b + 1))

    dims, d = lie_module_complex(field, ell, brackets, actions, mdim)

    # annihilator filtration: level s spans monomials with at least s
    # quotient letters
    filtration = {}
    zero, one = field.zero(), field.one()
    for k in range(ell + 1):
        basis_k = wedge_basis(ell, k)
        chain = []
        for s in range(n_quot + 2):
            vecs = []
            for idx, mono in enumerate(basis_k):
                if sum(1 for x in mono if x >= r_sub) >= s:
                    for v in range(mdim):
                        vec = [zero] * dims[k]
                        vec[idx * mdim + v] = one
                        vecs.append(vec)
            chain.append(Subspace(field, dims[k], vecs))
        filtration[k] = chain
    fc = FilteredComplex(field, dims, d, filtration)
    pg = pages(fc)

    # independent second page: H^r(quotient, H^s(sub, module))
    sub_brackets = {k: v for k, v in brackets.items() if k[1] < r_sub}
    sub_dims, sub_d = lie_module_complex(field, r_sub, sub_brackets,
                                         actions[:r_sub], mdim)
    coh = cohomology_with_reps(field, sub_dims, sub_d)

    sub_basis_monos = {t: wedge_basis(r_sub, t) for t in range(r_sub + 1)}

    def theta_matrix(letter, t):
        """Action of an ambient letter on C^t(sub, module)."""
        # coadjoint part on the sub duals
        ad_cols = []
        for b in range(r_sub):
            lo, hi = min(letter, b), max(letter, b)
            comps = brackets.get((lo, hi), {})
            sgn = 1 if letter < b else -1
            col = [zero] * r_sub
            for c, v in comps.items():
                if c < r_sub:
                    col[c] = v if sgn > 0 else -v
            ad_cols.append(col)
        Ad = Matrix.from_columns(field, ad_cols, nrows=r_sub)
        Bdual = Matrix(field, [[-Ad.rows[tt][ss] for tt in range(r_sub)]
                               for ss in range(r_sub)], ncols=r_sub)
        Dpart = derivation_power(field, Bdual, t)
        nmono = len(sub_basis_monos[t])
        rows = [[zero] * (nmono * mdim) for _ in range(nmono * mdim)]
        act = actions[letter]
        for i in range(nmono):
            for jj in range(nmono):
                c = Dpart.rows[i][jj]
                if c:
                    for v in range(mdim):
                        rows[i * mdim + v][jj * mdim + v] = (
                            rows[i * mdim + v][jj * mdim + v] + c)
        for i in range(nmono):
            for w in range(mdim):
                for v in range(mdim):
                    c = act.rows[w][v]
                    if c:
                        rows[i * mdim + w][i * mdim + v] = (
                            rows[i * mdim + w][i * mdim + v] + c)
        return Matrix(field, rows, ncols=nmono * mdim)

    quot_brackets = {}
    for a, b in combinations(range(n_quot), 2):
        comps = brackets.get((a + r_sub, b + r_sub), {})
        qcomps = {c - r_sub: v for c, v in comps.items() if c >= r_sub}
        if qcomps:
            quot_brackets[(a, b)] = qcomps

    e2_direct = {}
    for t in range(r_sub + 1):
        reps, reducer = coh[t]
        hdim = len(reps)
        if hdim == 0:
            continue
        h_actions = []
        for a in range(n_quot):
            th = theta_matrix(a + r_sub, t)
            cols = [list(reducer(th.apply(z))) for z in reps]
            h_actions.append(Matrix.from_columns(field, cols, nrows=hdim))
        qdims, qd = lie_module_complex(field, n_quot, quot_brackets,
                                       h_actions, hdim)
        prev_rank = 0
        for s in range(n_quot + 1):
            rk = rank(qd[s]) if s in qd else 0
            val = qdims[s] - rk - prev_rank
            prev_rank = rk
            if val:
                e2_direct[(s, t)] = val

    e2_filtration = {k: v for k, v in pg.page(2).items() if v}
    return HochschildSerre(pg, e2_direct, e2_filtration,
                           {"module_dim": mdim, "sub_dim": r_sub,
                            "quotient_dim": n_quot})
