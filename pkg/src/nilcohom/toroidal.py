"""Abelian complex Lie groups from period data.

A discrete subgroup of C^n is described by generators whose entries are
rational combinations of a declared, finite set of real numbers
(together with i times them) asserted linearly independent over Q.
Within that declared model everything here is exactly decidable:

* ``toroidal_normalize`` puts the generator matrix into the block
  normal form  [zero rows; I_k R; 0 P]  by an invertible complex
  coordinate change and integral column operations, where R is a real
  glueing block and P the period of a compact torus of rank q.
* ``remmert_morimoto`` splits off C^a and (C^*)^b factors until the
  remainder satisfies the irrationality condition
  (no integer sigma != 0 with sigma^t R integral).
* ``theta_classify`` decides the exponential Diophantine dichotomy on
  R: certified through an effective Liouville bound when the single
  irrational entry is a quadratic surd, and evidence-graded through
  certified enclosures and convergent growth ratios otherwise.

Period document format (JSON):

    {
      "dimension": 2,
      "numbers": {
        "a": {"type": "sqrt", "d": 2}
             | {"type": "quadratic", "poly": [A, B, C], "root": "plus"}
             | {"type": "rational", "value": "1/2"}
             | {"type": "formal"}
             | {"type": "convergents", "family": "liouville10"}
             | {"type": "convergents", "family": "power-tower",
                "base": 2, "start": 4}
      },
      "generators": [["1", "0"], ["0", "1"], ["a", "i"]]
    }

Generator entries use the grammar

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := rational | "i" | name | "(" expr ")" | "-" factor
    rational := digits ["/" digits]

with at most one quadratic number and at most one formal/convergent
parameter declared (field towers are two levels deep at most).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from itertools import product as iter_product

from .errors import (
    ParseError,
    PrecisionUnavailable,
    StructureError,
    UnsupportedError,
)
from .exact.fields import (
    QQ,
    QuadSurd,
    QuadraticField,
    build_field,
    complexify,
)
from .exact.intlattice import (
    hermite_row,
    integer_kernel,
    rational_rows_to_integer,
)
from .exact.linalg import Matrix, Subspace, invert, rank, solve
from .exact.numbers import (
    ConvergentSeries,
    ExactRational,
    NumberSpec,
    QuadraticSurd,
    convergent_family,
)

DEFAULT_SCAN_BOUND = 1000


# ---------------------------------------------------------------------------
# period data


class PeriodData:
    """Generators of a discrete subgroup of C^n over a declared real
    tower field, with certified-number bindings for the irrational
    basis elements."""

    def __init__(self, field, n: int, generators, bindings=None):
        self.field = field
        self.cfield = complexify(field)
        self.n = n
        gens = []
        for v in generators:
            if len(v) != n:
                raise StructureError("generator has the wrong length")
            gens.append(tuple(self.cfield.coerce(x) for x in v))
        self.generators = tuple(gens)
        self.bindings = dict(bindings or {})
        if (1, 0) not in self.bindings and isinstance(field, QuadraticField):
            self.bindings[(1, 0)] = QuadraticSurd(1, 0, -field.d, "plus")
        base = getattr(field, "base", None)
        if (1, 0) not in self.bindings and isinstance(base, QuadraticField):
            self.bindings[(1, 0)] = QuadraticSurd(1, 0, -base.d, "plus")
        m = self.real_matrix()
        if rank(m) != len(self.generators):
            raise StructureError(
                "generators are not linearly independent over the reals")

    @property
    def m(self):
        return len(self.generators)

    def real_matrix(self) -> Matrix:
        """2n x m matrix of real coordinates (Re block over Im block)."""
        cols = []
        for g in self.generators:
            cols.append([x.re for x in g] + [x.im for x in g])
        return Matrix.from_columns(self.field, cols, nrows=2 * self.n)

    def __repr__(self):
        return f"PeriodData(n={self.n}, m={self.m}, field={self.field!r})"


def _complex_from_real(cfield, vec_2n, n):
    i = cfield.i()
    return tuple(cfield.coerce(vec_2n[j]) + i * cfield.coerce(vec_2n[n + j])
                 for j in range(n))


class ToroidalNormalForm:
    """Result of the block normalisation: counts a (copies of C),
    k (glueing rows), rank q, the real glueing matrix R, the torus
    period P, the complex coordinate change, and the unimodular column
    bookkeeping."""

    def __init__(self, pd, change, column_order, column_signs, a, k, q,
                 R, P):
        self.pd = pd
        self.change = change
        self.column_order = column_order
        self.column_signs = column_signs
        self.a = a
        self.k = k
        self.q = q
        self.R = R
        self.P = P

    @property
    def b(self):
        """Visible (C^*)^b rows: only when there is no torus part."""
        return self.k if self.q == 0 else 0

    def display_rows(self):
        """The (k+q) x (k+2q) block matrix [I_k R; 0 P] over the
        complexified field."""
        cf = self.pd.cfield
        zero, one = cf.zero(), cf.one()
        rows = []
        for i in range(self.k):
            row = [one if j == i else zero for j in range(self.k)]
            row += [cf.coerce(self.R.rows[i][j]) for j in range(2 * self.q)]
            rows.append(row)
        for i in range(self.q):
            row = [zero] * self.k + list(self.P.rows[i])
            rows.append(row)
        return tuple(tuple(r) for r in rows)

    def __repr__(self):
        return (f"ToroidalNormalForm(a={self.a}, k={self.k}, q={self.q})")


def toroidal_normalize(pd: PeriodData) -> ToroidalNormalForm:
    """Choose coordinates adapted to the maximal complex subspace of
    the real span and return the block normal form."""
    field, cfield, n = pd.field, pd.cfield, pd.n
    m = pd.m
    real = pd.real_matrix()
    # multiplication by i on real coordinates: (x, y) -> (-y, x)
    zero, one = field.zero(), field.one()
    i_rows = []
    for j in range(n):
        i_rows.append([zero] * n + [-one if t == j else zero
                                    for t in range(n)])
    for j in range(n):
        i_rows.append([one if t == j else zero for t in range(n)]
                      + [zero] * n)
    i_mat = Matrix(field, i_rows, ncols=2 * n)
    S = Subspace(field, 2 * n, [real.column(j) for j in range(m)])
    f0_real = S.intersect(S.image_under(i_mat))
    if f0_real.dim % 2:
        raise StructureError("maximal complex subspace has odd real "
                             "dimension; independence data inconsistent")
    q = f0_real.dim // 2
    k = m - 2 * q
    if k < 0:
        raise StructureError("lattice rank exceeds twice the rank of the "
                             "maximal complex subspace")

    # generators spanning a real complement of f0 inside the span
    selected = []
    span = f0_real
    for j in range(m):
        col = real.column(j)
        if not span.contains(col):
            selected.append(j)
            span = span.sum_(Subspace(field, 2 * n, [list(col)]))
        if len(selected) == k:
            break
    if len(selected) != k:
        raise StructureError("could not select a lattice complement")
    torus_cols = [j for j in range(m) if j not in selected]

    # complex basis of f0
    f0_cvecs = []
    cspan = Subspace.zero(cfield, n)
    for v in f0_real.basis:
        cv = _complex_from_real(cfield, v, n)
        if not cspan.contains(cv):
            f0_cvecs.append(cv)
            cspan = cspan.sum_(Subspace(cfield, n, [list(cv)]))
        if len(f0_cvecs) == q:
            break

    u_vecs = [pd.generators[j] for j in selected]
    basis_cols = [list(v) for v in u_vecs] + [list(v) for v in f0_cvecs]
    cur = Subspace(cfield, n, basis_cols)
    extra = []
    for t in range(n):
        if cur.dim == n:
            break
        cand = [cfield.from_int(1 if s == t else 0) for s in range(n)]
        if not cur.contains(cand):
            extra.append(cand)
            basis_cols.append(cand)
            cur = Subspace(cfield, n, basis_cols)
    a = len(extra)
    if k + q + a != n:
        raise StructureError("coordinate construction failed")
    T = Matrix.from_columns(cfield, basis_cols, nrows=n)
    change = invert(T)

    def new_coords(j):
        return change.apply(pd.generators[j])

    # glueing entries must be real and the bottom block zero
    def real_part(x):
        if x.im:
            raise StructureError("normalisation produced a non-real "
                                 "glueing entry")
        return x.re

    signs = {j: 1 for j in range(m)}

    def torus_coord_rows():
        R_rows = [[] for _ in range(k)]
        P_rows = [[] for _ in range(q)]
        for j in order_torus:
            c = new_coords(j)
            if signs[j] < 0:
                c = tuple(-x for x in c)
            for t in range(k + q, n):
                if c[t]:
                    raise StructureError("nonzero coordinate outside the "
                                         "span; normalisation failed")
            for i in range(k):
                R_rows[i].append(real_part(c[i]))
            for i in range(q):
                P_rows[i].append(c[k + i])
        return R_rows, P_rows

    # order the torus columns so the first q have independent P-parts
    order_torus = list(torus_cols)
    psel = []
    pspan = Subspace.zero(cfield, q)
    rest = []
    for j in torus_cols:
        c = new_coords(j)
        pv = list(c[k:k + q])
        if len(psel) < q and not pspan.contains(pv):
            psel.append(j)
            pspan = pspan.sum_(Subspace(cfield, q, [pv]))
        else:
            rest.append(j)
    if len(psel) != q:
        raise StructureError("could not select torus periods")
    order_torus = psel + rest

    # rescale the f0 coordinates so the selected periods become I_q
    if q:
        Psel = Matrix.from_columns(
            cfield, [[new_coords(j)[k + i] for i in range(q)] for j in psel],
            nrows=q)
        Pinv = invert(Psel)
        rows = []
        for i in range(k):
            rows.append(list(change.rows[i]))
        for i in range(q):
            rows.append([sum((Pinv.rows[i][t] * change.rows[k + t][s]
                              for t in range(q)), cfield.zero())
                         for s in range(n)])
        for i in range(k + q, n):
            rows.append(list(change.rows[i]))
        change = Matrix(cfield, rows, ncols=n)

    R_rows, P_rows = torus_coord_rows()

    # rank-1 torus: orient the modulus into the upper half plane
    if q == 1 and len(order_torus) == 2:
        tau = P_rows[0][1]
        if field.sign(tau.im) < 0:
            j = order_torus[1]
            signs[j] = -signs[j]
            R_rows, P_rows = torus_coord_rows()

    # orient each glueing row: first nonzero entry formally positive
    flip_rows = []
    for i in range(k):
        lead = next((x for x in R_rows[i] if x), None)
        if lead is not None and field.sign(lead) < 0:
            flip_rows.append(i)
    if flip_rows:
        rows = []
        for i in range(n):
            if i in flip_rows:
                rows.append([-x for x in change.rows[i]])
            else:
                rows.append(list(change.rows[i]))
        change = Matrix(cfield, rows, ncols=n)
        for i in flip_rows:
            j = selected[i]
            signs[j] = -signs[j]
        R_rows, P_rows = torus_coord_rows()

    column_order = list(selected) + order_torus
    column_signs = [signs[j] for j in column_order]
    R = Matrix(field, R_rows, ncols=2 * q)
    P = Matrix(cfield, P_rows, ncols=2 * q)
    return ToroidalNormalForm(pd, change, column_order, column_signs,
                              a, k, q, R, P)


def normal_form_period_data(nf: ToroidalNormalForm) -> PeriodData:
    """The toroidal block itself as period data of dimension k + q."""
    rows = nf.display_rows()
    gens = [[rows[i][j] for i in range(nf.k + nf.q)]
            for j in range(nf.k + 2 * nf.q)]
    return PeriodData(nf.pd.field, nf.k + nf.q, gens, nf.pd.bindings)


# ---------------------------------------------------------------------------
# irrationality condition and the Remmert-Morimoto splitting


def glueing_labels(R: Matrix):
    """Decompose R = sum_label alpha_label * R_label with rational
    matrices, over the monomial labels of the declared basis."""
    field = R.field
    labels = {}
    for i in range(R.nrows):
        for j in range(R.ncols):
            for lab, c in field.q_labels(R.rows[i][j]).items():
                labels.setdefault(lab, {})[(i, j)] = c
    out = {}
    for lab, entries in sorted(labels.items()):
        out[lab] = [[entries.get((i, j), Fraction(0))
                     for j in range(R.ncols)] for i in range(R.nrows)]
    return out


def check_irrationality(R: Matrix):
    """None when no nonzero integer sigma has sigma^t R integral;
    otherwise one such witness sigma (a tuple of ints)."""
    kdim = R.nrows
    if kdim == 0:
        return None
    labels = glueing_labels(R)
    irrational_rows = []
    for lab, mat in labels.items():
        if lab == (0, 0):
            continue
        # sigma^t R_lab = 0  <=>  R_lab^t sigma = 0
        for j in range(R.ncols):
            irrational_rows.append([mat[i][j] for i in range(kdim)])
    if irrational_rows:
        int_rows = rational_rows_to_integer(irrational_rows)
        kernel = hermite_row(integer_kernel(int_rows))
    else:
        kernel = [[1 if i == j else 0 for j in range(kdim)]
                  for i in range(kdim)]
    if not kernel:
        return None
    sigma0 = kernel[0]
    r0 = labels.get((0, 0))
    den = 1
    if r0 is not None:
        for j in range(R.ncols):
            val = sum(Fraction(s) * r0[i][j] for i, s in enumerate(sigma0))
            den = den * val.denominator // math.gcd(den, val.denominator)
    return tuple(den * s for s in sigma0)


class RemmertMorimoto:
    def __init__(self, a, b, toroidal, normal_form):
        self.a = a
        self.b = b
        self.toroidal = toroidal
        self.normal_form = normal_form

    def __repr__(self):
        t = "none" if self.toroidal is None else f"dim {self.toroidal.n}"
        return f"RemmertMorimoto(a={self.a}, b={self.b}, toroidal={t})"


def _split_one_cstar(nf: ToroidalNormalForm, sigma):
    """Split off the C^* direction named by the witness sigma and
    return the reduced period data (one complex dimension fewer)."""
    cf = nf.pd.cfield
    k, q = nf.k, nf.q
    rows = [list(r) for r in nf.display_rows()]
    ncols = k + 2 * q
    # invertible coordinate change on the k-block sending the first
    # coordinate to sigma . z; rows are coordinates, so this need not
    # be integral (only column operations must preserve the lattice)
    sig = list(sigma)
    top = [sig]
    span = Subspace(QQ, k, [[Fraction(x) for x in sig]])
    for t in range(k):
        if span.dim == k:
            break
        cand = [1 if s == t else 0 for s in range(k)]
        if not span.contains([Fraction(x) for x in cand]):
            top.append(cand)
            span = span.sum_(Subspace(QQ, k, [[Fraction(x) for x in cand]]))
    new_rows = []
    for trow in top:
        new_rows.append([
            sum((cf.from_int(trow[s]) * rows[s][j] for s in range(k)),
                cf.zero()) for j in range(ncols)])
    rows = new_rows + rows[k:]
    # integer column operations clear row 0 down to a single 1
    def col_sub(dst, src, mult: int):
        for irow in range(len(rows)):
            rows[irow][dst] = rows[irow][dst] - cf.from_int(mult) * rows[irow][src]

    def entry0(j) -> int:
        x = rows[0][j]
        lab = nf.pd.field.q_labels(x.re)
        if x.im or set(lab) - {(0, 0)}:
            raise StructureError("witness row is not integral")
        val = lab.get((0, 0), Fraction(0))
        if val.denominator != 1:
            raise StructureError("witness row is not integral")
        return int(val)

    while True:
        nz = [j for j in range(ncols) if entry0(j)]
        if not nz:
            raise StructureError("witness column reduction failed")
        jmin = min(nz, key=lambda j: abs(entry0(j)))
        done = True
        for j in nz:
            if j == jmin:
                continue
            mult = entry0(j) // entry0(jmin)
            if mult:
                col_sub(j, jmin, mult)
            if entry0(j):
                done = False
        if done and len([j for j in range(ncols) if entry0(j)]) == 1:
            piv = jmin
            break
    if entry0(piv) < 0:
        for irow in range(len(rows)):
            rows[irow][piv] = -rows[irow][piv]
    g = entry0(piv)
    if g != 1:
        # the lattice meets the split direction in g Z: rescale the
        # coordinate so the factor is C/Z
        ginv = cf.coerce(Fraction(1, g))
        rows[0] = [ginv * x for x in rows[0]]
    # clear the remaining coordinates of the pivot column by row ops
    for irow in range(1, len(rows)):
        c = rows[irow][piv]
        if c:
            rows[irow] = [rows[irow][j] - c * rows[0][j]
                          for j in range(ncols)]
    reduced = [[rows[irow][j] for irow in range(1, k + q)]
               for j in range(ncols) if j != piv]
    return PeriodData(nf.pd.field, k + q - 1, reduced, nf.pd.bindings)


def remmert_morimoto(pd: PeriodData) -> RemmertMorimoto:
    """Split F into C^a x (C^*)^b x (toroidal part), iterating the
    witness search until the irrationality condition holds."""
    nf = toroidal_normalize(pd)
    a = nf.a
    b = 0
    for _ in range(pd.n + 1):
        if nf.k == 0 and nf.q == 0:
            return RemmertMorimoto(a, b, None, None)
        if nf.q == 0:
            return RemmertMorimoto(a, b + nf.k, None, None)
        sigma = check_irrationality(nf.R)
        if sigma is None:
            return RemmertMorimoto(a, b, normal_form_period_data(nf), nf)
        reduced = _split_one_cstar(nf, sigma)
        b += 1
        nf = toroidal_normalize(reduced)
    raise StructureError("Remmert-Morimoto iteration failed to terminate")


# ---------------------------------------------------------------------------
# the theta / wild dichotomy


class ThetaVerdict:
    kind = "abstract"

    def as_dict(self):
        return {"kind": self.kind}


class NotToroidal(ThetaVerdict):
    kind = "not-toroidal"

    def __init__(self, witness):
        self.witness = tuple(witness)

    def as_dict(self):
        return {"kind": self.kind, "witness": list(self.witness)}

    def __repr__(self):
        return f"NotToroidal(witness={self.witness})"


class ThetaCertified(ThetaVerdict):
    kind = "theta-certified"

    def __init__(self, radius, certificate):
        self.radius = radius
        self.certificate = certificate

    def as_dict(self):
        return {"kind": self.kind, "radius": str(self.radius),
                "certificate": self.certificate}

    def __repr__(self):
        return f"ThetaCertified(radius={self.radius})"


class WildEvidence(ThetaVerdict):
    kind = "wild-evidence"

    def __init__(self, ratios):
        self.ratios = list(ratios)
        self.verdict = "divergent over computed range"

    def as_dict(self):
        return {"kind": self.kind, "ratios": self.ratios,
                "verdict": self.verdict}

    def __repr__(self):
        return f"WildEvidence(ratios={self.ratios})"


class Undetermined(ThetaVerdict):
    kind = "undetermined"

    def __init__(self, scan_bound, max_ratio, reason=""):
        self.scan_bound = scan_bound
        self.max_ratio = max_ratio
        self.reason = reason

    def as_dict(self):
        return {"kind": self.kind, "scan_bound": self.scan_bound,
                "max_ratio": self.max_ratio, "reason": self.reason}

    def __repr__(self):
        return f"Undetermined(N={self.scan_bound}, reason={self.reason!r})"


def _iv_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _iv_scale(c: Fraction, a):
    lo, hi = c * a[0], c * a[1]
    return (lo, hi) if lo <= hi else (hi, lo)


def _iv_mul(a, b):
    vals = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    return (min(vals), max(vals))


def _iv_pow(a, k: int):
    out = (Fraction(1), Fraction(1))
    for _ in range(k):
        out = _iv_mul(out, a)
    return out


class _Evaluator:
    """Certified interval evaluation of field elements through the
    declared-number bindings."""

    def __init__(self, field, bindings):
        self.field = field
        self.bindings = bindings

    def has_numeric_model(self, element) -> bool:
        for (eps, kk) in self.field.q_labels(element):
            if eps and (1, 0) not in self.bindings:
                return False
            if kk and ((0, 1) not in self.bindings
                       or self.bindings[(0, 1)] is None):
                return False
        return True

    def interval(self, element, width: Fraction):
        labels = self.field.q_labels(element)
        if not labels:
            return (Fraction(0), Fraction(0))
        nterms = len(labels)
        out = (Fraction(0), Fraction(0))
        for (eps, kk), c in sorted(labels.items()):
            part_width = width / (nterms * (abs(c) + 1) * (eps + kk + 1) * 4)
            iv = (Fraction(1), Fraction(1))
            if eps:
                iv = _iv_mul(iv, self.bindings[(1, 0)].enclosure(part_width))
            if kk:
                base = self.bindings[(0, 1)].enclosure(part_width)
                iv = _iv_mul(iv, _iv_pow(base, kk))
            out = _iv_add(out, _iv_scale(c, iv))
        return out

    def exact_rational(self, element):
        labels = self.field.q_labels(element)
        if set(labels) <= {(0, 0)}:
            return labels.get((0, 0), Fraction(0))
        return None


def _dist_interval_to_z(iv):
    """Interval (possibly undecided) of the distance to the nearest
    integer; returns None when the enclosing cell is undecided."""
    lo, hi = iv
    nearest = math.floor((lo + hi) / 2 + Fraction(1, 2))
    if not (nearest - Fraction(1, 2) <= lo and hi <= nearest + Fraction(1, 2)):
        return None
    if hi < nearest:
        return (nearest - hi, nearest - lo)
    if lo > nearest:
        return (lo - nearest, hi - nearest)
    return (Fraction(0), max(nearest - lo, hi - nearest))


def _entry_dist(ev: _Evaluator, value, need_below=None):
    """Certified interval of dist(value, Z), refined until the nearest
    integer is pinned and, when ``need_below`` is given, until the
    comparison with it is decided."""
    exact = ev.exact_rational(value)
    if exact is not None:
        fl = math.floor(exact)
        d = min(exact - fl, fl + 1 - exact)
        return (d, d)
    width = Fraction(1, 16)
    for _ in range(300):
        iv = ev.interval(value, width)
        div = _dist_interval_to_z(iv)
        if div is not None:
            if need_below is None:
                if div[1] - div[0] <= max(div[0] / 4, Fraction(1, 2**40)):
                    return div
            else:
                if div[0] >= need_below or div[1] < need_below:
                    return div
        width /= 16
    raise PrecisionUnavailable("distance enclosure failed to converge")


def _sigma_shells(kdim: int, bound: int):
    """Nonzero integer vectors grouped by sup-norm shell; one of each
    antipodal pair."""
    for s in range(1, bound + 1):
        shell = []
        rng = range(-s, s + 1)
        for vec in iter_product(rng, repeat=kdim):
            if max(abs(x) for x in vec) != s:
                continue
            first = next(x for x in vec if x)
            if first < 0:
                continue
            shell.append(vec)
        yield s, shell


def theta_classify(R: Matrix, bindings=None, scan_bound=None,
                   convergent_source=None,
                   certify_cutoff: int = 100) -> ThetaVerdict:
    """Classify the glueing matrix: NotToroidal with a witness, a
    certified theta radius for the quadratic-surd shape, wild evidence
    from convergent growth ratios, or Undetermined with scan data."""
    scan_bound = scan_bound or DEFAULT_SCAN_BOUND
    witness = check_irrationality(R)
    if witness is not None:
        return NotToroidal(witness)
    field = R.field
    ev = _Evaluator(field, bindings or {})
    kdim, width2q = R.nrows, R.ncols
    if kdim == 0:
        return ThetaCertified(Fraction(3),
                              {"note": "no glueing rows (compact torus)"})

    certified = _try_certify_quadratic(R, ev, certify_cutoff)
    if certified is not None:
        return certified

    if convergent_source is not None:
        ratios = convergent_source.convergent_ratios()
        if len(ratios) >= 3 and all(ratios[i] < ratios[i + 1]
                                    for i in range(len(ratios) - 1)):
            return WildEvidence(ratios)

    numeric = all(ev.has_numeric_model(R.rows[i][j])
                  for i in range(kdim) for j in range(width2q))
    if not numeric:
        return Undetermined(0, None,
                            "formal parameter present: supply a value or "
                            "a convergent source")
    max_ratio = 0.0
    try:
        for s, shell in _sigma_shells(kdim, scan_bound):
            for sigma in shell:
                dists = []
                for j in range(width2q):
                    val = sum((field.coerce(Fraction(sigma[i])) * R.rows[i][j]
                               for i in range(kdim)), field.zero())
                    dists.append(_entry_dist(ev, val))
                dlo = max(d[0] for d in dists)
                dhi = max(d[1] for d in dists)
                if dhi <= 0:
                    return NotToroidal(sigma)
                if dlo > 0:
                    ratio = -math.log(float(dlo)) / s
                    max_ratio = max(max_ratio, ratio)
    except PrecisionUnavailable as exc:
        return Undetermined(scan_bound, max_ratio, str(exc))
    if convergent_source is not None:
        ratios = convergent_source.convergent_ratios()
        return Undetermined(scan_bound, max_ratio,
                            "convergent ratios not increasing: "
                            f"{ratios}")
    return Undetermined(scan_bound, max_ratio, "no certificate applies")


def _try_certify_quadratic(R: Matrix, ev: _Evaluator, cutoff: int):
    """Effective Liouville certificate for one glueing row whose single
    irrational entry is a declared quadratic surd."""
    field = R.field
    if R.nrows != 1:
        return None
    surd_spec = ev.bindings.get((1, 0))
    irrational_cols = []
    for j in range(R.ncols):
        labels = field.q_labels(R.rows[0][j])
        extra = set(labels) - {(0, 0)}
        if not extra:
            continue
        if extra != {(1, 0)} or surd_spec is None:
            return None
        irrational_cols.append(j)
    if len(irrational_cols) != 1:
        return None
    j = irrational_cols[0]
    labels = field.q_labels(R.rows[0][j])
    c0 = labels.get((0, 0), Fraction(0))
    c1 = labels[(1, 0)]
    # minimal polynomial of beta = c0 + c1 * alpha with alpha^2 = d
    d = -surd_spec.C if (surd_spec.A, surd_spec.B) == (1, 0) else None
    if d is None:
        u, v, dd = surd_spec.quad_field_coords()
        c0, c1, d = c0 + c1 * u, c1 * v, dd
    # (x - c0)^2 = c1^2 d
    bq = -2 * c0
    cq = c0 * c0 - c1 * c1 * d
    den = math.lcm(bq.denominator, cq.denominator)
    A, B, C = den, int(bq * den), int(cq * den)
    beta = QuadraticSurd(A, B, C,
                         "plus" if c1 > 0 else "minus")
    M = beta.liouville_constant()
    radius = Fraction(max(3, M))
    # direct confirmation on small witnesses, in exact arithmetic
    qd = QuadraticField(d)
    beta_exact = QuadSurd(c0, c1, d)
    for s in range(1, cutoff + 1):
        val = beta_exact * s
        dist = _qsurd_dist_to_z(val, qd)
        if not _qsurd_ge_fraction(dist, radius ** (-s), qd):
            return None
    cert = {
        "column": j + 1,
        "min_poly": [A, B, C],
        "liouville_constant": M,
        "cutoff_checked": cutoff,
    }
    return ThetaCertified(radius, cert)


def _qsurd_floor(x: QuadSurd, qd: QuadraticField) -> int:
    if x.v == 0:
        return math.floor(x.u)
    spec = QuadraticSurd(1, 0, -qd.d, "plus")
    width = Fraction(1, 4)
    for _ in range(200):
        lo, hi = spec.enclosure(width)
        xlo = x.u + x.v * (lo if x.v > 0 else hi)
        xhi = x.u + x.v * (hi if x.v > 0 else lo)
        if math.floor(xlo) == math.floor(xhi):
            return math.floor(xlo)
        width /= 16
    raise PrecisionUnavailable("floor of quadratic surd did not resolve")


def _qsurd_dist_to_z(x: QuadSurd, qd: QuadraticField) -> QuadSurd:
    fl = _qsurd_floor(x, qd)
    frac = x - fl
    other = -(frac - 1)
    return frac if (frac - other).sign() < 0 else other


def _qsurd_ge_fraction(x: QuadSurd, c: Fraction, qd) -> bool:
    return (x - c).sign() >= 0


# ---------------------------------------------------------------------------
# Hausdorff Dolbeault dimensions and leaf analysis


def hausdorff_hodge(pd: PeriodData, p: int, qprime: int) -> int:
    """dim of the (p, q') invariant block: binom(n, p) * binom(q, q')
    for a toroidal group of rank q; the exact cohomology in the theta
    case and the Hausdorff quotient in the wild case."""
    rm = remmert_morimoto(pd)
    if rm.toroidal is None or rm.a or rm.b:
        raise UnsupportedError(
            "period data is not toroidal: Remmert-Morimoto gives "
            f"a={rm.a}, b={rm.b}")
    n = rm.toroidal.n
    qrank = rm.normal_form.q
    if p < 0 or qprime < 0:
        raise ValueError("degrees must be nonnegative")
    return math.comb(n, p) * math.comb(qrank, qprime)


class LeafAnalysis:
    def __init__(self, lattice_coeffs, lattice_vectors, period, rm,
                 theta, classification):
        self.lattice_coeffs = lattice_coeffs
        self.lattice_vectors = lattice_vectors
        self.period = period
        self.rm = rm
        self.theta = theta
        self.classification = classification

    def __repr__(self):
        return f"LeafAnalysis({self.classification!r})"


def complex_coordinates_on(J, f: Subspace):
    """A complex coordinate map on a J-invariant subspace: greedy basis
    pairs (b, Jb), vectors mapped to tuples x + i y of the pair
    coordinates."""
    g = J.ambient
    field = g.field
    pairs = []
    span = Subspace.zero(field, g.n)
    for v in f.basis:
        if span.contains(v):
            continue
        jv = J.apply(v)
        pairs.append((v, jv))
        span = span.sum_(Subspace(field, g.n, [list(v), list(jv)]))
    cols = []
    for v, jv in pairs:
        cols.append(list(v))
        cols.append(list(jv))
    mat = Matrix.from_columns(field, cols, nrows=g.n)
    cfield = complexify(field)
    i = cfield.i()

    def coords(vec):
        x = solve(mat, vec)
        if x is None:
            raise StructureError("vector outside the subspace")
        return tuple(cfield.coerce(x[2 * t]) + i * cfield.coerce(x[2 * t + 1])
                     for t in range(len(pairs)))

    return coords, len(pairs)


def leaf_analysis(g, J, L, f: Subspace, param_spec=None,
                  scan_bound=None) -> LeafAnalysis:
    """Compute the leaf lattice inside an abelian J-invariant ideal,
    emit its period data in the complex coordinates induced by J, and
    classify: compact torus (fibration), toroidal theta/wild, or a
    leaf with extra flat factors."""
    from .cxstruct import is_j_invariant
    from .liealg import is_abelian_subspace, is_ideal, lattice_intersection

    if not is_j_invariant(J, f):
        raise StructureError("ideal is not J-invariant")
    if not is_ideal(g, f):
        raise StructureError("subspace is not an ideal")
    if not is_abelian_subspace(g, f):
        raise StructureError("ideal is not abelian")
    coeffs, vectors = lattice_intersection(L, f)
    coords, nf2 = complex_coordinates_on(J, f)
    gens = [coords(v) for v in vectors]
    bindings = {}
    if param_spec is not None:
        bindings[(0, 1)] = param_spec
    pd = PeriodData(g.field, nf2, gens, bindings)
    if len(vectors) == f.dim:
        return LeafAnalysis(coeffs, vectors, pd, None, None,
                            "compact torus")
    rm = remmert_morimoto(pd)
    if rm.toroidal is None or rm.a or rm.b:
        return LeafAnalysis(
            coeffs, vectors, pd, rm, None,
            f"leaf with flat factors (a={rm.a}, b={rm.b})")
    source = param_spec if isinstance(param_spec, ConvergentSeries) else None
    theta = theta_classify(rm.normal_form.R, pd.bindings,
                           scan_bound=scan_bound,
                           convergent_source=source)
    names = {
        "theta-certified": "toroidal theta (certified)",
        "wild-evidence": "toroidal wild (evidence)",
        "undetermined": "toroidal (theta/wild undetermined)",
    }
    return LeafAnalysis(coeffs, vectors, pd, rm, theta,
                        names.get(theta.kind, "toroidal"))


# ---------------------------------------------------------------------------
# period document parsing


def _parse_entry_expr(text: str, cfield, symbols):
    """Parse a generator entry in the documented grammar."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def peek():
        skip()
        return text[pos] if pos < len(text) else ""

    def parse_expr():
        nonlocal pos
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if text[pos] == "-" else 1
            pos += 1
        val = parse_term()
        if sign < 0:
            val = -val
        while peek() in ("+", "-"):
            op = text[pos]
            pos += 1
            rhs = parse_term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def parse_term():
        nonlocal pos
        val = parse_factor()
        while peek() == "*":
            pos += 1
            val = val * parse_factor()
        return val

    def parse_factor():
        nonlocal pos
        ch = peek()
        if ch == "-":
            pos += 1
            return -parse_factor()
        if ch == "(":
            pos += 1
            val = parse_expr()
            if peek() != ")":
                raise ParseError("expected ')'", pos)
            pos += 1
            return val
        if ch == "i":
            nxt = text[pos + 1] if pos + 1 < len(text) else ""
            if not (nxt.isalnum() or nxt == "_"):
                pos += 1
                return cfield.i()
        if ch.isdigit():
            start = pos
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            num = int(text[start:pos])
            if peek() == "/":
                pos += 1
                dstart = pos
                while pos < len(text) and text[pos].isdigit():
                    pos += 1
                if dstart == pos:
                    raise ParseError("expected denominator digits", pos)
                return cfield.coerce(Fraction(num, int(text[dstart:pos])))
            return cfield.from_int(num)
        if ch.isalpha() or ch == "_":
            start = pos
            while pos < len(text) and (text[pos].isalnum()
                                       or text[pos] == "_"):
                pos += 1
            name = text[start:pos]
            if name not in symbols:
                raise ParseError(f"unknown symbol {name!r}", start)
            return symbols[name]
        raise ParseError(f"unexpected character {ch!r}", pos)

    val = parse_expr()
    skip()
    if pos != len(text):
        raise ParseError("trailing input in entry", pos)
    return val


def number_spec_from_document(doc) -> NumberSpec | None:
    kind = doc.get("type")
    if kind == "rational":
        return ExactRational(Fraction(doc["value"]))
    if kind == "sqrt":
        return QuadraticSurd(1, 0, -int(doc["d"]), "plus")
    if kind == "quadratic":
        A, B, C = (int(x) for x in doc["poly"])
        return QuadraticSurd(A, B, C, doc.get("root", "plus"))
    if kind == "formal":
        return None
    if kind == "convergents":
        fam = doc.get("family")
        if fam == "power-tower":
            from .exact.numbers import power_tower

            return power_tower(int(doc.get("base", 2)),
                               int(doc.get("start", 4)))
        return convergent_family(fam)
    raise ParseError(f"unknown number type {kind!r}")


def period_data_from_document(doc) -> PeriodData:
    """Build period data from a parsed JSON document; see the module
    docstring for the grammar."""
    try:
        n = int(doc["dimension"])
        generators = doc["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed period document: {exc}") from None
    numbers = doc.get("numbers", {})
    surd_d = None
    param_name = None
    param_spec = None
    rational_values = {}
    surd_name = None
    for name, spec_doc in sorted(numbers.items()):
        spec = number_spec_from_document(spec_doc)
        if isinstance(spec, ExactRational):
            rational_values[name] = spec.value
        elif isinstance(spec, QuadraticSurd):
            if surd_d is not None:
                raise UnsupportedError(
                    "at most one quadratic number is supported (field "
                    "towers are two levels deep)")
            surd_name = name
            surd_spec = spec
            _, _, surd_d = spec.quad_field_coords()
        else:
            if param_name is not None:
                raise UnsupportedError(
                    "at most one formal/convergent parameter is supported")
            param_name = name
            param_spec = spec
    field = build_field(surd_d, param_name)
    cfield = complexify(field)
    symbols = {}
    for name, value in rational_values.items():
        symbols[name] = cfield.coerce(value)
    if surd_name is not None:
        u, v, d = surd_spec.quad_field_coords()
        surd_elt = QuadSurd(u, v, d)
        if param_name is not None:
            surd_elt = field.coerce(field.base.coerce(surd_elt))
        symbols[surd_name] = cfield.coerce(surd_elt)
    if param_name is not None:
        symbols[param_name] = cfield.coerce(field.gen())
    gens = []
    for row in generators:
        if len(row) != n:
            raise ParseError("generator row has the wrong length")
        gens.append([_parse_entry_expr(str(x), cfield, symbols)
                     for x in row])
    bindings = {}
    if surd_d is not None:
        bindings[(1, 0)] = QuadraticSurd(1, 0, -surd_d, "plus")
    if param_name is not None:
        bindings[(0, 1)] = param_spec
    return PeriodData(field, n, gens, bindings)


def load_period_file(path) -> PeriodData:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed period file: {exc}") from None
    except OSError as exc:
        raise ParseError(f"cannot read period file: {exc}") from None
    return period_data_from_document(doc)
