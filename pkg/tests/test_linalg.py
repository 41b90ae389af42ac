import random
from fractions import Fraction

import pytest

from nilcohom.exact import (
    QQ,
    Matrix,
    Subspace,
    invert,
    kernel_basis,
    rank,
    rank_fraction_free,
    rref,
)
from nilcohom.exact.fields import QuadraticField


def test_rref_identity():
    red, rk, piv = rref(Matrix.identity(QQ, 2))
    assert rk == 2 and piv == (0, 1)


def test_rref_zero_matrix():
    red, rk, piv = rref(Matrix.zeros(QQ, 3, 5))
    assert rk == 0 and piv == ()


def test_rref_dolbeault_matrix_cross_check(j0):
    # rank of the (0,1)-level matrix from the worked 6-dimensional
    # algebra, checked against the fraction-free oracle
    from nilcohom.cxstruct import dolbeault_complex

    bc = dolbeault_complex(j0, 0)
    m = bc.dbar[1]
    assert rank(m) == rank_fraction_free(m) == 1


def test_kernel_identity_empty():
    assert kernel_basis(Matrix.identity(QQ, 3)) == []


def test_kernel_zero_matrix():
    basis = kernel_basis(Matrix.zeros(QQ, 2, 3))
    assert len(basis) == 3


def _random_matrix(rng, rows, cols):
    return Matrix(QQ, [[Fraction(rng.randint(-4, 4),
                                 rng.randint(1, 3))
                        for _ in range(cols)] for _ in range(rows)],
                  ncols=cols)


def test_rank_nullity_random():
    rng = random.Random(7)
    for _ in range(40):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = _random_matrix(rng, rows, cols)
        assert cols == rank(m) + len(kernel_basis(m))


def test_rank_transpose_random_up_to_12():
    rng = random.Random(11)
    for trial in range(25):
        rows = rng.randint(1, 12)
        cols = rng.randint(1, 12)
        m = _random_matrix(rng, rows, cols)
        assert rank(m) == rank(m.transpose())
        assert rank(m) == rank_fraction_free(m)


def test_kernel_vectors_annihilated():
    rng = random.Random(3)
    for _ in range(20):
        m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        zero = tuple(QQ.zero() for _ in range(m.nrows))
        for v in kernel_basis(m):
            assert m.apply(v) == zero


def test_rref_over_quadratic_field():
    K = QuadraticField(2)
    r2 = K.gen()
    m = Matrix(K, [[r2, K.from_int(2)], [K.from_int(1), r2]])
    # second row is r2/2 times the first: rank 1
    assert rank(m) == 1
    assert rank_fraction_free(m) == 1


def test_invert_and_solve():
    m = Matrix(QQ, [[1, 2], [3, 4]])
    assert m * invert(m) == Matrix.identity(QQ, 2)
    with pytest.raises(ValueError):
        invert(Matrix(QQ, [[1, 2], [2, 4]]))


def test_mixed_field_entries_rejected():
    K = QuadraticField(2)
    with pytest.raises(TypeError):
        Matrix(QQ, [[K.gen(), 0]])


class TestSubspace:
    def test_canonical_equality(self):
        s1 = Subspace(QQ, 3, [[1, 1, 0], [0, 1, 1]])
        s2 = Subspace(QQ, 3, [[1, 0, -1], [0, 2, 2]])
        assert s1 == s2

    def test_sum_and_intersection_dims(self):
        s = Subspace(QQ, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])
        t = Subspace(QQ, 4, [[0, 1, 0, 0], [0, 0, 1, 0]])
        assert s.sum_(t).dim == 3
        assert s.intersect(t).dim == 1
        # dimension formula
        assert s.dim + t.dim == s.sum_(t).dim + s.intersect(t).dim

    def test_preimage(self):
        d = Matrix(QQ, [[1, 0, 0], [0, 1, 0]])
        target = Subspace(QQ, 2, [[1, 0]])
        pre = target.preimage_under(d)
        assert pre.dim == 2
        assert pre.contains([1, 0, 0]) and pre.contains([0, 0, 1])
        assert not pre.contains([0, 1, 0])

    def test_annihilator(self):
        s = Subspace(QQ, 3, [[1, 1, 0]])
        ann = s.annihilator()
        assert ann.dim == 2
        for f in ann.basis:
            assert sum(a * b for a, b in zip(f, [1, 1, 0])) == 0

    def test_extend_basis_within(self):
        s = Subspace(QQ, 3, [[1, 0, 0]])
        full = Subspace.full(QQ, 3)
        ext = s.extend_basis_within(full)
        assert len(ext) == 2
        assert Subspace(QQ, 3, list(s.basis) + ext).dim == 3
