import itertools
from fractions import Fraction

import numpy as np
import pytest
from helpers import brute_rank

from rep2ldc.errors import DimensionMismatch, ZeroMatrix
from rep2ldc.fields import GF, QQ, Field
from rep2ldc.linalg import (
    Matrix,
    Subspace,
    apply_to_subspace,
    invert,
    nullspace,
    orth_complement,
    rank,
    rank_factorize,
    rref,
    subspace_contains,
    subspace_sum,
)

F2, F3, F5, F11 = GF(2), GF(3), GF(5), GF(11)


class TestRref:
    def test_identity_fixed_point(self):
        m = Matrix.identity(F3, 2)
        r, rk, piv = rref(m)
        assert r == m and rk == 2 and piv == (0, 1)

    def test_proportional_rows(self):
        r, rk, piv = rref(Matrix(F5, [[1, 2], [2, 4]]))
        assert r.to_lists() == [[1, 2], [0, 0]]
        assert rk == 1 == brute_rank([[1, 2], [2, 4]], 5)

    def test_zero(self):
        r, rk, _ = rref(Matrix.zeros(F3, 3, 3))
        assert rk == 0 and r.is_zero()

    @pytest.mark.parametrize("field", [F2, F3, F5, QQ])
    def test_idempotent_and_transpose_rank(self, field):
        rng = np.random.default_rng(17)
        for _ in range(25):
            rows, cols = rng.integers(1, 6, size=2)
            data = rng.integers(-4, 5, size=(rows, cols)).tolist()
            m = Matrix(field, data)
            r, rk, _ = rref(m)
            again, rk2, _ = rref(r)
            assert again == r and rk2 == rk
            assert rank(m.T) == rk
            if rows <= 4 and cols <= 4 and field.char in (0, 2, 3):
                assert rk == brute_rank(data, field.char)


class TestRank:
    def test_paper_reflection_witness(self):
        # diag(-1,1,1,1) - I = diag(-2,0,0,0), rank 1 over GF(3)
        assert rank(Matrix.diag(F3, [-2, 0, 0, 0])) == 1

    def test_identity(self):
        for n in (1, 3, 5):
            assert rank(Matrix.identity(F5, n)) == n

    def test_rank_one_difference(self):
        m = Matrix(F11, [[-1, 1], [1, -1]])
        assert rank(m) == 1 == brute_rank([[10, 1], [1, 10]], 11)


class TestNullspace:
    def test_identity_gives_zero_space(self):
        assert nullspace(Matrix.identity(F3, 3)).dim == 0

    def test_zero_matrix_gives_full_space(self):
        ns = nullspace(Matrix.zeros(F2, 2, 3))
        assert ns.dim == 3

    def test_single_parity_row(self):
        m = Matrix(F2, [[1, 1, 0]])
        ns = nullspace(m)
        # oracle: every vector with v0 + v1 = 0 mod 2
        members = [
            v for v in itertools.product((0, 1), repeat=3) if (v[0] + v[1]) % 2 == 0
        ]
        assert ns.dim == 2 and len(members) == 4
        for v in members:
            assert ns.contains_vector(v)

    def test_nullspace_definition(self):
        rng = np.random.default_rng(23)
        for field in (F3, QQ):
            data = rng.integers(-3, 4, size=(3, 5)).tolist()
            m = Matrix(field, data)
            ns = nullspace(m)
            assert ns.dim == 5 - rank(m)
            for i in range(ns.dim):
                assert not np.any(m.matvec(ns.basis.row(i)) != 0)


class TestRankFactorize:
    def test_identity(self):
        y, x = rank_factorize(Matrix.identity(F3, 2))
        assert y == Matrix.identity(F3, 2) and x == Matrix.identity(F3, 2)

    def test_rank_one_diag(self):
        d = Matrix.diag(F3, [-2, 0, 0, 0])
        y, x = rank_factorize(d)
        assert (y @ x.T) == d
        assert y.cols == 1 and rank(y) == 1 and rank(x) == 1

    def test_rank_one_offdiag(self):
        d = Matrix(F11, [[-1, 1], [1, -1]])
        y, x = rank_factorize(d)
        assert (y @ x.T) == d and y.cols == 1

    def test_zero_rejected(self):
        with pytest.raises(ZeroMatrix):
            rank_factorize(Matrix.zeros(F3, 2, 2))

    @pytest.mark.parametrize("field", [F2, F5, QQ])
    def test_random_property(self, field):
        rng = np.random.default_rng(29)
        for _ in range(25):
            n = int(rng.integers(1, 6))
            m = Matrix(field, rng.integers(-3, 4, size=(n, n)).tolist())
            if m.is_zero():
                continue
            y, x = rank_factorize(m)
            r = rank(m)
            assert y.cols == r == x.cols
            assert (y @ x.T) == m
            assert rank(y) == r and rank(x) == r


class TestSubspaces:
    def test_orth_complement_of_line(self):
        u = Subspace.from_rows(F3, 3, [[1, 0, 0]])
        c = orth_complement(u)
        assert c == Subspace.from_rows(F3, 3, [[0, 1, 0], [0, 0, 1]])

    def test_orth_complement_of_full(self):
        assert orth_complement(Subspace.full(F3, 3)).dim == 0

    def test_self_orthogonal_over_gf2(self):
        u = Subspace.from_rows(F2, 2, [[1, 1]])
        c = orth_complement(u)
        # oracle: scan all four vectors of GF(2)^2
        members = [v for v in itertools.product((0, 1), repeat=2)
                   if (v[0] + v[1]) % 2 == 0]
        assert c.dim == 1 and c.contains_vector([1, 1])
        for v in members:
            assert c.contains_vector(v)

    def test_dimension_identity_exhaustive_gf2_cubed(self):
        # every subspace of GF(2)^3, as spans of all vector subsets
        vectors = list(itertools.product((0, 1), repeat=3))
        seen = set()
        for size in range(4):
            for subset in itertools.combinations(vectors, size):
                rows = list(subset) if subset else [[0, 0, 0]]
                u = Subspace.from_rows(F2, 3, rows)
                key = u.basis.key()
                if key in seen:
                    continue
                seen.add(key)
                c = orth_complement(u)
                assert u.dim + c.dim == 3
                for i in range(u.dim):
                    for j in range(c.dim):
                        assert int(u.basis.row(i) @ c.basis.row(j)) % 2 == 0
        assert len(seen) == 16  # subspace count of GF(2)^3

    def test_sum_and_contains(self):
        e1 = Subspace.from_rows(F3, 3, [[1, 0, 0]])
        e2 = Subspace.from_rows(F3, 3, [[0, 1, 0]])
        s = subspace_sum([e1, e2])
        assert s.dim == 2
        assert subspace_contains(s, e1) and not subspace_contains(e1, s)

    def test_apply(self):
        ident = Matrix.identity(F3, 4)
        shift = Matrix(F3, [[0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
        u = Subspace.from_rows(F3, 4, [[1, 0, 0, 0]])
        assert apply_to_subspace(ident, u) == u
        img = apply_to_subspace(shift, u)
        assert img == Subspace.from_rows(F3, 4, [[0, 1, 0, 0]])

    def test_apply_composition(self):
        rng = np.random.default_rng(31)
        shift = Matrix(F5, [[0, 1], [4, 0]])
        twist = Matrix(F5, [[2, 0], [0, 3]])
        for _ in range(10):
            u = Subspace.from_rows(F5, 2, rng.integers(0, 5, size=(1, 2)).tolist())
            lhs = apply_to_subspace(shift, apply_to_subspace(twist, u))
            rhs = apply_to_subspace(shift @ twist, u)
            assert lhs == rhs

    def test_dimension_mismatch(self):
        u = Subspace.from_rows(F3, 3, [[1, 0, 0]])
        v = Subspace.from_rows(F3, 2, [[1, 0]])
        with pytest.raises(DimensionMismatch):
            subspace_sum([u, v])
        with pytest.raises(DimensionMismatch):
            Matrix.identity(F3, 2) @ Matrix.identity(F5, 2)


class TestFieldsAndMatrices:
    def test_canonical_scalars(self):
        assert F5.canon(-1) == 4
        assert F5.canon(Fraction(1, 2)) == 3  # 2 * 3 = 6 = 1 mod 5
        assert QQ.canon(2) == Fraction(2)
        assert F5.theta == Fraction(4, 5) and QQ.theta == 1

    def test_nonprime_char_rejected(self):
        with pytest.raises(ValueError):
            Field(6)

    def test_matrix_immutable(self):
        m = Matrix.identity(F3, 2)
        with pytest.raises(ValueError):
            m.a[0, 0] = 2

    def test_invert_round_trip(self):
        m = Matrix(F11, [[2, 1], [1, 1]])
        assert (invert(m) @ m) == Matrix.identity(F11, 2)
        mq = Matrix(QQ, [[Fraction(1, 2), 0], [1, 3]])
        assert (invert(mq) @ mq) == Matrix.identity(QQ, 2)

    def test_invert_singular_rejected(self):
        from rep2ldc.errors import NotInvertible

        with pytest.raises(NotInvertible):
            invert(Matrix(F3, [[1, 2], [2, 1]]))  # det = 1 - 4 = 0 mod 3
        with pytest.raises(DimensionMismatch):
            invert(Matrix.zeros(F3, 2, 3))

    def test_contains_vector_length_checked(self):
        u = Subspace.from_rows(F3, 3, [[1, 0, 0]])
        with pytest.raises(DimensionMismatch):
            u.contains_vector([1, 0])

    def test_rational_exactness(self):
        big = Matrix(QQ, [[Fraction(1, 10**20), 1], [0, 1]])
        assert rank(big) == 2
        y, x = rank_factorize(big)
        assert (y @ x.T) == big
