import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import quasirand as q
from quasirand.inclusion import colex_subsets, format_matrix

from oracles import fraction_rank


class TestConstruction:
    def test_5_3_shape_and_sums(self):
        A = q.build_inclusion_matrix(5, 3)
        assert A.shape == (10, 10)
        assert np.all(A.matrix.sum(axis=1) == 3)     # C(3,2) ones per row
        assert np.all(A.matrix.sum(axis=0) == 3)     # C(3,1) ones per column

    def test_6_3_shape_and_column_sums(self):
        A = q.build_inclusion_matrix(6, 3)
        assert A.shape == (20, 15)
        assert np.all(A.matrix.sum(axis=0) == 4)     # C(4,1)

    @pytest.mark.parametrize("h", [3, 4, 5])
    def test_square_exactly_at_h_plus_2(self, h):
        A = q.build_inclusion_matrix(h + 2, h)
        assert A.shape[0] == A.shape[1]
        B = q.build_inclusion_matrix(h + 3, h)
        assert B.shape[0] > B.shape[1]

    def test_membership_semantics(self):
        A = q.build_inclusion_matrix(5, 3)
        for i, subset in enumerate(A.row_subsets):
            for j, pair in enumerate(A.col_pairs):
                assert A.matrix[i, j] == (1 if set(pair) <= set(subset) else 0)

    def test_colex_order_is_stable(self):
        assert colex_subsets(4, 2) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]

    def test_bad_parameters_rejected(self):
        with pytest.raises(ValueError, match="greater than 2"):
            q.build_inclusion_matrix(5, 2)
        with pytest.raises(ValueError, match="at least h"):
            q.build_inclusion_matrix(3, 4)
        with pytest.raises(ValueError, match="cap"):
            q.build_inclusion_matrix(13, 5)


class TestExactRank:
    def test_known_full_ranks(self):
        assert q.exact_rank(q.build_inclusion_matrix(5, 3)) == 10
        assert q.exact_rank(q.build_inclusion_matrix(6, 4)) == 15

    def test_below_threshold_is_row_limited(self):
        A = q.build_inclusion_matrix(4, 3)
        rank = q.exact_rank(A)
        assert rank <= 4
        assert rank == fraction_rank(A.matrix)

    def test_matches_fraction_oracle_on_inclusion_grid(self):
        for h in (3, 4):
            for r in range(h, 8):
                A = q.build_inclusion_matrix(r, h)
                assert q.exact_rank(A) == fraction_rank(A.matrix)

    def test_zero_matrix(self):
        assert q.exact_rank(np.zeros((3, 4), dtype=int)) == 0

    def test_duplicated_rows_lower_rank(self):
        M = np.array([[1, 2, 3], [1, 2, 3], [0, 1, 1]])
        assert q.exact_rank(M) == 2 == fraction_rank(M)

    @given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4),
                    min_size=2, max_size=6))
    @settings(max_examples=80, deadline=None)
    def test_matches_fraction_oracle_random(self, rows):
        M = np.array(rows, dtype=np.int64)
        assert q.exact_rank(M) == fraction_rank(M)


class TestLogSystem:
    def test_constant_rhs_gives_constant_solution(self):
        H = q.path3()
        level = math.log(q.delta_H(H, 0.5))
        rhs = np.full(math.comb(6, 3), H.total_pairs * level)
        sys_ = q.solve_log_system(H, 6, rhs)
        assert np.allclose(sys_.solution, level, atol=1e-12)
        assert sys_.residual_norm < 1e-10

    def test_zero_rhs_gives_zero(self):
        H = q.path3()
        sys_ = q.solve_log_system(H, 5, np.zeros(math.comb(5, 3)))
        assert np.allclose(sys_.solution, 0.0, atol=1e-13)

    def test_perturbation_scales_linearly(self):
        H = q.path3()
        base = np.full(math.comb(5, 3), 3.0)
        ref = q.solve_log_system(H, 5, base).solution
        moves = []
        for eta in (1e-4, 1e-5):
            bumped = base.copy()
            bumped[0] += eta
            moved = q.solve_log_system(H, 5, bumped).solution
            moves.append(np.max(np.abs(moved - ref)))
        assert moves[0] <= 10 * 1e-4          # O(eta) with a modest constant
        assert moves[0] / moves[1] == pytest.approx(10.0, rel=0.2)

    def test_row_permutation_invariance(self):
        H = q.path3()
        A = q.build_inclusion_matrix(5, 3)
        rng = np.random.default_rng(3)
        rhs = rng.normal(size=A.shape[0])
        base, *_ = np.linalg.lstsq(A.matrix.astype(float), rhs, rcond=None)
        perm = rng.permutation(A.shape[0])
        permuted, *_ = np.linalg.lstsq(A.matrix[perm].astype(float), rhs[perm], rcond=None)
        assert np.allclose(base, permuted, atol=1e-10)

    def test_r_below_uniqueness_threshold_rejected(self):
        with pytest.raises(ValueError, match="h \\+ 2"):
            q.solve_log_system(q.path3(), 4, np.zeros(math.comb(4, 3)))

    def test_rhs_length_checked(self):
        with pytest.raises(ValueError, match="length"):
            q.solve_log_system(q.path3(), 5, np.zeros(7))

    def test_pair_value_lookup(self):
        H = q.path3()
        rhs = np.full(math.comb(5, 3), 3.0)
        sys_ = q.solve_log_system(H, 5, rhs)
        assert sys_.pair_value(3, 1) == pytest.approx(1.0)


def test_matrix_dump_format():
    A = q.build_inclusion_matrix(5, 3)
    text = format_matrix(A)
    lines = text.splitlines()
    assert len(lines) == 10
    assert all(len(line) == 10 and set(line) <= {"0", "1"} for line in lines)
