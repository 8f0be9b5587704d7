from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_normal_indices, cofactor_det, hankel_rank, hankel_rows
from stieltjes_schur import (DiscreteMeasure, Truncated, as_moment_sequence, hankel_det,
                             interlacing_holds, is_regular, moments, normal_indices,
                             random_measure, shifted_hankel_det)
from stieltjes_schur.hankel_indices import bareiss_det, regular_by_classification

# small entries with many zeros, so degenerate Hankel blocks show up often
entries = st.one_of(st.just(0), st.integers(-3, 3), st.fractions(-5, 5, max_denominator=4))
sequences = st.lists(entries, min_size=1, max_size=10)


class TestDeterminants:
    @pytest.mark.parametrize("s,n,expected", [((1, 1, 1), 2, 0), ((2, 3, 5, 9), 2, 1),
                                              ((7,), 0, 1)])
    def test_hankel_det_examples(self, s, n, expected):
        assert hankel_det(s, n) == expected

    @pytest.mark.parametrize("s,n,expected", [((2, 3, 5, 9), 1, 3), ((2, 3, 5, 9), 2, 2),
                                              ((7,), 0, 1)])
    def test_shifted_det_examples(self, s, n, expected):
        assert shifted_hankel_det(s, n) == expected

    def test_insufficient_moments_report_required_count(self):
        with pytest.raises(Truncated) as info:
            hankel_det((1, 2), 2)
        assert info.value.required == 3
        with pytest.raises(Truncated):
            shifted_hankel_det((1, 2), 1 + 1)

    @given(st.lists(st.lists(entries, min_size=5, max_size=5), min_size=5, max_size=5))
    def test_bareiss_matches_cofactor_expansion(self, rows):
        assert bareiss_det(rows) == cofactor_det([[F(v) for v in r] for r in rows])

    def test_moment_sequence_validation(self):
        with pytest.raises(ValueError):
            as_moment_sequence([])
        with pytest.raises(TypeError):
            as_moment_sequence("123")


class TestNormalIndices:
    def test_delta_one(self):
        idx = normal_indices((1, 1, 1, 1))
        assert (idx.indices, idx.nu, idx.mu) == ((1,), (1,), (1,))

    def test_two_atoms(self):
        idx = normal_indices((2, 3, 5, 9, 17, 33))
        assert (idx.indices, idx.nu, idx.mu) == ((1, 2), (1, 2), (1, 2))

    def test_first_determinant_zero(self):
        idx = normal_indices((0, 1, 0, 0))
        assert 1 not in idx.indices
        assert 2 in idx.indices
        assert hankel_det((0, 1, 0, 0), 2) == -1

    def test_undecided_when_shifted_block_missing(self):
        # D_2 = 1 but the shifted block of order 2 needs s_3
        idx = normal_indices((1, 1, 2))
        assert idx.indices == (1, 2)
        assert idx.undecided == (2,)
        assert 2 not in idx.mu

    def test_all_zero_has_no_indices(self):
        assert normal_indices((0, 0, 0)).indices == ()

    @given(sequences)
    def test_matches_brute_force_oracle(self, s):
        idx = normal_indices(s)
        assert (list(idx.indices), list(idx.nu), list(idx.mu)) == brute_normal_indices(s)

    @given(sequences)
    def test_interlacing_never_violated(self, s):
        idx = normal_indices(s)
        # a last nu whose mu partner lies beyond the data is allowed
        assert interlacing_holds(idx.nu, idx.mu) or not idx.nu

    @given(st.integers(1, 4), st.integers(0, 10_000))
    def test_atomic_measure_rank_equals_atom_count(self, k, seed):
        m = random_measure(seed, atoms=k)
        s = moments(m, 2 * k + 1)
        assert normal_indices(s).indices == tuple(range(1, k + 1))
        assert hankel_rank(s.values, k + 1) == k

    def test_interlacing_predicate(self):
        assert interlacing_holds((1, 3), (2, 3))
        assert not interlacing_holds((1, 2), (2, 3))
        assert not interlacing_holds((2,), (1,))


class TestRegularity:
    @pytest.mark.parametrize("s", [(1, 1, 1, 1), (2, 3, 5, 9, 17, 33)])
    def test_regular_examples(self, s):
        assert is_regular(s)

    def test_irregular_with_witness(self):
        result = is_regular((1, 0, 1, 0))
        assert not result
        assert result.witness == 1

    @given(sequences)
    def test_two_conditions_agree(self, s):
        assert bool(is_regular(s)) == regular_by_classification(s)

    @given(sequences)
    def test_witness_is_a_normal_index_with_zero_shifted_block(self, s):
        result = is_regular(s)
        if not result:
            n = result.witness
            assert cofactor_det(hankel_rows(list(map(F, s)), n)) != 0
            assert cofactor_det(hankel_rows(list(map(F, s)), n, 1)) == 0


def test_discrete_measure_moments_are_regular():
    m = DiscreteMeasure.on_line([F(1, 2), 3, 7], [1, 2, F(1, 3)])
    assert is_regular(moments(m, 5))
