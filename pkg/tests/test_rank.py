import random

import pytest
from hypothesis import given, strategies as st

from progfree._validation import DomainError, PreconditionError
from progfree.algebra import GroupAlgebra, indicator_poly
from progfree.oracles import rank_by_columns
from progfree.rank import (
    build_B_matrix,
    check_rank_bound,
    is_r_injective,
    kernel_reduce,
    progression_points,
    rank_mod_p,
    sample_admissible_set,
    sample_polynomial,
    verify_key_lemma,
    verify_vanishing,
)
from progfree.search import all_points, contains_kap


def test_progression_points_examples():
    assert progression_points((3,), (3,), 5, 7) == [(3,)] * 3
    assert progression_points((1,), (4,), 3, 5) == [(3,)]
    assert progression_points((2,), (1,), 5, 7) == [(3,), (4,), (5,)]
    assert progression_points((0, 1), (1, 1), 4, 3) == [(2, 1), (1, 1)]


def test_rank_examples():
    assert rank_mod_p([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 7) == 3
    assert rank_mod_p([[0, 0], [0, 0]], 3) == 0
    assert rank_mod_p([[1, 2], [2, 4]], 5) == 1
    assert rank_mod_p([[1, 1], [1, 2]], 5) == 2
    assert rank_mod_p([], 3) == 0


@given(
    st.sampled_from([2, 3, 5, 7]),
    st.integers(1, 6),
    st.integers(1, 6),
    st.data(),
)
def test_rank_matches_column_oracle(p, rows, cols, data):
    M = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols), min_size=rows, max_size=rows))
    r = rank_mod_p(M, p)
    assert r == rank_by_columns(M, p)
    assert r <= min(rows, cols)
    assert r == rank_mod_p([list(c) for c in zip(*M)], p)


def test_B_all_ones_polynomial():
    A = GroupAlgebra(3, 2)
    P = A.element({lam: 1 for lam in A.points()})
    B = build_B_matrix([(0, 0), (1, 2), (2, 0)], P, 4)
    assert B.entries == [[1] * 3] * 3


def test_B_single_point():
    A = GroupAlgebra(5, 1)
    assert build_B_matrix([(2,)], indicator_poly(A, [(2,)]), 3).entries == [[1]]


def test_B_full_indicator_q3():
    A = GroupAlgebra(3, 1)
    pts = [(0,), (1,), (2,)]
    assert build_B_matrix(pts, indicator_poly(A, pts), 3).entries == [[1] * 3] * 3


def test_B_diagonal_entries_are_powers():
    A = GroupAlgebra(7, 1)
    P = A.element({(0,): 3, (1,): 5, (4,): 2})
    B = build_B_matrix([(0,), (1,), (4,)], P, 5)
    assert B.diagonal() == [pow(3, 3, 7), pow(5, 3, 7), pow(2, 3, 7)]


def test_B_rejects_duplicates_and_readings():
    A = GroupAlgebra(3, 1)
    with pytest.raises(PreconditionError):
        build_B_matrix([(0,), (0,)], A.one(), 3)
    with pytest.raises(DomainError):
        build_B_matrix([(0,)], A.one(), 3, reading="other")


def test_rank_bound_zero_polynomial():
    A = GroupAlgebra(5, 2)
    rep = check_rank_bound(all_points(5, 2)[:7], A.zero(), "1/3", 3)
    assert rep.rank == 0 and rep.holds


def test_rank_bound_example_all_points():
    # q = 3, n = 2, A = all nine points, random P supported in M_(2/3): bound 2 * 3 = 6
    A = GroupAlgebra(3, 2)
    pts = all_points(3, 2)
    rng = random.Random("all-points")
    reports = [check_rank_bound(pts, sample_polynomial(A, "1/3", rng), "1/3", 3) for _ in range(20)]
    assert all(r.bound == 6 for r in reports)
    assert all(r.holds for r in reports), [r.rank for r in reports]


def test_rank_bound_example_q5_k4():
    A = GroupAlgebra(5, 1)
    rng = random.Random("q5k4")
    for _ in range(50):
        S = sample_admissible_set(5, 1, 4, rng)
        rep = check_rank_bound(S, sample_polynomial(A, "1/3", rng), "1/3", 4)
        assert rep.bound == 4 * 2
        assert rep.holds


def test_coefficient_reading_small_instance():
    # Z_3, k = 3, P = 1 + X: every entry P(2a - b) is 1 exactly when 2a - b is 0 or 1
    A = GroupAlgebra(3, 1)
    P = A.element({(0,): 1, (1,): 1})
    pts = [(0,), (1,), (2,)]
    B = build_B_matrix(pts, P, 3)
    assert B.entries == [[1, 0, 1], [0, 1, 1], [1, 1, 0]]
    rep = check_rank_bound(pts, P, "1/3", 3)
    assert (rep.rank, rep.bound) == (3, 2)
    point = check_rank_bound(pts, P, "1/3", 3, reading="point")
    assert point.rank <= point.bound


@pytest.mark.parametrize("q, n, k", [(3, 1, 3), (3, 2, 3), (5, 1, 3), (5, 1, 4), (7, 1, 5), (5, 2, 3)])
def test_point_reading_bound(q, n, k):
    A = GroupAlgebra(q, n)
    rng = random.Random(f"point-{q}-{n}-{k}")
    for _ in range(40):
        S = sample_admissible_set(q, n, k, rng)
        assert check_rank_bound(S, sample_polynomial(A, "1/3", rng), "1/3", k, reading="point").holds


def test_rank_bound_preconditions():
    A = GroupAlgebra(4, 1)
    # 2 * 0 = 2 * 2 in Z_4
    with pytest.raises(PreconditionError):
        check_rank_bound([(0,), (2,)], A.one(), "1/3", 3)
    B = GroupAlgebra(3, 1)
    with pytest.raises(PreconditionError):
        check_rank_bound([(0,)], B.monomial((2,)), "1/3", 3)


def test_injectivity():
    assert is_r_injective([(0,), (1,), (2,)], 3, 3)
    assert not is_r_injective([(0,), (2,)], 3, 4)
    assert is_r_injective([(0,), (2,)], 2, 4)


def test_vanishing_examples():
    assert verify_vanishing([(1,)], [(1,), (2,)], 3, 3)
    assert verify_vanishing([(0,), (1,)], [(0,), (1,)], 3, 3)
    assert not verify_vanishing([(0,), (1,), (2,)], [(0,), (1,), (2,)], 3, 3)
    with pytest.raises(PreconditionError):
        verify_vanishing([(0,)], [(1,)], 3, 3)


@given(st.sampled_from([(3, 1, 3), (3, 2, 3), (5, 1, 3), (5, 1, 4), (7, 1, 5)]), st.data())
def test_vanishing_follows_from_ap_freeness(cfg, data):
    q, n, k = cfg
    pts = all_points(q, n)
    S = data.draw(st.lists(st.sampled_from(pts), unique=True, min_size=1, max_size=6))
    if contains_kap(S, k, q, n) is not None:
        return
    sub = data.draw(st.lists(st.sampled_from(S), unique=True, min_size=1))
    assert verify_vanishing(sub, S, k, q)


def test_kernel_reduce_z4():
    red = kernel_reduce([(0,), (1,)], 4, 3)
    assert (red.d, red.m) == (2, 2)
    assert red.coset_sets == [[(0,)], [(0,)]]
    assert red.lift() == [(0,), (1,)]


def test_kernel_reduce_trivial_d():
    A = [(0, 1), (2, 5), (7, 3)]
    red = kernel_reduce(A, 9, 3)
    assert (red.d, red.m) == (1, 9)
    assert len(red.coset_sets) == 1
    assert red.lift() == sorted(A)


def test_kernel_reduce_random_representatives():
    A = [(0, 0), (1, 2), (2, 4), (3, 3), (5, 0)]
    base = kernel_reduce(A, 8, 4)
    other = kernel_reduce(A, 8, 4, rng=random.Random(3))
    assert base.original_sizes == other.original_sizes
    assert other.lift() == sorted(A)
    assert base.ap_free == other.ap_free


def test_kernel_reduce_injectivity_can_fail():
    # q = 27, k = 4: d = 3 and {0, 9} collapses to {0, 3} in Z_9, where 3*0 = 3*3
    assert contains_kap([(0,), (9,)], 4, 27, 1) is None
    red = kernel_reduce([(0,), (9,)], 27, 4)
    assert (red.d, red.m) == (3, 9)
    assert red.coset_sets == [[(0,), (3,)]]
    assert red.ap_free == [True]
    assert red.injective == [False]


def test_kernel_reduce_domain():
    with pytest.raises(DomainError):
        kernel_reduce([(0,)], 3, 4)


@pytest.mark.parametrize(
    "q, n, k, exact, bound",
    [(3, 1, 3, 2, 3 * 1), (3, 2, 3, 4, 3 * 3), (4, 1, 3, 2, 3 * 2 * 1), (5, 1, 3, 2, 3 * 2), (4, 2, 4, None, None)],
)
def test_key_lemma(q, n, k, exact, bound):
    rep = verify_key_lemma(q, n, k)
    assert rep.passed, rep.to_dict()
    if exact is not None:
        assert (rep.exact_max, rep.bound) == (exact, bound)


def test_key_lemma_scale_guard():
    with pytest.raises(DomainError):
        verify_key_lemma(5, 3, 3)
