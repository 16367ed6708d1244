import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from progfree._validation import DomainError
from progfree.bound import minimize_A
from progfree.lattice import (
    MSetSpec,
    chernoff_upper_check,
    complement_identity_check,
    m_complement_size,
    m_set_size,
    m_set_size_strict,
    sum_distribution,
)
from progfree.oracles import brute_force_m_set_size

alphas = st.builds(Fraction, st.integers(0, 12), st.integers(1, 12)).filter(lambda a: a <= 1)


@pytest.mark.parametrize(
    "alpha, q, n, expected",
    [("1/3", 2, 3, 4), ("1/2", 3, 2, 6), ("1/3", 4, 4, 66), ("0/1", 5, 3, 1), ("1/1", 3, 4, 81)],
)
def test_m_set_examples(alpha, q, n, expected):
    spec = MSetSpec.of(alpha, q, n)
    assert m_set_size(spec) == expected
    assert brute_force_m_set_size(spec.alpha, q, n) == expected


def test_m_set_example_listing():
    # {0,1}^3 with at most one coordinate set
    spec = MSetSpec.of("1/3", 2, 3)
    members = [lam for lam in itertools.product(range(2), repeat=3) if spec.contains(lam)]
    assert sorted(members) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)]


@given(alphas, st.integers(2, 5), st.integers(1, 5))
def test_dp_matches_enumeration(alpha, q, n):
    spec = MSetSpec.of(alpha, q, n)
    assert m_set_size(spec) == brute_force_m_set_size(alpha, q, n)


@given(st.integers(2, 9), st.integers(1, 9))
def test_sum_distribution_totals(q, n):
    dist = sum_distribution(q, n)
    assert sum(dist) == q**n
    assert dist == dist[::-1]
    assert len(dist) == n * (q - 1) + 1


@given(alphas, alphas, st.integers(2, 6), st.integers(1, 8))
def test_monotone_in_alpha(a, b, q, n):
    lo, hi = sorted((a, b))
    assert m_set_size(MSetSpec.of(lo, q, n)) <= m_set_size(MSetSpec.of(hi, q, n))


@given(alphas, st.integers(2, 6), st.integers(1, 8))
def test_row_symmetry(alpha, q, n):
    # lam -> (q-1) - lam swaps "sum <= t" with "sum >= total - t"
    spec = MSetSpec.of(alpha, q, n)
    assert m_set_size(spec) + m_set_size_strict(spec.mirror()) == q**n


def test_complement_identity_off_boundary():
    # 1/3 * 3 * 3 = 3 is integral; pick 2/5 instead
    check = complement_identity_check(MSetSpec.of("2/5", 4, 3))
    assert not check.boundary_integral
    assert check.holds
    assert check.complement_size == check.mirror_size


def test_complement_identity_on_boundary():
    spec = MSetSpec.of("1/2", 3, 2)
    check = complement_identity_check(spec)
    assert check.boundary_integral
    assert not check.holds
    # the sum-2 shell is counted in M_{1/2} and again in M_{1/2} of the mirror
    assert (check.complement_size, check.mirror_size) == (3, 6)
    assert check.complement_size <= check.mirror_size


@given(alphas, st.integers(2, 6), st.integers(1, 8))
def test_complement_never_exceeds_mirror(alpha, q, n):
    check = complement_identity_check(MSetSpec.of(alpha, q, n))
    assert check.holds or check.boundary_integral
    assert check.complement_size <= check.mirror_size
    assert check.complement_size == m_complement_size(MSetSpec.of(alpha, q, n))


def test_degenerate_box():
    assert m_set_size(MSetSpec.of("1/3", 1, 4)) == 1


@pytest.mark.parametrize("bad", [0.33, "4/3", "-1/3"])
def test_alpha_rejected(bad):
    with pytest.raises(DomainError):
        MSetSpec.of(bad, 3, 2)


def test_chernoff_examples():
    tiny = chernoff_upper_check(2, 1, minimize_A(2).a_value)
    assert tiny.lhs == 1 and tiny.holds
    four = chernoff_upper_check(2, 4, minimize_A(2).a_value)
    assert four.lhs == 5
    assert four.holds and four.rhs_log == pytest.approx(4 * math.log(2 * minimize_A(2).a_value))
    assert chernoff_upper_check(3, 6, minimize_A(3).a_value).holds


def test_chernoff_detects_small_constant():
    assert not chernoff_upper_check(3, 6, minimize_A(3).a_value / 2).holds


def test_chernoff_exact_at_equality():
    # |M_{1/3,2}| in dimension 1 is 1 = (2 * 1/2)^1 exactly
    assert chernoff_upper_check(2, 1, 0.5).holds
    assert not chernoff_upper_check(2, 1, 0.4999999999).holds
