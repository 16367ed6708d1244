import itertools

import pytest
from hypothesis import given, strategies as st

from progfree._validation import DomainError
from progfree.oracles import brute_force_max_free
from progfree.search import (
    ApSemantics,
    SearchResult,
    bound_consistency,
    contains_kap,
    decode,
    encode,
    max_progression_free,
    product_set,
)

SMALL = [(q, n) for q in range(2, 17) for n in (1, 2, 3, 4) if q**n <= 16]


def test_contains_kap_examples():
    assert contains_kap([(1,)], 3, 5, 1) is None
    assert contains_kap([(0,), (2,)], 3, 4, 1) == ((0,), (2,))
    assert contains_kap([(0,), (2,)], 3, 4, 1, "distinct") is None
    assert contains_kap([(0,), (1,), (2,)], 3, 5, 1) == ((0,), (1,))


def test_contains_kap_rejects_bad_semantics():
    with pytest.raises(DomainError):
        contains_kap([(0,)], 3, 3, 1, "loose")


@given(st.integers(2, 7), st.integers(1, 3), st.data())
def test_encode_roundtrip(q, n, data):
    pt = data.draw(st.tuples(*[st.integers(0, q - 1)] * n))
    idx = encode(pt, q)
    assert 0 <= idx < q**n
    assert decode(idx, q, n) == pt


@pytest.mark.parametrize(
    "q, n, k, expected",
    [(3, 1, 3, 2), (3, 2, 3, 4), (3, 3, 3, 9), (5, 1, 3, 2), (4, 1, 3, 2), (2, 1, 3, 1), (4, 2, 3, 4), (5, 2, 3, 6)],
)
def test_exact_values(q, n, k, expected):
    res = max_progression_free(q, n, k)
    assert res.max_size == expected
    assert res.optimal
    assert len(res.witness) == expected
    assert contains_kap(res.witness, k, q, n) is None


@pytest.mark.parametrize("q, n", SMALL)
@pytest.mark.parametrize("k", [3, 4, 5])
@pytest.mark.parametrize("sem", ["literal", "distinct"])
def test_oracle_equivalence(q, n, k, sem):
    res = max_progression_free(q, n, k, sem)
    assert res.max_size == brute_force_max_free(q, n, k, sem)
    assert contains_kap(res.witness, k, q, n, sem) is None


@pytest.mark.parametrize("q, n, k", [(3, 2, 3), (4, 2, 3), (5, 2, 4), (6, 1, 3), (8, 1, 4), (9, 1, 5), (7, 2, 3)])
def test_literal_at_most_distinct(q, n, k):
    lit = max_progression_free(q, n, k, ApSemantics.LITERAL)
    dist = max_progression_free(q, n, k, ApSemantics.DISTINCT)
    assert lit.max_size <= dist.max_size


def test_product_set_examples():
    S = [(0,), (1,)]
    assert product_set(S, [(0,)]) == [(0, 0), (1, 0)]
    assert product_set(S, S) == [(0, 0), (0, 1), (1, 0), (1, 1)]


@pytest.mark.parametrize("q, k", [(3, 3), (4, 3), (5, 3), (5, 4)])
def test_supermultiplicative(q, k):
    one = max_progression_free(q, 1, k)
    two = max_progression_free(q, 2, k)
    assert two.max_size >= one.max_size**2
    prod = product_set(one.witness, one.witness)
    assert contains_kap(prod, k, q, 2) is None


def test_product_of_free_sets_is_free():
    w3 = max_progression_free(3, 2, 3).witness
    w1 = max_progression_free(3, 1, 3).witness
    assert contains_kap(product_set(w3, w1), 3, 3, 3) is None


def test_thread_count_does_not_change_result():
    runs = [max_progression_free(3, 3, 3, threads=t) for t in (1, 2, 8)]
    assert runs[0] == runs[1] == runs[2]


def test_budget_exhaustion():
    res = max_progression_free(3, 3, 3, budget_nodes=50)
    assert not res.optimal
    assert res.max_size <= 9
    assert contains_kap(res.witness, 3, 3, 3) is None


def test_scale_guard():
    with pytest.raises(DomainError):
        max_progression_free(17, 2, 3)


def test_result_roundtrip():
    res = max_progression_free(4, 1, 3)
    assert SearchResult.from_dict(res.to_dict()) == res


def test_consistency_q3():
    rep = bound_consistency(3, 2, 3)
    assert rep.r_exact == 4 and rep.bound_floor == 7 and rep.theorem_holds
    rep3 = bound_consistency(3, 3, 3)
    assert rep3.r_exact == 9 and rep3.bound_floor == 20 and rep3.holds


def test_consistency_reduction_equality():
    rep = bound_consistency(4, 1, 3)
    (red,) = rep.reductions
    assert (red.N, red.r_N, red.rhs) == (2, 1, 2)
    assert red.holds and rep.r_exact == red.rhs


def test_consistency_composite_q():
    rep = bound_consistency(6, 1, 3)
    assert not rep.theorem_applicable and rep.theorem_holds is None
    assert sorted(r.N for r in rep.reductions) == [2, 3]
    assert rep.holds


def test_all_nonzero_coordinates_are_progression_free_when_q_equals_k():
    # a q-term progression with d != 0 runs through every residue of some coordinate
    q = 5
    S = [p for p in itertools.product(range(q), repeat=2) if 0 not in p]
    assert contains_kap(S, q, q, 2) is None


def test_consistency_q_equals_k_11():
    rep = bound_consistency(11, 1, 11)
    assert rep.r_exact == 10
    assert rep.bound_floor == 9
    assert rep.theorem_holds is False
