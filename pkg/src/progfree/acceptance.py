"""The acceptance criteria, each with its tolerance and time limit pinned."""

from __future__ import annotations

import itertools
import time
from dataclasses import asdict, dataclass

from .bound import (
    ASYMPTOTIC_ALPHA,
    ASYMPTOTIC_BOUND,
    BETA,
    BETA_BOUND,
    PRIME_POWER_BOUND,
    PUBLISHED_A_BOUNDS,
    asymptotic_constant,
    beta_majorant,
    certified_below,
    minimize_A,
    progression_bound,
)
from ._validation import prime_power
from .oracles import brute_force_max_free
from .search import bound_consistency, contains_kap, max_progression_free, product_set
from . import verify

SELFTEST_LIMIT = 300.0


@dataclass
class CriterionResult:
    number: str
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def _timed(number, title, limit, fn) -> CriterionResult:
    start = time.perf_counter()
    passed, detail = fn()
    seconds = time.perf_counter() - start
    if limit is not None and seconds >= limit:
        passed = False
        detail = f"{detail}; took {seconds:.2f}s, limit {limit}s"
    return CriterionResult(number, title, passed, detail, seconds, limit)


def _from_checks(*checks: verify.CheckResult):
    detail = "; ".join(
        f"{c.name} {c.failures}/{c.trials} failures" + (f" [{c.detail}]" if c.detail else "") for c in checks
    )
    return all(c.passed for c in checks), detail


def criterion_1():
    misses = []
    for m, published in PUBLISHED_A_BOUNDS.items():
        a = minimize_A(m).a_value
        if not certified_below(a, published):
            misses.append(f"A({m})={a!r} vs {published}")
    return not misses, "all eight below published values" if not misses else "; ".join(misses)


def criterion_2():
    a = minimize_A(2).a_value
    err = abs(a - 0.75 * 2 ** (1 / 3))
    return err < 1e-9, f"|A(2) - (3/4) 2^(1/3)| = {err:.3g}"


def criterion_3():
    asym = asymptotic_constant(ASYMPTOTIC_ALPHA)
    maj = beta_majorant(BETA, 13).majorant
    bad = [N for N in range(2, 201) if prime_power(N) and not certified_below(minimize_A(N).a_value, PRIME_POWER_BOUND)]
    ok = certified_below(asym, ASYMPTOTIC_BOUND) and certified_below(maj, BETA_BOUND) and not bad
    return ok, f"asymptotic {asym:.6f}, majorant {maj:.6f}, prime powers above 0.945: {bad or 'none'}"


def criterion_4():
    return _from_checks(verify.check_chernoff())


def criterion_5():
    return _from_checks(verify.check_counting_oracle())


def criterion_6(seed):
    return _from_checks(verify.check_homomorphism(seed), verify.check_frobenius())


def criterion_7(seed):
    return _from_checks(verify.check_decompose(seed, per_config=100, qs=(3, 4), dims=(1, 2, 3)))


def criterion_8(seed):
    return _from_checks(verify.check_rank_bound_random(seed), verify.check_diagonality(seed))


def criterion_9():
    return _from_checks(verify.check_key_lemma())


EXPECTED_R = {(3, 1, 3): 2, (3, 2, 3): 4, (3, 3, 3): 9, (5, 1, 3): 2, (4, 1, 3): 2}


def _witnesses():
    return {key: max_progression_free(*key) for key in EXPECTED_R}


def criterion_10(witnesses):
    problems = []
    for (q, n, k), result in witnesses.items():
        expected = EXPECTED_R[(q, n, k)]
        if result.max_size != expected or not result.optimal:
            problems.append(f"r_{k}(Z_{q}^{n}) = {result.max_size}, expected {expected}")
        if q**n <= 16 and brute_force_max_free(q, n, k) != result.max_size:
            problems.append(f"oracle disagrees on ({q},{n},{k})")
        if contains_kap(result.witness, k, q, n) is not None:
            problems.append(f"witness for ({q},{n},{k}) contains a progression")
        report = bound_consistency(q, n, k, exact=result)
        if not report.holds:
            problems.append(f"bound check failed for ({q},{n},{k}): {report.to_dict()}")
    z4 = bound_consistency(4, 1, 3, exact=witnesses[(4, 1, 3)])
    red = [r for r in z4.reductions if r.N == 2]
    if not red or red[0].rhs != 2 or red[0].r_N != 1:
        problems.append("reduction Z_4 -> Z_2 not the equality case 2 <= 2*1")
    if not witnesses[(5, 1, 3)].max_size <= 5 * minimize_A(5).a_value:
        problems.append("r_3(Z_5) exceeds 5 A(5)")
    c3 = progression_bound(3, 3).c_value
    detail = f"r_3(Z_3^n) = 2, 4, 9 vs c = {c3:.6f}; r_3(Z_5) = 2; r_3(Z_4) = 2 = 2 r_3(Z_2)"
    return not problems, detail if not problems else "; ".join(problems)


def criterion_11(witnesses):
    problems = []
    by_q: dict[tuple[int, int], list] = {}
    for (q, n, k), result in witnesses.items():
        by_q.setdefault((q, k), []).append((n, result.witness))
    products = 0
    for (q, k), items in by_q.items():
        for (n1, w1), (n2, w2) in itertools.product(items, repeat=2):
            products += 1
            if contains_kap(product_set(w1, w2), k, q, n1 + n2) is not None:
                problems.append(f"product of witnesses in Z_{q}^{n1} x Z_{q}^{n2} has a progression")
    size = {n: witnesses[(3, n, 3)].max_size for n in (1, 2, 3)}
    for n1, n2 in [(1, 1), (1, 2)]:
        if size[n1 + n2] < size[n1] * size[n2]:
            problems.append(f"r(3,{n1 + n2}) < r(3,{n1}) r(3,{n2})")
    return not problems, f"{products} products AP-free; 4 >= 2*2, 9 >= 2*4" if not problems else "; ".join(problems)


def criterion_12a(seed):
    from .cli import run_captured

    argv = ["verify", "--suite", "all", "--seed", str(seed), "--format", "json"]
    same_verify = run_captured(argv)[1] == run_captured(argv)[1]
    searches = {
        t: run_captured(["search", "--q", "3", "--n", "3", "--k", "3", "--threads", str(t), "--format", "json"])[1]
        for t in (1, 2, 8)
    }
    same_search = len(set(searches.values())) == 1
    return same_verify and same_search, (
        f"verify output identical across runs: {same_verify}; search output identical at 1/2/8 threads: {same_search}"
    )


def criterion_12b(earlier: list[CriterionResult]):
    total = sum(r.seconds for r in earlier)
    failing = [r.number for r in earlier if not r.passed]
    detail = f"criteria 1-11 took {total:.1f}s (limit {SELFTEST_LIMIT:.0f}s)"
    if failing:
        detail += f"; failing: {', '.join(failing)}"
    return not failing and total < SELFTEST_LIMIT, detail


TITLES = {
    "1": "A(N) below the eight published constants",
    "2": "closed form A(2) = (3/4) 2^(1/3)",
    "3": "corollary constants 0.8415, 0.92, 0.945",
    "4": "Chernoff bound |M_1/3| <= (q A(q))^n",
    "5": "DP counts equal enumeration",
    "6": "group-algebra homomorphism and Frobenius truncation",
    "7": "decompose_P reconstruction",
    "8": "rank bound and diagonality",
    "9": "coset-reduction lemma end to end",
    "10": "exact r-values against the bound",
    "11": "tensor trick",
    "12a": "determinism of verify and search output",
    "12b": "selftest exits 0 on criteria 1-11 within 5 minutes",
}


def run_all(seed: int = 42, include_12: bool = True) -> list[CriterionResult]:
    results = [
        _timed("1", TITLES["1"], 1.0, criterion_1),
        _timed("2", TITLES["2"], None, criterion_2),
        _timed("3", TITLES["3"], 5.0, criterion_3),
        _timed("4", TITLES["4"], 5.0, criterion_4),
        _timed("5", TITLES["5"], 30.0, criterion_5),
        _timed("6", TITLES["6"], 10.0, lambda: criterion_6(seed)),
        _timed("7", TITLES["7"], None, lambda: criterion_7(seed)),
        _timed("8", TITLES["8"], 60.0, lambda: criterion_8(seed)),
        _timed("9", TITLES["9"], 60.0, criterion_9),
    ]
    start = time.perf_counter()
    witnesses = _witnesses()
    search_time = time.perf_counter() - start
    r10 = _timed("10", TITLES["10"], 60.0, lambda: criterion_10(witnesses))
    # the shared witness searches count against criterion 10's limit
    r10.seconds += search_time
    if r10.seconds >= 60.0:
        r10.passed = False
        r10.detail += f"; took {r10.seconds:.2f}s, limit 60.0s"
    results.append(r10)
    results.append(_timed("11", TITLES["11"], None, lambda: criterion_11(witnesses)))
    if include_12:
        earlier = list(results)
        results.append(_timed("12a", TITLES["12a"], None, lambda: criterion_12a(seed)))
        results.append(_timed("12b", TITLES["12b"], None, lambda: criterion_12b(earlier)))
    return results


def format_results(results: list[CriterionResult]) -> str:
    lines = [
        f"{'PASS' if r.passed else 'FAIL'}  [{r.number:>3}] {r.title} ({r.seconds:.2f}s): {r.detail}"
        for r in results
    ]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
