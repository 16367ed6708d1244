"""Seeded randomized and exhaustive property suites.

Every trial draws from its own ``random.Random`` seeded by a string built from
the suite seed, the configuration and the trial index, so results do not
depend on trial order and the suites can be split across workers freely.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass
from fractions import Fraction

from ._validation import VerificationError
from .algebra import GroupAlgebra, decompose_P, recompose, split_monomial, weight, y_power
from .bound import minimize_A
from .lattice import MSetSpec, chernoff_upper_check, complement_identity_check, m_set_size
from .oracles import brute_force_m_set_size, rank_by_columns
from .rank import (
    build_B_matrix,
    check_rank_bound,
    indicator_poly,
    sample_admissible_set,
    sample_polynomial,
    verify_key_lemma,
)
from .search import max_progression_free

SUITES = ("algebra", "rank", "keylemma", "chernoff")

ALGEBRA_AMBIENTS = [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)]
RANK_CONFIGS = [(3, 3, 1), (3, 3, 2), (5, 3, 1), (5, 4, 1), (7, 5, 1)]  # (q, k, n)
KEY_LEMMA_CONFIGS = [(3, 1, 3), (3, 2, 3), (4, 1, 3), (5, 1, 3), (4, 1, 4), (5, 1, 4), (7, 1, 5), (9, 1, 3)]
CHERNOFF_QS = [2, 3, 4, 5, 7, 8, 9]
COUNT_ALPHAS = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1)]


@dataclass
class CheckResult:
    name: str
    trials: int
    failures: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        data = asdict(self)
        data["passed"] = self.passed
        return data


def _rng(seed, *tags) -> random.Random:
    return random.Random("/".join(str(t) for t in (seed, *tags)))


def _random_point(rng, q, n):
    return tuple(rng.randrange(q) for _ in range(n))


def _random_element(algebra, rng, max_terms=3):
    terms = rng.randint(0, max_terms)
    return algebra.element([(_random_point(rng, algebra.q, algebra.n), rng.randrange(algebra.p)) for _ in range(terms)])


# -- algebra -----------------------------------------------------------------

def check_homomorphism(seed, pairs=200, ambients=ALGEBRA_AMBIENTS, dims=(1, 2)) -> CheckResult:
    trials = failures = 0
    first = ""
    for p, e in ambients:
        q = p**e
        for n in dims:
            alg = GroupAlgebra(q, n)
            for i in range(pairs):
                rng = _rng(seed, "hom", q, n, i)
                a, b = _random_point(rng, q, n), _random_point(rng, q, n)
                s = tuple((x + y) % q for x, y in zip(a, b))
                trials += 1
                if y_power(alg, a) * y_power(alg, b) != y_power(alg, s):
                    failures += 1
                    first = first or f"q={q} n={n} a={a} b={b}"
    return CheckResult("homomorphism", trials, failures, first)


def check_frobenius(ambients=ALGEBRA_AMBIENTS, dims=(1, 2)) -> CheckResult:
    trials = failures = 0
    first = ""
    for p, e in ambients:
        q = p**e
        for n in dims:
            alg = GroupAlgebra(q, n)
            for i in range(n):
                x_plus_1 = alg.monomial(tuple(int(j == i) for j in range(n))) + alg.one()
                trials += 1
                if x_plus_1**q != alg.one():
                    failures += 1
                    first = first or f"q={q} n={n} i={i}"
    return CheckResult("frobenius", trials, failures, first)


def check_ring_laws(seed, triples=50) -> CheckResult:
    trials = failures = 0
    for p, e in ALGEBRA_AMBIENTS:
        q = p**e
        for n in (1, 2):
            alg = GroupAlgebra(q, n)
            for i in range(triples):
                rng = _rng(seed, "ring", q, n, i)
                f, g, h = (_random_element(alg, rng) for _ in range(3))
                trials += 1
                if (f * g) * h != f * (g * h) or f * (g + h) != f * g + f * h or f * g != g * f:
                    failures += 1
    return CheckResult("ring_laws", trials, failures)


def check_split_monomial(qs=(2, 3, 4), dims=(1, 2, 3), alphas=(Fraction(1, 4), Fraction(1, 3))) -> CheckResult:
    trials = failures = 0
    for q in qs:
        for n in dims:
            for a in alphas:
                wide = MSetSpec.of(2 * a, q, n)
                for lam in itertools.product(range(q), repeat=n):
                    if not wide.contains(lam):
                        continue
                    mu, nu = split_monomial(lam, a, q)
                    trials += 1
                    if tuple(x + y for x, y in zip(mu, nu)) != lam or weight(mu, q) > a * n or min(nu) < 0:
                        failures += 1
    return CheckResult("split_monomial", trials, failures)


def check_decompose(seed, per_config=100, qs=(3, 4), dims=(1, 2, 3), alpha=Fraction(1, 3)) -> CheckResult:
    trials = failures = 0
    first = ""
    for q in qs:
        for n in dims:
            alg = GroupAlgebra(q, n)
            for i in range(per_config):
                P = sample_polynomial(alg, alpha, _rng(seed, "decomp", q, n, i))
                parts = decompose_P(P, alpha)
                trials += 1
                ok = recompose(parts, alg) == P and all(weight(mu, q) <= alpha * n for mu, _ in parts)
                if not ok:
                    failures += 1
                    first = first or f"q={q} n={n} P={P}"
    return CheckResult("decompose_P", trials, failures, first)


def algebra_suite(seed) -> list[CheckResult]:
    return [
        check_homomorphism(seed),
        check_frobenius(),
        check_ring_laws(seed),
        check_split_monomial(),
        check_decompose(seed),
    ]


# -- rank --------------------------------------------------------------------

def check_rank_bound_random(seed, per_config=100, configs=RANK_CONFIGS, reading="coefficient") -> CheckResult:
    trials = failures = 0
    first = ""
    for q, k, n in configs:
        alg = GroupAlgebra(q, n)
        for i in range(per_config):
            rng = _rng(seed, "rank", q, k, n, i)
            A = sample_admissible_set(q, n, k, rng)
            P = sample_polynomial(alg, Fraction(1, 3), rng)
            report = check_rank_bound(A, P, Fraction(1, 3), k, reading)
            trials += 1
            if not report.holds:
                failures += 1
                first = first or f"q={q} k={k} n={n} trial={i}: rank {report.rank} > bound {report.bound} (|A|={report.t})"
    name = "rank_bound" if reading == "coefficient" else "rank_bound_point_reading"
    return CheckResult(name, trials, failures, first)


def check_diagonality(seed, configs=RANK_CONFIGS, subsets=20) -> CheckResult:
    """Indicator polynomials of subsets of maximal AP-free sets give unit diagonals."""
    trials = failures = 0
    for q, k, n in configs:
        witness = max_progression_free(q, n, k).witness
        alg = GroupAlgebra(q, n)
        for i in range(subsets):
            rng = _rng(seed, "diag", q, k, n, i)
            B1 = sorted(rng.sample(witness, rng.randint(1, len(witness))))
            matrix = build_B_matrix(B1, indicator_poly(alg, B1), k)
            trials += 1
            if not matrix.is_diagonal() or any(v != 1 for v in matrix.diagonal()):
                failures += 1
    return CheckResult("diagonality", trials, failures)


def check_rank_oracle(seed, per_config=30, configs=RANK_CONFIGS) -> CheckResult:
    trials = failures = 0
    for q, k, n in configs:
        alg = GroupAlgebra(q, n)
        for i in range(per_config):
            rng = _rng(seed, "rank-oracle", q, k, n, i)
            A = sample_admissible_set(q, n, k, rng)
            matrix = build_B_matrix(A, sample_polynomial(alg, Fraction(1, 3), rng), k)
            trials += 1
            if matrix.rank() != rank_by_columns(matrix.entries, alg.p):
                failures += 1
    return CheckResult("rank_oracle_agreement", trials, failures)


def rank_suite(seed) -> list[CheckResult]:
    prime_configs = [c for c in RANK_CONFIGS if c[0] in (2, 3, 5, 7)]
    return [
        check_rank_bound_random(seed),
        check_diagonality(seed),
        check_rank_oracle(seed),
        check_rank_bound_random(seed, configs=prime_configs, reading="point"),
    ]


# -- key lemma ---------------------------------------------------------------

def check_key_lemma(configs=KEY_LEMMA_CONFIGS) -> CheckResult:
    failed = [c for c in configs if not verify_key_lemma(*c).passed]
    return CheckResult("key_lemma", len(configs), len(failed), ", ".join(map(str, failed)))


def keylemma_suite(seed) -> list[CheckResult]:
    return [check_key_lemma()]


# -- lattice counts and Chernoff ---------------------------------------------

def check_chernoff(qs=CHERNOFF_QS, dims=range(1, 11), inject_fault=False) -> CheckResult:
    trials = failures = 0
    first = ""
    for q in qs:
        a_upper = minimize_A(q).a_value
        if inject_fault:
            a_upper *= 0.5
        for n in dims:
            result = chernoff_upper_check(q, n, a_upper)
            trials += 1
            if not result.holds:
                failures += 1
                first = first or f"q={q} n={n}: {result.lhs} > exp({result.rhs_log:.6g})"
    return CheckResult("chernoff", trials, failures, first)


def check_counting_oracle(q_max=6, n_max=6, alphas=COUNT_ALPHAS) -> CheckResult:
    trials = failures = 0
    first = ""
    for q in range(2, q_max + 1):
        for n in range(1, n_max + 1):
            for a in alphas:
                trials += 1
                dp = m_set_size(MSetSpec.of(a, q, n))
                brute = brute_force_m_set_size(a, q, n)
                if dp != brute:
                    failures += 1
                    first = first or f"q={q} n={n} alpha={a}: {dp} != {brute}"
    return CheckResult("counting_oracle", trials, failures, first)


def check_complement_identity(q_max=7, n_max=6, alphas=COUNT_ALPHAS) -> CheckResult:
    trials = failures = 0
    for q in range(2, q_max + 1):
        for n in range(1, n_max + 1):
            for a in alphas:
                trials += 1
                try:
                    complement_identity_check(MSetSpec.of(a, q, n))
                except VerificationError:
                    failures += 1
    return CheckResult("complement_identity", trials, failures)


def chernoff_suite(seed, inject_fault=False) -> list[CheckResult]:
    return [check_chernoff(inject_fault=inject_fault), check_complement_identity()]


def run_suite(name: str, seed, inject_fault: bool = False) -> list[CheckResult]:
    if name == "all":
        out = []
        for suite in SUITES:
            out.extend(run_suite(suite, seed, inject_fault))
        return out
    if name == "algebra":
        return algebra_suite(seed)
    if name == "rank":
        return rank_suite(seed)
    if name == "keylemma":
        return keylemma_suite(seed)
    if name == "chernoff":
        return chernoff_suite(seed, inject_fault)
    raise ValueError(f"unknown suite {name!r}")
