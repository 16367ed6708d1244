"""The progression matrix rank argument and the coset reduction.

For a set A = {a_1..a_t} and P in the truncated algebra, the progression
matrix has entries

    B[i][j] = prod_{r=2}^{k-1} P(r a_i - (r-1) a_j)      (points mod q)

where P(c) is the coefficient of X^c in P. If P vanishes on every
progression built from two distinct points of A, B is diagonal with entries
P(a_i)^(k-2); the rank argument bounds rank(B) by 2^(k-2) |M_{alpha,q}|.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from math import gcd

from ._validation import DomainError, PreconditionError, VerificationError, check_int, check_rational
from .algebra import AlgebraElement, GroupAlgebra, coeff_at, evaluate_polynomial, indicator_poly, point_scale
from .bound import lcm_range
from .lattice import MSetSpec, m_set_size
from .search import ApSemantics, all_points, contains_kap, max_progression_free

Point = tuple[int, ...]

READINGS = ("coefficient", "point")


def progression_points(a: Point, b: Point, k: int, q: int) -> list[Point]:
    """[2a - b, 3a - 2b, ..., (k-1)a - (k-2)b] mod q."""
    check_int(k, "k", 3)
    return [tuple((r * x - (r - 1) * y) % q for x, y in zip(a, b)) for r in range(2, k)]


def rank_mod_p(M: list[list[int]], p: int) -> int:
    """Row rank over F_p by Gauss-Jordan elimination."""
    rows = [[x % p for x in row] for row in M]
    if not rows:
        return 0
    n_cols = len(rows[0])
    rank = 0
    for col in range(n_cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


@dataclass
class ProgressionMatrix:
    entries: list[list[int]]
    source_a: list[Point]
    source_p: AlgebraElement
    k: int
    reading: str = "coefficient"

    @property
    def p(self) -> int:
        return self.source_p.algebra.p

    def rank(self) -> int:
        return rank_mod_p(self.entries, self.p)

    def is_diagonal(self) -> bool:
        return all(
            v == 0 for i, row in enumerate(self.entries) for j, v in enumerate(row) if i != j
        )

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(len(self.entries))]


def build_B_matrix(A, P: AlgebraElement, k: int, reading: str = "coefficient") -> ProgressionMatrix:
    """The progression matrix of A under P.

    ``reading="coefficient"`` takes P(c) as the coefficient of X^c (the
    default and the meaning used throughout). ``reading="point"`` evaluates P
    as a polynomial at c in F_p^n instead and needs q prime; it exists only
    to contrast the two readings.
    """
    if reading not in READINGS:
        raise DomainError(f"reading must be one of {READINGS}, got {reading!r}")
    algebra = P.algebra
    A = [tuple(a) for a in A]
    if len(set(A)) != len(A):
        raise PreconditionError("A contains duplicate points")
    value = coeff_at if reading == "coefficient" else evaluate_polynomial
    p, q = algebra.p, algebra.q
    entries = []
    for a in A:
        row = []
        for b in A:
            v = 1
            for c in progression_points(a, b, k, q):
                v = v * value(P, c) % p
                if not v:
                    break
            row.append(v)
        entries.append(row)
    return ProgressionMatrix(entries, A, P, k, reading)


def is_r_injective(A, k: int, q: int) -> bool:
    """r a != r b for all distinct a, b in A and 1 <= r <= k-1."""
    pts = [tuple(a) for a in A]
    return all(len({point_scale(r, a, q) for a in pts}) == len(pts) for r in range(1, k))


@dataclass
class RankReport:
    rank: int
    bound: int
    holds: bool
    t: int
    diagonal: bool


def check_rank_bound(A, P: AlgebraElement, alpha, k: int, reading: str = "coefficient") -> RankReport:
    """Check rank(B) <= 2^(k-2) |M_{alpha,q}| for admissible (A, P)."""
    a = check_rational(alpha)
    algebra = P.algebra
    q, n = algebra.q, algebra.n
    if not is_r_injective(A, k, q):
        raise PreconditionError("A violates r-injectivity for some 1 <= r <= k-1")
    wide = MSetSpec.of(min(2 * a, 1), q, n)
    if 2 * a <= 1:
        outside = [lam for lam in P.support() if not wide.contains(lam)]
        if outside:
            raise PreconditionError(f"support of P leaves M_(2*alpha): {outside[0]}")
    matrix = build_B_matrix(A, P, k, reading)
    rank = matrix.rank()
    bound = 2 ** (k - 2) * m_set_size(MSetSpec.of(a, q, n))
    return RankReport(rank=rank, bound=bound, holds=rank <= bound, t=len(matrix.entries), diagonal=matrix.is_diagonal())


def verify_vanishing(B1, Bfull, k: int, q: int) -> bool:
    """True iff every ordered pair a != b of B1 has a progression point outside B1.

    This is the statement that the indicator of B1 kills every product
    P(2a-b)...P((k-1)a-(k-2)b); it holds when Bfull (containing B1) is
    k-AP-free because b, a, 2a-b, ... is then a k-term progression.
    """
    members = {tuple(b) for b in B1}
    if not members <= {tuple(b) for b in Bfull}:
        raise PreconditionError("B1 must be a subset of Bfull")
    for a in members:
        for b in members:
            if a != b and all(c in members for c in progression_points(a, b, k, q)):
                return False
    return True


@dataclass
class CosetReduction:
    q: int
    k: int
    d: int
    m: int
    representatives: list[Point]
    coset_sets: list[list[Point]]
    original_sizes: list[int]
    ap_free: list[bool] = field(default_factory=list)
    injective: list[bool] = field(default_factory=list)

    def lift(self) -> list[Point]:
        out = []
        for r, B in zip(self.representatives, self.coset_sets):
            out.extend(tuple((self.d * x + y) % self.q for x, y in zip(b, r)) for b in B)
        return sorted(out)


def kernel_reduce(A, q: int, k: int, rng: random.Random | None = None) -> CosetReduction:
    """Split A along the cosets of F = d Z_q^n, d = gcd(L_k, q), and rescale each piece.

    Each piece A_j becomes B_j = (A_j - r_j) / d inside Z_{q/d}^n. The
    representative r_j is the lexicographically least point of A_j unless
    ``rng`` is given, in which case it is drawn at random. For each piece
    the literal k-AP-freeness and r-injectivity are recorded; they are not
    raised on, since r-injectivity can fail for non-prime q/d.
    """
    check_int(k, "k", 3)
    check_int(q, "q", 2)
    if q < k:
        raise DomainError(f"need q >= k, got q={q}, k={k}")
    pts = sorted({tuple(a) for a in A})
    d = gcd(lcm_range(k), q)
    m = q // d
    groups: dict[Point, list[Point]] = {}
    for a in pts:
        groups.setdefault(tuple(x % d for x in a), []).append(a)
    reps, cosets, sizes, ap_free, injective = [], [], [], [], []
    for key in sorted(groups):
        members = groups[key]
        r = rng.choice(members) if rng is not None else members[0]
        B = sorted(tuple(((x - y) % q) // d for x, y in zip(a, r)) for a in members)
        reps.append(r)
        cosets.append(B)
        sizes.append(len(members))
        n = len(r)
        ap_free.append(contains_kap(B, k, m, n) is None)
        injective.append(is_r_injective(B, k, m))
    return CosetReduction(q, k, d, m, reps, cosets, sizes, ap_free, injective)


@dataclass
class KeyLemmaReport:
    q: int
    n: int
    k: int
    d: int
    m: int
    exact_max: int
    optimal: bool
    m_third: int
    bound: int
    bound_holds: bool
    reduction_sound: bool
    ap_free_ok: bool
    injective_ok: bool
    dimension_ok: bool
    vanishing_ok: bool
    diagonal_ok: bool
    rank_ok: bool

    @property
    def passed(self) -> bool:
        return all(
            (
                self.optimal,
                self.bound_holds,
                self.reduction_sound,
                self.ap_free_ok,
                self.injective_ok,
                self.dimension_ok,
                self.vanishing_ok,
                self.diagonal_ok,
                self.rank_ok,
            )
        )

    def to_dict(self) -> dict:
        data = asdict(self)
        data["passed"] = self.passed
        return data


def verify_key_lemma(q: int, n: int, k: int, max_points: int = 100) -> KeyLemmaReport:
    """End-to-end check of |A| <= (2^(k-2) + 1) d^n |M_{1/3, q/d}| at desk scale.

    Beyond the inequality for the exact maximum, the maximal witness is
    pushed through the coset reduction, and for every piece B_j the
    polynomial P = indicator(B_j cap M_{2/3}) is built: the dimension count,
    the vanishing condition, the diagonal shape of the progression matrix
    and its rank bound are all checked.
    """
    check_int(n, "n", 1)
    if q**n > max_points:
        raise DomainError(f"q^n = {q**n} exceeds the scale guard {max_points}")
    search = max_progression_free(q, n, k, ApSemantics.LITERAL)
    red = kernel_reduce(search.witness, q, k)
    d, m = red.d, red.m
    m_third = m_set_size(MSetSpec(1, 3, m, n))
    bound = (2 ** (k - 2) + 1) * d**n * m_third
    wide = MSetSpec(2, 3, m, n)

    dimension_ok = vanishing_ok = diagonal_ok = rank_ok = True
    for B in red.coset_sets:
        B1 = [b for b in B if wide.contains(b)]
        dimension_ok &= len(B1) >= len(B) - m_third
        if not B1 or m == 1:
            continue
        vanishing_ok &= verify_vanishing(B1, B, k, m)
        P = indicator_poly(GroupAlgebra(m, n), B1)
        matrix = build_B_matrix(B1, P, k)
        diagonal_ok &= matrix.is_diagonal() and all(v == 1 for v in matrix.diagonal())
        try:
            rank_ok &= check_rank_bound(B1, P, "1/3", k).holds
        except PreconditionError:
            rank_ok = False

    return KeyLemmaReport(
        q=q,
        n=n,
        k=k,
        d=d,
        m=m,
        exact_max=search.max_size,
        optimal=search.optimal,
        m_third=m_third,
        bound=bound,
        bound_holds=search.max_size <= bound,
        reduction_sound=red.lift() == sorted(search.witness) and sum(red.original_sizes) == search.max_size,
        ap_free_ok=all(red.ap_free),
        injective_ok=all(red.injective),
        dimension_ok=dimension_ok,
        vanishing_ok=vanishing_ok,
        diagonal_ok=diagonal_ok,
        rank_ok=rank_ok,
    )


def sample_admissible_set(q: int, n: int, k: int, rng: random.Random, attempts: int = 1000) -> list[Point]:
    """Random nonempty A with r-injectivity, by rejection (shrinking on repeated misses)."""
    pts = all_points(q, n)
    hi = len(pts)
    for i in range(attempts):
        t = rng.randint(1, hi)
        A = sorted(rng.sample(pts, t))
        if is_r_injective(A, k, q):
            return A
        if i % 20 == 19:
            hi = max(1, hi - 1)
    raise VerificationError(f"no admissible set found for q={q}, n={n}, k={k}")


def sample_polynomial(algebra: GroupAlgebra, alpha, rng: random.Random) -> AlgebraElement:
    """Random F_p coefficients on a random subset of M_(2 alpha); may be zero."""
    a = check_rational(alpha)
    wide = MSetSpec.of(min(2 * a, 1), algebra.q, algebra.n)
    pool = [lam for lam in algebra.points() if wide.contains(lam)]
    support = rng.sample(pool, rng.randint(0, len(pool)))
    return algebra.element({lam: rng.randrange(1, algebra.p) for lam in sorted(support)})
