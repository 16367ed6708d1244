"""Exact r_k(Z_q^n) at desk scale, progression tests and product sets.

Two readings of "k-term progression" are supported:

``literal``
    points a, a+d, ..., a+(k-1)d with d != 0, repetitions allowed. When the
    additive order of d is below k the progression wraps and revisits points,
    so e.g. {0, 2} in Z_4 contains the 3-term progression 0, 2, 0.
``distinct``
    the k points must additionally be pairwise distinct.

Literal forbids more patterns, so its maximum is never larger.
"""

from __future__ import annotations

import concurrent.futures
import enum
import itertools
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import floor

from ._validation import DomainError, check_int, factorize, prime_power
from .bound import progression_bound

Point = tuple[int, ...]

DEFAULT_MAX_POINTS = 256
DEFAULT_SPLIT_DEPTH = 4


class ApSemantics(str, enum.Enum):
    LITERAL = "literal"
    DISTINCT = "distinct"


def _semantics(sem) -> ApSemantics:
    try:
        return ApSemantics(sem)
    except ValueError as exc:
        raise DomainError(f"unknown semantics {sem!r}") from exc


def all_points(q: int, n: int) -> list[Point]:
    return list(itertools.product(range(q), repeat=n))


def encode(point: Point, q: int) -> int:
    idx = 0
    for c in point:
        idx = idx * q + c
    return idx


def decode(idx: int, q: int, n: int) -> Point:
    out = []
    for _ in range(n):
        idx, c = divmod(idx, q)
        out.append(c)
    return tuple(reversed(out))


def contains_kap(S, k: int, q: int, n: int, sem=ApSemantics.LITERAL) -> tuple[Point, Point] | None:
    """Return some (a, d), d != 0, with a + j d in S for j < k, or None."""
    check_int(k, "k", 3)
    sem = _semantics(sem)
    members = {tuple(s) for s in S}
    zero = (0,) * n
    for a in sorted(members):
        for d in itertools.product(range(q), repeat=n):
            if d == zero:
                continue
            terms = [tuple((x + j * y) % q for x, y in zip(a, d)) for j in range(k)]
            if not all(t in members for t in terms):
                continue
            if sem is ApSemantics.DISTINCT and len(set(terms)) < k:
                continue
            return a, d
    return None


def progression_masks(q: int, n: int, k: int, sem=ApSemantics.LITERAL) -> list[int]:
    """Distinct point sets of all k-APs, as bitmasks over encoded points."""
    sem = _semantics(sem)
    N = q**n
    pts = all_points(q, n)
    masks = set()
    for a in range(N):
        pa = pts[a]
        for dd in range(1, N):
            pd = pts[dd]
            mask = 0
            for j in range(k):
                mask |= 1 << encode(tuple((x + j * y) % q for x, y in zip(pa, pd)), q)
            if sem is ApSemantics.DISTINCT and mask.bit_count() < k:
                continue
            masks.add(mask)
    return sorted(masks)


@dataclass
class SearchResult:
    q: int
    n: int
    k: int
    semantics: str
    max_size: int
    witness: list[Point]
    nodes_explored: int
    optimal: bool
    budget_nodes: int | None

    def to_dict(self) -> dict:
        data = asdict(self)
        data["witness"] = [list(p) for p in self.witness]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "SearchResult":
        data = dict(data)
        data["witness"] = [tuple(p) for p in data["witness"]]
        return cls(**data)


class _BudgetExhausted(Exception):
    pass


def _subtree_search(table, state, lower, budget):
    """Best solution of size >= lower inside one subtree.

    ``table[v]`` lists, for each progression through branch position v, the
    mask of its other points. Returns (size, mask or None, nodes, exhausted).
    """
    best = [lower - 1, None]
    nodes = [0]

    def dfs(S, size, allowed):
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise _BudgetExhausted
        if size > best[0]:
            best[0], best[1] = size, S
        if size + allowed.bit_count() <= best[0] or not allowed:
            return
        bit = allowed & -allowed
        v = bit.bit_length() - 1
        S_in = S | bit
        allowed_in = allowed & ~bit
        for other in table[v]:
            missing = other & ~S_in
            if missing & (missing - 1) == 0:
                allowed_in &= ~missing
        dfs(S_in, size + 1, allowed_in)
        dfs(S, size, allowed & ~bit)

    S, size, allowed = state
    try:
        dfs(S, size, allowed)
    except _BudgetExhausted:
        return best[0], best[1], nodes[0], True
    return best[0], best[1], nodes[0], False


def _include(table, S, allowed, v):
    bit = 1 << v
    S_in = S | bit
    allowed_in = allowed & ~bit
    for other in table[v]:
        missing = other & ~S_in
        if missing & (missing - 1) == 0:
            allowed_in &= ~missing
    return S_in, allowed_in


def _frontier(table, n_pos, depth, fix_first):
    """Branch states after ``depth`` include/exclude decisions, in DFS order."""
    states = [(0, 0, (1 << n_pos) - 1)]
    nodes = 0
    for level in range(depth):
        nxt = []
        for S, size, allowed in states:
            if not allowed:
                nxt.append((S, size, allowed))
                continue
            nodes += 1
            v = (allowed & -allowed).bit_length() - 1
            S_in, allowed_in = _include(table, S, allowed, v)
            nxt.append((S_in, size + 1, allowed_in))
            if not (fix_first and level == 0):
                nxt.append((S, size, allowed & ~(1 << v)))
        states = nxt
    return states, nodes


def _run_subtree(args):
    return _subtree_search(*args)


def max_progression_free(
    q: int,
    n: int,
    k: int,
    sem=ApSemantics.LITERAL,
    budget_nodes: int | None = None,
    threads: int = 1,
    max_points: int = DEFAULT_MAX_POINTS,
    split_depth: int = DEFAULT_SPLIT_DEPTH,
) -> SearchResult:
    """Largest k-AP-free subset of Z_q^n by branch and bound.

    Points are branched in order of decreasing number of progressions through
    them (ties by encoding), include before exclude. A point is dropped from
    the candidate pool as soon as including it would complete a progression,
    and a branch is cut when its size plus the remaining pool cannot beat
    the incumbent. Progression-freeness is translation invariant, so the
    first point is always included.

    The tree is split into subtrees at a fixed depth and every subtree is
    searched against the same greedy lower bound, which makes the witness,
    node count and optimality flag independent of ``threads``.
    """
    check_int(q, "q", 2)
    check_int(n, "n", 1)
    check_int(k, "k", 3)
    check_int(threads, "threads", 1)
    sem = _semantics(sem)
    N = q**n
    if N > max_points:
        raise DomainError(f"q^n = {N} exceeds the scale guard {max_points}")

    masks = progression_masks(q, n, k, sem)
    degree = [0] * N
    for mask in masks:
        for v in range(N):
            if mask >> v & 1:
                degree[v] += 1
    order = sorted(range(N), key=lambda v: (-degree[v], v))
    pos_of = {v: i for i, v in enumerate(order)}

    def to_pos(mask):
        out = 0
        for v in range(N):
            if mask >> v & 1:
                out |= 1 << pos_of[v]
        return out

    table: list[list[int]] = [[] for _ in range(N)]
    for mask in masks:
        pm = to_pos(mask)
        rest = pm
        while rest:
            bit = rest & -rest
            table[bit.bit_length() - 1].append(pm & ~bit)
            rest &= rest - 1

    # greedy incumbent in branch order
    greedy_S, allowed = 0, (1 << N) - 1
    while allowed:
        v = (allowed & -allowed).bit_length() - 1
        greedy_S, allowed = _include(table, greedy_S, allowed, v)
    lower = greedy_S.bit_count()

    states, nodes = _frontier(table, N, min(split_depth, N), fix_first=True)
    share = None if budget_nodes is None else max(1, budget_nodes // len(states))
    jobs = [(table, state, lower, share) for state in states]
    if threads == 1 or len(jobs) == 1:
        outcomes = list(map(_run_subtree, jobs))
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(_run_subtree, jobs))

    best_size, best_mask, exhausted = lower, greedy_S, False
    for size, mask, sub_nodes, sub_exhausted in outcomes:
        nodes += sub_nodes
        exhausted |= sub_exhausted
        if mask is not None and size > best_size:
            best_size, best_mask = size, mask
    witness = sorted(decode(order[i], q, n) for i in range(N) if best_mask >> i & 1)
    return SearchResult(
        q=q,
        n=n,
        k=k,
        semantics=sem.value,
        max_size=best_size,
        witness=witness,
        nodes_explored=nodes,
        optimal=not exhausted,
        budget_nodes=budget_nodes,
    )


def product_set(S1, S2) -> list[Point]:
    """Cartesian product by coordinate concatenation."""
    return sorted(tuple(a) + tuple(b) for a in S1 for b in S2)


@dataclass
class ReductionCheck:
    N: int
    r_N: int
    rhs: int
    holds: bool


@dataclass
class ConsistencyReport:
    q: int
    n: int
    k: int
    r_exact: int
    optimal: bool
    theorem_applicable: bool
    c_value: float | None
    bound_floor: int | None
    theorem_holds: bool | None
    reductions: list[ReductionCheck] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.theorem_holds is not False and all(r.holds for r in self.reductions)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["holds"] = self.holds
        return data


def bound_consistency(
    q: int,
    n: int,
    k: int,
    budget_nodes: int | None = None,
    threads: int = 1,
    exact: SearchResult | None = None,
) -> ConsistencyReport:
    """Compare exact r_k(Z_q^n) (literal) with floor(c_k(q)^n) and with subgroup reductions.

    ``floor(c^n)`` is taken exactly from the rational value of ``q * A``. The
    reduction ``r_k(Z_q^n) <= (q/N)^n r_k(Z_N^n)`` is checked for every
    proper divisor N > 1 of q (Z_N^n sits in Z_q^n as a subgroup of index
    (q/N)^n).
    """
    if exact is None or exact.semantics != ApSemantics.LITERAL.value:
        exact = max_progression_free(q, n, k, ApSemantics.LITERAL, budget_nodes, threads)
    applicable = q >= k and prime_power(q) is not None
    c_value = bound_floor = theorem_holds = None
    if applicable:
        report = progression_bound(k, q)
        c_value = report.c_value
        bound_floor = floor((q * Fraction(report.a_value)) ** n)
        theorem_holds = exact.max_size <= bound_floor
    reductions = []
    for N in _proper_divisors(q):
        sub = max_progression_free(N, n, k, ApSemantics.LITERAL, budget_nodes, threads)
        rhs = (q // N) ** n * sub.max_size
        reductions.append(ReductionCheck(N=N, r_N=sub.max_size, rhs=rhs, holds=exact.max_size <= rhs))
    return ConsistencyReport(
        q=q,
        n=n,
        k=k,
        r_exact=exact.max_size,
        optimal=exact.optimal,
        theorem_applicable=applicable,
        c_value=c_value,
        bound_floor=bound_floor,
        theorem_holds=theorem_holds,
        reductions=reductions,
    )


def _proper_divisors(q: int) -> list[int]:
    divisors = [1]
    for p, e in factorize(q).items():
        divisors = [d * p**i for d in divisors for i in range(e + 1)]
    return sorted(d for d in divisors if 1 < d < q)
