"""Explicit constants for k-term progression-free subsets of Z_q^n.

The per-dimension constant is ``c_k(q) = q * A(q / gcd(L_k, q))`` where
``L_k = lcm(2, ..., k-1)`` and

    A(m) = min_{0<y<1} (1 - y^m) / (m (1 - y) y^((m-1)/3)).

Every reported value of ``A(m)`` is the ratio evaluated at an explicit witness
point, so it is an upper bound on the true minimum regardless of how well the
minimizer converged.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from math import gcd

from ._validation import DomainError, check_int, check_prime_power, factorize

# Upper bounds on A(N) for the prime powers N < 13, as published.
PUBLISHED_A_BOUNDS: dict[int, float] = {
    2: 0.94495,
    3: 0.9184,
    4: 0.9027,
    5: 0.8924,
    7: 0.8795,
    8: 0.8753,
    9: 0.8718,
    11: 0.8667,
}
ASYMPTOTIC_ALPHA = 2.148
ASYMPTOTIC_BOUND = 0.8415
BETA = 1.6
BETA_BOUND = 0.92
PRIME_POWER_BOUND = 0.945

EVAL_ULPS = 16


def certified_below(value: float, constant: float, ulps: int = EVAL_ULPS) -> bool:
    """True when ``value`` padded by ``ulps`` units in the last place is < constant."""
    return value + ulps * math.ulp(value) < constant


def lcm_range(t: int) -> int:
    """lcm(2, 3, ..., t-1)."""
    check_int(t, "t")
    if t < 3:
        raise DomainError(f"lcm_range needs t >= 3, got {t}")
    return math.lcm(*range(2, t))


def _check_ratio_args(m: int, y: float) -> None:
    check_int(m, "m", 1)
    if not 0.0 < y < 1.0:
        raise DomainError(f"y must lie in (0, 1), got {y!r}")


def _ratio_parts(m: int, y: float) -> tuple[float, float, float]:
    # 1 - y is exact in binary floating point for y >= 1/2
    one_minus_y = 1.0 - y
    log_y = math.log1p(-one_minus_y) if y >= 0.5 else math.log(y)
    one_minus_ym = -math.expm1(m * log_y)
    return one_minus_ym, m * one_minus_y, -(m - 1) * log_y / 3.0


def log_chernoff_ratio(m: int, y: float) -> float:
    """Natural log of the Chernoff ratio, evaluated without forming y^m directly."""
    _check_ratio_args(m, y)
    if m == 1:
        return 0.0
    num, den, expo = _ratio_parts(m, y)
    # log(m) and log(1 - y) nearly cancel for y near 1, so take one log of the product
    return math.log(num / den) + expo


def chernoff_ratio(m: int, y: float) -> float:
    """(1 - y^m) / (m (1 - y) y^((m-1)/3)); returns inf past the float range."""
    _check_ratio_args(m, y)
    if m == 1:
        return 1.0
    num, den, expo = _ratio_parts(m, y)
    try:
        return num / den * math.exp(expo)
    except OverflowError:
        return math.inf


def _golden_section(g, lo: float, hi: float, tol: float, max_iter: int = 200):
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    g1, g2 = g(x1), g(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if g1 <= g2:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - inv_phi * (hi - lo)
            g1 = g(x1)
        else:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + inv_phi * (hi - lo)
            g2 = g(x2)
    return (x1, g1) if g1 <= g2 else (x2, g2)


@dataclass(frozen=True)
class AMinimum:
    m: int
    witness_y: float
    a_value: float
    grid_lower: float
    slack: float


def minimize_A(m: int, grid_size: int = 4096, refine_tol: float = 1e-12) -> AMinimum:
    """Witness-certified upper bound on A(m).

    The scan runs over ``u = -log(y)`` on a logarithmic grid from ``1e-3/m``
    to 40, which is dense both near y = 0 and near y = 1 (the minimizer sits
    near ``y = 1 - 2.15/m`` for large m). No unimodality is assumed; the
    golden-section step only refines inside the best grid cell, and the
    better of the grid point and the refined point is kept.
    """
    check_int(m, "m", 1)
    check_int(grid_size, "grid_size")
    if grid_size < 64:
        raise DomainError(f"grid_size must be >= 64, got {grid_size}")
    if not refine_tol > 0:
        raise DomainError(f"refine_tol must be positive, got {refine_tol!r}")
    if m == 1:
        return AMinimum(m=1, witness_y=0.5, a_value=1.0, grid_lower=1.0, slack=0.0)

    lo, hi = math.log(1e-3 / m), math.log(40.0)
    ts = [lo + (hi - lo) * i / (grid_size - 1) for i in range(grid_size)]

    def y_of(t: float) -> float:
        return math.exp(-math.exp(t))

    def g(t: float) -> float:
        y = y_of(t)
        if not 0.0 < y < 1.0:
            return math.inf
        return log_chernoff_ratio(m, y)

    vals = [g(t) for t in ts]
    best = min(range(grid_size), key=vals.__getitem__)
    left, right = max(best - 1, 0), min(best + 1, grid_size - 1)

    t_ref, _ = _golden_section(g, ts[left], ts[right], refine_tol)
    candidates = [y_of(ts[best]), y_of(t_ref)]
    candidates = [y for y in candidates if 0.0 < y < 1.0]
    witness = min(candidates, key=lambda y: chernoff_ratio(m, y))
    a_value = chernoff_ratio(m, witness)

    grid_best = math.exp(vals[best])
    slack = max(math.exp(vals[left]), math.exp(vals[right])) - grid_best
    grid_lower = min(grid_best, a_value) - slack
    return AMinimum(m=m, witness_y=witness, a_value=a_value, grid_lower=grid_lower, slack=slack)


@dataclass(frozen=True)
class BoundReport:
    k: int
    q: int
    d: int
    m: int
    witness_y: float
    a_value: float
    c_value: float
    grid_lower: float
    trivial_flag: bool

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "BoundReport":
        return cls(**data)


def progression_bound(k: int, q: int, grid_size: int = 4096, refine_tol: float = 1e-12) -> BoundReport:
    """Per-dimension constant for k-AP-free subsets of Z_q^n, q a prime power >= k."""
    check_int(k, "k", 3)
    check_int(q, "q", 2)
    if q < k:
        raise DomainError(f"need q >= k, got q={q}, k={k}")
    check_prime_power(q)
    d = gcd(lcm_range(k), q)
    m = q // d
    amin = minimize_A(m, grid_size, refine_tol)
    return BoundReport(
        k=k,
        q=q,
        d=d,
        m=m,
        witness_y=amin.witness_y,
        a_value=amin.a_value,
        c_value=q * amin.a_value,
        grid_lower=amin.grid_lower,
        trivial_flag=(m == 1),
    )


def asymptotic_constant(alpha: float) -> float:
    """(e^(alpha/3) - e^(-2 alpha/3)) / alpha, the M -> inf limit at x = 1 - alpha/M."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    return (math.expm1(alpha / 3.0) - math.expm1(-2.0 * alpha / 3.0)) / alpha


@dataclass(frozen=True)
class BetaMajorant:
    exact: float
    majorant: float


def beta_majorant(beta: float, N: int) -> BetaMajorant:
    """Ratio at x = 1 - beta/N together with its N-uniform exponential majorant.

    The majorant dominates the exact value for every N >= 13 when beta >= 1;
    below beta = 1 the first exponent is no longer maximised at N = 13.
    """
    check_int(N, "N")
    if N < 13:
        raise DomainError(f"the majorant needs N >= 13, got {N}")
    if not 0 < beta < 13:
        raise DomainError(f"beta must lie in (0, 13), got {beta!r}")
    log_x = math.log1p(-beta / N)
    exact = (math.exp(-(N - 1) / 3.0 * log_x) - math.exp((2 * N + 1) / 3.0 * log_x)) / beta
    s = beta / (13.0 - beta)
    majorant = (math.exp(4.0 * s) - math.exp(-9.0 * s)) / beta
    return BetaMajorant(exact=exact, majorant=majorant)


@dataclass(frozen=True)
class DivisorConstant:
    N: int
    a_value: float
    constant: float
    below_k: bool
    theorem_constant: float | None


@dataclass(frozen=True)
class GeneralBound:
    k: int
    q: int
    entries: list[DivisorConstant] = field(default_factory=list)
    best: float = math.inf
    best_N: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def general_bound(k: int, q: int, grid_size: int = 4096, refine_tol: float = 1e-12) -> GeneralBound:
    """Constants ``q * A(N)`` over the unitary prime-power divisors N of q.

    This follows the subgroup reduction ``r_k(Z_q^n) <= (q/N)^n r_k(Z_N^n)``
    with ``A(N)`` plugged in as written. Entries with ``N < k`` are flagged
    because the prime-power bound is only established for ``N >= k``; for
    those ``theorem_constant`` is None, otherwise it carries
    ``(q/N) * c_k(N)``.
    """
    check_int(k, "k", 3)
    check_int(q, "q", 2)
    entries = []
    for p, e in sorted(factorize(q).items()):
        N = p**e
        a = minimize_A(N, grid_size, refine_tol).a_value
        theorem = None
        if N >= k:
            theorem = (q // N) * progression_bound(k, N, grid_size, refine_tol).c_value
        entries.append(DivisorConstant(N=N, a_value=a, constant=q * a, below_k=N < k, theorem_constant=theorem))
    best_entry = min(entries, key=lambda entry: (entry.constant, entry.N))
    return GeneralBound(k=k, q=q, entries=entries, best=best_entry.constant, best_N=best_entry.N)
