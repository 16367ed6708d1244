"""Exact counts of the weight-bounded boxes M_{alpha,q} in dimension n.

``M_{alpha,q} = {lam in [0,q)^n : sum(lam_i) / (q-1) <= alpha * n}``. Membership
is always decided with cross-multiplied integers, never with floats: the
complement identity below is sensitive to points lying exactly on the
boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

from ._validation import DomainError, VerificationError, check_int, check_rational


@dataclass(frozen=True)
class MSetSpec:
    alpha_num: int
    alpha_den: int
    q: int
    n: int

    def __post_init__(self):
        check_int(self.alpha_num, "alpha_num", 0)
        check_int(self.alpha_den, "alpha_den", 1)
        # q = 1 is the degenerate box {0} reached by the coset reduction when q | L_k
        check_int(self.q, "q", 1)
        check_int(self.n, "n", 1)
        if self.alpha_num > self.alpha_den:
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha_num}/{self.alpha_den}")

    @classmethod
    def of(cls, alpha, q: int, n: int) -> "MSetSpec":
        a = check_rational(alpha)
        return cls(a.numerator, a.denominator, q, n)

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.alpha_num, self.alpha_den)

    @property
    def total(self) -> int:
        """Largest possible coordinate sum, n (q - 1)."""
        return self.n * (self.q - 1)

    @property
    def threshold(self) -> int:
        """Largest coordinate sum s with s * den <= num * n (q - 1)."""
        return self.alpha_num * self.total // self.alpha_den

    def contains(self, lam) -> bool:
        return sum(lam) * self.alpha_den <= self.alpha_num * self.total

    def mirror(self) -> "MSetSpec":
        """The box for 1 - alpha."""
        return MSetSpec.of(1 - self.alpha, self.q, self.n)


@lru_cache(maxsize=256)
def sum_distribution(q: int, n: int) -> tuple[int, ...]:
    """Coefficients of ((1 - z^q) / (1 - z))^n: entry s counts vectors in [0,q)^n with sum s."""
    counts = [1]
    for _ in range(n):
        prefix = [0]
        for c in counts:
            prefix.append(prefix[-1] + c)
        width = len(counts) + q - 1
        counts = [
            prefix[min(s, len(counts) - 1) + 1] - prefix[max(s - q + 1, 0)]
            for s in range(width)
        ]
    return tuple(counts)


def m_set_size(spec: MSetSpec) -> int:
    dist = sum_distribution(spec.q, spec.n)
    return sum(dist[: spec.threshold + 1])


def m_set_size_strict(spec: MSetSpec) -> int:
    """Count of vectors with sum(lam) / (q-1) < alpha n (strict inequality)."""
    dist = sum_distribution(spec.q, spec.n)
    bound = spec.alpha_num * spec.total
    # largest s with s * den < bound
    top = (bound - 1) // spec.alpha_den if bound > 0 else -1
    return sum(dist[: top + 1])


def m_complement_size(spec: MSetSpec) -> int:
    return spec.q**spec.n - m_set_size(spec)


@dataclass(frozen=True)
class ComplementCheck:
    holds: bool
    boundary_integral: bool
    complement_size: int
    mirror_size: int


def complement_identity_check(spec: MSetSpec) -> ComplementCheck:
    """Compare |complement of M_alpha| with |M_{1-alpha}|.

    The two agree unless ``alpha n (q-1)`` is an integer, in which case the
    mirror image of the boundary shell is counted on one side only and the
    complement can be strictly smaller. Raises VerificationError if the
    identity fails off the boundary.
    """
    boundary_integral = (spec.alpha_num * spec.total) % spec.alpha_den == 0
    complement = m_complement_size(spec)
    mirror = m_set_size(spec.mirror())
    holds = complement == mirror
    if not boundary_integral and not holds:
        raise VerificationError(
            f"complement identity failed off the boundary: {complement} != {mirror} for {spec}"
        )
    return ComplementCheck(holds, boundary_integral, complement, mirror)


@dataclass(frozen=True)
class ChernoffCheck:
    lhs: int
    rhs_log: float
    holds: bool


def chernoff_upper_check(q: int, n: int, a_upper: float) -> ChernoffCheck:
    """Check |M_{1/3,q}| <= (q * a_upper)^n.

    ``holds`` is decided exactly, by raising the binary value of
    ``q * a_upper`` to the n-th power as a rational; ``rhs_log`` is reported
    for display.
    """
    check_int(q, "q", 2)
    check_int(n, "n", 1)
    if not a_upper > 0:
        raise DomainError(f"a_upper must be positive, got {a_upper!r}")
    lhs = m_set_size(MSetSpec(1, 3, q, n))
    base = q * Fraction(a_upper)
    rhs_log = n * math.log(q * a_upper)
    return ChernoffCheck(lhs=lhs, rhs_log=rhs_log, holds=lhs <= base**n)
