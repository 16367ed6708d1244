"""Input validation helpers shared by every module."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(ValueError):
    """A structural hypothesis of an operation is violated."""


def check_int(value, name: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return value


def factorize(q: int) -> dict[int, int]:
    """Trial-division factorization, returns ``{prime: exponent}``."""
    check_int(q, "q", 1)
    factors: dict[int, int] = {}
    rest = q
    p = 2
    while p <= isqrt(rest):
        while rest % p == 0:
            factors[p] = factors.get(p, 0) + 1
            rest //= p
        p += 1 if p == 2 else 2
    if rest > 1:
        factors[rest] = factors.get(rest, 0) + 1
    return factors


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e`` or None if q is not a prime power."""
    factors = factorize(q)
    if len(factors) != 1:
        return None
    ((p, e),) = factors.items()
    return p, e


def check_prime_power(q: int, name: str = "q") -> tuple[int, int]:
    check_int(q, name, 2)
    pe = prime_power(q)
    if pe is None:
        raise DomainError(f"{name}={q} is not a prime power")
    return pe


def check_rational(alpha, name: str = "alpha") -> Fraction:
    """Accept a Fraction, an int, or a ``"num/den"`` string. Floats are refused."""
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, int) and not isinstance(alpha, bool):
        return Fraction(alpha)
    if isinstance(alpha, str):
        num, sep, den = alpha.strip().partition("/")
        try:
            value = Fraction(int(num), int(den)) if sep else Fraction(int(num))
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"{name} must look like 'num/den', got {alpha!r}") from exc
        return value
    raise DomainError(f"{name} must be an exact rational, got {type(alpha).__name__}")


def check_point(point, q: int, n: int, name: str = "point") -> tuple[int, ...]:
    pt = tuple(point)
    if len(pt) != n:
        raise DomainError(f"{name} has length {len(pt)}, expected {n}")
    for c in pt:
        if not isinstance(c, int) or not 0 <= c < q:
            raise DomainError(f"{name} entry {c!r} outside [0, {q})")
    return pt


class VerificationError(AssertionError):
    """A mathematical property that must hold was observed to fail."""
