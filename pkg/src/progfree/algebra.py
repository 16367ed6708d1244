"""The truncated group algebra F_p[X_1..X_n] / (X_i^q) with q = p^e.

Writing Y_i = X_i + 1, the group element c of Z_q^n becomes
``Y^c = prod (X_i + 1)^{c_i}``. Since ``(X + 1)^q = X^q + 1`` over F_p and
``X^q = 0``, each Y_i has order q and ``c -> Y^c`` is a homomorphism.

Two kinds of vector addition occur and they are kept apart:

* :func:`exp_add` adds monomial exponents over the integers (a result with an
  entry >= q means the product monomial vanishes);
* :func:`point_add` adds group elements modulo q.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import product
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping

from ._validation import (
    DomainError,
    PreconditionError,
    check_point,
    check_prime_power,
    check_rational,
)

Exp = tuple[int, ...]


def exp_add(a: Exp, b: Exp) -> Exp:
    """Exponent addition over the integers (no reduction)."""
    return tuple(x + y for x, y in zip(a, b))


def point_add(a: Exp, b: Exp, q: int) -> Exp:
    """Group addition in Z_q^n."""
    return tuple((x + y) % q for x, y in zip(a, b))


def point_scale(r: int, a: Exp, q: int) -> Exp:
    return tuple((r * x) % q for x in a)


class GroupAlgebra:
    """Ambient data ``(p, q, n)``; q must be a prime power."""

    def __init__(self, q: int, n: int):
        p, e = check_prime_power(q)
        if not isinstance(n, int) or n < 1:
            raise DomainError(f"n must be a positive integer, got {n!r}")
        self.p, self.e, self.q, self.n = p, e, q, n

    def __eq__(self, other):
        return isinstance(other, GroupAlgebra) and (self.q, self.n) == (other.q, other.n)

    def __hash__(self):
        return hash((self.q, self.n))

    def __repr__(self):
        return f"GroupAlgebra(p={self.p}, q={self.q}, n={self.n})"

    def element(self, coeffs: Mapping[Exp, int] | Iterable[tuple[Exp, int]]) -> "AlgebraElement":
        return AlgebraElement(self, coeffs)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {(0,) * self.n: 1})

    def monomial(self, exp: Exp, coeff: int = 1) -> "AlgebraElement":
        return AlgebraElement(self, {tuple(exp): coeff})

    def points(self) -> Iterable[Exp]:
        return product(range(self.q), repeat=self.n)


class AlgebraElement:
    """Sparse element ``sum f(a) X^a``; immutable once built."""

    __slots__ = ("algebra", "_coeffs")

    def __init__(self, algebra: GroupAlgebra, coeffs):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        p = algebra.p
        acc: dict[Exp, int] = defaultdict(int)
        for exp, c in items:
            exp = check_point(exp, algebra.q, algebra.n, "exponent")
            acc[exp] = (acc[exp] + c) % p
        self.algebra = algebra
        self._coeffs = MappingProxyType({e: c for e, c in sorted(acc.items()) if c})

    @property
    def coeffs(self) -> Mapping[Exp, int]:
        return self._coeffs

    def support(self) -> list[Exp]:
        return list(self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra == other.algebra and dict(self._coeffs) == dict(other._coeffs)

    def __hash__(self):
        return hash((self.algebra, frozenset(self._coeffs.items())))

    def __repr__(self):
        if not self._coeffs:
            return "0"
        return " + ".join(f"{c}*X^{e}" for e, c in self._coeffs.items())

    def _check_same(self, other: "AlgebraElement"):
        if self.algebra != other.algebra:
            raise DomainError(f"ambient mismatch: {self.algebra} vs {other.algebra}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_same(other)
        return AlgebraElement(self.algebra, list(self._coeffs.items()) + list(other._coeffs.items()))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgebraElement(self.algebra, {e: c * other for e, c in self._coeffs.items()})
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "AlgebraElement":
        if k < 0:
            raise DomainError("negative powers are not defined")
        result, base = self.algebra.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def multiply(e1: AlgebraElement, e2: AlgebraElement) -> AlgebraElement:
    """Distributive product with X_i^q = 0 and coefficients mod p."""
    e1._check_same(e2)
    q, p = e1.algebra.q, e1.algebra.p
    acc: dict[Exp, int] = defaultdict(int)
    for a, ca in e1.coeffs.items():
        for b, cb in e2.coeffs.items():
            s = exp_add(a, b)
            if any(x >= q for x in s):
                continue
            acc[s] = (acc[s] + ca * cb) % p
    return AlgebraElement(e1.algebra, acc)


def y_power(algebra: GroupAlgebra, c: Exp) -> AlgebraElement:
    """Expand ``prod (X_i + 1)^{c_i}`` by the binomial theorem, mod p."""
    c = check_point(c, algebra.q, algebra.n)
    p, q = algebra.p, algebra.q
    factors = []
    for ci in c:
        terms = [(j, comb(ci, j) % p) for j in range(min(ci, q - 1) + 1)]
        factors.append([(j, v) for j, v in terms if v])
    coeffs = {}
    for combo in product(*factors):
        exp = tuple(j for j, _ in combo)
        value = 1
        for _, v in combo:
            value = value * v % p
        coeffs[exp] = value
    return AlgebraElement(algebra, coeffs)


def coeff_at(f: AlgebraElement, c: Exp) -> int:
    """The coefficient f(c) of X^c; this is what ``P(c)`` means throughout."""
    return f.coeffs.get(tuple(c), 0)


def indicator_poly(algebra: GroupAlgebra, points: Iterable[Exp]) -> AlgebraElement:
    pts = {tuple(b) for b in points}
    if not pts:
        raise DomainError("indicator_poly needs a nonempty set")
    return AlgebraElement(algebra, {b: 1 for b in pts})


def evaluate_polynomial(f: AlgebraElement, x: Exp) -> int:
    """Point evaluation ``sum f(lam) prod x_i^lam_i`` over F_p, for q = p prime only.

    Not used by the rank argument as stated; kept to compare the two readings
    of ``P(c)``.
    """
    algebra = f.algebra
    if algebra.e != 1:
        raise DomainError("point evaluation needs q prime")
    p = algebra.p
    total = 0
    for lam, c in f.coeffs.items():
        term = c
        for xi, li in zip(x, lam):
            term = term * pow(xi, li, p) % p
        total += term
    return total % p


def weight(lam: Exp, q: int) -> Fraction:
    """sum(lam) / (q - 1), exactly."""
    if q < 2:
        raise DomainError(f"weight needs q >= 2, got {q}")
    return Fraction(sum(lam), q - 1)


def split_monomial(lam: Exp, alpha, q: int) -> tuple[Exp, Exp]:
    """Split lam = mu + nu (over Z) with weight(mu) <= alpha * n.

    Greedy: coordinates are filled low index first, one unit at a time, until
    one more unit would push mu past the weight budget.
    """
    a = check_rational(alpha)
    n = len(lam)
    if sum(lam) * a.denominator > 2 * a.numerator * n * (q - 1):
        raise PreconditionError(f"weight of {lam} exceeds 2*alpha*n = {2 * a * n}")
    budget = a.numerator * n * (q - 1) // a.denominator
    mu = []
    for x in lam:
        take = min(x, budget)
        mu.append(take)
        budget -= take
    mu = tuple(mu)
    nu = tuple(x - y for x, y in zip(lam, mu))
    return mu, nu


def decompose_P(P: AlgebraElement, alpha) -> list[tuple[Exp, AlgebraElement]]:
    """Write P = sum_f X^f * F_f with every f of weight <= alpha * n.

    Monomials of P are grouped by the low-weight half of their split. The
    products X^f * F_f never truncate because f + nu reproduces an exponent
    of P, all of whose entries are < q.
    """
    a = check_rational(alpha)
    algebra = P.algebra
    n, q = algebra.n, algebra.q
    limit = 2 * a.numerator * n * (q - 1)
    groups: dict[Exp, list[tuple[Exp, int]]] = defaultdict(list)
    for lam, c in P.coeffs.items():
        if sum(lam) * a.denominator > limit:
            raise PreconditionError(f"support point {lam} lies outside M_(2*alpha)")
        mu, nu = split_monomial(lam, a, q)
        groups[mu].append((nu, c))
    return [(mu, AlgebraElement(algebra, terms)) for mu, terms in sorted(groups.items())]


def recompose(parts: list[tuple[Exp, AlgebraElement]], algebra: GroupAlgebra) -> AlgebraElement:
    total = algebra.zero()
    for mu, cofactor in parts:
        total = total + algebra.monomial(mu) * cofactor
    return total
