"""Coefficient ring arithmetic: F_l[rho, tau] under two presets, and binomials mod l.

``closed`` models an algebraically closed base field: the coefficient ring is
F_l for odd l and F_2[tau] for l = 2 (rho = 0).  ``universal`` is F_2[rho, tau]
and only exists at l = 2.  Scalars are reduced into the preset's ring on
construction, so building ``rho`` in a closed preset simply yields zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping

Bidegree = tuple[int, int]


class Preset(str, enum.Enum):
    CLOSED = "closed"
    UNIVERSAL = "universal"


class PresetMismatch(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def add_bidegrees(x: Bidegree, y: Bidegree) -> Bidegree:
    return (x[0] + y[0], x[1] + y[1])


@lru_cache(maxsize=None)
def binom_mod(n: int, k: int, prime: int) -> int:
    """C(n, k) mod ``prime`` by Lucas' theorem; zero outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return 0
    result = 1
    while n or k:
        n, ni = divmod(n, prime)
        k, ki = divmod(k, prime)
        if ki > ni:
            return 0
        result = result * _small_binom(ni, ki, prime) % prime
    return result


@lru_cache(maxsize=None)
def _small_binom(n: int, k: int, prime: int) -> int:
    # n < prime, so this is a product of units
    num = den = 1
    for j in range(k):
        num = num * (n - j) % prime
        den = den * (j + 1) % prime
    return num * pow(den, -1, prime) % prime


@dataclass(frozen=True)
class CoefficientRing:
    """The ring H** of the base in one of the two supported presets."""

    prime: int
    preset: Preset = Preset.CLOSED

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        object.__setattr__(self, "preset", Preset(self.preset))
        if self.preset is Preset.UNIVERSAL and self.prime != 2:
            raise ValueError("the universal preset F_2[rho, tau] requires prime 2")

    @property
    def has_tau(self) -> bool:
        return self.prime == 2

    @property
    def has_rho(self) -> bool:
        return self.preset is Preset.UNIVERSAL

    def allows(self, rho_exp: int, tau_exp: int) -> bool:
        return (rho_exp == 0 or self.has_rho) and (tau_exp == 0 or self.has_tau)

    def scalar(self, terms: Mapping[tuple[int, int], int] | Iterable | int = 0) -> BaseScalar:
        if isinstance(terms, int):
            terms = {(0, 0): terms}
        return BaseScalar(self, terms)

    @cached_property
    def zero(self) -> BaseScalar:
        return BaseScalar(self, {})

    @cached_property
    def one(self) -> BaseScalar:
        return BaseScalar(self, {(0, 0): 1})

    @cached_property
    def rho(self) -> BaseScalar:
        return BaseScalar(self, {(1, 0): 1})

    @cached_property
    def tau(self) -> BaseScalar:
        return BaseScalar(self, {(0, 1): 1})

    def monomial(self, rho_exp: int, tau_exp: int, coeff: int = 1) -> BaseScalar:
        return BaseScalar(self, {(rho_exp, tau_exp): coeff})

    def __str__(self):
        return f"l={self.prime}, {self.preset.value}"


class BaseScalar:
    """Element of F_l[rho, tau] stored as a sorted tuple of ((a, b), c), c != 0.

    ``(a, b)`` are the exponents of rho and tau; the monomial rho^a tau^b sits
    in cohomological bidegree (a, a + b).
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: CoefficientRing, terms):
        p = ring.prime
        acc: dict[tuple[int, int], int] = {}
        items = terms.items() if hasattr(terms, "items") else terms
        for (a, b), c in items:
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent in rho^{a} tau^{b}")
            if not ring.allows(a, b):
                continue
            acc[(a, b)] = (acc.get((a, b), 0) + c) % p
        self.ring = ring
        self.terms = tuple(sorted((k, v) for k, v in acc.items() if v))
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    def __iter__(self) -> Iterator[tuple[tuple[int, int], int]]:
        return iter(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.ring.scalar(other)
        if not isinstance(other, BaseScalar):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.terms))
        return self._hash

    def _check(self, other) -> BaseScalar:
        if isinstance(other, int):
            return self.ring.scalar(other)
        if other.ring is not self.ring and other.ring != self.ring:
            raise PresetMismatch(f"cannot combine scalars over {self.ring} and {other.ring}")
        return other

    def __add__(self, other):
        other = self._check(other)
        acc = dict(self.terms)
        p = self.ring.prime
        for k, v in other.terms:
            acc[k] = (acc.get(k, 0) + v) % p
        return BaseScalar._raw(self.ring, tuple(sorted((k, v) for k, v in acc.items() if v)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.prime
        return BaseScalar._raw(self.ring, tuple((k, (-v) % p) for k, v in self.terms))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return scalar_multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.ring.one
        for _ in range(n):
            result = result * self
        return result

    @property
    def is_constant(self) -> bool:
        """True when the scalar lies in the prime field."""
        return all(k == (0, 0) for k, _ in self.terms)

    @property
    def constant_term(self) -> int:
        for k, v in self.terms:
            if k == (0, 0):
                return v
        return 0

    def bidegrees(self) -> set[Bidegree]:
        return {scalar_bidegree(a, b) for (a, b), _ in self.terms}

    def __repr__(self):
        from .textio import format_scalar

        return f"BaseScalar({format_scalar(self)!r}, {self.ring})"

    def __str__(self):
        from .textio import format_scalar

        return format_scalar(self)


def scalar_bidegree(rho_exp: int, tau_exp: int) -> Bidegree:
    return (rho_exp, rho_exp + tau_exp)


def scalar_multiply(x: BaseScalar, y: BaseScalar) -> BaseScalar:
    if x.ring is not y.ring and x.ring != y.ring:
        raise PresetMismatch(f"cannot multiply scalars over {x.ring} and {y.ring}")
    xt, yt = x.terms, y.terms
    if not xt or not yt:
        return x.ring.zero
    p = x.ring.prime
    # constant factors are the common case in coproducts
    if len(xt) == 1 and xt[0][0] == (0, 0):
        c = xt[0][1]
        return y if c == 1 else BaseScalar._raw(x.ring, tuple((k, v * c % p) for k, v in yt))
    if len(yt) == 1 and yt[0][0] == (0, 0):
        c = yt[0][1]
        return x if c == 1 else BaseScalar._raw(x.ring, tuple((k, v * c % p) for k, v in xt))
    acc: dict[tuple[int, int], int] = {}
    for (a1, b1), c1 in x.terms:
        for (a2, b2), c2 in y.terms:
            k = (a1 + a2, b1 + b2)
            acc[k] = (acc.get(k, 0) + c1 * c2) % p
    return BaseScalar._raw(x.ring, tuple(sorted((k, v) for k, v in acc.items() if v)))


def specialize(x: BaseScalar, rho_value: int = 0, tau_value: int = 1) -> int:
    """Evaluate at rho = rho_value, tau = tau_value in F_l.

    The default (rho -> 0, tau -> 1) is the comparison with classical
    cohomology: tau becomes invertible and rho vanishes over an
    algebraically closed field.
    """
    p = x.ring.prime
    total = 0
    for (a, b), c in x.terms:
        total += c * pow(rho_value, a, p) * pow(tau_value, b, p)
    return total % p
