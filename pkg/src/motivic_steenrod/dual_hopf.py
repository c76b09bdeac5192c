"""The dual Steenrod algebra as a Hopf algebroid (A, Gamma).

Gamma = A[tau_0, tau_1, ..., xi_1, xi_2, ...] modulo
    tau_i^2 = tau xi_{i+1} + rho tau_{i+1} + rho tau_0 xi_{i+1},
with tau_r odd and xi_r even.  Coefficients from A are written on the left;
in tensor products every coefficient is moved to the leftmost slot through
the right unit eta_R(tau) = tau + rho tau_0, eta_R(rho) = rho.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

from .coefficients import (
    BaseScalar,
    Bidegree,
    CoefficientRing,
    PresetMismatch,
    scalar_bidegree,
)


class MilnorMonomial(NamedTuple):
    """tau_{r_1} tau_{r_2} ... xi_1^{s_1} xi_2^{s_2} ...

    ``taus`` holds the strictly increasing indices with exponent one and
    ``xis[k]`` is the exponent of xi_{k+1} (no trailing zeros).
    """

    taus: tuple[int, ...] = ()
    xis: tuple[int, ...] = ()

    @classmethod
    def make(cls, taus: Iterable[int] = (), xis: dict[int, int] | Iterable[int] = ()) -> MilnorMonomial:
        taus = tuple(sorted(taus))
        if len(set(taus)) != len(taus):
            raise ValueError("tau exponents are 0 or 1 in a Milnor monomial")
        if isinstance(xis, dict):
            n = max(xis, default=0)
            xis = [xis.get(r, 0) for r in range(1, n + 1)]
        return cls(taus, _trim(xis))

    def xi_exponent(self, r: int) -> int:
        return self.xis[r - 1] if 0 < r <= len(self.xis) else 0

    @property
    def is_unit(self) -> bool:
        return not self.taus and not self.xis

    @property
    def parity(self) -> int:
        return len(self.taus) % 2


ONE = MilnorMonomial()


def _trim(xis) -> tuple[int, ...]:
    xis = list(xis)
    while xis and xis[-1] == 0:
        xis.pop()
    return tuple(xis)


def tau_gen(r: int) -> MilnorMonomial:
    return MilnorMonomial((r,), ())


def xi_gen(r: int, exponent: int = 1) -> MilnorMonomial:
    return MilnorMonomial((), _trim([0] * (r - 1) + [exponent]))


@lru_cache(maxsize=1 << 16)
def milnor_bidegree(m: MilnorMonomial, prime: int) -> Bidegree:
    p = q = 0
    for r in m.taus:
        p += 2 * prime**r - 1
        q += prime**r - 1
    for k, s in enumerate(m.xis, start=1):
        p += s * (2 * prime**k - 2)
        q += s * (prime**k - 1)
    return (p, q)


@lru_cache(maxsize=1 << 16)
def milnor_key(m: MilnorMonomial, prime: int):
    return (*milnor_bidegree(m, prime), m.taus, m.xis)


# ---------------------------------------------------------------------------
# Gamma


class GammaElement:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: CoefficientRing, terms: Iterable[tuple[MilnorMonomial, BaseScalar]] = ()):
        acc: dict[MilnorMonomial, BaseScalar] = {}
        for m, c in terms:
            if isinstance(c, int):
                c = ring.scalar(c)
            elif c.ring != ring:
                raise PresetMismatch(f"coefficient over {c.ring} in element over {ring}")
            if c:
                acc[m] = acc[m] + c if m in acc else c
        self.ring = ring
        self.terms = tuple(
            sorted(((m, c) for m, c in acc.items() if c), key=lambda t: milnor_key(t[0], ring.prime))
        )

    @classmethod
    def monomial(cls, ring: CoefficientRing, m: MilnorMonomial, coeff: BaseScalar | int = 1) -> GammaElement:
        return cls(ring, [(m, coeff)])

    @classmethod
    def scalar(cls, s: BaseScalar) -> GammaElement:
        return cls(s.ring, [(ONE, s)])

    @property
    def prime(self) -> int:
        return self.ring.prime

    def __iter__(self) -> Iterator[tuple[MilnorMonomial, BaseScalar]]:
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, GammaElement):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.terms))

    def _check(self, other: GammaElement):
        if other.ring != self.ring:
            raise PresetMismatch(f"elements over {self.ring} and {other.ring}")

    def __add__(self, other: GammaElement) -> GammaElement:
        self._check(other)
        return GammaElement(self.ring, self.terms + other.terms)

    def __neg__(self):
        return GammaElement(self.ring, [(m, -c) for m, c in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s: BaseScalar | int) -> GammaElement:
        if isinstance(s, int):
            s = self.ring.scalar(s)
        return GammaElement(self.ring, [(m, s * c) for m, c in self.terms])

    def __mul__(self, other: GammaElement) -> GammaElement:
        return gamma_multiply(self, other)

    def __pow__(self, n: int) -> GammaElement:
        out = GammaElement.scalar(self.ring.one)
        for _ in range(n):
            out = out * self
        return out

    def term_bidegrees(self) -> list[Bidegree]:
        """Homological bidegree of each scalar-monomial term: coefficients
        from H** contribute with negated cohomological bidegree."""
        out = []
        for m, c in self.terms:
            p, q = milnor_bidegree(m, self.prime)
            for (a, b), _ in c.terms:
                dp, dq = scalar_bidegree(a, b)
                out.append((p - dp, q - dq))
        return out

    def __repr__(self):
        from .textio import format_gamma

        return f"GammaElement({format_gamma(self)!r}, {self.ring})"

    def __str__(self):
        from .textio import format_gamma

        return format_gamma(self)


def _add_into(acc: dict, key, c: BaseScalar):
    acc[key] = acc[key] + c if key in acc else c


def _times_xi(m: MilnorMonomial, xis: tuple[int, ...]) -> MilnorMonomial:
    n = max(len(m.xis), len(xis))
    a = m.xis + (0,) * (n - len(m.xis))
    b = xis + (0,) * (n - len(xis))
    return MilnorMonomial(m.taus, tuple(x + y for x, y in zip(a, b)))


def _times_tau(ring: CoefficientRing, m: MilnorMonomial, j: int) -> dict[MilnorMonomial, BaseScalar]:
    """m * tau_j, rewriting tau_j^2 through the defining relation."""
    if j not in m.taus:
        # tau_j moves left past the odd generators of larger index
        sign = -1 if sum(1 for r in m.taus if r > j) % 2 else 1
        return {MilnorMonomial(tuple(sorted(m.taus + (j,))), m.xis): ring.scalar(sign)}
    if ring.prime != 2:
        # tau_j^2 = -tau_j^2 for odd generators, and rho = tau = 0 in A -> M**
        return {}
    rest = MilnorMonomial(tuple(r for r in m.taus if r != j), m.xis)
    out: dict[MilnorMonomial, BaseScalar] = {}
    xi_next = xi_gen(j + 1).xis
    if ring.has_tau:
        _add_into(out, _times_xi(rest, xi_next), ring.tau)
    if ring.has_rho:
        for mm, c in _times_tau(ring, rest, j + 1).items():
            _add_into(out, mm, ring.rho * c)
        for mm, c in _times_tau(ring, _times_xi(rest, xi_next), 0).items():
            _add_into(out, mm, ring.rho * c)
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _mono_mul(ring: CoefficientRing, x: MilnorMonomial, y: MilnorMonomial) -> tuple:
    current: dict[MilnorMonomial, BaseScalar] = {x: ring.one}
    for j in y.taus:
        nxt: dict[MilnorMonomial, BaseScalar] = {}
        for m, c in current.items():
            for mm, c2 in _times_tau(ring, m, j).items():
                _add_into(nxt, mm, c * c2)
        current = nxt
    return tuple((_times_xi(m, y.xis), c) for m, c in current.items() if c)


def gamma_multiply(x: GammaElement, y: GammaElement) -> GammaElement:
    if x.ring != y.ring:
        raise PresetMismatch(f"elements over {x.ring} and {y.ring}")
    return GammaElement(x.ring, _gmul(x.ring, dict(x.terms), dict(y.terms)).items())


def mono(ring: CoefficientRing, m: MilnorMonomial) -> GammaElement:
    return GammaElement(ring, [(m, ring.one)])


# ---------------------------------------------------------------------------
# units, counit


def _gmul(ring: CoefficientRing, x: dict, y: dict) -> dict:
    out: dict[MilnorMonomial, BaseScalar] = {}
    for m1, c1 in x.items():
        for m2, c2 in y.items():
            c = c1 * c2
            if not c:
                continue
            for m, c3 in _mono_mul(ring, m1, m2):
                _add_into(out, m, c * c3)
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _eta_right_tau_power(ring: CoefficientRing, n: int) -> tuple:
    if n == 0:
        return ((ONE, ring.one),)
    base = {ONE: ring.tau, tau_gen(0): ring.rho}
    base = {k: v for k, v in base.items() if v}
    return tuple(_gmul(ring, dict(_eta_right_tau_power(ring, n - 1)), base).items())


@lru_cache(maxsize=None)
def _eta_right_poly(s: BaseScalar) -> tuple:
    ring = s.ring
    out: dict[MilnorMonomial, BaseScalar] = {}
    for (a, b), c in s.terms:
        k = ring.monomial(a, 0, c)
        for m, cm in _eta_right_tau_power(ring, b):
            _add_into(out, m, k * cm)
    return tuple((m, c) for m, c in out.items() if c)


def eta_left(s: BaseScalar) -> GammaElement:
    return GammaElement.scalar(s)


def eta_right(s: BaseScalar) -> GammaElement:
    """eta_R(rho) = rho, eta_R(tau) = tau + rho tau_0, extended multiplicatively."""
    return GammaElement(s.ring, _eta_right_poly(s))


def counit(x: GammaElement) -> BaseScalar:
    for m, c in x.terms:
        if m.is_unit:
            return c
    return x.ring.zero


# ---------------------------------------------------------------------------
# tensor powers


def _constant(c: BaseScalar) -> bool:
    t = c.terms
    return len(t) == 1 and t[0][0] == (0, 0)


class TensorElement:
    """Element of Gamma (x)_A ... (x)_A Gamma with all coefficients in the first slot."""

    __slots__ = ("ring", "arity", "terms")

    def __init__(self, ring: CoefficientRing, arity: int, terms: Iterable[tuple[tuple, BaseScalar]] = ()):
        acc: dict[tuple, BaseScalar] = {}
        for key, c in terms:
            if len(key) != arity:
                raise ValueError(f"tensor term of length {len(key)} in a {arity}-fold tensor")
            if c:
                _add_into(acc, key, c)
        self.ring = ring
        self.arity = arity
        p = ring.prime
        self.terms = tuple(
            sorted(
                ((k, c) for k, c in acc.items() if c),
                key=lambda t: tuple(milnor_key(m, p) for m in t[0]),
            )
        )

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self.ring, self.arity, self.terms) == (other.ring, other.arity, other.terms)

    def __hash__(self):
        return hash((self.ring, self.arity, self.terms))

    def __add__(self, other: TensorElement) -> TensorElement:
        if (other.ring, other.arity) != (self.ring, self.arity):
            raise PresetMismatch("incompatible tensor elements")
        return TensorElement(self.ring, self.arity, self.terms + other.terms)

    def __mul__(self, other: TensorElement) -> TensorElement:
        return tensor_multiply(self, other)

    def __repr__(self):
        from .textio import format_tensor

        return f"TensorElement({format_tensor(self)!r}, {self.ring})"

    def __str__(self):
        from .textio import format_tensor

        return format_tensor(self)


def _push_left(ring: CoefficientRing, slots: list[dict]) -> dict[tuple, BaseScalar]:
    """Expand a product of slot polynomials, moving coefficients to slot one."""
    if len(slots) == 1:
        return {(m,): c for m, c in slots[0].items()}
    *head, last = slots
    out: dict[tuple, BaseScalar] = {}
    plain = None
    for m, c in last.items():
        if _constant(c):
            if plain is None:
                plain = _push_left(ring, head)
            for key, cc in plain.items():
                _add_into(out, key + (m,), cc * c)
        else:
            moved = head[:-1] + [_gmul(ring, head[-1], dict(_eta_right_poly(c)))]
            for key, cc in _push_left(ring, moved).items():
                _add_into(out, key + (m,), cc)
    return out


def tensor_normalize(ring: CoefficientRing, raw: Iterable[tuple[BaseScalar, list[GammaElement]]]) -> TensorElement:
    """Push every coefficient to the first slot: x (x) a.y = x.eta_R(a) (x) y."""
    out: dict[tuple, BaseScalar] = {}
    arity = 2
    for c, slots in raw:
        arity = len(slots)
        if not c:
            continue
        polys = [dict(g.terms) if isinstance(g, GammaElement) else dict(g) for g in slots]
        for key, coeff in _push_left(ring, polys).items():
            _add_into(out, key, c * coeff)
    return TensorElement(ring, arity, out.items())


def _tmul(ring: CoefficientRing, x: dict, y: dict) -> dict:
    """Product in the tensor power, Koszul signs included, coefficients pushed left."""
    out: dict[tuple, BaseScalar] = {}
    for kx, cx in x.items():
        for ky, cy in y.items():
            sign = 0
            for i in range(len(ky)):
                if ky[i].parity:
                    sign += sum(m.parity for m in kx[i + 1 :])
            c = cx * cy
            if sign % 2:
                c = -c
            if not c:
                continue
            slots = [_mono_mul(ring, a, b) for a, b in zip(kx, ky)]
            if all(_constant(cc) for sl in slots[1:] for _, cc in sl):
                # common case: only the first slot may carry coefficients
                partial = [((), c)]
                for sl in slots:
                    partial = [(key + (m,), pc * cc) for key, pc in partial for m, cc in sl]
                for key, pc in partial:
                    _add_into(out, key, pc)
            else:
                for key, pc in _push_left(ring, [dict(sl) for sl in slots]).items():
                    _add_into(out, key, c * pc)
    return {k: v for k, v in out.items() if v}


def tensor_multiply(x: TensorElement, y: TensorElement) -> TensorElement:
    """Slotwise product with the Koszul sign of every transposition."""
    if (x.ring, x.arity) != (y.ring, y.arity):
        raise PresetMismatch("incompatible tensor elements")
    return TensorElement(x.ring, x.arity, _tmul(x.ring, dict(x.terms), dict(y.terms)).items())


def tensor_unit(ring: CoefficientRing, arity: int = 2) -> TensorElement:
    return TensorElement(ring, arity, [((ONE,) * arity, ring.one)])


# ---------------------------------------------------------------------------
# coproduct


@lru_cache(maxsize=None)
def _coproduct_generator(ring: CoefficientRing, kind: str, r: int) -> tuple:
    l = ring.prime
    one = ring.one
    if kind == "tau":
        terms = [((tau_gen(r), ONE), one), ((ONE, tau_gen(r)), one)]
        terms += [((xi_gen(r - i, l**i), tau_gen(i)), one) for i in range(r)]
    else:
        terms = [((xi_gen(r), ONE), one), ((ONE, xi_gen(r)), one)]
        terms += [((xi_gen(r - i, l**i), xi_gen(i)), one) for i in range(1, r)]
    return tuple(terms)


@lru_cache(maxsize=None)
def _coproduct_monomial(ring: CoefficientRing, m: MilnorMonomial) -> tuple:
    if m.is_unit:
        return (((ONE, ONE), ring.one),)
    if m.xis:
        # peel one xi off the highest index
        r = len(m.xis)
        rest = MilnorMonomial(m.taus, _trim(m.xis[:-1] + (m.xis[-1] - 1,)))
        gen = _coproduct_generator(ring, "xi", r)
    else:
        *taus, r = m.taus
        rest = MilnorMonomial(tuple(taus), ())
        gen = _coproduct_generator(ring, "tau", r)
    return tuple(_tmul(ring, dict(_coproduct_monomial(ring, rest)), dict(gen)).items())


def coproduct(x: GammaElement) -> TensorElement:
    ring = x.ring
    out: dict[tuple, BaseScalar] = {}
    for m, c in x.terms:
        for k, cc in _coproduct_monomial(ring, m):
            _add_into(out, k, c * cc)
    return TensorElement(ring, 2, out.items())


def coproduct_terms(ring: CoefficientRing, m: MilnorMonomial) -> tuple:
    """Delta of a coefficient-free monomial as ((left, right), coefficient) pairs."""
    return _coproduct_monomial(ring, m)


def apply_in_slot(t: TensorElement, slot: int, fn) -> TensorElement:
    """Apply ``fn``: MilnorMonomial -> ((left, right), coeff) pairs in one slot.

    The result has one more tensor factor.  Coefficients produced in the
    image slot are carried to the first slot through eta_R.  Delta has
    degree zero, so no Koszul sign appears.
    """
    ring = t.ring
    out: dict[tuple, BaseScalar] = {}
    for key, c in t.terms:
        head, m, tail = key[:slot], key[slot], key[slot + 1 :]
        for (a, b), cd in fn(m):
            if slot == 0 or _constant(cd):
                _add_into(out, (a, b) + tail if slot == 0 else head + (a, b) + tail, c * cd)
                continue
            slots = [{x: ring.one} for x in head[:-1]]
            slots.append({head[-1]: c})
            slots.append({a: cd})
            slots += [{b: ring.one}] + [{x: ring.one} for x in tail]
            for k2, c2 in _push_left(ring, slots).items():
                _add_into(out, k2, c2)
    return TensorElement(ring, t.arity + 1, out.items())


def coassociativity_sides(x: GammaElement) -> tuple[TensorElement, TensorElement]:
    """((Delta (x) id) Delta x, (id (x) Delta) Delta x) in normal form."""
    ring = x.ring
    d = coproduct(x)
    f = lambda m: _coproduct_monomial(ring, m)
    return apply_in_slot(d, 0, f), apply_in_slot(d, 1, f)


def counit_left(t: TensorElement) -> GammaElement:
    """(epsilon (x) id): coefficients act through eta_L."""
    return GammaElement(t.ring, [(b, c) for (a, b), c in t.terms if a.is_unit])


def counit_right(t: TensorElement) -> GammaElement:
    """(id (x) epsilon): epsilon of the right slot returns to Gamma through eta_R."""
    return GammaElement(t.ring, [(a, c) for (a, b), c in t.terms if b.is_unit])


# ---------------------------------------------------------------------------
# antipode


@lru_cache(maxsize=None)
def _antipode_generator(ring: CoefficientRing, kind: str, r: int) -> GammaElement:
    l = ring.prime
    if kind == "tau":
        out = -mono(ring, tau_gen(r))
        for i in range(r):
            out = out - mono(ring, xi_gen(r - i, l**i)) * _antipode_generator(ring, "tau", i)
        return out
    out = -mono(ring, xi_gen(r))
    for i in range(1, r):
        out = out - mono(ring, xi_gen(r - i, l**i)) * _antipode_generator(ring, "xi", i)
    return out


@lru_cache(maxsize=None)
def _antipode_monomial(ring: CoefficientRing, m: MilnorMonomial) -> GammaElement:
    out = GammaElement.scalar(ring.one)
    for r in m.taus:
        out = out * _antipode_generator(ring, "tau", r)
    for k, s in enumerate(m.xis, start=1):
        if s:
            out = out * _antipode_generator(ring, "xi", k) ** s
    return out


def antipode(x: GammaElement) -> GammaElement:
    """Ring map with c(rho) = rho, c(tau) = tau + rho tau_0 and the generator recursions."""
    ring = x.ring
    out = GammaElement(ring)
    for m, c in x.terms:
        out = out + eta_right(c) * _antipode_monomial(ring, m)
    return out


def antipode_generator(ring: CoefficientRing, kind: str, r: int) -> GammaElement:
    if kind not in ("tau", "xi") or r < (0 if kind == "tau" else 1):
        raise ValueError(f"no generator {kind}_{r}")
    return _antipode_generator(ring, kind, r)


# ---------------------------------------------------------------------------
# basis


@lru_cache(maxsize=None)
def milnor_monomials(prime: int, degree: int) -> tuple[MilnorMonomial, ...]:
    """Coefficient-free Milnor monomials of first degree ``degree``."""
    if degree < 0:
        return ()
    tau_degs = []
    r = 0
    while 2 * prime**r - 1 <= degree:
        tau_degs.append(2 * prime**r - 1)
        r += 1
    xi_degs = []
    r = 1
    while 2 * prime**r - 2 <= degree:
        xi_degs.append(2 * prime**r - 2)
        r += 1
    out = []

    def xi_part(k: int, remaining: int, acc: list[int], taus: tuple):
        if k < 0:
            if remaining == 0:
                out.append(MilnorMonomial(taus, _trim(acc)))
            return
        d = xi_degs[k]
        for s in range(remaining // d + 1):
            acc[k] = s
            xi_part(k - 1, remaining - s * d, acc, taus)
        acc[k] = 0

    def tau_part(r: int, remaining: int, taus: tuple):
        if r == len(tau_degs):
            xi_part(len(xi_degs) - 1, remaining, [0] * len(xi_degs), taus)
            return
        tau_part(r + 1, remaining, taus)
        if tau_degs[r] <= remaining:
            tau_part(r + 1, remaining - tau_degs[r], taus + (r,))

    tau_part(0, degree, ())
    return tuple(sorted(out, key=lambda m: milnor_key(m, prime)))


def milnor_basis(p: int, q: int, prime: int) -> list[MilnorMonomial]:
    return [m for m in milnor_monomials(prime, p) if milnor_bidegree(m, prime)[1] == q]
