"""Duality between admissible operations and Milnor monomials (closed presets).

The pairing is fixed on generators, beta <-> tau_0 and P^k <-> xi_1^k, and
extended to words through the coproduct:

    <g w, m> = sum over Delta(m) = sum c m' (x) m''  of  c <g, m'> <w, m''>

so the leftmost letter of a word pairs with the left tensor slot
(``LETTER_SLOT``).  The opposite order contradicts the Adem relations, first
at Sq^2 Sq^4 evaluated on xi_2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .coefficients import BaseScalar, Bidegree, CoefficientRing, Preset, PresetMismatch
from .dual_hopf import MilnorMonomial, coproduct_terms, milnor_basis, milnor_bidegree, milnor_monomials, tau_gen, xi_gen
from .steenrod_ops import BOCKSTEIN, OpElement, Word, op_basis

LETTER_SLOT = "left"
SLOTS = ("left", "right")


class UnsupportedPreset(ValueError):
    pass


def _require_closed(ring: CoefficientRing):
    if ring.preset is not Preset.CLOSED:
        raise UnsupportedPreset("the pairing is only defined here for closed presets")


def generator_dual(g: int) -> MilnorMonomial:
    return tau_gen(0) if g == BOCKSTEIN else xi_gen(1, g)


def _check_slot(slot: str):
    if slot not in SLOTS:
        raise ValueError(f"slot must be one of {SLOTS}")


@lru_cache(maxsize=None)
def _pair_word(ring: CoefficientRing, word: Word, d: MilnorMonomial, slot: str = LETTER_SLOT) -> BaseScalar:
    if not word:
        return ring.one if d.is_unit else ring.zero
    target = generator_dual(word[0])
    rest = word[1:]
    total = ring.zero
    for (left, right), c in coproduct_terms(ring, d):
        here, there = (left, right) if slot == "left" else (right, left)
        if here == target:
            v = _pair_word(ring, rest, there, slot)
            if v:
                total = total + c * v
    return total


def pair(ring: CoefficientRing, m: Word, d: MilnorMonomial, slot: str = LETTER_SLOT) -> BaseScalar:
    """<m, d>; ``slot`` other than the default exists only to exhibit its failure."""
    _require_closed(ring)
    _check_slot(slot)
    return _pair_word(ring, tuple(m), d, slot)


def pair_element(x: OpElement, d: MilnorMonomial, slot: str = LETTER_SLOT) -> BaseScalar:
    """M**-linear extension: coefficients of x multiply the value."""
    _require_closed(x.ring)
    _check_slot(slot)
    total = x.ring.zero
    for w, c in x.terms:
        total = total + c * _pair_word(x.ring, w, d, slot)
    return total


# ---------------------------------------------------------------------------
# functionals


@dataclass(frozen=True)
class DualFunctional:
    """An operation seen as a functional on coefficient-free Milnor monomials."""

    ring: CoefficientRing
    bidegree: Bidegree
    values: tuple[tuple[MilnorMonomial, BaseScalar], ...]

    def __call__(self, m: MilnorMonomial) -> BaseScalar:
        for k, v in self.values:
            if k == m:
                return v
        return self.ring.zero

    def as_dict(self) -> dict[MilnorMonomial, BaseScalar]:
        return dict(self.values)

    def __bool__(self):
        return bool(self.values)


def _make_functional(ring, bidegree, values: dict) -> DualFunctional:
    p = ring.prime
    items = sorted(((m, v) for m, v in values.items() if v), key=lambda t: (milnor_bidegree(t[0], p), t[0]))
    return DualFunctional(ring, bidegree, tuple(items))


def functional(x: OpElement, bidegree: Bidegree | None = None, slot: str = LETTER_SLOT) -> DualFunctional:
    """Values of x on every Milnor monomial of its cohomological degree.

    ``x`` must be homogeneous; ``bidegree`` is required only for zero.
    """
    ring = x.ring
    _require_closed(ring)
    degrees = set(x.term_bidegrees())
    if bidegree is None:
        if len(degrees) != 1:
            raise ValueError("functional() needs a homogeneous nonzero element or an explicit bidegree")
        (bidegree,) = degrees
    elif degrees - {tuple(bidegree)}:
        raise ValueError(f"element is not homogeneous of bidegree {bidegree}")
    values = {}
    for d in milnor_monomials(ring.prime, bidegree[0]):
        values[d] = pair_element(x, d, slot)
    return _make_functional(ring, tuple(bidegree), values)


def unit_functional(ring: CoefficientRing) -> DualFunctional:
    return functional(OpElement.monomial(ring, ()))


def convolution_multiply(f: DualFunctional, g: DualFunctional, slot: str = LETTER_SLOT) -> DualFunctional:
    """(f * g)(m) = sum c f(m') g(m'') over Delta(m), same slot order as the pairing."""
    _check_slot(slot)
    if f.ring != g.ring:
        raise PresetMismatch(f"functionals over {f.ring} and {g.ring}")
    ring = f.ring
    _require_closed(ring)
    fv, gv = f.as_dict(), g.as_dict()
    p = f.bidegree[0] + g.bidegree[0]
    values = {}
    for m in milnor_monomials(ring.prime, p):
        total = ring.zero
        for (left, right), c in coproduct_terms(ring, m):
            if slot == "right":
                left, right = right, left
            a = fv.get(left)
            if a is None:
                continue
            b = gv.get(right)
            if b is None:
                continue
            total = total + c * a * b
        values[m] = total
    bideg = (p, f.bidegree[1] + g.bidegree[1])
    return _make_functional(ring, bideg, values)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class PairingMatrix:
    prime: int
    bidegree: Bidegree
    rows: tuple[Word, ...]
    cols: tuple[MilnorMonomial, ...]
    entries: tuple[tuple[int, ...], ...]

    @property
    def invertible(self) -> bool:
        return matrix_invertible(self.entries, self.prime)


def pairing_matrix(p: int, q: int, prime: int) -> PairingMatrix:
    ring = CoefficientRing(prime, Preset.CLOSED)
    rows = tuple(op_basis(p, q, prime))
    cols = tuple(milnor_basis(p, q, prime))
    if len(rows) != len(cols):
        raise ValueError(
            f"bidegree ({p},{q}) at l={prime}: {len(rows)} admissible monomials but {len(cols)} Milnor monomials"
        )
    entries = tuple(tuple(_pair_word(ring, w, d).constant_term for d in cols) for w in rows)
    return PairingMatrix(prime, (p, q), rows, cols, entries)


def matrix_rank(rows: Sequence[Sequence[int]], prime: int) -> int:
    m = [[x % prime for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][col], -1, prime)
        m[rank] = [x * inv % prime for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % prime for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def matrix_invertible(rows: Sequence[Sequence[int]], prime: int) -> bool:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    return matrix_rank(rows, prime) == n

