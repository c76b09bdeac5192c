"""Operation monomials in beta and P^i, the motivic Adem relations, and normal forms.

A word is a tuple of ints read left to right as composition: ``0`` is the
Bockstein and ``i >= 1`` is P^i.  At l = 2, Sq^{2i} = P^i and Sq^{2i+1} =
beta P^i, so e.g. Sq^3 Sq^1 is the word ``(0, 1, 0)``.

Words are grouped into blocks ``(eps, i)`` = beta^eps P^i; a final lone
Bockstein is the block ``(1, 0)``.  A word is admissible when every adjacent
block pair (eps', a)(eps, b) satisfies a >= l*b + eps.
"""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from typing import Iterable, Iterator

from .coefficients import (
    BaseScalar,
    Bidegree,
    CoefficientRing,
    Preset,
    PresetMismatch,
    binom_mod,
    scalar_bidegree,
)

BOCKSTEIN = 0
DEFAULT_FUEL = 10**7

Word = tuple[int, ...]
Block = tuple[int, int]


class UnsupportedScalarCommutation(ArithmeticError):
    """A coefficient would have to move left past a reduced power operation
    in the universal preset, where that action is not known."""


class FuelExhausted(RuntimeError):
    pass


class NotRewritable(ValueError):
    pass


# ---------------------------------------------------------------------------
# words


def generator_bidegree(g: int, prime: int) -> Bidegree:
    if g == BOCKSTEIN:
        return (1, 0)
    return (2 * g * (prime - 1), g * (prime - 1))


def op_bidegree(word: Word, prime: int) -> Bidegree:
    p = q = 0
    for g in word:
        dp, dq = generator_bidegree(g, prime)
        p += dp
        q += dq
    return (p, q)


def word_key(word: Word, prime: int):
    """Deterministic order: degree, weight, then the word itself."""
    return (*op_bidegree(word, prime), word)


def canonical_word(word: Iterable[int]) -> Word | None:
    """Validate a word; return None when beta beta makes it vanish."""
    out: list[int] = []
    prev_beta = False
    for g in word:
        if g < 0:
            raise ValueError(f"negative generator index {g}")
        if g == BOCKSTEIN:
            if prev_beta:
                return None
            prev_beta = True
        else:
            prev_beta = False
        out.append(g)
    return tuple(out)


def power(i: int) -> Word:
    return (i,) if i > 0 else ()


def sq(k: int) -> Word:
    """The word of Sq^k at l = 2."""
    if k < 0:
        raise ValueError("negative Sq index")
    if k % 2 == 0:
        return power(k // 2)
    return (BOCKSTEIN,) + power(k // 2)


def blocks(word: Word) -> list[Block]:
    out = []
    pending = 0
    for g in word:
        if g == BOCKSTEIN:
            if pending:
                raise ValueError(f"word {word} contains beta beta")
            pending = 1
        else:
            out.append((pending, g))
            pending = 0
    if pending:
        out.append((1, 0))
    return out


def block_word(block: Block) -> Word:
    eps, i = block
    return (BOCKSTEIN,) * eps + power(i)


def sq_sequence(word: Word) -> list[int]:
    """Sq exponents of a word at l = 2."""
    return [2 * i + eps for eps, i in blocks(word)]


def _first_bad_pair(word_blocks: list[Block], prime: int) -> int | None:
    for j in range(len(word_blocks) - 1):
        (_, a), (eps, b) = word_blocks[j], word_blocks[j + 1]
        if b and a < prime * b + eps:
            return j
    return None


def is_admissible(word: Word, prime: int) -> bool:
    if canonical_word(word) is None:
        return False
    return _first_bad_pair(blocks(word), prime) is None


# ---------------------------------------------------------------------------
# elements


class OpElement:
    """Finite left-linear combination of words with coefficients in H**."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: CoefficientRing, terms: Iterable[tuple[Word, BaseScalar]] = ()):
        acc: dict[Word, BaseScalar] = {}
        for word, c in terms:
            if isinstance(c, int):
                c = ring.scalar(c)
            elif c.ring != ring:
                raise PresetMismatch(f"coefficient over {c.ring} in element over {ring}")
            w = canonical_word(word)
            if w is None or not c:
                continue
            acc[w] = acc[w] + c if w in acc else c
        self.ring = ring
        self.terms = tuple(
            sorted(((w, c) for w, c in acc.items() if c), key=lambda t: word_key(t[0], ring.prime))
        )

    @classmethod
    def monomial(cls, ring: CoefficientRing, word: Word, coeff: BaseScalar | int = 1) -> OpElement:
        return cls(ring, [(word, coeff)])

    @classmethod
    def zero(cls, ring: CoefficientRing) -> OpElement:
        return cls(ring)

    @property
    def prime(self) -> int:
        return self.ring.prime

    def __iter__(self) -> Iterator[tuple[Word, BaseScalar]]:
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, word: Word) -> BaseScalar:
        for w, c in self.terms:
            if w == word:
                return c
        return self.ring.zero

    def __eq__(self, other):
        if not isinstance(other, OpElement):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.terms))

    def _same_ring(self, other: OpElement):
        if other.ring != self.ring:
            raise PresetMismatch(f"elements over {self.ring} and {other.ring}")

    def __add__(self, other: OpElement) -> OpElement:
        self._same_ring(other)
        return OpElement(self.ring, self.terms + other.terms)

    def __neg__(self):
        return OpElement(self.ring, [(w, -c) for w, c in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s: BaseScalar | int) -> OpElement:
        """Left multiplication by a scalar."""
        if isinstance(s, int):
            s = self.ring.scalar(s)
        return OpElement(self.ring, [(w, s * c) for w, c in self.terms])

    def __mul__(self, other: OpElement) -> OpElement:
        return op_multiply(self, other)

    def term_bidegrees(self) -> list[Bidegree]:
        """Coefficient-plus-word bidegree of every scalar monomial of every term."""
        out = []
        for w, c in self.terms:
            p, q = op_bidegree(w, self.prime)
            for (a, b), _ in c.terms:
                dp, dq = scalar_bidegree(a, b)
                out.append((p + dp, q + dq))
        return out

    def is_normal(self) -> bool:
        return all(is_admissible(w, self.prime) for w, _ in self.terms)

    def __repr__(self):
        from .textio import format_op

        return f"OpElement({format_op(self)!r}, {self.ring})"

    def __str__(self):
        from .textio import format_op

        return format_op(self)


# ---------------------------------------------------------------------------
# scalar action


def bockstein_derivation(s: BaseScalar) -> BaseScalar:
    """beta applied to a coefficient: a derivation with beta(tau) = rho, beta(rho) = 0."""
    ring = s.ring
    if ring.prime != 2:
        # odd l: coefficients are prime-field constants
        return ring.zero
    return BaseScalar(ring, [((a + 1, b - 1), c * b) for (a, b), c in s.terms if b])


def commute_left(ring: CoefficientRing, prefix: Word, s: BaseScalar) -> list[tuple[BaseScalar, Word]]:
    """Rewrite ``prefix . s`` as a sum of ``s_k . prefix_k``.

    Closed presets: coefficients are central.  Universal preset: only the
    Bockstein can pass a non-constant coefficient, via beta s = beta(s) + s beta.
    """
    if ring.preset is Preset.CLOSED or s.is_constant or not prefix:
        return [(s, prefix)]
    pending: list[tuple[BaseScalar, Word]] = [(s, ())]
    for g in reversed(prefix):
        nxt: list[tuple[BaseScalar, Word]] = []
        for c, tail in pending:
            if c.is_constant:
                nxt.append((c, (g,) + tail))
            elif g == BOCKSTEIN:
                d = bockstein_derivation(c)
                if d:
                    nxt.append((d, tail))
                nxt.append((c, (g,) + tail))
            else:
                raise UnsupportedScalarCommutation(
                    f"moving {c} past P{g} needs the action of P{g} on coefficients"
                )
        pending = nxt
    return pending


# ---------------------------------------------------------------------------
# Adem relations


def _adem_odd(ring: CoefficientRing, a: int, eps: int, b: int) -> list[tuple[int, Word]]:
    """P^a beta^eps P^b for odd l; requires 0 < a < l*b + eps."""
    l = ring.prime
    out = []
    if eps == 0:
        for t in range(a // l + 1):
            c = (-1) ** (a + t) * binom_mod((l - 1) * (b - t) - 1, a - l * t, l)
            out.append((c, (a + b - t,) + power(t)))
        return out
    for t in range(a // l + 1):
        c = (-1) ** (a + t) * binom_mod((l - 1) * (b - t), a - l * t, l)
        out.append((c, (BOCKSTEIN, a + b - t) + power(t)))
    for t in range((a - 1) // l + 1):
        c = (-1) ** (a + t - 1) * binom_mod((l - 1) * (b - t) - 1, a - l * t - 1, l)
        out.append((c, (a + b - t, BOCKSTEIN) + power(t)))
    return out


def _adem_two(ring: CoefficientRing, a: int, b: int) -> list[tuple[BaseScalar, Word]]:
    """Sq^a Sq^b at l = 2 for 0 < a < 2b, with the rho/tau twists."""
    one, tau, rho = ring.one, ring.tau, ring.rho
    out = []

    def add(coeff: BaseScalar, c: int, top: int, t: int):
        if c and coeff:
            out.append((coeff, sq(top) + sq(t)))

    if a % 2 == 0 and b % 2 == 0:
        for t in range(a // 2 + 1):
            add(tau if t % 2 else one, binom_mod(b - t - 1, a - 2 * t, 2), a + b - t, t)
    elif a % 2 == 0:
        for t in range(a // 2 + 1):
            add(one, binom_mod(b - t - 1, a - 2 * t, 2), a + b - t, t)
        for t in range(1, a // 2 + 1, 2):
            add(rho, binom_mod(b - t - 1, a - 2 * t, 2), a + b - t - 1, t)
    elif b % 2 == 0:
        for t in range(0, a // 2 + 1, 2):
            add(one, binom_mod(b - t - 1, a - 2 * t, 2), a + b - t, t)
        for t in range(1, a // 2 + 1, 2):
            add(rho, binom_mod(b - t - 1, a - 2 * t - 1, 2), a + b - t - 1, t)
    else:
        for t in range(1, a // 2 + 1, 2):
            add(one, binom_mod(b - t - 1, a - 2 * t, 2), a + b - t, t)
    return out


def _adem_terms(ring: CoefficientRing, left: Block, right: Block) -> list[tuple[BaseScalar, Word]]:
    (eps_l, a), (eps_r, b) = left, right
    if not b or a >= ring.prime * b + eps_r:
        raise NotRewritable(f"block pair {left} {right} is admissible")
    if a < 1:
        raise NotRewritable(f"left block {left} carries no reduced power")
    if ring.prime == 2:
        return _adem_two(ring, 2 * a + eps_l, 2 * b + eps_r)
    lead = (BOCKSTEIN,) * eps_l
    return [(ring.scalar(c), lead + w) for c, w in _adem_odd(ring, a, eps_r, b) if c % ring.prime]


def adem_step(ring: CoefficientRing, left: Block, right: Block) -> OpElement:
    """Right-hand side of the Adem relation for the inadmissible product ``left right``.

    Blocks are (eps, i) meaning beta^eps P^i, i.e. Sq^{2i+eps} at l = 2.
    """
    return OpElement(ring, [(w, c) for c, w in _adem_terms(ring, left, right)])


# ---------------------------------------------------------------------------
# normal form


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted("rewrite budget exhausted while normalizing")


# Memo of normal forms of single words, per coefficient ring.  Filling is
# idempotent, so it behaves as a cache.
_NF_CACHE: dict[CoefficientRing, dict[Word, tuple[tuple[Word, BaseScalar], ...]]] = defaultdict(dict)


def clear_caches():
    _NF_CACHE.clear()


def _nf_word(ring: CoefficientRing, word: Word, fuel: _Fuel, active: set) -> tuple:
    cache = _NF_CACHE[ring]
    hit = cache.get(word)
    if hit is not None:
        return hit
    bl = blocks(word)
    j = _first_bad_pair(bl, ring.prime)
    if j is None:
        result = ((word, ring.one),)
        cache[word] = result
        return result
    if word in active:
        raise FuelExhausted(f"rewriting cycled back to {word}")
    active.add(word)
    fuel.spend()
    prefix = sum((block_word(x) for x in bl[:j]), ())
    suffix = sum((block_word(x) for x in bl[j + 2 :]), ())
    acc: dict[Word, BaseScalar] = {}
    for c, middle in _adem_terms(ring, bl[j], bl[j + 1]):
        for s, pre in commute_left(ring, prefix, c):
            full = canonical_word(pre + middle + suffix)
            if full is None:
                continue
            for w, c2 in _nf_word(ring, full, fuel, active):
                v = s * c2
                acc[w] = acc[w] + v if w in acc else v
    active.discard(word)
    result = tuple((w, c) for w, c in acc.items() if c)
    cache[word] = result
    return result


def normalize(e: OpElement, fuel: int = DEFAULT_FUEL) -> OpElement:
    """Rewrite ``e`` into the admissible basis (leftmost inadmissible pair first)."""
    budget = _Fuel(fuel)
    out = []
    for word, c in e.terms:
        for w, c2 in _nf_word(e.ring, word, budget, set()):
            out.append((w, c * c2))
    return OpElement(e.ring, out)


def op_multiply(x: OpElement, y: OpElement, fuel: int = DEFAULT_FUEL) -> OpElement:
    if x.ring != y.ring:
        raise PresetMismatch(f"elements over {x.ring} and {y.ring}")
    ring = x.ring
    raw = []
    for w1, c1 in x.terms:
        for w2, c2 in y.terms:
            for s, pre in commute_left(ring, w1, c2):
                raw.append((pre + w2, c1 * s))
    return normalize(OpElement(ring, raw), fuel)


# ---------------------------------------------------------------------------
# basis


@lru_cache(maxsize=None)
def admissible_words(prime: int, degree: int) -> tuple[Word, ...]:
    """All admissible words of cohomological degree ``degree``."""
    if degree < 0:
        return ()
    step = 2 * (prime - 1)
    out: list[Word] = []

    def extend(tail: Word, remaining: int, last: int | None):
        for eps in (0, 1):
            rem = remaining - eps
            if rem < 0:
                continue
            new_tail = (BOCKSTEIN,) * eps + tail
            if rem == 0:
                out.append(new_tail)
                continue
            lo = 1 if last is None else prime * last + eps
            i = lo
            while i * step <= rem:
                extend((i,) + new_tail, rem - i * step, i)
                i += 1

    extend((), degree, None)
    return tuple(sorted(out, key=lambda w: word_key(w, prime)))


def op_basis(p: int, q: int, prime: int) -> list[Word]:
    return [w for w in admissible_words(prime, p) if op_bidegree(w, prime)[1] == q]
