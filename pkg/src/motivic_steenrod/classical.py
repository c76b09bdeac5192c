"""The topological mod-l Steenrod algebra and the realization tau -> 1, rho -> 0.

This engine deliberately shares no rewriting code with ``steenrod_ops``: at
l = 2 it works on Sq-sequences, at odd l on the alternating list
(e_0, s_1, e_1, ..., s_k, e_k) of Bockstein exponents and powers, rewrites
the rightmost inadmissible pair first, and takes binomials from math.comb.
Only the word encoding shared by ``OpMonomial`` is used at the boundary.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

from .coefficients import specialize
from .steenrod_ops import DEFAULT_FUEL, FuelExhausted, OpElement, Word, canonical_word


class ClassicalElement:
    """F_l-combination of words (same encoding as the motivic words)."""

    __slots__ = ("prime", "terms")

    def __init__(self, prime: int, terms: Iterable[tuple[Word, int]] = ()):
        acc: dict[Word, int] = {}
        for w, c in terms:
            w = canonical_word(w)
            if w is not None:
                acc[w] = (acc.get(w, 0) + c) % prime
        self.prime = prime
        self.terms = tuple(sorted(((w, c) for w, c in acc.items() if c), key=lambda t: (_degree(t[0], prime), t[0])))

    @classmethod
    def monomial(cls, prime: int, word: Word, coeff: int = 1) -> ClassicalElement:
        return cls(prime, [(word, coeff)])

    def __iter__(self) -> Iterator[tuple[Word, int]]:
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ClassicalElement):
            return NotImplemented
        return self.prime == other.prime and self.terms == other.terms

    def __hash__(self):
        return hash((self.prime, self.terms))

    def __add__(self, other: ClassicalElement) -> ClassicalElement:
        if other.prime != self.prime:
            raise ValueError("different primes")
        return ClassicalElement(self.prime, self.terms + other.terms)

    def __repr__(self):
        from .textio import format_classical

        return f"ClassicalElement({format_classical(self)!r}, l={self.prime})"

    def __str__(self):
        from .textio import format_classical

        return format_classical(self)


def _degree(word: Word, prime: int) -> int:
    return sum(1 if g == 0 else 2 * g * (prime - 1) for g in word)


def realize(e: OpElement) -> ClassicalElement:
    """Send tau to 1 and rho to 0 in every coefficient, keeping the words."""
    return ClassicalElement(e.prime, [(w, specialize(c, 0, 1)) for w, c in e.terms])


# ---------------------------------------------------------------------------
# prime 2: Sq-sequences


def _word_to_sqs(word: Word) -> tuple[int, ...] | None:
    out = []
    i = 0
    while i < len(word):
        if word[i] == 0:
            if i + 1 < len(word) and word[i + 1] == 0:
                return None
            if i + 1 < len(word):
                out.append(2 * word[i + 1] + 1)
                i += 2
            else:
                out.append(1)
                i += 1
        else:
            out.append(2 * word[i])
            i += 1
    return tuple(out)


def _sqs_to_word(sqs: tuple[int, ...]) -> Word:
    out: list[int] = []
    for k in sqs:
        if k % 2:
            out.append(0)
        if k // 2:
            out.append(k // 2)
    return tuple(out)


def _normalize_two(terms: dict[tuple[int, ...], int], fuel: int) -> dict[tuple[int, ...], int]:
    done: dict[tuple[int, ...], int] = {}
    todo = dict(terms)
    while todo:
        seq, c = todo.popitem()
        if c % 2 == 0:
            continue
        bad = None
        for j in range(len(seq) - 2, -1, -1):
            if seq[j] < 2 * seq[j + 1]:
                bad = j
                break
        if bad is None:
            done[seq] = (done.get(seq, 0) + c) % 2
            continue
        fuel -= 1
        if fuel < 0:
            raise FuelExhausted("classical rewrite budget exhausted")
        a, b = seq[bad], seq[bad + 1]
        for t in range(a // 2 + 1):
            if math.comb(b - t - 1, a - 2 * t) % 2 if b - t - 1 >= a - 2 * t >= 0 else 0:
                mid = (a + b - t, t) if t else (a + b - t,)
                new = seq[:bad] + mid + seq[bad + 2 :]
                todo[new] = (todo.get(new, 0) + c) % 2
    return {k: v for k, v in done.items() if v}


# ---------------------------------------------------------------------------
# odd primes: (e_0, s_1, e_1, ..., s_k, e_k)


def _word_to_alt(word: Word) -> tuple[int, ...] | None:
    """Alternating form; reads the word right to left so e_0 is the rightmost Bockstein."""
    alt = [0]
    for g in reversed(word):
        if g == 0:
            if alt[-1]:
                return None
            alt[-1] = 1
        else:
            alt += [g, 0]
    return tuple(alt)


def _alt_to_word(alt: tuple[int, ...]) -> Word:
    out: list[int] = []
    for i in range(len(alt) - 1, -1, -1):
        if i % 2 == 0:
            if alt[i]:
                out.append(0)
        else:
            out.append(alt[i])
    return tuple(out)


def _binom(n: int, k: int, p: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k) % p


def _splice(alt: tuple[int, ...], j: int, piece: list[int]) -> tuple[int, ...] | None:
    """Replace alt[j-1 .. j+3] (e, s_lo, e_mid, s_hi, e') by ``piece`` = (e, x, e1, y, e')
    where a zero power merges its neighbouring Bocksteins."""
    out = list(alt[: j - 1]) + piece + list(alt[j + 4 :])
    # collapse P^0: merge e_left + e_right around a zero power
    i = 1
    while i < len(out):
        if out[i] == 0:
            merged = out[i - 1] + out[i + 1]
            if merged > 1:
                return None
            out[i - 1 : i + 2] = [merged]
        else:
            i += 2
    return tuple(out)


def _normalize_odd(terms: dict[tuple[int, ...], int], p: int, fuel: int) -> dict[tuple[int, ...], int]:
    done: dict[tuple[int, ...], int] = {}
    todo = dict(terms)
    while todo:
        alt, c = todo.popitem()
        c %= p
        if not c:
            continue
        # powers sit at odd positions; s_i at 2i-1, e_i at 2i; admissible iff s_{i+1} >= p s_i + e_i
        bad = None
        for i in range(1, len(alt) - 2, 2):
            lo, mid, hi = alt[i], alt[i + 1], alt[i + 2]
            if hi < p * lo + mid:
                bad = i
                break
        if bad is None:
            done[alt] = (done.get(alt, 0) + c) % p
            continue
        fuel -= 1
        if fuel < 0:
            raise FuelExhausted("classical rewrite budget exhausted")
        b, mid, a = alt[bad], alt[bad + 1], alt[bad + 2]
        e_right, e_left = alt[bad - 1], alt[bad + 3]
        out: list[tuple[int, list[int]]] = []
        if mid == 0:
            # P^a P^b
            for t in range(a // p + 1):
                k = (-1) ** (a + t) * _binom((p - 1) * (b - t) - 1, a - p * t, p)
                out.append((k, [e_right, t, 0, a + b - t, e_left]))
        else:
            # P^a beta P^b
            for t in range(a // p + 1):
                k = (-1) ** (a + t) * _binom((p - 1) * (b - t), a - p * t, p)
                # beta P^{a+b-t} P^t: the Bockstein sits left of the top power
                if e_left:
                    continue
                out.append((k, [e_right, t, 0, a + b - t, 1]))
            for t in range((a - 1) // p + 1):
                k = (-1) ** (a + t - 1) * _binom((p - 1) * (b - t) - 1, a - p * t - 1, p)
                out.append((k, [e_right, t, 1, a + b - t, e_left]))
        for k, piece in out:
            if k % p == 0:
                continue
            new = _splice(alt, bad, piece)
            if new is None:
                continue
            todo[new] = (todo.get(new, 0) + c * k) % p
    return {k: v for k, v in done.items() if v}


def classical_normalize(e: ClassicalElement, fuel: int = DEFAULT_FUEL) -> ClassicalElement:
    p = e.prime
    if p == 2:
        seqs: dict[tuple[int, ...], int] = {}
        for w, c in e.terms:
            s = _word_to_sqs(w)
            if s is not None:
                seqs[s] = (seqs.get(s, 0) + c) % 2
        nf = _normalize_two(seqs, fuel)
        return ClassicalElement(2, [(_sqs_to_word(s), c) for s, c in nf.items()])
    alts: dict[tuple[int, ...], int] = {}
    for w, c in e.terms:
        a = _word_to_alt(w)
        if a is not None:
            alts[a] = (alts.get(a, 0) + c) % p
    nf = _normalize_odd(alts, p, fuel)
    return ClassicalElement(p, [(_alt_to_word(a), c) for a, c in nf.items()])
