"""Text and structured (JSON) forms of scalars, operations and dual elements.

Grammar, shared by every mode::

    element := term (('+' | '-') term)*
    term    := factor*                      (juxtaposition multiplies)
    factor  := atom ('^' INT)?
    atom    := INT | 'r' | 't' | '(' element ')' | generator

Operation generators are ``b``, ``P<i>`` and, at l = 2 only, ``Sq<k>``.
Dual generators are ``t<r>`` (tau_r) and ``x<r>`` (xi_r); a bare ``t`` is
always the coefficient tau and ``r`` is rho.  In operation mode every scalar
of a term must come before its first generator, and parentheses may only
enclose scalars.  Classical mode accepts integers and operation generators.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any

from .coefficients import BaseScalar, CoefficientRing, Preset
from .dual_hopf import GammaElement, MilnorMonomial, TensorElement, gamma_multiply, tau_gen, xi_gen
from .steenrod_ops import BOCKSTEIN, OpElement, Word, blocks, power, sq

MODES = ("op", "dual", "classical")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


# ---------------------------------------------------------------------------
# printing


def _scalar_monomial(a: int, b: int) -> str:
    parts = []
    for name, e in (("r", a), ("t", b)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return " ".join(parts)


def format_scalar(s: BaseScalar) -> str:
    if not s.terms:
        return "0"
    out = []
    for (a, b), c in reversed(s.terms):
        mono = _scalar_monomial(a, b)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c} {mono}")
    return " + ".join(out)


def _coefficient_prefix(s: BaseScalar) -> str:
    """Coefficient as it appears before a monomial; empty for 1."""
    if len(s.terms) == 1:
        (k, c), = s.terms
        if k == (0, 0) and c == 1:
            return ""
        return format_scalar(s)
    return f"({format_scalar(s)})"


def format_word(word: Word, prime: int) -> str:
    if not word:
        return "1"
    if prime == 2:
        return " ".join(f"Sq{2 * i + eps}" for eps, i in blocks(word))
    return " ".join("b" if g == BOCKSTEIN else f"P{g}" for g in word)


def _join_terms(pieces: list[tuple[str, str]]) -> str:
    if not pieces:
        return "0"
    out = []
    for coeff, body in pieces:
        if body == "1":
            out.append(coeff or "1")
        elif coeff:
            out.append(f"{coeff} {body}")
        else:
            out.append(body)
    return " + ".join(out)


def format_op(e: OpElement) -> str:
    return _join_terms([(_coefficient_prefix(c), format_word(w, e.prime)) for w, c in e.terms])


def format_classical(e) -> str:
    return _join_terms([("" if c == 1 else str(c), format_word(w, e.prime)) for w, c in e.terms])


def format_milnor(m: MilnorMonomial) -> str:
    parts = [f"t{r}" for r in m.taus]
    for k, e in enumerate(m.xis, start=1):
        if e == 1:
            parts.append(f"x{k}")
        elif e > 1:
            parts.append(f"x{k}^{e}")
    return " ".join(parts) or "1"


def format_gamma(x: GammaElement) -> str:
    return _join_terms([(_coefficient_prefix(c), format_milnor(m)) for m, c in x.terms])


def format_tensor(t: TensorElement) -> str:
    if not t.terms:
        return "0"
    out = []
    for key, c in t.terms:
        slots = [format_milnor(m) for m in key]
        coeff = _coefficient_prefix(c)
        if coeff:
            slots[0] = coeff if slots[0] == "1" else f"{coeff} {slots[0]}"
        out.append(" | ".join(f"({s})" for s in slots))
    return " + ".join(out)


def format_element(e) -> str:
    if isinstance(e, OpElement):
        return format_op(e)
    if isinstance(e, GammaElement):
        return format_gamma(e)
    if isinstance(e, TensorElement):
        return format_tensor(e)
    if isinstance(e, BaseScalar):
        return format_scalar(e)
    return format_classical(e)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(Sq\d+)|(P\d+)|(t\d+)|(x\d+)|(\d+)|([brt])|([-+^()]))")


@dataclass
class _Tok:
    kind: str
    value: Any
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        start = m.start(m.lastindex)
        sqk, pk, tr, xr, num, letter, punct = m.groups()
        if sqk:
            toks.append(_Tok("sq", int(sqk[2:]), start))
        elif pk:
            toks.append(_Tok("P", int(pk[1:]), start))
        elif tr:
            toks.append(_Tok("tau_r", int(tr[1:]), start))
        elif xr:
            toks.append(_Tok("xi", int(xr[1:]), start))
        elif num:
            toks.append(_Tok("int", int(num), start))
        elif letter:
            toks.append(_Tok(letter, None, start))
        else:
            toks.append(_Tok(punct, None, start))
        pos = m.end()
    toks.append(_Tok("end", None, len(text)))
    return toks


class _Parser:
    """Recursive descent producing a list of (scalar, generator-list) terms."""

    def __init__(self, text: str, mode: str, ring: CoefficientRing):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.toks = _tokenize(text)
        self.i = 0
        self.mode = mode
        self.ring = ring

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.pos)

    def parse(self):
        terms = self.element()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().kind!r}")
        return terms

    def element(self):
        terms = []
        sign = 1
        if self.peek().kind in ("+", "-"):
            sign = -1 if self.take().kind == "-" else 1
        while True:
            for s, gens in self.term():
                terms.append((s * sign, gens))
            if self.peek().kind in ("+", "-"):
                sign = -1 if self.take().kind == "-" else 1
                continue
            return terms

    def term(self):
        start = self.peek()
        # each product of factors is a sum of (scalar, generator list) pieces
        acc = [(self.ring.one, [])]
        seen_generator = False
        count = 0
        while self.peek().kind not in ("+", "-", ")", "end"):
            tok = self.peek()
            piece = self.factor()
            count += 1
            has_gen = any(g for _, g in piece)
            if self.mode != "dual":
                if has_gen:
                    seen_generator = True
                elif seen_generator:
                    self.fail("scalars must precede the operations of a term", tok)
            acc = [(s1 * s2, g1 + g2) for s1, g1 in acc for s2, g2 in piece]
        if not count:
            self.fail("empty term", start)
        return acc

    def factor(self):
        tok = self.peek()
        piece = self.atom()
        if self.peek().kind == "^":
            self.take()
            e = self.take()
            if e.kind != "int":
                self.fail("expected an integer exponent", e)
            out = [(self.ring.one, [])]
            for _ in range(e.value):
                out = [(s1 * s2, g1 + g2) for s1, g1 in out for s2, g2 in piece]
            if self.mode != "dual" and any(g for _, g in piece) and len(piece) > 1:
                self.fail("cannot raise a sum to a power in operation mode", tok)
            return out
        return piece

    def atom(self):
        tok = self.take()
        ring, mode = self.ring, self.mode
        k = tok.kind
        if k == "int":
            return [(ring.scalar(tok.value), [])]
        if k == "r":
            if mode == "classical" or not ring.has_rho:
                self.fail("rho is not available in this preset", tok)
            return [(ring.rho, [])]
        if k == "t":
            if mode == "classical" or not ring.has_tau:
                self.fail("tau is not available at this prime", tok)
            return [(ring.tau, [])]
        if k == "(":
            inner = self.element()
            if self.peek().kind != ")":
                self.fail("expected ')'")
            self.take()
            if mode != "dual" and any(g for _, g in inner):
                self.fail("parentheses may only enclose scalars in operation mode", tok)
            return inner
        if mode == "dual":
            if k == "tau_r":
                return [(ring.one, [tau_gen(tok.value)])]
            if k == "xi":
                if tok.value < 1:
                    self.fail("xi indices start at 1", tok)
                return [(ring.one, [xi_gen(tok.value)])]
            if k in ("b", "P", "sq"):
                self.fail("operation generators are not allowed in dual mode", tok)
        else:
            if k == "b":
                return [(ring.one, [(BOCKSTEIN,)])]
            if k == "P":
                if tok.value == 0:
                    self.fail("P0 is not a generator", tok)
                return [(ring.one, [power(tok.value)])]
            if k == "sq":
                if ring.prime != 2:
                    self.fail("Sq is only defined at prime 2", tok)
                if tok.value == 0:
                    self.fail("Sq0 is not a generator", tok)
                return [(ring.one, [sq(tok.value)])]
            if k in ("tau_r", "xi"):
                self.fail("dual generators are only allowed in dual mode", tok)
        self.fail(f"unexpected {k!r}", tok)


def parse_element(text: str, mode: str = "op", ring: CoefficientRing | None = None, prime: int = 2):
    """Parse ``text`` into an OpElement, GammaElement or ClassicalElement."""
    from .classical import ClassicalElement

    if ring is None:
        ring = CoefficientRing(prime, Preset.CLOSED)
    terms = _Parser(text, mode, ring).parse()
    if mode == "dual":
        total = GammaElement(ring)
        for s, gens in terms:
            x = GammaElement.scalar(s)
            for g in gens:
                x = gamma_multiply(x, GammaElement.monomial(ring, g))
            total = total + x
        return total
    out = []
    for s, gens in terms:
        word = tuple(g for piece in gens for g in piece)
        out.append((word, s))
    if mode == "classical":
        return ClassicalElement(ring.prime, [(w, s.constant_term) for w, s in out])
    return OpElement(ring, out)


# ---------------------------------------------------------------------------
# structured output


def scalar_data(s: BaseScalar | int) -> dict:
    if isinstance(s, int):
        return {"monomials": [[0, 0, s]] if s else []}
    return {"monomials": [[a, b, c] for (a, b), c in s.terms]}


def word_data(word: Word) -> list:
    return ["b" if g == BOCKSTEIN else ["P", g] for g in word]


def milnor_data(m: MilnorMonomial) -> dict:
    return {"tau": list(m.taus), "xi": [[r, e] for r, e in enumerate(m.xis, start=1) if e]}


def element_data(e) -> dict:
    from .classical import ClassicalElement

    if isinstance(e, OpElement):
        mode, preset = "op", e.ring.preset.value
        terms = [{"coefficient": scalar_data(c), "word": word_data(w)} for w, c in e.terms]
    elif isinstance(e, ClassicalElement):
        mode, preset = "classical", None
        terms = [{"coefficient": scalar_data(c), "word": word_data(w)} for w, c in e.terms]
    elif isinstance(e, GammaElement):
        mode, preset = "dual", e.ring.preset.value
        terms = [{"coefficient": scalar_data(c), "monomial": milnor_data(m)} for m, c in e.terms]
    elif isinstance(e, TensorElement):
        mode, preset = "tensor", e.ring.preset.value
        terms = [
            {"coefficient": scalar_data(c), "monomials": [milnor_data(m) for m in key]} for key, c in e.terms
        ]
    elif isinstance(e, BaseScalar):
        return {"prime": e.ring.prime, "preset": e.ring.preset.value, "mode": "scalar", "value": scalar_data(e)}
    else:
        raise TypeError(f"no structured form for {type(e).__name__}")
    prime = e.prime if isinstance(e, ClassicalElement) else e.ring.prime
    return {"prime": prime, "preset": preset, "mode": mode, "terms": terms}


def dumps(data: Any) -> str:
    """Deterministic JSON: sorted keys, fixed separators."""
    return json.dumps(data, sort_keys=True, ensure_ascii=True)
