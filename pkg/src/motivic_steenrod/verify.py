"""Verification suites: each splits its work into independent items, runs them
inline or on a process pool, and merges the per-check tallies into a sorted
report.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .classical import classical_normalize, realize
from .coefficients import CoefficientRing, Preset
from .dual_hopf import (
    GammaElement,
    antipode,
    antipode_generator,
    coassociativity_sides,
    coproduct,
    counit_left,
    counit_right,
    eta_left,
    eta_right,
    milnor_basis,
    milnor_bidegree,
    milnor_monomials,
    mono,
    tau_gen,
    tensor_multiply,
    xi_gen,
)
from .milnor_pairing import LETTER_SLOT, _pair_word, convolution_multiply, functional, pairing_matrix
from .steenrod_ops import (
    DEFAULT_FUEL,
    OpElement,
    UnsupportedScalarCommutation,
    admissible_words,
    normalize,
    op_basis,
    op_bidegree,
    op_multiply,
)
from .textio import format_element, format_milnor, format_scalar, format_word

MAX_FAILURES_SHOWN = 5


@dataclass
class CheckResult:
    name: str
    count: int = 0
    failures: list[str] = field(default_factory=list)
    failed: int = 0

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, describe: Callable[[], str]):
        self.count += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES_SHOWN:
                self.failures.append(describe())


@dataclass
class Report:
    suite: str
    params: dict
    checks: list[CheckResult]
    info: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        head = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        out = [f"suite {self.suite} ({head})"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            out.append(f"  {status} {c.name}: {c.count - c.failed}/{c.count}")
            out += [f"    counterexample: {f}" for f in c.failures]
        out += [f"  {line}" for line in self.info]
        return out

    def as_data(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "count": c.count, "failed": c.failed, "counterexamples": c.failures}
                for c in self.checks
            ],
            "info": self.info,
        }


def _merge(suite: str, params: dict, parts: list[dict[str, CheckResult]], info=()) -> Report:
    merged: dict[str, CheckResult] = {}
    for part in parts:
        for name, r in part.items():
            m = merged.setdefault(name, CheckResult(name))
            m.count += r.count
            m.failed += r.failed
            m.failures += r.failures
    checks = sorted(merged.values(), key=lambda c: c.name)
    for c in checks:
        c.failures = sorted(c.failures)[:MAX_FAILURES_SHOWN]
    return Report(suite, params, checks, sorted(info))


def _run(fn, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, *it) for it in items]
        return [f.result() for f in futures]


def _results(*names: str) -> dict[str, CheckResult]:
    return {n: CheckResult(n) for n in names}


def _ring(prime: int, preset: str | Preset) -> CoefficientRing:
    return CoefficientRing(prime, Preset(preset))


# ---------------------------------------------------------------------------
# adem-oracle


def _two_letter_products(prime: int, max_degree: int) -> list[tuple[int, ...]]:
    """Inadmissible two-letter words of every relation type."""
    out = []
    if prime == 2:
        for b in range(1, max_degree + 1):
            for a in range(1, min(2 * b, max_degree - b + 1)):
                out.append((a, b))
        return out
    unit = 2 * (prime - 1)
    for b in range(1, max_degree // unit + 1):
        for a in range(1, max_degree // unit - b + 1):
            if a < prime * b:
                out.append((a, b))
            if a <= prime * b and (a + b) * unit + 1 <= max_degree:
                out.append((a, 0, b))
    return out


def _sq_word(a: int, b: int) -> tuple[int, ...]:
    from .steenrod_ops import sq

    return sq(a) + sq(b)


def _adem_item(prime: int, preset: str, max_degree: int, chunk: list) -> dict[str, CheckResult]:
    ring = _ring(prime, preset)
    res = _results("realize(normalize(x)) = classical_normalize(realize(x))")
    check = res["realize(normalize(x)) = classical_normalize(realize(x))"]
    for pair in chunk:
        word = _sq_word(*pair) if prime == 2 else (pair[0], 0, pair[2]) if len(pair) == 3 else pair
        x = OpElement.monomial(ring, word)
        lhs = realize(normalize(x))
        rhs = classical_normalize(realize(x))
        name = f"Sq{pair[0]} Sq{pair[1]}" if prime == 2 else format_word(word, prime)
        check.record(lhs == rhs, lambda: f"{name}: motivic {lhs} vs classical {rhs}")
    return res


def adem_oracle(prime: int = 2, max_degree: int = 40, jobs: int = 1) -> Report:
    preset = "universal" if prime == 2 else "closed"
    pairs = _two_letter_products(prime, max_degree)
    chunks = [pairs[i::max(jobs, 1)] for i in range(max(jobs, 1))]
    parts = _run(_adem_item, [(prime, preset, max_degree, c) for c in chunks], jobs)
    return _merge("adem-oracle", {"prime": prime, "preset": preset, "max_degree": max_degree}, parts)


# ---------------------------------------------------------------------------
# rewrite-health and associativity


def _words_up_to(prime: int, max_degree: int) -> list[tuple[int, ...]]:
    return [w for d in range(1, max_degree + 1) for w in admissible_words(prime, d)]


def _random_words(rng: random.Random, prime: int, total: int, parts: int) -> list[tuple[int, ...]]:
    """``parts`` admissible words whose degrees sum to at most ``total``."""
    cuts = sorted(rng.randint(0, total) for _ in range(parts))
    degrees = [cuts[0]] + [cuts[i] - cuts[i - 1] for i in range(1, parts)]
    out = []
    for d in degrees:
        ws = admissible_words(prime, d)
        while not ws:
            d -= 1
            ws = admissible_words(prime, d)
        out.append(rng.choice(ws))
    return out


def _health_item(prime: int, preset: str, max_degree: int, samples: int, seed: int, fuel: int):
    ring = _ring(prime, preset)
    rng = random.Random(seed)
    names = ("terminates within fuel", "output admissible", "idempotent", "bidegree conserved")
    res = _results(*names)
    for _ in range(samples):
        u, v = _random_words(rng, prime, max_degree, 2)
        x = OpElement.monomial(ring, u + v)
        try:
            y = normalize(x, fuel=fuel)
        except Exception as exc:  # noqa: BLE001 - reported as a counterexample
            err = repr(exc)
            res[names[0]].record(False, lambda: f"{format_element(x)}: {err}")
            continue
        res[names[0]].record(True, str)
        res[names[1]].record(y.is_normal(), lambda: f"{format_element(x)} -> {y}")
        res[names[2]].record(normalize(y, fuel=fuel) == y, lambda: f"{format_element(x)} -> {y}")
        target = op_bidegree(u + v, prime)
        ok = all(b == target for b in y.term_bidegrees())
        res[names[3]].record(ok, lambda: f"{format_element(x)} of bidegree {target} -> {y}")
    return res


def rewrite_health(
    prime: int = 2, preset: str = "closed", max_degree: int = 60, samples: int = 10_000, seed: int = 0,
    fuel: int = DEFAULT_FUEL, jobs: int = 1,
) -> Report:
    n = max(jobs, 1)
    items = [(prime, preset, max_degree, samples // n + (i < samples % n), seed * 1000 + i, fuel) for i in range(n)]
    parts = _run(_health_item, items, jobs)
    params = {"prime": prime, "preset": preset, "max_degree": max_degree, "samples": samples, "seed": seed}
    return _merge("rewrite-health", params, parts)


def _assoc_item(prime: int, preset: str, max_degree: int, samples: int, seed: int, fuel: int):
    ring = _ring(prime, preset)
    rng = random.Random(seed)
    res = _results("(xy)z = x(yz)")
    skipped = 0
    for _ in range(samples):
        x, y, z = (OpElement.monomial(ring, w) for w in _random_words(rng, prime, max_degree, 3))
        try:
            lhs = op_multiply(op_multiply(x, y, fuel), z, fuel)
            rhs = op_multiply(x, op_multiply(y, z, fuel), fuel)
        except UnsupportedScalarCommutation:
            skipped += 1
            continue
        res["(xy)z = x(yz)"].record(lhs == rhs, lambda: f"({x})({y})({z}): {lhs} vs {rhs}")
    res["unsupported (skipped)"] = CheckResult("unsupported (skipped)", count=skipped)
    return res


def associativity(
    prime: int = 2, preset: str = "closed", max_degree: int = 30, samples: int = 1000, seed: int = 0,
    fuel: int = DEFAULT_FUEL, jobs: int = 1,
) -> Report:
    n = max(jobs, 1)
    items = [(prime, preset, max_degree, samples // n + (i < samples % n), seed * 1000 + i, fuel) for i in range(n)]
    parts = _run(_assoc_item, items, jobs)
    params = {"prime": prime, "preset": preset, "max_degree": max_degree, "samples": samples, "seed": seed}
    return _merge("associativity", params, parts)


# ---------------------------------------------------------------------------
# Hopf algebroid axioms


def _generators(ring: CoefficientRing, max_r: int = 3) -> list[GammaElement]:
    out = [mono(ring, tau_gen(r)) for r in range(max_r + 1)]
    out += [mono(ring, xi_gen(r)) for r in range(1, max_r + 1)]
    return out


def _sample_monomials(prime: int, max_degree: int, exhaustive: int, samples: int, seed: int):
    """Every monomial up to ``exhaustive``, then ``samples`` random ones up to ``max_degree``."""
    out = [m for d in range(1, min(exhaustive, max_degree) + 1) for m in milnor_monomials(prime, d)]
    rest = [m for d in range(exhaustive + 1, max_degree + 1) for m in milnor_monomials(prime, d)]
    rng = random.Random(seed)
    if len(rest) > samples:
        rest = rng.sample(rest, samples)
    return out + rest


def _with_coefficient(ring: CoefficientRing, x: GammaElement, rng: random.Random) -> GammaElement:
    """Attach a random coefficient so eta_L/eta_R bookkeeping is exercised."""
    choices = [ring.one]
    if ring.has_tau:
        choices.append(ring.tau)
    if ring.has_rho:
        choices += [ring.rho, ring.tau + ring.rho]
    return x.scale(rng.choice(choices))


def _coassoc_item(prime: int, preset: str, monos: list, pairs: list, seed: int):
    ring = _ring(prime, preset)
    rng = random.Random(seed)
    names = ("coassociativity", "counit (left)", "counit (right)", "Delta multiplicative")
    res = _results(*names)
    for m in monos:
        x = _with_coefficient(ring, mono(ring, m) if not isinstance(m, GammaElement) else m, rng)
        left, right = coassociativity_sides(x)
        res[names[0]].record(left == right, lambda: f"{x}: {left} vs {right}")
        d = coproduct(x)
        cl, cr = counit_left(d), counit_right(d)
        res[names[1]].record(cl == x, lambda: f"{x}: {cl}")
        res[names[2]].record(cr == x, lambda: f"{x}: {cr}")
    for a, b in pairs:
        x, y = mono(ring, a), mono(ring, b)
        xy = x * y
        lhs = coproduct(xy)
        rhs = tensor_multiply(coproduct(x), coproduct(y))
        res[names[3]].record(lhs == rhs, lambda: f"({x})({y}): {lhs} vs {rhs}")
    return res


def coassoc(
    prime: int = 2, preset: str = "closed", max_degree: int = 60, exhaustive: int = 20, samples: int = 12,
    pair_degree: int = 40, pairs: int = 60, seed: int = 0, jobs: int = 1,
) -> Report:
    ring = _ring(prime, preset)
    monos = _generators(ring) + _sample_monomials(prime, max_degree, exhaustive, samples, seed)
    rng = random.Random(seed + 1)
    pool = [m for d in range(1, pair_degree) for m in milnor_monomials(prime, d)]
    pair_list = []
    # bias towards tau-tau overlaps so the relation fires on one side
    while len(pair_list) < pairs and pool:
        a, b = rng.choice(pool), rng.choice(pool)
        if milnor_bidegree(a, prime)[0] + milnor_bidegree(b, prime)[0] > pair_degree:
            continue
        if len(pair_list) % 2 == 0 and not set(a.taus) & set(b.taus):
            continue
        pair_list.append((a, b))
    n = max(jobs, 1)
    items = [(prime, preset, monos[i::n], pair_list[i::n], seed + i) for i in range(n)]
    parts = _run(_coassoc_item, items, jobs)
    params = {"prime": prime, "preset": preset, "max_degree": max_degree, "samples": samples, "seed": seed}
    return _merge("coassoc", params, parts)


def _mu_id_c(ring, x: GammaElement) -> GammaElement:
    out = GammaElement(ring)
    for (a, b), c in coproduct(x).terms:
        out = out + mono(ring, a).scale(c) * antipode(mono(ring, b))
    return out


def _mu_c_id(ring, x: GammaElement) -> GammaElement:
    out = GammaElement(ring)
    for (a, b), c in coproduct(x).terms:
        out = out + antipode(mono(ring, a).scale(c)) * mono(ring, b)
    return out


def _antipode_item(prime: int, preset: str, monos: list, seed: int):
    ring = _ring(prime, preset)
    rng = random.Random(seed)
    names = ("mu(id (x) c) Delta = eta_L epsilon", "mu(c (x) id) Delta = eta_R epsilon", "c(c(x)) = x (experimental)")
    res = _results(*names)
    for m in monos:
        x = _with_coefficient(ring, mono(ring, m), rng)
        e = x.ring.zero
        for k, c in x.terms:
            if k.is_unit:
                e = c
        lhs = _mu_id_c(ring, x)
        res[names[0]].record(lhs == eta_left(e), lambda: f"{x}: {lhs}")
        lhs2 = _mu_c_id(ring, x)
        res[names[1]].record(lhs2 == eta_right(e), lambda: f"{x}: {lhs2}")
        cc = antipode(antipode(x))
        res[names[2]].record(cc == x, lambda: f"{x}: {cc}")
    return res


def antipode_suite(
    prime: int = 2, preset: str = "closed", max_r: int = 4, max_degree: int = 60, exhaustive: int = 20,
    samples: int = 12, seed: int = 0, jobs: int = 1,
) -> Report:
    ring = _ring(prime, preset)
    l = prime
    res = _results("xi recursion", "tau recursion", "c(eta_L(tau)) = eta_R(tau)")
    for r in range(1, max_r + 1):
        total = mono(ring, xi_gen(r))
        # xi_0 = 1, so the i = r term is c(xi_r) itself
        total = total + antipode_generator(ring, "xi", r)
        for i in range(1, r):
            total = total + mono(ring, xi_gen(r - i, l**i)) * antipode_generator(ring, "xi", i)
        res["xi recursion"].record(not total, lambda: f"r={r}: sum = {total}")
    for r in range(0, max_r + 1):
        total = mono(ring, tau_gen(r)) + antipode_generator(ring, "tau", r)
        for i in range(r):
            total = total + mono(ring, xi_gen(r - i, l**i)) * antipode_generator(ring, "tau", i)
        res["tau recursion"].record(not total, lambda: f"r={r}: sum = {total}")
    lhs, rhs = antipode(eta_left(ring.tau)), eta_right(ring.tau)
    res["c(eta_L(tau)) = eta_R(tau)"].record(lhs == rhs, lambda: f"{lhs} vs {rhs}")
    monos = _sample_monomials(prime, max_degree, exhaustive, samples, seed)
    n = max(jobs, 1)
    parts = _run(_antipode_item, [(prime, preset, monos[i::n], seed + i) for i in range(n)], jobs)
    params = {"prime": prime, "preset": preset, "max_r": max_r, "max_degree": max_degree, "seed": seed}
    return _merge("antipode", params, [res] + parts)


# ---------------------------------------------------------------------------
# bases, pairing, cross-model


def _basis_item(prime: int, p: int):
    res = _results("|op_basis| = |milnor_basis|")
    counts = []
    for q in range(0, p + 1):
        a, b = len(op_basis(p, q, prime)), len(milnor_basis(p, q, prime))
        res["|op_basis| = |milnor_basis|"].record(a == b, lambda: f"({p},{q}): {a} vs {b}")
        if a or b:
            counts.append(f"({p},{q}): {a}")
    return res, counts


def basis_count(prime: int = 2, max_p: int = 50, jobs: int = 1) -> Report:
    out = _run(_basis_item, [(prime, p) for p in range(max_p + 1)], jobs)
    info = [c for _, counts in out for c in counts]
    rep = _merge("basis-count", {"prime": prime, "max_p": max_p}, [r for r, _ in out])
    rep.info = sorted(info, key=lambda s: tuple(int(v) for v in s[1 : s.index(")")].split(",")))
    return rep


def _pairing_item(prime: int, p: int):
    ring = _ring(prime, "closed")
    res = _results("pairing matrix square and invertible", "bidegree orthogonality")
    for q in range(0, p + 1):
        rows, cols = op_basis(p, q, prime), milnor_basis(p, q, prime)
        if not rows and not cols:
            continue
        try:
            mat = pairing_matrix(p, q, prime)
            ok = mat.invertible
        except ValueError as exc:
            ok, mat = False, exc
        res["pairing matrix square and invertible"].record(ok, lambda: f"({p},{q}): {mat}")
    # at odd l the weight is nearly always fixed by the degree, so also pair
    # against neighbouring degrees to make the check bite
    duals = [d for p2 in range(max(p - 2, 0), p + 3) for d in milnor_monomials(prime, p2)]
    for w in admissible_words(prime, p):
        wb = op_bidegree(w, prime)
        for d in duals:
            if milnor_bidegree(d, prime) != wb:
                v = _pair_word(ring, w, d).constant_term
                res["bidegree orthogonality"].record(
                    v == 0, lambda: f"<{format_word(w, prime)}, {format_milnor(d)}> = {v}"
                )
    return res


def pairing(prime: int = 2, max_p: int = 30, jobs: int = 1) -> Report:
    parts = _run(_pairing_item, [(prime, p) for p in range(max_p + 1)], jobs)
    return _merge("pairing", {"prime": prime, "max_p": max_p}, parts)


def _cross_item(prime: int, max_degree: int, left_words: list, slot: str):
    ring = _ring(prime, "closed")
    res = _results("functional(normalize(uv)) = functional(u) * functional(v)")
    check = res["functional(normalize(uv)) = functional(u) * functional(v)"]
    words = _words_up_to(prime, max_degree)
    for u in left_words:
        du = op_bidegree(u, prime)
        fu = functional(OpElement.monomial(ring, u), slot=slot)
        for v in words:
            dv = op_bidegree(v, prime)
            if du[0] + dv[0] > max_degree:
                continue
            bideg = (du[0] + dv[0], du[1] + dv[1])
            prod = op_multiply(OpElement.monomial(ring, u), OpElement.monomial(ring, v))
            lhs = functional(prod, bideg, slot=slot)
            rhs = convolution_multiply(fu, functional(OpElement.monomial(ring, v), slot=slot), slot=slot)
            check.record(
                lhs.values == rhs.values,
                lambda: f"{format_word(u, prime)} * {format_word(v, prime)}: {_show(lhs)} vs {_show(rhs)}",
            )
    return res


def _show(f) -> str:
    return "{" + ", ".join(f"{format_milnor(m)}: {format_scalar(v)}" for m, v in f.values) + "}"


def cross_model(prime: int = 2, max_degree: int = 24, slot: str = LETTER_SLOT, jobs: int = 1) -> Report:
    """``slot="right"`` runs the suite under the opposite pairing order, which fails."""
    words = _words_up_to(prime, max_degree)
    n = max(jobs, 1)
    parts = _run(_cross_item, [(prime, max_degree, words[i::n], slot) for i in range(n)], jobs)
    return _merge("cross-model", {"prime": prime, "max_degree": max_degree, "slot": slot}, parts)


SUITES: dict[str, Callable[..., Report]] = {
    "adem-oracle": adem_oracle,
    "associativity": associativity,
    "rewrite-health": rewrite_health,
    "coassoc": coassoc,
    "antipode": antipode_suite,
    "basis-count": basis_count,
    "pairing": pairing,
    "cross-model": cross_model,
}


def run_verify(suite: str, **params) -> Report:
    if suite not in SUITES:
        raise KeyError(suite)
    return SUITES[suite](**params)


