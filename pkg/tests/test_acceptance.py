"""Acceptance criteria, each run at its stated bounds and time budget.

The terminal summary prints one ``criterion N: PASS/FAIL`` line per criterion
(see conftest.py).  Run just these with ``pytest -m acceptance``.
"""

import random
import subprocess
import sys
import time

import pytest

from motivic_steenrod.classical import ClassicalElement
from motivic_steenrod.coefficients import CoefficientRing, Preset
from motivic_steenrod.dual_hopf import GammaElement, milnor_basis, milnor_monomials
from motivic_steenrod.steenrod_ops import OpElement, normalize, op_basis, op_multiply, sq
from motivic_steenrod.textio import dumps, element_data, format_element, parse_element
from motivic_steenrod.verify import (
    adem_oracle,
    antipode_suite,
    associativity,
    basis_count,
    coassoc,
    cross_model,
    pairing,
    rewrite_health,
)

UNIVERSAL = CoefficientRing(2, Preset.UNIVERSAL)
CLOSED2 = CoefficientRing(2, Preset.CLOSED)
CLOSED3 = CoefficientRing(3, Preset.CLOSED)


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        print(f"elapsed {self.elapsed:.2f}s (budget {self.seconds}s)")
        return False

    def check(self):
        assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


def assert_passed(report):
    print("\n".join(report.lines()))
    assert report.passed, "\n".join(report.lines())
    assert all(c.count > 0 for c in report.checks if "skipped" not in c.name)


def sqs(*ks):
    return sum((sq(k) for k in ks), ())


@pytest.mark.acceptance(1, "Adem oracle against the classical engine")
def test_criterion_1_adem_oracle():
    with Budget(10) as b:
        for prime in (2, 3, 5):
            assert_passed(adem_oracle(prime, max_degree=40))
    b.check()


@pytest.mark.acceptance(2, "known identities")
def test_criterion_2_identities():
    def m(ring, word, coeff=1):
        return OpElement.monomial(ring, word, coeff)

    with Budget(1) as b:
        assert not normalize(m(CLOSED2, sqs(1, 1)))
        assert not normalize(m(UNIVERSAL, sqs(1, 1)))
        assert op_multiply(m(CLOSED2, sq(1)), m(CLOSED2, sq(2))) == m(CLOSED2, sq(3))
        assert normalize(m(CLOSED2, sqs(2, 2))) == m(CLOSED2, sqs(3, 1), CLOSED2.tau)
        assert normalize(m(UNIVERSAL, sqs(2, 2))) == m(UNIVERSAL, sqs(3, 1), UNIVERSAL.tau)
        expect = OpElement(UNIVERSAL, [(sq(5), 1), (sqs(4, 1), 1), (sqs(3, 1), UNIVERSAL.rho)])
        assert op_multiply(m(UNIVERSAL, sq(2)), m(UNIVERSAL, sq(3))) == expect
        assert normalize(m(CLOSED3, (1, 1))) == m(CLOSED3, (2,), 2)
        assert normalize(m(CLOSED3, (1, 0, 1))) == OpElement(CLOSED3, [((0, 2), 1), ((2, 0), 1)])
    b.check()


@pytest.mark.acceptance(3, "basis-count identity for p <= 50")
def test_criterion_3_basis_counts():
    with Budget(30) as b:
        for prime in (2, 3):
            assert_passed(basis_count(prime, max_p=50))
            # the suite compares counts; recount independently as well
            for p in range(0, 51):
                for q in range(0, p + 1):
                    assert len(op_basis(p, q, prime)) == len(milnor_basis(p, q, prime)), (prime, p, q)
        assert len(op_basis(1, 0, 2)) == len(milnor_basis(1, 0, 2)) == 1
        assert len(op_basis(2, 1, 2)) == len(milnor_basis(2, 1, 2)) == 1
        assert len(op_basis(3, 1, 2)) == len(milnor_basis(3, 1, 2)) == 2
    b.check()


@pytest.mark.acceptance(4, "rewrite-system health and associativity")
def test_criterion_4_rewrite_health():
    with Budget(120) as b:
        for prime in (2, 3, 5):
            report = rewrite_health(prime, "closed", max_degree=60, samples=10_000)
            assert_passed(report)
            assert all(c.count == 10_000 for c in report.checks if c.name == "terminates within fuel")
            report = associativity(prime, "closed", max_degree=30, samples=1000)
            assert_passed(report)
            (check,) = [c for c in report.checks if c.name == "(xy)z = x(yz)"]
            assert check.count == 1000
    b.check()


@pytest.mark.acceptance(5, "Hopf algebroid axioms")
def test_criterion_5_hopf_algebroid():
    with Budget(60) as b:
        for prime, preset in ((2, "universal"), (2, "closed"), (3, "closed")):
            assert_passed(coassoc(prime, preset, max_degree=60))
            assert_passed(antipode_suite(prime, preset, max_r=4, max_degree=60))
    b.check()


@pytest.mark.acceptance(6, "perfect pairing for p <= 30")
def test_criterion_6_pairing():
    with Budget(60) as b:
        for prime in (2, 3):
            assert_passed(pairing(prime, max_p=30))
    b.check()


@pytest.mark.acceptance(7, "cross-model equivalence up to degree 24")
def test_criterion_7_cross_model():
    with Budget(300) as b:
        for prime in (2, 3):
            assert_passed(cross_model(prime, max_degree=24))
    b.check()


# ---------------------------------------------------------------------------
# criterion 8


def _random_scalar(rng, ring):
    terms = {}
    for _ in range(rng.randint(0, 3)):
        a = rng.randint(0, 2) if ring.has_rho else 0
        c = rng.randint(0, 3) if ring.has_tau else 0
        terms[(a, c)] = rng.randint(0, ring.prime - 1)
    return ring.scalar(terms)


def _random_word(rng, prime):
    return tuple(rng.randint(0, 6) for _ in range(rng.randint(0, 4)))


def _random_element(rng):
    mode = rng.choice(("op", "dual", "classical"))
    ring = rng.choice((UNIVERSAL, CLOSED2, CLOSED3, CoefficientRing(5, Preset.CLOSED)))
    n = rng.randint(0, 4)
    if mode == "op":
        return mode, ring, OpElement(ring, [(_random_word(rng, ring.prime), _random_scalar(rng, ring)) for _ in range(n)])
    if mode == "dual":
        monos = [m for d in range(0, 25) for m in milnor_monomials(ring.prime, d)]
        return mode, ring, GammaElement(ring, [(rng.choice(monos), _random_scalar(rng, ring)) for _ in range(n)])
    terms = [(_random_word(rng, ring.prime), rng.randint(0, ring.prime - 1)) for _ in range(n)]
    return mode, ring, ClassicalElement(ring.prime, terms)


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "motivic_steenrod", *argv], capture_output=True)


@pytest.mark.acceptance(8, "CLI contract")
def test_criterion_8_cli():
    with Budget(10) as b:
        rng = random.Random(8)
        for _ in range(1000):
            mode, ring, e = _random_element(rng)
            text = format_element(e)
            back = parse_element(text, mode=mode, ring=ring, prime=ring.prime)
            assert back == e, text
            assert dumps(element_data(back)) == dumps(element_data(e))

        stable = [
            ("mul", "Sq2 + t Sq1", "Sq2 Sq1 + Sq3", "--format", "structured"),
            ("table", "--max-degree", "8", "--prime", "3", "--format", "structured"),
            ("coproduct", "t0 x2 + t x1", "--preset", "universal", "--format", "structured"),
            ("pairing-matrix", "--max-p", "8", "--format", "structured"),
        ]
        for argv in stable:
            first, second = _cli(*argv), _cli(*argv)
            assert first.returncode == second.returncode == 0, argv
            assert first.stdout and first.stdout == second.stdout, argv

        expected = [
            (0, ("mul", "Sq2", "Sq2")),
            (1, ("mul", "Sq2", "Sq")),
            (1, ("normalize", "Sq3", "--prime", "3")),
            (1, ("verify", "no-such-suite")),
            (2, ("mul", "Sq2", "t Sq1", "--preset", "universal")),
            (2, ("pairing-matrix", "--bidegree", "1,0", "--preset", "universal")),
            (3, ("verify", "cross-model", "--slot", "right", "--max-degree", "8")),
        ]
        for code, argv in expected:
            assert _cli(*argv).returncode == code, argv
    b.check()
