import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from motivic_steenrod.coefficients import specialize
from motivic_steenrod.steenrod_ops import (
    BOCKSTEIN,
    FuelExhausted,
    NotRewritable,
    OpElement,
    UnsupportedScalarCommutation,
    adem_step,
    admissible_words,
    blocks,
    clear_caches,
    is_admissible,
    normalize,
    op_basis,
    op_bidegree,
    op_multiply,
    sq,
)

from .conftest import CLOSED2, CLOSED3, CLOSED5, UNIVERSAL, admissible, op_elements, raw_words


def el(ring, *words_and_coeffs):
    return OpElement(ring, words_and_coeffs)


def m(ring, word, coeff=1):
    return OpElement.monomial(ring, word, coeff)


def sqs(*ks):
    return sum((sq(k) for k in ks), ())


def comb(n, k):
    return math.comb(n, k) if 0 <= k <= n else 0


def two_adem_oracle(ring, a, b):
    """The four l = 2 relations evaluated term by term with math.comb.

    One application already lands in the admissible basis, so this is the
    full normal form of Sq^a Sq^b for 0 < a < 2b.
    """
    tau, rho = ring.tau, ring.rho
    terms = []
    for t in range(a // 2 + 1):
        top = sqs(a + b - t, t) if t else sq(a + b)
        lower = sqs(a + b - t - 1, t) if t else sq(a + b - 1)
        c = comb(b - t - 1, a - 2 * t) % 2
        if a % 2 == 0 and b % 2 == 0:
            terms.append((top, tau ** (t % 2) * c))
        elif a % 2 == 0:
            terms.append((top, c))
            if t % 2:
                terms.append((lower, rho * c))
        elif b % 2 == 0:
            if t % 2 == 0:
                terms.append((top, c))
            else:
                terms.append((lower, rho * (comb(b - t - 1, a - 2 * t - 1) % 2)))
        elif t % 2:
            terms.append((top, c))
    return OpElement(ring, terms)


# ---------------------------------------------------------------------------
# words


def test_generator_bidegrees():
    assert op_bidegree((2,), 3) == (8, 4)
    assert op_bidegree((BOCKSTEIN,), 2) == (1, 0)
    assert op_bidegree((0, 1, 0), 2) == (4, 1)


def test_sq_alias():
    assert sq(1) == (0,)
    assert sq(2) == (1,)
    assert sq(5) == (0, 2)
    assert blocks(sqs(3, 1)) == [(1, 1), (1, 0)]


def test_admissibility_examples():
    assert is_admissible(sqs(2, 1), 2)
    assert not is_admissible(sqs(2, 2), 2)
    assert not is_admissible((0, 0), 2)
    # the inner beta counts: 3 < 3*1 + 1
    assert not is_admissible((3, 0, 1), 3)
    assert is_admissible((4, 0, 1), 3)
    assert is_admissible((3, 1), 3)


@pytest.mark.parametrize("prime", [2, 3, 5])
def test_admissible_words_brute_force(prime):
    """Enumeration agrees with filtering every word of small degree."""

    def all_words(degree):
        if degree == 0:
            yield ()
            return
        for g in range(0, degree + 1):
            d = op_bidegree((g,), prime)[0]
            if d <= degree:
                for rest in all_words(degree - d):
                    yield (g,) + rest

    for degree in range(0, 15):
        brute = {w for w in all_words(degree) if is_admissible(w, prime)}
        assert set(admissible_words(prime, degree)) == brute, degree


def test_op_basis_examples():
    assert op_basis(1, 0, 2) == [sq(1)]
    assert set(op_basis(3, 1, 2)) == {sq(3), sqs(2, 1)}
    assert op_basis(2, 2, 2) == []
    assert op_basis(5, -1, 2) == []


# ---------------------------------------------------------------------------
# Adem relations


def test_adem_step_examples():
    assert adem_step(CLOSED2, (0, 1), (0, 1)) == m(CLOSED2, sqs(3, 1), CLOSED2.tau)
    assert adem_step(CLOSED3, (0, 1), (0, 1)) == m(CLOSED3, (2,), 2)
    assert adem_step(CLOSED3, (0, 1), (1, 1)) == el(CLOSED3, ((0, 2), 1), ((2, 0), 1))


def test_adem_step_rejects_admissible_pair():
    with pytest.raises(NotRewritable):
        adem_step(CLOSED2, (0, 2), (0, 1))


@pytest.mark.parametrize("ring", [UNIVERSAL, CLOSED2], ids=["universal", "closed"])
def test_two_letter_products_match_direct_formula(ring):
    for b in range(1, 41):
        for a in range(1, min(2 * b, 41 - b)):
            got = normalize(m(ring, sqs(a, b)))
            assert got == two_adem_oracle(ring, a, b), (a, b)


def test_odd_a_relations_are_beta_of_even_ones():
    """beta is a derivation with beta(tau) = rho, so Sq^{a+1} Sq^b = Sq^1 (Sq^a Sq^b)."""
    for b in range(1, 30):
        for a in range(2, 2 * b - 1, 2):
            lhs = normalize(m(UNIVERSAL, sqs(a + 1, b)))
            rhs = op_multiply(m(UNIVERSAL, sq(1)), normalize(m(UNIVERSAL, sqs(a, b))))
            assert lhs == rhs, (a, b)


def test_known_products():
    assert normalize(m(CLOSED2, sqs(1, 1))) == OpElement.zero(CLOSED2)
    assert op_multiply(m(CLOSED2, sq(1)), m(CLOSED2, sq(2))) == m(CLOSED2, sq(3))
    assert normalize(m(CLOSED2, sqs(2, 2))) == m(CLOSED2, sqs(3, 1), CLOSED2.tau)
    expect = el(UNIVERSAL, (sq(5), 1), (sqs(4, 1), 1), (sqs(3, 1), UNIVERSAL.rho))
    assert op_multiply(m(UNIVERSAL, sq(2)), m(UNIVERSAL, sq(3))) == expect
    assert normalize(m(CLOSED2, sq(3))) == m(CLOSED2, sq(3))
    for ring in (CLOSED2, CLOSED3, CLOSED5):
        assert op_multiply(m(ring, (0,)), m(ring, (0,))) == OpElement.zero(ring)


def test_odd_examples():
    assert normalize(m(CLOSED3, (1, 1))) == m(CLOSED3, (2,), 2)
    assert normalize(m(CLOSED3, (1, 0, 1))) == el(CLOSED3, ((0, 2), 1), ((2, 0), 1))


# ---------------------------------------------------------------------------
# scalars


def test_closed_scalars_are_central():
    t = CLOSED2.tau
    assert op_multiply(m(CLOSED2, sq(2)), m(CLOSED2, sq(2), t)) == m(CLOSED2, sqs(3, 1), t * t)


def test_bockstein_passes_tau_by_derivation():
    t, r = UNIVERSAL.tau, UNIVERSAL.rho
    got = op_multiply(m(UNIVERSAL, sq(1)), OpElement.monomial(UNIVERSAL, (), t))
    assert got == el(UNIVERSAL, ((), r), (sq(1), t))


def test_power_cannot_pass_tau_in_universal():
    with pytest.raises(UnsupportedScalarCommutation):
        op_multiply(m(UNIVERSAL, sq(2)), m(UNIVERSAL, sq(1), UNIVERSAL.tau))


def test_fuel_exhaustion_is_reported():
    # fuel counts rewrites actually performed, so start from an empty memo
    clear_caches()
    with pytest.raises(FuelExhausted):
        normalize(m(CLOSED2, sqs(1, 2, 4, 8)), fuel=1)


# ---------------------------------------------------------------------------
# properties


@pytest.mark.parametrize("ring", [CLOSED2, CLOSED3, CLOSED5], ids=["l2", "l3", "l5"])
@given(data=st.data())
def test_normal_form_properties(ring, data):
    x = data.draw(op_elements(ring, words=raw_words(ring.prime, max_len=4, max_index=5)))
    y = normalize(x)
    assert y.is_normal()
    assert normalize(y) == y
    assert set(y.term_bidegrees()) <= set(x.term_bidegrees())


@pytest.mark.parametrize("ring", [CLOSED2, CLOSED3], ids=["l2", "l3"])
@given(data=st.data())
def test_associativity(ring, data):
    x, y, z = (m(ring, data.draw(admissible(ring.prime, 12))) for _ in range(3))
    assert op_multiply(op_multiply(x, y), z) == op_multiply(x, op_multiply(y, z))


@given(data=st.data())
def test_distributivity(data):
    ring = CLOSED2
    x = data.draw(op_elements(ring, words=admissible(2, 10)))
    y = data.draw(op_elements(ring, words=admissible(2, 10)))
    z = data.draw(op_elements(ring, words=admissible(2, 10)))
    assert op_multiply(x, y + z) == op_multiply(x, y) + op_multiply(x, z)
    assert op_multiply(x + y, z) == op_multiply(x, z) + op_multiply(y, z)


def test_rho_compatibility():
    """Universal normal form with rho -> 0 equals the closed normal form."""
    for b in range(1, 41):
        for a in range(1, 41 - b):
            u = normalize(m(UNIVERSAL, sqs(a, b)))
            c = normalize(m(CLOSED2, sqs(a, b)))
            dropped = OpElement(CLOSED2, [(w, CLOSED2.scalar({k: v for k, v in s.terms if k[0] == 0})) for w, s in u])
            assert dropped == c, (a, b)


def test_closed_equals_universal_specialized_classically():
    for b in range(1, 20):
        for a in range(1, 2 * b):
            u = normalize(m(UNIVERSAL, sqs(a, b)))
            c = normalize(m(CLOSED2, sqs(a, b)))
            assert {w: specialize(s) for w, s in u if specialize(s)} == {w: specialize(s) for w, s in c if specialize(s)}
