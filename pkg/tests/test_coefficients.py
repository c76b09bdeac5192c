import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from motivic_steenrod.coefficients import (
    CoefficientRing,
    Preset,
    PresetMismatch,
    binom_mod,
    scalar_bidegree,
    scalar_multiply,
    specialize,
)

from .conftest import CLOSED2, CLOSED3, UNIVERSAL, scalars


def pascal(n_max):
    rows = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return rows


PASCAL = pascal(64)


@pytest.mark.parametrize("prime", [2, 3, 5])
def test_lucas_matches_pascal_triangle(prime):
    for n, row in enumerate(PASCAL):
        for k, value in enumerate(row):
            assert binom_mod(n, k, prime) == value % prime, (n, k)


@pytest.mark.parametrize(
    "n,k,prime",
    [(4, 2, 2), (5, 2, 3), (7, 0, 5), (10, 3, 7), (63, 31, 2)],
)
def test_binom_examples_against_math_comb(n, k, prime):
    assert binom_mod(n, k, prime) == math.comb(n, k) % prime


@pytest.mark.parametrize("n,k", [(-1, 0), (3, -1), (3, 4), (-5, -5)])
def test_binom_out_of_range_is_zero(n, k):
    assert binom_mod(n, k, 3) == 0


def test_closed_preset_reduction():
    assert not CLOSED2.rho
    assert CLOSED2.tau
    assert not CLOSED3.tau
    assert CLOSED3.scalar({(0, 0): 4}) == 1
    assert UNIVERSAL.rho * UNIVERSAL.tau == UNIVERSAL.monomial(1, 1)


def test_ring_validation():
    with pytest.raises(ValueError):
        CoefficientRing(4)
    with pytest.raises(ValueError):
        CoefficientRing(3, Preset.UNIVERSAL)


def test_scalar_multiply_examples():
    t, r = UNIVERSAL.tau, UNIVERSAL.rho
    assert scalar_multiply(t, t) == UNIVERSAL.monomial(0, 2)
    assert scalar_multiply(r, t + 1) == UNIVERSAL.monomial(1, 1) + r
    x = t * t + r
    assert scalar_multiply(UNIVERSAL.one, x) == x


def test_mixing_presets_raises():
    with pytest.raises(PresetMismatch):
        UNIVERSAL.tau * CLOSED2.tau


def test_scalar_bidegree():
    assert scalar_bidegree(1, 0) == (1, 1)
    assert scalar_bidegree(0, 1) == (0, 1)
    assert UNIVERSAL.monomial(2, 3).bidegrees() == {(2, 5)}


def test_specialize_examples():
    t, r = UNIVERSAL.tau, UNIVERSAL.rho
    assert specialize(t * t) == 1
    assert specialize(r * t + t**3) == 1
    assert specialize(r) == 0


@given(st.data())
def test_ring_axioms(data):
    for ring in (UNIVERSAL, CLOSED2, CLOSED3):
        x, y, z = (data.draw(scalars(ring)) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        assert x + y == y + x
        assert x * ring.one == x
        assert x + ring.zero == x
        assert x - x == ring.zero


@given(st.data())
def test_product_bidegrees_add(data):
    x, y = data.draw(scalars(UNIVERSAL)), data.draw(scalars(UNIVERSAL))
    expect = {(a[0] + b[0], a[1] + b[1]) for a in x.bidegrees() for b in y.bidegrees()}
    assert (x * y).bidegrees() <= expect


@given(st.data(), st.integers(0, 1), st.integers(0, 1))
def test_specialize_is_a_ring_map(data, rv, tv):
    x, y = data.draw(scalars(UNIVERSAL)), data.draw(scalars(UNIVERSAL))
    assert specialize(x * y, rv, tv) == specialize(x, rv, tv) * specialize(y, rv, tv) % 2
    assert specialize(x + y, rv, tv) == (specialize(x, rv, tv) + specialize(y, rv, tv)) % 2
