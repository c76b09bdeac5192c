import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from motivic_steenrod.coefficients import CoefficientRing, Preset
from motivic_steenrod.dual_hopf import GammaElement, milnor_monomials
from motivic_steenrod.steenrod_ops import OpElement, admissible_words

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

UNIVERSAL = CoefficientRing(2, Preset.UNIVERSAL)
CLOSED2 = CoefficientRing(2, Preset.CLOSED)
CLOSED3 = CoefficientRing(3, Preset.CLOSED)
CLOSED5 = CoefficientRing(5, Preset.CLOSED)
RINGS = [UNIVERSAL, CLOSED2, CLOSED3, CLOSED5]


def ring_id(ring):
    return f"l{ring.prime}-{ring.preset.value}"


@pytest.fixture(params=RINGS, ids=ring_id)
def ring(request):
    return request.param


# ---------------------------------------------------------------------------
# strategies


def scalars(ring, max_exp=3):
    p = ring.prime
    mono = st.tuples(st.integers(0, max_exp), st.integers(0, max_exp))
    return st.lists(st.tuples(mono, st.integers(0, p - 1)), max_size=4).map(lambda ts: ring.scalar(dict(ts)))


def admissible(prime, max_degree):
    return st.integers(0, max_degree).flatmap(
        lambda d: st.sampled_from(admissible_words(prime, d) or ((),))
    )


def raw_words(prime, max_len=4, max_index=6):
    """Arbitrary words, admissible or not (beta beta allowed; it collapses)."""
    return st.lists(st.integers(0, max_index), max_size=max_len).map(tuple)


def op_elements(ring, max_terms=3, words=None):
    if words is None:
        words = raw_words(ring.prime)
    return st.lists(st.tuples(words, scalars(ring)), max_size=max_terms).map(lambda ts: OpElement(ring, ts))


def milnor(prime, max_degree):
    return st.integers(0, max_degree).flatmap(
        lambda d: st.sampled_from(milnor_monomials(prime, d) or milnor_monomials(prime, 0))
    )


def gamma_elements(ring, max_degree=20, max_terms=3):
    return st.lists(st.tuples(milnor(ring.prime, max_degree), scalars(ring)), max_size=max_terms).map(
        lambda ts: GammaElement(ring, ts)
    )


# ---------------------------------------------------------------------------
# acceptance summary

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.passed else "FAIL"
        if number not in _ACCEPTANCE or status == "FAIL":
            _ACCEPTANCE[number] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status} - {title}")
