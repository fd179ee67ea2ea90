from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from daggerlim.derived_limit import SystemKind, build_system
from daggerlim.series import Envelope, Sublinear, TruncatedSeries

settings.register_profile("default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rationals(max_num=40, max_den=12, nonzero=False):
    s = st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))
    return s.filter(bool) if nonzero else s


def polys(nvars=2, max_terms=5, max_deg=6, prime_heavy=True):
    """Finite series whose coefficients mix powers of 2 and 3 so valuations vary."""
    coeff = st.builds(
        lambda u, a, b: u * Fraction(2) ** a * Fraction(3) ** b,
        st.sampled_from([1, -1, 5, -7, 11]),
        st.integers(-4, 4),
        st.integers(-2, 2),
    )
    key = st.tuples(*[st.integers(0, max_deg)] * nvars)
    return st.dictionaries(key, coeff, max_size=max_terms).map(lambda d: TruncatedSeries(d, nvars))


envelopes = st.builds(Envelope, rationals(), st.sampled_from(list(Sublinear)), rationals(max_num=6, max_den=1))


@pytest.fixture(scope="session")
def bidisk():
    return build_system(SystemKind.BIDISK_OPEN_DAGGER)


@pytest.fixture(scope="session")
def stein():
    return build_system(SystemKind.OPEN_DISK_STEIN)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
