import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from rootiso.poly import IntPolynomial

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def int_polys(max_degree=10, bits=20, nonzero=True):
    coeff = st.integers(-(2**bits), 2**bits)
    polys = st.lists(coeff, min_size=1, max_size=max_degree + 1).map(IntPolynomial)
    return polys.filter(lambda f: not f.is_zero) if nonzero else polys


def dyadics(max_exp=8, bound=4):
    return st.builds(lambda m, k: Fraction(m, 2**k),
                     st.integers(-bound * 2**max_exp, bound * 2**max_exp), st.integers(0, max_exp))


# acceptance verdict lines, repeated in the terminal summary so they survive output capture
_VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    def emit(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        _VERDICTS.append(line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
