import os
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=40, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def rational_quaternions(draw, nonzero=True):
    q = tuple(draw(small_fractions) for _ in range(4))
    if nonzero and all(c == 0 for c in q):
        q = (Fraction(1), *q[1:])
    return q


@st.composite
def unit_rational_quaternions(draw):
    from s3circles.moebius import inverse_stereographic

    return inverse_stereographic([draw(small_fractions) for _ in range(3)])


def pytest_collection_modifyitems(config, items):
    if os.environ.get("S3CIRCLES_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="set S3CIRCLES_SLOW=1 to run long exact eliminations")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        status, text = results[n]
        terminalreporter.write_line(f"{status} criterion {n}: {text}")
