from __future__ import annotations

import os
import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from laurentinv import SupportCollection, convex_hull
from laurentinv.oracles import random_unimodular

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


# -- strategies ---------------------------------------------------------------------


def int_matrices(max_rows=6, max_cols=6, bound=5):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=1, max_size=max_rows)
    )


@st.composite
def collections(draw, max_dim=4, max_supports=5, bound=3, max_size=4):
    n = draw(st.integers(1, max_dim))
    k = draw(st.integers(1, max_supports))
    point = st.tuples(*[st.integers(-bound, bound)] * n)
    supports = [draw(st.lists(point, min_size=1, max_size=max_size, unique=True)) for _ in range(k)]
    return SupportCollection.from_points(supports, ambient_dim=n)


@st.composite
def polytopes(draw, m=None, max_m=3, lo=0, hi=4, max_points=6):
    m = draw(st.integers(1, max_m)) if m is None else m
    pts = draw(st.lists(st.tuples(*[st.integers(lo, hi)] * m), min_size=1, max_size=max_points))
    return convex_hull(pts, ambient_dim=m)


@st.composite
def unimodular(draw, n, steps=4):
    return random_unimodular(random.Random(draw(st.integers(0, 2**32))), n, steps)


# -- acceptance summary -------------------------------------------------------------

_acceptance: dict[str, list[str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _acceptance.setdefault(name, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        ok = all(o == "passed" for o in _acceptance[name])
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
