import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kcausal import causal
from kcausal import spacetimes as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# the sample families used across tests; grid anchors and seeds are fixed
MINKOWSKI_SAMPLES = {
    "minkowski-grid-20": lambda: st.sample_grid("minkowski", 20, 20),
    "minkowski-random-200-s42": lambda: st.sample_random("minkowski", 200, 42),
}
FAMILY_SAMPLES = {
    **MINKOWSKI_SAMPLES,
    "minus-point-grid-20": lambda: st.sample_grid("minus-points:p=1/0", 20, 20),
    "minus-segment-grid-24": lambda: st.sample_grid("minus-segment:a=1/-0.15,b=1/0.15", 24, 24),
}
CYLINDER_SAMPLES = {
    "cylinder-grid-6": lambda: st.sample_grid("cylinder:period=1", 6, 6),
    "cylinder-random-50-s7": lambda: st.sample_random("cylinder:period=1", 50, 7),
}

_cache = {}


def structure(name):
    if name not in _cache:
        table = {**FAMILY_SAMPLES, **CYLINDER_SAMPLES}
        _cache[name] = causal.build_structure(table[name]())
    return _cache[name]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_relation(rng, n, p=0.3):
    return rng.random((n, n)) < p


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS, key=lambda k: int(k.split("-")[1])):
            terminalreporter.write_line(RESULTS[key])
