import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from duforge.sampling import RngSeed, cue_sample

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20200607)


def random_complex(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


# hypothesis draws (d, seed) pairs; matrices are built from the seed so
# failures shrink to a small reproducible integer
dims = st.integers(min_value=2, max_value=4)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def unitaries(draw, d=None):
    dd = draw(dims) if d is None else d
    return cue_sample(dd * dd, RngSeed(draw(seeds)))


def local_unitary(d, rng):
    return np.kron(cue_sample(d, rng), cue_sample(d, rng))
