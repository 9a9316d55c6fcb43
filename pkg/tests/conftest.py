import numpy as np
import pytest

from pmc.synth import SynthSpec, generate_batch

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def make_batch(tmp_path_factory):
    """Generate (and cache per session) a synthetic batch on disk."""
    cache = {}

    def make(**kwargs):
        spec = SynthSpec(**kwargs)
        if spec not in cache:
            out = tmp_path_factory.mktemp("batch")
            cache[spec] = (generate_batch(spec, out), out)
        return cache[spec]

    return make


@pytest.fixture(scope="session")
def small_batch(make_batch):
    return make_batch(n_gestures=4, frame_height=48, frame_width=64, frames_per_gesture=16,
                      n_test=6, max_gestures=3, blob_sigma=4.0, seed=7)


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(name, passed, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
        assert passed, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
