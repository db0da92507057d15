import numpy as np
import pytest

from eegedge.signal_core import SynthSpec, synth_dataset


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_dataset():
    spec = SynthSpec(num_classes=3, channels=4, length=64, noise_std=0.1,
                     gains=(1.0, 1.0, 1.0, 8.0), samples_per_class=20, seed=3)
    return synth_dataset(spec)


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, line = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {line}")
