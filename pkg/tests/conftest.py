import math

import numpy as np
import pytest

from anisobesov import GridSpec, make_profile, sample

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Collects one PASS/FAIL line per acceptance criterion for the summary."""

    def record(number, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def line_grid():
    return GridSpec.uniform(1, 200.0, 4096)


@pytest.fixture(scope="session")
def gauss_grid():
    return GridSpec.uniform(1, 12.0, 256)


@pytest.fixture(scope="session")
def unit_gaussian(gauss_grid):
    return sample(lambda x: np.exp(-0.5 * x**2), gauss_grid)


@pytest.fixture(scope="session")
def iso1():
    return make_profile((1.0,))


def random_field(spec, rng, complex_values=True):
    vals = rng.standard_normal(spec.shape)
    if complex_values:
        vals = vals + 1j * rng.standard_normal(spec.shape)
    from anisobesov import SampledField

    return SampledField(spec, vals)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def nyquist_grid(profile, top_level, samples, oversample=2.0):
    """Grid whose Nyquist frequency is ``oversample * a_j**top_level``."""
    if isinstance(samples, int):
        samples = (samples,) * profile.d
    hw = tuple(math.pi * n / (2 * oversample * a**top_level) for n, a in zip(samples, profile.a))
    return GridSpec(hw, tuple(samples))
