import math
from fractions import Fraction

import numpy as np
import pytest

from iqeis.afe import SampleStream


def sine_stream(P, amplitude, phi=0.0, offset=512.0, cycles=1, quantize=False):
    """One or more re-armed cycles of ``offset + A sin(2 pi n / P + phi)``."""
    P = Fraction(P)
    n_cycle = math.ceil(P)
    n = np.arange(n_cycle)
    x = offset + amplitude * np.sin(2 * np.pi * n / float(P) + phi)
    if quantize:
        x = np.floor(x + 0.5).astype(np.int64)
    x = np.tile(x, cycles)
    return SampleStream(x, P, n_cycle, cycles)


def const_stream(P, c, cycles=1, integer=True):
    P = Fraction(P)
    n_cycle = math.ceil(P)
    dtype = np.int64 if integer else np.float64
    return SampleStream(np.full(n_cycle * cycles, c, dtype=dtype), P, n_cycle, cycles)


@pytest.fixture
def make_sine():
    return sine_stream


@pytest.fixture
def make_const():
    return const_stream


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_LINES
    except ImportError:
        return
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
