import numpy as np
import pytest

from chernflow import ScalarField, make_grid


@pytest.fixture
def grid16():
    return make_grid(1, (16, 16))


@pytest.fixture
def grid8_n2():
    return make_grid(2, (8, 8, 8, 8))


def mode_field(grid, wave, amplitude=1.0, kind="cos"):
    """Sample amplitude * cos/sin(2 pi sum_a k_a x_a / L_a) on the grid."""
    phase = sum(2.0 * np.pi * k * x / L
                for k, x, L in zip(wave, grid.coordinates(), grid.periods))
    phase = np.broadcast_to(phase, grid.shape).copy()
    trig = np.cos if kind == "cos" else np.sin
    return ScalarField(grid, amplitude * trig(phase))


@pytest.fixture
def mode():
    return mode_field
