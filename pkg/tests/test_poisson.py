import numpy as np
import pytest

from chernflow import (
    ScalarField,
    integrate,
    laplacian,
    make_grid,
    random_band_limited,
    solve_dense_oracle,
    solve_mean_zero,
    solve_positive,
)
from chernflow.errors import NonZeroMean, TooLarge
from conftest import mode_field

TWO_PI_SQ = 4.0 * np.pi ** 2


def seeded_mean_zero(grid, seed, amplitude=1.0):
    g = random_band_limited(grid, seed, amplitude=amplitude)
    return g - integrate(g)


class TestSolveMeanZero:
    def test_single_mode_inversion(self, grid16):
        g = mode_field(grid16, (1, 0))
        v = solve_mean_zero(g)
        assert np.abs(v.values + g.values / TWO_PI_SQ).max() <= 1e-14

    def test_zero_rhs(self, grid16):
        v = solve_mean_zero(ScalarField.constant(grid16, 0.0))
        assert v.sup_norm == 0.0

    @pytest.mark.parametrize("seed", range(5))
    def test_round_trip(self, grid16, seed):
        g = seeded_mean_zero(grid16, seed)
        v = solve_mean_zero(g)
        assert np.abs(laplacian(v).values - g.values).max() <= 1e-10
        assert abs(integrate(v)) <= 1e-12

    def test_rejects_nonzero_mean(self, grid16):
        with pytest.raises(NonZeroMean):
            solve_mean_zero(ScalarField.constant(grid16, 1.0))

    def test_round_trip_n2(self, grid8_n2):
        g = seeded_mean_zero(grid8_n2, 17)
        v = solve_mean_zero(g)
        assert np.abs(laplacian(v).values - g.values).max() <= 1e-10
        assert abs(integrate(v)) <= 1e-12

    def test_round_trip_anisotropic(self):
        grid = make_grid(1, (16, 32), (2.0, 0.5))
        g = seeded_mean_zero(grid, 23)
        v = solve_mean_zero(g)
        assert np.abs(laplacian(v).values - g.values).max() <= 1e-10

    def test_linearity(self, grid16):
        g1 = seeded_mean_zero(grid16, 11)
        g2 = seeded_mean_zero(grid16, 12)
        combo = solve_mean_zero(2.0 * g1 - 0.5 * g2)
        parts = 2.0 * solve_mean_zero(g1) - 0.5 * solve_mean_zero(g2)
        assert np.abs(combo.values - parts.values).max() <= 1e-10


class TestSolvePositive:
    def test_zero_rhs_gives_one(self, grid16):
        v = solve_positive(ScalarField.constant(grid16, 0.0))
        assert np.array_equal(v.values, np.ones(grid16.shape))

    def test_single_mode_shift(self, grid16):
        # mean-zero solution is -cos/(4 pi^2); shifting its min to 1 adds
        # 1 + 1/(4 pi^2)
        g = mode_field(grid16, (1, 0))
        v = solve_positive(g)
        expect = -g.values / TWO_PI_SQ + 1.0 + 1.0 / TWO_PI_SQ
        assert np.abs(v.values - expect).max() <= 1e-13
        assert v.min_value == 1.0

    @pytest.mark.parametrize("seed", range(3))
    def test_normalization_and_round_trip(self, grid16, seed):
        g = seeded_mean_zero(grid16, seed)
        v = solve_positive(g)
        assert v.min_value == 1.0
        assert (v.values >= 1.0).all()
        assert np.abs(laplacian(v).values - g.values).max() <= 1e-10


class TestDenseOracle:
    def test_single_mode_small_grid(self):
        g16 = make_grid(1, [16, 16])
        g = mode_field(g16, (1, 0))
        v = solve_dense_oracle(g)
        exact = -g.values / TWO_PI_SQ
        rel = np.abs(v.values - exact).max() * TWO_PI_SQ
        assert rel <= 5e-2

    def test_zero(self, grid16):
        v = solve_dense_oracle(ScalarField.constant(grid16, 0.0))
        assert v.sup_norm <= 1e-12

    def test_h2_agreement_with_spectral(self):
        # same continuous g on both grids: pin the mode cutoff so the seeded
        # coefficients coincide
        errs = []
        for pts in (16, 32):
            grid = make_grid(1, [pts, pts])
            g = random_band_limited(grid, 7, max_modes=2)
            g = g - integrate(g)
            gap = solve_dense_oracle(g).values - solve_mean_zero(g).values
            errs.append(np.abs(gap).max())
        assert 3.0 <= errs[0] / errs[1] <= 5.5

    def test_node_budget(self):
        grid = make_grid(1, [128, 128])
        with pytest.raises(TooLarge):
            solve_dense_oracle(ScalarField.constant(grid, 0.0))

    def test_rejects_nonzero_mean(self, grid16):
        with pytest.raises(NonZeroMean):
            solve_dense_oracle(ScalarField.constant(grid16, 1.0))
