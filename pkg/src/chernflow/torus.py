"""Flat-torus grids and the spectral calculus used by every other module.

A grid models the flat torus R^{2n} / (L_1 Z x ... x L_{2n} Z) carrying the
unit-volume background metric: the periods must multiply to exactly 1, so the
discrete integral of the constant 1 is 1.  All differential operators are
pseudo-spectral with the convention

    laplacian(e^{2 pi i k.x/L}) = -(2 pi)^2 sum_a (k_a / L_a)^2 e^{2 pi i k.x/L},

i.e. the Laplacian has nonpositive spectrum.  First derivatives zero the
Nyquist mode (half-spectrum convention) so gradient energies stay real and
integration by parts holds on band-limited data.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
import math

import numpy as np

from .errors import BadResolution, GridMismatch, NonFiniteField, VolumeNotOne

_VOLUME_TOL = 1e-12
_MIN_POINTS = 8


@dataclass(frozen=True)
class TorusGrid:
    """Periodic grid on a flat torus of complex dimension n (2n real axes)."""

    complex_dim: int
    points_per_axis: tuple
    periods: tuple

    def __post_init__(self):
        n = self.complex_dim
        if not isinstance(n, int) or n < 1:
            raise BadResolution(f"complex_dim must be a positive integer, got {n!r}")
        pts = tuple(int(p) for p in self.points_per_axis)
        per = tuple(float(L) for L in self.periods)
        if len(pts) != 2 * n:
            raise BadResolution(
                f"expected {2 * n} axis counts for complex_dim={n}, got {len(pts)}")
        if len(per) != 2 * n:
            raise BadResolution(
                f"expected {2 * n} periods for complex_dim={n}, got {len(per)}")
        for p in pts:
            if p < _MIN_POINTS or p % 2 != 0:
                raise BadResolution(
                    f"points per axis must be even and >= {_MIN_POINTS}, got {p}")
        if any(L <= 0 for L in per):
            raise VolumeNotOne(f"periods must be positive, got {per}")
        vol = math.prod(per)
        if abs(vol - 1.0) > _VOLUME_TOL:
            raise VolumeNotOne(f"periods multiply to {vol!r}, expected 1")
        object.__setattr__(self, "points_per_axis", pts)
        object.__setattr__(self, "periods", per)

    @property
    def ndim_real(self):
        return 2 * self.complex_dim

    @property
    def shape(self):
        return self.points_per_axis

    @property
    def node_count(self):
        return math.prod(self.points_per_axis)

    @property
    def volume(self):
        return math.prod(self.periods)

    @property
    def spacings(self):
        """Grid spacing h_a = L_a / N_a per real axis."""
        return tuple(L / p for L, p in zip(self.periods, self.points_per_axis))

    def coordinates(self):
        """Sparse broadcastable coordinate arrays x_a = L_a * j / N_a."""
        axes = []
        d = self.ndim_real
        for a, (p, L) in enumerate(zip(self.points_per_axis, self.periods)):
            x = L * np.arange(p) / p
            shape = [1] * d
            shape[a] = p
            axes.append(x.reshape(shape))
        return axes


def make_grid(n, points_per_axis, periods=None):
    """Construct a validated unit-volume torus grid."""
    if periods is None:
        periods = (1.0,) * (2 * n)
    return TorusGrid(n, tuple(points_per_axis), tuple(periods))


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real scalar function sampled at the nodes of a TorusGrid.

    Values are immutable after construction; arithmetic between two fields
    requires identical grids (same n, resolutions, and periods).
    """

    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.shape != self.grid.shape:
            raise GridMismatch(
                f"values shape {vals.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(vals)):
            raise NonFiniteField("field values must all be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, grid, value):
        return cls(grid, np.full(grid.shape, float(value)))

    @property
    def min_value(self):
        return float(self.values.min())

    @property
    def max_value(self):
        return float(self.values.max())

    @property
    def sup_norm(self):
        return float(np.abs(self.values).max())

    def _other_values(self, other):
        if isinstance(other, ScalarField):
            if other.grid != self.grid:
                raise GridMismatch("fields live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return ScalarField(self.grid, self.values + self._other_values(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ScalarField(self.grid, self.values - self._other_values(other))

    def __rsub__(self, other):
        return ScalarField(self.grid, self._other_values(other) - self.values)

    def __mul__(self, other):
        return ScalarField(self.grid, self.values * self._other_values(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ScalarField(self.grid, self.values / self._other_values(other))

    def __neg__(self):
        return ScalarField(self.grid, -self.values)


def exp_field(field, scale=1.0):
    """Pointwise e^{scale * field}."""
    return ScalarField(field.grid, np.exp(scale * field.values))


# -- spectral machinery ----------------------------------------------------

@lru_cache(maxsize=64)
def _spectral_ops(grid):
    """Cached Fourier multipliers for the rfftn layout of `grid`.

    Returns (axes, lam, derivs) where lam is the Laplacian symbol (Nyquist
    retained) and derivs[a] the first-derivative symbol i*omega_a with the
    Nyquist entry zeroed.
    """
    shape = grid.shape
    d = grid.ndim_real
    axes = tuple(range(d))
    omegas = []
    for a, (p, L) in enumerate(zip(shape, grid.periods)):
        h = L / p
        if a == d - 1:
            w = 2.0 * np.pi * np.fft.rfftfreq(p, d=h)
            nyq = p // 2  # last entry of the half spectrum
        else:
            w = 2.0 * np.pi * np.fft.fftfreq(p, d=h)
            nyq = p // 2
        bshape = [1] * d
        bshape[a] = w.size
        omegas.append((w.reshape(bshape), nyq, a))
    lam = sum(-(w ** 2) for w, _, _ in omegas)
    derivs = []
    for w, nyq, a in omegas:
        wd = w.copy()
        idx = [slice(None)] * d
        idx[a] = nyq
        wd[tuple(idx)] = 0.0
        derivs.append(1j * wd)
    inv = np.zeros(lam.shape)
    mask = lam != 0.0
    inv[mask] = 1.0 / lam[mask]
    return axes, lam, derivs, inv


def _rfft(values, grid):
    return np.fft.rfftn(values)


def _irfft(spectrum, grid):
    axes = tuple(range(grid.ndim_real))
    return np.fft.irfftn(spectrum, s=grid.shape, axes=axes)


def laplacian_values(values, grid):
    """Spectral Laplacian acting on a raw value array (hot-loop form)."""
    _, lam, _, _ = _spectral_ops(grid)
    return _irfft(lam * _rfft(values, grid), grid)


def integrate(field):
    """Integral against the unit-volume measure: (prod L_a / #nodes) * sum."""
    g = field.grid
    return float(g.volume * field.values.mean())


def laplacian(field):
    """Spectral Laplacian, exact on band-limited data, zero-mean output."""
    return ScalarField(field.grid, laplacian_values(field.values, field.grid))


def laplacian_fd(field):
    """Second-order centered-difference Laplacian (independent oracle)."""
    v = field.values
    out = np.zeros_like(v)
    for a, h in enumerate(field.grid.spacings):
        out += (np.roll(v, -1, axis=a) - 2.0 * v + np.roll(v, 1, axis=a)) / h ** 2
    return ScalarField(field.grid, out)


def derivative(field, axis):
    """Spectral first derivative along one real axis (Nyquist zeroed)."""
    g = field.grid
    _, _, derivs, _ = _spectral_ops(g)
    return ScalarField(g, _irfft(derivs[axis] * _rfft(field.values, g), g))


def grad_norm_sq(field):
    """Pointwise squared gradient sum_a (du/dx_a)^2, spectral derivatives."""
    g = field.grid
    _, _, derivs, _ = _spectral_ops(g)
    fh = _rfft(field.values, g)
    out = np.zeros(g.shape)
    for wd in derivs:
        out += _irfft(wd * fh, g) ** 2
    return ScalarField(g, out)


def random_band_limited(grid, rng, amplitude=1.0, max_modes=None, mean=0.0):
    """Seeded random trigonometric polynomial, sup-norm scaled to `amplitude`.

    Modes run over 0 < |k|_inf <= max_modes per axis (default: one third of
    Nyquist, floor(N_a/6)), with coefficient decay (1 + |k|^2)^{-2}.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    if max_modes is None:
        max_modes = tuple(p // 6 for p in grid.shape)
    elif isinstance(max_modes, int):
        max_modes = (max_modes,) * grid.ndim_real
    # x_a / L_a = j / N_a, so phases only need index ratios
    ratios = []
    d = grid.ndim_real
    for a, p in enumerate(grid.shape):
        r = np.arange(p) / p
        shape = [1] * d
        shape[a] = p
        ratios.append(r.reshape(shape))
    out = np.zeros(grid.shape)
    for k in product(*[range(-m, m + 1) for m in max_modes]):
        if all(c == 0 for c in k):
            continue
        first = next(c for c in k if c != 0)
        if first < 0:
            continue  # one representative per conjugate pair
        weight = (1.0 + sum(c * c for c in k)) ** -2
        a_k, b_k = rng.standard_normal(2)
        phase = 2.0 * np.pi * sum(c * r for c, r in zip(k, ratios))
        out = out + weight * (a_k * np.cos(phase) + b_k * np.sin(phase))
    sup = np.abs(out).max()
    if sup > 0:
        out *= amplitude / sup
    return ScalarField(grid, out + mean)
