"""Grids, wavefunctions and Gaussian packets on a uniform periodic 1-D grid.

Everything is expressed in atomic units (hbar = m = 1 by default). A
wavefunction is a complex array sampled at x_m = x_min + m*dx together with
its time stamp. All objects are value types: operations return new instances
and never mutate their inputs, so concurrent reads are safe.
"""

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Units",
    "ATOMIC",
    "Grid1D",
    "centered_grid",
    "Wavefunction",
    "GaussianParams",
    "gaussian_packet",
    "superpose",
    "measure_local",
]


@dataclass(frozen=True)
class Units:
    """Physical constants of the model. Defaults are atomic units."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if self.hbar <= 0 or self.mass <= 0:
            raise ValueError("hbar and mass must be strictly positive")


ATOMIC = Units()


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic spatial grid with points x_m = x_min + m*dx."""

    n_points: int
    dx: float
    x_min: float

    def __post_init__(self):
        if self.n_points < 2 or self.n_points % 2 != 0:
            raise ValueError("n_points must be even and at least 2")
        if self.dx <= 0:
            raise ValueError("dx must be positive")

    @property
    def length(self):
        return self.n_points * self.dx

    def positions(self):
        return self.x_min + self.dx * np.arange(self.n_points)

    def index_of(self, x):
        """Index of the grid point at x; raises if x is not on the grid."""
        i = int(round((x - self.x_min) / self.dx))
        if i < 0 or i >= self.n_points or abs(self.x_min + i * self.dx - x) > 1e-6 * self.dx:
            raise ValueError(f"x = {x} is not a grid point")
        return i


def centered_grid(n_points, dx):
    """Grid symmetric about the origin; x = 0 lands exactly on a sample."""
    return Grid1D(n_points=n_points, dx=dx, x_min=-(n_points // 2) * dx)


@dataclass
class Wavefunction:
    """Complex amplitudes on a grid at a given time."""

    grid: Grid1D
    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.grid.n_points,):
            raise ValueError("amplitude array length does not match the grid")

    def norm_squared(self):
        """Integral of |psi|^2 over the grid (unit norm for physical states)."""
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.dx)


@dataclass(frozen=True)
class GaussianParams:
    """Center x0, spatial width sigma_x, carrier momentum k0, global phase."""

    x0: float
    sigma_x: float
    k0: float
    global_phase: float = 0.0

    def __post_init__(self):
        if self.sigma_x <= 0:
            raise ValueError("sigma_x must be positive")


def gaussian_packet(grid, p, units=ATOMIC):
    """Unit-norm Gaussian wavepacket on the grid.

    psi(x) = (2 pi sigma^2)^(-1/4) exp(-(x-x0)^2 / (4 sigma^2)
             + i k0 (x-x0) + i phase)

    The carrier phase is referenced to the packet center so that mirrored
    packet pairs (x0 -> -x0, k0 -> -k0) are exact reflections of each other
    in floating point, which two-packet constructions rely on.
    """
    if p.sigma_x < 4 * grid.dx:
        raise ValueError(
            f"sigma_x = {p.sigma_x} undersampled: need at least 4*dx = {4 * grid.dx}"
        )
    if 8 * p.sigma_x > grid.length:
        raise ValueError("packet wider than the domain")
    x = grid.positions()
    u = x - p.x0
    amp = (2 * np.pi * p.sigma_x**2) ** (-0.25) * np.exp(
        -(u**2) / (4 * p.sigma_x**2) + 1j * (p.k0 * u + p.global_phase)
    )
    edge = max(abs(amp[0]), abs(amp[-1]))
    peak = np.abs(amp).max()
    if edge > 1e-4 * peak:
        raise ValueError(
            f"packet does not fit the domain: boundary amplitude {edge:.3e} "
            f"vs peak {peak:.3e}"
        )
    if edge > 1e-12 * peak:
        warnings.warn(
            f"packet tail reaches the domain boundary ({edge / peak:.2e} of peak)",
            RuntimeWarning,
            stacklevel=2,
        )
    return Wavefunction(grid, amp, 0.0)


def superpose(a, b, c_a, c_b):
    """Pointwise c_a*a + c_b*b. Not renormalized."""
    if a.grid != b.grid:
        raise ValueError("wavefunctions live on different grids")
    if a.time != b.time:
        raise ValueError("wavefunctions have different time stamps")
    return Wavefunction(a.grid, c_a * a.amplitudes + c_b * b.amplitudes, a.time)


def measure_local(wf, x_index, units=ATOMIC):
    """Probability density and current at an interior grid point.

    The current uses the central difference over the two neighbouring
    samples: j = (hbar/m) Im[psi* (psi(x+dx) - psi(x-dx)) / (2 dx)].
    """
    n = wf.grid.n_points
    if x_index <= 0 or x_index >= n - 1:
        raise ValueError("x_index must be interior (one-sided stencils not supported)")
    psi = wf.amplitudes
    rho = float(abs(psi[x_index]) ** 2)
    grad = (psi[x_index + 1] - psi[x_index - 1]) / (2 * wf.grid.dx)
    j = float(units.hbar / units.mass * np.imag(np.conj(psi[x_index]) * grad))
    return rho, j
