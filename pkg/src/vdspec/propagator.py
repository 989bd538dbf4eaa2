"""Split-operator Fourier time evolution with periodic boundaries.

For a spatially uniform potential V0(t) the kinetic and potential factors
commute, so the scheme is exact up to rounding: one step is a diagonal
multiplication by exp(-i hbar k^2 dt / 2m) in momentum space plus a global
phase exp(-i/hbar int V0 dt). The closed-form dispersive Gaussian is provided
as an independent test oracle for the numerical path.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import fft as sfft

from .core import ATOMIC, Wavefunction
from .detectors import DetectorRecord, TapConfig

__all__ = [
    "PotentialSpec",
    "EvolutionConfig",
    "PropagationError",
    "free_step",
    "apply_uniform_potential",
    "propagate",
    "analytic_free_gaussian",
]

_POTENTIAL_KINDS = ("zero", "constant", "uniform-time-dependent")


@dataclass(frozen=True)
class PotentialSpec:
    """Spatially uniform potential V0(t)."""

    kind: str = "zero"
    value: float = 0.0
    value_fn: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.kind not in _POTENTIAL_KINDS:
            raise ValueError(f"potential.kind must be one of {_POTENTIAL_KINDS}")
        if self.kind == "uniform-time-dependent" and self.value_fn is None:
            raise ValueError("a time-dependent potential needs value_fn")

    def __call__(self, t):
        if self.kind == "zero":
            return 0.0
        if self.kind == "constant":
            return self.value
        return float(self.value_fn(t))

    @staticmethod
    def zero():
        return PotentialSpec(kind="zero")

    @staticmethod
    def constant(value):
        return PotentialSpec(kind="constant", value=float(value))

    @staticmethod
    def time_dependent(fn):
        return PotentialSpec(kind="uniform-time-dependent", value_fn=fn)


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float
    n_steps: int
    potential: PotentialSpec = PotentialSpec()

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.n_steps < 1:
            raise ValueError("n_steps must be at least 1")


class PropagationError(RuntimeError):
    """Non-finite amplitudes encountered; carries the failing step index."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


@lru_cache(maxsize=16)
def _kinetic_multiplier(grid, dt, hbar, mass):
    k = 2 * np.pi * np.fft.fftfreq(grid.n_points, d=grid.dx)
    return np.exp(-0.5j * hbar * k**2 * dt / mass)


def free_step(wf, dt, units=ATOMIC):
    """One exact kinetic step of size dt (may be negative to step backwards)."""
    mult = _kinetic_multiplier(wf.grid, dt, units.hbar, units.mass)
    amp = sfft.ifft(mult * sfft.fft(wf.amplitudes))
    if not np.all(np.isfinite(amp.view(float))):
        raise PropagationError("non-finite amplitudes after kinetic step")
    return Wavefunction(wf.grid, amp, wf.time + dt)


def apply_uniform_potential(wf, potential, t, dt, units=ATOMIC):
    """Multiply by the uniform-potential phase accumulated over [t, t+dt].

    The phase increment Phi = (1/hbar) int_t^{t+dt} V0 is estimated with the
    trapezoidal rule, matching the second-order stepper. Returns the updated
    wavefunction and Phi so detector records can unwind it later.
    """
    if potential.kind == "zero":
        return wf, 0.0
    phi = 0.5 * (potential(t) + potential(t + dt)) * dt / units.hbar
    return Wavefunction(wf.grid, wf.amplitudes * np.exp(-1j * phi), wf.time), phi


def propagate(wf0, cfg, taps, units=ATOMIC):
    """Run n_steps Strang-split steps, sampling every tap at every step.

    Steps are (half potential phase, kinetic, half potential phase), pure
    kinetic when the potential is zero. Samples include the initial state,
    so each record holds n_steps+1 entries at times t0, t0+dt, ..., t0+T,
    together with the cumulative potential phase at each sample.
    """
    grid = wf0.grid
    tap_idx = []
    for tap in taps:
        i0 = grid.index_of(tap.x_detector)
        sep_steps = int(round(tap.dx_sep / grid.dx))
        if sep_steps < 1 or abs(sep_steps * grid.dx - tap.dx_sep) > 1e-9 * grid.dx:
            raise ValueError(
                f"tap dx_sep = {tap.dx_sep} is not a positive multiple of grid dx = {grid.dx}"
            )
        if i0 - sep_steps < 1 or i0 + sep_steps > grid.n_points - 2:
            raise ValueError("tap and its neighbours must be interior grid points")
        tap_idx.append((i0, sep_steps))

    n = cfg.n_steps
    dt = cfg.dt
    kin = _kinetic_multiplier(grid, dt, units.hbar, units.mass)
    zero_pot = cfg.potential.kind == "zero"

    psi0 = np.empty((len(taps), n + 1), dtype=complex)
    psi_plus = np.empty_like(psi0)
    psi_minus = np.empty_like(psi0)
    v0_phase = np.zeros(n + 1)

    psi = wf0.amplitudes.copy()
    cum_phase = 0.0
    for step in range(n + 1):
        for j, (i0, s) in enumerate(tap_idx):
            psi0[j, step] = psi[i0]
            psi_plus[j, step] = psi[i0 + s]
            psi_minus[j, step] = psi[i0 - s]
        v0_phase[step] = cum_phase
        if step == n:
            break
        if zero_pot:
            psi = sfft.ifft(kin * sfft.fft(psi))
        else:
            t = wf0.time + step * dt
            phi = 0.5 * (cfg.potential(t) + cfg.potential(t + dt)) * dt / units.hbar
            half = np.exp(-0.5j * phi)
            psi = half * sfft.ifft(kin * sfft.fft(half * psi))
            cum_phase += phi
        if not np.all(np.isfinite(psi.view(float))):
            raise PropagationError(
                f"non-finite amplitudes at step {step + 1}", step=step + 1
            )

    times = wf0.time + dt * np.arange(n + 1)
    records = []
    for j, ((i0, s), tap) in enumerate(zip(tap_idx, taps)):
        sep_len = s * grid.dx
        rho = np.abs(psi0[j]) ** 2
        current = (
            units.hbar
            / units.mass
            * np.imag(np.conj(psi0[j]) * (psi_plus[j] - psi_minus[j]))
            / (2 * sep_len)
        )
        records.append(
            DetectorRecord(
                tap=tap,
                dt=dt,
                times=times.copy(),
                psi0=psi0[j].copy(),
                psi_plus=psi_plus[j].copy(),
                psi_minus=psi_minus[j].copy(),
                rho=rho,
                current=current,
                v0_phase=v0_phase.copy(),
            )
        )
    return records


def analytic_free_gaussian(p, x, t, units=ATOMIC):
    """Closed-form free evolution of gaussian_packet's initial condition.

    Complex-width form: s(t) = sigma (1 + i hbar t / (2 m sigma^2)), centroid
    x0 + (hbar k0/m) t, carrier phase k0 (x - x0) - (hbar k0^2/2m) t. Unit
    squared norm for all t. Vectorized over x.
    """
    x = np.asarray(x, dtype=float)
    hbar, m = units.hbar, units.mass
    s = p.sigma_x * (1.0 + 1j * hbar * t / (2 * m * p.sigma_x**2))
    pref = (2 * np.pi * p.sigma_x**2) ** (-0.25) * np.sqrt(p.sigma_x / s)
    b = x - p.x0 - hbar * p.k0 / m * t
    carrier = p.k0 * (x - p.x0) - hbar * p.k0**2 / (2 * m) * t + p.global_phase
    return pref * np.exp(-(b**2) / (4 * p.sigma_x * s) + 1j * carrier)
