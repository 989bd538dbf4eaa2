"""Virtual-detector records and the three momentum-spectrum extractors.

A detector sits at a fixed interior position and records the complex
wavefunction there (and at x +- dx_sep) at every time step. Three spectrum
estimators operate on such a record:

* CVD: bins the instantaneous fluid momentum j/rho, weighted by flux.
  Incoherent; cannot separate overlapping packets.
* QVD: temporal Fourier transform of psi at the detector, mapped to momentum
  through omega = hbar k^2 / 2m. Coherent but direction-blind.
* BQVD: uses the second point to split the signal at each |k| into rightward
  and leftward amplitudes, recovering the full signed-k spectrum.

Temporal transform convention: f(omega) = (1/sqrt(2 pi)) int dt s(t) e^{+i omega t},
so a rightward carrier e^{i k x - i omega t} shows up at positive omega. With
this normalization the BQVD amplitude is directly comparable to the spatial
Fourier amplitude of the initial state, with no fitted constants.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy import fft as sfft

from .core import ATOMIC

__all__ = [
    "TapConfig",
    "DetectorRecord",
    "TemporalAmplitude",
    "Spectrum",
    "CvdSpectrum",
    "DirectionalComponents",
    "phase_unwind",
    "temporal_spectrum",
    "omega_to_k",
    "directional_components",
    "bqvd_spectrum_discrete",
    "bqvd_spectrum_continuous",
    "qvd_spectrum",
    "cvd_spectrum",
    "cvd_on_grid",
]

SIN_SINGULARITY_TOL = 1e-9


@dataclass(frozen=True)
class TapConfig:
    """Detector position and separation of the second evaluation point."""

    x_detector: float = 0.0
    dx_sep: float = 0.1


@dataclass
class DetectorRecord:
    """Time series sampled at a detector point and its two neighbours.

    v0_phase[n] is the cumulative uniform-potential phase (1/hbar) int_0^{t_n} V0
    applied by the propagator up to sample n; rho and current are the local
    density and central-difference probability current at the detector.
    """

    tap: TapConfig
    dt: float
    times: np.ndarray
    psi0: np.ndarray
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    rho: np.ndarray
    current: np.ndarray
    v0_phase: np.ndarray

    def __post_init__(self):
        n = len(self.times)
        if n < 2:
            raise ValueError("a record needs at least two samples")
        for name in ("psi0", "psi_plus", "psi_minus", "rho", "current", "v0_phase"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length does not match times")

    @property
    def n_samples(self):
        return len(self.times)


@dataclass
class TemporalAmplitude:
    """One-sided temporal spectrum: f(omega_j) for omega_j in [0, pi/dt]."""

    omegas: np.ndarray
    values: np.ndarray


@dataclass
class Spectrum:
    """Momentum spectrum: density |psi~(k)|^2 and, when available, psi~(k).

    flagged marks degenerate bins (the k = 0 point carries no propagation
    direction and is emitted with zero density).
    """

    k: np.ndarray
    density: np.ndarray
    amplitude: Optional[np.ndarray] = None
    label: str = ""
    flagged: Optional[np.ndarray] = None


@dataclass
class CvdSpectrum(Spectrum):
    """Binned classical spectrum plus its bookkeeping.

    total_mass is the accumulated flux weight sum(|j|) dt; n_skipped counts
    samples dropped because rho was at or below the floor.
    """

    bin_width: float = 0.0
    n_skipped: int = 0
    total_mass: float = 0.0


@dataclass(frozen=True)
class DirectionalComponents:
    """Rightward (r) and leftward (l) amplitudes at momentum magnitude k."""

    k: np.ndarray
    r: np.ndarray
    l: np.ndarray


def phase_unwind(record):
    """Remove the accumulated uniform-potential phase from all complex samples.

    After unwinding, the record looks exactly like a free (V0 = 0) run, the
    form every spectrum extractor assumes. Idempotent: v0_phase is reset.
    """
    if not np.any(record.v0_phase):
        return replace(record)
    ph = np.exp(1j * record.v0_phase)
    return replace(
        record,
        psi0=record.psi0 * ph,
        psi_plus=record.psi_plus * ph,
        psi_minus=record.psi_minus * ph,
        v0_phase=np.zeros_like(record.v0_phase),
    )


def temporal_spectrum(series, dt, zero_pad_factor=4):
    """f(omega_j) = (dt/sqrt(2 pi)) sum_n s_n e^{+i omega_j n dt} on [0, pi/dt].

    Computed by zero-padding to an efficient FFT length of at least
    zero_pad_factor times the series length. For a signal that decays inside
    the window the padding is exact interpolation of the continuous-window
    transform; omega spacing is 2 pi / (n_pad dt).
    """
    series = np.asarray(series, dtype=complex)
    if series.ndim != 1 or len(series) < 2:
        raise ValueError("series must be one-dimensional with at least two samples")
    if zero_pad_factor < 1:
        raise ValueError("zero_pad_factor must be at least 1")
    n_pad = sfft.next_fast_len(int(zero_pad_factor) * len(series))
    buf = np.zeros(n_pad, dtype=complex)
    buf[: len(series)] = series
    values = sfft.ifft(buf) * (n_pad * dt / np.sqrt(2 * np.pi))
    n_keep = n_pad // 2 + 1
    omegas = 2 * np.pi / (n_pad * dt) * np.arange(n_keep)
    return TemporalAmplitude(omegas=omegas, values=values[:n_keep])


def omega_to_k(omega, units=ATOMIC):
    """Momentum magnitude from the quadratic dispersion omega = hbar k^2 / 2m."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("omega must be nonnegative")
    return np.sqrt(2 * units.mass * omega) / units.hbar


def directional_components(f0, f1, k, dx_sep):
    """Split two-point temporal amplitudes into rightward/leftward parts.

    Inverts f0 = r + l, f1 = r e^{+i k dx} + l e^{-i k dx} exactly, with both
    amplitudes phase-referenced to the first point, so r + l reconstructs f0
    identically. Singular where sin(k dx_sep) vanishes.
    """
    f0 = np.asarray(f0, dtype=complex)
    f1 = np.asarray(f1, dtype=complex)
    k = np.asarray(k, dtype=float)
    theta = k * dx_sep
    s = np.sin(theta)
    if np.any(np.abs(s) < 1e-12):
        raise ValueError("sin(k dx_sep) vanishes: directional split is singular")
    ph = np.exp(1j * theta)
    r = 1j * (f0 / ph - f1) / (2 * s)
    l = 1j * (f0 * ph - f1) / (-2 * s)
    return DirectionalComponents(k=k, r=r, l=l)


def _require_unwound(record):
    if np.any(record.v0_phase):
        raise ValueError("record carries potential phase; apply phase_unwind first")


def _signed_spectrum(k_pos, amp_right, amp_left, flags_pos, label):
    # bin 0 is the degenerate k = 0 point shared by both directions
    k = np.concatenate([-k_pos[1:][::-1], k_pos])
    amplitude = np.concatenate([amp_left[1:][::-1], amp_right])
    flagged = np.concatenate([flags_pos[1:][::-1], flags_pos])
    density = np.abs(amplitude) ** 2
    return Spectrum(k=k, density=density, amplitude=amplitude, label=label, flagged=flagged)


def bqvd_spectrum_discrete(record, zero_pad_factor=4, units=ATOMIC):
    """Signed-k spectrum from the exact two-point directional split.

    For each omega bin, k = sqrt(2 m omega / hbar^2) and the rightward and
    leftward wave amplitudes are scaled by hbar k / m to give psi~(+k) and
    psi~(-k). The k = 0 bin carries no direction and is emitted with zero
    density and flagged, as are any bins where sin(k dx_sep) is numerically
    zero (unreachable for the benchmark parameters).
    """
    _require_unwound(record)
    f0 = temporal_spectrum(record.psi0, record.dt, zero_pad_factor)
    f1 = temporal_spectrum(record.psi_plus, record.dt, zero_pad_factor)
    k_pos = omega_to_k(f0.omegas, units)
    sep = record.tap.dx_sep
    scale = units.hbar * k_pos / units.mass

    valid = np.abs(np.sin(k_pos * sep)) >= SIN_SINGULARITY_TOL
    amp_r = np.zeros(len(k_pos), dtype=complex)
    amp_l = np.zeros(len(k_pos), dtype=complex)
    comp = directional_components(
        f0.values[valid], f1.values[valid], k_pos[valid], sep
    )
    amp_r[valid] = scale[valid] * comp.r
    amp_l[valid] = scale[valid] * comp.l
    return _signed_spectrum(k_pos, amp_r, amp_l, ~valid, "bqvd_discrete")


def bqvd_spectrum_continuous(record, zero_pad_factor=4, units=ATOMIC):
    """Small-separation limit of the two-point split.

    Uses f from the detector point and the transform of the central-difference
    derivative (psi_plus - psi_minus) / (2 dx_sep):

        psi~(+k) = (hbar/2m) (k f - i df),  psi~(-k) = (hbar/2m) (k f + i df)

    The k = 0 bin is flagged and zeroed like the discrete variant.
    """
    _require_unwound(record)
    f0 = temporal_spectrum(record.psi0, record.dt, zero_pad_factor)
    deriv_series = (record.psi_plus - record.psi_minus) / (2 * record.tap.dx_sep)
    df = temporal_spectrum(deriv_series, record.dt, zero_pad_factor)
    k_pos = omega_to_k(f0.omegas, units)
    pref = units.hbar / (2 * units.mass)
    amp_r = pref * (k_pos * f0.values - 1j * df.values)
    amp_l = pref * (k_pos * f0.values + 1j * df.values)
    flags = np.zeros(len(k_pos), dtype=bool)
    flags[0] = True
    amp_r[0] = 0.0
    amp_l[0] = 0.0
    return _signed_spectrum(k_pos, amp_r, amp_l, flags, "bqvd_continuous")


def qvd_spectrum(record, zero_pad_factor=4, units=ATOMIC):
    """One-point coherent spectrum on k >= 0.

    amplitude(k) = (hbar k / m) f0, the scaling that reproduces the exact
    psi~(k) when the signal is purely rightward. Counter-propagating content
    folds onto the same positive k and interferes.
    """
    _require_unwound(record)
    f0 = temporal_spectrum(record.psi0, record.dt, zero_pad_factor)
    k_pos = omega_to_k(f0.omegas, units)
    amplitude = units.hbar * k_pos / units.mass * f0.values
    return Spectrum(
        k=k_pos,
        density=np.abs(amplitude) ** 2,
        amplitude=amplitude,
        label="qvd",
    )


def cvd_spectrum(record, bin_width=0.005, rho_floor=1e-12, units=ATOMIC):
    """Flux-weighted histogram of the instantaneous fluid momentum.

    Each sample with rho above the floor contributes weight |j| dt to the bin
    containing k_inst = m j / (hbar rho); bins are centered on integer
    multiples of bin_width and density is weight per unit k. No
    renormalization: total mass equals the transported flux.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    ok = record.rho > rho_floor
    n_skipped = int(np.count_nonzero(~ok))
    j = record.current[ok]
    k_inst = units.mass * j / (units.hbar * record.rho[ok])
    weights = np.abs(j) * record.dt
    total_mass = float(weights.sum())

    if len(k_inst) == 0:
        centers = np.array([0.0])
        density = np.array([0.0])
    else:
        idx = np.rint(k_inst / bin_width).astype(int)
        i_min, i_max = int(idx.min()), int(idx.max())
        acc = np.bincount(idx - i_min, weights=weights, minlength=i_max - i_min + 1)
        centers = bin_width * np.arange(i_min, i_max + 1)
        density = acc / bin_width
    return CvdSpectrum(
        k=centers,
        density=density,
        amplitude=None,
        label="cvd",
        flagged=None,
        bin_width=bin_width,
        n_skipped=n_skipped,
        total_mass=total_mass,
    )


def cvd_on_grid(cvd, k_values):
    """Nearest-bin lookup of a binned spectrum on an arbitrary k grid."""
    idx = np.rint(np.asarray(k_values, dtype=float) / cvd.bin_width).astype(int)
    i_min = int(np.rint(cvd.k[0] / cvd.bin_width))
    out = np.zeros(len(idx))
    inside = (idx >= i_min) & (idx < i_min + len(cvd.k))
    out[inside] = cvd.density[idx[inside] - i_min]
    return out
