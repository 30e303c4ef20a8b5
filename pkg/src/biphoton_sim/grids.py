"""Paired frequency/time grids, the waveform container, and CSV output."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

CSV_FLOAT_FMT = "{:.9g}"


class GridError(ValueError):
    """Spectral grid cannot support the requested evaluation (Nyquist/span)."""

    def __init__(self, message: str, suggested_n_omega: int | None = None):
        super().__init__(message)
        self.suggested_n_omega = suggested_n_omega


class WaveformKind(Enum):
    FULL_INTEGRAL = "full_integral"
    UNIFORM_SPECTRAL = "uniform_spectral"
    ANALYTIC_RECT = "analytic_rect"
    ANALYTIC_EXP = "analytic_exp"


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform detuning grid, symmetric about zero, length a power of two.

    ``omega[i] = (i - n/2) * d_omega``, so every positive frequency has its
    mirror on the grid (the single extreme negative point excepted).  The
    conjugate time grid has step ``d_tau = 2 pi / (n * d_omega)`` and is built
    the same way, which fixes the transform convention of
    :func:`spectrum_to_waveform`.
    """

    omega: np.ndarray = field(repr=False)
    d_omega: float

    def __post_init__(self) -> None:
        n = len(self.omega)
        if n < 2 or n & (n - 1) != 0:
            raise ValueError(f"grid length must be a power of two, got {n}")
        steps = np.diff(self.omega)
        if not np.allclose(steps, self.d_omega, rtol=1e-9, atol=0.0):
            raise ValueError("grid spacing is not uniform")
        if self.omega[n // 2] != 0.0:
            raise ValueError("grid must contain omega = 0 at index n/2")

    @classmethod
    def from_numerics(cls, n_omega: int, tau_span: float) -> "SpectralGrid":
        """Build the grid whose conjugate time axis spans ``tau_span`` seconds."""
        if n_omega < 2 or n_omega & (n_omega - 1) != 0:
            raise ValueError(f"n_omega must be a power of two, got {n_omega}")
        if tau_span <= 0:
            raise ValueError(f"tau_span must be > 0, got {tau_span}")
        d_omega = 2.0 * math.pi / tau_span
        idx = np.arange(n_omega) - n_omega // 2
        return cls(omega=idx * d_omega, d_omega=d_omega)

    @property
    def n(self) -> int:
        return len(self.omega)

    @property
    def d_tau(self) -> float:
        return 2.0 * math.pi / (self.n * self.d_omega)

    @property
    def omega_max(self) -> float:
        """Largest represented |omega| (half the grid span)."""
        return (self.n // 2) * self.d_omega

    @property
    def tau(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.d_tau


@dataclass(frozen=True)
class Waveform:
    """Relative-time joint amplitude psi(tau) with its provenance tag."""

    tau: np.ndarray = field(repr=False)
    amplitude: np.ndarray = field(repr=False)
    kind: WaveformKind

    def __post_init__(self) -> None:
        if len(self.tau) != len(self.amplitude):
            raise ValueError("tau and amplitude must have equal length")
        steps = np.diff(self.tau)
        if len(steps) and not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ValueError("tau grid is not uniform")

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2


def spectrum_to_waveform(grid: SpectralGrid, spectrum: np.ndarray,
                         kind: WaveformKind) -> Waveform:
    """Transform a detuning-domain amplitude to the relative-time domain.

    Realizes psi(tau) = (1/2pi) * integral d omega e^{-i omega tau} S(omega)
    on the paired grids:

        psi[m] = (d_omega / 2pi) * sum_n S[n] exp(-i omega[n] tau[m])

    computed as a forward FFT with fftshift bookkeeping.  With this
    normalization Parseval's identity holds exactly:
    sum |psi|^2 d_tau = (1/2pi) sum |S|^2 d_omega.
    """
    if len(spectrum) != grid.n:
        raise ValueError("spectrum length does not match grid")
    shifted = np.fft.ifftshift(spectrum)
    psi = np.fft.fftshift(np.fft.fft(shifted)) * (grid.d_omega / (2.0 * math.pi))
    return Waveform(tau=grid.tau, amplitude=psi, kind=kind)


def waveform_csv_rows(wave: Waveform, cc_counts: np.ndarray):
    """Yield the serialization rows: tau_ns, re_psi, im_psi, abs2_psi, cc_counts."""
    if len(cc_counts) != len(wave.tau):
        raise ValueError("cc_counts length does not match waveform")
    yield "tau_ns,re_psi,im_psi,abs2_psi,cc_counts"
    f = CSV_FLOAT_FMT.format
    for t, a, cc in zip(wave.tau, wave.amplitude, cc_counts):
        yield ",".join((f(t * 1e9), f(a.real), f(a.imag), f(abs(a) ** 2), f(cc)))
