"""Biphoton joint-amplitude simulation for backward four-wave mixing in EIT media.

Computes two-photon joint amplitudes psi(tau), transparency spectra,
coincidence-count waveforms, and two-photon interference patterns for
counter-propagating photon pairs generated in a cold-atom ensemble, in both
the nondegenerate (loss-shortened) and degenerate (symmetry-protected)
configurations.
"""

__version__ = "0.1.0"

from .analysis import (
    CoherenceMethod,
    CoherenceReport,
    InsufficientSignalError,
    ScanPoint,
    bandwidth_from_width,
    cauchy_schwarz_factor,
    coherence_scan,
    extract_coherence_time,
    normalized_cross_correlation,
)
from .biphoton import (
    NonlinearCoupling,
    chi3,
    coincidence_counts,
    kappa,
    psi_analytic_exp,
    psi_analytic_rect,
    psi_full,
    psi_uniform_spectrum,
)
from .config import (
    ConfigError,
    NumericsConfig,
    RunConfig,
    dump_config,
    load_config,
    load_preset,
    parse_config,
)
from .dispersion import (
    PhotonLeg,
    PTModeResult,
    PTRegime,
    chi_linear,
    eit_absorption_loss,
    eit_transmission,
    gamma12_for_absorption,
    group_delay_estimate,
    group_delay_numeric,
    pt_mode_analysis,
    wavenumber,
)
from .grids import GridError, SpectralGrid, Waveform, WaveformKind, spectrum_to_waveform
from .interference import (
    InterferometerConfig,
    beat_correlation,
    bs_output_amplitude,
    extract_beat_frequency,
    hom_residual_factor,
    visibility_ideal,
    visibility_with_noise,
)
from .params import (
    BeamField,
    BeamRole,
    DetectionConfig,
    GenerationMode,
    MediumConfig,
    beam_profile,
    density_prefactor,
    rabi_scale,
)
from .reference import psi_reference

__all__ = [
    "BeamField", "BeamRole", "CoherenceMethod", "CoherenceReport", "ConfigError",
    "DetectionConfig", "GenerationMode", "GridError", "InsufficientSignalError",
    "InterferometerConfig", "MediumConfig", "NonlinearCoupling", "NumericsConfig",
    "PTModeResult", "PTRegime", "PhotonLeg", "RunConfig", "ScanPoint",
    "SpectralGrid", "Waveform", "WaveformKind",
    "bandwidth_from_width", "beam_profile", "beat_correlation",
    "bs_output_amplitude", "cauchy_schwarz_factor", "chi3", "chi_linear",
    "coherence_scan", "coincidence_counts", "density_prefactor", "dump_config",
    "eit_absorption_loss", "eit_transmission", "extract_beat_frequency",
    "extract_coherence_time", "gamma12_for_absorption", "group_delay_estimate",
    "group_delay_numeric", "hom_residual_factor", "kappa", "load_config",
    "load_preset", "normalized_cross_correlation", "parse_config",
    "psi_analytic_exp", "psi_analytic_rect", "psi_full", "psi_reference",
    "psi_uniform_spectrum", "pt_mode_analysis", "rabi_scale",
    "spectrum_to_waveform", "visibility_ideal", "visibility_with_noise",
    "wavenumber",
]
