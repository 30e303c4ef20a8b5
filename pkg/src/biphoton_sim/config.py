"""Run configuration: JSON schema, unit conversion, and shipped presets.

Configuration files use the conventions of the source data sheets:
frequencies and rates in linear MHz (a value f means the angular rate
2 pi f 1e6 rad/s), wavelengths in nm, macroscopic lengths in mm, powers in
mW, times in ns except the wall-clock collection time, which is in seconds.
Internally everything is converted to SI plus angular frequencies.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

from .grids import SpectralGrid
from .interference import InterferometerConfig
from .params import BeamField, BeamRole, DetectionConfig, GenerationMode, MediumConfig

MHZ = 2.0 * math.pi * 1e6  # linear MHz -> rad/s

PRESET_NAMES = ("fig2c", "fig2d", "fig2e", "fig2f",
                "fig3c", "fig3d", "fig3e", "fig3f", "fig4b", "fig5")


class ConfigError(ValueError):
    """Malformed or invalid run configuration."""

    def __init__(self, message: str, field: str | None = None):
        if field:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field


@dataclass(frozen=True)
class NumericsConfig:
    """Spectral/positional discretization: grid size, z panels, time span."""

    n_omega: int = 16384
    z_panels: int = 512
    tau_span: float = 80e-6  # s

    def __post_init__(self) -> None:
        n = self.n_omega
        if n < 2 ** 10 or n > 2 ** 20 or n & (n - 1) != 0:
            raise ValueError(
                f"n_omega must be a power of two in [2^10, 2^20], got {n}")
        if self.z_panels < 64 or self.z_panels % 2:
            raise ValueError(
                f"z_panels must be an even count >= 64, got {self.z_panels}")
        if self.tau_span <= 0:
            raise ValueError(f"tau_span must be > 0, got {self.tau_span}")

    def grid(self) -> SpectralGrid:
        return SpectralGrid.from_numerics(self.n_omega, self.tau_span)


@dataclass(frozen=True)
class RunConfig:
    """Complete simulation input: scheme, medium, beams, detection, numerics."""

    mode: GenerationMode
    medium: MediumConfig
    pump: BeamField
    coupling: BeamField
    detection: DetectionConfig
    numerics: NumericsConfig
    interferometer: InterferometerConfig | None = None
    scan_powers: tuple[float, ...] | None = None  # W
    kappa_scale: float = 1.0


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError("missing required field", f"{where}.{key}")
    return section[key]


def _number(section: dict, key: str, where: str) -> float:
    val = _require(section, key, where)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"expected a number, got {val!r}", f"{where}.{key}")
    return float(val)


def _build(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("top level must be an object")

    mode_raw = _require(data, "mode", "config")
    try:
        mode = GenerationMode(mode_raw)
    except ValueError:
        raise ConfigError(
            f"must be 'degenerate' or 'nondegenerate', got {mode_raw!r}",
            "config.mode") from None

    med = _require(data, "medium", "config")
    try:
        medium = MediumConfig(
            od=_number(med, "od", "medium"),
            length=_number(med, "length_mm", "medium") * 1e-3,
            gamma12=_number(med, "gamma12_mhz", "medium") * MHZ,
            gamma13=_number(med, "gamma13_mhz", "medium") * MHZ,
            gamma14=_number(med, "gamma14_mhz", "medium") * MHZ,
            theta=math.radians(_number(med, "theta_deg", "medium")),
            lambda0=_number(med, "lambda0_nm", "medium") * 1e-9,
        )
    except ValueError as exc:
        raise ConfigError(str(exc), "medium") from None

    def beam(section_name: str, role: BeamRole) -> BeamField:
        sec = _require(data, section_name, "config")
        try:
            return BeamField(
                wavelength=_number(sec, "wavelength_nm", section_name) * 1e-9,
                power=_number(sec, "power_mw", section_name) * 1e-3,
                waist=_number(sec, "waist_mm", section_name) * 1e-3,
                detuning=_number(sec, "detuning_mhz", section_name) * MHZ,
                peak_rabi=_number(sec, "peak_rabi_mhz", section_name) * MHZ,
                role=role,
            )
        except ValueError as exc:
            raise ConfigError(str(exc), section_name) from None

    pump = beam("pump", BeamRole.PUMP)
    coupling = beam("coupling", BeamRole.COUPLING)

    det = _require(data, "detection", "config")
    try:
        detection = DetectionConfig(
            duty_cycle=_number(det, "duty_cycle", "detection"),
            joint_efficiency=_number(det, "joint_efficiency", "detection"),
            bin_width=_number(det, "bin_width_ns", "detection") * 1e-9,
            collection_time=_number(det, "collection_time_s", "detection"),
            accidental_floor=_number(det, "accidental_floor", "detection"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), "detection") from None

    num = data.get("numerics", {})
    try:
        numerics = NumericsConfig(
            n_omega=int(num.get("n_omega", 16384)),
            z_panels=int(num.get("z_panels", 512)),
            tau_span=float(num.get("tau_span_ns", 80000.0)) * 1e-9,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), "numerics") from None

    interferometer = None
    if "interferometer" in data:
        itf = data["interferometer"]
        try:
            interferometer = InterferometerConfig(
                reflectance=_number(itf, "reflectance", "interferometer"),
                shift_delta=_number(itf, "shift_mhz", "interferometer") * 1e6,
                noise_counts=float(itf.get("noise_counts", 0.0)),
            )
        except ValueError as exc:
            raise ConfigError(str(exc), "interferometer") from None

    scan_powers = None
    if "scan" in data:
        powers = data["scan"].get("powers_mw")
        if powers is not None:
            if not isinstance(powers, list) or len(powers) < 1:
                raise ConfigError("powers_mw must be a non-empty list", "scan")
            scan_powers = tuple(float(p) * 1e-3 for p in powers)

    kappa_scale = float(data.get("kappa_scale", 1.0))
    if kappa_scale <= 0:
        raise ConfigError("must be > 0", "config.kappa_scale")

    return RunConfig(mode=mode, medium=medium, pump=pump, coupling=coupling,
                     detection=detection, numerics=numerics,
                     interferometer=interferometer, scan_powers=scan_powers,
                     kappa_scale=kappa_scale)


def parse_config(text: str) -> RunConfig:
    """Parse a JSON configuration document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return _build(data)


def load_config(path: str) -> RunConfig:
    """Load a configuration from a file path or a shipped preset name."""
    if path in PRESET_NAMES:
        return parse_config(_preset_text(path))
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_config(cfg: RunConfig) -> dict:
    """Serialize a RunConfig back to its JSON object form (unit round trip)."""
    data = {
        "mode": cfg.mode.value,
        "medium": {
            "od": cfg.medium.od,
            "length_mm": cfg.medium.length * 1e3,
            "gamma12_mhz": cfg.medium.gamma12 / MHZ,
            "gamma13_mhz": cfg.medium.gamma13 / MHZ,
            "gamma14_mhz": cfg.medium.gamma14 / MHZ,
            "theta_deg": math.degrees(cfg.medium.theta),
            "lambda0_nm": cfg.medium.lambda0 * 1e9,
        },
        "pump": _dump_beam(cfg.pump),
        "coupling": _dump_beam(cfg.coupling),
        "detection": {
            "duty_cycle": cfg.detection.duty_cycle,
            "joint_efficiency": cfg.detection.joint_efficiency,
            "bin_width_ns": cfg.detection.bin_width * 1e9,
            "collection_time_s": cfg.detection.collection_time,
            "accidental_floor": cfg.detection.accidental_floor,
        },
        "numerics": {
            "n_omega": cfg.numerics.n_omega,
            "z_panels": cfg.numerics.z_panels,
            "tau_span_ns": cfg.numerics.tau_span * 1e9,
        },
        "kappa_scale": cfg.kappa_scale,
    }
    if cfg.interferometer is not None:
        data["interferometer"] = {
            "reflectance": cfg.interferometer.reflectance,
            "shift_mhz": cfg.interferometer.shift_delta / 1e6,
            "noise_counts": cfg.interferometer.noise_counts,
        }
    if cfg.scan_powers is not None:
        data["scan"] = {"powers_mw": [p * 1e3 for p in cfg.scan_powers]}
    return data


def _dump_beam(beam: BeamField) -> dict:
    return {
        "wavelength_nm": beam.wavelength * 1e9,
        "power_mw": beam.power * 1e3,
        "waist_mm": beam.waist * 1e3,
        "detuning_mhz": beam.detuning / MHZ,
        "peak_rabi_mhz": beam.peak_rabi / MHZ,
    }


def _preset_text(name: str) -> str:
    return (resources.files("biphoton_sim") / "presets" / f"{name}.json").read_text(
        encoding="utf-8")


def load_preset(name: str) -> RunConfig:
    """Load one of the shipped configurations by name."""
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r}; available: {PRESET_NAMES}")
    return parse_config(_preset_text(name))
