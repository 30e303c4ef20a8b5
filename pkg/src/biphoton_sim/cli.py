"""Command-line interface: figure-style datasets as CSV plus JSON sidecars.

Subcommands
-----------
eit-spectrum   transparency spectrum with resonance diagnostics
waveform       joint-amplitude waveform (full, uniform, or analytic engine)
beat           two-photon beating trace behind the interferometer
scan           coherence time versus coupling power
selftest       oracle-equivalence and invariant suite

Exit codes: 0 success, 2 configuration problem, 3 I/O problem,
4 numerics (grid cannot support the request).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import coherence_scan, extract_coherence_time
from .biphoton import (
    coincidence_counts,
    kappa,
    psi_analytic_exp,
    psi_analytic_rect,
    psi_full,
    psi_uniform_spectrum,
)
from .config import ConfigError, RunConfig, load_config
from .dispersion import (
    eit_absorption_loss,
    eit_transmission,
    group_delay_estimate,
)
from .grids import CSV_FLOAT_FMT, GridError, WaveformKind, spectrum_to_waveform, waveform_csv_rows
from .interference import (
    beat_correlation,
    extract_beat_frequency,
    hom_residual_factor,
    visibility_ideal,
    visibility_with_noise,
)
from .params import GenerationMode
from .selftest import run_selftest

_FMT = CSV_FLOAT_FMT.format


def _resolve_threads(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("BIPHOTON_SIM_THREADS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(
                f"BIPHOTON_SIM_THREADS must be an integer, got {env!r}") from None
    return 0


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _sidecar_path(out_path: str) -> Path:
    return Path(out_path).with_suffix(".json")


def _write_sidecar(out_path: str, payload: dict) -> None:
    _write_text(str(_sidecar_path(out_path)),
                json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _coherence_payload(report) -> dict:
    return {
        "e_inverse_width_ns": report.e_inverse_width * 1e9,
        "exp_tau_ns": None if report.exp_tau is None else report.exp_tau * 1e9,
        "fit_rmse": report.fit_rmse,
        "method": report.method.value,
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_eit_spectrum(config_path: str, out_path: str) -> int:
    cfg = load_config(config_path)
    oc = cfg.coupling.peak_rabi
    span = 4.0 * oc if oc > 0 else 2.0 * math.pi * 30e6
    omega = np.linspace(-span, span, 2001)
    trans = eit_transmission(omega, oc, cfg.medium)
    lines = ["omega_mhz,transmission"]
    for w, t in zip(omega, trans):
        lines.append(f"{_FMT(w / (2e6 * math.pi))},{_FMT(t)}")
    _write_text(out_path, "\n".join(lines) + "\n")

    alpha_l = eit_absorption_loss(cfg.medium, oc)
    t0 = float(eit_transmission(0.0, oc, cfg.medium))
    _write_sidecar(out_path, {
        "alpha_l": alpha_l,
        "resonance_transmission": t0,
        # both reported: T(0) = exp(-2 alpha L) here, while exp(-alpha L) is
        # the field-amplitude factor often quoted alongside
        "exp_minus_alpha_l": math.exp(-alpha_l),
        "group_delay_ns": group_delay_estimate(cfg.medium, oc) * 1e9 if oc > 0 else None,
    })
    return 0


def _build_waveform(cfg: RunConfig, engine: str, threads: int):
    grid = cfg.numerics.grid()
    if engine == "full":
        return psi_full(grid, cfg.numerics.z_panels, cfg.medium, cfg.pump,
                        cfg.coupling, cfg.mode, scale=cfg.kappa_scale,
                        threads=threads)
    if engine == "uniform":
        spec = psi_uniform_spectrum(grid, cfg.medium, cfg.pump, cfg.coupling,
                                    cfg.mode, scale=cfg.kappa_scale)
        return spectrum_to_waveform(grid, spec, WaveformKind.UNIFORM_SPECTRAL)
    if engine == "analytic":
        if cfg.mode is GenerationMode.DEGENERATE:
            k0 = kappa(0.0, 0.0, cfg.medium, cfg.pump, cfg.coupling, cfg.mode,
                       scale=cfg.kappa_scale).value
            return psi_analytic_rect(grid, cfg.medium, cfg.coupling, cfg.mode,
                                     kappa0=k0, pump=cfg.pump)
        alpha = eit_absorption_loss(cfg.medium, cfg.coupling.peak_rabi) / cfg.medium.length
        vg = cfg.medium.length / group_delay_estimate(cfg.medium, cfg.coupling.peak_rabi)
        return psi_analytic_exp(alpha, vg, cfg.medium, grid)
    raise ConfigError(f"unknown engine {engine!r}; use full, uniform, or analytic")


def cmd_waveform(config_path: str, out_path: str, engine: str = "full",
                 threads: int = 0) -> int:
    cfg = load_config(config_path)
    wave = _build_waveform(cfg, engine, threads)
    counts = coincidence_counts(wave, cfg.detection)
    _write_text(out_path, "\n".join(waveform_csv_rows(wave, counts)) + "\n")

    report = extract_coherence_time(counts, wave.tau,
                                    floor=cfg.detection.accidental_floor)
    oc = cfg.coupling.peak_rabi
    payload = _coherence_payload(report)
    payload.update({
        "engine": engine,
        "alpha_l": eit_absorption_loss(cfg.medium, oc),
        "group_delay_ns": group_delay_estimate(cfg.medium, oc) * 1e9,
        "coherence_formula_ns": 2.0 * group_delay_estimate(cfg.medium, oc) * 1e9,
    })
    _write_sidecar(out_path, payload)
    return 0


def cmd_beat(config_path: str, out_path: str, threads: int = 0) -> int:
    cfg = load_config(config_path)
    if cfg.interferometer is None:
        raise ConfigError("missing required section for the beat command",
                          "interferometer")
    itf = cfg.interferometer
    grid = cfg.numerics.grid()
    wave = psi_full(grid, cfg.numerics.z_panels, cfg.medium, cfg.pump,
                    cfg.coupling, cfg.mode, scale=cfg.kappa_scale, threads=threads)
    envelope = wave.intensity
    g34 = beat_correlation(wave, itf)

    lines = ["tau_ns,g34,envelope"]
    for t, g, e in zip(wave.tau, g34, envelope):
        lines.append(f"{_FMT(t * 1e9)},{_FMT(g)},{_FMT(e)}")
    _write_text(out_path, "\n".join(lines) + "\n")

    beat_hz = extract_beat_frequency(wave.tau, g34, envelope, itf.reflectance)
    v0 = visibility_ideal(itf.reflectance)
    payload = {
        "beat_frequency_mhz": beat_hz / 1e6,
        "fft_bin_mhz": 1.0 / (len(wave.tau) * (wave.tau[1] - wave.tau[0])) / 1e6,
        "v0": v0,
        "hom_residual_factor": hom_residual_factor(itf.reflectance),
    }
    if itf.noise_counts > 0:
        scale = (cfg.detection.duty_cycle * cfg.detection.joint_efficiency
                 * cfg.detection.bin_width * cfg.detection.collection_time)
        cc = scale * g34
        payload["visibility_with_noise"] = visibility_with_noise(
            itf.reflectance, itf.noise_counts, float(cc.max()), float(cc.min()))
    _write_sidecar(out_path, payload)
    return 0


def cmd_scan(config_path: str, out_path: str, powers_mw: list[float] | None = None,
             include_full: bool = False, threads: int = 0) -> int:
    cfg = load_config(config_path)
    if powers_mw is not None:
        powers = [p * 1e-3 for p in powers_mw]
    elif cfg.scan_powers is not None:
        powers = list(cfg.scan_powers)
    else:
        raise ConfigError("no coupling powers given (use --powers or a scan section)")
    if len(powers) < 2:
        raise ConfigError(f"need at least 2 power points, got {len(powers)}")

    points = coherence_scan(powers, cfg.medium, cfg.pump, cfg.coupling, cfg.mode,
                            grid=cfg.numerics.grid() if include_full else None,
                            z_panels=cfg.numerics.z_panels,
                            include_full=include_full,
                            scale=cfg.kappa_scale, threads=threads)
    lines = ["x_gamma13sq_over_omegac_sq,t_coh_formula_ns,t_coh_full_ns"]
    for p in points:
        full = "nan" if p.t_coh_full is None else _FMT(p.t_coh_full * 1e9)
        lines.append(f"{_FMT(p.x)},{_FMT(p.t_coh_formula * 1e9)},{full}")
    _write_text(out_path, "\n".join(lines) + "\n")

    _write_sidecar(out_path, {
        "n_points": len(points),
        "t_coh_formula_first_us": points[0].t_coh_formula * 1e6,
        "t_coh_formula_last_us": points[-1].t_coh_formula * 1e6,
        "slope_s": 4.0 * cfg.medium.od / cfg.medium.gamma13,
    })
    return 0


def cmd_selftest() -> int:
    return run_selftest()


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biphoton-sim",
        description="Biphoton waveform, spectrum, interference, and scan datasets")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True,
                       help="configuration file path or preset name")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads, 0 = auto "
                            "(BIPHOTON_SIM_THREADS as fallback)")

    common(sub.add_parser("eit-spectrum", help="transparency spectrum"))
    p_wave = sub.add_parser("waveform", help="joint-amplitude waveform")
    common(p_wave)
    p_wave.add_argument("--engine", choices=("full", "uniform", "analytic"),
                        default="full")
    common(sub.add_parser("beat", help="two-photon beating trace"))
    p_scan = sub.add_parser("scan", help="coherence time vs coupling power")
    common(p_scan)
    p_scan.add_argument("--powers", type=str, default=None,
                        help="comma-separated coupling powers in mW")
    p_scan.add_argument("--full", action="store_true",
                        help="also extract widths from full waveforms")
    sub.add_parser("selftest", help="run the invariant suite")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            return cmd_selftest()
        threads = _resolve_threads(args.threads)
        if args.command == "eit-spectrum":
            return cmd_eit_spectrum(args.config, args.out)
        if args.command == "waveform":
            return cmd_waveform(args.config, args.out, engine=args.engine,
                                threads=threads)
        if args.command == "beat":
            return cmd_beat(args.config, args.out, threads=threads)
        if args.command == "scan":
            powers = None
            if args.powers is not None:
                try:
                    powers = [float(tok) for tok in args.powers.split(",") if tok]
                except ValueError:
                    raise ConfigError(
                        f"--powers must be comma-separated numbers, got {args.powers!r}"
                    ) from None
            return cmd_scan(args.config, args.out, powers_mw=powers,
                            include_full=args.full, threads=threads)
        raise AssertionError(f"unhandled command {args.command}")
    except GridError as exc:
        print(f"numerics error: {exc}", file=sys.stderr)
        return 4
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
