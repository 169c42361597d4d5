"""Command-line entry point.

    omring <task> --config <file> [--out <path>] [--format csv|json] [--threads N]

Tasks: pump, spectrum, phase, bandwidth, contour, noise, squeezing, classify,
verify.  Results are CSV (default) or JSON tables with ``#`` metadata header
lines; identical configs produce byte-identical output.  Exit codes: 0 ok,
2 configuration error, 3 unstable model, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .analysis import bandwidth_contour, classify_regime, isolation_bandwidth, \
    pump_imbalance_curve
from .config import TASKS, RunConfig, parse_config
from .errors import ConfigError, ConvergenceError, DegenerateParameterError, \
    DivergenceError, NumericalError, OmringError, UnstableModelError
from .model import LinearizedModel, linearize, steady_state_pump
from .noise import noise_power
from .oracle import time_domain_responses
from .solver import CHANNELS, scattering_matrix, transmission_spectrum
from .squeezing import appendix_coefficients, squeezing_ratio
from .sweep import SweepTable
from .toy import toy_phase_shift, toy_transmission

SIGN_CONVENTION = ("inputs enter as -sqrt(2 kappa) f_in; "
                   "outputs are f_out = f_in + sqrt(2 kappa) a")
MECH_CONVENTION = "mechanical field damped at gamma_m/2"


def _base_metadata(cfg: RunConfig, task: str, threshold: float = 0.5) -> dict:
    dev = cfg.device
    meta = {
        "tool": f"omring {__version__}",
        "task": task,
        "sign_convention": SIGN_CONVENTION,
        "mechanical_damping": MECH_CONVENTION,
        "bandwidth_threshold": repr(float(threshold)),
        "unit_mode": cfg.unit_mode,
        "omega_m": repr(dev.omega_m),
        "kappa": repr(dev.kappa),
        "kappa_prime": repr(dev.kappa_prime),
        "kappa_in": repr(dev.kappa_in),
        "gamma_m": repr(dev.gamma_m),
        "beta": repr(complex(dev.beta)),
        "delta0": repr(dev.delta0),
    }
    if cfg.unit_mode == "hz":
        meta["rate_scale_rad_per_s"] = repr(dev.rate_scale)
    return meta


def _build_model(cfg: RunConfig) -> LinearizedModel:
    """Linearized model from either a direct override or the pump steady state."""
    dev = cfg.device
    if cfg.direct_g_r is not None:
        return LinearizedModel(
            g_r=cfg.direct_g_r,
            g_l=cfg.direct_g_l,
            delta=cfg.direct_delta if cfg.direct_delta is not None else dev.delta0,
            beta=complex(dev.beta),
            omega_m=dev.omega_m,
            kappa=dev.kappa,
            kappa_prime=dev.kappa_prime,
            kappa_in=dev.kappa_in,
            gamma_m=dev.gamma_m,
        )
    if cfg.pump_drive is not None:
        pump = steady_state_pump(dev, cfg.pump_drive, detuning=cfg.detuning_mode)
        return linearize(dev, pump)
    raise ConfigError("task needs a [pump] section (drive amplitudes or g_r override)")


def _toy_args(cfg: RunConfig, model: LinearizedModel):
    return model.kappa, model.kappa_in, model.gamma_m, abs(model.g_r)


def _require_grid(cfg: RunConfig, key: str) -> np.ndarray:
    if key not in cfg.grids:
        raise ConfigError(f"task requires a [grid] {key} entry")
    return cfg.grids[key]


def _opt_float(cfg: RunConfig, key: str, default: float) -> float:
    if key not in cfg.options:
        return default
    try:
        return float(cfg.options[key])
    except ValueError:
        raise ConfigError(f"option {key} must be a number") from None


def _task_pump(cfg: RunConfig, threads: int) -> SweepTable:
    if "delta" in cfg.grids:
        table = pump_imbalance_curve(cfg.device, cfg.grids["delta"])
    else:
        if cfg.pump_drive is None:
            raise ConfigError("pump task needs drive amplitudes (or a delta grid)")
        pump = steady_state_pump(cfg.device, cfg.pump_drive,
                                 detuning=cfg.detuning_mode)
        table = SweepTable(
            columns=("alpha_r_re", "alpha_r_im", "alpha_l_re", "alpha_l_im",
                     "b_static", "delta"),
            rows=[(pump.alpha_r.real, pump.alpha_r.imag, pump.alpha_l.real,
                   pump.alpha_l.imag, pump.b_static, pump.delta)],
            metadata={"detuning_mode": cfg.detuning_mode},
        )
    return table


def _task_spectrum(cfg: RunConfig, threads: int) -> SweepTable:
    model = _build_model(cfg)
    engine = cfg.options.get("engine", "toy").lower()
    if engine == "toy":
        deltas = _require_grid(cfg, "delta")
        tt = toy_transmission(*_toy_args(cfg, model), deltas)
        t_r = np.atleast_1d(tt.t_r)
        t_l = np.atleast_1d(tt.t_l)
        rows = [
            (float(d), abs(tr) ** 2, abs(tl) ** 2, tr.real, tr.imag, tl.real, tl.imag)
            for d, tr, tl in zip(np.atleast_1d(deltas), t_r, t_l)
        ]
        return SweepTable(
            columns=("delta", "abs_tR2", "abs_tL2", "tR_re", "tR_im", "tL_re", "tL_im"),
            rows=rows,
            metadata={"engine": "toy", "g_r_mag": repr(abs(model.g_r))},
        )
    if engine == "full":
        if "omega" in cfg.grids:
            omegas = cfg.grids["omega"]
        else:
            omegas = _require_grid(cfg, "delta") - model.delta
        unwrap = cfg.options.get("unwrap", "false").lower() == "true"
        table = transmission_spectrum(
            model, omegas,
            in_channel=cfg.options.get("in_channel", "wg1-R"),
            out_channel=cfg.options.get("out_channel", "wg1-R"),
            unwrap=unwrap, threads=threads,
        )
        table.metadata["engine"] = "full"
        return table
    raise ConfigError(f"spectrum engine must be toy or full, got {engine!r}")


def _task_phase(cfg: RunConfig, threads: int) -> SweepTable:
    model = _build_model(cfg)
    deltas = np.atleast_1d(_require_grid(cfg, "delta"))
    unwrap = cfg.options.get("unwrap", "false").lower() == "true"
    theta_r, theta_l, dtheta = toy_phase_shift(*_toy_args(cfg, model), deltas,
                                               unwrap=unwrap)
    rows = [(float(d), float(tr), float(tl), float(dt))
            for d, tr, tl, dt in zip(deltas, np.atleast_1d(theta_r),
                                     np.atleast_1d(theta_l), np.atleast_1d(dtheta))]
    return SweepTable(
        columns=("delta", "theta_r", "theta_l", "delta_theta"),
        rows=rows,
        metadata={"engine": "toy", "phase_unwrapped": str(unwrap).lower()},
    )


def _task_bandwidth(cfg: RunConfig, threads: int) -> SweepTable:
    model = _build_model(cfg)
    threshold = _opt_float(cfg, "threshold", 0.5)
    res = isolation_bandwidth(model, threshold)
    return SweepTable(
        columns=("width", "delta_lo", "delta_hi", "threshold"),
        rows=[(res.width, res.interval[0], res.interval[1], res.threshold)],
        metadata={"diagnostic": res.diagnostic or "ok"},
    )


def _task_contour(cfg: RunConfig, threads: int) -> SweepTable:
    model = _build_model(cfg)
    threshold = _opt_float(cfg, "threshold", 0.5)
    return bandwidth_contour(model, _require_grid(cfg, "beta"),
                             _require_grid(cfg, "g_r"), threshold,
                             threads=threads)


def _task_noise(cfg: RunConfig, threads: int) -> SweepTable:
    model = _build_model(cfg)
    n_th = _opt_float(cfg, "n_th", 0.0)
    band_text = cfg.options.get("band")
    if band_text is None:
        raise ConfigError("noise task requires band = lo, hi in [task]")
    parts = [p for p in band_text.split(",") if p.strip()]
    if len(parts) != 2:
        raise ConfigError("band must be two comma-separated frequencies")
    from .config import _parse_real  # shares the unit handling

    scale_hz = cfg.device.rate_scale / (2.0 * np.pi)
    band = tuple(_parse_real(p, cfg.unit_mode, scale_hz, "band") for p in parts)
    report = noise_power(model, n_th, band, omega_c=cfg.device.omega_c,
                         rate_scale=cfg.device.rate_scale)
    columns = ["band_lo", "band_hi", "n_th", "flux_exact", "flux_approx",
               "power_estimate", "n_noise_per_pulse"]
    row = [report.band[0], report.band[1], report.n_th, report.flux_exact,
           report.flux_approx, report.power_estimate, report.n_noise_per_pulse]
    if report.power_watts is not None:
        columns.append("power_watts")
        row.append(report.power_watts)
    return SweepTable(columns=tuple(columns), rows=[tuple(row)],
                      metadata={"density": "right-moving waveguide-1 output"})


def _task_squeezing(cfg: RunConfig, threads: int) -> SweepTable:
    model = _build_model(cfg)
    if "omega" in cfg.grids:
        omegas = np.atleast_1d(cfg.grids["omega"])
    else:
        omegas = np.atleast_1d(_require_grid(cfg, "delta")) + model.omega_m
    rows = []
    for w in omegas:
        pair = appendix_coefficients(model.kappa, model.kappa_in, model.g_r,
                                     model.omega_m, float(w))
        rows.append((float(w), float(w) - model.omega_m, pair.alpha.real,
                     pair.alpha.imag, pair.eta.real, pair.eta.imag,
                     squeezing_ratio(pair)))
    return SweepTable(
        columns=("omega", "delta", "alpha_re", "alpha_im", "eta_re", "eta_im",
                 "ratio"),
        rows=rows,
        metadata={"configuration": "single waveguide, beta=0, pump on red sideband"},
    )


def _task_classify(cfg: RunConfig, threads: int) -> SweepTable:
    model = _build_model(cfg)
    labels = classify_regime(cfg.device, model)
    print(f"classification: {labels.coupling_regime} coupling, "
          f"{labels.port_regime} port, sideband {labels.sideband}",
          file=sys.stderr)
    return SweepTable(
        columns=("coupling_regime", "port_regime", "sideband"),
        rows=[(labels.coupling_regime, labels.port_regime, labels.sideband)],
        metadata={"g_r_mag": repr(abs(model.g_r)), "kappa_t": repr(cfg.device.kappa_t)},
    )


def _task_verify(cfg: RunConfig, threads: int) -> SweepTable:
    model = _build_model(cfg)
    tolerance = _opt_float(cfg, "tolerance", 1e-6)
    if "delta" in cfg.grids:
        deltas = np.atleast_1d(cfg.grids["delta"])
    else:
        count = int(_opt_float(cfg, "samples", 8))
        deltas = np.linspace(-0.8, 0.8, count) * max(2.0 * model.kappa_t,
                                                     abs(model.g_r))
    probes = [(ch, float(d), 1.0) for d in deltas for ch in ("wg1-R", "wg1-L")]
    ratios = time_domain_responses(model, probes)
    rows = []
    worst = 0.0
    for (ch, d, _a), ratio in zip(probes, ratios):
        s = scattering_matrix(model, d - model.delta)
        errs = []
        for out in CHANNELS:
            expected = s.optical(out, ch)
            diff = abs(ratio[out] - expected)
            # relative where the element is significant, absolute for zeros
            errs.append(diff / abs(expected) if abs(expected) > 1e-6 else diff)
        rel = max(errs)
        worst = max(worst, rel)
        rows.append((ch, float(d), rel))
    table = SweepTable(
        columns=("channel", "delta", "rel_error"),
        rows=rows,
        metadata={"tolerance": repr(tolerance), "worst": repr(worst)},
    )
    if worst > tolerance:
        raise NumericalError(
            f"time-domain oracle disagrees with the frequency-domain solver: "
            f"worst relative error {worst:.3g} > {tolerance:g}",
            achieved_tolerance=worst,
        )
    print(f"verify: {len(rows)} probes, worst relative error {worst:.3g} "
          f"(tolerance {tolerance:g})", file=sys.stderr)
    return table


_TASK_RUNNERS = {
    "pump": _task_pump,
    "spectrum": _task_spectrum,
    "phase": _task_phase,
    "bandwidth": _task_bandwidth,
    "contour": _task_contour,
    "noise": _task_noise,
    "squeezing": _task_squeezing,
    "classify": _task_classify,
    "verify": _task_verify,
}


def run(cfg: RunConfig, task: str, out_path=None, out_format=None,
        threads: int = 1) -> int:
    """Execute one task against a parsed configuration and emit its table."""
    if task not in TASKS:
        raise ConfigError(f"unknown task {task!r}")
    if cfg.task and cfg.task != task:
        raise ConfigError(
            f"config file declares task {cfg.task!r} but {task!r} was requested"
        )
    threshold = _opt_float(cfg, "threshold", 0.5)
    table = _TASK_RUNNERS[task](cfg, threads)
    metadata = _base_metadata(cfg, task, threshold)
    metadata.update(table.metadata)
    table = SweepTable(columns=table.columns, rows=table.rows, metadata=metadata)

    path = out_path or cfg.out_path
    fmt = out_format or cfg.out_format
    if path:
        table.write(path, fmt)
    else:
        sys.stdout.write(table.to_csv() if fmt == "csv" else table.to_json())
    return 0


def _error_line(code: int, exc: Exception) -> str:
    message = " ".join(str(exc).split())
    return f"omring: code={code} error={message}"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="omring",
        description="Non-reciprocal ring-resonator optomechanics calculator",
    )
    parser.add_argument("task", choices=TASKS)
    parser.add_argument("--config", required=True, help="run configuration file")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")
    parser.add_argument("--format", default=None, choices=("csv", "json"))
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for sweeps (default 1; "
                        "capped by OMRING_THREADS)")
    args = parser.parse_args(argv)

    threads = args.threads if args.threads is not None else 1
    cap = os.environ.get("OMRING_THREADS")
    if cap is not None:
        try:
            threads = max(1, min(threads, int(cap)))
        except ValueError:
            print(_error_line(2, ConfigError("OMRING_THREADS must be an integer")),
                  file=sys.stderr)
            return 2

    try:
        cfg = parse_config(args.config)
        return run(cfg, args.task, out_path=args.out, out_format=args.format,
                   threads=threads)
    except ConfigError as exc:
        print(_error_line(2, exc), file=sys.stderr)
        return 2
    except UnstableModelError as exc:
        print(_error_line(3, exc), file=sys.stderr)
        return 3
    except (NumericalError, ConvergenceError, DegenerateParameterError,
            DivergenceError) as exc:
        print(_error_line(4, exc), file=sys.stderr)
        return 4
    except OmringError as exc:
        print(_error_line(4, exc), file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
