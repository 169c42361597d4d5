"""Run configuration: flat key = value sections, with optional Hz units.

A run file looks like::

    [device]
    units = kappa        ; "kappa" (dimensionless, rates in units of kappa)
    omega_m = 20         ; or "hz" (values in Hz, suffixes Hz/kHz/MHz/GHz allowed)
    kappa = 1
    kappa_in = 1
    delta0 = -20

    [pump]
    g_r = 5              ; direct linearized override ...
    g_l = 0
    ; amplitude_right = 1.0   ; ... or classical drive amplitudes (exclusive)

    [task]
    name = spectrum
    engine = toy

    [grid]
    delta = -8:8:401     ; start:stop:count, or a comma-separated list

In Hz mode every rate (device, pump couplings, grids, noise band) is a plain
frequency in Hz; all values are scaled by the waveguide coupling so the
internal system has kappa = 1.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .model import TWO_PI, DeviceParams, PumpDrive

__all__ = ["RunConfig", "parse_config", "TASKS"]

TASKS = ("pump", "spectrum", "phase", "bandwidth", "contour", "noise",
         "squeezing", "classify", "verify")

_UNIT_MULTIPLIERS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_SUFFIX_RE = re.compile(r"^(?P<num>.*?)(?P<unit>[A-Za-z]+)$")


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration for one CLI task."""

    device: DeviceParams
    task: str
    pump_drive: PumpDrive | None = None
    detuning_mode: str = "shifted"
    direct_g_r: complex | None = None
    direct_g_l: complex = 0j
    direct_delta: float | None = None
    options: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)
    unit_mode: str = "kappa"
    out_path: str | None = None
    out_format: str = "csv"


def _split_unit(text: str) -> tuple[complex, str | None]:
    """Split '7.1 MHz' / '1+2j' / '1e3' into a complex value and a suffix."""
    compact = text.strip().replace(" ", "")
    try:
        return complex(compact), None
    except ValueError:
        pass
    match = _SUFFIX_RE.match(compact)
    if match is not None:
        try:
            return complex(match.group("num")), match.group("unit")
        except ValueError:
            pass
    raise ConfigError(f"cannot parse value {text!r}")


def _parse_value(text: str, unit_mode: str, scale_hz: float) -> complex:
    """Parse one scalar; Hz mode accepts unit suffixes and normalizes by kappa."""
    value, unit = _split_unit(text)
    if unit_mode == "kappa":
        if unit is not None:
            raise ConfigError(f"unit suffix {unit!r} is only allowed in hz unit mode")
        return value
    mult = _UNIT_MULTIPLIERS.get((unit or "hz").lower())
    if mult is None:
        raise ConfigError(f"unknown unit suffix {unit!r}")
    return value * mult / scale_hz


def _parse_real(text: str, unit_mode: str, scale_hz: float, key: str) -> float:
    value = _parse_value(text, unit_mode, scale_hz)
    if value.imag != 0:
        raise ConfigError(f"{key} must be real, got {text!r}")
    return value.real


def _parse_grid(text: str, unit_mode: str, scale_hz: float, key: str) -> np.ndarray:
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid {key} must be start:stop:count, got {text!r}")
        start = _parse_real(parts[0], unit_mode, scale_hz, key)
        stop = _parse_real(parts[1], unit_mode, scale_hz, key)
        try:
            count = int(parts[2])
        except ValueError:
            raise ConfigError(f"grid {key} count must be an integer") from None
        if count < 0:
            raise ConfigError(f"grid {key} count must be >= 0")
        return np.linspace(start, stop, count)
    return np.array([_parse_real(p, unit_mode, scale_hz, key)
                     for p in text.split(",") if p.strip()])


def _kappa_scale_hz(section) -> tuple[float, bool]:
    """Physical kappa in Hz used for normalization; True if kappa_t was used."""
    has_kappa = "kappa" in section
    has_kappa_t = "kappa_t" in section
    if has_kappa and has_kappa_t:
        raise ConfigError("give either kappa or kappa_t, not both")
    key = "kappa" if has_kappa else "kappa_t" if has_kappa_t else None
    if key is None:
        raise ConfigError("hz unit mode requires kappa (or kappa_t)")
    value, unit = _split_unit(section[key])
    mult = _UNIT_MULTIPLIERS.get((unit or "hz").lower())
    if mult is None:
        raise ConfigError(f"unknown unit suffix in {key} = {section[key]!r}")
    if value.imag != 0 or value.real <= 0:
        raise ConfigError(f"{key} must be a positive real rate in hz mode")
    return value.real * mult, not has_kappa


def parse_config(path) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file: {exc}") from None

    if "device" not in parser:
        raise ConfigError("missing [device] section")
    dev = parser["device"]
    unit_mode = dev.get("units")
    if unit_mode is None:
        raise ConfigError("[device] must declare units = kappa | hz")
    unit_mode = unit_mode.strip().lower()
    if unit_mode not in ("kappa", "hz"):
        raise ConfigError(f"units must be 'kappa' or 'hz', got {unit_mode!r}")

    scale_hz = 1.0
    used_kappa_t = False
    if unit_mode == "hz":
        scale_hz, used_kappa_t = _kappa_scale_hz(dev)
    elif "kappa" in dev and "kappa_t" in dev:
        raise ConfigError("give either kappa or kappa_t, not both")

    def dev_real(key, default=None):
        if key not in dev:
            return default
        return _parse_real(dev[key], unit_mode, scale_hz, key)

    if unit_mode == "hz":
        kappa = 1.0  # rates are normalized by kappa (or kappa_t) itself
        kappa_from_t = used_kappa_t
    elif "kappa_t" in dev:
        kappa = dev_real("kappa_t")
        kappa_from_t = True
    else:
        kappa = dev_real("kappa", 1.0)
        kappa_from_t = False

    omega_m = dev_real("omega_m")
    if omega_m is None:
        raise ConfigError("[device] omega_m is required")
    try:
        device = DeviceParams(
            omega_m=omega_m,
            kappa=kappa,
            kappa_prime=0.0 if kappa_from_t else dev_real("kappa_prime", 0.0),
            kappa_in=0.0 if kappa_from_t else dev_real("kappa_in", 0.0),
            gamma_m=dev_real("gamma_m", 0.0),
            g0=dev_real("g0", 0.0),
            beta=_parse_value(dev["beta"], unit_mode, scale_hz) if "beta" in dev else 0j,
            delta0=dev_real("delta0", 0.0),
            omega_c=dev_real("omega_c", None),
            rate_scale=TWO_PI * scale_hz if unit_mode == "hz" else 1.0,
        )
    except ValueError as exc:
        raise ConfigError(f"invalid device parameters: {exc}") from None

    pump_drive = None
    detuning_mode = "shifted"
    direct_g_r = None
    direct_g_l = 0j
    direct_delta = None
    if "pump" in parser:
        pmp = parser["pump"]
        has_drive = "amplitude_right" in pmp or "amplitude_left" in pmp
        has_direct = "g_r" in pmp or "g_l" in pmp
        if has_drive and has_direct:
            raise ConfigError(
                "[pump] drive amplitudes and direct g_r/g_l override are "
                "mutually exclusive"
            )
        detuning_mode = pmp.get("detuning", "shifted").strip().lower()
        if detuning_mode not in ("shifted", "bare"):
            raise ConfigError("detuning must be 'shifted' or 'bare'")
        if has_drive:
            pump_drive = PumpDrive(
                amplitude_right=_parse_value(pmp.get("amplitude_right", "0"),
                                             unit_mode, scale_hz),
                amplitude_left=_parse_value(pmp.get("amplitude_left", "0"),
                                            unit_mode, scale_hz),
            )
        if has_direct:
            direct_g_r = _parse_value(pmp.get("g_r", "0"), unit_mode, scale_hz)
            direct_g_l = _parse_value(pmp.get("g_l", "0"), unit_mode, scale_hz)
        if "delta" in pmp:
            direct_delta = _parse_real(pmp["delta"], unit_mode, scale_hz, "delta")

    options = {}
    task_name = None
    if "task" in parser:
        tsk = parser["task"]
        task_name = tsk.get("name")
        for key in tsk:
            if key != "name":
                options[key] = tsk[key].strip()
    if task_name is not None:
        task_name = task_name.strip().lower()
        if task_name not in TASKS:
            raise ConfigError(f"unknown task {task_name!r}; expected one of {TASKS}")

    grids = {}
    if "grid" in parser:
        for key in parser["grid"]:
            grids[key] = _parse_grid(parser["grid"][key], unit_mode, scale_hz, key)

    out_path = None
    out_format = "csv"
    if "output" in parser:
        out_path = parser["output"].get("path")
        out_format = parser["output"].get("format", "csv").strip().lower()
        if out_format not in ("csv", "json"):
            raise ConfigError(f"output format must be csv or json, got {out_format!r}")

    return RunConfig(
        device=device,
        task=task_name or "",
        pump_drive=pump_drive,
        detuning_mode=detuning_mode,
        direct_g_r=direct_g_r,
        direct_g_l=direct_g_l,
        direct_delta=direct_delta,
        options=options,
        grids=grids,
        unit_mode=unit_mode,
        out_path=out_path,
        out_format=out_format,
    )
