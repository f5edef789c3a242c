"""Config-file parsing for the command-line front end.

Grammar: one `key = value` pair per line; blank lines and lines starting
with `#` are ignored; values are numbers, comma-separated number lists, or
bare words.  Unknown keys are hard errors, and every error in a file is
reported, not just the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import TeleporterParams, lambda_from_db

PARAM_KEYS = {
    "gamma_i", "gamma_s", "gamma_A", "gamma_B",
    "lambda", "squeezing_db", "eta", "omega_rabi",
}
SWEEP_KEYS = {
    "quantity", "sweep_param", "sweep_values",
    "sweep_start", "sweep_stop", "sweep_num", "sweep_scale",
    "omega_min", "omega_max", "n_omega",
    "tau_max", "n_tau",
    "target_g2",
    "mc_duration", "mc_dt", "mc_n_traj", "mc_warmup",
    "mc_input", "mc_alpha", "mc_bypass",
}
KNOWN_KEYS = PARAM_KEYS | SWEEP_KEYS

QUANTITIES = ("spectrum", "g2", "g2zero", "design", "mc")

# parameter names (or derived ratios) accepted as sweep targets
SWEEPABLE = {
    "gamma_s", "gamma_A", "gamma_B", "lambda", "squeezing_db",
    "eta", "omega_rabi", "gamma_B_over_gamma_s",
}

# consistency tolerance when both lambda and squeezing_db are given
LAMBDA_DB_TOL = 1e-6


class ConfigError(ValueError):
    """Carries the full list of problems found in a config file."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class SweepSpec:
    """A parameter sweep over one quantity, with output grids."""

    quantity: str = "g2zero"
    param: str | None = None
    values: np.ndarray | None = None
    omega_grid: np.ndarray = field(
        default_factory=lambda: np.linspace(-15.0, 15.0, 301)
    )
    tau_grid: np.ndarray = field(
        default_factory=lambda: np.linspace(0.0, 10.0, 401)
    )
    target_g2: float | None = None
    mc_duration: float = 200.0
    mc_dt: float | None = None
    mc_n_traj: int = 16
    mc_warmup: float | None = None
    mc_input: str = "vacuum"
    mc_alpha: float = 0.0
    mc_bypass: bool = False


def _parse_number(key, raw, errors):
    try:
        return float(raw)
    except ValueError:
        errors.append(f"{key}: not a number: {raw!r}")
        return None


def parse_config(text: str) -> tuple[TeleporterParams, SweepSpec]:
    """Parse config text into validated parameters and a sweep spec.

    Raises ConfigError listing every problem found.
    """
    errors: list[str] = []
    kv: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            errors.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KNOWN_KEYS:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        if key in kv:
            errors.append(f"line {lineno}: duplicate key {key!r}")
            continue
        kv[key] = value

    # physical parameters
    numbers: dict[str, float] = {}
    for key in ("gamma_i", "gamma_s", "gamma_A", "gamma_B", "lambda",
                "squeezing_db", "eta", "omega_rabi"):
        if key in kv:
            v = _parse_number(key, kv[key], errors)
            if v is not None:
                numbers[key] = v

    for key in ("gamma_i", "gamma_s", "gamma_A", "gamma_B"):
        if key in numbers and numbers[key] <= 0:
            errors.append(f"{key}: must be strictly positive, got {numbers[key]:g}")

    lam = None
    if "squeezing_db" in numbers:
        db = numbers["squeezing_db"]
        if db < 0:
            errors.append(f"squeezing_db: must be >= 0, got {db:g}")
        else:
            lam = lambda_from_db(db)
            if "lambda" in numbers and abs(numbers["lambda"] - lam) > LAMBDA_DB_TOL:
                errors.append(
                    f"lambda = {numbers['lambda']:g} inconsistent with "
                    f"squeezing_db = {db:g} (implies lambda = {lam:.8g})"
                )
    elif "lambda" in numbers:
        lam = numbers["lambda"]
        if not 0.0 <= lam < 1.0:
            errors.append(f"lambda: must be in [0, 1), got {lam:g}")
            lam = None

    # sweep spec
    sweep = SweepSpec()
    if "quantity" in kv:
        if kv["quantity"] not in QUANTITIES:
            errors.append(f"quantity: must be one of {QUANTITIES}, got {kv['quantity']!r}")
        else:
            sweep.quantity = kv["quantity"]
    if "sweep_param" in kv:
        if kv["sweep_param"] not in SWEEPABLE:
            errors.append(
                f"sweep_param: unknown parameter {kv['sweep_param']!r}; "
                f"choose from {sorted(SWEEPABLE)}"
            )
        else:
            sweep.param = kv["sweep_param"]
    if "sweep_values" in kv:
        try:
            sweep.values = np.array([float(v) for v in kv["sweep_values"].split(",")])
        except ValueError:
            errors.append(f"sweep_values: not a comma-separated number list: {kv['sweep_values']!r}")
    elif {"sweep_start", "sweep_stop", "sweep_num"} <= kv.keys():
        a = _parse_number("sweep_start", kv["sweep_start"], errors)
        b = _parse_number("sweep_stop", kv["sweep_stop"], errors)
        n = _parse_number("sweep_num", kv["sweep_num"], errors)
        scale = kv.get("sweep_scale", "linear")
        if scale not in ("linear", "log"):
            errors.append(f"sweep_scale: must be linear or log, got {scale!r}")
        elif None not in (a, b, n):
            if scale == "log":
                if a <= 0 or b <= 0:
                    errors.append("sweep_start/stop must be positive for log scale")
                else:
                    sweep.values = np.logspace(math.log10(a), math.log10(b), int(n))
            else:
                sweep.values = np.linspace(a, b, int(n))
    if sweep.param is not None and sweep.values is None:
        errors.append("sweep_param given without sweep_values or sweep_start/stop/num")

    if {"omega_min", "omega_max", "n_omega"} <= kv.keys():
        a = _parse_number("omega_min", kv["omega_min"], errors)
        b = _parse_number("omega_max", kv["omega_max"], errors)
        n = _parse_number("n_omega", kv["n_omega"], errors)
        if None not in (a, b, n) and b > a and n >= 2:
            sweep.omega_grid = np.linspace(a, b, int(n))
        else:
            errors.append("invalid omega grid (need omega_max > omega_min, n_omega >= 2)")
    if {"tau_max", "n_tau"} <= kv.keys():
        a = _parse_number("tau_max", kv["tau_max"], errors)
        n = _parse_number("n_tau", kv["n_tau"], errors)
        if None not in (a, n) and a > 0 and n >= 2:
            sweep.tau_grid = np.linspace(0.0, a, int(n))
        else:
            errors.append("invalid tau grid (need tau_max > 0, n_tau >= 2)")
    if "target_g2" in kv:
        v = _parse_number("target_g2", kv["target_g2"], errors)
        if v is not None:
            if not 0.0 < v < 2.0:
                errors.append(f"target_g2: must be in (0, 2), got {v:g}")
            else:
                sweep.target_g2 = v
    for key, attr, cast in (
        ("mc_duration", "mc_duration", float),
        ("mc_dt", "mc_dt", float),
        ("mc_n_traj", "mc_n_traj", int),
        ("mc_warmup", "mc_warmup", float),
        ("mc_alpha", "mc_alpha", float),
    ):
        if key in kv:
            v = _parse_number(key, kv[key], errors)
            if v is not None:
                setattr(sweep, attr, cast(v))
    if "mc_input" in kv:
        if kv["mc_input"] not in ("vacuum", "coherent", "ou"):
            errors.append(f"mc_input: must be vacuum, coherent, or ou, got {kv['mc_input']!r}")
        else:
            sweep.mc_input = kv["mc_input"]
    if "mc_bypass" in kv:
        if kv["mc_bypass"] not in ("true", "false", "0", "1"):
            errors.append(f"mc_bypass: must be true/false, got {kv['mc_bypass']!r}")
        else:
            sweep.mc_bypass = kv["mc_bypass"] in ("true", "1")

    if errors:
        raise ConfigError(errors)

    params = TeleporterParams(
        gamma_i=numbers.get("gamma_i", 1.0),
        gamma_s=numbers.get("gamma_s", 1.0),
        gamma_A=numbers.get("gamma_A", 50.0),
        gamma_B=numbers.get("gamma_B", 20.0),
        lam=0.0 if lam is None else lam,
        eta=numbers.get("eta", 1.0),
        omega_rabi=numbers.get("omega_rabi", 0.0),
    )
    return params, sweep
