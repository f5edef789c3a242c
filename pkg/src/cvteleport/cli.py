"""Command-line front end: sweeps, CSV persistence, MC runs, comparisons.

Exit codes: 0 ok, 2 config error, 3 comparison z-score failure, 4 I/O error.

CSV format: `#`-prefixed header lines carry key=value metadata (code
version, seed, full parameters, units), then a column-name row and data
rows.  Sweeps write one file per swept value plus manifest.csv mapping
files to values.  Frequencies and rates are in units of gamma_i.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, analytic, mollow
from .config import ConfigError, SweepSpec, parse_config
from .mc.engine import RunSettings, run_ensemble
from .params import TeleporterParams, lambda_from_db

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ZSCORE = 3
EXIT_IO = 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _apply_sweep_value(params: TeleporterParams, name: str, value: float) -> TeleporterParams:
    if name == "gamma_B_over_gamma_s":
        return params.replace(gamma_s=params.gamma_B / value)
    if name == "lambda":
        return params.replace(lam=value)
    if name == "squeezing_db":
        return params.replace(lam=lambda_from_db(value))
    return params.replace(**{name: value})


def _header(params: TeleporterParams, seed, extra=None) -> list[str]:
    lines = [
        f"# cvteleport {__version__}",
        "# units: rates and frequencies in gamma_i, delays in 1/gamma_i",
        f"# seed = {seed}",
    ]
    for name in ("gamma_i", "gamma_s", "gamma_A", "gamma_B", "eta", "omega_rabi"):
        lines.append(f"# {name} = {getattr(params, name):.17g}")
    lines.append(f"# lambda = {params.lam:.17g}")
    for key, val in (extra or {}).items():
        lines.append(f"# {key} = {val}")
    return lines


def _write_csv(path, header_lines, columns, rows):
    tmp_fd, tmp_path = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(tmp_fd, "w") as fh:
            for line in header_lines:
                fh.write(line + "\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(f"{v:.17g}" if isinstance(v, float) else str(v) for v in row) + "\n")
        os.replace(tmp_path, path)
    except OSError:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _sweep_points(params: TeleporterParams, sweep: SweepSpec):
    if sweep.param is None:
        return [(None, params)]
    return [(float(v), _apply_sweep_value(params, sweep.param, float(v)))
            for v in sweep.values]


def _run_spectrum(params, sweep, out_dir, seed, threads):
    points = _sweep_points(params, sweep)

    def compute(item):
        value, p = item
        spec = analytic.output_spectrum(p, sweep.omega_grid)
        return value, p, spec

    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        results = list(pool.map(compute, points))

    manifest_rows = []
    for i, (value, p, spec) in enumerate(results):
        name = f"spectrum_{i:03d}.csv"
        extra = {"quantity": "spectrum", "columns": "omega,s_out"}
        if value is not None:
            extra[f"sweep:{sweep.param}"] = f"{value:.17g}"
        _write_csv(os.path.join(out_dir, name), _header(p, seed, extra),
                   ["omega", "s_out"],
                   zip(spec.omega_grid.tolist(), spec.density.tolist()))
        manifest_rows.append((name, sweep.param or "", "" if value is None else float(value)))
    _write_manifest(out_dir, params, seed, "spectrum", manifest_rows)


def _run_g2(params, sweep, out_dir, seed, threads):
    points = _sweep_points(params, sweep)

    def compute(item):
        value, p = item
        return value, p, analytic.g2_out(p, sweep.tau_grid)

    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        results = list(pool.map(compute, points))

    manifest_rows = []
    for i, (value, p, series) in enumerate(results):
        name = f"g2_{i:03d}.csv"
        extra = {"quantity": "g2", "columns": "tau,g2"}
        if value is not None:
            extra[f"sweep:{sweep.param}"] = f"{value:.17g}"
        _write_csv(os.path.join(out_dir, name), _header(p, seed, extra),
                   ["tau", "g2"],
                   zip(series.tau_grid.tolist(), np.real(series.values).tolist()))
        manifest_rows.append((name, sweep.param or "", "" if value is None else float(value)))
    _write_manifest(out_dir, params, seed, "g2", manifest_rows)


def _write_manifest(out_dir, params, seed, quantity, rows):
    _write_csv(os.path.join(out_dir, "manifest.csv"),
               _header(params, seed, {"quantity": quantity}),
               ["file", "sweep_param", "sweep_value"], rows)


def _run_design(params, sweep, out_dir, seed):
    if sweep.target_g2 is None:
        raise CliError("design requires target_g2 in the config", EXIT_CONFIG)
    if params.omega_rabi <= 0:
        raise CliError("design requires omega_rabi > 0", EXIT_CONFIG)
    res = analytic.design(sweep.target_g2, params.omega_rabi,
                          params.gamma_i, params.gamma_B, params.eta)
    _write_csv(os.path.join(out_dir, "design.csv"),
               _header(params, seed, {"quantity": "design"}),
               ["target_g2_zero", "required_db", "required_lambda",
                "max_filter_ratio", "feasible"],
               [(res.target_g2_zero, res.required_db, res.required_lambda,
                 res.max_filter_ratio, int(res.feasible))])
    print(f"required squeezing: {res.required_db:.2f} dB "
          f"(lambda = {res.required_lambda:.6f}); "
          f"filter bound gamma_B/gamma_s < {res.max_filter_ratio:.4g}")


def _settings_from_sweep(sweep: SweepSpec, seed, threads) -> RunSettings:
    return RunSettings(
        duration=sweep.mc_duration, n_traj=sweep.mc_n_traj, seed=seed,
        dt=sweep.mc_dt, warmup=sweep.mc_warmup, input_mode=sweep.mc_input,
        alpha=sweep.mc_alpha, bypass=sweep.mc_bypass, n_workers=threads,
        ou_sigma=1.0 if sweep.mc_input == "ou" else 0.0,
    )


def _run_simulate(params, sweep, out_dir, seed, threads):
    settings = _settings_from_sweep(sweep, seed, threads)
    est = run_ensemble(params, settings)
    meta = {"quantity": "mc", "n_traj": settings.n_traj,
            "duration": f"{settings.duration:.17g}",
            "input": settings.input_mode, "workers": threads}
    flux, flux_se = est.flux
    nbar, nbar_se = est.nbar_d
    _write_csv(os.path.join(out_dir, "mc_scalars.csv"),
               _header(params, seed, meta), ["name", "value", "se"],
               [("flux_out", float(flux), float(flux_se)),
                ("nbar_filter", float(nbar), float(nbar_se))])
    psd, psd_se = est.out_psd
    _write_csv(os.path.join(out_dir, "mc_psd.csv"),
               _header(params, seed, {**meta, "columns": "omega,psd,se"}),
               ["omega", "psd", "se"],
               zip(est.freqs.tolist(), psd.tolist(), psd_se.tolist()))
    cov, cov_se = est.covariance
    _write_csv(os.path.join(out_dir, "mc_cov.csv"),
               _header(params, seed, {**meta, "columns": "tau,cov,se"}),
               ["tau", "cov", "se"],
               zip(est.lags.tolist(), cov.tolist(), cov_se.tolist()))


def _run_sweep(params, sweep, out_dir, seed, threads):
    if sweep.quantity == "spectrum":
        _run_spectrum(params, sweep, out_dir, seed, threads)
    elif sweep.quantity == "g2":
        _run_g2(params, sweep, out_dir, seed, threads)
    elif sweep.quantity == "design":
        _run_design(params, sweep, out_dir, seed)
    elif sweep.quantity == "mc":
        _run_simulate(params, sweep, out_dir, seed, threads)
    elif sweep.quantity == "g2zero":
        points = _sweep_points(params, sweep)
        rows = [("" if v is None else float(v), analytic.g2_out_zero(p))
                for v, p in points]
        _write_csv(os.path.join(out_dir, "g2zero.csv"),
                   _header(params, seed, {"quantity": "g2zero",
                                          "sweep_param": sweep.param or ""}),
                   ["sweep_value", "g2_zero"], rows)
    else:
        raise CliError(f"unknown quantity {sweep.quantity!r}", EXIT_CONFIG)


def _run_compare(params, sweep, out_dir, seed, threads, quantity):
    """Tabulate MC against analytic values; exit 3 when any |z| > 4."""
    if quantity == "g2":
        raise CliError(
            "refusing to compare g2 for the two-state input: the classical "
            "quadrature simulation covers Gaussian statistics only and "
            "cannot represent antibunched photon correlations; use the "
            "analytic module for g2",
            EXIT_CONFIG,
        )
    settings = _settings_from_sweep(sweep, seed, threads)
    if settings.input_mode != "vacuum" or settings.bypass:
        raise CliError("compare requires the input source off", EXIT_CONFIG)
    est = run_ensemble(params, settings)
    rows = []
    if quantity in ("flux", "all"):
        mc, se = est.flux
        ref = analytic.background_flux(params)
        rows.append(("background_flux", float(mc), ref, float(se)))
    if quantity in ("opo", "all"):
        i0 = int(np.argmin(np.abs(est.freqs)))
        r = (1.0 - params.lam) / (1.0 + params.lam)
        mc, se = est.opo_sq_psd
        rows.append(("opo_squeezed_0", (mc[i0] + 0.5) / 0.5, r**2, se[i0] / 0.5))
        mc, se = est.opo_anti_psd
        rows.append(("opo_antisqueezed_0", (mc[i0] + 0.5) / 0.5, r**-2, se[i0] / 0.5))
    if quantity in ("cov", "all"):
        mc, se = est.covariance
        f_s = analytic.background_flux(params)
        ref_vals = f_s * analytic.background_correlation(est.lags, params)
        for j in range(0, est.lags.size, max(est.lags.size // 5, 1)):
            rows.append((f"cov_tau_{est.lags[j]:.3g}", float(mc[j]),
                         float(ref_vals[j]), float(se[j])))

    worst = 0.0
    table = []
    for name, mc, ref, se in rows:
        z = (mc - ref) / se if se > 0 else np.inf
        worst = max(worst, abs(z))
        table.append((name, mc, ref, se, z))
        print(f"{name:>20s}  mc={mc: .6g}  analytic={ref: .6g}  "
              f"se={se:.2g}  z={z:+.2f}")
    _write_csv(os.path.join(out_dir, "compare.csv"),
               _header(params, seed, {"quantity": f"compare:{quantity}"}),
               ["name", "mc", "analytic", "se", "z"], table)
    if worst > 4.0:
        raise CliError(f"comparison failed: max |z| = {worst:.2f} > 4", EXIT_ZSCORE)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cvteleport",
        description="Broadband CV teleportation: spectra, photon "
                    "correlations, design solver, and Monte Carlo checks.",
    )
    parser.add_argument("command", choices=["spectrum", "g2", "design",
                                            "simulate", "sweep", "compare"])
    parser.add_argument("--config", required=True, help="config file path")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--compare-quantity", default="all",
                        choices=["all", "flux", "opo", "cov", "g2"])
    args = parser.parse_args(argv)

    try:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(f"cannot read config: {exc}", EXIT_IO)
        try:
            params, sweep = parse_config(text)
        except ConfigError as exc:
            for err in exc.errors:
                print(f"config error: {err}", file=sys.stderr)
            return EXIT_CONFIG
        try:
            os.makedirs(args.out, exist_ok=True)
        except OSError as exc:
            raise CliError(f"cannot create output directory: {exc}", EXIT_IO)

        try:
            if args.command == "spectrum":
                _run_spectrum(params, sweep, args.out, args.seed, args.threads)
            elif args.command == "g2":
                _run_g2(params, sweep, args.out, args.seed, args.threads)
            elif args.command == "design":
                _run_design(params, sweep, args.out, args.seed)
            elif args.command == "simulate":
                _run_simulate(params, sweep, args.out, args.seed, args.threads)
            elif args.command == "sweep":
                _run_sweep(params, sweep, args.out, args.seed, args.threads)
            elif args.command == "compare":
                _run_compare(params, sweep, args.out, args.seed, args.threads,
                             args.compare_quantity)
        except OSError as exc:
            raise CliError(f"I/O failure: {exc}", EXIT_IO)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_CONFIG)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
