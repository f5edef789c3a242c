"""Acceptance suite: one criterion per test, one verdict line each.

Run with `pytest -v -s tests/test_acceptance.py` to see the verdict lines;
each test also fails in the usual way when its criterion is not met.
Monte Carlo criteria use fixed seeds; their estimators are validated as
unbiased elsewhere, so the z-score thresholds here are statistical only.
"""

import numpy as np
import pytest

from cvteleport import analytic, mollow
from cvteleport.cli import main
from cvteleport.mc.engine import RunSettings, run_ensemble
from cvteleport.params import TeleporterParams, lambda_from_db


def _verdict(name: str, ok: bool, detail: str) -> bool:
    print(f"{name}: {'PASS' if ok else 'FAIL'} — {detail}")
    return ok


def _params(**kw):
    base = dict(gamma_s=1.0, gamma_A=50.0, gamma_B=20.0)
    base.update(kw)
    return TeleporterParams(**base)


def test_A1_identity_suite():
    rng = np.random.default_rng(2024)
    worst_flux = worst_zero = worst_limit = 0.0
    for _ in range(200):
        lam = rng.uniform(0.0, 0.99)
        x = 10.0 ** rng.uniform(-5.0, 2.0)
        om = rng.uniform(0.5, 20.0)
        p = _params(gamma_s=20.0 / x, lam=lam, omega_rabi=om)

        # (i) the correlation-function prefactor against the occupation form
        gB, gs = p.gamma_B, p.gamma_s
        gp, gm = p.gamma_plus, p.gamma_minus
        num = 0.5 * (gB**2 - gm**2) - (2.0 * lam / (1.0 + lam)) * gB * gs
        f_prefactor = gB * num / (gB**2 - gp**2)
        f_bracket = analytic.background_flux(p)
        worst_flux = max(worst_flux, abs(f_prefactor / f_bracket - 1.0))

        # (ii) zero-delay intensity correlation: full series vs closed form
        series = analytic.g2_out(p, np.array([0.0, 1.0]))
        closed = analytic.g2_out_zero(p)
        worst_zero = max(worst_zero, abs(series.values[0] / closed - 1.0))

        # (iii) narrow-filter limit of the flux ratio
        if lam <= 0.9:
            q = p.replace(gamma_s=20.0 / 1e-6)
            exact = analytic.flux_ratio(q, "exact").ratio
            lim = analytic.flux_ratio(q, "limit").ratio
            worst_limit = max(worst_limit, abs(exact / lim - 1.0))

    ok = _verdict(
        "A1",
        worst_flux < 1e-12 and worst_zero < 1e-10 and worst_limit < 1e-3,
        f"flux identity {worst_flux:.2e} (<1e-12), zero-delay "
        f"{worst_zero:.2e} (<1e-10), narrow-filter limit {worst_limit:.2e} (<1e-3)",
    )
    assert ok


def test_A2_deep_squeezing_antibunching_number():
    p = _params(gamma_s=20.0 / 1e-4, lam=lambda_from_db(46.0), omega_rabi=6.0)
    value = analytic.g2_out_zero(p)
    # frozen high-precision value of this configuration: 3.178312947802908e-3
    ok = _verdict("A2", abs(value - 0.003) <= 0.15 * 0.003,
                  f"g2_out(0) = {value:.6f} vs 0.003 +- 15%")
    assert ok
    assert value == pytest.approx(3.178312947802908e-3, rel=1e-12)


def test_A3_thermal_limit():
    p = _params(gamma_s=2.0, omega_rabi=0.5, eta=0.01)
    value = analytic.g2_out_zero(p)
    ok = _verdict("A3", abs(value - 2.0) <= 0.02,
                  f"g2_out(0) = {value:.6f} vs 2 +- 1%")
    assert ok


def test_A4_design_closure():
    db = analytic.required_squeezing_db(0.003, omega_rabi=6.0, gamma_B=20.0)
    # feed the result back: limit flux ratio at the returned squeezing,
    # then the zero-delay closed form
    lam = lambda_from_db(db)
    p = _params(gamma_s=20.0 / 1e-7, lam=lam, omega_rabi=6.0)
    ratio = analytic.flux_ratio(p, "limit").ratio
    achieved = 2.0 * (1.0 - (1.0 + ratio) ** -2)
    ok_db = abs(db - 46.0) <= 1.0
    ok_closure = achieved <= 0.003 * 1.1
    ok = _verdict(
        "A4", ok_db and ok_closure,
        f"required dB = {db:.3f} (target 46 +- 1: {'ok' if ok_db else 'MISS'}), "
        f"closure g2(0) = {achieved:.6f} (<= 0.0033: {'ok' if ok_closure else 'MISS'})",
    )
    assert ok


def test_A5_input_source_oracle():
    om = 6.0
    p = _params(omega_rabi=om)
    taus = np.linspace(0.0, 10.0, 2001)
    series = mollow.g2_in(p, taus)
    w = np.sqrt(om**2 - 0.25)
    closed = 1.0 - np.exp(-1.5 * taus) * (np.cos(w * taus) + (1.5 / w) * np.sin(w * taus))
    linf_g2 = float(np.max(np.abs(series.values - closed)))

    ft_taus = np.linspace(0.0, 40.0, 20001)
    g1, coh = mollow.g1_in(p, ft_taus)
    omegas = np.linspace(-12.0, 12.0, 121)
    phase = np.exp(-1j * np.outer(omegas, ft_taus))
    f_in = mollow.input_flux(om)
    oracle = (f_in / np.pi) * np.real(
        np.trapezoid(phase * (g1.values - coh), ft_taus, axis=1)
    )
    spec = mollow.incoherent_spectrum(p, omegas)
    linf_spec = float(np.max(np.abs(spec.density - oracle)) / np.max(np.abs(oracle)))

    fine = np.linspace(om / 2.0, 1.5 * om, 40001)
    dens = mollow.incoherent_spectrum(p, fine).density
    peak = float(fine[np.argmax(dens)])
    peak_err = abs(peak - om * (1.0 - 2.0 / om**2))

    ok = _verdict(
        "A5",
        linf_g2 < 1e-6 and linf_spec < 1e-3 and peak_err < 0.1,
        f"g2 closed form Linf {linf_g2:.2e} (<1e-6), spectrum vs FT "
        f"{linf_spec:.2e} (<1e-3), sidepeak offset {peak_err:.3f} (<0.1)",
    )
    assert ok


def test_A6_mc_gaussian_sector():
    # (i) + (iii): background flux and output covariance with no squeezing.
    # gamma_A = 100 gamma_B keeps the finite-measurement-bandwidth bias
    # (relative size gamma_B/(gamma_A + gamma_B)) at 1%, well under 3 SE.
    p = TeleporterParams(gamma_s=1.0, gamma_A=100.0, gamma_B=1.0, lam=0.0)
    lags = np.linspace(0.25, 5.0, 20)
    est = run_ensemble(p, RunSettings(duration=300.0, n_traj=48, seed=5,
                                      lag_grid=lags))
    flux, flux_se = est.flux
    target = p.gamma_B / 2.0
    z_flux = (flux - target) / flux_se

    cov, cov_se = est.covariance
    norm = cov / (2.0 * flux)
    ref = np.exp(-p.gamma_B * est.lags)
    z_cov = np.max(np.abs((norm - ref) / (cov_se / (2.0 * flux))))

    # (ii) OPO output spectra at the squeezer tap, lambda = 1/2
    p2 = TeleporterParams(gamma_s=1.0, gamma_A=1.0, gamma_B=1.0, lam=0.5)
    est2 = run_ensemble(p2, RunSettings(duration=600.0, n_traj=768, seed=101,
                                        dt=0.00666, segment_lengths=60.0))
    i0 = int(np.argmin(np.abs(est2.freqs)))
    r = (1.0 - p2.lam) / (1.0 + p2.lam)
    sq, sq_se = est2.opo_sq_psd
    anti, anti_se = est2.opo_anti_psd
    z_sq = ((sq[i0] + 0.5) / 0.5 - r**2) / (sq_se[i0] / 0.5)
    z_anti = ((anti[i0] + 0.5) / 0.5 - r**-2) / (anti_se[i0] / 0.5)

    ok = _verdict(
        "A6",
        abs(z_flux) < 3 and abs(z_sq) < 3 and abs(z_anti) < 3 and z_cov < 3
        and flux_se / target < 0.02,
        f"flux {flux:.4f}+-{flux_se:.4f} (z={z_flux:+.2f}), squeezed "
        f"{(sq[i0]+0.5)/0.5:.4f} (z={z_sq:+.2f}), antisqueezed "
        f"{(anti[i0]+0.5)/0.5:.3f} (z={z_anti:+.2f}), covariance max|z|={z_cov:.2f}",
    )
    assert ok


def test_A7_filter_bandwidth_trend():
    lam = lambda_from_db(25.0)
    values = []
    for x in (1e-1, 1e-2, 1e-3, 1e-4):
        p = _params(gamma_s=20.0 / x, lam=lam, omega_rabi=6.0)
        values.append(analytic.g2_out_zero(p))
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    ok = _verdict(
        "A7",
        decreasing and values[0] > 1.0 and 0.0 < values[-1] < 1.0,
        "g2_out(0) over gamma_B/gamma_s in {1e-1..1e-4}: "
        + ", ".join(f"{v:.4f}" for v in values),
    )
    assert ok


def test_A8_simulate_determinism_across_workers(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "gamma_s = 1\ngamma_A = 20\ngamma_B = 1\nlambda = 0\n"
        "mc_duration = 80\nmc_n_traj = 8\n"
    )
    outputs = {}
    for workers in (1, 4, 8):
        out = tmp_path / f"w{workers}"
        code = main(["simulate", "--config", str(cfg), "--out", str(out),
                     "--seed", "77", "--threads", str(workers)])
        assert code == 0
        data = {}
        for name in ("mc_scalars.csv", "mc_psd.csv", "mc_cov.csv"):
            lines = (out / name).read_text().splitlines()
            data[name] = [l for l in lines if not l.startswith("#")]
        outputs[workers] = data
    identical = outputs[1] == outputs[4] == outputs[8]
    ok = _verdict("A8", identical,
                  "estimator CSVs bitwise identical for 1/4/8 workers"
                  if identical else "worker counts produced different CSVs")
    assert ok
