"""Closed-form teleporter output: identities, limits, and cross-checks.

The key internal consistency checks are between independently derived
routes to the same quantity: the normalization of the background
correlation versus the occupation-factor flux, the zero-delay g2 closed
form versus the full g2 series, and the frequency-domain noise weights
versus the time-domain background flux.
"""

import numpy as np
import pytest
import scipy.integrate

from cvteleport import analytic
from cvteleport.mollow import g1_in, input_flux
from cvteleport.params import TeleporterParams, lambda_from_db


def _params(**kw):
    base = dict(gamma_s=1.0, gamma_A=50.0, gamma_B=20.0)
    base.update(kw)
    return TeleporterParams(**base)


def test_background_correlation_normalized_at_zero():
    rng = np.random.default_rng(0)
    for _ in range(50):
        p = _params(
            gamma_s=10.0 ** rng.uniform(-2, 2),
            lam=rng.uniform(0.0, 0.99),
        )
        assert analytic.background_correlation(0.0, p) == pytest.approx(1.0, rel=1e-12)


def test_flux_normalization_identity():
    # the correlation-function normalization and the occupation-factor form
    # of the background flux are algebraically identical
    rng = np.random.default_rng(1)
    for _ in range(200):
        lam = rng.uniform(0.0, 0.99)
        x = 10.0 ** rng.uniform(-5, 2)
        p = _params(gamma_s=20.0 / x, lam=lam)
        f1 = analytic.background_flux(p)
        w = analytic._background_weights(p)
        if w is None:
            continue
        (rB, rp), (wB, wp) = w
        # flux from the unnormalized mode sum: gamma_B * [1/2 - (2 lam/(1+lam))/(1+lam+x)]
        f2 = p.gamma_B * analytic._bracket(lam, x)
        assert f1 == pytest.approx(f2, rel=1e-12)
        assert wB + wp == pytest.approx(1.0, rel=1e-12)


def test_zero_delay_g2_closed_form_matches_series():
    rng = np.random.default_rng(2)
    taus = np.linspace(0.0, 5.0, 11)
    for _ in range(40):
        p = _params(
            gamma_s=10.0 ** rng.uniform(-3, 1),
            lam=rng.uniform(0.0, 0.95),
            omega_rabi=rng.uniform(0.5, 20.0),
        )
        series = analytic.g2_out(p, taus)
        assert series.values[0] == pytest.approx(analytic.g2_out_zero(p), rel=1e-10)


def test_limit_flux_ratio_is_small_filter_limit():
    for lam in (0.0, 0.3, 0.6, 0.9):
        p = _params(gamma_s=20.0 / 1e-6, lam=lam, omega_rabi=6.0)
        exact = analytic.flux_ratio(p, "exact").ratio
        lim = analytic.flux_ratio(p, "limit").ratio
        assert exact == pytest.approx(lim, rel=1e-3)


def test_flux_ratio_requires_drive():
    with pytest.raises(ValueError):
        analytic.flux_ratio(_params(omega_rabi=0.0))
    with pytest.raises(ValueError):
        analytic.flux_ratio(_params(omega_rabi=6.0), "bogus")


def test_degenerate_branch_is_continuous():
    # gamma_B = gamma_plus is a removable 0/0; the series branch must join
    # the generic branch smoothly
    lam = 0.5
    gs = 20.0 / (1.0 + lam)  # gamma_plus == gamma_B exactly
    taus = np.linspace(0.0, 1.0, 101)
    p_deg = _params(gamma_s=gs, lam=lam)
    a_deg = analytic.background_correlation(taus, p_deg)
    for eps in (1e-8, -1e-8):
        p_near = _params(gamma_s=gs * (1.0 + eps), lam=lam)
        a_near = analytic.background_correlation(taus, p_near)
        assert np.max(np.abs(a_deg - a_near)) < 1e-6


def test_background_correlation_decays():
    p = _params(lam=0.8)
    taus = np.linspace(0.0, 3.0, 301)
    a = analytic.background_correlation(taus, p)
    assert abs(a[-1]) < a[0]
    assert analytic.background_correlation(50.0, p) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        analytic.background_correlation(-1.0, p)


def test_filter_commutator_preserved():
    # |H(w)|^2 + |1 - H(w)|^2 differs from 1 only by the cross term; the
    # filtered-plus-reflected output preserves the field commutator because
    # the same vacuum supplies both parts
    w = np.linspace(-100, 100, 2001)
    for g in (0.5, 20.0):
        h = g / (g + 1j * w)
        assert np.max(np.abs(np.abs(h) ** 2 + np.abs(1 - h) ** 2 + 2 * np.real(h * np.conj(1 - h)) - 1.0)) < 1e-12


def test_g1_out_interpolates_input_and_background():
    p = _params(gamma_s=2e5, lam=lambda_from_db(25.0), omega_rabi=6.0)
    taus = np.linspace(0.0, 10.0, 201)
    out = analytic.g1_out(p, taus)
    rep = analytic.flux_ratio(p, "exact")
    g1i, _ = g1_in(p, taus)
    a = analytic.background_correlation(taus, p)
    recon = (rep.f_s * a + rep.f_in * g1i.values) / rep.f_out
    assert np.max(np.abs(out.values - recon)) == 0.0
    assert out.values[0] == pytest.approx(1.0, rel=1e-12)


def test_g2_out_thermal_background_limit():
    # overwhelming background (weak input, wide filter): thermal statistics
    p = _params(gamma_s=2.0, omega_rabi=0.5, eta=0.01)
    assert analytic.g2_out_zero(p) == pytest.approx(2.0, rel=1e-2)
    taus = np.linspace(0.0, 2.0, 51)
    series = analytic.g2_out(p, taus)
    assert series.values[0] == pytest.approx(2.0, rel=1e-2)
    assert series.values[-1] < series.values[0]


def test_g2_out_approaches_input_when_background_vanishes():
    # deep squeezing + narrow filter: the teleported field keeps the
    # antibunched statistics of the input
    p = _params(gamma_s=2e7, lam=lambda_from_db(60.0), omega_rabi=6.0)
    assert analytic.g2_out_zero(p) < 1e-3
    taus = np.linspace(0.0, 3.0, 61)
    series = analytic.g2_out(p, taus)
    assert series.values[0] < 1e-2


def test_output_spectrum_integral_matches_fluxes():
    p = _params(gamma_s=200.0, lam=0.6, omega_rabi=6.0)
    rep = analytic.flux_ratio(p, "exact")
    _, coh = g1_in(p, np.array([0.0]))
    expected = rep.f_s + rep.f_in * (1.0 - coh)
    # dense core for the narrow lines, log-spaced wings for the wide ones
    wing = np.geomspace(500.0, 2e6, 4000)
    omegas = np.concatenate([-wing[::-1], np.linspace(-499.9, 499.9, 100001), wing])
    spec = analytic.output_spectrum(p, omegas)
    assert spec.integral == pytest.approx(expected, rel=2e-3)


def test_output_spectrum_degenerate_branch_continuous():
    lam = 0.4
    gs = 20.0 / (1.0 + lam)
    omegas = np.linspace(-60.0, 60.0, 601)
    d0 = analytic.output_spectrum(_params(gamma_s=gs, lam=lam, omega_rabi=6.0), omegas).density
    d1 = analytic.output_spectrum(_params(gamma_s=gs * (1 + 1e-8), lam=lam, omega_rabi=6.0), omegas).density
    assert np.max(np.abs(d0 - d1)) / np.max(d0) < 1e-6


def test_required_squeezing_feeds_back_to_target():
    for target in (0.01, 0.003, 0.001):
        res = analytic.design(target, omega_rabi=6.0, gamma_B=20.0)
        p = _params(gamma_s=20.0 / 1e-7, lam=res.required_lambda, omega_rabi=6.0)
        ratio = analytic.flux_ratio(p, "limit").ratio
        achieved = 2.0 * (1.0 - (1.0 + ratio) ** -2)
        assert achieved == pytest.approx(target, rel=0.1)
        assert res.feasible


def test_filter_bound_saturates_at_infinite_squeezing():
    # at the bound, even near-perfect squeezing only just reaches the
    # target; above it the residual filter noise forbids the target
    target = 0.01
    bound = analytic.max_filter_ratio(target, 6.0, 1.0, 20.0, 1.0)
    lam = 1.0 - 1e-9
    at_bound = _params(gamma_s=20.0 / bound, lam=lam, omega_rabi=6.0)
    assert analytic.g2_out_zero(at_bound) == pytest.approx(target, rel=0.05)
    above = _params(gamma_s=20.0 / (3.0 * bound), lam=lam, omega_rabi=6.0)
    assert analytic.g2_out_zero(above) > target


def test_design_rejects_bad_targets():
    for bad in (0.0, -1.0, 2.0, 3.0):
        with pytest.raises(ValueError):
            analytic.required_squeezing_db(bad, 6.0)
        with pytest.raises(ValueError):
            analytic.max_filter_ratio(bad, 6.0)


def test_required_squeezing_monotone_in_target():
    dbs = [analytic.required_squeezing_db(t, 6.0) for t in (0.03, 0.01, 0.003, 0.001)]
    assert all(b > a for a, b in zip(dbs, dbs[1:]))


def test_flat_limit_weights_ideal_teleportation():
    w = np.linspace(-3.0, 3.0, 601)
    lam = 1.0 - 1e-9
    inp, noise, vac = analytic.flat_limit_weights(w, lam, 1.0, 1.0, flat=True)
    inside = np.abs(w) < 1.0
    assert np.all(inp[inside] == 1.0)
    assert np.all(inp[~inside] == 0.0)
    assert np.max(noise) < 1e-8  # no added noise at perfect squeezing
    assert np.all(vac[~inside] == 1.0)


def test_lorentzian_weights_no_squeezing_identity():
    # at lambda = 0 the squeezer path is vacuum and the excess noise weight
    # reduces to 2 |H_A|^2
    w = np.linspace(-200.0, 200.0, 2001)
    gA = 37.0
    inp, noise, _ = analytic.flat_limit_weights(w, 0.0, 5.0, gA)
    gain = gA**2 / (gA**2 + w**2)
    assert np.max(np.abs(noise - 2.0 * gain)) < 1e-12
    assert np.max(np.abs(inp - gain)) < 1e-12


def test_noise_weights_integrate_to_background_flux():
    # frequency-domain route: background flux = integral of the filtered
    # excess noise over the band, int |H_B|^2 noise(w) dw / (4 pi), in the
    # broadband-measurement limit gamma_A -> infinity
    for lam in (0.0, 0.5, 0.9):
        p = _params(gamma_s=5.0, lam=lam, gamma_B=2.0, gamma_A=1e7)

        def integrand(w, p=p, lam=lam):
            _, noise, _ = analytic.flat_limit_weights(
                np.array([w]), lam, p.gamma_s, p.gamma_A
            )
            hb2 = p.gamma_B**2 / (p.gamma_B**2 + w**2)
            return hb2 * noise[0] / (4.0 * np.pi)

        val, _ = scipy.integrate.quad(integrand, -np.inf, np.inf, limit=400)
        assert val == pytest.approx(analytic.background_flux(p), rel=1e-5)
