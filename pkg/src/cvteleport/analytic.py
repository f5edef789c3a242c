"""Closed-form coherence of the teleported field and design solvers.

The teleporter output splits into the teleported input plus a noise
background of flux f_s with normalized correlation A(tau) (unity at zero
delay).  These closed forms assume broadband measurement and filtering,
gamma_A >> gamma_B, gamma_s, gamma_i and gamma_B >> gamma_i; validity is
reported by params.validate_regime, never enforced here.
"""

from __future__ import annotations

import math

import numpy as np

from .mollow import g1_in, g2_in, incoherent_modes, incoherent_spectrum, input_flux
from .params import TeleporterParams, db_from_lambda, lambda_from_db
from .series import CorrelationSeries, DesignResult, FluxReport, Spectrum

# |gamma_B - gamma_plus| below this (times gamma_s) switches the removable
# 0/0 of the background correlation to its series-expansion branch
EPS_DEGENERATE = 1e-6


def _bracket(lam: float, x: float) -> float:
    """Background occupation factor; x = gamma_B / gamma_s."""
    return 0.5 - (2.0 * lam / (1.0 + lam)) / (1.0 + lam + x)


def _bracket_limit(lam: float) -> float:
    """x -> 0 limit of the occupation factor: ((1-lam)/(1+lam))**2 / 2."""
    r = (1.0 - lam) / (1.0 + lam)
    return 0.5 * r * r


def background_flux(params: TeleporterParams) -> float:
    """Photon flux f_s of the teleporter noise background."""
    return params.gamma_B * _bracket(params.lam, params.gamma_B / params.gamma_s)


def _background_weights(params: TeleporterParams):
    """Decay rates and weights of A(tau) = w_B e^{-gamma_B tau} + w_p e^{-gamma_plus tau}.

    Returns None in the degenerate gamma_B ~ gamma_plus case (removable 0/0).
    """
    gB, gs, lam = params.gamma_B, params.gamma_s, params.lam
    gp, gm = params.gamma_plus, params.gamma_minus
    if abs(gB - gp) < EPS_DEGENERATE * gs:
        return None
    nB = 0.5 * (gB * gB - gm * gm)
    np_ = -(2.0 * lam / (1.0 + lam)) * gB * gs
    norm = nB + np_
    return (gB, gp), (nB / norm, np_ / norm)


def background_correlation(tau, params: TeleporterParams):
    """Normalized field correlation A(tau) of the noise background, A(0) = 1.

    The removable singularity at gamma_B = gamma_plus is evaluated by its
    first-order series branch: e^{-gamma_plus tau} (1 - c tau) with
    c = 2 lam (1 + lam) gamma_s / (1 + lam**2).
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be >= 0")
    w = _background_weights(params)
    if w is None:
        lam, gs, gp = params.lam, params.gamma_s, params.gamma_plus
        c = 2.0 * lam * (1.0 + lam) * gs / (1.0 + lam * lam)
        return np.exp(-gp * tau) * (1.0 - c * tau)
    (rB, rp), (wB, wp) = w
    return wB * np.exp(-rB * tau) + wp * np.exp(-rp * tau)


def flux_ratio(params: TeleporterParams, mode: str = "exact") -> FluxReport:
    """Background-to-input flux ratio f_s / f_in.

    mode 'exact' uses the full occupation factor at the actual
    gamma_B/gamma_s; mode 'limit' its gamma_B/gamma_s -> 0 value.
    """
    if params.omega_rabi <= 0:
        raise ValueError("flux ratio is infinite at zero drive (f_in = 0)")
    if mode == "exact":
        br = _bracket(params.lam, params.gamma_B / params.gamma_s)
    elif mode == "limit":
        br = _bracket_limit(params.lam)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    om2 = params.omega_rabi**2
    f_in = input_flux(params.omega_rabi, params.gamma_i, params.eta)
    ratio = (params.gamma_B / (params.eta * params.gamma_i)) * br * (om2 + 2.0 * params.gamma_i**2) / om2
    return FluxReport(f_in=f_in, f_s=ratio * f_in, ratio=ratio, mode=mode)


def g1_out(params: TeleporterParams, tau_grid) -> CorrelationSeries:
    """Normalized first-order coherence of the teleported field."""
    rep = flux_ratio(params, "exact")
    g1i, _ = g1_in(params, tau_grid)
    a = background_correlation(g1i.tau_grid, params)
    vals = (rep.f_s * a + rep.f_in * g1i.values) / rep.f_out
    return CorrelationSeries(g1i.tau_grid, vals, rep.f_out, "g1_total")


def g2_out(params: TeleporterParams, tau_grid) -> CorrelationSeries:
    """Normalized intensity correlation of the teleported field."""
    rep = flux_ratio(params, "exact")
    g1i, _ = g1_in(params, tau_grid)
    g2i = g2_in(params, tau_grid)
    taus = g1i.tau_grid
    a = background_correlation(taus, params)
    p = rep.f_in / rep.f_out
    q = rep.f_s / rep.f_out
    g1o = q * a + p * g1i.values
    # cross term: the background correlation beats against both the total
    # and the input field correlations
    vals = 1.0 + p * p * (g2i.values - 1.0) + q * a * np.real(g1o + p * g1i.values)
    return CorrelationSeries(taus, np.maximum(vals, 0.0), rep.f_out, "g2")


def g2_out_zero(params: TeleporterParams) -> float:
    """Zero-delay intensity correlation, 2 [1 - (1 + f_s/f_in)**-2]."""
    r = flux_ratio(params, "exact").ratio
    return 2.0 * (1.0 - (1.0 + r) ** -2)


def output_spectrum(params: TeleporterParams, omega_grid) -> Spectrum:
    """Incoherent spectrum of the teleported field.

    Triplet of the input sitting on the background's two-Lorentzian
    spectrum; the coherent delta peak at line center is excluded.
    """
    omegas = np.asarray(omega_grid, dtype=float)
    rep = flux_ratio(params, "exact")
    s_in = incoherent_spectrum(params, omegas)
    w = _background_weights(params)
    om2 = omegas * omegas
    if w is None:
        gp = params.gamma_plus
        lam, gs = params.lam, params.gamma_s
        c = 2.0 * lam * (1.0 + lam) * gs / (1.0 + lam * lam)
        lor = gp / (np.pi * (gp * gp + om2))
        extra = -c * (gp * gp - om2) / (np.pi * (gp * gp + om2) ** 2)
        bg = lor + extra
    else:
        (rB, rp), (wB, wp) = w
        bg = wB * rB / (np.pi * (rB * rB + om2)) + wp * rp / (np.pi * (rp * rp + om2))
    return Spectrum(omegas, rep.f_s * bg + s_in.density)


def required_squeezing_db(
    target_g2_zero: float,
    omega_rabi: float,
    gamma_i: float = 1.0,
    gamma_B: float = 20.0,
    eta: float = 1.0,
) -> float:
    """Line-center squeezing (dB) needed for a target g2_out(0).

    Inverts the small-background expansion g2(0) ~ 4 f_s/f_in together with
    the gamma_B/gamma_s -> 0 flux ratio; valid for targets well below 2.
    """
    if not 0.0 < target_g2_zero < 2.0:
        raise ValueError(f"target g2(0) must be in (0, 2), got {target_g2_zero}")
    om2 = omega_rabi * omega_rabi
    arg = om2 / (om2 + 2.0 * gamma_i * gamma_i) * eta * gamma_i / (2.0 * gamma_B) * target_g2_zero
    return -10.0 * math.log10(arg)


def max_filter_ratio(
    target_g2_zero: float,
    omega_rabi: float,
    gamma_i: float = 1.0,
    gamma_B: float = 20.0,
    eta: float = 1.0,
) -> float:
    """Upper bound on gamma_B/gamma_s for the target g2_out(0) to be reachable."""
    if not 0.0 < target_g2_zero < 2.0:
        raise ValueError(f"target g2(0) must be in (0, 2), got {target_g2_zero}")
    om2 = omega_rabi * omega_rabi
    return 2.0 * om2 / (om2 + 2.0 * gamma_i * gamma_i) * eta * gamma_i / (2.0 * gamma_B) * target_g2_zero


def design(
    target_g2_zero: float,
    omega_rabi: float,
    gamma_i: float = 1.0,
    gamma_B: float = 20.0,
    eta: float = 1.0,
) -> DesignResult:
    """Solve the squeezing/filter design question for a target g2_out(0)."""
    db = required_squeezing_db(target_g2_zero, omega_rabi, gamma_i, gamma_B, eta)
    bound = max_filter_ratio(target_g2_zero, omega_rabi, gamma_i, gamma_B, eta)
    lam = lambda_from_db(db)
    return DesignResult(
        target_g2_zero=target_g2_zero,
        required_db=db,
        required_lambda=lam,
        max_filter_ratio=bound,
        feasible=lam < 1.0 and bound > 0.0,
    )


def _lorentzian_gain(omega, gamma):
    """|H(omega)|**2 for the single-pole response H = gamma/(gamma + i omega)."""
    return gamma * gamma / (gamma * gamma + np.asarray(omega, dtype=float) ** 2)


def flat_limit_weights(
    omega,
    lam: float,
    gamma_s: float,
    gamma_A: float,
    flat: bool = False,
):
    """Per-frequency power weights (input, squeezed-noise, vacuum) of the
    field Bob reconstructs, before his output filter.

    With boxcar ('flat') responses matched at gamma_s = gamma_A and lam -> 1
    the weights are (1, 0, 0) inside the band and (0, 0, 1) outside: the
    input band is teleported and the rest replaced by vacuum.  With the
    Lorentzian responses used everywhere else, the smooth weights returned
    here cross-check the Monte Carlo spectra: 'input' is the power gain on
    the input field, 'noise' the excess symmetric power (vacuum units, both
    quadratures) radiated by the squeezer-plus-displacement path, and
    'vacuum' the vacuum-level part of that path.
    """
    omega = np.asarray(omega, dtype=float)
    if flat:
        inside = np.abs(omega) < gamma_s
        inp = np.where(inside, 1.0, 0.0)
        r = (1.0 - lam) / (1.0 + lam)
        noise = np.where(inside, 2.0 * 2.0 * (r * r * 0.5), 0.0)  # 4 * S_sq, -> 0 as lam -> 1
        vac = np.where(inside, 0.0, 1.0)
        return inp, noise, vac
    gp = gamma_s * (1.0 + lam)
    gm = gamma_s * (1.0 - lam)
    r_sq = (gm * gm + omega * omega) / (gp * gp + omega * omega)
    r_anti = 1.0 / r_sq
    h = gamma_A / (gamma_A + 1j * omega)
    inp = np.abs(h) ** 2
    c_co = np.abs(1.0 + h) ** 2 / 2.0  # weight on the squeezed quadrature
    c_cross = np.abs(1.0 - h) ** 2 / 2.0  # weight on the antisqueezed one
    # symmetric power (vacuum = 1/2 per quadrature), summed over X and Y,
    # relative to the one-unit vacuum floor
    total = inp + c_co * r_sq + c_cross * r_anti
    noise = total - 1.0
    vac = np.ones_like(omega)
    return inp, noise, vac
