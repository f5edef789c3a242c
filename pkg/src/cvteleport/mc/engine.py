"""Ensemble Monte Carlo of the teleporter chain with streaming estimators.

Each trajectory owns a counter-based Philox stream keyed by (seed,
trajectory index), so results are independent of how trajectories are
distributed across workers.  Estimates and standard errors come from the
spread of per-trajectory statistics; merged accumulators reduce in
trajectory-index order so the merge is associative up to floating-point
reordering.

This engine covers the Gaussian sector only (vacuum, coherent, or OU
surrogate inputs).  The antibunched two-state source cannot be represented
by these classical quadrature processes; its photon statistics are the
analytic module's job.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.signal

from ..params import TeleporterParams
from ..series import Spectrum
from .kernels import N_STATE, integrate_chain

# dt must keep the effective noise bandwidth 1/dt two decades above every
# system rate; Euler bias is then well below the statistical tolerances
DT_SAFETY = 0.01
# Welch segments span at least this many correlation times of the slowest mode
SEGMENT_LENGTHS = 20.0


@dataclass
class RunSettings:
    """Numerical controls for one ensemble run."""

    duration: float
    n_traj: int
    seed: int
    dt: float | None = None
    warmup: float | None = None
    input_mode: str = "vacuum"  # vacuum | coherent | ou
    alpha: float = 0.0  # photon-flux amplitude of the coherent drive
    ou_sigma: float = 0.0
    bypass: bool = False
    lag_grid: np.ndarray | None = None
    n_workers: int = 1
    # Welch segment span in correlation times of the slowest mode; longer
    # segments cut the spectral-smoothing bias on narrow lines at the cost
    # of fewer averages
    segment_lengths: float = SEGMENT_LENGTHS


@dataclass
class EstimatorSet:
    """Mergeable per-trajectory statistics of one ensemble.

    Scalar entries hold (sum, sum of squares); array entries hold per-bin
    sums.  mean_* / se_* expose the ensemble estimates.
    """

    n_traj: int = 0
    flux_sum: float = 0.0
    flux_sq: float = 0.0
    nbar_sum: float = 0.0
    nbar_sq: float = 0.0
    freqs: np.ndarray | None = None  # angular, fftshifted
    out_psd_sum: np.ndarray | None = None  # S_X + S_Y minus the vacuum floor 1
    out_psd_sq: np.ndarray | None = None
    opo_sq_psd_sum: np.ndarray | None = None  # squeezed quadrature minus floor 1/2
    opo_sq_psd_sq: np.ndarray | None = None
    opo_anti_psd_sum: np.ndarray | None = None
    opo_anti_psd_sq: np.ndarray | None = None
    lags: np.ndarray | None = None
    cov_sum: np.ndarray | None = None
    cov_sq: np.ndarray | None = None

    _ARRAYS = (
        "out_psd_sum", "out_psd_sq", "opo_sq_psd_sum", "opo_sq_psd_sq",
        "opo_anti_psd_sum", "opo_anti_psd_sq", "cov_sum", "cov_sq",
    )

    def add_trajectory(self, stats: dict) -> None:
        self.n_traj += 1
        self.flux_sum += stats["flux"]
        self.flux_sq += stats["flux"] ** 2
        self.nbar_sum += stats["nbar"]
        self.nbar_sq += stats["nbar"] ** 2
        if self.freqs is None:
            self.freqs = stats["freqs"]
            self.lags = stats["lags"]
            for name in self._ARRAYS:
                base = name.rsplit("_", 1)[0]
                key = {"out_psd": "out_psd", "opo_sq_psd": "opo_sq",
                       "opo_anti_psd": "opo_anti", "cov": "cov"}[base]
                arr = stats[key]
                setattr(self, name, arr.copy() if name.endswith("sum") else arr**2)
        else:
            self.out_psd_sum += stats["out_psd"]
            self.out_psd_sq += stats["out_psd"] ** 2
            self.opo_sq_psd_sum += stats["opo_sq"]
            self.opo_sq_psd_sq += stats["opo_sq"] ** 2
            self.opo_anti_psd_sum += stats["opo_anti"]
            self.opo_anti_psd_sq += stats["opo_anti"] ** 2
            self.cov_sum += stats["cov"]
            self.cov_sq += stats["cov"] ** 2

    def merge(self, other: "EstimatorSet") -> "EstimatorSet":
        if other.n_traj == 0:
            return self
        if self.n_traj == 0:
            return other
        out = EstimatorSet(
            n_traj=self.n_traj + other.n_traj,
            flux_sum=self.flux_sum + other.flux_sum,
            flux_sq=self.flux_sq + other.flux_sq,
            nbar_sum=self.nbar_sum + other.nbar_sum,
            nbar_sq=self.nbar_sq + other.nbar_sq,
            freqs=self.freqs,
            lags=self.lags,
        )
        for name in self._ARRAYS:
            setattr(out, name, getattr(self, name) + getattr(other, name))
        return out

    def _mean_se(self, s, sq):
        n = self.n_traj
        mean = s / n
        var = np.maximum(sq / n - mean**2, 0.0)
        se = np.sqrt(var / max(n - 1, 1))
        return mean, se

    @property
    def flux(self):
        return self._mean_se(self.flux_sum, self.flux_sq)

    @property
    def nbar_d(self):
        return self._mean_se(self.nbar_sum, self.nbar_sq)

    @property
    def out_psd(self):
        return self._mean_se(self.out_psd_sum, self.out_psd_sq)

    @property
    def opo_sq_psd(self):
        return self._mean_se(self.opo_sq_psd_sum, self.opo_sq_psd_sq)

    @property
    def opo_anti_psd(self):
        return self._mean_se(self.opo_anti_psd_sum, self.opo_anti_psd_sq)

    @property
    def covariance(self):
        return self._mean_se(self.cov_sum, self.cov_sq)


def default_dt(params: TeleporterParams, input_on: bool = False) -> float:
    rates = [params.gamma_A, params.gamma_B, params.gamma_plus, params.gamma_s]
    if input_on:
        rates.append(params.gamma_i)
    return DT_SAFETY / max(rates)


def _slowest_rate(params: TeleporterParams, input_on: bool) -> float:
    rates = [params.gamma_B, params.gamma_minus]
    if input_on:
        rates.append(params.gamma_i)
    return min(rates)


def _trajectory_rng(seed: int, index: int) -> np.random.Generator:
    key = np.array([np.uint64(seed), np.uint64(index)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _trajectory_stats(params: TeleporterParams, settings: RunSettings,
                      index: int, dt: float, n_steps: int, n_warm: int,
                      nperseg: int, lag_steps: np.ndarray) -> dict:
    rng = _trajectory_rng(settings.seed, index)
    z = rng.standard_normal((1, n_steps, 10))
    state = np.zeros((1, N_STATE))
    ou_on = settings.input_mode == "ou"
    taps = integrate_chain(
        state, z, dt,
        gamma_i=params.gamma_i, gamma_s=params.gamma_s,
        gamma_A=params.gamma_A, gamma_B=params.gamma_B,
        gamma_plus=params.gamma_plus, gamma_minus=params.gamma_minus,
        alpha=settings.alpha if settings.input_mode == "coherent" else 0.0,
        ou_sigma=settings.ou_sigma, ou_on=ou_on, bypass=settings.bypass,
    )[0, n_warm:, :]

    e_x, e_y = taps[:, 0], taps[:, 1]
    sq_x, sq_y = taps[:, 2], taps[:, 3]
    m_x, m_y = taps[:, 4], taps[:, 5]
    n_keep = e_x.size

    # Each output tap is E = M - w with M the smooth (cavity-state) part and
    # w the reflected white draw of that step, known exactly from z.  Every
    # w-only moment has an exactly known expectation (the vacuum floor), so
    # dropping it from the estimators removes the dominant shot variance
    # without bias; only the causal M-w cross terms are kept.
    w_scale = math.sqrt(0.5 / dt)
    w_ox = w_scale * z[0, n_warm:, 6]
    w_oy = w_scale * z[0, n_warm:, 7]
    w_ax = w_scale * z[0, n_warm:, 2]
    w_ay = w_scale * z[0, n_warm:, 3]
    em_x = e_x + w_ox
    em_y = e_y + w_oy
    sm_x = sq_x + w_ax
    sm_y = sq_y + w_ay

    # photon flux out of the filter, vacuum floor already removed
    flux = 0.5 * (np.mean(em_x**2) - 2.0 * np.mean(em_x * w_ox)
                  + np.mean(em_y**2) - 2.0 * np.mean(em_y * w_oy))
    # filter-mode occupation from the filtered-field state m = sqrt(gB/2) d
    nbar = 0.5 * ((2.0 / params.gamma_B) * (np.mean(m_x**2) + np.mean(m_y**2)) - 1.0)

    fs = 1.0 / dt
    kw = dict(fs=fs, window="hann", nperseg=nperseg, noverlap=nperseg // 2,
              detrend=False, return_onesided=False)
    f, p_ex = scipy.signal.welch(em_x, scaling="density", **kw)
    _, p_ey = scipy.signal.welch(em_y, scaling="density", **kw)
    _, p_sx = scipy.signal.welch(sm_x, scaling="density", **kw)
    _, p_sy = scipy.signal.welch(sm_y, scaling="density", **kw)
    _, c_ex = scipy.signal.csd(em_x, w_ox, scaling="density", **kw)
    _, c_ey = scipy.signal.csd(em_y, w_oy, scaling="density", **kw)
    _, c_sx = scipy.signal.csd(sm_x, w_ax, scaling="density", **kw)
    _, c_sy = scipy.signal.csd(sm_y, w_ay, scaling="density", **kw)
    order = np.argsort(f)
    freqs = 2.0 * np.pi * f[order]
    out_psd = (p_ex - 2.0 * np.real(c_ex) + p_ey - 2.0 * np.real(c_ey))[order]
    opo_sq = (p_sx - 2.0 * np.real(c_sx))[order]
    opo_anti = (p_sy - 2.0 * np.real(c_sy))[order]

    # two-time covariance C(tau) = <E_X(t) E_X(t+tau)> + (X -> Y), with the
    # zero-mean white-white lag product dropped
    cov = np.empty(lag_steps.size)
    for j, L in enumerate(lag_steps):
        m = n_keep - L
        cov[j] = (em_x[:m] @ em_x[L:L + m] - em_x[:m] @ w_ox[L:L + m]
                  - w_ox[:m] @ em_x[L:L + m]
                  + em_y[:m] @ em_y[L:L + m] - em_y[:m] @ w_oy[L:L + m]
                  - w_oy[:m] @ em_y[L:L + m]) / m

    return dict(flux=flux, nbar=nbar, freqs=freqs, out_psd=out_psd,
                opo_sq=opo_sq, opo_anti=opo_anti,
                lags=lag_steps * dt, cov=cov)


def run_ensemble(params: TeleporterParams, settings: RunSettings) -> EstimatorSet:
    """Integrate settings.n_traj independent trajectories and reduce them.

    Deterministic for fixed (params, settings.duration, dt, n_traj, seed)
    regardless of n_workers.
    """
    if settings.n_traj <= 0:
        raise ValueError("n_traj must be positive")
    input_on = settings.input_mode == "ou"
    dt = settings.dt if settings.dt is not None else default_dt(params, input_on)
    dt_max = default_dt(params, input_on)
    if dt > dt_max * (1.0 + 1e-12):
        raise ValueError(
            f"dt = {dt:g} exceeds the stability/noise-bandwidth bound {dt_max:g}"
        )
    slow = _slowest_rate(params, input_on)
    warmup = settings.warmup if settings.warmup is not None else 8.0 / slow
    if settings.duration <= 2.0 * warmup:
        raise ValueError(
            f"duration {settings.duration:g} too short: need > twice the "
            f"warm-up {warmup:g} (slowest rate {slow:g})"
        )
    n_steps = int(round(settings.duration / dt))
    n_warm = int(round(warmup / dt))
    n_keep = n_steps - n_warm

    seg_steps = int(round(settings.segment_lengths / slow / dt))
    nperseg = min(seg_steps, n_keep)

    if settings.lag_grid is None:
        lag_taus = np.linspace(0.0, 5.0 / params.gamma_B, 21)[1:]
    else:
        lag_taus = np.asarray(settings.lag_grid, dtype=float)
    lag_steps = np.maximum(np.round(lag_taus / dt).astype(int), 1)

    def work(index):
        return _trajectory_stats(params, settings, index, dt, n_steps,
                                 n_warm, nperseg, lag_steps)

    results: list[dict | None] = [None] * settings.n_traj
    if settings.n_workers <= 1:
        for i in range(settings.n_traj):
            results[i] = work(i)
    else:
        with ThreadPoolExecutor(max_workers=settings.n_workers) as pool:
            for i, r in enumerate(pool.map(work, range(settings.n_traj))):
                results[i] = r

    est = EstimatorSet()
    for r in results:  # fixed reduction order: independent of worker count
        est.add_trajectory(r)
    return est


def background_spectrum_mc(params: TeleporterParams, omega_grid,
                           settings: RunSettings) -> tuple[Spectrum, np.ndarray]:
    """Normally-ordered output spectrum estimate on omega_grid, with SEs.

    Input source must be off: this measures the teleporter's own noise
    background (valid at arbitrary bandwidth ratios).
    """
    if settings.input_mode != "vacuum" or settings.bypass:
        raise ValueError("background spectrum requires the input source off")
    est = run_ensemble(params, settings)
    mean, se = est.out_psd
    omega = np.asarray(omega_grid, dtype=float)
    if omega.min() < est.freqs.min() or omega.max() > est.freqs.max():
        raise ValueError("omega grid exceeds the simulated Nyquist band")
    # photon flux per unit angular frequency: (S_X + S_Y - 1) / (4 pi);
    # the vacuum floor 1 is already removed by the estimator
    dens = np.interp(omega, est.freqs, mean / (4.0 * np.pi))
    dens_se = np.interp(omega, est.freqs, se / (4.0 * np.pi))
    return Spectrum(omega, dens), dens_se
