"""Input light source: resonance fluorescence of a driven two-state emitter.

Provides the input photon flux, the first-order coherence g1 with its
coherent/incoherent split, the intensity correlation g2, and the incoherent
spectrum (Mollow triplet), all from the 3x3 generator of the optical Bloch
equations via the quantum regression theorem.  The drive is on resonance;
tau is in units of 1/gamma_i and omega relative to the drive line center.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .params import TeleporterParams
from .series import CorrelationSeries, Spectrum

# eigenvector condition number above which the generator is treated as
# defective (critical damping) and scaling-and-squaring expm is used instead
_EIG_COND_MAX = 1e8


@dataclass(frozen=True)
class BlochGenerator:
    """Affine generator ds/dt = M s + b for the Bloch vector (sx, sy, sz)."""

    omega_rabi: float
    gamma_i: float

    @property
    def matrix(self) -> np.ndarray:
        g = self.gamma_i
        om = self.omega_rabi
        # Einstein A = 2*gamma_i; transverse decay A/2, longitudinal A
        return np.array(
            [
                [-g, 0.0, 0.0],
                [0.0, -g, -om],
                [0.0, om, -2.0 * g],
            ]
        )

    @property
    def affine(self) -> np.ndarray:
        return np.array([0.0, 0.0, -2.0 * self.gamma_i])

    def steady_state(self) -> np.ndarray:
        return np.linalg.solve(self.matrix, -self.affine)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)

    def rabi_sideband(self) -> float:
        """Oscillation frequency of the generator (triplet sideband offset)."""
        ev = self.eigenvalues()
        return float(np.max(np.abs(ev.imag)))


def steady_state(omega_rabi: float, gamma_i: float = 1.0) -> np.ndarray:
    """Steady Bloch vector (sx, sy, sz) of the driven emitter."""
    if omega_rabi == 0.0:
        return np.array([0.0, 0.0, -1.0])
    return BlochGenerator(omega_rabi, gamma_i).steady_state()


def excited_population(omega_rabi: float, gamma_i: float = 1.0) -> float:
    sz = steady_state(omega_rabi, gamma_i)[2]
    return 0.5 * (1.0 + sz)


def input_flux(omega_rabi: float, gamma_i: float = 1.0, eta: float = 1.0) -> float:
    """Photon flux directed to the teleporter input.

    Equals eta * 2*gamma_i * (excited-state population)
    = eta * gamma_i * Omega**2 / (Omega**2 + 2*gamma_i**2).
    """
    om2 = omega_rabi * omega_rabi
    return eta * gamma_i * om2 / (om2 + 2.0 * gamma_i * gamma_i)


def _mode_decomposition(gen: BlochGenerator, deviation: np.ndarray):
    """Split e^{M tau} @ deviation into exponential modes (lambdas, vectors).

    Returns (lams, comps) with sum_k comps[:, k] * exp(lams[k] * tau)
    reproducing the propagated deviation, or None when the generator is
    defective and an eigenbasis is unusable.
    """
    M = gen.matrix
    lams, V = np.linalg.eig(M)
    if np.linalg.cond(V) > _EIG_COND_MAX:
        return None
    coeffs = np.linalg.solve(V, deviation.astype(complex))
    comps = V * coeffs[np.newaxis, :]
    return lams, comps


def _propagate(gen: BlochGenerator, v0: np.ndarray, v_inf: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """v(tau) = v_inf + e^{M tau} (v0 - v_inf) on a tau grid, shape (3, n)."""
    dev = np.asarray(v0, dtype=complex) - np.asarray(v_inf, dtype=complex)
    dec = _mode_decomposition(gen, dev)
    if dec is not None:
        lams, comps = dec
        return v_inf[:, None] + comps @ np.exp(np.outer(lams, taus))
    # defective generator: scaling-and-squaring exponential per grid point
    M = gen.matrix
    out = np.empty((3, taus.size), dtype=complex)
    for j, t in enumerate(taus):
        out[:, j] = v_inf + scipy.linalg.expm(M * t) @ dev
    return out


def _check_tau_grid(tau_grid) -> np.ndarray:
    taus = np.asarray(tau_grid, dtype=float)
    if taus.size == 0:
        raise ValueError("empty tau grid")
    return taus


def g1_in(params: TeleporterParams, tau_grid) -> tuple[CorrelationSeries, float]:
    """Normalized first-order coherence of the input light, plus its
    coherent fraction |<sigma->|^2 / rho_ee.

    g1(0) = 1; g1(tau) -> coherent fraction as tau -> infinity.
    """
    taus = _check_tau_grid(tau_grid)
    gen = BlochGenerator(params.omega_rabi, params.gamma_i)
    s_ss = gen.steady_state()
    pe = 0.5 * (1.0 + s_ss[2])
    sig_p = 0.5 * (s_ss[0] + 1j * s_ss[1])
    sig_m = np.conj(sig_p)
    coh = float(abs(sig_m) ** 2 / pe)

    # regression vector u_A(tau) = <sigma+(0) A(tau)>, A in (sx, sy, sz);
    # the identity component <sigma+> is conserved and sources the affine term
    u0 = np.array([pe, 1j * pe, -sig_p], dtype=complex)
    u_inf = sig_p * s_ss.astype(complex)
    u = _propagate(gen, u0, u_inf, taus)
    corr = 0.5 * (u[0] - 1j * u[1])  # <sigma+(0) sigma-(tau)>
    series = CorrelationSeries(taus, corr / pe, input_flux(params.omega_rabi, params.gamma_i, params.eta), "g1_total")
    return series, coh


def g2_in(params: TeleporterParams, tau_grid) -> CorrelationSeries:
    """Normalized intensity correlation of the input light; g2(0) = 0."""
    if params.omega_rabi <= 0:
        raise ValueError("g2 of the input is undefined at zero drive (no flux)")
    taus = _check_tau_grid(tau_grid)
    gen = BlochGenerator(params.omega_rabi, params.gamma_i)
    s_ss = gen.steady_state()
    pe = 0.5 * (1.0 + s_ss[2])
    # emission projects onto the ground state; g2 is the reset-and-regrow
    # excited population over its stationary value
    s0 = np.array([0.0, 0.0, -1.0])
    s_tau = _propagate(gen, s0, s_ss, taus)
    g2 = np.real(0.5 * (1.0 + s_tau[2])) / pe
    g2 = np.where(np.abs(g2) < 1e-14, 0.0, g2)
    return CorrelationSeries(taus, g2, input_flux(params.omega_rabi, params.gamma_i, params.eta), "g2")


def incoherent_modes(params: TeleporterParams):
    """Exponential-mode decomposition of the incoherent part of g1.

    Returns (lams, weights) with g1_inc(tau) = sum_k weights[k] * exp(lams[k] tau)
    for tau >= 0, normalized to the total flux (g1_inc(0) = 1 - coherent fraction).
    """
    gen = BlochGenerator(params.omega_rabi, params.gamma_i)
    s_ss = gen.steady_state()
    pe = 0.5 * (1.0 + s_ss[2])
    sig_p = 0.5 * (s_ss[0] + 1j * s_ss[1])
    u0 = np.array([pe, 1j * pe, -sig_p], dtype=complex)
    u_inf = sig_p * s_ss.astype(complex)
    dec = _mode_decomposition(gen, u0 - u_inf)
    if dec is None:
        raise np.linalg.LinAlgError(
            "defective Bloch generator (critical damping); perturb omega_rabi"
        )
    lams, comps = dec
    weights = 0.5 * (comps[0] - 1j * comps[1]) / pe
    return lams, weights


def incoherent_spectrum(params: TeleporterParams, omega_grid) -> Spectrum:
    """Incoherent spectrum of the input light (Mollow triplet for strong drive).

    Integrates to f_in * (1 - coherent fraction); the coherent delta peak at
    line center is excluded by construction.
    """
    omegas = np.asarray(omega_grid, dtype=float)
    lams, weights = incoherent_modes(params)
    f_in = input_flux(params.omega_rabi, params.gamma_i, params.eta)
    # one-sided Laplace transform, doubled real part for the even extension
    denom = 1j * omegas[:, None] - lams[None, :]
    density = (f_in / np.pi) * np.sum((weights[None, :] / denom).real, axis=1)
    return Spectrum(omegas, density)
