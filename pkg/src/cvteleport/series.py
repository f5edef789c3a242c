"""Value types shared by the analytic and Monte Carlo engines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class CorrelationSeries:
    """Samples of a normalized correlation function on a delay grid.

    kind is one of 'g1_total', 'g1_incoherent', 'g2', 'background';
    flux_scale carries the photon flux the normalization refers to.
    """

    tau_grid: np.ndarray
    values: np.ndarray
    flux_scale: float
    kind: str

    def __post_init__(self):
        self.tau_grid = np.asarray(self.tau_grid, dtype=float)
        self.values = np.asarray(self.values)
        if self.tau_grid.size == 0:
            raise ValueError("empty tau grid")
        if self.tau_grid[0] != 0.0 or np.any(np.diff(self.tau_grid) <= 0):
            raise ValueError("tau grid must start at 0 and be strictly increasing")
        if self.values.shape != self.tau_grid.shape:
            raise ValueError("values and tau grid shapes differ")
        if self.kind == "g2" and np.any(np.real(self.values) < -1e-12):
            raise ValueError("g2 values must be nonnegative")


@dataclass
class Spectrum:
    """Spectral density on a frequency grid relative to the line center.

    density is photon flux per unit angular frequency; integral caches the
    trapezoid total over the grid.
    """

    omega_grid: np.ndarray
    density: np.ndarray
    integral: float | None = None

    def __post_init__(self):
        self.omega_grid = np.asarray(self.omega_grid, dtype=float)
        self.density = np.asarray(self.density, dtype=float)
        if self.omega_grid.size < 2:
            raise ValueError("omega grid needs at least two points")
        if np.any(np.diff(self.omega_grid) <= 0):
            raise ValueError("omega grid must be strictly increasing")
        tot = float(np.trapezoid(self.density, self.omega_grid))
        if self.integral is None:
            self.integral = tot
        elif abs(self.integral - tot) > 1e-9 * max(abs(tot), 1e-300):
            raise ValueError("cached integral inconsistent with density grid")


@dataclass(frozen=True)
class FluxReport:
    """Input, background, and output photon fluxes of the teleporter."""

    f_in: float
    f_s: float
    ratio: float
    mode: str  # 'exact' or 'limit'

    @property
    def f_out(self) -> float:
        return self.f_in + self.f_s


@dataclass(frozen=True)
class DesignResult:
    """Answer to a squeezing/filter design question for a target g2(0)."""

    target_g2_zero: float
    required_db: float
    required_lambda: float
    max_filter_ratio: float
    feasible: bool
