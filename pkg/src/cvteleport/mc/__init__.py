"""Stochastic quadrature simulation of the teleporter chain."""

from .engine import EstimatorSet, RunSettings, background_spectrum_mc, run_ensemble
from .kernels import integrate_chain

__all__ = [
    "EstimatorSet",
    "RunSettings",
    "run_ensemble",
    "background_spectrum_mc",
    "integrate_chain",
]
