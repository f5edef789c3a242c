"""Broadband continuous-variable teleportation of light.

Closed-form coherence and spectra of a teleported resonance-fluorescence
field, squeezing/filter design solvers, and a stochastic quadrature
simulation used as an independent cross-check of the Gaussian sector.
"""

__version__ = "0.1.0"

from .analytic import (
    background_correlation,
    background_flux,
    design,
    flux_ratio,
    g1_out,
    g2_out,
    g2_out_zero,
    max_filter_ratio,
    output_spectrum,
    required_squeezing_db,
)
from .mollow import excited_population, g1_in, g2_in, incoherent_spectrum, input_flux
from .params import (
    SqueezingSingularityError,
    TeleporterParams,
    db_from_lambda,
    lambda_from_db,
    validate_regime,
)
from .series import CorrelationSeries, DesignResult, FluxReport, Spectrum

__all__ = [
    "TeleporterParams",
    "SqueezingSingularityError",
    "lambda_from_db",
    "db_from_lambda",
    "validate_regime",
    "CorrelationSeries",
    "Spectrum",
    "FluxReport",
    "DesignResult",
    "g1_in",
    "g2_in",
    "input_flux",
    "excited_population",
    "incoherent_spectrum",
    "background_flux",
    "background_correlation",
    "flux_ratio",
    "g1_out",
    "g2_out",
    "g2_out_zero",
    "output_spectrum",
    "required_squeezing_db",
    "max_filter_ratio",
    "design",
]
