"""Physical parameters, squeezing conversions, and regime diagnostics.

All rates are half-bandwidths of single-pole (Lorentzian) responses with
unit DC gain, H(omega) = gamma / (gamma + i*omega); "bandwidth 2*gamma"
is the FWHM.  Rates are quoted in units of the emitter rate gamma_i
(gamma_i = 1 by default), matching the figure conventions used throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class SqueezingSingularityError(ValueError):
    """Raised for lambda = 1: the slow squeezing rate gamma_minus vanishes."""


def lambda_from_db(db: float) -> float:
    """Convert line-center squeezing in dB to the pump parameter lambda.

    Inverts -20*log10((1 - lambda)/(1 + lambda)) = db exactly:
    lambda = (1 - 10**(-db/20)) / (1 + 10**(-db/20)).
    """
    if db < 0:
        raise ValueError(f"squeezing must be >= 0 dB, got {db}")
    r = 10.0 ** (-db / 20.0)
    return (1.0 - r) / (1.0 + r)


def db_from_lambda(lam: float) -> float:
    """Line-center squeezing in dB for pump parameter lambda in [0, 1)."""
    if not 0.0 <= lam < 1.0:
        if lam == 1.0:
            raise SqueezingSingularityError(
                "lambda = 1 is the infinite-squeezing singularity (gamma_minus = 0)"
            )
        raise ValueError(f"lambda must be in [0, 1), got {lam}")
    return -20.0 * math.log10((1.0 - lam) / (1.0 + lam))


@dataclass(frozen=True)
class TeleporterParams:
    """All rates and ratios of the teleporter chain.

    gamma_i     emitter rate, half the Einstein A coefficient
    gamma_s     half the squeezing bandwidth
    gamma_A     half Alice's measurement bandwidth
    gamma_B     half Bob's filter bandwidth
    lam         pump parameter of both squeezers, in [0, 1)
    eta         collection efficiency into the teleporter input, in (0, 1]
    omega_rabi  Rabi frequency of the driven two-state input source
    """

    gamma_s: float
    gamma_A: float
    gamma_B: float
    lam: float = 0.0
    eta: float = 1.0
    omega_rabi: float = 0.0
    gamma_i: float = 1.0

    def __post_init__(self):
        for name in ("gamma_i", "gamma_s", "gamma_A", "gamma_B"):
            v = getattr(self, name)
            if not v > 0:
                raise ValueError(f"{name} must be strictly positive, got {v}")
        if self.lam == 1.0:
            raise SqueezingSingularityError(
                "lambda = 1 is the infinite-squeezing singularity (gamma_minus = 0)"
            )
        if not 0.0 <= self.lam < 1.0:
            raise ValueError(f"lambda must be in [0, 1), got {self.lam}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must be in (0, 1], got {self.eta}")
        if self.omega_rabi < 0:
            raise ValueError(f"omega_rabi must be >= 0, got {self.omega_rabi}")

    @property
    def gamma_plus(self) -> float:
        """Fast squeezer rate gamma_s * (1 + lambda)."""
        return self.gamma_s * (1.0 + self.lam)

    @property
    def gamma_minus(self) -> float:
        """Slow squeezer rate gamma_s * (1 - lambda)."""
        return self.gamma_s * (1.0 - self.lam)

    @property
    def squeezing_db(self) -> float:
        return db_from_lambda(self.lam)

    def replace(self, **kwargs) -> "TeleporterParams":
        from dataclasses import replace

        return replace(self, **kwargs)


@dataclass
class RegimeReport:
    """Diagnostics on the validity of the simplified broadband formulas.

    The closed forms assume gamma_A >> gamma_B, gamma_s, gamma_i and
    gamma_B >> gamma_i; `simplified_formulas_valid` holds iff every ratio
    clears the configured threshold.  `filter_constraint_margin` is the
    design bound on gamma_B/gamma_s minus the actual value (positive means
    the configuration is admissible for the target g2(0)).
    """

    simplified_formulas_valid: bool
    violated: list = field(default_factory=list)
    filter_constraint_margin: float | None = None
    notes: str = ""


def validate_regime(
    params: TeleporterParams,
    target_g2_zero: float | None = None,
    ratio_threshold: float = 10.0,
) -> RegimeReport:
    """Report which broadband assumptions hold and the filter-bound margin.

    Diagnostic only: never raises for out-of-regime parameters, since the
    reference figures themselves use marginal ratios.
    """
    violated = []
    checks = [
        ("gamma_A/gamma_B", params.gamma_A / params.gamma_B),
        ("gamma_A/gamma_s", params.gamma_A / params.gamma_s),
        ("gamma_A/gamma_i", params.gamma_A / params.gamma_i),
        ("gamma_B/gamma_i", params.gamma_B / params.gamma_i),
    ]
    for name, ratio in checks:
        if ratio < ratio_threshold:
            violated.append(f"{name} = {ratio:.3g} < {ratio_threshold:g}")

    margin = None
    notes = []
    if target_g2_zero is not None:
        # local import: analytic depends on params, not the reverse
        from .analytic import max_filter_ratio

        bound = max_filter_ratio(
            target_g2_zero,
            omega_rabi=params.omega_rabi,
            gamma_i=params.gamma_i,
            gamma_B=params.gamma_B,
            eta=params.eta,
        )
        margin = bound - params.gamma_B / params.gamma_s
        notes.append(
            f"filter bound gamma_B/gamma_s < {bound:.4g} for target g2(0) = "
            f"{target_g2_zero:g}; actual {params.gamma_B / params.gamma_s:.4g}"
        )
    if violated:
        notes.append("broadband assumptions marginal: " + "; ".join(violated))
    return RegimeReport(
        simplified_formulas_valid=not violated,
        violated=violated,
        filter_constraint_margin=margin,
        notes=" | ".join(notes),
    )
