"""Pekeris replacement of the centrifugal barrier.

The 1/r^2 term is expanded around r = R0 in x = (r - R0)/R0 and matched
through x^2 by C0 + C1 y + C2 y^2 with y = 1/(1 + exp(alpha x)).
"""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.special import expit

from exceptions import DomainError, ParameterError
from logger import setup_logger

logger = setup_logger("pekeris")

SUM_RULE_TOL = 1e-9


class PekerisCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True)

    C0: float
    C1: float
    C2: float
    alpha: float

    @model_validator(mode="after")
    def check_sum_rules(self) -> PekerisCoefficients:
        scale = max(1.0, abs(self.C0), abs(self.C1), abs(self.C2))
        rules = (
            self.C0 + self.C1 / 2 + self.C2 / 4 - 1.0,
            self.C1 + self.C2 - 8.0 / self.alpha,
            self.C2 - 48.0 / self.alpha**2,
        )
        if max(abs(r) for r in rules) > SUM_RULE_TOL * scale:
            raise ValueError("coefficients do not match the centrifugal Taylor expansion")
        return self

    def delta(self, l: int, R0: float, m0c2: float, hbar_c: float) -> float:
        """Energy scale hbar^2 l(l+1) / (2 m0 R0^2) of the expanded barrier, MeV."""
        return hbar_c**2 * l * (l + 1) / (2.0 * m0c2 * R0**2)


def pekeris_coefficients(alpha: float) -> PekerisCoefficients:
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    if alpha < 3:
        logger.debug(f"alpha = {alpha:.4g} < 3: Pekeris expansion is poorly justified")
    inv = 1.0 / alpha
    return PekerisCoefficients(
        C0=1.0 - 4.0 * inv + 12.0 * inv**2,
        C1=8.0 * inv - 48.0 * inv**2,
        C2=48.0 * inv**2,
        alpha=alpha,
    )


def _check_l(l: int) -> None:
    if l < 0:
        raise ParameterError(f"angular momentum must be >= 0, got {l}")


def centrifugal_exact(l: int, r, R0: float):
    _check_l(l)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("centrifugal term has a pole at r = 0")
    value = l * (l + 1) * R0**2 / r**2
    return float(value) if value.ndim == 0 else value


def centrifugal_pekeris(coeffs: PekerisCoefficients, l: int, x):
    _check_l(l)
    y = expit(-coeffs.alpha * np.asarray(x, dtype=float))
    value = l * (l + 1) * (coeffs.C0 + coeffs.C1 * y + coeffs.C2 * y**2)
    return float(value) if value.ndim == 0 else value
