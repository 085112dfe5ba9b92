from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from scipy.special import expit

from config import get_settings
from exceptions import DomainError, ParameterError
from logger import setup_logger

logger = setup_logger("models")

PEKERIS_ALPHA_WARN = 3.0


class PhysicalConstants(BaseModel):
    model_config = ConfigDict(frozen=True)

    hbar_c: float = Field(default_factory=lambda: get_settings().hbar_c, gt=0)


class WoodsSaxonSystem(BaseModel):
    """Spherical Woods-Saxon well plus the bound particle's rest energy.

    All lengths are fm and all energies MeV; ``constants.hbar_c`` is the
    only conversion factor.
    """

    model_config = ConfigDict(frozen=True)

    V0: float = Field(gt=0)
    R0: float = Field(gt=0)
    a: float = Field(gt=0)
    m0c2: float = Field(gt=0)
    constants: PhysicalConstants = Field(default_factory=PhysicalConstants)

    @model_validator(mode="after")
    def check_geometry(self) -> WoodsSaxonSystem:
        if self.a >= self.R0:
            raise ValueError(f"diffuseness a={self.a} must be smaller than R0={self.R0}")
        if self.alpha < PEKERIS_ALPHA_WARN:
            logger.warning(f"R0/a = {self.alpha:.4g} < {PEKERIS_ALPHA_WARN}: surface is not thin")
        return self

    @property
    def alpha(self) -> float:
        return self.R0 / self.a

    @property
    def hbar_c(self) -> float:
        return self.constants.hbar_c

    def rescaled_light_speed(self, kappa: float) -> WoodsSaxonSystem:
        """Same well and particle with c -> kappa*c at fixed m0 and hbar."""
        if kappa <= 0:
            raise ParameterError(f"scale factor must be positive, got {kappa}")
        return self.model_copy(update={
            "m0c2": self.m0c2 * kappa**2,
            "constants": PhysicalConstants(hbar_c=self.hbar_c * kappa),
        })


class NuclearInput(BaseModel):
    model_config = ConfigDict(frozen=True)

    A: int
    r0: float = Field(default_factory=lambda: get_settings().r0, gt=0)
    a: float = Field(default_factory=lambda: get_settings().diffuseness, gt=0)
    m0c2: float = Field(default_factory=lambda: get_settings().m0c2, gt=0)

    @field_validator("A", mode="before")
    @classmethod
    def validate_mass_number(cls, v):
        if isinstance(v, bool) or (isinstance(v, float) and not v.is_integer()):
            raise ValueError("mass number must be an integer")
        if int(v) < 1:
            raise ValueError("mass number must be ≥ 1")
        return int(v)


def validation_message(exc: ValidationError) -> str:
    return "; ".join(err["msg"].removeprefix("Value error, ") for err in exc.errors())


def build_system(**fields) -> WoodsSaxonSystem:
    try:
        return WoodsSaxonSystem(**fields)
    except ValidationError as exc:
        raise ParameterError(validation_message(exc)) from None


def nuclear_input(**fields) -> NuclearInput:
    try:
        return NuclearInput(**fields)
    except ValidationError as exc:
        raise ParameterError(validation_message(exc)) from None


def system_from_mass_number(
    nucleus: NuclearInput, constants: PhysicalConstants | None = None
) -> WoodsSaxonSystem:
    V0 = 40.5 + 0.13 * nucleus.A
    R0 = nucleus.r0 * nucleus.A ** (1.0 / 3.0)
    logger.debug(f"A={nucleus.A}: V0={V0:.4f} MeV, R0={R0:.4f} fm")
    return build_system(
        V0=V0,
        R0=R0,
        a=nucleus.a,
        m0c2=nucleus.m0c2,
        constants=constants or PhysicalConstants(),
    )


def potential_value(system: WoodsSaxonSystem, r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("potential is defined for r >= 0")
    # expit keeps large |r - R0| finite
    value = -system.V0 * expit((system.R0 - r) / system.a)
    return float(value) if value.ndim == 0 else value


def resolve_system(
    A: int | None = None,
    V0: float | None = None,
    R0: float | None = None,
    a: float | None = None,
    m0c2: float | None = None,
    constants: PhysicalConstants | None = None,
) -> WoodsSaxonSystem:
    """System from exactly one source: a mass number or an explicit (V0, R0)."""
    explicit = V0 is not None or R0 is not None
    if A is not None and explicit:
        raise ParameterError("give either A or V0/R0, not both")
    if A is None and not explicit:
        raise ParameterError("give a system: A, or V0 and R0")

    settings = get_settings()
    a = a if a is not None else settings.diffuseness
    m0c2 = m0c2 if m0c2 is not None else settings.m0c2
    constants = constants or PhysicalConstants()
    if A is not None:
        return system_from_mass_number(nuclear_input(A=A, a=a, m0c2=m0c2), constants)
    if V0 is None or R0 is None:
        raise ParameterError("explicit systems need both V0 and R0")
    return build_system(V0=V0, R0=R0, a=a, m0c2=m0c2, constants=constants)


def physical_constants(hbar_c: float | None = None) -> PhysicalConstants:
    if hbar_c is None:
        return PhysicalConstants()
    try:
        return PhysicalConstants(hbar_c=hbar_c)
    except ValidationError as exc:
        raise ParameterError(f"hbar_c: {validation_message(exc)}") from None
