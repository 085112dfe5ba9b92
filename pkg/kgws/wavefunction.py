"""Radial eigenfunctions u(z) = C z^eps (1-z)^q P_n^(2eps, 2q)(1 - 2z).

z = 1/(1 + exp(t)) with t = (r - R0)/a. Integrals are done in t, where the
endpoint powers of z and 1 - z become smooth exponential tails.
"""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.integrate import trapezoid
from scipy.special import expit, gammaln

from config import get_settings
from exceptions import DomainError, NonNormalizable, ParameterError
from logger import setup_logger
from models import WoodsSaxonSystem
from spectrum import BoundState

logger = setup_logger("wavefunction")

MIN_HALF_LENGTH = 40.0
MAX_HALF_LENGTH = 1e4
TAIL_DECADES = 30.0


class WavefunctionSpec(BaseModel):
    model_config = ConfigDict(validate_assignment=True)

    state: BoundState
    system: WoodsSaxonSystem
    eps: float
    q: float
    norm: float | None = None

    @property
    def n(self) -> int:
        return self.state.n


class RadialSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    r: float
    z: float
    u: float


def wavefunction_spec(system: WoodsSaxonSystem, state: BoundState) -> WavefunctionSpec:
    if not state.valid:
        raise ParameterError(
            f"E={state.energy:.10g} MeV does not satisfy the quantization condition; no eigenfunction"
        )
    return WavefunctionSpec(
        state=state,
        system=system,
        eps=math.sqrt(state.params.eps2),
        q=math.sqrt(max(state.params.q2, 0.0)),
    )


def z_of_r(system: WoodsSaxonSystem, r):
    z = expit(-(np.asarray(r, dtype=float) - system.R0) / system.a)
    return float(z) if z.ndim == 0 else z


def _check_parameters(a_param: float, b_param: float) -> None:
    if a_param <= -1 or b_param <= -1:
        raise ParameterError(f"Jacobi parameters must exceed -1, got ({a_param}, {b_param})")


def _jacobi_series(n: int, a_param: float, b_param: float, x: np.ndarray) -> np.ndarray:
    # terms alternate in sign; accurate while (x - 1)/2 stays in [-1/2, 0]
    ab = a_param + b_param
    m = np.arange(n + 1)
    log_coeff = (
        gammaln(a_param + n + 1) - gammaln(ab + n + 1)
        + gammaln(ab + n + m + 1) - gammaln(a_param + m + 1)
        - gammaln(m + 1) - gammaln(n - m + 1)
    )
    half = (x[..., None] - 1.0) / 2.0
    return np.sum(np.exp(log_coeff) * half**m, axis=-1)


def jacobi(n: int, a_param: float, b_param: float, x):
    """P_n^(a,b)(x) from its terminating hypergeometric series.

    For x < 0 the series is summed about the other endpoint through
    P_n^(a,b)(x) = (-1)^n P_n^(b,a)(-x).
    """
    if n < 0:
        raise ParameterError(f"degree must be >= 0, got {n}")
    _check_parameters(a_param, b_param)
    x = np.asarray(x, dtype=float)
    if n == 0:
        value = np.ones_like(x)
        return float(value) if value.ndim == 0 else value

    near = _jacobi_series(n, a_param, b_param, np.where(x >= 0, x, 0.0))
    far = (-1) ** n * _jacobi_series(n, b_param, a_param, np.where(x < 0, -x, 0.0))
    value = np.where(x >= 0, near, far)
    return float(value) if value.ndim == 0 else value


def _falling(x: float, j: int) -> float:
    return math.prod(x - i for i in range(j))


def jacobi_rodrigues(n: int, a_param: float, b_param: float, x: float) -> float:
    """Rodrigues form (1/n!) z^-a (1-z)^-b d^n/dz^n [z^(n+a) (1-z)^(n+b)], z = (1-x)/2,
    with the derivative expanded term by term."""
    _check_parameters(a_param, b_param)
    z = (1.0 - x) / 2.0
    total = 0.0
    for k in range(n + 1):
        total += (
            math.comb(n, k)
            * _falling(n + a_param, n - k)
            * (-1) ** k * _falling(n + b_param, k)
            * z**k * (1.0 - z) ** (n - k)
        )
    return total / math.factorial(n)


def radial_u_unnormalized(spec: WavefunctionSpec, z):
    z = np.asarray(z, dtype=float)
    if np.any((z <= 0) | (z >= 1)):
        raise DomainError("z must lie in the open interval (0, 1)")
    value = z**spec.eps * (1.0 - z) ** spec.q * jacobi(spec.n, 2 * spec.eps, 2 * spec.q, 1.0 - 2.0 * z)
    return float(value) if value.ndim == 0 else value


def _u_of_t(spec: WavefunctionSpec, t: np.ndarray) -> np.ndarray:
    log_z = -np.logaddexp(0.0, t)
    log_w = -np.logaddexp(0.0, -t)
    envelope = np.exp(spec.eps * log_z + spec.q * log_w)
    return envelope * jacobi(spec.n, 2 * spec.eps, 2 * spec.q, np.tanh(t / 2.0))


def _half_length(spec: WavefunctionSpec) -> float:
    smallest = min(2 * spec.eps, 2 * spec.q)
    return min(max(MIN_HALF_LENGTH, TAIL_DECADES / smallest), MAX_HALF_LENGTH)


def _t_grid(lo: float, hi: float, step: float) -> np.ndarray:
    return np.linspace(lo, hi, int(math.ceil((hi - lo) / step)) + 1)


def norm_integral(spec: WavefunctionSpec, step: float | None = None) -> float:
    """Integral of z^(2eps-1) (1-z)^(2q-1) P^2 over z in (0, 1)."""
    if spec.q <= 0 or spec.eps <= 0:
        raise NonNormalizable(f"eps={spec.eps:.6g}, q={spec.q:.6g}: integral diverges at an endpoint")
    step = step or get_settings().normalization_step
    half = _half_length(spec)
    t = _t_grid(-half, half, step)
    return float(trapezoid(_u_of_t(spec, t) ** 2, t))


def normalization_constant(spec: WavefunctionSpec, step: float | None = None) -> float:
    integral = norm_integral(spec, step)
    spec.norm = 1.0 / math.sqrt(spec.system.a * integral)
    logger.debug(f"n={spec.n}, l={spec.state.l}: C = {spec.norm:.10g}")
    return spec.norm


def physical_norm_integral(spec: WavefunctionSpec, step: float | None = None) -> float:
    """Integral of (C u)^2 over r >= 0, using the constant normalized over z in (0, 1)."""
    if spec.norm is None:
        normalization_constant(spec, step)
    step = step or get_settings().normalization_step
    t = _t_grid(-spec.system.alpha, _half_length(spec), step)
    return float(spec.norm**2 * spec.system.a * trapezoid(_u_of_t(spec, t) ** 2, t))


def sample_wavefunction(spec: WavefunctionSpec, r_grid) -> list[RadialSample]:
    if spec.norm is None:
        normalization_constant(spec)
    r = np.atleast_1d(np.asarray(r_grid, dtype=float))
    if not np.all(np.isfinite(r)):
        raise DomainError("r grid must be finite")
    t = (r - spec.system.R0) / spec.system.a
    u = spec.norm * _u_of_t(spec, t)
    z = expit(-t)
    return [RadialSample(r=float(ri), z=float(zi), u=float(ui)) for ri, zi, ui in zip(r, z, u)]


def ode_residual(spec: WavefunctionSpec, z, h: float = 1e-4):
    """Relative residual of u'' + (1-2z)/(z(1-z)) u' + Q/(z(1-z))^2 u with
    Q = -eps^2 + beta^2 z - gamma^2 z^2, derivatives by central differences."""
    z = np.asarray(z, dtype=float)
    params = spec.state.params
    u0 = radial_u_unnormalized(spec, z)
    up = radial_u_unnormalized(spec, z + h)
    um = radial_u_unnormalized(spec, z - h)

    s = z * (1.0 - z)
    second = (up - 2.0 * u0 + um) / h**2
    first = (1.0 - 2.0 * z) / s * (up - um) / (2.0 * h)
    well = (-params.eps2 + params.beta2 * z - params.gamma2 * z**2) / s**2 * u0
    scale = np.abs(second) + np.abs(first) + np.abs(well)
    return np.abs(second + first + well) / scale
