"""Nikiforov-Uvarov reduction of

    psi'' + (tau_tilde / sigma) psi' + (sigma_tilde / sigma^2) psi = 0

Polynomials are coefficient tuples, highest degree first: sigma and
sigma_tilde as (c2, c1, c0), tau_tilde, pi and tau as (d1, d0).
"""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from exceptions import AmbiguousBranch, DegenerateProblem, DomainError, NoValidBranch, ParameterError
from logger import setup_logger

logger = setup_logger("nu")

Quadratic = tuple[float, float, float]
Linear = tuple[float, float]

SQUARE_TOL = 1e-10
EXPONENT_TOL = 1e-12


class NUProblem(BaseModel):
    model_config = ConfigDict(frozen=True)

    sigma: Quadratic
    sigma_tilde: Quadratic
    tau_tilde: Linear
    interval: tuple[float, float] = (0.0, 1.0)

    @model_validator(mode="after")
    def check_problem(self) -> NUProblem:
        if not any(self.sigma):
            raise ValueError("sigma must not be the zero polynomial")
        lo, hi = self.interval
        if not lo < hi:
            raise ValueError(f"interval must satisfy lo < hi, got ({lo}, {hi})")
        return self

    @property
    def half_shift(self) -> Linear:
        """(sigma' - tau_tilde)/2, the k-independent part of pi."""
        c2, c1, _ = self.sigma
        d1, d0 = self.tau_tilde
        return ((2.0 * c2 - d1) / 2.0, (c1 - d0) / 2.0)


class NUBranch(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: float
    pi: Linear
    sign: int
    tau: Linear
    lambda_: float

    @property
    def tau_prime(self) -> float:
        return self.tau[0]

    @property
    def tau_root(self) -> float:
        return -self.tau[1] / self.tau[0]


def woods_saxon_problem(eps2: float, beta2: float, gamma2: float) -> NUProblem:
    """Hypergeometric form of the Pekeris-approximated radial equation in z."""
    return NUProblem(
        sigma=(-1.0, 1.0, 0.0),
        sigma_tilde=(-gamma2, beta2, -eps2),
        tau_tilde=(-2.0, 1.0),
    )


def _radicand(problem: NUProblem, k: float) -> Quadratic:
    """Coefficients of (sigma' - tau_tilde)^2/4 - sigma_tilde + k sigma."""
    h1, h0 = problem.half_shift
    s2, s1, s0 = problem.sigma_tilde
    c2, c1, c0 = problem.sigma
    return (h1 * h1 - s2 + k * c2, 2.0 * h1 * h0 - s1 + k * c1, h0 * h0 - s0 + k * c0)


def _k_quadratic(problem: NUProblem) -> Quadratic:
    # radicand coefficients are linear in k: A0 + A1 k, B0 + B1 k, C0 + C1 k
    A0, B0, C0 = _radicand(problem, 0.0)
    A1, B1, C1 = problem.sigma
    return (
        B1 * B1 - 4.0 * A1 * C1,
        2.0 * B0 * B1 - 4.0 * (A0 * C1 + A1 * C0),
        B0 * B0 - 4.0 * A0 * C0,
    )


def nu_k_candidates(problem: NUProblem) -> list[float]:
    a, b, c = _k_quadratic(problem)
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0:
        raise DegenerateProblem()

    tiny = SQUARE_TOL * scale
    if abs(a) <= tiny:
        if abs(b) <= tiny:
            return []
        return [-c / b]

    disc = b * b - 4.0 * a * c
    if disc < -SQUARE_TOL * max(b * b, abs(4.0 * a * c)):
        return []
    if disc <= SQUARE_TOL * max(b * b, abs(4.0 * a * c)):
        return [-b / (2.0 * a)]

    # cancellation-free pair
    root = math.sqrt(disc)
    qv = -0.5 * (b + math.copysign(root, b))
    candidates = [qv / a, c / qv] if qv != 0.0 else [-b / (2.0 * a)]
    return sorted(candidates)


def _check_zero_discriminant(problem: NUProblem, k: float) -> None:
    # the radicand discriminant is the k-quadratic evaluated at k
    a, b, c = _k_quadratic(problem)
    terms = (a * k * k, b * k, c)
    scale = max(abs(x) for x in terms)
    if abs(sum(terms)) > SQUARE_TOL * scale:
        raise ParameterError(
            f"k={k:.12g} does not make the radicand a perfect square "
            f"(discriminant {sum(terms):.3e})"
        )


def _perfect_square(A: float, B: float, C: float) -> Linear:
    """(s, t) with A z^2 + B z + C = (s z + t)^2 and s >= 0."""
    scale = max(abs(A), abs(B), abs(C))
    if scale == 0.0:
        return (0.0, 0.0)
    if A < -SQUARE_TOL * scale or C < -SQUARE_TOL * scale:
        raise DomainError("radicand is a negative square; pi(z) is not real")
    A, C = max(A, 0.0), max(C, 0.0)
    if A > SQUARE_TOL * scale:
        s = math.sqrt(A)
        return (s, B / (2.0 * s))
    return (0.0, math.sqrt(C))


def nu_pi_for_k(problem: NUProblem, k: float, sign: int) -> Linear:
    if sign not in (1, -1):
        raise ParameterError(f"sign must be +1 or -1, got {sign}")
    _check_zero_discriminant(problem, k)
    s, t = _perfect_square(*_radicand(problem, k))
    h1, h0 = problem.half_shift
    return (h1 + sign * s, h0 + sign * t)


def _build_branch(problem: NUProblem, k: float, sign: int) -> NUBranch:
    pi = nu_pi_for_k(problem, k, sign)
    d1, d0 = problem.tau_tilde
    tau = (d1 + 2.0 * pi[0], d0 + 2.0 * pi[1])
    return NUBranch(k=k, pi=pi, sign=sign, tau=tau, lambda_=k + pi[0])


def _phi_is_finite(problem: NUProblem, branch: NUBranch) -> bool:
    # Phi'/Phi = pi/sigma, so near a root z_r of sigma Phi ~ (z - z_r)^(pi(z_r)/sigma'(z_r))
    sigma = np.asarray(problem.sigma)
    d_sigma = np.polyder(sigma)
    scale = float(np.max(np.abs(sigma)))
    for end in problem.interval:
        if not math.isfinite(end) or abs(np.polyval(sigma, end)) > EXPONENT_TOL * scale:
            continue
        slope = float(np.polyval(d_sigma, end))
        if slope == 0.0:
            continue
        exponent = float(np.polyval(branch.pi, end)) / slope
        if exponent < -EXPONENT_TOL:
            return False
    return True


def _is_admissible(problem: NUProblem, branch: NUBranch) -> bool:
    lo, hi = problem.interval
    return (
        branch.tau_prime < 0
        and lo < branch.tau_root < hi
        and _phi_is_finite(problem, branch)
    )


def nu_select_branch(problem: NUProblem) -> NUBranch:
    candidates = []
    for k in nu_k_candidates(problem):
        for sign in (-1, 1):
            try:
                branch = _build_branch(problem, k, sign)
            except DomainError:
                continue
            if not any(b.pi == branch.pi and b.k == branch.k for b in candidates):
                candidates.append(branch)

    admissible = [b for b in candidates if _is_admissible(problem, b)]
    logger.debug(f"{len(candidates)} branch candidates, {len(admissible)} admissible")

    if not admissible:
        raise NoValidBranch()
    if len(admissible) > 1:
        raise AmbiguousBranch(len(admissible))
    return admissible[0]


def nu_lambda_n(branch: NUBranch, problem: NUProblem, n: int) -> float:
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    sigma_second = 2.0 * problem.sigma[0]
    return -n * branch.tau_prime - n * (n - 1) / 2.0 * sigma_second
