"""Closed-form Klein-Gordon bound states of the Pekeris-approximated well.

Working variables, all dimensionless:

    p = (a / hbar c)^2        L = l(l+1) / alpha^2
    eps^2   = -(E^2 - M^2) p + L C0
    beta^2  = 2 E V0 p - L C1
    gamma^2 = L C2 - p V0^2

and the quantization condition eps + sqrt(eps^2 - beta^2 + gamma^2) = n'.
Squaring it gives a quadratic in E whose roots are reported together with a
flag saying whether they satisfy the unsquared condition.
"""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import bisect

from config import get_settings
from exceptions import DomainError, NoBoundState, NoRealRoot, ParameterError
from logger import setup_logger
from models import WoodsSaxonSystem
from pekeris import pekeris_coefficients

logger = setup_logger("spectrum")

VALID_TOL = 1e-9
ROOT_AGREEMENT_TOL = 1e-10
EDGE_DECADES = 12


class DimensionlessParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps2: float
    beta2: float
    gamma2: float
    alpha: float

    @property
    def q2(self) -> float:
        return self.eps2 - self.beta2 + self.gamma2

    @property
    def eps(self) -> float:
        return math.sqrt(self.eps2) if self.eps2 > 0 else float("nan")

    @property
    def q(self) -> float:
        return math.sqrt(self.q2) if self.q2 >= 0 else float("nan")


class BoundState(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    l: int = Field(ge=0)
    energy: float
    binding: float
    m0c2: float
    n_prime: float
    root_sign: int
    residual: float
    reason: str | None = None
    valid: bool
    params: DimensionlessParams


class Diagnostic(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    l: int
    condition: str
    message: str


class SpectrumTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    system: WoodsSaxonSystem
    A: int | None = None
    rows: list[BoundState] = []
    diagnostics: list[Diagnostic] = []


def _check_quantum_numbers(n: int, l: int) -> None:
    if n < 0 or l < 0:
        raise ParameterError(f"quantum numbers must be non-negative, got n={n}, l={l}")


def _scales(system: WoodsSaxonSystem, l: int) -> tuple[float, float]:
    p = (system.a / system.hbar_c) ** 2
    L = l * (l + 1) / system.alpha**2
    return p, L


def dimensionless_parameters(system: WoodsSaxonSystem, E: float, l: int) -> DimensionlessParams:
    if l < 0:
        raise ParameterError(f"l must be >= 0, got {l}")
    p, L = _scales(system, l)
    c = pekeris_coefficients(system.alpha)
    return DimensionlessParams(
        eps2=-(E * E - system.m0c2**2) * p + L * c.C0,
        beta2=2.0 * E * system.V0 * p - L * c.C1,
        gamma2=L * c.C2 - p * system.V0**2,
        alpha=system.alpha,
    )


def _n_prime_radicand(system: WoodsSaxonSystem, l: int) -> float:
    p, _ = _scales(system, l)
    return 1.0 + 192.0 * system.a**4 * l * (l + 1) / system.R0**4 - 4.0 * p * system.V0**2


def n_prime(system: WoodsSaxonSystem, n: int, l: int) -> float:
    _check_quantum_numbers(n, l)
    radicand = _n_prime_radicand(system, l)
    if radicand < 0:
        raise DomainError(f"potential too deep for l={l}: n' radicand {radicand:.6g} < 0")
    return -n + (math.sqrt(radicand) - 1.0) / 2.0


def allowed_radial_count(system: WoodsSaxonSystem, l: int) -> int:
    top = n_prime(system, 0, l)
    return max(0, math.ceil(top))


def depth_window(system: WoodsSaxonSystem, l: int) -> tuple[float, float]:
    """Open interval (0, V0_max) of depths with gamma^2 > 0; empty for l = 0."""
    if l < 0:
        raise ParameterError(f"l must be >= 0, got {l}")
    v_max = 4.0 * system.hbar_c * system.a * math.sqrt(3.0 * l * (l + 1)) / system.R0**2
    return (0.0, v_max)


def admissible_window(system: WoodsSaxonSystem, l: int) -> tuple[float, float] | None:
    """Energies with eps^2 > 0 and eps^2 - beta^2 + gamma^2 >= 0.

    The first is |E| < E_max, the second (E + V0)^2 <= M^2 + L(C0+C1+C2)/p.
    """
    p, L = _scales(system, l)
    c = pekeris_coefficients(system.alpha)
    M2 = system.m0c2**2
    e_max = math.sqrt(M2 + L * c.C0 / p)
    w = math.sqrt(M2 + L * (c.C0 + c.C1 + c.C2) / p)
    lo = max(-e_max, -system.V0 - w)
    hi = min(e_max, -system.V0 + w)
    return (lo, hi) if lo < hi else None


def residual_reason(system: WoodsSaxonSystem, E: float, l: int) -> str | None:
    params = dimensionless_parameters(system, E, l)
    if params.eps2 < 0:
        return "eps2<0"
    if params.q2 < 0:
        return "q2<0"
    return None


def quantization_residual(system: WoodsSaxonSystem, E: float, n: int, l: int) -> float:
    params = dimensionless_parameters(system, E, l)
    if params.eps2 < 0 or params.q2 < 0:
        return math.inf
    return abs(math.sqrt(params.eps2) + math.sqrt(params.q2) - n_prime(system, n, l))


def closed_form_roots(system: WoodsSaxonSystem, n: int, l: int) -> tuple[float, float]:
    """(E+, E-) from the closed-form energy expression."""
    p, L = _scales(system, l)
    c = pekeris_coefficients(system.alpha)
    npr = n_prime(system, n, l)
    V0 = system.V0

    D = npr**2 + p * V0**2
    K = D - L * (c.C1 + c.C2)
    X = p * system.m0c2**2 + L * c.C0
    arg = X / D - (K / D) ** 2 / 4.0
    if arg < 0:
        raise NoRealRoot(n, l, arg)

    centre = -0.5 * V0 * K / D
    half_width = system.hbar_c / system.a * npr * math.sqrt(arg)
    return centre + half_width, centre - half_width


def _squared_condition(system: WoodsSaxonSystem, E: float, npr: float, l: int) -> float:
    # 4 n'^2 eps^2 - (n'^2 + beta^2 - gamma^2)^2, exactly quadratic in E
    params = dimensionless_parameters(system, E, l)
    return 4.0 * npr**2 * params.eps2 - (npr**2 + params.beta2 - params.gamma2) ** 2


def quadratic_roots(system: WoodsSaxonSystem, n: int, l: int) -> tuple[float, float]:
    """(larger, smaller) root of the squared condition, assembled by sampling it."""
    npr = n_prime(system, n, l)
    M = system.m0c2
    f_minus, f_zero, f_plus = (_squared_condition(system, E, npr, l) for E in (-M, 0.0, M))

    c2 = (f_plus + f_minus - 2.0 * f_zero) / (2.0 * M * M)
    c1 = (f_plus - f_minus) / (2.0 * M)
    c0 = f_zero

    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0:
        raise NoRealRoot(n, l, disc)
    qv = -0.5 * (c1 + math.copysign(math.sqrt(disc), c1))
    r1, r2 = qv / c2, (c0 / qv if qv != 0.0 else qv / c2)
    return max(r1, r2), min(r1, r2)


def roots_agree(first: tuple[float, float], second: tuple[float, float], tol: float = ROOT_AGREEMENT_TOL) -> bool:
    scale = max(abs(first[0]), abs(first[1]), 1.0)
    return all(abs(x - y) <= tol * scale for x, y in zip(first, second))


def binding_energy(E: float, m0c2: float) -> float:
    return E - m0c2


def particle_branch(state: BoundState) -> bool:
    return -state.m0c2 < state.energy < state.m0c2


def classify_energy(system: WoodsSaxonSystem, E: float, n: int, l: int, root_sign: int) -> BoundState:
    params = dimensionless_parameters(system, E, l)
    npr = n_prime(system, n, l)
    reason = residual_reason(system, E, l)
    residual = quantization_residual(system, E, n, l)
    valid = (
        residual <= VALID_TOL
        and params.eps2 > 0
        and 0 < params.eps <= npr + VALID_TOL
    )
    return BoundState(
        n=n,
        l=l,
        energy=E,
        binding=binding_energy(E, system.m0c2),
        m0c2=system.m0c2,
        n_prime=npr,
        root_sign=root_sign,
        residual=residual,
        reason=reason,
        valid=valid,
        params=params,
    )


def check_existence(system: WoodsSaxonSystem, n: int, l: int) -> None:
    _check_quantum_numbers(n, l)
    if l == 0:
        raise NoBoundState("radial-count", "l=0 gives n' < 0: zero angular momentum has no bound states")

    _, v_max = depth_window(system, l)
    if system.V0 >= v_max:
        raise NoBoundState(
            "depth-window",
            f"V0={system.V0:.6g} MeV is outside the depth window (0, {v_max:.6g}) MeV for l={l}",
        )

    count = allowed_radial_count(system, l)
    if n >= count:
        raise NoBoundState("radial-count", f"n={n} not allowed for l={l}: only {count} state(s) have n' > 0")


def energy_roots(system: WoodsSaxonSystem, n: int, l: int) -> tuple[BoundState, BoundState]:
    check_existence(system, n, l)

    closed = closed_form_roots(system, n, l)
    assembled = quadratic_roots(system, n, l)
    if not roots_agree(closed, assembled):
        logger.warning(f"n={n}, l={l}: closed form {closed} disagrees with assembled quadratic {assembled}")

    plus = classify_energy(system, closed[0], n, l, 1)
    minus = classify_energy(system, closed[1], n, l, -1)
    for state in (plus, minus):
        if not state.valid:
            logger.info(
                f"n={n}, l={l}: root E={state.energy:.6f} MeV fails the quantization condition "
                f"(residual {state.residual:.3g})"
            )
    return plus, minus


def _condition_on_grid(system: WoodsSaxonSystem, energies: np.ndarray, npr: float, l: int) -> np.ndarray:
    p, L = _scales(system, l)
    c = pekeris_coefficients(system.alpha)
    eps2 = -(energies**2 - system.m0c2**2) * p + L * c.C0
    beta2 = 2.0 * energies * system.V0 * p - L * c.C1
    gamma2 = L * c.C2 - p * system.V0**2
    q2 = eps2 - beta2 + gamma2
    # evaluated on the closed admissible window only; clipping removes rounding below zero
    return np.sqrt(np.clip(eps2, 0.0, None)) + np.sqrt(np.clip(q2, 0.0, None)) - npr


def edge_refined_grid(lo: float, hi: float, points: int, decades: int = EDGE_DECADES, closed: bool = False) -> np.ndarray:
    """Uniform grid on (lo, hi) plus points crowding geometrically toward both ends.

    A state with small eps lies within a tiny fraction of the window of its edge,
    inside the last uniform cell.
    """
    span = hi - lo
    uniform = np.linspace(lo, hi, points + 2)
    if not closed:
        uniform = uniform[1:-1]
    offsets = span * np.geomspace(10.0**-decades, 1.0 / (points + 1), 2 * decades + 1, endpoint=False)
    grid = np.unique(np.concatenate([uniform, lo + offsets, hi - offsets]))
    return grid[(grid >= lo) & (grid <= hi)]


def solve_quantization_scan(
    system: WoodsSaxonSystem,
    n: int,
    l: int,
    scan_points: int | None = None,
    tol: float | None = None,
) -> list[BoundState]:
    settings = get_settings()
    scan_points = scan_points or settings.scan_points
    tol = tol or settings.scan_tol
    _check_quantum_numbers(n, l)
    if l == 0:
        return []

    try:
        npr = n_prime(system, n, l)
    except DomainError:
        return []
    window = admissible_window(system, l)
    if window is None:
        return []

    # the edges are included: there eps or q vanishes and the condition has a finite limit
    energies = edge_refined_grid(window[0], window[1], scan_points, closed=True)
    values = _condition_on_grid(system, energies, npr, l)

    def condition(E: float) -> float:
        return float(_condition_on_grid(system, np.array([E]), npr, l)[0])

    roots = list(energies[values == 0.0])
    crossings = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
    for i in crossings:
        # refine past tol so the residual meets VALID_TOL where the condition is steep
        roots.append(bisect(condition, energies[i], energies[i + 1], xtol=tol * 1e-3, maxiter=400))

    try:
        e_plus, e_minus = closed_form_roots(system, n, l)
    except NoRealRoot:
        e_plus, e_minus = math.inf, -math.inf

    states = []
    for E in sorted(roots):
        sign = 1 if abs(E - e_plus) <= abs(E - e_minus) else -1
        state = classify_energy(system, float(E), n, l, sign)
        if state.valid:
            states.append(state)
        else:
            logger.warning(f"n={n}, l={l}: scan root E={E:.10g} MeV failed validation")
    logger.debug(f"n={n}, l={l}: scan found {len(states)} state(s) in {window}")
    return states


def energy_nonrelativistic(system: WoodsSaxonSystem, n: int, l: int) -> float:
    """Schrodinger limit of the bound-state energy, measured from the rest energy."""
    _check_quantum_numbers(n, l)
    ratio = system.a / system.R0
    T = math.sqrt(1.0 + 192.0 * l * (l + 1) * ratio**4) - 2 * n - 1
    if T <= 0:
        raise NoBoundState("radial-count", f"n={n}, l={l}: nonrelativistic radial factor {T:.6g} <= 0")

    hc2 = system.hbar_c**2
    M = system.m0c2
    coupling = M * system.V0 * system.a**2 / hc2
    centrifugal = hc2 * l * (l + 1) / (2.0 * M * system.R0**2) * (1.0 + 12.0 * ratio**2)
    well = hc2 / (2.0 * M * system.a**2) * (
        T**2 / 16.0
        + 4.0 * (coupling - 4.0 * l * (l + 1) * ratio**3) ** 2 / T**2
        + coupling
    )
    return centrifugal - well


def enumerate_spectrum(system: WoodsSaxonSystem, l_max: int, A: int | None = None) -> SpectrumTable:
    if l_max < 0:
        raise ParameterError(f"l_max must be >= 0, got {l_max}")

    rows: list[BoundState] = []
    diagnostics: list[Diagnostic] = []
    for l in range(l_max + 1):
        try:
            check_existence(system, 0, l)
            count = allowed_radial_count(system, l)
        except NoBoundState as exc:
            diagnostics.append(Diagnostic(n=0, l=l, condition=exc.condition, message=exc.message))
            continue
        for n in range(count):
            try:
                rows.extend(energy_roots(system, n, l))
            except NoRealRoot as exc:
                diagnostics.append(Diagnostic(n=n, l=l, condition="complex-roots", message=exc.message))

    rows.sort(key=lambda s: (s.l, s.n, s.energy))
    logger.info(f"spectrum up to l={l_max}: {len(rows)} candidate(s), {len(diagnostics)} exclusion(s)")
    return SpectrumTable(system=system, A=A, rows=rows, diagnostics=diagnostics)
