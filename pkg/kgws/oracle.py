"""Shooting eigensolver for the Pekeris-approximated radial equation.

In t = (r - R0)/a the equation reads

    u''(t) + [-eps^2 + beta^2 f - gamma^2 f^2] u = 0,    f = 1/(1 + e^t),

with eps^2 and beta^2 depending on E. Trial energies are integrated side by
side as numpy arrays; the two solutions meet at t = 0 and their normalized
Wronskian is the residual whose zeros are the eigenvalues.
"""

from __future__ import annotations

import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import expit

from config import get_settings
from exceptions import AppException, DomainError, NonDecayingAsymptotics
from logger import setup_logger
from models import WoodsSaxonSystem
from pekeris import pekeris_coefficients
from spectrum import (
    BoundState,
    SpectrumTable,
    admissible_window,
    allowed_radial_count,
    edge_refined_grid,
    energy_roots,
)

logger = setup_logger("oracle")

RENORM_EVERY = 32
REFINE_POINTS = 2**7
MAX_REFINE_PASSES = 12
EDGE_DECADES = 10


class OracleConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    domain: Literal["mathematical", "physical"] = Field(default_factory=lambda: get_settings().oracle_domain)
    length: float = Field(default_factory=lambda: get_settings().oracle_length, gt=0)
    step: float = Field(default_factory=lambda: get_settings().oracle_step, gt=0)
    scan_points: int = Field(default_factory=lambda: get_settings().oracle_scan_points, ge=100)
    refine_tol: float = Field(default_factory=lambda: get_settings().oracle_refine_tol, gt=0)
    match_tol: float = Field(default_factory=lambda: get_settings().match_tol, gt=0)
    match_point: float = 0.0
    window: tuple[float, float] | None = None


class AnalyticMatch(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    analytic: float
    oracle: float
    delta: float
    nodes: int


class OracleReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    l: int
    domain: str
    eigenvalues: list[float] = []
    nodes: list[int] = []
    brackets: list[tuple[float, float]] = []
    analytic_deltas: list[AnalyticMatch] = []
    unmatched_analytic: list[float] = []
    unmatched_oracle: list[float] = []

    def energy_with_nodes(self, count: int) -> float | None:
        energies = [E for E, k in zip(self.eigenvalues, self.nodes) if k == count]
        return max(energies) if energies else None


class UnmatchedState(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    energy: float
    valid: bool
    classification: str


class SpectrumComparison(BaseModel):
    model_config = ConfigDict(frozen=True)

    l: int
    matches: list[AnalyticMatch] = []
    unmatched_analytic: list[UnmatchedState] = []
    unmatched_oracle: list[float] = []


class _Coupling:
    """E-dependent coefficients of the t-equation for an array of energies."""

    def __init__(self, system: WoodsSaxonSystem, l: int, energies: np.ndarray):
        p = (system.a / system.hbar_c) ** 2
        L = l * (l + 1) / system.alpha**2
        c = pekeris_coefficients(system.alpha)
        self.eps2 = -(energies**2 - system.m0c2**2) * p + L * c.C0
        self.beta2 = 2.0 * energies * system.V0 * p - L * c.C1
        self.gamma2 = L * c.C2 - p * system.V0**2

    @property
    def q2(self) -> np.ndarray:
        return self.eps2 - self.beta2 + self.gamma2

    def well(self, f: float) -> np.ndarray:
        return -self.eps2 + self.beta2 * f - self.gamma2 * f * f


def _integrate(coupling: _Coupling, t_start: float, t_end: float, step: float, u, v):
    """RK4 from t_start to t_end; returns (u, v, sign changes of u)."""
    n_steps = max(1, math.ceil(abs(t_end - t_start) / step))
    h = (t_end - t_start) / n_steps
    f = expit(-(t_start + 0.5 * h * np.arange(2 * n_steps + 1)))

    u, v = u.astype(float).copy(), v.astype(float).copy()
    nodes = np.zeros(u.shape, dtype=int)
    last_sign = np.sign(u)
    w_next = coupling.well(f[0])
    for i in range(n_steps):
        w_a, w_m, w_b = w_next, coupling.well(f[2 * i + 1]), coupling.well(f[2 * i + 2])
        k1u, k1v = v, -w_a * u
        k2u, k2v = v + 0.5 * h * k1v, -w_m * (u + 0.5 * h * k1u)
        k3u, k3v = v + 0.5 * h * k2v, -w_m * (u + 0.5 * h * k2u)
        k4u, k4v = v + h * k3v, -w_b * (u + h * k3u)
        u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        w_next = w_b

        sign = np.sign(u)
        nodes += (sign * last_sign < 0)
        last_sign = np.where(sign != 0, sign, last_sign)

        if i % RENORM_EVERY == 0:
            scale = np.maximum(np.abs(u), np.abs(v))
            u, v = u / scale, v / scale
    return u, v, nodes


def _shoot(system: WoodsSaxonSystem, l: int, energies: np.ndarray, config: OracleConfig):
    coupling = _Coupling(system, l, energies)
    if np.any(coupling.eps2 <= 0):
        bad = int(np.argmax(coupling.eps2 <= 0))
        raise NonDecayingAsymptotics(float(energies[bad]), float(coupling.eps2[bad]))
    eps = np.sqrt(coupling.eps2)
    ones = np.ones_like(energies)

    if config.domain == "mathematical":
        if np.any(coupling.q2 < 0):
            raise DomainError("eps^2 - beta^2 + gamma^2 < 0: no decaying solution as t -> -infinity")
        left = _integrate(coupling, -config.length, config.match_point, config.step, ones, np.sqrt(coupling.q2))
    else:
        left = _integrate(coupling, -system.alpha, config.match_point, config.step, np.zeros_like(energies), ones)
    right = _integrate(coupling, config.length, config.match_point, config.step, ones, -eps)

    (uL, vL, nL), (uR, vR, nR) = left, right
    wronskian = (uL * vR - vL * uR) / np.sqrt((uL**2 + vL**2) * (uR**2 + vR**2))
    return wronskian, nL + nR


def matching_residual(system: WoodsSaxonSystem, l: int, E, config: OracleConfig | None = None):
    """Normalized Wronskian at the matching point; E may be a scalar or an array."""
    config = config or OracleConfig()
    energies = np.asarray(E, dtype=float)
    wronskian, _ = _shoot(system, l, energies.reshape(-1), config)
    return float(wronskian[0]) if energies.ndim == 0 else wronskian.reshape(energies.shape)


def node_count(system: WoodsSaxonSystem, l: int, E: float, config: OracleConfig | None = None) -> int:
    config = config or OracleConfig()
    _, nodes = _shoot(system, l, np.array([float(E)]), config)
    return int(nodes[0])


def scan_window(system: WoodsSaxonSystem, l: int, config: OracleConfig) -> tuple[float, float] | None:
    if config.window is not None:
        return config.window
    if config.domain == "mathematical":
        return admissible_window(system, l)
    p = (system.a / system.hbar_c) ** 2
    L = l * (l + 1) / system.alpha**2
    e_max = math.sqrt(system.m0c2**2 + L * pekeris_coefficients(system.alpha).C0 / p)
    return (-e_max, e_max)


def _refine(system, l, lo, hi, w_lo, config: OracleConfig):
    """Multi-section search shrinking every bracket by REFINE_POINTS + 1 per pass."""
    fractions = np.arange(1, REFINE_POINTS + 1) / (REFINE_POINTS + 1)
    for _ in range(MAX_REFINE_PASSES):
        if np.all(hi - lo <= config.refine_tol):
            break
        inner = lo[:, None] + (hi - lo)[:, None] * fractions
        w_inner, _ = _shoot(system, l, inner.ravel(), config)
        w_inner = w_inner.reshape(inner.shape)

        grid = np.column_stack([lo, inner, hi])
        signs = np.sign(np.column_stack([w_lo, w_inner, np.zeros_like(lo)]))
        # the last column only closes the bracket; a sign change is known to lie before it
        change = signs[:, :-2] * signs[:, 1:-1] <= 0
        j = np.where(change.any(axis=1), np.argmax(change, axis=1), REFINE_POINTS)
        rows = np.arange(len(lo))
        lo, hi = grid[rows, j], grid[rows, j + 1]
        w_lo = np.column_stack([w_lo, w_inner])[rows, j]
    return 0.5 * (lo + hi)


def _analytic_states(system: WoodsSaxonSystem, l: int) -> list[BoundState]:
    states = []
    try:
        count = allowed_radial_count(system, l)
    except AppException:
        return states
    for n in range(count):
        try:
            states.extend(s for s in energy_roots(system, n, l) if s.valid)
        except AppException:
            continue
    return states


def eigenvalues(system: WoodsSaxonSystem, l: int, config: OracleConfig | None = None) -> OracleReport:
    config = config or OracleConfig()
    window = scan_window(system, l, config)
    if window is None:
        logger.info(f"l={l}: empty {config.domain} window, no eigenvalues")
        return OracleReport(l=l, domain=config.domain)

    # open at both ends: the decaying boundary values need eps^2 > 0 and q^2 >= 0
    energies = edge_refined_grid(window[0], window[1], config.scan_points, decades=EDGE_DECADES)
    wronskian, _ = _shoot(system, l, energies, config)
    idx = np.nonzero(np.sign(wronskian[:-1]) * np.sign(wronskian[1:]) <= 0)[0]
    # a sample sitting exactly on a zero opens two brackets; keep the first
    idx = idx[np.concatenate(([True], np.diff(idx) > 1))] if idx.size else idx

    if idx.size:
        roots = _refine(system, l, energies[idx], energies[idx + 1], wronskian[idx], config)
        _, nodes = _shoot(system, l, roots, config)
    else:
        roots, nodes = np.array([]), np.array([], dtype=int)

    found = [float(E) for E in roots]
    brackets = [(float(energies[i]), float(energies[i + 1])) for i in idx]
    if not found:
        logger.info(f"l={l}: no sign change of the matching residual in {window}")

    matches, unmatched_analytic = [], []
    claimed: set[int] = set()
    for state in _analytic_states(system, l):
        if not found:
            unmatched_analytic.append(state.energy)
            continue
        k = int(np.argmin([abs(E - state.energy) for E in found]))
        delta = abs(found[k] - state.energy)
        if delta <= config.match_tol and k not in claimed:
            claimed.add(k)
            matches.append(AnalyticMatch(
                n=state.n, analytic=state.energy, oracle=found[k], delta=delta, nodes=int(nodes[k])
            ))
        else:
            unmatched_analytic.append(state.energy)

    logger.debug(f"l={l}, {config.domain}: {len(found)} eigenvalue(s), {len(matches)} matched")
    return OracleReport(
        l=l,
        domain=config.domain,
        eigenvalues=found,
        nodes=[int(k) for k in nodes],
        brackets=brackets,
        analytic_deltas=matches,
        unmatched_analytic=unmatched_analytic,
        unmatched_oracle=[E for k, E in enumerate(found) if k not in claimed],
    )


def compare_spectra(analytic: SpectrumTable, oracle: OracleReport, tol: float | None = None) -> SpectrumComparison:
    tol = tol if tol is not None else get_settings().match_tol
    remaining = dict(enumerate(oracle.eigenvalues))
    matches, unmatched = [], []

    for state in (s for s in analytic.rows if s.l == oracle.l):
        nearest = min(remaining, key=lambda k: abs(remaining[k] - state.energy), default=None)
        if nearest is not None and abs(remaining[nearest] - state.energy) <= tol:
            E = remaining.pop(nearest)
            nodes = oracle.nodes[nearest] if nearest < len(oracle.nodes) else -1
            matches.append(AnalyticMatch(
                n=state.n, analytic=state.energy, oracle=E, delta=abs(E - state.energy), nodes=nodes
            ))
            continue
        classification = "missed by oracle" if state.valid else "spurious quadratic root"
        unmatched.append(UnmatchedState(n=state.n, energy=state.energy, valid=state.valid, classification=classification))

    return SpectrumComparison(
        l=oracle.l,
        matches=matches,
        unmatched_analytic=unmatched,
        unmatched_oracle=sorted(remaining.values()),
    )
