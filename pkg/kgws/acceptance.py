"""Self-checks run by ``kgws verify``.

Each check returns a CheckResult; the command exits non-zero when any fails.
Systems with a known valid root are built backwards from the target
(eps, gamma^2) so the oracle and wavefunction checks have something to certify.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import beta as beta_function

from exceptions import AppException, NoBoundState, NoRealRoot, ParameterError
from logger import setup_logger
from models import NuclearInput, PhysicalConstants, WoodsSaxonSystem, build_system, system_from_mass_number
from nu import nu_k_candidates, nu_lambda_n, nu_select_branch, woods_saxon_problem
from oracle import OracleConfig, eigenvalues
from pekeris import pekeris_coefficients
from reference import PUBLISHED_TABLE, monotone_in_l
from spectrum import (
    BoundState,
    closed_form_roots,
    depth_window,
    energy_nonrelativistic,
    energy_roots,
    enumerate_spectrum,
    quadratic_roots,
    roots_agree,
    solve_quantization_scan,
)
from wavefunction import jacobi, jacobi_rodrigues, norm_integral, normalization_constant, ode_residual, wavefunction_spec

logger = setup_logger("acceptance")

SEED = 20240601


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    detail: str


class SyntheticCase(BaseModel):
    model_config = ConfigDict(frozen=True)

    system: WoodsSaxonSystem
    n: int
    l: int
    energy: float


def synthetic_system(
    alpha: float,
    l: int,
    eps: float,
    v: float | None = None,
    gamma2: float | None = None,
    n: int = 0,
    a: float = 1.0,
    constants: PhysicalConstants | None = None,
) -> SyntheticCase:
    """Well whose (n, l) state has the prescribed eps, solved backwards for V0 and m0c2.

    Give either the dimensionless depth v = V0 a / hbar c or gamma^2.
    """
    constants = constants or PhysicalConstants()
    L = l * (l + 1) / alpha**2
    c = pekeris_coefficients(alpha)
    if (v is None) == (gamma2 is None):
        raise ParameterError("give exactly one of v and gamma2")
    if v is None:
        v = math.sqrt(L * c.C2 - gamma2)
    gamma2 = L * c.C2 - v * v
    if gamma2 <= 0:
        raise ParameterError(f"depth v={v} leaves gamma^2={gamma2:.6g} <= 0")

    npr = (math.sqrt(1.0 + 4.0 * gamma2) - 1.0) / 2.0 - n
    if not 0 < eps < npr:
        raise ParameterError(f"eps={eps} must lie in (0, n'={npr:.6g})")
    beta2 = gamma2 - npr**2 + 2.0 * npr * eps
    e = (beta2 + L * c.C1) / (2.0 * v)
    mu2 = eps**2 + e**2 - L * c.C0
    if mu2 <= 0:
        raise ParameterError(f"no positive rest energy for eps={eps}, v={v}")

    scale = constants.hbar_c / a
    system = build_system(V0=v * scale, R0=alpha * a, a=a, m0c2=math.sqrt(mu2) * scale, constants=constants)
    return SyntheticCase(system=system, n=n, l=l, energy=e * scale)


SYNTHETIC_CASES = (
    dict(alpha=4.0, l=3, v=0.4, eps=0.4),
    dict(alpha=5.0, l=4, v=0.3, eps=0.3),
    dict(alpha=8.0, l=13, gamma2=2.09, eps=0.4),
    dict(alpha=4.0, l=3, v=0.4, eps=0.02, n=1),
)


def synthetic_cases(constants: PhysicalConstants | None = None) -> list[SyntheticCase]:
    return [synthetic_system(constants=constants, **kw) for kw in SYNTHETIC_CASES]


def valid_state(case: SyntheticCase) -> BoundState:
    for state in energy_roots(case.system, case.n, case.l):
        if state.valid:
            return state
    raise NoBoundState("radial-count", f"no valid root for synthetic n={case.n}, l={case.l}")


def table_systems(constants: PhysicalConstants | None = None):
    for ref in PUBLISHED_TABLE:
        yield ref, system_from_mass_number(NuclearInput(A=ref.A), constants)


def check_pekeris_sum_rules(constants=None) -> CheckResult:
    worst = 0.0
    for alpha in (3.0, 6.76092, 10.0, 100.0):
        c = pekeris_coefficients(alpha)
        worst = max(
            worst,
            abs(c.C0 + c.C1 / 2 + c.C2 / 4 - 1.0),
            abs(c.C1 + c.C2 - 8.0 / alpha),
            abs(c.C2 - 48.0 / alpha**2),
        )
    return CheckResult(name="pekeris-sum-rules", passed=worst <= 1e-12, detail=f"max deviation {worst:.2e}")


def check_nu_consistency(constants=None, draws: int = 1000) -> CheckResult:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for eps, q, gamma2 in zip(rng.uniform(0.01, 1.0, draws), rng.uniform(0.01, 1.0, draws), rng.uniform(0.01, 2.0, draws)):
        beta2 = eps**2 + gamma2 - q**2
        problem = woods_saxon_problem(eps**2, beta2, gamma2)
        branch = nu_select_branch(problem)
        expected = (
            branch.k - (beta2 - 2 * eps**2 - 2 * eps * q),
            branch.pi[0] + (eps + q), branch.pi[1] - eps,
            branch.tau[0] + 2 * (1 + eps + q), branch.tau[1] - (1 + 2 * eps),
            branch.lambda_ - (beta2 - 2 * eps**2 - 2 * eps * q - eps - q),
            nu_lambda_n(branch, problem, 1) - (2 * (eps + q) + 2),
            branch.k - nu_k_candidates(problem)[0],
        )
        worst = max(worst, max(abs(x) for x in expected))
    return CheckResult(name="nu-consistency", passed=worst <= 1e-10, detail=f"{draws} draws, max deviation {worst:.2e}")


def _random_systems(count: int, constants=None):
    rng = np.random.default_rng(SEED + 1)
    produced = 0
    while produced < count:
        A = int(rng.integers(20, 251))
        l = int(rng.integers(1, 7))
        system = system_from_mass_number(NuclearInput(A=A), constants)
        if system.V0 >= depth_window(system, l)[1]:
            continue
        produced += 1
        yield system, l


def check_closed_form(constants=None) -> CheckResult:
    cases = [(system, ref.n, ref.l) for ref, system in table_systems(constants)]
    cases += [(system, 0, l) for system, l in _random_systems(100, constants)]
    failures = 0
    for system, n, l in cases:
        try:
            closed = closed_form_roots(system, n, l)
        except NoRealRoot:
            closed = None
        try:
            assembled = quadratic_roots(system, n, l)
        except NoRealRoot:
            assembled = None
        if (closed is None) != (assembled is None) or (closed and not roots_agree(closed, assembled)):
            failures += 1
    return CheckResult(name="closed-form-vs-quadratic", passed=failures == 0, detail=f"{failures}/{len(cases)} disagree")


def check_quantization_scan(constants=None) -> CheckResult:
    cases = [(ref.n, ref.l, system) for ref, system in table_systems(constants)]
    cases += [(c.n, c.l, c.system) for c in synthetic_cases(constants)]
    failures, found = [], 0
    for n, l, system in cases:
        try:
            roots = quadratic_roots(system, n, l)
        except NoRealRoot:
            roots = ()
        for state in solve_quantization_scan(system, n, l):
            found += 1
            if state.residual > 1e-9 or not any(abs(state.energy - r) <= 1e-8 for r in roots):
                failures.append(f"E={state.energy:.10g}")
    passed = not failures and found >= len(SYNTHETIC_CASES)
    return CheckResult(name="quantization-scan", passed=passed, detail=f"{found} root(s), failures: {failures or 'none'}")


def check_oracle(constants=None) -> CheckResult:
    problems = []
    for case in synthetic_cases(constants)[:3]:
        state = valid_state(case)
        window = (state.energy - 1.0, state.energy + 1.0)
        coarse = OracleConfig(domain="mathematical", length=20.0, step=2e-3, scan_points=100, refine_tol=1e-10, window=window)
        fine = coarse.model_copy(update={"step": 1e-3})
        reports = [eigenvalues(case.system, case.l, cfg) for cfg in (coarse, fine)]
        matched = [min(r.eigenvalues, key=lambda E: abs(E - state.energy), default=math.nan) for r in reports]
        if not abs(matched[1] - state.energy) <= 1e-6 * max(1.0, abs(state.energy)):
            problems.append(f"l={case.l}: oracle {matched[1]:.10g} vs analytic {state.energy:.10g}")
        if not abs(matched[0] - matched[1]) <= 1e-8:
            problems.append(f"l={case.l}: step halving moved E by {abs(matched[0] - matched[1]):.2e}")

    # the whole admissible window: the shooting spectrum is exactly the set of valid analytic states
    full = OracleConfig(domain="mathematical", length=30.0, step=1e-2, scan_points=2000, refine_tol=1e-10)
    for case in synthetic_cases(constants):
        report = eigenvalues(case.system, case.l, full)
        if report.unmatched_analytic or report.unmatched_oracle:
            problems.append(
                f"n={case.n}, l={case.l}: missed {report.unmatched_analytic}, unexplained {report.unmatched_oracle}"
            )
    detail = "; ".join(problems) or f"3 systems agree, {len(SYNTHETIC_CASES)} full windows complete"
    return CheckResult(name="oracle-agreement", passed=not problems, detail=detail)


def check_jacobi(constants=None, draws: int = 1000) -> CheckResult:
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(draws):
        n = int(rng.integers(0, 9))
        a_param, b_param = rng.uniform(-0.9, 5.0, 2)
        x = float(rng.uniform(-1.0, 1.0))
        series = jacobi(n, a_param, b_param, x)
        oracle = jacobi_rodrigues(n, a_param, b_param, x)
        worst = max(worst, abs(series - oracle) / max(1.0, abs(oracle)))
    return CheckResult(name="jacobi", passed=worst <= 1e-10, detail=f"max relative deviation {worst:.2e}")


def check_wavefunctions(constants=None) -> CheckResult:
    rng = np.random.default_rng(SEED + 3)
    problems = []
    for case in synthetic_cases(constants):
        spec = wavefunction_spec(case.system, valid_state(case))
        z = rng.uniform(0.2, 0.8, 100)
        worst_ode = float(np.max(ode_residual(spec, z)))
        if worst_ode > 1e-6:
            problems.append(f"n={case.n}, l={case.l}: ODE residual {worst_ode:.2e}")

        integral = norm_integral(spec)
        C = normalization_constant(spec)
        if abs(spec.system.a * C**2 * integral - 1.0) > 1e-8:
            problems.append(f"n={case.n}, l={case.l}: normalization off")
        if case.n == 0:
            exact = beta_function(2 * spec.eps, 2 * spec.q)
            if abs(integral - exact) > 1e-10 * exact:
                problems.append(f"l={case.l}: integral {integral:.12g} vs Beta {exact:.12g}")
    return CheckResult(name="wavefunction", passed=not problems, detail="; ".join(problems) or "ODE and normalization hold")


def nonrelativistic_gap(system: WoodsSaxonSystem, n: int, l: int, kappa: float) -> float:
    scaled = system.rescaled_light_speed(kappa)
    e_plus, _ = closed_form_roots(scaled, n, l)
    return abs(e_plus - scaled.m0c2 - energy_nonrelativistic(system, n, l))


def check_nonrelativistic(constants=None) -> CheckResult:
    ratios = []
    for case in synthetic_cases(constants)[:2]:
        ratios.append(
            nonrelativistic_gap(case.system, case.n, case.l, 10.0)
            / nonrelativistic_gap(case.system, case.n, case.l, 20.0)
        )
    passed = all(3.5 <= r <= 4.5 for r in ratios)
    return CheckResult(name="nonrelativistic-limit", passed=passed, detail="ratios " + ", ".join(f"{r:.4f}" for r in ratios))


def check_existence(constants=None) -> CheckResult:
    system = system_from_mass_number(NuclearInput(A=40), constants)
    table = enumerate_spectrum(system, 0, A=40)
    l0 = not table.rows and [d.condition for d in table.diagnostics] == ["radial-count"]

    _, v_max = depth_window(system, 1)
    deep = system.model_copy(update={"V0": 2.0 * v_max})
    table = enumerate_spectrum(deep, 1)
    window = not table.rows and "depth-window" in {d.condition for d in table.diagnostics if d.l == 1}
    return CheckResult(name="existence-windows", passed=bool(l0 and window), detail=f"l=0 excluded: {l0}, deep well excluded: {window}")


def check_table_reference(constants=None) -> CheckResult:
    worst = 0.0
    for ref in PUBLISHED_TABLE:
        system = system_from_mass_number(NuclearInput(A=ref.A))
        worst = max(worst, abs(system.R0 - ref.R0_fm), abs(system.V0 - ref.V0_MeV))
    monotone = monotone_in_l()
    return CheckResult(
        name="table-geometry",
        passed=worst <= 1e-4 and monotone,
        detail=f"max R0/V0 deviation {worst:.2e}, published binding monotone in l: {monotone}",
    )


CHECKS: tuple[Callable[..., CheckResult], ...] = (
    check_pekeris_sum_rules,
    check_nu_consistency,
    check_closed_form,
    check_quantization_scan,
    check_jacobi,
    check_wavefunctions,
    check_nonrelativistic,
    check_existence,
    check_table_reference,
    check_oracle,
)


def run_checks(constants: PhysicalConstants | None = None, skip_oracle: bool = False) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        if skip_oracle and check is check_oracle:
            continue
        try:
            result = check(constants)
        except AppException as exc:
            result = CheckResult(name=check.__name__.removeprefix("check_"), passed=False, detail=exc.message)
        logger.info(f"{result.name}: {'pass' if result.passed else 'FAIL'} ({result.detail})")
        results.append(result)
    return results
