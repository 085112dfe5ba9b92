"""Unit tests for the closed-form spectrum."""

import math

import numpy as np
import pytest

from acceptance import nonrelativistic_gap, valid_state
from exceptions import DomainError, NoBoundState, ParameterError
from models import NuclearInput, system_from_mass_number
from reference import PUBLISHED_TABLE
from spectrum import (
    admissible_window,
    allowed_radial_count,
    binding_energy,
    check_existence,
    closed_form_roots,
    depth_window,
    dimensionless_parameters,
    edge_refined_grid,
    energy_nonrelativistic,
    energy_roots,
    enumerate_spectrum,
    n_prime,
    particle_branch,
    quadratic_roots,
    quantization_residual,
    residual_reason,
    roots_agree,
    solve_quantization_scan,
)


class TestDimensionlessParameters:
    """Tests for eps^2, beta^2, gamma^2 and n'."""

    def test_calcium_gamma2(self, calcium):
        """Test gamma^2 for A=40, l=1, which does not depend on E."""
        params = dimensionless_parameters(calcium, 0.0, 1)

        assert params.gamma2 == pytest.approx(0.023284, abs=5e-6)
        assert params.alpha == pytest.approx(calcium.alpha)

    def test_rest_energy_leaves_only_centrifugal_eps2(self, calcium):
        """Test that at E = m0c2 eps^2 reduces to L C0."""
        params = dimensionless_parameters(calcium, calcium.m0c2, 1)

        assert params.eps2 == pytest.approx(2 / calcium.alpha**2 * 0.670890, rel=1e-5)

    def test_calcium_n_prime(self, calcium):
        """Test n' and the radial count for A=40, l=1."""
        assert n_prime(calcium, 0, 1) == pytest.approx(0.022765, abs=2e-6)
        assert allowed_radial_count(calcium, 1) == 1

    def test_iron_n_prime(self):
        """Test n' for A=56, l=2."""
        system = system_from_mass_number(NuclearInput(A=56))

        assert n_prime(system, 0, 2) == pytest.approx(0.059674, abs=5e-6)

    def test_n_prime_drops_by_one_per_node(self, calcium):
        """Test n'(n) = n'(0) - n."""
        assert n_prime(calcium, 2, 1) == pytest.approx(n_prime(calcium, 0, 1) - 2)

    def test_too_deep_for_n_prime(self, calcium):
        """Test that a negative n' radicand is a domain error."""
        deep = calcium.model_copy(update={"V0": 200.0})

        with pytest.raises(DomainError):
            n_prime(deep, 0, 1)

    def test_negative_quantum_numbers(self, calcium):
        """Test that n < 0 is rejected."""
        with pytest.raises(ParameterError):
            n_prime(calcium, -1, 1)


class TestExistence:
    """Tests for the depth window and the radial count."""

    def test_calcium_depth_window(self, calcium):
        """Test V0_max for A=40, l=1."""
        assert depth_window(calcium, 1) == pytest.approx((0.0, 65.07), abs=0.01)

    def test_lead_depth_window(self, lead):
        """Test V0_max for A=208, l=5."""
        assert depth_window(lead, 5)[1] == pytest.approx(83.97, abs=0.01)

    def test_zero_angular_momentum(self, calcium):
        """Test that l=0 has no bound states."""
        with pytest.raises(NoBoundState) as exc_info:
            check_existence(calcium, 0, 0)

        assert exc_info.value.condition == "radial-count"

    def test_deep_well(self, calcium):
        """Test that V0 above the window is excluded."""
        _, v_max = depth_window(calcium, 1)
        deep = calcium.model_copy(update={"V0": 1.5 * v_max})

        with pytest.raises(NoBoundState) as exc_info:
            check_existence(deep, 0, 1)

        assert exc_info.value.condition == "depth-window"

    def test_excited_state_beyond_count(self, calcium):
        """Test that n >= count is excluded."""
        with pytest.raises(NoBoundState, match="n=1 not allowed"):
            energy_roots(calcium, 1, 1)

    @pytest.mark.parametrize("ref", PUBLISHED_TABLE, ids=lambda r: f"A{r.A}-l{r.l}")
    def test_published_states_are_admitted(self, ref):
        """Test that every tabulated (A, n, l) passes the existence checks."""
        system = system_from_mass_number(NuclearInput(A=ref.A))

        check_existence(system, ref.n, ref.l)


class TestEnergyRoots:
    """Tests for the closed-form roots and their classification."""

    def test_calcium_roots(self, calcium):
        """Test the two A=40, l=1 roots, neither of which is a bound state."""
        plus, minus = energy_roots(calcium, 0, 1)

        assert plus.energy == pytest.approx(50.05, abs=0.01)
        assert minus.energy == pytest.approx(6.33, abs=0.01)
        assert plus.binding == pytest.approx(50.05 - 139.57, abs=0.01)
        assert not plus.valid
        assert not minus.valid
        assert plus.residual > 1e-3

    def test_calcium_scan_finds_nothing(self, calcium):
        """Test that the direct scan confirms the empty A=40 spectrum."""
        assert solve_quantization_scan(calcium, 0, 1) == []

    def test_synthetic_valid_root(self, shallow_case):
        """Test that the constructed state is recovered as the valid root."""
        plus, minus = energy_roots(shallow_case.system, 0, 3)

        assert [plus.valid, minus.valid].count(True) == 1
        state = valid_state(shallow_case)
        assert state.energy == pytest.approx(shallow_case.energy, rel=1e-9)
        assert state.residual <= 1e-9
        assert state.params.eps == pytest.approx(0.4, abs=1e-9)

    def test_spurious_root_reason(self, shallow_case):
        """Test that the spurious root still carries a finite or flagged residual."""
        spurious = next(s for s in energy_roots(shallow_case.system, 0, 3) if not s.valid)

        assert spurious.residual > 1e-9
        assert spurious.root_sign == -1

    def test_particle_branch(self, calcium, shallow_case):
        """Test |E| < m0c2 for the A=40 roots and not for the shallow valid state."""
        assert all(particle_branch(s) for s in energy_roots(calcium, 0, 1))
        assert not particle_branch(valid_state(shallow_case))

    def test_eps_identity(self, shallow_case, excited_case):
        """Test eps = (n' + (beta^2 - gamma^2)/n')/2 at a valid root."""
        for case in (shallow_case, excited_case):
            state = valid_state(case)
            p = state.params
            npr = state.n_prime

            assert p.eps == pytest.approx((npr + (p.beta2 - p.gamma2) / npr) / 2, abs=1e-8)

    @pytest.mark.parametrize("ref", PUBLISHED_TABLE, ids=lambda r: f"A{r.A}-l{r.l}")
    def test_closed_form_matches_quadratic(self, ref):
        """Test the closed form against the independently assembled quadratic."""
        system = system_from_mass_number(NuclearInput(A=ref.A))

        assert roots_agree(closed_form_roots(system, ref.n, ref.l), quadratic_roots(system, ref.n, ref.l))

    def test_synthetic_closed_form_matches_quadratic(self, thin_case, wide_case):
        """Test closed form and quadratic on the constructed wells."""
        for case in (thin_case, wide_case):
            assert roots_agree(
                closed_form_roots(case.system, case.n, case.l),
                quadratic_roots(case.system, case.n, case.l),
            )

    def test_binding_energy(self):
        """Test E_b = E - m0c2."""
        assert binding_energy(100.0, 139.57) == pytest.approx(-39.57)


class TestResidual:
    """Tests for the unsquared quantization residual."""

    def test_outside_window_is_infinite(self, calcium):
        """Test that eps^2 < 0 gives an infinite residual and a reason."""
        E = 2 * calcium.m0c2

        assert math.isinf(quantization_residual(calcium, E, 0, 1))
        assert residual_reason(calcium, E, 1) == "eps2<0"

    def test_inside_window_has_no_reason(self, calcium):
        """Test that admissible energies carry no reason."""
        lo, hi = admissible_window(calcium, 1)
        E = 0.5 * (lo + hi)

        assert residual_reason(calcium, E, 1) is None
        assert math.isfinite(quantization_residual(calcium, E, 0, 1))


class TestScan:
    """Tests for the direct scan of the unsquared condition."""

    def test_scan_recovers_valid_root(self, shallow_case, excited_case):
        """Test that scanning finds the same valid root as the closed form."""
        for case in (shallow_case, excited_case):
            found = solve_quantization_scan(case.system, case.n, case.l)

            assert len(found) == 1
            assert found[0].energy == pytest.approx(valid_state(case).energy, abs=1e-8)
            assert found[0].residual <= 1e-9

    def test_root_in_last_cell(self, excited_case):
        """Test a small-eps state closer to the window edge than one grid spacing."""
        state = valid_state(excited_case)
        lo, hi = admissible_window(excited_case.system, excited_case.l)
        assert hi - state.energy < (hi - lo) / 101

        found = solve_quantization_scan(excited_case.system, excited_case.n, excited_case.l, scan_points=100)

        assert [s.energy for s in found] == [pytest.approx(state.energy, abs=1e-8)]

    def test_edge_refined_grid(self):
        """Test that the grid is sorted, stays in the window and crowds toward both ends."""
        grid = edge_refined_grid(-2.0, 3.0, 100, decades=10, closed=True)

        assert np.all(np.diff(grid) > 0)
        assert grid[0] == -2.0 and grid[-1] == 3.0
        assert grid[1] - grid[0] == pytest.approx(5e-10, rel=1e-5)
        assert grid[-1] - grid[-2] == pytest.approx(5e-10, rel=1e-5)
        assert len(edge_refined_grid(-2.0, 3.0, 100, decades=10)) == len(grid) - 2

    def test_scan_l0(self, calcium):
        """Test that l=0 has nothing to scan."""
        assert solve_quantization_scan(calcium, 0, 0) == []


class TestNonrelativistic:
    """Tests for the Schrodinger limit."""

    def test_converges_as_c_grows(self, shallow_case, wide_case):
        """Test that the gap to the Schrodinger energy shrinks as 1/kappa^2."""
        for case in (shallow_case, wide_case):
            ratio = nonrelativistic_gap(case.system, case.n, case.l, 10.0) / nonrelativistic_gap(
                case.system, case.n, case.l, 20.0
            )

            assert 3.5 <= ratio <= 4.5

    def test_no_state(self, calcium):
        """Test that a non-positive radial factor has no bound state."""
        with pytest.raises(NoBoundState):
            energy_nonrelativistic(calcium, 3, 1)


class TestEnumerate:
    """Tests for the full spectrum table."""

    def test_calcium_table(self, calcium):
        """Test rows and diagnostics for A=40 up to l=3."""
        table = enumerate_spectrum(calcium, 3, A=40)

        assert table.A == 40
        assert table.diagnostics[0].l == 0
        assert table.diagnostics[0].condition == "radial-count"
        keys = [(s.l, s.n, s.energy) for s in table.rows]
        assert keys == sorted(keys)
        assert {s.l for s in table.rows} <= {1, 2, 3}
        assert sum(1 for s in table.rows if s.l == 1) == 2

    def test_negative_l_max(self, calcium):
        """Test that l_max < 0 is rejected."""
        with pytest.raises(ParameterError):
            enumerate_spectrum(calcium, -1)

    def test_deep_well_diagnostic(self, calcium):
        """Test that the depth window is reported per l."""
        _, v_max = depth_window(calcium, 1)
        deep = calcium.model_copy(update={"V0": 1.2 * v_max})
        table = enumerate_spectrum(deep, 1)

        assert [s for s in table.rows if s.l == 1] == []
        assert [d.condition for d in table.diagnostics if d.l == 1] == ["depth-window"]
