"""Unit tests for radial wavefunctions."""

import math

import numpy as np
import pytest
from scipy.special import beta as beta_function
from scipy.special import eval_jacobi, gammaln

from acceptance import valid_state
from exceptions import DomainError, NonNormalizable, ParameterError
from spectrum import energy_roots
from wavefunction import (
    jacobi,
    jacobi_rodrigues,
    norm_integral,
    normalization_constant,
    ode_residual,
    physical_norm_integral,
    radial_u_unnormalized,
    sample_wavefunction,
    wavefunction_spec,
    z_of_r,
)


@pytest.fixture
def ground_spec(shallow_case):
    """Wavefunction of the alpha=4, l=3 ground state."""
    return wavefunction_spec(shallow_case.system, valid_state(shallow_case))


@pytest.fixture
def excited_spec(excited_case):
    """Wavefunction of the alpha=4, l=3, n=1 state."""
    return wavefunction_spec(excited_case.system, valid_state(excited_case))


class TestCoordinates:
    """Tests for z(r)."""

    def test_origin(self, calcium):
        """Test z at r=0 for A=40."""
        assert z_of_r(calcium, 0.0) == pytest.approx(0.998843, abs=2e-6)

    def test_radius_is_half(self, calcium):
        """Test z(R0) = 1/2."""
        assert z_of_r(calcium, calcium.R0) == pytest.approx(0.5)

    def test_decreasing(self, calcium):
        """Test that z falls from near 1 towards 0."""
        z = z_of_r(calcium, np.linspace(0.0, 30.0, 100))

        assert np.all(np.diff(z) < 0)
        assert np.all((z > 0) & (z < 1))


class TestJacobi:
    """Tests for the Jacobi polynomials."""

    def test_degree_zero(self):
        """Test P_0 = 1."""
        assert jacobi(0, 0.5, 1.5, 0.3) == 1.0

    def test_matches_scipy(self):
        """Test the series against scipy over random degrees and parameters."""
        rng = np.random.default_rng(3)
        for _ in range(2000):
            n = int(rng.integers(0, 9))
            a_param, b_param = rng.uniform(-0.9, 5.0, 2)
            x = float(rng.uniform(-1.0, 1.0))
            expected = eval_jacobi(n, a_param, b_param, x)

            assert jacobi(n, a_param, b_param, x) == pytest.approx(expected, rel=1e-10, abs=1e-10)

    def test_matches_rodrigues(self):
        """Test the series against the expanded Rodrigues formula."""
        rng = np.random.default_rng(5)
        for _ in range(200):
            n = int(rng.integers(0, 9))
            a_param, b_param = rng.uniform(-0.9, 5.0, 2)
            x = float(rng.uniform(-1.0, 1.0))

            assert jacobi(n, a_param, b_param, x) == pytest.approx(
                jacobi_rodrigues(n, a_param, b_param, x), rel=1e-10, abs=1e-10
            )

    @pytest.mark.parametrize("n", [1, 2, 5, 8])
    def test_endpoint(self, n):
        """Test P_n^(a,b)(1) = binomial(n + a, n)."""
        a_param, b_param = 0.8, 1.26
        expected = math.exp(gammaln(n + a_param + 1) - gammaln(a_param + 1) - gammaln(n + 1))

        assert jacobi(n, a_param, b_param, 1.0) == pytest.approx(expected, rel=1e-12)

    def test_left_half_of_interval(self):
        """Test high degree and large parameters at x < 0, where the plain series cancels."""
        expected = eval_jacobi(8, 4.944, 3.072, -0.670)

        assert jacobi(8, 4.944, 3.072, -0.670) == pytest.approx(expected, rel=1e-11)

    @pytest.mark.parametrize("n", [1, 2, 5, 8])
    def test_left_endpoint(self, n):
        """Test P_n^(a,b)(-1) = (-1)^n binomial(n + b, n)."""
        a_param, b_param = 0.8, 1.26
        expected = (-1) ** n * math.exp(gammaln(n + b_param + 1) - gammaln(b_param + 1) - gammaln(n + 1))

        assert jacobi(n, a_param, b_param, -1.0) == pytest.approx(expected, rel=1e-12)

    def test_vectorized(self):
        """Test evaluation on an array."""
        x = np.linspace(-1.0, 1.0, 7)

        assert jacobi(2, 0.4, 0.6, x) == pytest.approx(eval_jacobi(2, 0.4, 0.6, x), rel=1e-12, abs=1e-12)

    def test_negative_degree(self):
        """Test that n < 0 is rejected."""
        with pytest.raises(ParameterError):
            jacobi(-1, 0.0, 0.0, 0.5)

    def test_parameters_above_minus_one(self):
        """Test that parameters <= -1 are rejected."""
        with pytest.raises(ParameterError):
            jacobi(2, -1.0, 0.0, 0.5)


class TestSpec:
    """Tests for building a wavefunction from a state."""

    def test_invalid_state_rejected(self, calcium):
        """Test that a spurious root has no eigenfunction."""
        plus, _ = energy_roots(calcium, 0, 1)

        with pytest.raises(ParameterError, match="quantization condition"):
            wavefunction_spec(calcium, plus)

    def test_exponents(self, ground_spec):
        """Test eps and q, which sum to n'."""
        assert ground_spec.eps == pytest.approx(0.4, abs=1e-9)
        assert ground_spec.eps + ground_spec.q == pytest.approx(ground_spec.state.n_prime, abs=1e-9)

    def test_open_interval(self, ground_spec):
        """Test that z outside (0, 1) is a domain error."""
        with pytest.raises(DomainError):
            radial_u_unnormalized(ground_spec, 0.0)
        with pytest.raises(DomainError):
            radial_u_unnormalized(ground_spec, 1.0)


class TestDifferentialEquation:
    """Tests that u(z) solves the hypergeometric-type equation."""

    def test_ground_state(self, ground_spec):
        """Test the ODE residual of the ground state."""
        z = np.linspace(0.2, 0.8, 61)

        assert np.max(ode_residual(ground_spec, z)) <= 1e-6

    def test_excited_state(self, excited_spec):
        """Test the ODE residual of the n=1 state."""
        z = np.linspace(0.2, 0.8, 61)

        assert np.max(ode_residual(excited_spec, z)) <= 1e-6

    def test_thin_surface(self, thin_case):
        """Test the ODE residual on the alpha=8, l=13 well."""
        spec = wavefunction_spec(thin_case.system, valid_state(thin_case))

        assert np.max(ode_residual(spec, np.linspace(0.2, 0.8, 61))) <= 1e-6


class TestNormalization:
    """Tests for the normalization integral and constant."""

    def test_beta_function(self, ground_spec):
        """Test the n=0 integral against B(2 eps, 2 q)."""
        exact = beta_function(2 * ground_spec.eps, 2 * ground_spec.q)

        assert norm_integral(ground_spec) == pytest.approx(exact, rel=1e-9)

    def test_step_halving(self, excited_spec):
        """Test that halving the step leaves the integral unchanged."""
        coarse = norm_integral(excited_spec, step=0.05)
        fine = norm_integral(excited_spec, step=0.025)

        assert coarse == pytest.approx(fine, rel=1e-10)

    def test_constant(self, ground_spec):
        """Test a C^2 I = 1 and that the constant is stored on the spec."""
        integral = norm_integral(ground_spec)
        C = normalization_constant(ground_spec)

        assert ground_spec.norm == C
        assert ground_spec.system.a * C**2 * integral == pytest.approx(1.0, rel=1e-12)

    def test_physical_domain_keeps_most_weight(self, ground_spec):
        """Test that cutting the integral at r=0 loses only the inner tail."""
        weight = physical_norm_integral(ground_spec)

        assert 0.9 < weight < 1.0

    def test_non_normalizable(self, ground_spec):
        """Test that q = 0 diverges."""
        ground_spec.q = 0.0

        with pytest.raises(NonNormalizable):
            norm_integral(ground_spec)


class TestSampling:
    """Tests for sampled u(r)."""

    def test_samples(self, ground_spec):
        """Test that samples carry r, z and a normalized u."""
        r = np.linspace(0.0, 20.0, 11)
        samples = sample_wavefunction(ground_spec, r)

        assert len(samples) == 11
        assert samples[0].r == 0.0
        assert ground_spec.norm is not None
        assert samples[2].z == pytest.approx(z_of_r(ground_spec.system, r[2]))

    def test_exponential_tail(self, ground_spec):
        """Test that u falls by exp(-eps) per diffuseness far outside."""
        system = ground_spec.system
        outer = sample_wavefunction(ground_spec, [system.R0 + 20 * system.a, system.R0 + 21 * system.a])

        assert outer[1].u / outer[0].u == pytest.approx(math.exp(-ground_spec.eps), rel=1e-6)

    def test_peak(self, ground_spec):
        """Test that the ground state peaks at z = eps / (eps + q)."""
        system = ground_spec.system
        r = np.linspace(0.0, system.R0 + 30 * system.a, 20001)
        samples = sample_wavefunction(ground_spec, r)
        peak = max(samples, key=lambda s: abs(s.u))

        assert peak.z == pytest.approx(ground_spec.eps / (ground_spec.eps + ground_spec.q), abs=1e-3)

    def test_non_finite_grid(self, ground_spec):
        """Test that a non-finite radius is rejected."""
        with pytest.raises(DomainError):
            sample_wavefunction(ground_spec, [1.0, math.inf])
