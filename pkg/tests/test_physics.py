import numpy as np
import pytest

from sbpdiss.core.dissipation import random_euler_states
from sbpdiss.core.exceptions import NonAdmissibleState
from sbpdiss.core.physics import chandrashekar_flux, euler, log_mean, ranocha_flux_2d
from sbpdiss.core.physics.scalar import (
    burgers_ec_flux,
    burgers_flux,
    burgers_flux_split,
    burgers_rusanov_dissipation,
)
from sbpdiss.core.physics.splitting import drikakis_tsangaris, steger_warming

STEP = 1e-30


def complex_step_jacobian(func, u):
    """d func / d u at every state of ``u`` via complex steps."""
    n = u.shape[-1]
    columns = []
    for k in range(n):
        perturbed = u.astype(complex)
        perturbed[..., k] += 1j * STEP
        columns.append(np.imag(func(perturbed)) / STEP)
    return np.stack(columns, axis=-1)


@pytest.fixture(params=[1, 2], ids=["1d", "2d"])
def states(request, rng):
    return random_euler_states(rng, 25, dim=request.param)


class TestLogMean:
    def test_equal_arguments(self):
        x = np.array([0.3, 1.0, 7.5])
        np.testing.assert_allclose(log_mean(x, x), x, rtol=1e-15)

    def test_symmetric_and_between_arguments(self, rng):
        x, y = rng.uniform(0.1, 5.0, (2, 100))
        mean = log_mean(x, y)
        np.testing.assert_allclose(mean, log_mean(y, x), rtol=1e-14)
        assert np.all(mean >= np.minimum(x, y)) and np.all(mean <= np.maximum(x, y))

    @pytest.mark.parametrize("gap", [1e-8, 1e-5, 1e-3, 0.3])
    def test_accurate_near_and_away_from_equal_arguments(self, gap):
        x, y = 1.7, 1.7 * (1.0 + gap)
        reference = (y - x) / np.log1p((y - x) / x)
        assert log_mean(np.array(x), np.array(y)) == pytest.approx(reference, rel=1e-13)


class TestEntropyConservativeFluxes:
    @pytest.mark.parametrize("two_point", [chandrashekar_flux, ranocha_flux_2d])
    def test_consistent_with_euler_flux(self, states, two_point):
        for direction in range(euler.dimension(states)):
            np.testing.assert_allclose(
                two_point(states, states, direction), euler.flux(states, direction), rtol=1e-12, atol=1e-12
            )

    @pytest.mark.parametrize("two_point", [chandrashekar_flux, ranocha_flux_2d])
    def test_entropy_conservation_condition(self, states, two_point):
        left, right = states[:-1], states[1:]
        jump = euler.entropy_variables(right) - euler.entropy_variables(left)
        for direction in range(euler.dimension(states)):
            production = np.sum(jump * two_point(left, right, direction), axis=-1)
            potential_jump = euler.entropy_potential(right, direction) - euler.entropy_potential(left, direction)
            np.testing.assert_allclose(production, potential_jump, rtol=1e-11, atol=1e-11)

    @pytest.mark.parametrize("two_point", [chandrashekar_flux, ranocha_flux_2d])
    def test_symmetric(self, states, two_point):
        left, right = states[:-1], states[1:]
        np.testing.assert_allclose(two_point(left, right), two_point(right, left), rtol=1e-13, atol=1e-13)


class TestEntropyMaps:
    def test_entropy_variables_are_entropy_gradient(self, states):
        gradient = complex_step_jacobian(lambda u: euler.entropy_function(u)[..., None], states)[..., 0, :]
        np.testing.assert_allclose(euler.entropy_variables(states), gradient, rtol=1e-12, atol=1e-12)

    def test_conservative_from_entropy_inverts(self, states):
        np.testing.assert_allclose(
            euler.conservative_from_entropy(euler.entropy_variables(states)), states, rtol=1e-12
        )

    def test_dudw_is_spd_inverse_of_dwdu(self, states):
        dudw = euler.dudw(states)
        dwdu = complex_step_jacobian(euler.entropy_variables, states)
        np.testing.assert_allclose(dudw, np.swapaxes(dudw, -1, -2), rtol=1e-14)
        assert np.all(np.linalg.eigvalsh(dudw) > 0.0)
        identity = np.broadcast_to(np.eye(states.shape[-1]), dudw.shape)
        np.testing.assert_allclose(dudw @ dwdu, identity, atol=1e-10)

    def test_entropy_hessian_is_positive_definite(self, states):
        hessian = complex_step_jacobian(euler.entropy_variables, states)
        np.testing.assert_allclose(hessian, np.swapaxes(hessian, -1, -2), rtol=1e-10, atol=1e-10)
        assert np.all(np.linalg.eigvalsh(0.5 * (hessian + np.swapaxes(hessian, -1, -2))) > 0.0)

    def test_entropy_is_convex_along_segments(self, states):
        left, right = states[:-1], states[1:]
        midpoint = euler.entropy_function(0.5 * (left + right))
        average = 0.5 * (euler.entropy_function(left) + euler.entropy_function(right))
        assert np.all(midpoint <= average + 1e-14 * np.abs(average))


class TestEigenSystem:
    def test_flux_jacobian_matches_complex_step(self, states):
        for direction in range(euler.dimension(states)):
            expected = complex_step_jacobian(lambda u: euler.flux(u, direction), states)
            np.testing.assert_allclose(euler.flux_jacobian(states, direction), expected, rtol=1e-10, atol=1e-10)

    def test_symmetrized_absolute_jacobian(self, states):
        for direction in range(euler.dimension(states)):
            system = euler.eigensystem(states, direction)
            x = system.barth
            np.testing.assert_allclose(x @ np.swapaxes(x, -1, -2), euler.dudw(states), rtol=1e-12, atol=1e-12)
            symmetrized = euler.symmetrized_absolute_jacobian(system)
            np.testing.assert_allclose(symmetrized, np.swapaxes(symmetrized, -1, -2), rtol=1e-12, atol=1e-12)
            assert np.linalg.eigvalsh(symmetrized).min() >= -1e-10
            # X |L| X^T = |A| du/dw
            np.testing.assert_allclose(
                symmetrized, euler.absolute_jacobian(system) @ euler.dudw(states), rtol=1e-10, atol=1e-10
            )

    def test_bundle_checks_admissibility(self):
        u = euler.conservative(np.array([1.0]), np.array([[0.5]]), np.array([-0.1]))
        with pytest.raises(NonAdmissibleState, match="pressure"):
            euler.euler_flux_and_jacobian(u)

    def test_max_wave_speed_over_directions(self):
        u = euler.conservative(np.array([1.0]), np.array([[0.2, -0.9]]), np.array([1.0 / euler.GAMMA]))
        assert euler.max_wave_speed(u)[0] == pytest.approx(1.9)
        assert euler.max_wave_speed(u, 0)[0] == pytest.approx(1.2)


class TestSplittings:
    @pytest.mark.parametrize("splitting", [steger_warming, drikakis_tsangaris])
    def test_parts_sum_to_flux(self, states, splitting):
        for direction in range(euler.dimension(states)):
            plus, minus = splitting(states, direction)
            np.testing.assert_allclose(plus + minus, euler.flux(states, direction), rtol=1e-12, atol=1e-12)

    @pytest.mark.parametrize("splitting", [steger_warming, drikakis_tsangaris])
    def test_supersonic_flow_is_fully_upwinded(self, splitting):
        u = euler.conservative(np.array([1.0]), np.array([[3.0]]), np.array([1.0]))
        plus, minus = splitting(u)
        np.testing.assert_allclose(minus, 0.0, atol=1e-14)
        np.testing.assert_allclose(plus, euler.flux(u), rtol=1e-13)


class TestBurgers:
    def test_ec_flux_consistency_and_shuffle(self, rng):
        left, right = rng.uniform(-2.0, 2.0, (2, 50))
        np.testing.assert_allclose(burgers_ec_flux(left, left), burgers_flux(left), rtol=1e-14)
        np.testing.assert_allclose((right - left) * burgers_ec_flux(left, right), (right**3 - left**3) / 6.0, atol=1e-13)

    def test_flux_split_sums_to_flux(self, rng):
        u = rng.uniform(-2.0, 2.0, 50)
        plus, minus = burgers_flux_split(u)
        np.testing.assert_allclose(plus + minus, burgers_flux(u), rtol=1e-14)
        np.testing.assert_allclose(plus - minus, np.abs(u) * u, rtol=1e-14)

    def test_rusanov_interface_flux(self, rng):
        left, right = rng.uniform(-2.0, 2.0, (2, 50))
        interface = 0.5 * (burgers_flux(left) + burgers_flux(right)) - burgers_rusanov_dissipation(left, right)
        expected = 0.5 * (burgers_flux(left) + burgers_flux(right)) - 0.5 * np.maximum(np.abs(left), np.abs(right)) * (
            right - left
        )
        np.testing.assert_allclose(interface, expected, rtol=1e-14, atol=1e-14)
        assert burgers_rusanov_dissipation(np.array([1.0]), np.array([-3.0]))[0] == pytest.approx(-6.0)


def test_check_admissible_reports_density():
    u = np.array([[-1.0, 0.0, 1.0]])
    with pytest.raises(NonAdmissibleState, match="density"):
        euler.check_admissible(u)
