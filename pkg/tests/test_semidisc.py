import numpy as np
import pytest

from sbpdiss.core.dissipation import CoefficientMode, build_dissipation, random_euler_states
from sbpdiss.core.exceptions import DissipationError, NonAdmissibleState, OperatorError, UnsupportedFamily
from sbpdiss.core.operators import Family, build_upwind_pu2_block
from sbpdiss.core.physics import euler
from sbpdiss.core.semidisc import (
    Burgers1D,
    Euler1D,
    Euler2D,
    LinearConvection1D,
    SatKind,
    Scheme,
    assemble_linear_operator,
    build_grid_1d,
    build_grid_2d,
    build_upwind_grid_1d,
    build_upwind_grid_2d,
    upwind_dissipation_energy,
)
from sbpdiss.core.semidisc.problems import IsentropicVortex, density_wave, gaussian, kelvin_helmholtz


def relative(value, scale):
    return abs(float(value)) / float(scale)


def entropy_rate(semidisc, u):
    r = semidisc.rhs(u)
    w = semidisc.entropy_variables(u)
    return float(semidisc.grid.integrate(np.sum(w * r, axis=-1))), float(semidisc.grid.integrate(np.sum(np.abs(w * r), axis=-1)))


class TestLinearConvection:
    def setup_method(self):
        self.grid = build_grid_1d(Family.CSBP, 3, 20, 2, 0.0, 1.0)

    def test_symmetric_sat_is_skew_adjoint(self):
        semidisc = LinearConvection1D(self.grid, sat=SatKind.SYMMETRIC)
        weighted = self.grid.weights.ravel()[:, None] * assemble_linear_operator(semidisc)
        np.testing.assert_allclose(weighted, -weighted.T, atol=1e-11 * np.max(np.abs(weighted)))

    def test_dissipation_and_upwind_sat_dissipate_energy(self, rng):
        semidisc = LinearConvection1D(
            self.grid, sat=SatKind.LAX_FRIEDRICHS, dissipation=build_dissipation(self.grid.op, 4, 0.005)
        )
        weighted = self.grid.weights.ravel()[:, None] * assemble_linear_operator(semidisc)
        assert np.linalg.eigvalsh(weighted + weighted.T).max() <= 1e-10

    def test_conservation(self, rng):
        semidisc = LinearConvection1D(self.grid, dissipation=build_dissipation(self.grid.op, 4, 0.005))
        r = semidisc.rhs(rng.standard_normal(semidisc.state_shape))
        assert relative(self.grid.integrate(r), self.grid.integrate(np.abs(r))) < 1e-11

    def test_spectral_element_grid_with_gauss_nodes(self, rng):
        grid = build_grid_1d(Family.LG, 4, None, 6, 0.0, 1.0)
        semidisc = LinearConvection1D(grid, sat=SatKind.SYMMETRIC)
        weighted = grid.weights.ravel()[:, None] * assemble_linear_operator(semidisc)
        np.testing.assert_allclose(weighted, -weighted.T, atol=1e-11 * np.max(np.abs(weighted)))

    def test_rejects_entropy_sats(self):
        with pytest.raises(OperatorError, match="Linear convection"):
            LinearConvection1D(self.grid, sat=SatKind.ROE_MATRIX)


class TestBurgers:
    def setup_method(self):
        self.grid = build_grid_1d(Family.CSBP, 2, 20, 2, 0.0, 1.0)

    def test_split_form_conserves_energy(self, rng):
        u = 1.5 + rng.uniform(-0.5, 0.5, self.grid.shape)
        r = Burgers1D(self.grid, sat=SatKind.SYMMETRIC).rhs(u)
        assert relative(self.grid.integrate(u * r), self.grid.integrate(np.abs(u * r))) < 1e-11

    def test_dissipative_scheme_is_conservative_and_energy_stable(self, rng):
        semidisc = Burgers1D(self.grid, sat=SatKind.RUSANOV, dissipation=build_dissipation(self.grid.op, 3, 0.02))
        u = 1.5 + rng.uniform(-0.5, 0.5, self.grid.shape)
        r = semidisc.rhs(u)
        assert relative(self.grid.integrate(r), self.grid.integrate(np.abs(r))) < 1e-11
        assert self.grid.integrate(u * r) <= 1e-11 * self.grid.integrate(np.abs(u * r))

    def test_flux_splitting_conserves_mass(self, rng):
        grid = build_upwind_grid_1d(8, 0.0, 1.0)
        semidisc = Burgers1D(grid, scheme=Scheme.UPWIND_FVS)
        r = semidisc.rhs(rng.uniform(-1.0, 1.0, grid.shape))
        assert relative(grid.integrate(r), grid.integrate(np.abs(r))) < 1e-11

    def test_flux_splitting_needs_upwind_grid(self):
        with pytest.raises(OperatorError, match="upwind block"):
            Burgers1D(self.grid, scheme=Scheme.UPWIND_FVS)

    def test_gauss_nodes_are_rejected(self):
        grid = build_grid_1d(Family.LG, 3, None, 4, 0.0, 1.0)
        with pytest.raises(UnsupportedFamily):
            Burgers1D(grid)


def test_flux_splitting_hides_antidissipation():
    upwind = build_upwind_pu2_block()
    x = upwind.block_length * np.linspace(0.0, 1.0, upwind.n)
    value = upwind_dissipation_energy(upwind, 2.0 + 6.0 * x - x**2)
    assert value > 0.0
    assert value == pytest.approx(0.185, abs=0.005)


class TestEuler1D:
    def setup_method(self):
        self.grid = build_grid_1d(Family.CSBP, 2, 16, 2, 0.0, 1.0)

    def states(self, rng):
        return random_euler_states(rng, self.grid.dofs).reshape(self.grid.shape + (3,))

    @pytest.mark.parametrize("two_point", ["chandrashekar", "ranocha"])
    def test_entropy_conservative(self, rng, two_point):
        semidisc = Euler1D(self.grid, sat=SatKind.SYMMETRIC, two_point=two_point)
        rate, scale = entropy_rate(semidisc, self.states(rng))
        assert abs(rate) <= 1e-11 * scale

    @pytest.mark.parametrize("sat", [SatKind.ENTROPY_DISSIPATIVE_MATRIX, SatKind.RUSANOV])
    def test_entropy_stable_with_entropy_dissipation(self, rng, sat):
        dissipation = build_dissipation(self.grid.op, 3, 0.01, mode=CoefficientMode.MATRIX_MATRIX_BLOCK)
        semidisc = Euler1D(self.grid, sat=sat, dissipation=dissipation)
        u = self.states(rng)
        rate, scale = entropy_rate(semidisc, u)
        assert rate <= 1e-11 * scale
        r = semidisc.rhs(u)
        totals = np.abs(self.grid.integrate(r)) / self.grid.integrate(np.abs(r))
        assert totals.max() < 1e-11

    def test_dissipation_lowers_entropy_on_its_own(self, rng):
        dissipation = build_dissipation(self.grid.op, 3, 0.01, mode=CoefficientMode.SCALAR_MATRIX_BLOCK)
        semidisc = Euler1D(self.grid, dissipation=dissipation)
        u = self.states(rng)
        production = self.grid.integrate(np.sum(semidisc.entropy_variables(u) * semidisc.dissipation_rhs(u), axis=-1))
        assert production < 0.0

    def test_scalar_coefficient_mode_is_rejected(self):
        with pytest.raises(DissipationError, match="system coefficient"):
            Euler1D(self.grid, dissipation=build_dissipation(self.grid.op, 3, 0.01))

    def test_unknown_two_point_flux(self):
        with pytest.raises(OperatorError, match="Available"):
            Euler1D(self.grid, two_point="ismail-roe")

    def test_inadmissible_state_raises(self, rng):
        u = self.states(rng)
        u[0, 3, 0] = -1.0
        with pytest.raises(NonAdmissibleState):
            Euler1D(self.grid).rhs(u)

    def test_density_wave_residual_matches_exact_time_derivative(self):
        grid = build_grid_1d(Family.CSBP, 4, 40, 4, 0.0, 1.0)
        semidisc = Euler1D(grid, sat=SatKind.ENTROPY_DISSIPATIVE_MATRIX)
        step = 1e-6
        exact = (density_wave(grid.nodes, step) - density_wave(grid.nodes, -step)) / (2.0 * step)
        np.testing.assert_allclose(semidisc.rhs(density_wave(grid.nodes)), exact, atol=1e-3 * np.max(np.abs(exact)))


class TestEuler2D:
    def setup_method(self):
        self.grid = build_grid_2d(Family.CSBP, 2, 10, 2, -1.0, 1.0, -1.0, 1.0)

    def test_entropy_conservative(self, rng):
        u = random_euler_states(rng, self.grid.dofs, dim=2).reshape(self.grid.shape + (4,))
        semidisc = Euler2D(self.grid, sat=SatKind.SYMMETRIC)
        rate, scale = entropy_rate(semidisc, u)
        assert abs(rate) <= 1e-11 * scale

    def test_entropy_stable_and_conservative(self, rng):
        u = random_euler_states(rng, self.grid.dofs, dim=2).reshape(self.grid.shape + (4,))
        dissipation = build_dissipation(self.grid.op, 3, 0.01, mode=CoefficientMode.MATRIX_MATRIX_BLOCK)
        semidisc = Euler2D(self.grid, dissipation=dissipation)
        rate, scale = entropy_rate(semidisc, u)
        assert rate <= 1e-11 * scale
        r = semidisc.rhs(u)
        assert (np.abs(self.grid.integrate(r)) / self.grid.integrate(np.abs(r))).max() < 1e-11

    @pytest.mark.parametrize(
        "scheme, sat, mode",
        [
            (Scheme.CENTRAL, SatKind.ROE_MATRIX, CoefficientMode.MATRIX_BLOCK),
            (Scheme.HADAMARD_ENTROPY_STABLE, SatKind.ENTROPY_DISSIPATIVE_MATRIX, CoefficientMode.MATRIX_MATRIX_BLOCK),
            (Scheme.HADAMARD_ENTROPY_STABLE, SatKind.RUSANOV, CoefficientMode.SCALAR_BLOCK),
        ],
    )
    def test_free_stream_is_preserved(self, scheme, sat, mode):
        constant = np.broadcast_to(euler.conservative(1.0, np.array([0.3, -0.2]), 1.0), self.grid.shape + (4,)).copy()
        semidisc = Euler2D(self.grid, scheme=scheme, sat=sat, dissipation=build_dissipation(self.grid.op, 3, 0.01, mode=mode))
        np.testing.assert_allclose(semidisc.rhs(constant), 0.0, atol=1e-12)

    def test_flux_splitting_preserves_free_stream(self):
        grid = build_upwind_grid_2d(3, -1.0, 1.0, -1.0, 1.0)
        constant = np.broadcast_to(euler.conservative(1.0, np.array([0.3, -0.2]), 1.0), grid.shape + (4,)).copy()
        semidisc = Euler2D(grid, scheme=Scheme.UPWIND_FVS, sat=SatKind.SYMMETRIC)
        np.testing.assert_allclose(semidisc.rhs(constant), 0.0, atol=1e-12)

    def test_kelvin_helmholtz_data_is_admissible(self):
        x, y = self.grid.nodes
        u = kelvin_helmholtz(x, y)
        assert euler.is_admissible(u)
        assert np.all(np.isfinite(Euler2D(self.grid).rhs(u)))


class TestProblems:
    def test_density_wave_translates(self):
        x = np.linspace(0.0, 1.0, 11)
        shifted = density_wave(x, t=2.5)
        np.testing.assert_allclose(shifted[..., 0], density_wave(x - 0.25)[..., 0], atol=1e-14)
        np.testing.assert_allclose(shifted[..., 1] / shifted[..., 0], 0.1)

    def test_vortex_returns_after_one_period(self):
        vortex = IsentropicVortex()
        assert vortex.period == pytest.approx(20.0)
        x, y = np.meshgrid(np.linspace(-5.0, 5.0, 21), np.linspace(-5.0, 5.0, 21))
        np.testing.assert_allclose(vortex.state(x, y, vortex.period), vortex.state(x, y), atol=1e-13)

    def test_vortex_is_isentropic(self):
        vortex = IsentropicVortex()
        x, y = np.meshgrid(np.linspace(-2.0, 2.0, 9), np.linspace(-2.0, 2.0, 9))
        rho, _, p = vortex.primitive(x, y)
        np.testing.assert_allclose(p / rho**vortex.gamma, 1.0 / vortex.gamma, rtol=1e-14)

    def test_gaussian_is_periodic(self):
        np.testing.assert_allclose(gaussian(np.array([0.0])), gaussian(np.array([1.0])), rtol=1e-14)
        assert gaussian(np.array([0.5]))[0] == pytest.approx(1.0, abs=1e-12)
