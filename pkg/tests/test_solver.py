import math

import numpy as np
import pytest
from pydantic import ValidationError

from sbpdiss.core.exceptions import ConfigValidationError, DimensionMismatch, NonAdmissibleState
from sbpdiss.core.operators import Family
from sbpdiss.core.semidisc import LinearConvection1D, SatKind, build_grid_1d
from sbpdiss.core.solver import (
    ConvergenceLevel,
    JacobianMethod,
    Method,
    TimeIntegrator,
    backward_error,
    conjugate_pairing_error,
    eigenvalues,
    fit_rate,
    h_norm_error,
    integrate,
    jacobian,
    run_convergence,
    spectrum,
)
from sbpdiss.core.solver.convergence import report_from_errors


def decay(u, t=0.0):
    return -u


class Draining:
    """u' = -1 with states required to stay non-negative."""

    def __call__(self, u, t=0.0):
        return -np.ones_like(u)

    def check_state(self, u):
        if np.any(u < 0.0):
            raise NonAdmissibleState(f"negative level {u.min():.3g}")


class TestIntegrators:
    def test_dormand_prince_exponential_decay(self):
        trajectory = integrate(decay, np.ones(1), TimeIntegrator(t_final=1.0, rtol=1e-10, atol=1e-12))
        assert trajectory.state[0] == pytest.approx(math.exp(-1.0), abs=1e-8)
        assert trajectory.t == pytest.approx(1.0)
        assert not trajectory.crashed

    def test_rk4_is_fourth_order(self):
        sizes = [10, 20, 40, 80]
        errors = []
        for n in sizes:
            integrator = TimeIntegrator(method=Method.RK4, t_final=1.0, dt_init=1.0 / n)
            errors.append(abs(integrate(decay, np.ones(1), integrator).state[0] - math.exp(-1.0)))
        rate, _ = fit_rate(sizes, errors)
        assert rate == pytest.approx(4.0, abs=0.1)

    def test_observer_runs_at_sample_times(self):
        integrator = TimeIntegrator(t_final=1.0, rtol=1e-10, atol=1e-12)
        trajectory = integrate(
            decay, np.ones(1), integrator, sample_times=[0.25, 0.5, 0.75], observer=lambda t, u: {"u": float(u[0])}
        )
        assert [row["t"] for row in trajectory.records] == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
        for row in trajectory.records:
            assert row["u"] == pytest.approx(math.exp(-row["t"]), rel=1e-8)

    @pytest.mark.parametrize(
        "integrator",
        [
            TimeIntegrator(method=Method.RK4, t_final=2.0, dt_init=0.3),
            TimeIntegrator(t_final=2.0, rtol=1e-8, atol=1e-8),
        ],
        ids=["rk4", "dp54"],
    )
    def test_inadmissible_state_stops_the_run(self, integrator):
        trajectory = integrate(Draining(), np.ones(1), integrator, observer=lambda t, u: {"u": float(u[0])})
        assert trajectory.crashed
        assert trajectory.t <= 1.0 + 1e-9
        assert trajectory.crash_time > trajectory.t
        assert "negative level" in trajectory.crash.cause
        assert trajectory.records[-1]["t"] == trajectory.t

    def test_inadmissible_initial_state(self):
        trajectory = integrate(Draining(), -np.ones(1), TimeIntegrator(t_final=1.0))
        assert trajectory.crash_time == 0.0

    def test_halved_tolerances(self):
        halved = TimeIntegrator(t_final=1.0, rtol=1e-8, atol=1e-10).halved()
        assert (halved.rtol, halved.atol) == (5e-9, 5e-11)

    def test_halving_tolerances_never_increases_the_error(self):
        integrator = TimeIntegrator(t_final=1.0, rtol=1e-6, atol=1e-6)
        errors = []
        for _ in range(10):
            errors.append(abs(integrate(decay, np.ones(1), integrator).state[0] - math.exp(-1.0)))
            integrator = integrator.halved()
        assert all(finer <= coarser for coarser, finer in zip(errors, errors[1:]))
        assert errors[-1] < errors[0]

    def test_rk4_needs_a_step_size(self):
        with pytest.raises(ValidationError, match="dt_init or cfl"):
            TimeIntegrator(method=Method.RK4, t_final=1.0)

    def test_unknown_fields_are_rejected(self):
        with pytest.raises(ValidationError):
            TimeIntegrator(t_final=1.0, order=5)


class TestJacobian:
    def setup_method(self):
        self.matrix = np.array([[1.0, 2.0, 0.0], [0.0, -3.0, 1.0], [4.0, 0.0, 0.5]])

    def test_complex_step_of_linear_map(self):
        result = jacobian(lambda u: self.matrix @ u, np.array([0.3, -1.0, 2.0]))
        assert result.method is JacobianMethod.COMPLEX_STEP
        np.testing.assert_allclose(result.matrix, self.matrix, rtol=1e-14)

    def test_central_difference(self):
        result = jacobian(lambda u: u**3, np.array([1.0, 2.0]), method=JacobianMethod.CENTRAL_DIFFERENCE)
        np.testing.assert_allclose(result.matrix, np.diag([3.0, 12.0]), rtol=1e-8)

    def test_falls_back_when_rhs_casts_to_float(self):
        def rhs(u):
            return np.array([float(u[0]) ** 2, float(u[1]) * float(u[0])])

        result = jacobian(rhs, np.array([2.0, 3.0]))
        assert result.method is JacobianMethod.CENTRAL_DIFFERENCE
        np.testing.assert_allclose(result.matrix, [[4.0, 0.0], [3.0, 2.0]], rtol=1e-7)

    def test_falls_back_when_imaginary_part_is_dropped(self):
        result = jacobian(lambda u: np.real(u) * 2.0, np.array([1.0, 2.0]))
        assert result.method is JacobianMethod.CENTRAL_DIFFERENCE
        np.testing.assert_allclose(result.matrix, 2.0 * np.eye(2), rtol=1e-8)

    def test_threads_give_the_same_columns(self):
        u = np.array([0.3, -1.0, 2.0])
        serial = jacobian(lambda v: np.sin(v) * (self.matrix @ v), u).matrix
        threaded = jacobian(lambda v: np.sin(v) * (self.matrix @ v), u, threads=3).matrix
        np.testing.assert_array_equal(serial, threaded)


class TestSpectra:
    def test_diagonal(self):
        np.testing.assert_allclose(np.sort(eigenvalues(np.diag([3.0, 1.0, 2.0])).real), [1.0, 2.0, 3.0])

    def test_rotation_has_imaginary_pair(self):
        values = eigenvalues(np.array([[0.0, 1.0], [-1.0, 0.0]]))
        np.testing.assert_allclose(np.sort(values.imag), [-1.0, 1.0], atol=1e-15)
        assert conjugate_pairing_error(values) < 1e-14

    def test_circulant_shift_gives_roots_of_unity(self):
        shift = np.roll(np.eye(6), 1, axis=1)
        values = eigenvalues(shift)
        np.testing.assert_allclose(np.abs(values), 1.0, atol=1e-13)
        assert backward_error(shift) < 1e-13

    def test_non_square_matrix(self):
        with pytest.raises(DimensionMismatch):
            eigenvalues(np.ones((2, 3)))

    def test_energy_conservative_scheme_has_imaginary_spectrum(self, rng):
        grid = build_grid_1d(Family.CSBP, 2, 12, 2, 0.0, 1.0)
        semidisc = LinearConvection1D(grid, sat=SatKind.SYMMETRIC)
        report = spectrum(semidisc, rng.standard_normal(semidisc.state_shape))
        assert report.size == grid.dofs
        assert abs(report.max_real_part) < 1e-10 * report.spectral_radius
        assert report.pairing_error < 1e-9


class TestConvergence:
    def test_fit_rate_of_exact_power_law(self):
        rate, residual = fit_rate([10, 20, 40], [2.0 * n**-3.0 for n in (10, 20, 40)])
        assert rate == pytest.approx(3.0)
        assert residual == pytest.approx(0.0, abs=1e-12)

    def test_h_norm_error(self):
        grid = build_grid_1d(Family.CSBP, 2, 12, 3, 0.0, 2.0)
        u = np.ones(grid.shape)
        assert h_norm_error(grid, u, np.zeros(grid.shape)) == pytest.approx(math.sqrt(2.0))

    def test_fit_is_skipped_at_round_off(self):
        report = report_from_errors([ConvergenceLevel(size, size, 1e-14) for size in (10, 20, 40)])
        assert report.fit_skipped
        assert report.summary()["rate"] is None

    def test_fit_is_skipped_after_a_crash(self):
        levels = [ConvergenceLevel(10, 10, 1e-2), ConvergenceLevel(20, 20, 1e-3, crash_time=0.4), ConvergenceLevel(40, 40, 1e-4)]
        assert report_from_errors(levels).fit_skipped

    def test_local_rates(self):
        report = report_from_errors([ConvergenceLevel(n, n, n**-2.0) for n in (10, 20, 40)])
        rows = report.rows()
        assert rows[0]["local_rate"] is None
        assert rows[2]["local_rate"] == pytest.approx(2.0)

    def test_needs_three_grids(self):
        with pytest.raises(ConfigValidationError) as info:
            run_convergence(lambda size: None, [10, 20], None, None, TimeIntegrator(t_final=1.0))
        assert info.value.fields == ["grids"]
