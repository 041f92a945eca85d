import numpy as np
import pytest

from sbpdiss.core.dissipation import (
    CoefficientMode,
    apply_dissipation_2d,
    assemble_scalar_dissipation,
    build_boundary_correction,
    build_dissipation,
    build_system_blocks,
    build_undivided_diff,
    conservation_check,
    dissipativity_check,
    random_coefficient,
    random_euler_states,
    scalar_coefficient,
    se_rank_checks,
    symmetry_check,
)
from sbpdiss.core.exceptions import (
    DimensionMismatch,
    DissipationError,
    NegativeCoefficient,
    NonAdmissibleState,
    OrderTooHigh,
)
from sbpdiss.core.operators import Family, build_block_operator, minimum_csbp_nodes

SAMPLES = 200


@pytest.fixture
def unit_csbp1():
    """CSBP p=1 on 12 nodes with unit spacing, so A_D equals A_D * dx."""
    return build_block_operator(Family.CSBP, 1, 12, 11.0)


def _row(n, start, entries):
    row = np.zeros(n)
    row[start:start + len(entries)] = entries
    return row


class TestGoldenMatrices:
    def test_second_difference_with_boundary_correction(self, unit_csbp1):
        dense = build_dissipation(unit_csbp1, 2, 1.0, include_B=True).matrix()
        np.testing.assert_allclose(dense[0], _row(12, 0, [-2, 4, -2]), atol=1e-13)
        np.testing.assert_allclose(dense[1], _row(12, 0, [2, -5, 4, -1]), atol=1e-13)
        np.testing.assert_allclose(dense[2], _row(12, 0, [-1, 4, -6, 4, -1]), atol=1e-13)
        np.testing.assert_allclose(dense[6], _row(12, 4, [-1, 4, -6, 4, -1]), atol=1e-13)

    def test_second_difference_without_boundary_correction(self, unit_csbp1):
        dense = build_dissipation(unit_csbp1, 2, 1.0, include_B=False).matrix()
        np.testing.assert_allclose(dense[0], _row(12, 0, [-4, 8, -4]), atol=1e-13)
        np.testing.assert_allclose(dense[1], _row(12, 0, [4, -9, 6, -1]), atol=1e-13)
        np.testing.assert_allclose(dense[2], _row(12, 0, [-2, 6, -7, 4, -1]), atol=1e-13)
        np.testing.assert_allclose(dense[3], _row(12, 1, [-1, 4, -6, 4, -1]), atol=1e-13)

    def test_right_boundary_mirrors_left(self, unit_csbp1):
        dense = build_dissipation(unit_csbp1, 2, 1.0).matrix()
        np.testing.assert_allclose(dense[::-1, ::-1], dense, atol=1e-13)

    def test_strength_scales_linearly(self, unit_csbp1):
        unit = build_dissipation(unit_csbp1, 2, 1.0).matrix()
        np.testing.assert_allclose(build_dissipation(unit_csbp1, 2, 0.005).matrix(), 0.005 * unit, atol=1e-15)


def test_first_order_half_node_form(rng):
    op = build_block_operator(Family.CSBP, 1, 8, 7.0)
    for _ in range(5):
        a = rng.uniform(0.1, 2.0, op.n)
        m = 0.5 * (a[:-1] + a[1:])
        dense = assemble_scalar_dissipation(op, 1, 1.0, coeff=a).matrix()
        expected = np.zeros((8, 8))
        expected[0, :2] = [-2 * m[0], 2 * m[0]]
        for i in range(1, 7):
            expected[i, i - 1:i + 2] = [m[i - 1], -(m[i - 1] + m[i]), m[i]]
        expected[7, 6:] = [2 * m[6], -2 * m[6]]
        np.testing.assert_allclose(dense, expected, atol=1e-13)


def test_odd_order_with_nodal_coefficient_is_rejected():
    op = build_block_operator(Family.CSBP, 2, 12, 1.0)
    with pytest.raises(DissipationError, match="half-node"):
        assemble_scalar_dissipation(op, 3, 1.0, coeff=scalar_coefficient(np.linspace(1.0, 2.0, 12)))


@pytest.mark.parametrize(
    "s, left, right",
    [(1, 1, 0), (2, 1, 1), (3, 2, 0), (4, 2, 2), (5, 3, 0)],
)
def test_boundary_correction_zero_counts(s, left, right):
    correction = build_boundary_correction(20, s)
    assert (correction.n_left_zeros, correction.n_right_zeros) == (left, right)
    assert correction.diagonal.sum() == 20 - left - right


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_undivided_difference_accuracy_and_width(p):
    op = build_block_operator(Family.CSBP, p, minimum_csbp_nodes(p) + 4, 1.0)
    for s in range(1, p + 2):
        diff = build_undivided_diff(op.dist, s)
        assert all(check.passed for check in diff.checks())
        assert np.count_nonzero(diff.matrix, axis=1).max() <= s + 1


@pytest.mark.parametrize("n", [24, 160])
def test_undivided_difference_checks_do_not_grow_with_block_size(n):
    op = build_block_operator(Family.CSBP, 4, n, 1.0)
    checks = {check.name.rsplit(":", 1)[1]: check for check in build_undivided_diff(op.dist, 5).checks()}
    assert checks["annihilation"].passed
    assert checks["annihilation"].residual < 1e-11
    assert checks["leading"].passed


def test_undivided_difference_order_too_high():
    op = build_block_operator(Family.CSBP, 1, 4, 1.0)
    with pytest.raises(OrderTooHigh):
        build_undivided_diff(op.dist, 4)


def test_negative_strength_is_rejected(unit_csbp1):
    with pytest.raises(NegativeCoefficient):
        build_dissipation(unit_csbp1, 2, -1e-3)


def test_shape_mismatch(unit_csbp1):
    diss = build_dissipation(unit_csbp1, 2, 1.0)
    with pytest.raises(DimensionMismatch):
        diss.apply(np.ones(11))


def test_apply_matches_dense_matrix(rng):
    op = build_block_operator(Family.CSBP, 3, 20, 1.0)
    diss = build_dissipation(op, 4, 0.005, include_Htilde=True)
    q = rng.standard_normal(20)
    np.testing.assert_allclose(diss.apply(q), diss.matrix() @ q, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("p", [1, 2, 3, 4])
@pytest.mark.parametrize("include_B", [True, False])
@pytest.mark.parametrize("include_Htilde", [True, False])
def test_scalar_dissipation_properties(rng, p, include_B, include_Htilde):
    op = build_block_operator(Family.CSBP, p, minimum_csbp_nodes(p) + 6, 1.0)
    diss = build_dissipation(op, p + 1, 1.0, include_B, include_Htilde)
    coefficient = random_coefficient(diss, rng, CoefficientMode.NODAL_SCALAR)
    assert conservation_check(diss, rng, SAMPLES, coefficient).passed
    assert dissipativity_check(diss, rng, SAMPLES, coefficient).passed
    assert symmetry_check(diss).passed


@pytest.mark.parametrize(
    "mode",
    [
        CoefficientMode.SCALAR_BLOCK,
        CoefficientMode.MATRIX_BLOCK,
        CoefficientMode.SCALAR_MATRIX_BLOCK,
        CoefficientMode.MATRIX_MATRIX_BLOCK,
    ],
)
@pytest.mark.parametrize("s", [3, 4])
def test_euler_dissipation_properties(rng, mode, s):
    op = build_block_operator(Family.CSBP, 3, 16, 1.0)
    diss = build_dissipation(op, s, 1.0, mode=mode)
    coefficient = random_coefficient(diss, rng, mode)
    assert conservation_check(diss, rng, SAMPLES, coefficient, components=3).passed
    if mode.symmetric:
        assert dissipativity_check(diss, rng, SAMPLES, coefficient, components=3).passed


def test_entropy_modes_use_entropy_variables():
    assert CoefficientMode.MATRIX_MATRIX_BLOCK.variables == "entropy"
    assert CoefficientMode.SCALAR_MATRIX_BLOCK.variables == "entropy"
    assert CoefficientMode.MATRIX_BLOCK.variables == "conservative"


def test_system_blocks_reject_inadmissible_states():
    u = random_euler_states(np.random.default_rng(0), 8)
    u[3, -1] = 0.0
    with pytest.raises(NonAdmissibleState):
        build_system_blocks(u, CoefficientMode.MATRIX_BLOCK)


@pytest.mark.parametrize("family", [Family.LGL, Family.LG])
@pytest.mark.parametrize("p", range(2, 7))
def test_spectral_element_dissipation_is_rank_one(family, p):
    checks = se_rank_checks(family, p)
    assert [check.name for check in checks if not check.passed] == []


class TestTensorProduct:
    def setup_method(self):
        self.op = build_block_operator(Family.CSBP, 2, 10, 1.0)
        self.weights = np.outer(self.op.h, self.op.h)

    def test_lines_constant_in_direction_are_untouched(self, rng):
        diss = build_dissipation(self.op, 3, 1.0)
        profile = rng.standard_normal(10)
        q = np.broadcast_to(profile[None, :], (10, 10))
        np.testing.assert_allclose(apply_dissipation_2d(0, self.op, self.op, diss, 1.0, q), 0.0, atol=1e-12)
        assert np.abs(apply_dissipation_2d(1, self.op, self.op, diss, 1.0, q)).max() > 1e-3

    def test_conservative_and_dissipative(self, rng):
        diss = build_dissipation(self.op, 3, 1.0, mode=CoefficientMode.MATRIX_MATRIX_BLOCK)
        u = random_euler_states(rng, 100, dim=2).reshape(10, 10, 4)
        q = rng.standard_normal((10, 10, 4))
        for direction in (0, 1):
            coefficient = build_system_blocks(u, diss.mode, diss.half_nodes, direction, axis=-3 + direction)
            r = apply_dissipation_2d(direction, self.op, self.op, diss, 1.0, q, coefficient)
            np.testing.assert_allclose(np.einsum("ij,ijk->k", self.weights, r), 0.0, atol=1e-11)
            assert np.einsum("ij,ijk,ijk->", self.weights, q, r) <= 1e-12

    def test_metric_jacobian_scales_result(self, rng):
        diss = build_dissipation(self.op, 3, 1.0)
        q = rng.standard_normal((10, 10))
        unit = apply_dissipation_2d(0, self.op, self.op, diss, 1.0, q)
        np.testing.assert_allclose(apply_dissipation_2d(0, self.op, self.op, diss, 4.0, q), unit / 4.0)

    def test_rejects_non_positive_jacobian(self, rng):
        diss = build_dissipation(self.op, 3, 1.0)
        with pytest.raises(DissipationError):
            apply_dissipation_2d(0, self.op, self.op, diss, 0.0, rng.standard_normal((10, 10)))
