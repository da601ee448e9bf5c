"""Polynomial machinery and the open determinant factorization."""

import math

import numpy as np
import pytest

from flowescape import (
    FactorizationMismatchError,
    NoSignChangeError,
    NoZeroAtOneError,
    PoleAtOneError,
    Polynomial,
    build_suspension,
    char_poly,
    cofactor_poly,
    constant_function,
    cylinder_function,
    deflate_at_one,
    escape_rate_flow,
    escape_rate_zeta,
    hole_quantities,
    smallest_root_geq_one,
    taylor_at_one,
    zeta_op_factorized,
)
from flowescape.zeta import correlation_poly

GOLDEN = (1 + math.sqrt(5)) / 2


# ---------------------------------------------------------------------------
# Polynomial basics
# ---------------------------------------------------------------------------

def test_polynomial_trims_and_evaluates():
    p = Polynomial((1.0, -0.5, 0.0, 0.0))
    assert p.coefficients == (1.0, -0.5)
    assert p.degree == 1
    assert p(2.0) == 0.0


def test_polynomial_arithmetic():
    p = Polynomial((1.0, 1.0))
    q = Polynomial((1.0, -1.0))
    assert (p * q).coefficients == (1.0, 0.0, -1.0)
    assert (p + q).coefficients == (2.0,)
    assert (p - q).coefficients == (0.0, 2.0)
    assert p.shift_power(2).coefficients == (0.0, 0.0, 1.0, 1.0)
    assert p.scale(0.5).coefficients == (0.5, 0.5)


def test_polynomial_derivative():
    p = Polynomial((1.0, -1.0, 0.25))
    assert p.derivative().coefficients == (-1.0, 0.5)


# ---------------------------------------------------------------------------
# char_poly / cofactor_poly / deflate
# ---------------------------------------------------------------------------

def test_char_poly_stochastic_2x2():
    m = np.array([[0.5, 0.5], [0.5, 0.5]])
    assert char_poly(m).coefficients == pytest.approx((1.0, -1.0))


def test_char_poly_identity():
    assert char_poly(np.eye(2)).coefficients == pytest.approx((1.0, -2.0, 1.0))


def test_char_poly_antidiagonal():
    m = np.array([[0.0, 1.0], [0.5, 0.0]])
    assert char_poly(m).coefficients == pytest.approx((1.0, 0.0, -0.5))


def test_cofactor_diagonal_entry():
    m = np.array([[0.5, 0.5], [0.5, 0.5]])
    assert cofactor_poly(m, 0, 0).coefficients == pytest.approx((1.0, -0.5))


def test_cofactor_off_diagonal_sign():
    m = np.array([[0.5, 0.5], [0.5, 0.5]])
    assert cofactor_poly(m, 0, 1).coefficients == pytest.approx((0.0, 0.5))


def test_cofactor_one_by_one():
    assert cofactor_poly(np.array([[0.3]]), 0, 0).coefficients == (1.0,)


def test_cofactor_matches_adjugate_identity():
    # (id - zM) adj(id - zM) = det(id - zM) id, checked entrywise at a point.
    rng = np.random.default_rng(5)
    m = rng.uniform(0, 1, (4, 4))
    z = 0.37
    a = np.eye(4) - z * m
    det = char_poly(m)(z)
    adj = np.array([[cofactor_poly(m, t, r)(z) for t in range(4)] for r in range(4)])
    np.testing.assert_allclose(a @ adj, det * np.eye(4), atol=1e-12)


def test_deflate_simple():
    assert deflate_at_one(Polynomial((1.0, -1.0))).coefficients == (1.0,)


def test_deflate_double_root_divides_once():
    g = deflate_at_one(Polynomial((1.0, -2.0, 1.0)))
    assert g.coefficients == pytest.approx((1.0, -1.0))


def test_deflate_product_form():
    # (1 - z)(1 + z/2) = 1 - z/2 - z^2/2
    g = deflate_at_one(Polynomial((1.0, -0.5, -0.5)))
    assert g.coefficients == pytest.approx((1.0, 0.5))


def test_deflate_rejects_nonzero_at_one():
    with pytest.raises(NoZeroAtOneError):
        deflate_at_one(Polynomial((1.0, -0.5)))


# ---------------------------------------------------------------------------
# Taylor development at z = 1
# ---------------------------------------------------------------------------

def test_taylor_geometric():
    got = taylor_at_one(Polynomial((1.0,)), Polynomial((1.0, -0.5)), 2)
    assert got == pytest.approx((2.0, 2.0, 2.0))


def test_taylor_with_vanishing_numerator():
    got = taylor_at_one(Polynomial((1.0, -1.0)), Polynomial((1.0, -0.5)), 1)
    assert got == pytest.approx((0.0, -2.0))


def test_taylor_constant():
    got = taylor_at_one(Polynomial((3.0,)), Polynomial((1.0,)), 3)
    assert got == pytest.approx((3.0, 0.0, 0.0, 0.0))


def test_taylor_pole_at_one():
    with pytest.raises(PoleAtOneError):
        taylor_at_one(Polynomial((1.0,)), Polynomial((1.0, -1.0)), 2)


def test_taylor_cancels_common_zero():
    # (1 - z)/(1 - z) == 1 after cancelling the shared simple zero.
    got = taylor_at_one(Polynomial((1.0, -1.0)), Polynomial((1.0, -1.0)), 2)
    assert got == pytest.approx((1.0, 0.0, 0.0))


# ---------------------------------------------------------------------------
# Root isolation
# ---------------------------------------------------------------------------

def test_root_fibonacci_quadratic():
    got = smallest_root_geq_one(Polynomial((1.0, -0.5, -0.25)), hi=2.0)
    assert got == pytest.approx(2 / GOLDEN, abs=1e-14)


def test_root_at_one():
    assert smallest_root_geq_one(Polynomial((1.0, -1.0)), hi=2.0) == 1.0


def test_root_linear():
    assert smallest_root_geq_one(Polynomial((1.0, -0.5)), hi=3.0) == pytest.approx(2.0, abs=1e-14)


def test_root_double():
    got = smallest_root_geq_one(Polynomial((1.0, -1.0, 0.25)))
    assert got == pytest.approx(2.0, abs=1e-12)


def test_root_none_found():
    with pytest.raises(NoSignChangeError):
        smallest_root_geq_one(Polynomial((1.0, 0.0, 1.0)), hi=4.0, companion_fallback=False)


# ---------------------------------------------------------------------------
# Correlation polynomial and the factorization
# ---------------------------------------------------------------------------

def test_correlation_poly_cases(unit_system, step_system):
    assert correlation_poly(hole_quantities(unit_system, (0, 1))).coefficients == (1.0,)
    assert correlation_poly(hole_quantities(unit_system, (0, 0, 0))).coefficients == (1.0, 0.5)
    assert correlation_poly(hole_quantities(step_system, (1, 1, 1))).coefficients == (
        1.0,
        0.0,
        0.5,
    )


def test_factorization_fibonacci_hole(unit_system):
    bundle = zeta_op_factorized(unit_system, (0, 0))
    assert bundle.zeta_open_inverse.coefficients == pytest.approx((1.0, -0.5, -0.25))
    assert bundle.max_deviation < 1e-15
    root = smallest_root_geq_one(bundle.zeta_open_inverse)
    assert root == pytest.approx(2 / GOLDEN, abs=1e-12)


def test_factorization_double_root_hole(unit_system):
    bundle = zeta_op_factorized(unit_system, (0, 1))
    assert bundle.zeta_open_inverse.coefficients == pytest.approx((1.0, -1.0, 0.25))


def test_factorization_m_equals_n_hole(unit_system):
    # Degenerate bordered case: the determinant reduces to the cofactor at t.
    bundle = zeta_op_factorized(unit_system, (0,))
    assert bundle.quantities.k0 == 0
    assert bundle.zeta_open_inverse.coefficients == pytest.approx((1.0, -0.5))


def test_factorization_closed_factor_deflates(unit_system):
    bundle = zeta_op_factorized(unit_system, (0, 0, 0))
    reassembled = Polynomial((1.0, -1.0)) * bundle.deflated
    got = np.array(reassembled.coefficients)
    want = np.array(bundle.zeta_closed_inverse.coefficients)
    n = max(len(got), len(want))
    np.testing.assert_allclose(np.pad(got, (0, n - len(got))), np.pad(want, (0, n - len(want))), atol=1e-12)


def test_cofactor_value_identity(step_system):
    bundle = zeta_op_factorized(step_system, (1, 1, 1))
    assert bundle.cofactor_value == pytest.approx(bundle.cofactor_predicted, abs=1e-12)


def test_escape_rate_zeta_matches_flow(step_system):
    for hole in [(0,), (1, 1), (1, 0, 1)]:
        a = escape_rate_zeta(step_system, hole)
        b = escape_rate_flow(step_system, hole, representation="refined")
        assert a == pytest.approx(b, abs=1e-10), hole


def test_root_radius_duality(unit_system, step_system):
    from flowescape import build_open_matrix, open_spectral_radius

    for system, hole in [(unit_system, (0, 0)), (step_system, (1, 1))]:
        om = build_open_matrix(system, hole, representation="refined")
        radius = open_spectral_radius(om)
        root = smallest_root_geq_one(zeta_op_factorized(system, hole).zeta_open_inverse)
        assert math.exp(escape_rate_flow(system, hole) * system.lattice_scale) * radius == pytest.approx(1.0, abs=1e-10)
        assert root * radius == pytest.approx(1.0, abs=1e-10)
