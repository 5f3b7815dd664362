import math

import numpy as np
import pytest

from polybergman.disc_poly import (
    REPRESENTATIONS,
    Orders,
    WeightParam,
    dbar_constant,
    dbar_derivative,
    disc_poly,
    eval_bivariate,
    eval_explicit_sum,
    eval_jacobi_form,
    eval_rodrigues,
    eval_rodrigues_conj,
    koshelev_basis,
    koshelev_constant,
    log_norm_const,
    norm_const,
    zernike_radial,
    zernike_radial_classical,
)
from polybergman.ledger import dbar_contour, dbar_finite_difference
from polybergman.spaces import SampledFunction, build_quad_rule, norm_sq

GAMMAS = [-0.5, 0.0, 1.0, 2.5]


def random_points(count, radius, seed=7):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(size=count))
    return r * np.exp(2j * math.pi * rng.uniform(size=count))


@pytest.fixture(scope="module")
def unweighted_rule():
    return build_quad_rule(WeightParam(0.0), 32, 64)


def test_weight_and_order_validation():
    with pytest.raises(ValueError):
        WeightParam(-1.0)
    with pytest.raises(ValueError):
        Orders(-1, 0)
    assert WeightParam(0.5).shifted(2) == WeightParam(2.5)
    o = Orders(5, 2)
    assert (o.low, o.gap) == (2, 3)


@pytest.mark.parametrize("gamma", GAMMAS)
def test_jacobi_form_small_cases(gamma):
    g = WeightParam(gamma)
    z = 0.3 - 0.45j
    assert eval_jacobi_form(g, Orders(0, 0), z) == pytest.approx(1.0)
    assert eval_jacobi_form(g, Orders(4, 0), z) == pytest.approx(z ** 4, rel=1e-14)
    expected = ((gamma + 2) * abs(z) ** 2 - 1) / (gamma + 1)
    assert eval_jacobi_form(g, Orders(1, 1), z) == pytest.approx(expected, rel=1e-14)
    assert disc_poly(g, Orders(2, 3), z) == eval_jacobi_form(g, Orders(2, 3), z)


def test_jacobi_form_regular_at_origin():
    g = WeightParam(1.0)
    assert eval_jacobi_form(g, Orders(3, 1), 0.0) == 0
    assert eval_jacobi_form(g, Orders(2, 2), 0.0) == pytest.approx(2 / ((g.gamma + 1) * (g.gamma + 2)), rel=1e-14)


def test_explicit_sum_small_cases():
    g = WeightParam(1.0)
    z = 0.3 + 0.4j
    assert eval_explicit_sum(g, Orders(0, 0), z) == pytest.approx(1.0)
    assert eval_explicit_sum(g, Orders(0, 3), z) == pytest.approx(np.conj(z) ** 3, rel=1e-14)
    assert eval_explicit_sum(g, Orders(2, 1), z) == pytest.approx(eval_jacobi_form(g, Orders(2, 1), z), abs=1e-13)


def test_rodrigues_small_cases():
    assert eval_rodrigues(WeightParam(0.7), Orders(3, 0), 0.2 + 0.5j) == pytest.approx((0.2 + 0.5j) ** 3, rel=1e-14)
    z = 0.2 - 0.1j
    g = WeightParam(0.5)
    assert eval_rodrigues(g, Orders(1, 1), z) == pytest.approx(eval_explicit_sum(g, Orders(1, 1), z), abs=1e-13)
    g = WeightParam(2.0)
    assert eval_rodrigues(g, Orders(3, 2), 0.6j) == pytest.approx(eval_jacobi_form(g, Orders(3, 2), 0.6j), abs=1e-12)


def test_rodrigues_requires_open_disc():
    with pytest.raises(ValueError):
        eval_rodrigues(WeightParam(0.0), Orders(1, 1), 1.0)
    with pytest.raises(ValueError):
        eval_jacobi_form(WeightParam(0.0), Orders(1, 1), 1.1)


@pytest.mark.parametrize("gamma", GAMMAS)
def test_cross_representation(gamma):
    g = WeightParam(gamma)
    z = random_points(50, 0.95)
    for m in range(11):
        for n in range(11):
            o = Orders(m, n)
            reference = eval_jacobi_form(g, o, z)
            scale = 1 + np.abs(reference)
            assert np.all(np.abs(eval_explicit_sum(g, o, z) - reference) <= 1e-11 * scale)
            assert np.all(np.abs(eval_rodrigues(g, o, z) - reference) <= 1e-11 * scale)
            assert np.allclose(eval_rodrigues_conj(g, o, z), np.conj(reference), rtol=0, atol=1e-11)


def test_representation_registry():
    assert set(REPRESENTATIONS) == {"jacobi", "sum", "rodrigues"}


def test_bound_fails_for_negative_gamma():
    # R_{1,1}(0) = -1 / (gamma + 1)
    assert eval_jacobi_form(WeightParam(-0.5), Orders(1, 1), 0.0) == pytest.approx(-2.0, rel=1e-14)


@pytest.mark.parametrize("gamma", [0.0, 1.0, 2.5])
def test_bounded_by_one_on_closed_disc(gamma):
    g = WeightParam(gamma)
    z = np.concatenate([random_points(480, 1.0, seed=11), np.exp(2j * math.pi * np.arange(20) / 20)])
    for m in range(9):
        for n in range(9):
            assert np.max(np.abs(eval_jacobi_form(g, Orders(m, n), z))) <= 1 + 1e-12


@pytest.mark.parametrize("gamma", GAMMAS)
def test_conjugation_symmetry_and_boundary_values(gamma):
    g = WeightParam(gamma)
    z = random_points(30, 0.9)
    circle = np.exp(2j * math.pi * np.arange(16) / 16)
    for m in range(6):
        for n in range(6):
            assert np.allclose(np.conj(eval_jacobi_form(g, Orders(m, n), z)), eval_jacobi_form(g, Orders(n, m), z), atol=1e-14)
            boundary = eval_jacobi_form(g, Orders(m, n), circle)
            assert np.allclose(boundary, circle ** m * np.conj(circle) ** n, atol=1e-13)
            assert eval_jacobi_form(g, Orders(m, n), 1.0) == pytest.approx(1.0, abs=1e-13)


def test_bivariate_on_the_diagonal():
    g = WeightParam(1.5)
    z = random_points(10, 0.9)
    o = Orders(4, 3)
    assert np.allclose(eval_bivariate(g, o, z, np.conj(z)), eval_explicit_sum(g, o, z), atol=0)


@pytest.mark.parametrize("gamma", GAMMAS)
def test_norm_const_values(gamma):
    g = WeightParam(gamma)
    assert norm_const(g, Orders(0, 0)) == pytest.approx(math.pi / (gamma + 1), rel=1e-15)
    assert norm_const(WeightParam(0.0), Orders(3, 5)) == pytest.approx(math.pi / 9, rel=1e-14)
    assert norm_const(WeightParam(1.0), Orders(1, 1)) == pytest.approx(math.pi / 16, rel=1e-14)


def test_norm_const_log_space_branch():
    g = WeightParam(0.5)
    # 16 + 16 > 30 goes through log-gamma; compare with the product formula
    direct = math.pi * math.factorial(16) ** 2 / ((g.gamma + 33) * math.prod(g.gamma + 1 + i for i in range(16)) ** 2)
    assert norm_const(g, Orders(16, 16)) == pytest.approx(direct, rel=1e-12)
    assert math.exp(log_norm_const(g, Orders(3, 2))) == pytest.approx(norm_const(g, Orders(3, 2)), rel=1e-13)
    assert np.isfinite(norm_const(g, Orders(200, 150)))


def test_dbar_examples():
    g = WeightParam(1.0)
    assert dbar_derivative(g, Orders(3, 0), 1, 0.2 + 0.1j) == 0
    assert dbar_constant(g, 0, 1, 1) == 1.0
    assert dbar_constant(g, 1, 1, 1) == pytest.approx((g.gamma + 2) / (g.gamma + 1))
    z = 0.3
    fd = dbar_finite_difference(g, Orders(1, 1), z)
    assert dbar_derivative(g, Orders(1, 1), 1, z) == pytest.approx(fd, abs=1e-7)


@pytest.mark.parametrize("gamma", [-0.5, 1.0])
def test_dbar_matches_finite_differences(gamma):
    g = WeightParam(gamma)
    z = np.array([0.3 + 0.0j, -0.2 + 0.45j, 0.5 - 0.3j])
    for m in range(7):
        for j in range(7):
            o = Orders(m, j)
            assert np.allclose(dbar_derivative(g, o, 1, z), dbar_finite_difference(g, o, z), rtol=0, atol=1e-7)
            for k in (2, 3):
                assert np.allclose(dbar_derivative(g, o, k, z), dbar_contour(g, o, k, z), rtol=0, atol=1e-9)


def test_dbar_annihilation():
    g = WeightParam(0.5)
    z = np.array([0.1 + 0.2j, -0.6j])
    for m in range(7):
        for n in range(7):
            assert np.all(dbar_derivative(g, Orders(m, n), n + 1, z) == 0)
            assert np.max(np.abs(dbar_contour(g, Orders(m, n), n + 1, z))) < 1e-7


def test_koshelev_examples():
    z = random_points(20, 0.9)
    assert np.allclose(koshelev_basis(0, 0, z), 1 / math.sqrt(math.pi), atol=1e-15)
    for m in range(5):
        assert np.allclose(koshelev_basis(m, 0, z), math.sqrt(m + 1) / math.sqrt(math.pi) * z ** m, atol=1e-13)


def test_koshelev_reduces_to_disc_polynomials(unweighted_rule):
    zero = WeightParam(0.0)
    z = random_points(20, 0.9)
    for m in range(5):
        for p in range(5):
            e = koshelev_basis(m, p, z)
            assert np.allclose(e, koshelev_constant(m, p) * eval_jacobi_form(zero, Orders(m, p), z), rtol=0, atol=1e-12)
            basis = SampledFunction(lambda w, m=m, p=p: koshelev_basis(m, p, w))
            assert norm_sq(basis, unweighted_rule) == pytest.approx(1.0, abs=1e-9)


def test_koshelev_rejects_negative_indices():
    with pytest.raises(ValueError):
        koshelev_basis(-1, 0, 0.1)


def test_zernike_radial_examples():
    assert zernike_radial(0, 0, 0.4) == pytest.approx(1.0)
    assert zernike_radial(0, 1, 0.4) == pytest.approx(0.4)
    assert zernike_radial(1, 1, 0.5) == pytest.approx(-0.5, abs=1e-15)


def test_zernike_radial_against_classical():
    r = np.linspace(0, 1, 17)
    for m in range(7):
        for n in range(m, 7):
            assert np.allclose(zernike_radial(m, n, r), zernike_radial_classical(n - m, m + n, r), atol=1e-13)


def test_zernike_phase():
    zero = WeightParam(0.0)
    r, theta = 0.7, 1.1
    for m in range(5):
        for n in range(5):
            value = eval_jacobi_form(zero, Orders(m, n), r * np.exp(1j * theta))
            expected = np.exp(1j * (m - n) * theta) * zernike_radial_classical(n - m, m + n, r)
            assert value == pytest.approx(expected, abs=1e-13)


def test_zernike_radial_validation():
    with pytest.raises(ValueError):
        zernike_radial(2, 1, 0.5)
    with pytest.raises(ValueError):
        zernike_radial(0, 1, 1.2)
    assert zernike_radial_classical(1, 2, 0.5) == 0
