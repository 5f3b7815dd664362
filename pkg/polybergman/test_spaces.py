import math

import numpy as np
import pytest

from polybergman.disc_poly import Orders, WeightParam, eval_jacobi_form, norm_const
from polybergman.ledger import dbar_contour
from polybergman.spaces import (
    CoeffTable,
    SampledFunction,
    build_quad_rule,
    expand,
    gram_matrix,
    inner_product,
    integrate,
    membership_test,
    norm_sq,
    project_poly,
    project_true,
    project_true_kernel,
    random_polyanalytic,
    synthesize,
)

GAMMAS = [-0.5, 0.0, 1.0, 2.5]
SAMPLE_Z = np.array([0.1 + 0.2j, -0.45 + 0.3j, 0.6j, 0.7 - 0.1j, -0.2 - 0.55j])


def random_points(count, radius, seed):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(size=count))
    return r * np.exp(2j * math.pi * rng.uniform(size=count))


@pytest.fixture(scope="module")
def rules():
    return {gamma: build_quad_rule(WeightParam(gamma)) for gamma in GAMMAS}


def test_quad_rule_layout():
    q = build_quad_rule(WeightParam(0.5), 8, 12)
    assert q.radial_nodes == 8 and q.angular_nodes == 12
    assert q.nodes.shape == q.weights.shape == (96,)
    assert np.all(np.diff(q.radii) > 0)
    # radial-major: the first block sits on the smallest circle
    assert np.allclose(np.abs(q.nodes[:12]), q.radii[0])
    with pytest.raises(ValueError):
        q.weights[0] = 1.0
    with pytest.raises(ValueError):
        build_quad_rule(WeightParam(0.5), 0, 12)


@pytest.mark.parametrize("gamma", GAMMAS + [-0.9])
def test_total_mass_is_unnormalised(gamma):
    q = build_quad_rule(WeightParam(gamma), 16, 8)
    assert integrate(np.ones(q.nodes.shape), q).real == pytest.approx(math.pi / (gamma + 1), rel=1e-12)


@pytest.mark.parametrize("gamma", GAMMAS)
def test_gram_matrix_is_diagonal(rules, gamma):
    q = rules[gamma]
    indices = [Orders(m, n) for m in range(9) for n in range(5)]
    gram = gram_matrix(indices, q)
    norms = np.array([norm_const(q.gamma, o) for o in indices])
    expected = np.diag(norms)
    assert np.all(np.abs(gram - expected) <= 1e-10 * np.maximum(1.0, expected))
    assert gram[0, 0].real == pytest.approx(math.pi / (gamma + 1), rel=1e-12)


def test_gram_near_integrability_edge():
    q = build_quad_rule(WeightParam(-0.9), 96, 64)
    indices = [Orders(m, n) for m in range(5) for n in range(5)]
    gram = gram_matrix(indices, q)
    norms = np.array([norm_const(q.gamma, o) for o in indices])
    off = np.abs(gram - np.diag(np.diag(gram))) / np.sqrt(np.outer(norms, norms))
    assert np.max(off) < 1e-10
    assert np.max(np.abs(np.diag(gram) - norms) / norms) < 1e-10


def test_sampled_function_broadcasts_constants():
    f = SampledFunction(lambda z: 2.0)
    assert np.array_equal(f(np.array([0.1, 0.2j])), np.array([2.0, 2.0], dtype=complex))


def test_impure_function_is_sampled_in_node_order():
    q = build_quad_rule(WeightParam(0.0), 3, 4)
    seen = []

    def record(z):
        seen.append(complex(z))
        return z * np.conj(z)

    values = SampledFunction(record, pure=False).at_nodes(q)
    assert seen == list(q.nodes)
    assert np.allclose(values, np.abs(q.nodes) ** 2)


def test_inner_product_of_basis_functions(rules):
    q = rules[1.0]
    a = SampledFunction(lambda z: eval_jacobi_form(q.gamma, Orders(2, 1), z))
    b = SampledFunction(lambda z: eval_jacobi_form(q.gamma, Orders(1, 2), z))
    assert abs(inner_product(a, b, q)) < 1e-14
    assert norm_sq(a, q) == pytest.approx(norm_const(q.gamma, Orders(2, 1)), rel=1e-12)


def test_expand_basis_function(rules):
    q = rules[1.0]
    f = SampledFunction(lambda z: eval_jacobi_form(q.gamma, Orders(2, 1), z))
    table = expand(f, 6, 3, q)
    assert table.coeffs[2, 1] == pytest.approx(1.0, abs=1e-12)
    others = np.delete(table.coeffs.reshape(-1), 2 * 4 + 1)
    assert np.max(np.abs(others)) < 1e-10


def test_project_true_keeps_holomorphic_part(rules):
    q = rules[0.0]
    f = SampledFunction(lambda z: np.conj(z) + z)
    projected = project_true(f, 0, 8, q)
    assert np.allclose(projected(SAMPLE_Z), SAMPLE_Z, atol=1e-12)
    assert project_true(f, 0, 8, q).order == 0


@pytest.mark.parametrize("seed", range(10))
def test_random_decomposition_round_trip(rules, seed):
    gamma = GAMMAS[seed % len(GAMMAS)]
    q = rules[gamma]
    order, degree = seed % 4, 6
    f, table = random_polyanalytic(order, degree, seed, q.gamma)

    recovered = expand(f, degree, order, q)
    assert np.max(np.abs(recovered.coeffs - table.coeffs)) < 1e-9

    components = [project_true(f, k, degree, q) for k in range(order + 1)]
    total = sum(c(SAMPLE_Z) for c in components)
    assert np.max(np.abs(total - f(SAMPLE_Z))) < 1e-8

    norms = [norm_sq(c, q) for c in components]
    for k in range(order + 1):
        for l in range(k + 1, order + 1):
            assert abs(inner_product(components[k], components[l], q)) < 1e-9 * math.sqrt(norms[k] * norms[l])
    assert sum(norms) == pytest.approx(norm_sq(f, q), rel=1e-9)
    assert table.energy() == pytest.approx(norm_sq(f, q), rel=1e-9)

    for k in range(order + 1):
        once = components[k]
        twice = project_true(once, k, degree, q)
        assert np.max(np.abs(twice(SAMPLE_Z) - once(SAMPLE_Z))) < 1e-8
    full = project_poly(f, order, degree, q)
    assert np.max(np.abs(project_poly(full, order, degree, q)(SAMPLE_Z) - full(SAMPLE_Z))) < 1e-8
    assert np.max(np.abs(full(SAMPLE_Z) - f(SAMPLE_Z))) < 1e-8


@pytest.mark.parametrize("seed", range(4))
def test_coefficient_projection_matches_kernel_integral(rules, seed):
    q = rules[GAMMAS[seed]]
    f, _ = random_polyanalytic(3, 5, seed, q.gamma)
    zetas = random_points(10, 0.5, 100 + seed)
    for n in range(4):
        direct = project_true(f, n, 5, q)(zetas)
        assert np.max(np.abs(direct - project_true_kernel(f, n, zetas, q))) < 1e-7


def test_projections_of_other_components_vanish(rules):
    q = rules[1.0]
    g = q.gamma

    def basis(m, k):
        return SampledFunction(lambda z: eval_jacobi_form(g, Orders(m, k), z), order=k)

    for m in range(4):
        for k in range(4):
            for n in range(4):
                if n != k:
                    assert np.max(np.abs(project_true(basis(m, k), n, 6, q)(SAMPLE_Z))) < 1e-10
    for n in range(4):
        assert np.max(np.abs(project_poly(basis(0, n + 1), n, 6, q)(SAMPLE_Z))) < 1e-10
    # zbar^3 is R_{0,3} for every weight
    cube = SampledFunction(lambda z: np.conj(z) ** 3, order=3)
    assert np.max(np.abs(project_poly(cube, 2, 6, q)(SAMPLE_Z))) < 1e-10
    assert np.allclose(project_poly(cube, 3, 6, q)(SAMPLE_Z), np.conj(SAMPLE_Z) ** 3, atol=1e-10)


def test_membership(rules):
    q = rules[0.0]
    cube = SampledFunction(lambda z: z ** 3)
    assert membership_test(cube, 0, 6, 2, q).member
    assert not membership_test(SampledFunction(lambda z: np.conj(z) ** 3), 2, 6, 4, q).member
    for order in (1, 2, 3):
        f, _ = random_polyanalytic(order, 4, order, q.gamma)
        at_order = membership_test(f, order, 6, order + 1, q)
        below = membership_test(f, order - 1, 6, order + 1, q)
        assert at_order.member and not below.member
        assert below.residual > 0
    with pytest.raises(ValueError):
        membership_test(cube, 2, 6, 2, q)


def test_random_order_zero_is_holomorphic(rules):
    q = rules[0.0]
    f, table = random_polyanalytic(0, 5, 3, q.gamma)
    assert table.J == 0 and f.order == 0
    assert membership_test(f, 0, 6, 2, q).member


def test_random_polyanalytic_is_reproducible():
    g = WeightParam(0.0)
    _, a = random_polyanalytic(2, 3, 42, g)
    _, b = random_polyanalytic(2, 3, 42, g)
    assert np.array_equal(a.coeffs, b.coeffs)
    with pytest.raises(ValueError):
        random_polyanalytic(-1, 3, 0, g)


def test_coeff_table_payload_and_validation():
    g = WeightParam(1.5)
    table = CoeffTable(g, np.array([[1 + 2j, 0.5], [0, -1j]]))
    payload = table.to_payload()
    assert payload == {"gamma": 1.5, "M": 1, "J": 1, "coeffs": [[1.0, 2.0], [0.5, 0.0], [0.0, 0.0], [0.0, -1.0]]}
    assert np.array_equal(CoeffTable.from_payload(payload).coeffs, table.coeffs)
    with pytest.raises(ValueError):
        CoeffTable.from_payload({"gamma": 0.0, "M": 1})
    with pytest.raises(ValueError):
        CoeffTable.from_payload({"gamma": 0.0, "M": 1, "J": 1, "coeffs": [[1.0, 0.0]]})
    with pytest.raises(ValueError):
        CoeffTable(g, np.zeros(3))


def test_coeff_table_energy_split():
    g = WeightParam(0.0)
    table = CoeffTable(g, np.array([[1.0, 2.0, 0.0], [0.0, 0.0, 1j]]))
    d = table.norms()
    assert table.energy() == pytest.approx(d[0, 0] + 4 * d[0, 1] + d[1, 2])
    assert table.tail_energy(1) == pytest.approx(d[1, 2])
    assert table.tail_energy(2) == 0.0
    assert np.array_equal(table.truncated(0).coeffs, np.array([[1.0], [0.0]]))
    assert np.array_equal(table.column(1).coeffs[:, 1], table.coeffs[:, 1])


def test_coeff_table_dbar_matches_contour_derivative():
    g = WeightParam(0.5)
    _, table = random_polyanalytic(3, 4, 5, g)
    z = np.array([0.2 - 0.3j, 0.5j])
    for k in range(1, 5):
        lowered = table.dbar(k)
        assert lowered.gamma == g.shifted(k)
        expected = sum(
            table.coeffs[m, j] * dbar_contour(g, Orders(m, j), k, z) for m in range(table.M + 1) for j in range(table.J + 1)
        )
        assert np.allclose(synthesize(lowered)(z), expected, rtol=0, atol=1e-9)
