import numpy as np
import pytest

from hilbert_clark.clark import (InnerFunction, alpha_beta, beta_alpha, clark_basis, inner_value,
                                 l2_gram, model_kernel, phi_from_inner, quadrature_gram)
from hilbert_clark.demos import roots_of_unity
from hilbert_clark.errors import AtOne, BetaEqualsOne, InvalidNodeSet, QuadratureUnresolved
from hilbert_clark.levelset import solve_level_set
from hilbert_clark.potential import PotentialContext, phi
from hilbert_clark.sequences import WeightedNodeSet, kernel_weight
from hilbert_clark.transform import Verdict, build, unitarity_report

from conftest import random_circle


def _disk(rng, k, r=0.95):
    return np.sqrt(rng.uniform(0, r * r, k)) * np.exp(1j * rng.uniform(0, 2 * np.pi, k))


def _spread_circle(rng, n):
    # jittered equispaced nodes with total mass 2 keep the Blaschke zeros off the circle
    theta = 2 * np.pi * (np.arange(n) + rng.uniform(-0.3, 0.3, n)) / n
    v = rng.uniform(0.5, 1.5, n)
    return WeightedNodeSet.circle(np.exp(1j * theta), 2 * v / v.sum())


def _h(nodes):
    return InnerFunction(PotentialContext(nodes))


def test_inner_examples(cube_roots, rng):
    z = _disk(rng, 100)
    assert np.max(np.abs(inner_value(_h(cube_roots), z) - z ** 3)) <= 1e-12
    one = _h(WeightedNodeSet.circle([1.0], [2.0]))
    np.testing.assert_allclose(one(z), z, atol=1e-14)
    assert abs(inner_value(_h(_spread_circle(rng, 7)), 0.0)) <= 1e-15


def test_inner_requires_circle(two_point):
    with pytest.raises(InvalidNodeSet):
        _h(two_point)


def test_phi_from_inner():
    assert phi_from_inner(0.0) == pytest.approx(1j)
    assert phi_from_inner(-1.0) == pytest.approx(0.0)
    with pytest.raises(AtOne):
        phi_from_inner(1.0)


def test_round_trip(rng):
    h = _h(random_circle(rng, 9))
    z = _disk(rng, 200)
    np.testing.assert_allclose(phi_from_inner(h(z)), phi(h.ctx, z), rtol=1e-12, atol=1e-12)


def test_alpha_beta():
    assert alpha_beta(0.0) == pytest.approx(-1.0)
    assert alpha_beta(1.0) == pytest.approx(-1j)
    assert beta_alpha(1j) == pytest.approx(-1.0)
    for a in np.linspace(-50, 50, 101):
        assert abs(abs(alpha_beta(a)) - 1.0) <= 1e-15
        assert beta_alpha(alpha_beta(a)) == pytest.approx(a, rel=1e-12, abs=1e-12)
    with pytest.raises(BetaEqualsOne):
        beta_alpha(1.0)


def test_inner_modulus(rng):
    s = random_circle(rng, 12)
    h = _h(s)
    assert np.all(np.abs(h(_disk(rng, 500, 0.999))) < 1 + 1e-12)
    t = np.linspace(0, 2 * np.pi, 10_000, endpoint=False)
    z = np.exp(1j * t)
    far = np.min(np.abs(z[:, None] - s.gamma[None, :]), axis=1) > 1e-3
    assert np.max(np.abs(np.abs(h(z[far])) - 1.0)) <= 1e-10


def test_inner_is_rational_of_degree_n(rng):
    # fit p/q with deg p, deg q <= N and q monic-free via a null vector, then test off-sample
    for n in (1, 3, 6):
        h = _h(random_circle(rng, n))
        zs = np.exp(1j * (np.arange(2 * n + 1) + 0.37) * 2 * np.pi / (2 * n + 1))
        vals = h(zs)
        V = np.vander(zs, n + 1, increasing=True)
        A = np.hstack([V, -vals[:, None] * V])
        coef = np.linalg.svd(A)[2][-1].conj()
        p, q = coef[: n + 1], coef[n + 1:]
        test = np.exp(1j * rng.uniform(0, 2 * np.pi, 50)) * 0.9
        fit = np.polyval(p[::-1], test) / np.polyval(q[::-1], test)
        assert np.max(np.abs(fit - h(test))) <= 1e-10


def test_model_kernel(cube_roots, rng):
    h = _h(cube_roots)
    np.testing.assert_allclose(model_kernel(h, 0.0, _disk(rng, 20)), 1.0, atol=1e-15)
    h = _h(random_circle(rng, 5))
    a, b = _disk(rng, 20), _disk(rng, 20)
    for x, y in zip(a, b):
        assert model_kernel(h, x, y) == pytest.approx(np.conj(model_kernel(h, y, x)), rel=1e-12)


def test_model_kernel_diagonal_limit(rng):
    s = random_circle(rng, 6)
    h = _h(s)
    ls = solve_level_set(h.ctx, 0.9)
    for lam in ls.lambdas:
        diag = model_kernel(h, lam, lam)
        near = 0.5 * (model_kernel(h, lam, lam * np.exp(1e-5j))
                      + model_kernel(h, lam, lam * np.exp(-1e-5j)))
        assert diag == pytest.approx(near, rel=1e-7)
        # the diagonal is 2 sum v/|lambda - gamma|^2 / (1 + alpha^2)
        expected = 2.0 / kernel_weight(s, lam) / (1 + 0.9 ** 2)
        assert diag.real == pytest.approx(expected, rel=1e-10)


def test_cube_roots_clark_basis(cube_roots):
    cb = clark_basis(_h(cube_roots), -1.0)
    np.testing.assert_allclose(cb.level_set.lambdas ** 3, -1.0, atol=1e-14)
    g = quadrature_gram(PotentialContext(cube_roots), cb.level_set, 4096)
    assert np.max(np.abs(g - np.diag(np.diag(g)))) <= 1e-10
    np.testing.assert_allclose(np.diag(g).real, 1.0 / cb.level_set.weights * 2 / 1, rtol=1e-10)


def test_single_node_clark_point():
    cb = clark_basis(_h(WeightedNodeSet.circle([1.0], [2.0])), -1.0)
    np.testing.assert_allclose(cb.level_set.lambdas, [-1.0], atol=1e-15)


def test_beta_one_rejected(cube_roots):
    with pytest.raises(BetaEqualsOne):
        clark_basis(_h(cube_roots), 1.0)


def test_quadrature_matches_l2(rng):
    for n in (1, 3, 8):
        for _ in range(3):
            nodes = roots_of_unity(n).nodes if n != 8 else _spread_circle(rng, n)
            beta = np.exp(1j * rng.uniform(0.1, 2 * np.pi - 0.1))
            cb = clark_basis(_h(nodes), beta)
            assert cb.max_offdiagonal <= 1e-9
            assert cb.max_l2_mismatch <= 1e-9
            rep = unitarity_report(build(nodes, cb.level_set))
            assert rep.verdict is Verdict.UNITARY


def test_l2_gram_diagonal_from_weights(rng):
    s = random_circle(rng, 10)
    ls = solve_level_set(PotentialContext(s), 1.3)
    g = l2_gram(PotentialContext(s), ls)
    beta = alpha_beta(1.3)
    np.testing.assert_allclose(np.diag(g).real, 0.5 * abs(1 - beta) ** 2 / ls.weights, rtol=1e-12)


def test_quadrature_unresolved_reported():
    # heavy clustered nodes push Blaschke zeros towards the circle
    theta = np.array([0.0, 0.01, 0.02, 3.0])
    nodes = WeightedNodeSet.circle(np.exp(1j * theta), [5.0, 5.0, 5.0, 5.0])
    with pytest.raises(QuadratureUnresolved):
        clark_basis(_h(nodes), -1.0, quad_points=16)
