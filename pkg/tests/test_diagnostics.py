import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geowalk.diagnostics import (contraction_profile, cost_matrix, one_step_sphere_contraction_reference,
                                 sphere_coupled_ratio, uniformity_stats, wasserstein1)
from geowalk.errors import ContractViolation, InsufficientSamples
from geowalk.rng import RngStream
from geowalk.walk import run_coupled


def sphere_points(rng, n):
    x = rng.standard_normal((n, 3))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def brute_force_w1(a, b, m):
    n = len(a)
    cost = [[m.distance(p, q) for q in b] for p in a]
    return min(sum(cost[i][perm[i]] for i in range(n)) for perm in itertools.permutations(range(n))) / n


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_matches_brute_force(n, seed):
    from geowalk.manifolds import SphereModel
    m = SphereModel(1.0, 2)
    rng = np.random.default_rng(seed)
    a, b = sphere_points(rng, n), sphere_points(rng, n)
    assert wasserstein1(a, b, m) == pytest.approx(brute_force_w1(a, b, m), abs=1e-12)


def test_simple_cases(unit_sphere):
    rng = np.random.default_rng(0)
    a = sphere_points(rng, 20)
    assert wasserstein1(a, a, unit_sphere) == 0.0
    assert wasserstein1(a, a[::-1], unit_sphere) == pytest.approx(0.0, abs=1e-15)
    x, y = a[:1], a[1:2]
    assert wasserstein1(x, y, unit_sphere) == pytest.approx(unit_sphere.distance(x[0], y[0]), abs=1e-15)
    b = sphere_points(rng, 20)
    assert wasserstein1(a, b) == pytest.approx(wasserstein1(b, a), abs=1e-12)
    assert wasserstein1(a, b, "chord") <= wasserstein1(a, b, unit_sphere)


def test_triangle_inequality(unit_sphere):
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, b, c = (sphere_points(rng, 32) for _ in range(3))
        assert wasserstein1(a, c, unit_sphere) <= wasserstein1(a, b, unit_sphere) + wasserstein1(b, c, unit_sphere) + 1e-9


def test_wasserstein_contracts(unit_sphere):
    rng = np.random.default_rng(2)
    with pytest.raises(ContractViolation):
        wasserstein1(sphere_points(rng, 3), sphere_points(rng, 4))
    with pytest.raises(ContractViolation):
        wasserstein1(sphere_points(rng, 1025), sphere_points(rng, 1025))
    with pytest.raises(ContractViolation):
        cost_matrix(sphere_points(rng, 2), sphere_points(rng, 2), "manhattan")


def test_uniformity_examples(unit_sphere):
    rep = uniformity_stats(unit_sphere.sample_uniform(RngStream(5), 10_000), unit_sphere)
    assert rep.passes() and rep.n == 10_000
    p = np.array([0.0, 0.6, 0.8])
    assert uniformity_stats(np.tile(p, (100, 1)), unit_sphere).mean_norm == pytest.approx(1.0)
    pair = np.tile(np.vstack([p, -p]), (60, 1))
    assert uniformity_stats(pair, unit_sphere).mean_norm == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(InsufficientSamples):
        uniformity_stats(np.tile(p, (99, 1)), unit_sphere)


def equator(angle):
    return np.array([math.cos(angle), math.sin(angle), 0.0])


def test_contraction_profile_examples(unit_sphere):
    same = run_coupled(unit_sphere, equator(0.2), equator(0.2), 1.0, 10, RngStream(1))
    prof = contraction_profile(same, unit_sphere)
    assert np.all(prof.ratios == 1.0) and np.all(prof.coalesced)

    T, d0 = 1.0, 0.5
    north = run_coupled(unit_sphere, equator(0), equator(d0), T, 2, RngStream(1),
                        direction=lambda x, rng: np.array([0.0, 0.0, 1.0]))
    ratio = contraction_profile(north, unit_sphere).ratios[0]
    assert ratio == pytest.approx(math.acos(math.sin(T) ** 2 + math.cos(T) ** 2 * math.cos(d0)) / d0, abs=1e-12)

    flat = run_coupled(unit_sphere, equator(0), equator(d0), T, 6, RngStream(1),
                       direction=lambda x, rng: np.array([-x[1], x[0], 0.0]))
    np.testing.assert_allclose(contraction_profile(flat, unit_sphere).ratios, 1.0, atol=1e-12)


def test_reference_integrand_endpoints():
    d0, T = 0.5, 1.0
    # psi is measured from the connecting geodesic; pi/2 is the orthogonal case
    assert sphere_coupled_ratio(0.0, d0, T) == pytest.approx(1.0, abs=1e-7)
    assert sphere_coupled_ratio(math.pi / 2, d0, T) == pytest.approx(
        math.acos(math.sin(T) ** 2 + math.cos(T) ** 2 * math.cos(d0)) / d0, abs=1e-14)
    assert one_step_sphere_contraction_reference(d0, 1e-6) == pytest.approx(1.0, abs=1e-9)
    ref = one_step_sphere_contraction_reference(d0, T)
    assert sphere_coupled_ratio(math.pi / 2, d0, T) < ref < 1.0


def test_reference_matches_independent_quadrature():
    from scipy.integrate import quad
    d0, T = 0.5, 1.0
    val, _ = quad(lambda p: sphere_coupled_ratio(p, d0, T), 0, 2 * math.pi, limit=200)
    assert one_step_sphere_contraction_reference(d0, T) == pytest.approx(val / (2 * math.pi), abs=1e-8)
    with pytest.raises(ContractViolation):
        one_step_sphere_contraction_reference(0.0, 1.0)
