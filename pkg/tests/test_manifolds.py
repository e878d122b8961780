import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geowalk.errors import ContractViolation, NonUniqueGeodesic
from geowalk.manifolds import (CurvatureBounds, SphereModel, UnitTangent, ellipsoid_model,
                               sphere_distance, sphere_geodesic, sphere_parallel_transport)

from conftest import random_tangent


def test_curvature_bounds_derived():
    b = CurvatureBounds(1.0, 4.0)
    assert b.t_max == pytest.approx(math.pi / 4)
    assert b.d_bound == pytest.approx(math.pi)
    with pytest.raises(ContractViolation):
        CurvatureBounds(2.0, 1.0)


def test_geodesic_examples():
    s = sphere_geodesic(SphereModel(1, 2), UnitTangent([1, 0, 0], [0, 1, 0]), math.pi / 2)
    np.testing.assert_allclose(s.point, [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(s.direction, [-1, 0, 0], atol=1e-15)
    s = sphere_geodesic(SphereModel(2, 2), UnitTangent([2, 0, 0], [0, 1, 0]), math.pi)
    np.testing.assert_allclose(s.point, [0, 2, 0], atol=1e-15)
    np.testing.assert_allclose(s.direction, [-1, 0, 0], atol=1e-15)


@settings(max_examples=50)
@given(st.integers(0, 10_000), st.floats(0.1, 3.0), st.floats(-4, 4), st.floats(-4, 4))
def test_geodesic_properties(seed, r, t1, t2):
    rng = np.random.default_rng(seed)
    m = SphereModel(r, 3)
    x = rng.standard_normal(4)
    x *= r / np.linalg.norm(x)
    s = UnitTangent(x, random_tangent(rng, x / r))
    assert sphere_geodesic(m, s, 0.0).point == pytest.approx(x)
    end = sphere_geodesic(m, s, t1)
    assert abs(np.linalg.norm(end.point) - r) <= 1e-9 * r
    assert abs(np.linalg.norm(end.direction) - 1) <= 1e-9
    assert abs(end.direction @ end.point) <= 1e-9 * r
    two = sphere_geodesic(m, end, t2)
    one = sphere_geodesic(m, s, t1 + t2)
    np.testing.assert_allclose(two.point, one.point, atol=1e-9 * max(1, r))
    h = 1e-5
    speed = np.linalg.norm(sphere_geodesic(m, s, t1 + h).point - end.point) / h
    assert abs(speed - 1) <= 1e-4


def test_distance_examples(unit_sphere):
    assert sphere_distance(unit_sphere, [1, 0, 0], [1, 0, 0]) == 0.0
    assert sphere_distance(unit_sphere, [1, 0, 0], [0, 1, 0]) == pytest.approx(math.pi / 2, abs=1e-15)
    assert sphere_distance(unit_sphere, [1, 0, 0], [-1, 0, 0]) == pytest.approx(math.pi, abs=1e-15)
    assert sphere_distance(SphereModel(3, 2), [3, 0, 0], [0, 3, 0]) == pytest.approx(1.5 * math.pi)


def test_transport_examples(unit_sphere):
    x, y = [1, 0, 0], [0, 1, 0]
    np.testing.assert_allclose(sphere_parallel_transport(unit_sphere, [0, 1, 0], x, x), [0, 1, 0])
    np.testing.assert_allclose(sphere_parallel_transport(unit_sphere, [0, 1, 0], x, y), [-1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(sphere_parallel_transport(unit_sphere, [0, 0, 1], x, y), [0, 0, 1], atol=1e-15)


def test_transport_antipodal_raises(unit_sphere):
    with pytest.raises(NonUniqueGeodesic):
        sphere_parallel_transport(unit_sphere, [0, 1, 0], [1, 0, 0], [-1, 0, 0])


@settings(max_examples=50)
@given(st.integers(0, 10_000))
def test_transport_isometry(seed):
    rng = np.random.default_rng(seed)
    m = SphereModel(1.7, 4)
    x, y = (v / np.linalg.norm(v) * 1.7 for v in rng.standard_normal((2, 5)))
    u = random_tangent(rng, x / 1.7) * 2.0
    w = random_tangent(rng, x / 1.7)
    pu, pw = m.transport(u, x, y), m.transport(w, x, y)
    assert abs(pu @ pw - u @ w) <= 1e-9
    assert abs(np.linalg.norm(pu) - np.linalg.norm(u)) <= 1e-10
    assert abs(pu @ y) <= 1e-9


def test_transport_moves_geodesic_velocity(unit_sphere):
    # Transporting the initial velocity of the joining geodesic gives its final velocity.
    x = np.array([1.0, 0, 0])
    v = np.array([0, 0.6, 0.8])
    end = unit_sphere.geodesic(UnitTangent(x, v), 1.1)
    np.testing.assert_allclose(unit_sphere.transport(v, x, end.point), end.direction, atol=1e-12)


def numeric_normal_curvature(body, axes, p, u, h=1e-4):
    """Curvature of the normal section through p along u, by second differences."""
    def on_surface(q):
        return q / math.sqrt(float(np.sum(q * q / axes ** 2)))

    n = body.normal(p)
    c_plus, c_minus = on_surface(p + h * u), on_surface(p - h * u)
    # Radial re-projection is not a normal section but agrees to second order
    # in the normal component: curvature = normal acceleration / speed^2.
    t_plus = (c_plus - p) @ u
    t_minus = (p - c_minus) @ u
    acc = 2 * ((c_plus - p) @ n * t_minus + (c_minus - p) @ n * t_plus) / (t_plus * t_minus * (t_plus + t_minus))
    return acc


def test_ellipsoid_bounds_match_numeric_curvature():
    axes = np.array([1.0, 1.0, 2.0])
    body = ellipsoid_model(axes)
    assert math.sqrt(body.bounds.M2) == pytest.approx(2.0)
    assert math.sqrt(body.bounds.m2) == pytest.approx(0.25)
    curvs = []
    for i in range(3):
        p = np.zeros(3)
        p[i] = axes[i]
        for j in range(3):
            if j != i:
                curvs.append(numeric_normal_curvature(body, axes, p, np.eye(3)[j]))
    assert max(curvs) == pytest.approx(2.0, rel=1e-5)
    assert min(curvs) == pytest.approx(0.25, rel=1e-5)
    rng = np.random.default_rng(0)
    for _ in range(200):
        p = rng.standard_normal(3)
        p /= math.sqrt(np.sum(p * p / axes ** 2))
        u = random_tangent(rng, body.normal(p))
        k = numeric_normal_curvature(body, axes, p, u)
        assert 0.25 * (1 - 1e-4) <= k <= 2.0 * (1 + 1e-4)


def test_ellipsoid_equal_axes_is_sphere():
    b = ellipsoid_model([3.0, 3.0, 3.0, 3.0]).bounds
    assert b.m2 == pytest.approx(1 / 9) and b.M2 == pytest.approx(1 / 9)


def test_ellipsoid_normal_examples_and_consistency():
    axes = np.array([1.0, 2.0, 0.5])
    body = ellipsoid_model(axes)
    np.testing.assert_allclose(body.normal([1.0, 0, 0]), [-1, 0, 0])
    rng = np.random.default_rng(1)
    eps = 1e-6 * axes.min()
    for _ in range(100):
        p = rng.standard_normal(3)
        p /= math.sqrt(np.sum(p * p / axes ** 2))
        n = body.normal(p)
        assert abs(np.linalg.norm(n) - 1) <= 1e-9
        assert body.membership(p + eps * n)
        assert not body.membership(p - eps * n)


def test_ellipsoid_rejects_bad_axes():
    with pytest.raises(ContractViolation):
        ellipsoid_model([1.0, 0.0, 1.0])


def test_start_points(unit_sphere):
    assert unit_sphere.contains(unit_sphere.start_point())
    body = ellipsoid_model([2.0, 1.0, 1.0])
    p = body.start_point()
    assert p[0] == pytest.approx(2.0, abs=1e-9)
    assert body.contains(p, tol=1e-9)


def test_unit_tangent_check(unit_sphere):
    UnitTangent([1, 0, 0], [0, 1, 0]).check(unit_sphere)
    with pytest.raises(ContractViolation):
        UnitTangent([1, 0, 0], [1, 0, 0]).check(unit_sphere)
