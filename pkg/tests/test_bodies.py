import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from volcomp import bodies as B
from volcomp.constants import ball_volume
from volcomp.exceptions import DomainError, InputError


def _unit(rng, n, k=50):
    x = rng.standard_normal((k, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def test_ball_radial_and_support(rng):
    K = B.EuclideanBall(4, 1.7)
    th = _unit(rng, 4)
    np.testing.assert_allclose(K.radial(th), 1.7)
    np.testing.assert_allclose(K.support(th), 1.7)


def test_lp_ball_norm_oracle(rng):
    # radial = 1 / ||theta||_p
    for p in (1.0, 1.5, 3.0):
        K = B.LpBall(3, p)
        th = _unit(rng, 3)
        np.testing.assert_allclose(K.radial(th), 1 / np.sum(np.abs(th) ** p, axis=1) ** (1 / p),
                                   rtol=1e-13)


def test_lp_support_is_dual_norm(rng):
    K = B.LpBall(3, 1.5)
    th = _unit(rng, 3)
    q = 3.0
    np.testing.assert_allclose(K.support(th), np.sum(np.abs(th) ** q, axis=1) ** (1 / q),
                               rtol=1e-12)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
def test_lp_exact_volume(p):
    v = (2 * math.gamma(1 + 1 / p)) ** 3 / math.gamma(1 + 3 / p)
    assert B.LpBall(3, p).exact_volume() == pytest.approx(v, rel=1e-13)


def test_ellipsoid_radial_support(rng):
    a = np.array([0.5, 1.0, 2.0])
    E = B.Ellipsoid(a)
    th = _unit(rng, 3)
    np.testing.assert_allclose(E.radial(th), 1 / np.sqrt(np.sum((th / a) ** 2, axis=1)))
    np.testing.assert_allclose(E.support(th), np.sqrt(np.sum((th * a) ** 2, axis=1)))
    assert E.exact_volume() == pytest.approx(ball_volume(3))


def test_cube_vertices_and_volume():
    C = B.cube(3, 1.0)
    assert C.exact_volume() == pytest.approx(8.0)
    assert len(C.vertices) == 8


def test_zonotope_volume_oracle(rng):
    # |sum [-g_i, g_i]| = 2^n sum over n-subsets |det|
    g = rng.standard_normal((5, 3))
    Z = B.Zonotope(g)
    ref = 8 * sum(abs(np.linalg.det(g[list(c)])) for c in itertools.combinations(range(5), 3))
    assert Z.exact_volume() == pytest.approx(ref, rel=1e-10)


def test_zonotope_support(rng):
    g = rng.standard_normal((4, 3))
    Z = B.Zonotope(g)
    th = _unit(rng, 3)
    np.testing.assert_allclose(Z.support(th), np.abs(th @ g.T).sum(axis=1), rtol=1e-13)


def test_zonotope_radial_consistent_with_support(rng):
    Z = B.Zonotope(rng.standard_normal((5, 3)))
    th = _unit(rng, 3, 200)
    r = Z.radial(th)
    # boundary point r theta lies on the body: max over directions of <x, u> - h(u) = 0
    u = _unit(rng, 3, 4000)
    gap = (r[:, None] * th) @ u.T - Z.support(u)[None, :]
    assert np.max(gap) <= 1e-9
    assert np.all(np.max(gap, axis=1) > -0.05 * r)


def test_dilate_and_radial_sum(rng):
    K = B.Ellipsoid([1.0, 2.0, 0.7])
    th = _unit(rng, 3)
    np.testing.assert_allclose(B.dilate(K, 2.5).radial(th), 2.5 * K.radial(th))
    S = B.radial_sum(K, B.EuclideanBall(3))
    np.testing.assert_allclose(S.radial(th), K.radial(th) + 1.0)


def test_minkowski_support_additive(rng):
    a, b = B.Ellipsoid([1.0, 2.0, 0.7]), B.cube(3, 0.5)
    M = B.minkowski_sum(a, b)
    th = _unit(rng, 3)
    np.testing.assert_allclose(M.support(th), a.support(th) + b.support(th), rtol=1e-12)


def test_zonal_ball_convexity_flags():
    assert B.ZonalPerturbedBall(3, 1, {2: 0.2}).is_convex
    assert not B.ZonalPerturbedBall(3, 1, {2: 0.3}).is_convex
    assert B.ZonalPerturbedBall(5, 1, {2: 0.35}).is_convex


def test_membership_flags():
    assert B.EuclideanBall(7).intersection_reason
    assert B.Ellipsoid([1, 2, 3, 4, 5]).intersection_reason
    assert B.cube(3).intersection_reason
    assert B.cube(5).intersection_reason is None or "5" not in B.cube(5).intersection_reason
    assert B.Zonotope(np.eye(3)).projection_reason
    assert B.LpBall(3, 1).projection_reason is None


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([
    {"type": "ball", "n": 3, "radius": 1.5},
    {"type": "lp_ball", "n": 4, "p": 1.5},
    {"type": "ellipsoid", "axes": [1.0, 2.0, 0.5]},
    {"type": "cube", "n": 3, "half": 1.0},
    {"type": "zonotope", "generators": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]},
    {"type": "zonal_ball", "n": 5, "r0": 1.0, "coeffs": {4: 0.02}},
    {"type": "dilate", "beta": 2.0, "body": {"type": "ball", "n": 3}},
]))
def test_spec_round_trip(spec):
    K = B.body_from_spec(spec)
    K2 = B.body_from_spec(K.to_spec())
    th = np.eye(K.n)[:, ::-1]
    np.testing.assert_allclose(K.radial(th), K2.radial(th))


def test_spec_errors():
    with pytest.raises(InputError):
        B.body_from_spec("{n: 3}")
    with pytest.raises(InputError):
        B.body_from_spec({"type": "lp_ball", "n": 3})
    with pytest.raises(InputError):
        B.body_from_spec({"type": "teapot", "n": 3})


def test_bad_parameters():
    with pytest.raises(DomainError):
        B.EuclideanBall(3, -1.0)
    with pytest.raises((DomainError, InputError)):
        B.Ellipsoid([1.0, 0.0, 1.0])


def test_capability_matrix_lists_variants():
    names = {row[0] for row in B.capability_matrix()}
    assert set(B.VARIANTS) <= names | {"shell"}
