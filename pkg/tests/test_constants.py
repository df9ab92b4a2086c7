import math

import pytest
from hypothesis import given, settings, strategies as st

from volcomp.constants import (ball_volume, cn_constant, constant_window, dim_constants,
                               named_constant, sphere_area)
from volcomp.exceptions import DomainError


# oracle: hand values of the ball volume and sphere area
@pytest.mark.parametrize("n, vol, area", [
    (1, 2.0, None), (2, math.pi, 2 * math.pi), (3, 4 * math.pi / 3, 4 * math.pi),
    (4, math.pi ** 2 / 2, 2 * math.pi ** 2), (5, 8 * math.pi ** 2 / 15, 8 * math.pi ** 2 / 3),
])
def test_ball_and_sphere_closed_forms(n, vol, area):
    assert ball_volume(n) == pytest.approx(vol, rel=1e-14)
    if area is not None:
        assert sphere_area(n) == pytest.approx(area, rel=1e-14)
        assert sphere_area(n) == pytest.approx(n * ball_volume(n), rel=1e-14)


def test_cn_hand_values():
    # c_3 = (4 pi/3)^(2/3) / pi ; c_4 = (pi^2/2)^(3/4) / (4 pi/3)
    assert cn_constant(3) == pytest.approx((4 * math.pi / 3) ** (2 / 3) / math.pi, rel=1e-14)
    assert cn_constant(4) == pytest.approx((math.pi ** 2 / 2) ** 0.75 / (4 * math.pi / 3), rel=1e-14)
    assert abs(cn_constant(3) - 0.82714) < 1e-5
    assert abs(cn_constant(4) - 0.79043) < 1e-5


@given(st.integers(2, 40))
def test_cn_bounds(n):
    c = cn_constant(n)
    assert 1 / math.sqrt(math.e) < c < 1


def test_cn_decreasing_to_limit():
    vals = [cn_constant(n) for n in range(2, 200)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(1 / math.sqrt(math.e), rel=2e-2)


def test_dim_constants_bundle():
    d = dim_constants(3)
    assert d.c_n == cn_constant(3) and d.ball_volume == ball_volume(3)


@pytest.mark.parametrize("bad", [0, 1.5, True])
def test_bad_dimension(bad):
    with pytest.raises(DomainError):
        cn_constant(bad)


def test_thm3_reduces_to_cn():
    assert named_constant("thm3", 4, 0) == pytest.approx(cn_constant(4), rel=1e-10)


def test_factor_closed_forms():
    assert named_constant("thm2-factor", 3) == pytest.approx(math.sqrt(2 * math.pi / 4))
    assert named_constant("thm6-factor", 3) == pytest.approx(math.sqrt(2 * math.pi / 3))
    assert named_constant("meas-factor", 3) == pytest.approx(1.5 * cn_constant(3))
    assert named_constant("cor2", 3) == pytest.approx(
        ball_volume(2) / (ball_volume(1) * ball_volume(3) ** (1 / 3)))


def test_reversed_factor_ratio():
    # the reversed constant is the printed one times 2 pi (alpha - 1)
    for n, a in [(3, 3.4), (4, 4.5), (5, 5.7)]:
        ratio = named_constant("thm7-rev-factor", n, a) / named_constant("thm7-factor", n, a)
        assert ratio == pytest.approx(2 * math.pi * (a - 1), rel=1e-12)


def test_window_errors():
    assert constant_window("thm3", 5) == (1.0, 4.0)
    with pytest.raises(DomainError, match=r"\[1, 4\)"):
        named_constant("thm3", 5, 5.0)
    with pytest.raises(DomainError):
        named_constant("no-such", 3)


@settings(max_examples=30)
@given(st.integers(4, 9), st.floats(0.0, 0.999))
def test_fractional_constants_positive(n, u):
    a = (n - 4) + 3 * u
    assert named_constant("thm3", n, a) > 0
    assert named_constant("thm4-factor", n, a) > 0
    assert named_constant("thm7-factor", n, n + u) > 0
