"""Acceptance criteria 1-10, one test (or parametrized family) per criterion."""
import math
import os
import time

import numpy as np
import pytest
from scipy.special import gamma

from volcomp import bodies as B
from volcomp import functionals as F
from volcomp import spectral as SP
from volcomp import verify as V
from volcomp.cli import reports_csv
from volcomp.config import load_config, parse_config
from volcomp.constants import ball_volume, cn_constant, named_constant

HERE = os.path.dirname(__file__)
CRITERION5_CASES = ["sec-stab", "sec-diff", "sec-sep", "sec-hyper", "proj-sep", "proj-diff",
                    "proj-stab", "proj-hyper-min", "proj-hyper-max", "proj-surf", "meas-stab",
                    "meas-hyper", "sec-frac-stab", "sec-frac-sep", "proj-frac-stab"]


# 1 -------------------------------------------------------------------------------
def test_criterion_01_constants():
    t0 = time.perf_counter()
    for n in range(2, 21):
        c = cn_constant(n)
        assert 1 / math.sqrt(math.e) < c < 1
        assert c * ball_volume(n - 1) == pytest.approx(ball_volume(n) ** ((n - 1) / n), rel=1e-12)
    assert abs(cn_constant(3) - 0.82714) < 1e-5
    assert abs(cn_constant(4) - 0.79043) < 1e-5
    assert time.perf_counter() - t0 < 1.0


# 2 -------------------------------------------------------------------------------
def test_criterion_02_fractional_constant_reduction():
    assert abs(named_constant("thm3", 4, 0) - cn_constant(4)) <= 1e-10


# 3 -------------------------------------------------------------------------------
@pytest.mark.parametrize("p, rel", [(1.5, 1e-4), (2.0, 1e-4), (3.0, 1e-4), (1.0, 1e-2)])
def test_criterion_03_quadrature_lp_volume(p, rel):
    ref = (2 * gamma(1 + 1 / p)) ** 3 / gamma(1 + 3 / p)
    assert F.volume(B.LpBall(3, p), method="polar", level="standard") == pytest.approx(ref, rel=rel)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_criterion_03_quadrature_ball_section(n):
    xi = np.ones(n) / math.sqrt(n)
    assert F.section_volume(B.EuclideanBall(n), xi) == pytest.approx(ball_volume(n - 1), rel=1e-8)


# 4 -------------------------------------------------------------------------------
def test_criterion_04_spectral_anchors():
    for n in (3, 4, 5):
        ref = 2 * math.pi ** ((n + 1) / 2) / math.gamma((n - 1) / 2)
        assert SP.fourier_multiplier(0, n - 1, n) == pytest.approx(ref, rel=1e-12)
    for n in (3, 5):
        for m in (0, 2, 4):
            for p in (0.5, 1.0, 2.0):
                prod = SP.fourier_multiplier(m, p, n) * SP.fourier_multiplier(m, n - p, n)
                assert prod == pytest.approx((2 * math.pi) ** n, rel=1e-8)
    rng = np.random.default_rng(0)
    for axes in ([1.0, 1.0, 0.6], [1.0, 1.0, 1.0, 1.0, 0.7]):
        E = B.Ellipsoid(axes)
        xi = rng.standard_normal((8, E.n))
        xi /= np.linalg.norm(xi, axis=1, keepdims=True)
        np.testing.assert_allclose(SP.section_function_spectral(E)(xi),
                                   F.section_function(E)(xi), rtol=1e-3)
    spec, direct = SP.parseval_check(B.EuclideanBall(3), B.EuclideanBall(3), 1.0)
    ref = (2 * math.pi) ** 3 * 4 * math.pi
    assert ref == pytest.approx(3117.1, abs=0.05)
    assert spec == pytest.approx(ref, rel=1e-6) and direct == pytest.approx(ref, rel=1e-6)


# 5 -------------------------------------------------------------------------------
@pytest.fixture(scope="module")
def acceptance_suite():
    cfg = load_config(os.path.join(HERE, "configs", "acceptance.yaml"))
    t0 = time.perf_counter()
    reports, summary = V.run_suite(cfg)
    return reports, summary, time.perf_counter() - t0


def test_criterion_05_runtime(acceptance_suite):
    assert acceptance_suite[2] < 600


@pytest.mark.parametrize("case", CRITERION5_CASES)
def test_criterion_05_zero_violations(acceptance_suite, case):
    reports = [r for r in acceptance_suite[0] if r.case == case]
    assert reports
    bad = [(r.n, r.slack, r.bodies) for r in reports if r.status == "fail"]
    assert not bad, f"{len(bad)} genuine violations, first: {bad[0]}"


def test_criterion_05_sec_hyper_zoo():
    zoo = []
    for n in (3, 4, 5):
        zoo += [B.EuclideanBall(n), B.LpBall(n, 1.0), B.LpBall(n, 1.5), B.LpBall(n, 2.0),
                B.Ellipsoid(np.linspace(0.5, 2.0, n)), B.Ellipsoid([1.0] * (n - 1) + [0.6]),
                B.cube(n), B.radial_sum(B.LpBall(n, 1.0), B.EuclideanBall(n)),
                B.dilate(B.Ellipsoid(np.linspace(0.8, 1.2, n)), 1.7)]
    zoo += [B.Zonotope(np.random.default_rng(s).standard_normal((6, 3))) for s in range(3)]
    zoo += [B.ZonalPerturbedBall(3, 1.0, {2: 0.2}), B.ZonalPerturbedBall(5, 1.0, {4: 0.02})]
    for K in zoo:
        r = V.check_case("sec-hyper", K)
        assert r.status in ("pass", "quarantined"), (K.to_spec(), r.status)
        assert r.raw_status == "pass"


# 6 -------------------------------------------------------------------------------
@pytest.mark.parametrize("case", ["sec-hyper", "proj-hyper-min", "proj-hyper-max", "sec-avg"])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_criterion_06_equality_at_ball(case, n):
    assert abs(V.equality_probe_ball(case, n).slack) <= 1e-6


def test_criterion_06_near_tight_ball_dilate():
    r = V.check_case("sec-stab", B.dilate(B.EuclideanBall(3), 1.1), B.EuclideanBall(3))
    assert r.status == "pass" and r.slack <= 1e-4


# 7 -------------------------------------------------------------------------------
def test_criterion_07_cube_anchor():
    r = V.check_case("sec-hyper", B.cube(3))
    assert r.lhs == pytest.approx(4.0, rel=1e-12)
    assert r.rhs == pytest.approx(cn_constant(3) * 4 * math.sqrt(2), rel=1e-6)
    assert round(r.rhs, 3) == 4.679
    w = np.sort(np.abs(r.witness))
    np.testing.assert_allclose(w, [0, 1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-3)


# 8 -------------------------------------------------------------------------------
def _persists(cert, test, K):
    again = test(K, 2 * cert.cutoff)
    return again.verdict == cert.verdict


def test_criterion_08_certificates():
    zonal3 = [B.EuclideanBall(3), B.EuclideanBall(3, 1.7), B.LpBall(3, 2.0),
              B.Ellipsoid([1.0, 1.0, 0.6]), B.Ellipsoid([1.0, 1.0, 1.8]),
              B.ZonalPerturbedBall(3, 1.0, {2: 0.2}), B.ZonalPerturbedBall(3, 1.0, {4: 0.03}),
              B.dilate(B.Ellipsoid([0.7, 0.7, 1.0]), 1.3)]
    ib = SP.is_intersection_body
    for K in zonal3:
        assert K.is_convex
        c = ib(K)
        assert c.verdict == "certified-positive", K.to_spec()
        assert _persists(c, ib, K)
    for K in (B.EuclideanBall(5), B.Ellipsoid([1.0, 1.0, 1.0, 1.0, 0.6]),
              B.Ellipsoid([1.0, 1.0, 1.0, 1.0, 1.5])):
        c = ib(K)
        assert c.verdict == "certified-positive" and _persists(c, ib, K)
    Z = B.ZonalPerturbedBall(5, 1.0, {2: 0.35})
    assert Z.is_convex
    c = ib(Z)
    assert c.verdict == "certified-negative" and _persists(c, ib, Z)
    pb = SP.is_projection_body
    c = pb(B.LpBall(3, 1.0))
    assert c.verdict == "certified-negative" and _persists(c, pb, B.LpBall(3, 1.0))
    rng = np.random.default_rng(8)
    for Zt in [B.cube(3)] + [V.random_zonotope(rng, 3) for _ in range(3)]:
        c = pb(Zt)
        assert c.verdict != "certified-negative"
        if c.verdict != "inconclusive":
            assert _persists(c, pb, Zt)


# 9 -------------------------------------------------------------------------------
def test_criterion_09_sharpness_probe():
    ratios = [r for _, r in V.sharpness_shell_probe([0.1, 0.03, 0.01], n=3)]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] >= 0.9


# 10 ------------------------------------------------------------------------------
DETERMINISM_CONFIG = """
seed: 42
cases:
  - {case: sec-stab, count: 8, n: [3, 4, 5]}
  - {case: proj-sep, count: 6, n: [3]}
  - {case: meas-hyper, count: 4, n: [3, 4]}
  - {case: sec-frac-stab, count: 4, n: [4, 5]}
"""


def test_criterion_10_determinism():
    cfg = parse_config(DETERMINISM_CONFIG)
    a = reports_csv(V.run_suite(cfg, 42, workers=1)[0])
    b = reports_csv(V.run_suite(cfg, 42, workers=1)[0])
    c = reports_csv(V.run_suite(cfg, 42, workers=3)[0])
    assert a == b == c
    assert a.count("\n") == 23
