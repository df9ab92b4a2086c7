import math

import numpy as np
import pytest

from volcomp import bodies as B
from volcomp import verify as V
from volcomp.constants import ball_volume, cn_constant
from volcomp.exceptions import DomainError, InputError

BALL3 = B.EuclideanBall(3)


def test_registry_complete():
    ids = {"sec-stab", "sec-diff", "sec-hyper", "sec-avg", "sec-sep", "sec-frac-stab",
           "sec-frac-sep", "proj-sep", "proj-diff", "proj-hyper-min", "proj-hyper-max",
           "proj-surf", "proj-avg", "proj-stab", "proj-frac-stab", "meas-stab", "meas-diff",
           "meas-hyper"}
    assert ids <= set(V.REGISTRY)
    for c in V.REGISTRY.values():
        assert "=>" in c.statement or "<=" in c.statement


def test_epsilon_stability_examples():
    eps, margin, _ = V.epsilon_stability(BALL3, BALL3)
    assert eps == pytest.approx(0, abs=1e-10)
    eps, _, _ = V.epsilon_stability(B.dilate(BALL3, 1.1), BALL3)
    assert eps == pytest.approx((1.21 - 1) * math.pi, rel=1e-8)
    eps, _, _ = V.epsilon_stability(B.dilate(BALL3, 0.9), BALL3)
    assert eps == 0.0


def test_epsilon_separation_examples():
    gap, _, _ = V.epsilon_separation(BALL3, B.dilate(BALL3, 2.0), "projection")
    assert gap == pytest.approx(3 * math.pi, rel=1e-10)
    r = V.check_case("proj-sep", BALL3, BALL3)
    assert r.status == "hypothesis-unmet"


def test_minkowski_extra_generators_separate(rng):
    g = rng.standard_normal((5, 3))
    K = B.Zonotope(g)
    two = B.Zonotope(np.vstack([g, rng.standard_normal((2, 3))]))
    gap, margin, _ = V.epsilon_separation(K, two, "projection")
    assert gap > margin
    # a single extra segment leaves the shadow along itself unchanged
    one_dir = rng.standard_normal(3)
    one = B.Zonotope(np.vstack([g, one_dir]))
    gap1, margin1, _ = V.epsilon_separation(K, one, "projection")
    assert gap1 <= margin1 + 1e-9


def test_sec_stab_near_tight_on_ball_dilate():
    r = V.check_case("sec-stab", B.dilate(BALL3, 1.1), BALL3)
    assert r.lhs == pytest.approx(1.21 * ball_volume(3) ** (2 / 3), rel=1e-10)
    assert r.status == "pass" and abs(r.slack) <= 1e-4


def test_cube_hyperplane_case():
    r = V.check_case("sec-hyper", B.cube(3))
    assert r.lhs == pytest.approx(4.0, rel=1e-12)
    assert r.rhs == pytest.approx(cn_constant(3) * 4 * math.sqrt(2), rel=1e-4)
    w = np.abs(np.asarray(r.witness))
    assert np.sort(w) == pytest.approx([0, 1 / math.sqrt(2), 1 / math.sqrt(2)], abs=1e-3)
    assert r.status == "pass" and r.hypothesis_mode == "by-construction"


@pytest.mark.parametrize("case", ["sec-hyper", "sec-avg", "proj-hyper-min", "proj-hyper-max"])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_equality_at_ball(case, n):
    r = V.equality_probe_ball(case, n)
    assert abs(r.slack) <= 1e-6 and r.status == "pass"


def test_surface_and_average_projection_equality_at_ball():
    for n in (3, 4):
        for case in ("proj-surf", "proj-avg"):
            r = V.check_case(case, B.EuclideanBall(n))
            assert abs(r.slack) <= 1e-8 * abs(r.rhs)


def test_dilate_covariance():
    K, L = B.Ellipsoid([1.0, 0.8, 1.3]), B.Ellipsoid([1.2, 1.0, 0.9])
    beta = 1.7
    a = V.check_case("sec-stab", K, L)
    b = V.check_case("sec-stab", B.dilate(K, beta), B.dilate(L, beta))
    assert b.slack == pytest.approx(beta ** 2 * a.slack, rel=1e-4)


def test_zero_case_nested_pair():
    K = B.Ellipsoid([0.9, 0.8, 0.7])
    r = V.check_case("sec-stab", K, BALL3)
    assert r.epsilon == pytest.approx(0, abs=1e-3) and r.status == "pass"


def test_fractional_projection_literal_hypothesis_on_ball_dilates():
    # On balls the fractional Laplacian of P is a negative multiple of the radius^(n-1),
    # so K = 1.1 B, L = B satisfy the literal hypothesis with eps = 0 while |K| > |L|.
    r = V.check_case("proj-frac-stab", B.dilate(BALL3, 1.1), BALL3, {"alpha": 3.5})
    assert r.epsilon == pytest.approx(0, abs=1e-5)
    assert r.lhs > r.rhs
    assert r.status == "fail"


def test_fractional_projection_reversed_sharp_on_ball_dilates():
    for beta in (1.1, 1.5):
        r = V.check_case("proj-frac-stab-rev", B.dilate(BALL3, beta), BALL3, {"alpha": 3.5})
        assert r.status == "pass"
        assert abs(r.slack) <= 1e-5 * r.rhs


def test_fractional_section_cases_on_balls():
    K, L = B.EuclideanBall(5), B.EuclideanBall(5, 1.2)
    for case in ("sec-frac-stab", "sec-frac-sep"):
        r = V.check_case(case, K, L, {"alpha": 2.5})
        assert r.status == "pass"


def test_measure_cases():
    mu = {"type": "gaussian", "sigma": 1.0}
    r = V.check_case("meas-hyper", BALL3, params={"density": mu})
    assert r.status == "pass" and r.slack > 0
    r = V.check_case("meas-stab", B.dilate(BALL3, 1.1), BALL3, {"density": mu})
    assert r.status == "pass"


def test_hypothesis_unmet_on_certified_negative():
    Z = B.ZonalPerturbedBall(5, 1.0, {2: 0.35})
    r = V.check_case("sec-stab", Z, B.EuclideanBall(5))
    assert r.status == "hypothesis-unmet"


def test_assumed_membership_is_quarantined():
    r = V.check_case("sec-hyper", B.cube(5))
    assert r.hypothesis_mode == "assumed"
    assert r.status == "quarantined" and r.raw_status == "pass"


def test_input_errors():
    with pytest.raises(InputError):
        V.check_case("sec-bogus", BALL3)
    with pytest.raises(InputError):
        V.check_case("sec-stab", BALL3)
    with pytest.raises(DomainError, match=r"\[1, 4\)"):
        V.check_case("sec-frac-stab", B.EuclideanBall(5), B.EuclideanBall(5), {"alpha": 5.0})
    with pytest.raises(InputError):
        V.check_case("meas-hyper", BALL3)


def test_report_round_trip():
    r = V.check_case("sec-hyper", B.Ellipsoid([1.0, 2.0, 0.5]))
    assert V.CheckReport.from_dict(r.to_dict()) == r


def test_sharpness_probe():
    rows = V.sharpness_shell_probe([0.1, 0.03, 0.01])
    ratios = [r for _, r in rows]
    assert 0 < ratios[0] < 1
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] >= 0.9
    with pytest.raises(DomainError):
        V.sharpness_shell_probe([0.01, 0.1])


def test_counter_based_rng_reproducible():
    a = V.case_rng(42, 3, 7).standard_normal(4)
    b = V.case_rng(42, 3, 7).standard_normal(4)
    c = V.case_rng(42, 3, 8).standard_normal(4)
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a, c)


def test_suite_small_and_summary():
    cfg = {"cases": [{"case": "sec-hyper", "count": 3, "n": [3]},
                     {"case": "proj-stab", "count": 3, "n": [3]}]}
    reports, summary = V.run_suite(cfg, seed=5)
    assert summary["total"] == 6
    assert summary["counts"].get("fail", 0) == 0
    again, _ = V.run_suite(cfg, seed=5)
    assert [r.to_dict() for r in again] == [r.to_dict() for r in reports]
