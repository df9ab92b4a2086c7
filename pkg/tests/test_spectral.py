import math

import numpy as np
import pytest
from scipy.integrate import quad

from volcomp import bodies as B
from volcomp import functionals as F
from volcomp import spectral as SP
from volcomp.exceptions import DomainError, ScopeError
from volcomp.quadrature import build_sphere_rule


def _gauss_moment(k):
    return quad(lambda r: r ** k * math.exp(-0.5 * r * r), 0, np.inf, epsabs=0, epsrel=1e-13)[0]


def _hecke_oracle(m, p, n):
    """Multiplier from pairing with H_m(x) exp(-|x|^2/2), whose transform is (-i)^m (2 pi)^(n/2) itself."""
    sign = (-1) ** (m // 2)
    return sign * (2 * math.pi) ** (n / 2) * _gauss_moment(m - p + n - 1) / _gauss_moment(m + p - 1)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_base_case(n):
    ref = 2 * math.pi ** ((n + 1) / 2) / math.gamma((n - 1) / 2)
    assert SP.fourier_multiplier(0, n - 1, n) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("n", [3, 5])
@pytest.mark.parametrize("m", [0, 2, 4, 6, 10])
@pytest.mark.parametrize("p", [0.7, 1.0, 2.3])
def test_sign_and_magnitude_against_hecke_oracle(m, p, n):
    assert SP.fourier_multiplier(m, p, n) == pytest.approx(_hecke_oracle(m, p, n), rel=1e-9)


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("m", [0, 2, 4])
@pytest.mark.parametrize("p", [0.5, 1.0, 1.7])
def test_inversion(m, p, n):
    prod = SP.fourier_multiplier(m, p, n) * SP.fourier_multiplier(m, n - p, n)
    assert prod == pytest.approx((2 * math.pi) ** n, rel=1e-8)


def test_multiplier_domain():
    with pytest.raises(DomainError):
        SP.fourier_multiplier(2, 3.5, 3)
    with pytest.raises(DomainError):
        SP.fourier_multiplier(2, -1.0, 3)
    assert math.isfinite(SP.fourier_multiplier(2, -1.0, 3, continued=True))


def test_real_sh_orthonormal():
    r = build_sphere_rule(3, "high")
    Y = SP._real_sh(12, r.nodes)
    G = (Y * r.weights[:, None]).T @ Y
    np.testing.assert_allclose(G, np.eye(G.shape[0]), atol=1e-12)


@pytest.mark.parametrize("axes", [[1.0, 1.0, 0.6], [1.0, 1.0, 1.0, 1.0, 0.7]])
def test_spectral_section_matches_geometric(axes):
    E = B.Ellipsoid(axes)
    n = E.n
    s = SP.section_function_spectral(E)
    rng = np.random.default_rng(3)
    xi = rng.standard_normal((6, n))
    xi /= np.linalg.norm(xi, axis=1, keepdims=True)
    geo = F.section_function(E)(xi)
    np.testing.assert_allclose(s(xi), geo, rtol=1e-3)


def test_spectral_section_sh3():
    E = B.Ellipsoid([0.8, 1.0, 1.3])
    s = SP.section_function_spectral(E)
    xi = np.array([[1, 2, 3], [-1, 0.5, 0.2]], dtype=float)
    xi /= np.linalg.norm(xi, axis=1, keepdims=True)
    np.testing.assert_allclose(s(xi), F.section_function(E)(xi), rtol=1e-3)


def test_parseval_ball():
    spec, direct = SP.parseval_check(B.EuclideanBall(3), B.EuclideanBall(3), 1.0)
    ref = (2 * math.pi) ** 3 * 4 * math.pi
    assert spec == pytest.approx(ref, rel=1e-6)
    assert direct == pytest.approx(ref, rel=1e-6)


def test_parseval_ball_ellipsoid():
    spec, direct = SP.parseval_check(B.EuclideanBall(3), B.Ellipsoid([1, 1, 0.7]), 1.0)
    assert spec == pytest.approx(direct, rel=1e-3)


def test_parseval_random_zonal_pairs():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.choice([3, 4, 5]))
        a, b = rng.uniform(0.6, 1.5, 2)
        K = B.Ellipsoid([1.0] * (n - 1) + [a])
        L = B.ZonalPerturbedBall(n, 1.0, {2: float(rng.uniform(-0.1, 0.1))}) if b > 1 else \
            B.Ellipsoid([b] * (n - 1) + [1.0])
        p = float(rng.uniform(0.5, n - 0.5))
        spec, direct = SP.parseval_check(K, L, p)
        assert spec == pytest.approx(direct, rel=1e-4)


def test_fractional_identity_at_zero():
    e = SP.section_function_spectral(B.Ellipsoid([1, 1, 1, 0.8]))
    f = SP.fractional_laplacian(e, 0.0)
    np.testing.assert_array_equal(f.coeffs, e.coeffs)


def test_fractional_window():
    e = SP.section_function_spectral(B.Ellipsoid([1, 1, 1, 1, 0.8]))
    with pytest.raises(DomainError, match=r"\[1, 4\)"):
        SP.fractional_laplacian(e, 4.5)


def test_continuation_validated():
    for n in (3, 5):
        assert SP.validate_continuation(n) < 1e-6


def test_scope():
    assert SP.spectral_scope(B.EuclideanBall(5), B.Ellipsoid([1, 1, 1, 1, 2]))[0] == "zonal"
    assert SP.spectral_scope(B.cube(3))[0] == "sh3"
    with pytest.raises(ScopeError):
        SP.spectral_scope(B.cube(4))


def test_intersection_certificates():
    assert SP.is_intersection_body(B.EuclideanBall(3)).verdict == "certified-positive"
    assert SP.is_intersection_body(B.Ellipsoid([1, 1, 1, 1, 0.6])).verdict == "certified-positive"
    neg = SP.is_intersection_body(B.ZonalPerturbedBall(5, 1.0, {2: 0.35}))
    assert neg.verdict == "certified-negative"
    assert neg.value < -neg.error


def test_projection_certificates():
    c = SP.is_projection_body(B.LpBall(3, 1.0))
    assert c.verdict == "certified-negative"
    assert SP.is_projection_body(B.EuclideanBall(3)).verdict == "certified-positive"
    d = c.to_dict()
    assert d["verdict"] == "certified-negative" and d["witness"] is not None
