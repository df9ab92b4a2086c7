"""Zonal harmonics: Gegenbauer polynomials normalized to 1 at t = 1."""
import math
from functools import lru_cache

import numpy as np
from scipy.special import eval_chebyt, eval_gegenbauer, roots_jacobi

from .constants import _sphere_area_any, sphere_area


def harmonic_dimension(n, m):
    """Dimension of the space of degree-m spherical harmonics on S^(n-1)."""
    if m == 0:
        return 1
    if m == 1:
        return n
    return math.comb(m + n - 1, n - 1) - math.comb(m + n - 3, n - 1)


def zonal(m, n, t):
    """P_m(t) = C_m^((n-2)/2)(t) / C_m^((n-2)/2)(1); Chebyshev T_m for n = 2."""
    t = np.asarray(t, dtype=float)
    if n == 2:
        return eval_chebyt(m, t)
    lam = 0.5 * (n - 2)
    return eval_gegenbauer(m, lam, t) / _gegen_at_one(m, lam)


@lru_cache(maxsize=None)
def _gegen_at_one(m, lam):
    return math.exp(math.lgamma(m + 2 * lam) - math.lgamma(m + 1) - math.lgamma(2 * lam))


def zonal_norm_sq(m, n):
    """Integral of P_m(t)^2 (1 - t^2)^((n-3)/2) over [-1, 1]."""
    return sphere_area(n) / (_sphere_area_any(n - 1) * harmonic_dimension(n, m))


@lru_cache(maxsize=None)
def jacobi_rule(n, size):
    """Gauss nodes/weights on [-1, 1] for the weight (1 - t^2)^((n-3)/2)."""
    a = 0.5 * (n - 3)
    t, w = roots_jacobi(size, a, a)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def zonal_points(t, pole, perp):
    """Points t*pole + sqrt(1-t^2)*perp on the sphere."""
    t = np.asarray(t, dtype=float)
    s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    return t[:, None] * pole[None, :] + s[:, None] * perp[None, :]


def perpendicular(pole):
    """A deterministic unit vector orthogonal to ``pole``."""
    pole = np.asarray(pole, dtype=float)
    k = int(np.argmin(np.abs(pole)))
    e = np.zeros_like(pole)
    e[k] = 1.0
    v = e - (e @ pole) * pole
    return v / np.linalg.norm(v)
