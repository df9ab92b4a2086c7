"""Quadrature on S^(n-1) and on great subspheres, and extremization over the sphere.

Rules
-----
* n = 2: uniform trapezoid on the circle.
* n = 3: product rule, Gauss-Legendre in t = cos(polar angle) on each
  hemisphere times a uniform trapezoid in azimuth.  Exact for spherical
  polynomials up to its stated degree; splitting at the equator makes the
  coordinate plane kinks of l_p balls and boxes harmless.
* n >= 4: scrambled Sobol points pushed through the Gaussian quantile,
  normalized and antithetically paired, with equal weights.

Every rule is symmetric under theta -> -theta.  Nodes are stored so that
node ``i + N/2`` is the antipode of node ``i``; even integrands are evaluated
on the first half only.
"""
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm, qmc

from .constants import sphere_area
from .exceptions import DomainError, InputError, NumericalFailure

__all__ = [
    "LEVELS",
    "SphericalRule",
    "SubsphereRule",
    "ExtremumResult",
    "build_sphere_rule",
    "build_subsphere_rule",
    "integrate",
    "integrate_values",
    "extremize",
    "householder_frame",
    "default_level",
    "check_unit",
]

LEVELS = ("low", "standard", "high")

# n = 3: (Gauss nodes per hemisphere, azimuth nodes)
_PRODUCT_SIZES = {"low": (12, 48), "standard": (32, 128), "high": (64, 256)}
_CIRCLE_SIZES = {"low": 256, "standard": 1024, "high": 4096}
_QMC_LOG2 = {"low": 10, "standard": 14, "high": 16}
_QMC_SEED = 20240611


def default_level():
    """Quality tier from ``VOLCOMP_QUAD`` (default ``standard``)."""
    level = os.environ.get("VOLCOMP_QUAD", "standard")
    return level if level in LEVELS else "standard"


def _check_level(level):
    if level is None:
        return default_level()
    if level not in LEVELS:
        raise DomainError(f"unknown quadrature level {level!r}; expected one of {LEVELS}")
    return level


def check_unit(theta, tol=1e-10):
    """Validate that the rows of ``theta`` are unit vectors and return a float array."""
    theta = np.asarray(theta, dtype=float)
    norms = np.linalg.norm(theta, axis=-1)
    if not np.all(np.abs(norms - 1.0) <= tol):
        raise InputError(f"direction(s) not of unit length (max deviation "
                         f"{np.max(np.abs(norms - 1.0)):.3g})")
    return theta


@dataclass(frozen=True, eq=False)
class SphericalRule:
    """Nodes and weights on S^(n-1).

    ``degree`` is the polynomial exactness for designed rules and ``None`` for
    stochastic ones.
    """

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    level: str
    kind: str
    degree: int = None

    @property
    def size(self):
        return len(self.weights)

    @property
    def half(self):
        """Nodes of one hemisphere (the antipodes are ``-half``)."""
        return self.nodes[: self.size // 2]

    @property
    def half_weights(self):
        return self.weights[: self.size // 2]

    @property
    def designed(self):
        return self.degree is not None


@dataclass(frozen=True, eq=False)
class SubsphereRule:
    """A rule on S^(n-1) intersected with the hyperplane orthogonal to ``axis``."""

    axis: np.ndarray
    frame: np.ndarray  # (n, n-1), orthonormal basis of axis-perp
    base: SphericalRule  # rule on S^(n-2) in frame coordinates
    nodes: np.ndarray = field(repr=False)

    @property
    def weights(self):
        return self.base.weights

    @property
    def half(self):
        return self.nodes[: self.base.size // 2]

    @property
    def half_weights(self):
        return self.base.half_weights


@dataclass
class ExtremumResult:
    direction: np.ndarray
    value: float
    mode: str
    iterations: int
    uncertainty: float
    refined: bool = True


def _circle_rule(m, level):
    phi = 2.0 * np.pi * np.arange(m // 2) / m
    half = np.column_stack([np.cos(phi), np.sin(phi)])
    nodes = np.vstack([half, -half])
    weights = np.full(m, 2.0 * np.pi / m)
    return SphericalRule(2, nodes, weights, level, "trapezoid", degree=m - 1)


def _product_rule(nt, nphi, level):
    x, w = np.polynomial.legendre.leggauss(nt)
    # Gauss-Legendre on [0, 1] for the upper hemisphere.
    t = 0.5 * (x + 1.0)
    wt = 0.5 * w
    phi = 2.0 * np.pi * np.arange(nphi) / nphi
    wphi = 2.0 * np.pi / nphi
    T, P = np.meshgrid(t, phi, indexing="ij")
    s = np.sqrt(np.clip(1.0 - T * T, 0.0, None))
    half = np.column_stack([(s * np.cos(P)).ravel(), (s * np.sin(P)).ravel(), T.ravel()])
    hw = (wt[:, None] * wphi * np.ones_like(P)).ravel()
    nodes = np.vstack([half, -half])
    weights = np.concatenate([hw, hw])
    degree = min(2 * nt - 1, nphi - 1)
    return SphericalRule(3, nodes, weights, level, "gauss-product", degree=degree)


def _qmc_rule(n, log2m, level):
    m = 2 ** (log2m - 1)
    sampler = qmc.Sobol(d=n, scramble=True, seed=_QMC_SEED + n)
    u = sampler.random_base2(log2m - 1)
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    g = norm.ppf(u)
    half = g / np.linalg.norm(g, axis=1, keepdims=True)
    nodes = np.vstack([half, -half])
    weights = np.full(2 * m, sphere_area(n) / (2 * m))
    return SphericalRule(n, nodes, weights, level, "sobol-antithetic", degree=None)


@lru_cache(maxsize=None)
def _cached_rule(n, level):
    if n == 2:
        rule = _circle_rule(_CIRCLE_SIZES[level], level)
    elif n == 3:
        rule = _product_rule(*_PRODUCT_SIZES[level], level)
    else:
        rule = _qmc_rule(n, _QMC_LOG2[level], level)
    rule.nodes.setflags(write=False)
    rule.weights.setflags(write=False)
    return rule


def build_sphere_rule(n, level=None):
    """Quadrature rule on S^(n-1) at quality ``level`` (low, standard, high)."""
    if int(n) != n or n < 2:
        raise DomainError(f"sphere rules need n >= 2, got {n}")
    return _cached_rule(int(n), _check_level(level))


def householder_frame(xi):
    """Orthonormal basis (n, n-1) of xi-perp from the reflection sending e_n to xi."""
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[0]
    e = np.zeros(n)
    e[-1] = 1.0
    v = e - xi
    vv = v @ v
    H = np.eye(n)
    if vv > 1e-30:
        H -= 2.0 * np.outer(v, v) / vv
    return H[:, : n - 1]


def build_subsphere_rule(xi, level=None):
    """Rule on the great subsphere S^(n-1) intersected with xi-perp."""
    xi = check_unit(np.asarray(xi, dtype=float), tol=1e-10)
    n = xi.shape[0]
    if n < 2:
        raise DomainError("subsphere rules need n >= 2")
    level = _check_level(level)
    frame = householder_frame(xi)
    if n == 2:
        base = SphericalRule(1, np.array([[1.0], [-1.0]]), np.array([1.0, 1.0]), level, "points", 1)
    else:
        base = build_sphere_rule(n - 1, level)
    nodes = base.nodes @ frame.T
    return SubsphereRule(xi, frame, base, nodes)


def _tree_sum(values):
    """Pairwise summation in a fixed tree order over the node index."""
    v = np.asarray(values, dtype=float)
    while v.shape[0] > 1:
        if v.shape[0] % 2:
            v = np.concatenate([v, np.zeros((1,) + v.shape[1:])])
        v = v[0::2] + v[1::2]
    return v[0] if v.shape[0] else 0.0


def integrate_values(values, weights):
    """Deterministic weighted sum of precomputed node values (last axis = nodes)."""
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise NumericalFailure(f"non-finite integrand value at node index {tuple(bad)}")
    prod = np.moveaxis(values * weights, -1, 0)
    return _tree_sum(prod)


def integrate(f, rule, even=False):
    """Integrate ``f`` (vectorized: (m, n) -> (m,)) against ``rule``.

    With ``even=True`` only one hemisphere is evaluated and doubled.  Otherwise
    antipodal value pairs are summed first so odd integrands cancel exactly.
    """
    if even:
        x = rule.half
        vals = np.asarray(f(x), dtype=float)
        _check_finite(vals, x)
        return 2.0 * integrate_values(vals, rule.half_weights)
    x = rule.nodes
    vals = np.asarray(f(x), dtype=float)
    _check_finite(vals, x)
    h = len(vals) // 2
    paired = vals[:h] + vals[h:]
    return integrate_values(paired, rule.weights[:h])


def _check_finite(vals, x):
    if not np.all(np.isfinite(vals)):
        i = int(np.argwhere(~np.isfinite(vals))[0][0])
        raise NumericalFailure(f"non-finite integrand value {vals[i]!r} at node {x[i].tolist()}")


def _tangent_basis(theta):
    n = theta.shape[0]
    return householder_frame(theta) if n > 1 else np.zeros((1, 0))


def extremize(f, n, mode="max", budget=400, level="low", candidates=3, xatol=1e-9, coarse=None):
    """Maximize or minimize an even continuous sphere function.

    The objective is evaluated on one hemisphere of a coarse rule (or on the
    rows of ``coarse``), then the best ``candidates`` nodes are polished by
    Nelder-Mead in a tangent-plane chart with reprojection.  The result is the
    best value found, a lower bound for the true maximum (upper bound for the
    minimum).
    """
    if mode not in ("max", "min"):
        raise DomainError(f"mode must be 'max' or 'min', got {mode!r}")
    sign = -1.0 if mode == "max" else 1.0
    pts = build_sphere_rule(n, level).half if coarse is None else np.asarray(coarse, float)
    vals = np.asarray(f(pts), dtype=float)
    _check_finite(vals, pts)
    order = np.argsort(sign * vals, kind="stable")
    best_dir = pts[order[0]].copy()
    best_val = float(vals[order[0]])
    spread = float(np.ptp(vals)) if len(vals) else 0.0
    total_iter = 0
    refined = True
    if n == 1 or spread == 0.0 or budget <= 0:
        return ExtremumResult(best_dir, best_val, mode, 0, 0.0, refined=budget > 0 or spread == 0.0)

    chosen = []
    for idx in order:
        p = pts[idx]
        if all(abs(p @ q) < 0.999 for q in chosen):
            chosen.append(p)
        if len(chosen) >= candidates:
            break

    uncertainty = 0.0
    per = max(budget // max(len(chosen), 1), 20)
    # coarse grid spacing sets the initial simplex size
    step = 2.0 * (sphere_area(n) / max(len(pts) * 2, 1)) ** (1.0 / (n - 1)) if n > 1 else 0.1
    for p0 in chosen:
        B = _tangent_basis(p0)

        def obj(u, p0=p0, B=B):
            x = p0 + B @ u
            x = x / np.linalg.norm(x)
            return sign * float(f(x[None, :])[0])

        init = np.vstack([np.zeros(n - 1), step * np.eye(n - 1)])
        res = minimize(obj, np.zeros(n - 1), method="Nelder-Mead",
                       options={"maxfev": per, "xatol": xatol, "fatol": 1e-14,
                                "initial_simplex": init})
        total_iter += int(res.nfev)
        if not res.success:
            refined = False
        x = p0 + B @ res.x
        x = x / np.linalg.norm(x)
        val = sign * float(res.fun)
        if sign * val < sign * best_val:
            best_val, best_dir = val, x
            sim_vals = res.final_simplex[1]
            uncertainty = float(np.ptp(sim_vals))
    # canonical hemisphere representative for determinism
    nz = np.flatnonzero(np.abs(best_dir) > 1e-14)
    if nz.size and best_dir[nz[-1]] < 0:
        best_dir = -best_dir
    best_val = float(f(best_dir[None, :])[0])
    return ExtremumResult(best_dir, best_val, mode, total_iter, uncertainty, refined)
