"""Origin-symmetric star and convex bodies.

Every body evaluates its radial function on batches of unit vectors
(``radial(theta)`` with ``theta`` of shape (m, n)); convex bodies also
evaluate their support function.  Bodies are immutable after construction.

Membership in the intersection-body and projection-body classes is tracked
by construction (``intersection_reason`` / ``projection_reason``); spectral
certificates live in :mod:`volcomp.spectral`.
"""
import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import yaml
from scipy.interpolate import CubicSpline
from scipy.spatial import ConvexHull, HalfspaceIntersection, cKDTree

from . import harmonics
from .constants import ball_volume
from .exceptions import CapabilityError, DomainError, InputError, NumericalFailure
from .quadrature import build_sphere_rule, check_unit, extremize, householder_frame

__all__ = [
    "StarBody", "EuclideanBall", "LpBall", "Ellipsoid", "Polytope", "Zonotope",
    "ZonalPerturbedBall", "RadialSum", "MinkowskiSum", "Dilate", "Sampled",
    "IntersectionBody", "SectionBody", "SurfaceMeasure",
    "radial_eval", "support_eval", "dilate", "radial_sum", "minkowski_sum",
    "radial_distance", "normalized_inradius", "normalized_circumradius",
    "intersection_body_of", "projection_body_of", "surface_measure",
    "cube", "body_from_spec", "VARIANTS", "capability_matrix",
]


def _as_points(theta, n):
    theta = np.asarray(theta, dtype=float)
    if theta.ndim == 1:
        theta = theta[None, :]
    if theta.shape[-1] != n:
        raise InputError(f"expected {n}-dimensional directions, got shape {theta.shape}")
    return theta


def _basis(n, k):
    e = np.zeros(n)
    e[k] = 1.0
    return e


class StarBody:
    """Base class.  Subclasses implement ``radial`` and, if convex, ``support``."""

    kind = "star"
    is_convex = False
    pole = None  # axis of revolution for zonal bodies

    def __init__(self, n):
        if int(n) != n or n < 1:
            raise DomainError(f"dimension must be a positive integer, got {n}")
        self.n = int(n)

    # -- evaluation -------------------------------------------------------
    def radial(self, theta):
        raise NotImplementedError

    def support(self, theta):
        raise CapabilityError(f"{type(self).__name__} has no support function")

    def norm(self, x):
        """Minkowski functional, homogeneous of degree 1."""
        x = _as_points(x, self.n)
        r = np.linalg.norm(x, axis=1)
        out = np.zeros_like(r)
        nz = r > 0
        out[nz] = r[nz] / self.radial(x[nz] / r[nz, None])
        return out

    def exact_volume(self):
        """Closed-form volume when the variant has one, else None."""
        return None

    # -- class membership by construction ----------------------------------
    @property
    def intersection_reason(self):
        if self.is_convex and self.n <= 4:
            return "convex body in dimension <= 4"
        return None

    @property
    def projection_reason(self):
        return None

    @property
    def is_zonal(self):
        return self.pole is not None

    def to_spec(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_spec()!r})"


class EuclideanBall(StarBody):
    kind = "ball"
    is_convex = True

    def __init__(self, n, radius=1.0):
        super().__init__(n)
        if radius <= 0:
            raise DomainError("radius must be positive")
        self.radius = float(radius)
        self.pole = _basis(self.n, self.n - 1)

    def radial(self, theta):
        theta = _as_points(theta, self.n)
        return np.full(theta.shape[0], self.radius)

    support = radial

    def exact_volume(self):
        return ball_volume(self.n) * self.radius ** self.n

    @property
    def intersection_reason(self):
        return "Euclidean ball"

    @property
    def projection_reason(self):
        return "Euclidean ball"

    def to_spec(self):
        return {"type": "ball", "n": self.n, "radius": self.radius}


class LpBall(StarBody):
    """Unit ball of the l_p norm, p in (0, inf]."""

    kind = "lp_ball"

    def __init__(self, n, p):
        super().__init__(n)
        p = float(p)
        if not p > 0:
            raise DomainError("p must be positive")
        self.p = p
        self.is_convex = p >= 1
        if p == 2:
            self.pole = _basis(self.n, self.n - 1)

    def radial(self, theta):
        a = np.abs(_as_points(theta, self.n))
        if math.isinf(self.p):
            return 1.0 / a.max(axis=1)
        # scale by the max entry to avoid underflow for small p
        mx = a.max(axis=1)
        s = ((a / mx[:, None]) ** self.p).sum(axis=1)
        return 1.0 / (mx * s ** (1.0 / self.p))

    def support(self, theta):
        if not self.is_convex:
            raise CapabilityError("l_p balls with p < 1 are not convex")
        a = np.abs(_as_points(theta, self.n))
        if self.p == 1:
            return a.max(axis=1)
        if math.isinf(self.p):
            return a.sum(axis=1)
        q = self.p / (self.p - 1.0)
        return (a ** q).sum(axis=1) ** (1.0 / q)

    def exact_volume(self):
        if math.isinf(self.p):
            return 2.0 ** self.n
        p = self.p
        return math.exp(self.n * math.log(2.0 * math.gamma(1 + 1 / p)) - math.lgamma(1 + self.n / p))

    @property
    def intersection_reason(self):
        if self.p <= 2:
            return "unit ball of l_p with 0 < p <= 2"
        return super().intersection_reason

    @property
    def projection_reason(self):
        if self.p >= 2:
            return "l_p ball with p >= 2 (polar is an L_1 ball)"
        return None

    def to_spec(self):
        p = "inf" if math.isinf(self.p) else self.p
        return {"type": "lp_ball", "n": self.n, "p": p}


class Ellipsoid(StarBody):
    """Axis-aligned ellipsoid with semi-axes ``axes``."""

    kind = "ellipsoid"
    is_convex = True

    def __init__(self, axes):
        axes = np.asarray(axes, dtype=float)
        super().__init__(axes.shape[0])
        if np.any(axes <= 0):
            raise DomainError("semi-axes must be positive")
        self.axes = axes
        vals, counts = np.unique(np.round(axes, 14), return_counts=True)
        if len(vals) == 1:
            self.pole = _basis(self.n, self.n - 1)
        elif len(vals) == 2 and counts.min() == 1:
            odd = vals[np.argmin(counts)]
            self.pole = _basis(self.n, int(np.argmin(np.abs(np.round(axes, 14) - odd))))

    def radial(self, theta):
        t = _as_points(theta, self.n)
        return 1.0 / np.sqrt(((t / self.axes) ** 2).sum(axis=1))

    def support(self, theta):
        t = _as_points(theta, self.n)
        return np.sqrt(((t * self.axes) ** 2).sum(axis=1))

    def curvature(self, u):
        """Curvature function (det A)^2 / h(u)^(n+1) of the surface measure."""
        return np.prod(self.axes) ** 2 / self.support(u) ** (self.n + 1)

    def exact_volume(self):
        return ball_volume(self.n) * float(np.prod(self.axes))

    @property
    def intersection_reason(self):
        return "ellipsoid (linear image of the ball)"

    @property
    def projection_reason(self):
        return "ellipsoid (linear image of the ball)"

    def to_spec(self):
        return {"type": "ellipsoid", "n": self.n, "axes": self.axes.tolist()}


class Polytope(StarBody):
    """Origin-symmetric polytope {x : <u_i, x> <= b_i}; facets come in +/- pairs."""

    kind = "polytope"
    is_convex = True

    def __init__(self, normals, offsets, symmetrize=True, _spec=None, _projection=None):
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        offsets = np.asarray(offsets, dtype=float).ravel()
        super().__init__(normals.shape[1])
        if normals.shape[0] != offsets.shape[0]:
            raise InputError("normals and offsets differ in length")
        if np.any(offsets <= 0):
            raise DomainError("offsets must be positive (origin in the interior)")
        lengths = np.linalg.norm(normals, axis=1)
        normals = normals / lengths[:, None]
        offsets = offsets / lengths
        if symmetrize:
            normals = np.vstack([normals, -normals])
            offsets = np.concatenate([offsets, offsets])
        self.normals = normals
        self.offsets = offsets
        self._spec = _spec
        self._projection = _projection
        self.zonotope_generators = None  # set when the polytope is known to be a zonotope

    def radial(self, theta):
        t = _as_points(theta, self.n)
        d = t @ self.normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(d > 1e-300, self.offsets[None, :] / d, np.inf)
        out = r.min(axis=1)
        if not np.all(np.isfinite(out)):
            raise NumericalFailure("polytope is unbounded in some direction")
        return out

    @cached_property
    def vertices(self):
        hs = np.hstack([self.normals, -self.offsets[:, None]])
        hi = HalfspaceIntersection(hs, np.zeros(self.n))
        pts = hi.intersections
        # deduplicate nearly coincident vertices from degenerate facets
        key = np.round(pts, 10)
        _, idx = np.unique(key, axis=0, return_index=True)
        return pts[np.sort(idx)]

    def support(self, theta):
        t = _as_points(theta, self.n)
        return (t @ self.vertices.T).max(axis=1)

    @cached_property
    def _hull(self):
        return ConvexHull(self.vertices)

    def exact_volume(self):
        return float(self._hull.volume)

    @cached_property
    def facets(self):
        """(normals, areas) of the facets, merged over coplanar hull simplices."""
        hull = self._hull
        verts = hull.points
        acc = {}
        n = self.n
        for simplex, eq in zip(hull.simplices, hull.equations):
            u = eq[:-1]
            key = tuple(np.round(u, 9))
            e = verts[simplex[1:]] - verts[simplex[0]]
            g = e @ e.T
            area = math.sqrt(max(np.linalg.det(g), 0.0)) / math.factorial(n - 1)
            if key in acc:
                acc[key][1] += area
            else:
                acc[key] = [u, area]
        normals = np.array([v[0] for v in acc.values()])
        areas = np.array([v[1] for v in acc.values()])
        return normals, areas

    @property
    def projection_reason(self):
        return self._projection

    def to_spec(self):
        if self._spec is not None:
            return dict(self._spec)
        return {"type": "polytope", "n": self.n, "normals": self.normals.tolist(),
                "offsets": self.offsets.tolist(), "symmetrize": False}


def cube(n, half=1.0):
    """The cube [-half, half]^n as a polytope."""
    normals = np.eye(n)
    P = Polytope(normals, np.full(n, float(half)), symmetrize=True,
                 _spec={"type": "cube", "n": int(n), "half": float(half)},
                 _projection="cube (a zonotope)")
    P.zonotope_generators = float(half) * np.eye(n)
    return P


def _null_vector(rows):
    """Unit vector orthogonal to the rows (rank n-1) and the (n-1)-volume they span."""
    _, s, vt = np.linalg.svd(rows)
    return vt[-1], float(np.prod(s))


def _canonical(u):
    nz = np.flatnonzero(np.abs(u) > 1e-12)
    return -u if u[nz[0]] < 0 else u


class Zonotope(StarBody):
    """Minkowski sum of the segments [-g_j, g_j]; h(theta) = sum_j |<g_j, theta>|."""

    kind = "zonotope"
    is_convex = True

    def __init__(self, generators):
        g = np.atleast_2d(np.asarray(generators, dtype=float))
        super().__init__(g.shape[1])
        keep = np.linalg.norm(g, axis=1) > 0
        self.generators = g[keep]
        if np.linalg.matrix_rank(self.generators) < self.n:
            raise DomainError("zonotope generators must span R^n")

    def support(self, theta):
        t = _as_points(theta, self.n)
        return np.abs(t @ self.generators.T).sum(axis=1)

    @cached_property
    def facets(self):
        """(unit normals with both signs, facet areas), parallel normals merged."""
        g = self.generators
        n = self.n
        acc = {}
        if n == 1:
            return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
        for idx in itertools.combinations(range(len(g)), n - 1):
            rows = g[list(idx)]
            u, vol = _null_vector(rows)
            if vol < 1e-12 * max(1.0, np.abs(rows).max() ** (n - 1)):
                continue
            u = _canonical(u)
            key = tuple(np.round(u, 9))
            w = 2.0 ** (n - 1) * vol
            if key in acc:
                acc[key][1] += w
            else:
                acc[key] = [u, w]
        normals = np.array([v[0] for v in acc.values()])
        areas = np.array([v[1] for v in acc.values()])
        return np.vstack([normals, -normals]), np.concatenate([areas, areas])

    @cached_property
    def _hrep(self):
        normals, _ = self.facets
        return normals, self.support(normals)

    def radial(self, theta):
        t = _as_points(theta, self.n)
        normals, offsets = self._hrep
        d = t @ normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(d > 1e-300, offsets[None, :] / d, np.inf)
        return r.min(axis=1)

    def exact_volume(self):
        g = self.generators
        total = 0.0
        for idx in itertools.combinations(range(len(g)), self.n):
            total += abs(np.linalg.det(g[list(idx)]))
        return 2.0 ** self.n * total

    def project(self, xi):
        """The projection onto xi-perp, as a zonotope in frame coordinates."""
        frame = householder_frame(check_unit(xi))
        return Zonotope(self.generators @ frame)

    @property
    def projection_reason(self):
        return "zonotope"

    def to_spec(self):
        return {"type": "zonotope", "n": self.n, "generators": self.generators.tolist()}


class ZonalPerturbedBall(StarBody):
    """rho(theta) = r0 + sum_m t_m P_m(<theta, pole>) for even degrees m.

    P_m is the Gegenbauer polynomial normalized to P_m(1) = 1.  Convexity is
    tested on the meridian curve (discrete turning test); the verdict is kept
    in ``convexity_checked``.
    """

    kind = "zonal_ball"

    def __init__(self, n, r0=1.0, coeffs=None, pole=None):
        super().__init__(n)
        self.r0 = float(r0)
        coeffs = {int(k): float(v) for k, v in (coeffs or {}).items()}
        for m in coeffs:
            if m < 0 or m % 2:
                raise DomainError(f"zonal coefficients need even degrees, got {m}")
        self.coeffs = dict(sorted(coeffs.items()))
        p = _basis(self.n, self.n - 1) if pole is None else np.asarray(pole, float)
        self.pole = p / np.linalg.norm(p)
        t = np.linspace(-1.0, 1.0, 4001)
        if np.min(self.profile(t)) <= 0:
            raise DomainError("zonal perturbation makes the radial function non-positive")
        self.convexity_checked = self._meridian_convex()
        self.is_convex = self.convexity_checked

    def profile(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self.r0)
        for m, c in self.coeffs.items():
            out = out + c * harmonics.zonal(m, self.n, t)
        return out

    def radial(self, theta):
        t = _as_points(theta, self.n) @ self.pole
        return self.profile(np.clip(t, -1.0, 1.0))

    def _meridian(self, count=4096):
        psi = 2.0 * np.pi * np.arange(count) / count
        r = self.profile(np.cos(psi))
        return psi, r, np.column_stack([r * np.sin(psi), r * np.cos(psi)])

    def _meridian_convex(self):
        _, _, pts = self._meridian()
        e = np.roll(pts, -1, axis=0) - pts
        cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        scale = np.mean(np.linalg.norm(e, axis=1)) ** 2
        # the curve runs clockwise in (x, z) = (r sin psi, r cos psi)
        return bool(np.all(cross <= 1e-9 * scale))

    @cached_property
    def _support_spline(self):
        psi, r, _ = self._meridian(16384)
        beta = np.linspace(0.0, np.pi, 2049)
        vals = np.empty_like(beta)
        for i, b in enumerate(beta):
            c = r * np.cos(psi - b)
            j = int(np.argmax(c))
            # parabolic refinement on the fine grid
            y0, y1, y2 = c[j - 1], c[j], c[(j + 1) % len(c)]
            den = y0 - 2 * y1 + y2
            vals[i] = y1 - 0.125 * (y2 - y0) ** 2 / den if den < 0 else y1
        return CubicSpline(beta, vals)

    def support(self, theta):
        if not self.is_convex:
            raise CapabilityError("zonal perturbed ball failed the convexity test")
        t = np.clip(_as_points(theta, self.n) @ self.pole, -1.0, 1.0)
        return self._support_spline(np.arccos(t))

    def to_spec(self):
        spec = {"type": "zonal_ball", "n": self.n, "r0": self.r0,
                "coeffs": {int(k): v for k, v in self.coeffs.items()}}
        if not np.allclose(self.pole, _basis(self.n, self.n - 1)):
            spec["pole"] = self.pole.tolist()
        return spec


def _same_pole(a, b):
    if a is None or b is None:
        return None
    return a if abs(abs(a @ b) - 1.0) < 1e-12 else None


class RadialSum(StarBody):
    kind = "radial_sum"

    def __init__(self, left, right):
        if left.n != right.n:
            raise InputError(f"dimension mismatch: {left.n} vs {right.n}")
        super().__init__(left.n)
        self.left, self.right = left, right
        self.pole = _same_pole(left.pole, right.pole)

    def radial(self, theta):
        return self.left.radial(theta) + self.right.radial(theta)

    @property
    def intersection_reason(self):
        a, b = self.left.intersection_reason, self.right.intersection_reason
        if a and b:
            return "radial sum of intersection bodies"
        return None

    def to_spec(self):
        return {"type": "radial_sum", "left": self.left.to_spec(), "right": self.right.to_spec()}


class MinkowskiSum(StarBody):
    """Lazy Minkowski sum, represented by the sum of support functions.

    The radial function is recovered by the dual formula
    rho(theta) = min_{<u,theta> > 0} h(u) / <u, theta> over a dense rule.
    """

    kind = "minkowski_sum"
    is_convex = True

    def __init__(self, left, right):
        if left.n != right.n:
            raise InputError(f"dimension mismatch: {left.n} vs {right.n}")
        if not (left.is_convex and right.is_convex):
            raise DomainError("Minkowski sums need convex operands")
        super().__init__(left.n)
        self.left, self.right = left, right
        self.pole = _same_pole(left.pole, right.pole)

    def support(self, theta):
        return self.left.support(theta) + self.right.support(theta)

    @cached_property
    def _dual_grid(self):
        u = build_sphere_rule(self.n, "standard").nodes
        return u, self.support(u)

    def radial(self, theta):
        t = _as_points(theta, self.n)
        u, h = self._dual_grid
        out = np.empty(t.shape[0])
        for s in range(0, t.shape[0], 256):
            d = t[s:s + 256] @ u.T
            with np.errstate(divide="ignore", invalid="ignore"):
                r = np.where(d > 1e-12, h[None, :] / d, np.inf)
            out[s:s + 256] = r.min(axis=1)
        return out

    @property
    def projection_reason(self):
        a, b = self.left.projection_reason, self.right.projection_reason
        if a and b:
            return "Minkowski sum of projection bodies"
        return None

    def to_spec(self):
        return {"type": "minkowski_sum", "left": self.left.to_spec(), "right": self.right.to_spec()}


class Dilate(StarBody):
    kind = "dilate"

    def __init__(self, body, beta):
        if not beta > 0:
            raise DomainError("dilation factor must be positive")
        super().__init__(body.n)
        self.body, self.beta = body, float(beta)
        self.pole = body.pole
        self.is_convex = body.is_convex

    def radial(self, theta):
        return self.beta * self.body.radial(theta)

    def support(self, theta):
        return self.beta * self.body.support(theta)

    def exact_volume(self):
        v = self.body.exact_volume()
        return None if v is None else self.beta ** self.n * v

    @property
    def intersection_reason(self):
        return self.body.intersection_reason

    @property
    def projection_reason(self):
        return self.body.projection_reason

    def to_spec(self):
        return {"type": "dilate", "body": self.body.to_spec(), "beta": self.beta}


class Sampled(StarBody):
    """Radial values on the nodes of a rule, interpolated by spherical inverse distance."""

    kind = "sampled"

    def __init__(self, n, values, level="low", neighbours=8):
        super().__init__(n)
        self.level = level
        self.rule = build_sphere_rule(n, level)
        values = np.asarray(values, dtype=float)
        if values.shape != (self.rule.size,):
            raise InputError(f"expected {self.rule.size} radial values, got {values.shape}")
        if np.any(values <= 0):
            raise DomainError("radial values must be positive")
        self.values = values
        self._tree = cKDTree(self.rule.nodes)
        self._k = min(neighbours, self.rule.size)

    @classmethod
    def from_body(cls, body, level="low"):
        rule = build_sphere_rule(body.n, level)
        return cls(body.n, body.radial(rule.nodes), level)

    def radial(self, theta):
        t = _as_points(theta, self.n)
        chord, idx = self._tree.query(t, k=self._k)
        chord = np.atleast_2d(chord)
        idx = np.atleast_2d(idx)
        d = 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))
        exact = d[:, 0] < 1e-14
        w = 1.0 / np.maximum(d, 1e-300) ** 2
        vals = (w * self.values[idx]).sum(axis=1) / w.sum(axis=1)
        vals[exact] = self.values[idx[exact, 0]]
        return vals

    def to_spec(self):
        return {"type": "sampled", "n": self.n, "level": self.level, "values": self.values.tolist()}


def _section_values(body, xis, level):
    """|body cap xi-perp| for each row of ``xis`` via the polar section formula."""
    n = body.n
    xis = _as_points(xis, n)
    if n == 2:
        out = []
        for xi in xis:
            v = householder_frame(xi)[:, 0]
            out.append(2.0 * body.radial(v[None, :])[0])
        return np.array(out)
    base = build_sphere_rule(n - 1, level)
    half = base.half
    hw = base.half_weights
    out = np.empty(xis.shape[0])
    for i, xi in enumerate(xis):
        pts = half @ householder_frame(xi).T
        r = body.radial(pts)
        out[i] = 2.0 * float(np.dot(hw, r ** (n - 1))) / (n - 1)
    return out


class IntersectionBody(StarBody):
    """Star body whose radial function is the central section function of ``body``."""

    kind = "intersection_body"

    def __init__(self, body, level="standard"):
        super().__init__(body.n)
        self.body = body
        self.level = level
        self.pole = body.pole
        # intersection bodies of convex bodies are convex
        self.is_convex = body.is_convex and body.n >= 2

    def radial(self, theta):
        return _section_values(self.body, theta, self.level)

    @property
    def intersection_reason(self):
        return "intersection body of a star body"

    def support(self, theta):
        raise CapabilityError("support function of an intersection body is not available")

    def to_spec(self):
        return {"type": "intersection_body", "body": self.body.to_spec(), "level": self.level}


class SectionBody(StarBody):
    """The (n-1)-dimensional central section body cap xi-perp in frame coordinates."""

    kind = "section"

    def __init__(self, body, xi):
        xi = check_unit(np.asarray(xi, dtype=float))
        super().__init__(body.n - 1)
        self.body, self.xi = body, xi
        self.frame = householder_frame(xi)
        self.is_convex = body.is_convex

    def radial(self, theta):
        t = _as_points(theta, self.n)
        return self.body.radial(t @ self.frame.T)

    def support(self, theta):
        raise CapabilityError("support function of a section is not available")

    def to_spec(self):
        return {"type": "section", "body": self.body.to_spec(), "xi": self.xi.tolist()}


# --------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class SurfaceMeasure:
    """Surface area measure: discrete (normals, weights) or a curvature density."""

    n: int
    normals: np.ndarray = None
    weights: np.ndarray = None
    density: object = None

    @property
    def is_discrete(self):
        return self.normals is not None

    def total(self, level="standard"):
        if self.is_discrete:
            return float(self.weights.sum())
        from .quadrature import integrate
        return integrate(self.density, build_sphere_rule(self.n, level), even=True)


def surface_measure(body):
    """Surface area measure of a polytope, zonotope, ellipsoid or ball."""
    if isinstance(body, Dilate):
        inner = surface_measure(body.body)
        s = body.beta ** (body.n - 1)
        if inner.is_discrete:
            return SurfaceMeasure(body.n, inner.normals, s * inner.weights)
        return SurfaceMeasure(body.n, density=lambda u, f=inner.density: s * f(u))
    if isinstance(body, (Polytope, Zonotope)):
        normals, areas = body.facets
        return SurfaceMeasure(body.n, normals, areas)
    if isinstance(body, EuclideanBall):
        r = body.radius ** (body.n - 1)
        return SurfaceMeasure(body.n, density=lambda u: np.full(np.atleast_2d(u).shape[0], r))
    if isinstance(body, Ellipsoid):
        return SurfaceMeasure(body.n, density=body.curvature)
    raise CapabilityError(f"surface measure is not available for {type(body).__name__}")


# --------------------------------------------------------------------------
def radial_eval(body, theta):
    """rho_K(theta) for a unit vector (or batch of unit vectors)."""
    theta = np.asarray(theta, dtype=float)
    single = theta.ndim == 1
    t = check_unit(_as_points(theta, body.n), tol=1e-12)
    r = body.radial(t)
    return float(r[0]) if single else r


def support_eval(body, theta):
    """h_K(theta) for a unit vector (or batch) of a convex body."""
    if not body.is_convex:
        raise CapabilityError(f"{type(body).__name__} is not convex")
    theta = np.asarray(theta, dtype=float)
    single = theta.ndim == 1
    t = check_unit(_as_points(theta, body.n), tol=1e-12)
    h = body.support(t)
    return float(h[0]) if single else h


def dilate(body, beta):
    """beta * K, returned as the same kind of body where the variant allows it."""
    if not beta > 0:
        raise DomainError("dilation factor must be positive")
    beta = float(beta)
    if beta == 1.0:
        return body
    if isinstance(body, EuclideanBall):
        return EuclideanBall(body.n, body.radius * beta)
    if isinstance(body, Ellipsoid):
        return Ellipsoid(body.axes * beta)
    if isinstance(body, Zonotope):
        return Zonotope(body.generators * beta)
    if isinstance(body, ZonalPerturbedBall):
        return ZonalPerturbedBall(body.n, body.r0 * beta,
                                  {m: c * beta for m, c in body.coeffs.items()}, body.pole)
    if isinstance(body, Polytope):
        spec = body._spec
        if spec is not None and spec.get("type") == "cube":
            return cube(body.n, spec["half"] * beta)
        return Polytope(body.normals, body.offsets * beta, symmetrize=False,
                        _projection=body._projection)
    if isinstance(body, Dilate):
        return Dilate(body.body, body.beta * beta)
    return Dilate(body, beta)


def radial_sum(K, L):
    """K +_r L with rho = rho_K + rho_L."""
    if isinstance(K, EuclideanBall) and isinstance(L, EuclideanBall) and K.n == L.n:
        return EuclideanBall(K.n, K.radius + L.radius)
    return RadialSum(K, L)


def minkowski_sum(K, L):
    """K + L with h = h_K + h_L (structured for zonotopes and balls)."""
    if K.n != L.n:
        raise InputError(f"dimension mismatch: {K.n} vs {L.n}")
    if isinstance(K, Zonotope) and isinstance(L, Zonotope):
        return Zonotope(np.vstack([K.generators, L.generators]))
    if isinstance(K, EuclideanBall) and isinstance(L, EuclideanBall):
        return EuclideanBall(K.n, K.radius + L.radius)
    return MinkowskiSum(K, L)


def radial_distance(K, L, level="low", budget=400):
    """max over the sphere of |rho_K - rho_L|."""
    if K.n != L.n:
        raise InputError(f"dimension mismatch: {K.n} vs {L.n}")
    res = extremize(lambda t: np.abs(K.radial(t) - L.radial(t)), K.n, "max", budget, level)
    return res.value


def _volume(body, level):
    from .functionals import volume
    return volume(body, level=level)


def normalized_inradius(body, level="standard", budget=400):
    """r(K) = min rho_K / |K|^(1/n)."""
    res = extremize(body.radial, body.n, "min", budget, "low")
    if not res.value > 0:
        raise NumericalFailure("degenerate body: radial function vanishes")
    return res.value / _volume(body, level) ** (1.0 / body.n)


def normalized_circumradius(body, level="standard", budget=400):
    """R(L) = max rho_L / |L|^(1/n)."""
    res = extremize(body.radial, body.n, "max", budget, "low")
    if not np.isfinite(res.value):
        raise NumericalFailure("unbounded body")
    return res.value / _volume(body, level) ** (1.0 / body.n)


def intersection_body_of(body, level="standard"):
    """IL, rho_{IL}(xi) = |L cap xi-perp|; structured for balls."""
    if isinstance(body, EuclideanBall):
        return EuclideanBall(body.n, ball_volume(body.n - 1) * body.radius ** (body.n - 1))
    return IntersectionBody(body, level)


def projection_body_of(body):
    """Pi K, h_{Pi K}(theta) = |K | theta-perp|."""
    n = body.n
    if isinstance(body, EuclideanBall):
        return EuclideanBall(n, ball_volume(n - 1) * body.radius ** (n - 1))
    if isinstance(body, Ellipsoid):
        prod = float(np.prod(body.axes))
        return Ellipsoid(ball_volume(n - 1) * prod / body.axes)
    if isinstance(body, Dilate):
        return dilate(projection_body_of(body.body), body.beta ** (n - 1))
    if isinstance(body, (Polytope, Zonotope)):
        normals, areas = body.facets
        # one representative per +/- pair
        keep = []
        seen = set()
        for i, u in enumerate(normals):
            key = tuple(np.round(_canonical(u), 9))
            if key not in seen:
                seen.add(key)
                keep.append(i)
        return Zonotope(normals[keep] * areas[keep, None])
    raise CapabilityError(f"projection body is not available for {type(body).__name__}")


# --------------------------------------------------------------------------
VARIANTS = {
    "ball": "Euclidean ball {n, radius}",
    "lp_ball": "unit l_p ball {n, p} (p may be 'inf')",
    "ellipsoid": "axis-aligned ellipsoid {axes}",
    "cube": "cube [-half, half]^n {n, half}",
    "polytope": "symmetric polytope {n, normals, offsets[, symmetrize]}",
    "zonotope": "zonotope {n, generators}",
    "zonal_ball": "zonal perturbed ball {n, r0, coeffs: {degree: t}[, pole]}",
    "radial_sum": "radial sum {left, right}",
    "minkowski_sum": "Minkowski sum {left, right}",
    "dilate": "dilate {body, beta}",
    "intersection_body": "intersection body of {body}",
    "projection_body": "projection body of {body}",
    "sampled": "sampled radial function {n, level, values}",
}


def capability_matrix():
    """Rows of (variant, radial, support, surface measure, exact volume)."""
    rows = [
        ("ball", "yes", "yes", "density", "yes"),
        ("lp_ball", "yes", "p>=1", "no", "yes"),
        ("ellipsoid", "yes", "yes", "density", "yes"),
        ("cube", "yes", "yes", "discrete", "yes"),
        ("polytope", "yes", "yes", "discrete", "yes"),
        ("zonotope", "yes", "yes", "discrete", "yes"),
        ("zonal_ball", "yes", "if convex", "no", "no"),
        ("radial_sum", "yes", "no", "no", "no"),
        ("minkowski_sum", "dual grid", "yes", "no", "no"),
        ("dilate", "yes", "inherits", "inherits", "inherits"),
        ("intersection_body", "quadrature", "no", "no", "no"),
        ("projection_body", "inherits", "yes", "discrete/density", "inherits"),
        ("sampled", "interpolated", "no", "no", "no"),
    ]
    return rows


def body_from_spec(spec):
    """Build a body from a key-value description (dict or YAML/JSON text)."""
    if isinstance(spec, str):
        try:
            spec = yaml.safe_load(spec)
        except yaml.YAMLError as exc:
            raise InputError(f"cannot parse body description: {exc}") from None
    if not isinstance(spec, dict) or "type" not in spec:
        raise InputError(f"body description must be a mapping with a 'type' key, got {spec!r}")
    kind = spec["type"]
    try:
        if kind == "ball":
            return EuclideanBall(spec["n"], spec.get("radius", 1.0))
        if kind == "lp_ball":
            return LpBall(spec["n"], float(spec["p"]))
        if kind == "ellipsoid":
            return Ellipsoid(spec["axes"])
        if kind == "cube":
            return cube(spec["n"], spec.get("half", 1.0))
        if kind == "polytope":
            return Polytope(spec["normals"], spec["offsets"], spec.get("symmetrize", True))
        if kind == "zonotope":
            return Zonotope(spec["generators"])
        if kind == "zonal_ball":
            return ZonalPerturbedBall(spec["n"], spec.get("r0", 1.0), spec.get("coeffs", {}),
                                      spec.get("pole"))
        if kind == "radial_sum":
            return radial_sum(body_from_spec(spec["left"]), body_from_spec(spec["right"]))
        if kind == "minkowski_sum":
            return minkowski_sum(body_from_spec(spec["left"]), body_from_spec(spec["right"]))
        if kind == "dilate":
            return dilate(body_from_spec(spec["body"]), spec["beta"])
        if kind == "intersection_body":
            return intersection_body_of(body_from_spec(spec["body"]), spec.get("level", "standard"))
        if kind == "projection_body":
            return projection_body_of(body_from_spec(spec["body"]))
        if kind == "sampled":
            return Sampled(spec["n"], spec["values"], spec.get("level", "low"))
    except KeyError as exc:
        raise InputError(f"body of type {kind!r} is missing key {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (DomainError, InputError)):
            raise
        raise InputError(f"malformed {kind!r} description: {exc}") from None
    raise InputError(f"unknown body type {kind!r}; known: {sorted(VARIANTS)}")
