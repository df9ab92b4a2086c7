"""Volumes, sections, projections, averages, surface area, V_1 and mu-measures."""
import numpy as np
import yaml
from scipy.spatial import ConvexHull, HalfspaceIntersection

from .bodies import (Dilate, Ellipsoid, EuclideanBall, MinkowskiSum, Polytope,
                     StarBody, Zonotope, _as_points, surface_measure)
from .constants import _sphere_area_any, ball_volume, sphere_area
from .exceptions import CapabilityError, DomainError, InputError, NumericalFailure
from . import harmonics
from .quadrature import (build_sphere_rule, check_unit, default_level, householder_frame,
                         integrate, integrate_values)

__all__ = [
    "Density", "Constant", "Gaussian", "RadialPower", "Shell", "density_from_spec",
    "volume", "section_volume", "section_function", "projection_volume",
    "projection_function", "avg_section", "avg_projection", "surface_area",
    "mixed_volume_v1", "measure_volume", "measure_section", "measure_section_function",
    "project_body", "section_avg_of_section",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(64)
_MAX_POINTS = 1 << 19


# -- densities --------------------------------------------------------------
class Density:
    """Even continuous non-negative density on R^n.

    ``profile(r)`` is the density along rays (all densities here are radial);
    ``breakpoints`` split the radial integral where the profile is not smooth
    or is concentrated.
    """

    even = True
    breakpoints = ()

    def __init__(self, n):
        self.n = int(n)

    def profile(self, r):
        raise NotImplementedError

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return self.profile(np.linalg.norm(x, axis=1))

    def radial_integral(self, rho, k):
        """int_0^rho profile(r) r^k dr for each entry of ``rho`` (64-node Gauss-Legendre per piece)."""
        rho = np.asarray(rho, dtype=float)
        out = np.zeros_like(rho)
        edges = [0.0, *self.breakpoints]
        lo = np.zeros_like(rho)
        for b in [*edges[1:], np.inf]:
            hi = np.minimum(rho, b)
            active = hi > lo
            if np.any(active):
                a, c = lo[active], hi[active]
                mid, half = 0.5 * (a + c), 0.5 * (c - a)
                r = mid[:, None] + half[:, None] * _GL_X[None, :]
                vals = self.profile(r) * r ** k
                out[active] += half * (vals @ _GL_W)
            lo = np.maximum(lo, hi)
        if not np.all(np.isfinite(out)):
            raise NumericalFailure("non-finite density integral")
        return out

    def to_spec(self):
        raise NotImplementedError


class Constant(Density):
    def __init__(self, n, c=1.0):
        super().__init__(n)
        if c < 0:
            raise DomainError("density must be non-negative")
        self.c = float(c)

    def profile(self, r):
        return np.full(np.shape(r), self.c)

    def radial_integral(self, rho, k):
        rho = np.asarray(rho, dtype=float)
        return self.c * rho ** (k + 1) / (k + 1)

    def to_spec(self):
        return {"type": "constant", "n": self.n, "c": self.c}


class Gaussian(Density):
    def __init__(self, n, sigma=1.0):
        super().__init__(n)
        if not sigma > 0:
            raise DomainError("sigma must be positive")
        self.sigma = float(sigma)

    def profile(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(-0.5 * (r / self.sigma) ** 2)

    def to_spec(self):
        return {"type": "gaussian", "n": self.n, "sigma": self.sigma}


class RadialPower(Density):
    """|x|^s with s > -n."""

    def __init__(self, n, s):
        super().__init__(n)
        if not s > -n:
            raise DomainError(f"radial power needs s > -n = {-n}")
        self.s = float(s)

    def profile(self, r):
        return np.asarray(r, dtype=float) ** self.s

    def radial_integral(self, rho, k):
        e = self.s + k + 1
        if e <= 0:
            raise DomainError("radial integral diverges at the origin")
        return np.asarray(rho, dtype=float) ** e / e

    def to_spec(self):
        return {"type": "radial_power", "n": self.n, "s": self.s}


class Shell(Density):
    """Smooth bump exp(1 - 1/(1 - u^2)), u = (|x| - r0)/w, supported on |u| < 1."""

    def __init__(self, n, r0, width):
        super().__init__(n)
        if not (width > 0 and r0 - width >= 0):
            raise DomainError("shell needs width > 0 and r0 >= width")
        self.r0, self.width = float(r0), float(width)
        self.breakpoints = (self.r0 - self.width, self.r0, self.r0 + self.width)

    def profile(self, r):
        u = (np.asarray(r, dtype=float) - self.r0) / self.width
        out = np.zeros_like(u)
        inside = np.abs(u) < 1
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
        return out

    def to_spec(self):
        return {"type": "shell", "n": self.n, "r0": self.r0, "width": self.width}


def density_from_spec(spec, n=None):
    if isinstance(spec, str):
        spec = yaml.safe_load(spec)
    if not isinstance(spec, dict) or "type" not in spec:
        raise InputError(f"density description must be a mapping with 'type', got {spec!r}")
    n = spec.get("n", n)
    if n is None:
        raise InputError("density description needs a dimension n")
    kind = spec["type"]
    try:
        if kind == "constant":
            return Constant(n, spec.get("c", 1.0))
        if kind == "gaussian":
            return Gaussian(n, spec.get("sigma", 1.0))
        if kind == "radial_power":
            return RadialPower(n, spec["s"])
        if kind == "shell":
            return Shell(n, spec["r0"], spec["width"])
    except KeyError as exc:
        raise InputError(f"density {kind!r} is missing key {exc.args[0]!r}") from None
    raise InputError(f"unknown density type {kind!r}")


# -- helpers -------------------------------------------------------------------
def _rule(n, level, rule=None):
    if rule is not None:
        if rule.n != n:
            raise InputError(f"rule dimension {rule.n} does not match body dimension {n}")
        return rule
    return build_sphere_rule(n, level)


def _subsphere_map(body, xis, level, fn):
    """Apply ``fn(points (k, m, n)) -> (k, m)`` over subsphere half-rules and
    return the half-weighted sums, doubled, for each direction in ``xis``."""
    n = body.n
    xis = _as_points(xis, n)
    if n == 2:
        frames = np.stack([householder_frame(x)[:, 0] for x in xis])
        return 2.0 * fn(frames[:, None, :])[:, 0]
    base = build_sphere_rule(n - 1, level)
    half, hw = base.half, base.half_weights
    out = np.empty(xis.shape[0])
    chunk = max(1, _MAX_POINTS // len(hw))
    for s in range(0, xis.shape[0], chunk):
        block = xis[s:s + chunk]
        frames = np.stack([householder_frame(x) for x in block])  # (k, n, n-1)
        pts = np.einsum("mj,knj->kmn", half, frames)
        vals = fn(pts)
        out[s:s + chunk] = 2.0 * (vals @ hw)
    return out


def _radial_batched(body, pts):
    k, m, n = pts.shape
    return body.radial(pts.reshape(-1, n)).reshape(k, m)


# -- volume and sections ------------------------------------------------------------
def volume(K, rule=None, level=None, method="auto"):
    """|K|.

    ``method='polar'`` always uses (1/n) int rho^n; ``'auto'`` prefers the
    variant's closed form and falls back to the polar formula.
    """
    if method not in ("auto", "polar", "exact"):
        raise DomainError(f"unknown volume method {method!r}")
    if method != "polar":
        v = K.exact_volume()
        if v is not None:
            return v
        if method == "exact":
            raise CapabilityError(f"no closed-form volume for {type(K).__name__}")
        if K.is_zonal and K.n >= 3 and rule is None:
            return _zonal_polar_volume(K, level)
    r = _rule(K.n, level, rule)
    return integrate(lambda t: K.radial(t) ** K.n, r, even=True) / K.n


_ZONAL_VOLUME_NODES = {"low": 64, "standard": 256, "high": 1024}


def _zonal_polar_volume(K, level):
    """Polar formula reduced to one Gauss-Jacobi integral in t = <theta, pole>."""
    n = K.n
    t, w = harmonics.jacobi_rule(n, _ZONAL_VOLUME_NODES[level or default_level()])
    pts = harmonics.zonal_points(t, K.pole, harmonics.perpendicular(K.pole))
    return _sphere_area_any(n - 1) * float(w @ K.radial(pts) ** n) / n


def _hrep_or_none(K):
    if isinstance(K, Polytope):
        return K.normals, K.offsets
    if isinstance(K, Zonotope):
        return K._hrep
    return None


def _polytope_sections(normals, offsets, xis):
    """Exact |P cap xi-perp| from the reduced halfspaces in a frame of xi-perp."""
    n = normals.shape[1]
    out = np.empty(len(xis))
    for k, xi in enumerate(xis):
        A = normals @ householder_frame(xi)
        norms = np.linalg.norm(A, axis=1)
        keep = norms > 1e-12
        A, b = A[keep], offsets[keep]
        if n == 2:
            out[k] = 2.0 * float(np.min(b / np.abs(A[:, 0])))
            continue
        hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), np.zeros(n - 1))
        out[k] = ConvexHull(hs.intersections).volume
    return out


def section_function(K, level=None):
    """Vectorized xi -> |K cap xi-perp| (directions assumed unit)."""
    n = K.n
    hrep = _hrep_or_none(K)
    if hrep is not None:
        return lambda xis: _polytope_sections(hrep[0], hrep[1], _as_points(xis, n))
    if n == 2:
        return lambda xis: _subsphere_map(K, xis, level, lambda p: _radial_batched(K, p))

    def f(xis):
        return _subsphere_map(K, xis, level, lambda p: _radial_batched(K, p) ** (n - 1)) / (n - 1)
    return f


def section_volume(K, xi, level=None):
    """|K cap xi-perp| = 1/(n-1) int over S^(n-1) cap xi-perp of rho_K^(n-1)."""
    xi = check_unit(np.asarray(xi, dtype=float), tol=1e-12)
    if K.n < 2:
        raise DomainError("sections need n >= 2")
    return float(section_function(K, level)(xi[None, :])[0])


def avg_section(K, rule=None, level=None):
    """Average central section volume, |S^(n-2)|/((n-1)|S^(n-1)|) int rho^(n-1)."""
    n = K.n
    if n < 2:
        raise DomainError("average sections need n >= 2")
    r = _rule(n, level, rule)
    integral = integrate(lambda t: K.radial(t) ** (n - 1), r, even=True)
    return _sphere_area_any(n - 1) / ((n - 1) * sphere_area(n)) * integral


def section_avg_of_section(K, xi, level=None):
    """as(K cap xi-perp) for the (n-1)-dimensional section body."""
    return float(section_avg_function(K, level)(np.atleast_2d(xi))[0])


def section_avg_function(K, level=None):
    """Vectorized xi -> as(K cap xi-perp); the section is (n-1)-dimensional."""
    n = K.n
    if n < 3:
        raise DomainError("sections of sections need n >= 3")
    m = n - 1
    const = _sphere_area_any(m - 1) / ((m - 1) * sphere_area(m))

    def f(xis):
        return const * _subsphere_map(K, xis, level, lambda p: _radial_batched(K, p) ** (m - 1))
    return f


# -- projections --------------------------------------------------------------------
def _discrete_or_none(K):
    try:
        return surface_measure(K)
    except CapabilityError:
        return None


def _facet_approximation(K, level="standard"):
    cached = getattr(K, "_volcomp_facets", None)
    if cached is not None:
        return cached
    u = build_sphere_rule(K.n, level).half
    poly = Polytope(u, K.support(u), symmetrize=True)
    normals, areas = poly.facets
    meas = (normals, areas)
    try:
        object.__setattr__(K, "_volcomp_facets", meas)
    except AttributeError:
        pass
    return meas


def projection_function(K, level=None):
    """Vectorized xi -> |K | xi-perp| by the Cauchy formula (1/2) int |<xi,u>| dS_K(u)."""
    n = K.n
    if isinstance(K, EuclideanBall):
        c = ball_volume(n - 1) * K.radius ** (n - 1)
        return lambda xis: np.full(_as_points(xis, n).shape[0], c)
    if isinstance(K, Ellipsoid):
        c = ball_volume(n - 1) * float(np.prod(K.axes))
        return lambda xis: c * np.sqrt(((_as_points(xis, n) / K.axes) ** 2).sum(axis=1))
    if isinstance(K, Dilate):
        inner = projection_function(K.body, level)
        s = K.beta ** (n - 1)
        return lambda xis: s * inner(xis)
    meas = _discrete_or_none(K)
    if meas is not None and meas.is_discrete:
        normals, weights = meas.normals, meas.weights
    elif K.is_convex:
        try:
            K.support(np.eye(n))
        except CapabilityError:
            raise CapabilityError(f"projections are not available for {type(K).__name__}") from None
        normals, weights = _facet_approximation(K)
    else:
        raise CapabilityError(f"projections need a convex body, got {type(K).__name__}")

    def f(xis):
        return 0.5 * np.abs(_as_points(xis, n) @ normals.T) @ weights
    return f


def projection_volume(K, xi, level=None):
    """|K | xi-perp|."""
    xi = check_unit(np.asarray(xi, dtype=float), tol=1e-12)
    return float(projection_function(K, level)(xi[None, :])[0])


def project_body(L, xi):
    """L | xi-perp as an (n-1)-dimensional body in frame coordinates."""
    xi = check_unit(np.asarray(xi, dtype=float))
    if isinstance(L, Zonotope):
        return L.project(xi)
    if isinstance(L, EuclideanBall):
        return EuclideanBall(L.n - 1, L.radius)
    if isinstance(L, Dilate):
        from .bodies import dilate
        return dilate(project_body(L.body, xi), L.beta)
    raise CapabilityError(f"projected bodies are not available for {type(L).__name__}")


def surface_area(L, level=None, method="auto"):
    """S(L): facet sum for polytopes/zonotopes, closed form for balls, Cauchy otherwise."""
    n = L.n
    if method not in ("auto", "cauchy"):
        raise DomainError(f"unknown surface area method {method!r}")
    if method == "auto":
        if isinstance(L, EuclideanBall):
            return _sphere_area_any(n) * L.radius ** (n - 1)
        meas = _discrete_or_none(L)
        if meas is not None and meas.is_discrete:
            return float(meas.weights.sum())
        if isinstance(L, Dilate):
            return L.beta ** (n - 1) * surface_area(L.body, level, method)
    P = projection_function(L, level)
    return integrate(P, build_sphere_rule(n, level), even=True) / ball_volume(n - 1)


def avg_projection(L, level=None, method="quadrature"):
    """ap(L) = (1/|S^(n-1)|) int P_L; ``method='cauchy'`` uses |B^(n-1)| S(L) / |S^(n-1)|."""
    n = L.n
    if method == "cauchy":
        return ball_volume(n - 1) * surface_area(L, level) / _sphere_area_any(n)
    if method != "quadrature":
        raise DomainError(f"unknown method {method!r}")
    P = projection_function(L, level)
    return integrate(P, build_sphere_rule(n, level), even=True) / sphere_area(n)


def mixed_volume_v1(K, L, level=None):
    """V_1(K, L) = (1/n) int h_L dS_K."""
    meas = surface_measure(K)
    n = K.n
    if meas.is_discrete:
        return float(meas.weights @ L.support(meas.normals)) / n
    rule = build_sphere_rule(n, level)
    return integrate(lambda u: L.support(u) * meas.density(u), rule, even=True) / n


# -- measures -------------------------------------------------------------------------
def _check_density(K, mu):
    if mu.n != K.n:
        raise InputError(f"density dimension {mu.n} does not match body dimension {K.n}")
    if not mu.even:
        raise DomainError("density must be even")


def measure_volume(K, mu, rule=None, level=None):
    """mu(K) = int_S int_0^rho f(r theta) r^(n-1) dr dtheta."""
    _check_density(K, mu)
    r = _rule(K.n, level, rule)
    x = r.half
    vals = mu.radial_integral(K.radial(x), K.n - 1)
    return 2.0 * integrate_values(vals, r.half_weights)


def measure_section_function(K, mu, level=None):
    """Vectorized xi -> mu(K cap xi-perp) with the (n-1)-dimensional density restriction."""
    _check_density(K, mu)
    n = K.n

    def fn(p):
        r = _radial_batched(K, p)
        return mu.radial_integral(r.ravel(), n - 2).reshape(r.shape)
    return lambda xis: _subsphere_map(K, xis, level, fn)


def measure_section(K, mu, xi, level=None):
    xi = check_unit(np.asarray(xi, dtype=float), tol=1e-12)
    return float(measure_section_function(K, mu, level)(xi[None, :])[0])
