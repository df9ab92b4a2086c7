"""Inequality cases: hypothesis gaps, both sides, slack and randomized suites."""
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bodies as B
from . import functionals as F
from . import spectral as SP
from .constants import _sphere_area_any, ball_volume, cn_constant, named_constant, sphere_area
from .exceptions import CapabilityError, DomainError, InputError, ScopeError
from .quadrature import build_sphere_rule, default_level, extremize

__all__ = [
    "InequalityCase", "CheckReport", "REGISTRY", "SCHEMA_VERSION",
    "epsilon_stability", "epsilon_separation", "check_case", "run_suite",
    "sharpness_shell_probe", "equality_probe_ball", "summarize",
    "random_intersection_body", "random_star_body", "random_zonotope",
    "random_smooth_zonal", "case_rng",
]

SCHEMA_VERSION = 1
DEFAULT_TOL = (1e-6, 1e-5)
FRACTIONAL_TOL = (1e-6, 1e-4)


# -- registry -----------------------------------------------------------------
@dataclass(frozen=True)
class InequalityCase:
    id: str
    family: str  # section | projection | fractional-section | fractional-projection | measure
    kind: str  # stability | separation | difference | hyperplane | average | surface
    requires: tuple  # ((role, class), ...) with class in intersection|projection|convex|smooth
    statement: str
    constant: str
    bodies: int = 2
    min_n: int = 2
    fractional: bool = False


def _c(*a, **k):
    return InequalityCase(*a, **k)


_CASES = [
    _c("sec-stab", "section", "stability", (("K", "intersection"),),
       "S_K <= S_L + eps on the sphere  =>  |K|^((n-1)/n) <= |L|^((n-1)/n) + c_n eps", "cn"),
    _c("sec-diff", "section", "difference", (("K", "intersection"), ("L", "intersection")),
       "| |K|^((n-1)/n) - |L|^((n-1)/n) | <= c_n max |S_K - S_L|", "cn"),
    _c("sec-hyper", "section", "hyperplane", (("K", "intersection"),),
       "|K|^((n-1)/n) <= c_n max S_K", "cn", bodies=1),
    _c("sec-avg", "section", "average", (("K", "intersection"),),
       "as(K) <= |B^(n-1)| / (|B^(n-2)| |B^n|^(1/n)) max as(K cap xi-perp) |K|^(1/n)", "cor2",
       bodies=1, min_n=3),
    _c("sec-sep", "section", "separation", (("K", "intersection"),),
       "S_K <= S_L - eps  =>  |K|^((n-1)/n) <= |L|^((n-1)/n) - sqrt(2 pi/(n+1)) r(K) eps",
       "thm2-factor"),
    _c("sec-frac-stab", "fractional-section", "stability", (("K", "smooth"), ("L", "smooth")),
       "(-Delta)^(a/2) S_K <= (-Delta)^(a/2) S_L + eps  =>  "
       "|K|^((n-1)/n) <= |L|^((n-1)/n) + c(a, n) eps", "thm3", min_n=4, fractional=True),
    _c("sec-frac-sep", "fractional-section", "separation", (("K", "smooth"), ("L", "smooth")),
       "(-Delta)^(a/2) S_K <= (-Delta)^(a/2) S_L - eps  =>  "
       "|K|^((n-1)/n) <= |L|^((n-1)/n) - r(K) c'(a, n) eps", "thm4-factor", min_n=4,
       fractional=True),
    _c("proj-sep", "projection", "separation", (("K", "convex"), ("L", "projection")),
       "P_K <= P_L - eps  =>  |K|^((n-1)/n) <= |L|^((n-1)/n) - c_n eps", "cn"),
    _c("proj-diff", "projection", "difference", (("K", "convex"), ("L", "projection")),
       "c_n min (P_L - P_K) <= |L|^((n-1)/n) - |K|^((n-1)/n)", "cn"),
    _c("proj-hyper-min", "projection", "hyperplane", (("K", "projection"),),
       "c_n min P_L <= |L|^((n-1)/n)", "cn", bodies=1),
    _c("proj-hyper-max", "projection", "hyperplane", (("K", "convex"),),
       "|L|^((n-1)/n) <= c_n max P_L", "cn", bodies=1),
    _c("proj-surf", "projection", "surface", (("K", "projection"),),
       "n/(n-1) c_n min S(L | xi-perp) |L|^(1/n) <= S(L)", "cn", bodies=1, min_n=3),
    _c("proj-avg", "projection", "average", (("K", "projection"),),
       "|B^(n-1)| / (|B^(n-2)| |B^n|^(1/n)) min ap(L | xi-perp) |L|^(1/n) <= ap(L)", "cor2",
       bodies=1, min_n=3),
    _c("proj-stab", "projection", "stability", (("K", "convex"), ("L", "projection")),
       "P_K <= P_L + eps  =>  |K|^((n-1)/n) <= |L|^((n-1)/n) + sqrt(2 pi/n) R(L) eps",
       "thm6-factor"),
    _c("proj-frac-stab", "fractional-projection", "stability", (("K", "smooth"), ("L", "smooth")),
       "(-Delta)^(a/2) P_K <= (-Delta)^(a/2) P_L + eps  =>  "
       "|K|^((n-1)/n) <= |L|^((n-1)/n) + c(a, n) R(L) eps", "thm7-factor", min_n=3,
       fractional=True),
    _c("proj-frac-stab-rev", "fractional-projection", "stability",
       (("K", "smooth"), ("L", "smooth")),
       "(-Delta)^(a/2) P_L <= (-Delta)^(a/2) P_K + eps  =>  "
       "|K|^((n-1)/n) <= |L|^((n-1)/n) + c_rev(a, n) R(L) eps", "thm7-rev-factor", min_n=3,
       fractional=True),
    _c("meas-stab", "measure", "stability", (("K", "intersection"),),
       "mu(K cap xi-perp) <= mu(L cap xi-perp) + eps  =>  "
       "mu(K) <= mu(L) + n/(n-1) c_n |K|^(1/n) eps", "meas-factor"),
    _c("meas-diff", "measure", "difference", (("K", "intersection"), ("L", "intersection")),
       "|mu(K) - mu(L)| <= n c_n/(n-1) max |mu(K cap xi-perp) - mu(L cap xi-perp)| "
       "max(|K|^(1/n), |L|^(1/n))", "meas-factor"),
    _c("meas-hyper", "measure", "hyperplane", (("K", "intersection"),),
       "mu(K) <= n/(n-1) c_n max mu(K cap xi-perp) |K|^(1/n)", "meas-factor", bodies=1),
]
REGISTRY = {c.id: c for c in _CASES}


# -- reports ------------------------------------------------------------------------
@dataclass
class CheckReport:
    case: str
    n: int
    seed: int = None
    bodies: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    epsilon: float = None
    epsilon_margin: float = None
    lhs: float = None
    rhs: float = None
    slack: float = None
    tolerance: float = None
    margin: float = None
    witness: list = None
    hypothesis_mode: str = None
    hypothesis_detail: list = field(default_factory=list)
    level: str = None
    status: str = None
    raw_status: str = None
    statement: str = ""

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def _f(x):
    return None if x is None else float(x)


# -- evaluation context ----------------------------------------------------------------
class _Ctx:
    def __init__(self, case, K, L, params):
        self.case, self.K, self.L = case, K, L
        self.n = K.n
        self.params = dict(params or {})
        self.level = self.params.get("level") or default_level()
        self.budget = int(self.params.get("budget", 240))
        self.cutoff = self.params.get("cutoff")
        self.alpha = self.params.get("alpha")
        self.density = self.params.get("density")
        self._vol = {}

    def volume(self, X):
        """(|X|, error estimate)."""
        key = id(X)
        if key not in self._vol:
            v = X.exact_volume()
            if v is not None:
                self._vol[key] = (v, 0.0)
            else:
                a = F.volume(X, level=self.level)
                b = F.volume(X, level="high")
                self._vol[key] = (a, abs(a - b))
        return self._vol[key]

    def power(self, X):
        """(|X|^((n-1)/n), error)."""
        v, e = self.volume(X)
        k = (self.n - 1) / self.n
        return v ** k, k * v ** (k - 1) * e

    def root(self, X):
        v, e = self.volume(X)
        return v ** (1.0 / self.n), v ** (1.0 / self.n - 1) * e / self.n

    def measure(self, X):
        a = F.measure_volume(X, self.density, level=self.level)
        b = F.measure_volume(X, self.density, level="high")
        return a, abs(a - b)


_EXACT_FAMILIES = ("projection", "projection-surface", "projection-avg")


def _surface_of_shadows(L):
    n = L.n
    if isinstance(L, B.Zonotope) and n == 3:
        g = L.generators

        def f(xis):
            xis = B._as_points(xis, n)
            d = xis @ g.T  # (k, j)
            perp = np.sqrt(np.clip((g * g).sum(axis=1)[None, :] - d * d, 0.0, None))
            return 4.0 * perp.sum(axis=1)
        return f
    if isinstance(L, B.EuclideanBall):
        c = _sphere_area_any(n - 1) * L.radius ** (n - 2)
        return lambda xis: np.full(B._as_points(xis, n).shape[0], c)

    def f(xis):
        return np.array([F.surface_area(F.project_body(L, x)) for x in B._as_points(xis, n)])
    return f


def _functional(family, X, level, ctx):
    if family == "section":
        return F.section_function(X, level)
    if family == "projection":
        return F.projection_function(X, level)
    if family == "measure":
        return F.measure_section_function(X, ctx.density, level)
    if family == "section-avg":
        return F.section_avg_function(X, level)
    if family == "projection-surface":
        return _surface_of_shadows(X)
    if family == "projection-avg":
        S = _surface_of_shadows(X)
        c = ball_volume(X.n - 2) / _sphere_area_any(X.n - 1)
        return lambda xis: c * S(xis)
    raise DomainError(f"unknown functional family {family!r}")


@dataclass
class Extremum:
    value: float
    margin: float
    witness: np.ndarray


def _diff_extremum(ctx, family, A, Bd, mode):
    """Extremum over the sphere of F_A - F_B (F_B omitted when Bd is None)."""
    n = ctx.n

    def combo(level):
        fa = _functional(family, A, level, ctx)
        fb = _functional(family, Bd, level, ctx) if Bd is not None else None
        return (lambda x: fa(x) - fb(x)) if fb is not None else fa

    if family in _EXACT_FAMILIES:
        f = combo(ctx.level)
        res = extremize(f, n, mode, ctx.budget, level="low")
        return Extremum(res.value, res.uncertainty, res.direction)
    f_low = combo("low")
    res = extremize(f_low, n, mode, ctx.budget, level="low")
    w = res.direction[None, :]
    v = float(combo(ctx.level)(w)[0])
    v_hi = float(combo("high")(w)[0]) if ctx.level != "high" else v
    margin = abs(v_hi - v) + abs(v - res.value) + res.uncertainty
    return Extremum(v, margin, res.direction)


def _frac_expansion(ctx, X, level, scope):
    if ctx.alpha is None:
        raise DomainError("fractional cases need alpha")
    if ctx.case.family == "fractional-section":
        e = SP.section_function_spectral(X, ctx.cutoff, level)
    else:
        e = SP.expand_body(X, "projection", ctx.cutoff, level, scope)
    return SP.fractional_laplacian(e, ctx.alpha)


def _frac_extremum(ctx, A, Bd, mode):
    scope = SP.spectral_scope(A, Bd)
    if scope[0] != "zonal":
        raise ScopeError("fractional cases run on zonal bodies with a common axis")

    def diff(level):
        ea, eb = _frac_expansion(ctx, A, level, scope), _frac_expansion(ctx, Bd, level, scope)
        noise = ea.noise_floor() + eb.noise_floor()
        return SP.HarmonicExpansion(ea.n, ea.basis, ea.coeffs - eb.coeffs, ea.cutoff, ea.q,
                                    ea.pole, 0.0, level, {"noise": noise})

    d = diff(ctx.level)
    value, w = SP._extreme(d, mode)
    d_hi = diff("high") if ctx.level != "high" else d
    margin = abs(float(d_hi(w[None, :])[0]) - value) + SP._tail_estimate(d.degree_bounds(), d.noise_floor())
    return Extremum(value, margin, w)


def _extremum(ctx, family, A, Bd, mode):
    if family.startswith("fractional"):
        return _frac_extremum(ctx, A, Bd, mode)
    return _diff_extremum(ctx, family, A, Bd, mode)


def epsilon_stability(K, L, functional="section", params=None):
    """max(0, max_xi (F_K - F_L)) with its error margin (margin not yet added)."""
    case = REGISTRY["sec-frac-stab" if functional == "fractional-section" else
                    "proj-frac-stab" if functional == "fractional-projection" else "sec-stab"]
    ctx = _Ctx(case, K, L, params)
    ex = _extremum(ctx, functional, K, L, "max")
    return max(0.0, ex.value), ex.margin, ex.witness


def epsilon_separation(K, L, functional="section", params=None):
    """min_xi (F_L - F_K) with its error margin; hypothesis unmet when <= margin."""
    case = REGISTRY["sec-frac-sep" if functional == "fractional-section" else "sec-sep"]
    ctx = _Ctx(case, K, L, params)
    ex = _extremum(ctx, functional, L, K, "min")
    return ex.value, ex.margin, ex.witness


# -- hypothesis resolution ------------------------------------------------------------
_MODE_RANK = {"none": 0, "by-construction": 1, "certified": 2, "assumed": 3}
_SMOOTH_KINDS = (B.EuclideanBall, B.Ellipsoid, B.ZonalPerturbedBall)


def _is_smooth(X):
    while isinstance(X, B.Dilate):
        X = X.body
    if isinstance(X, B.LpBall):
        return X.p == 2
    return isinstance(X, _SMOOTH_KINDS)


def _resolve(X, cls, cutoff=None):
    """-> (mode, detail) or raise _Unmet."""
    if cls == "convex":
        if X.is_convex:
            return "none", "convex"
        raise _Unmet("body is not convex")
    if cls == "smooth":
        if X.is_convex and _is_smooth(X):
            return "none", "smooth convex"
        raise _Unmet("body is not a smooth convex body")
    if cls == "intersection":
        reason = X.intersection_reason
        if reason:
            return "by-construction", reason
        test = SP.is_intersection_body
    else:
        if not X.is_convex:
            raise _Unmet("projection bodies are convex")
        reason = X.projection_reason
        if reason:
            return "by-construction", reason
        test = SP.is_projection_body
    try:
        cert = test(X, cutoff)
    except (ScopeError, CapabilityError):
        return "assumed", f"{cls} body: outside certificate scope"
    if cert.verdict == "certified-positive":
        return "certified", f"{cls} certificate (cutoff {cert.cutoff}, value {cert.value:.6g})"
    if cert.verdict == "certified-negative":
        raise _Unmet(f"certified not an {cls} body (value {cert.value:.6g})")
    return "assumed", f"{cls} certificate inconclusive"


class _Unmet(Exception):
    pass


# -- case evaluation -------------------------------------------------------------------
def _sides(case, ctx):
    """-> dict(epsilon, epsilon_margin, lhs, rhs, margin, witness); raise _Unmet."""
    K, L, n = ctx.K, ctx.L, ctx.n
    cid, fam = case.id, case.family
    c_n = cn_constant(n)
    out = {"epsilon": None, "epsilon_margin": None, "witness": None}

    if cid in ("sec-stab", "meas-stab", "proj-stab", "sec-frac-stab", "proj-frac-stab"):
        ex = _extremum(ctx, fam, K, L, "max")
        eps = max(0.0, ex.value) + ex.margin
        out.update(epsilon=eps, epsilon_margin=ex.margin, witness=ex.witness)
        if cid == "meas-stab":
            mK, eK = ctx.measure(K)
            mL, eL = ctx.measure(L)
            rK, erK = ctx.root(K)
            c = named_constant("meas-factor", n)
            out.update(lhs=mK, rhs=mL + c * rK * eps, margin=eK + eL + c * erK * eps)
            return out
        pK, eK = ctx.power(K)
        pL, eL = ctx.power(L)
        if cid == "sec-stab":
            c = c_n
        elif cid == "proj-stab":
            c = named_constant("thm6-factor", n) * B.normalized_circumradius(L, ctx.level)
        elif cid == "sec-frac-stab":
            c = named_constant("thm3", n, ctx.alpha)
        else:
            c = named_constant("thm7-factor", n, ctx.alpha) * B.normalized_circumradius(L, ctx.level)
        out.update(lhs=pK, rhs=pL + c * eps, margin=eK + eL)
        return out

    if cid == "proj-frac-stab-rev":
        ex = _extremum(ctx, fam, L, K, "max")
        eps = max(0.0, ex.value) + ex.margin
        pK, eK = ctx.power(K)
        pL, eL = ctx.power(L)
        c = named_constant("thm7-rev-factor", n, ctx.alpha) * B.normalized_circumradius(L, ctx.level)
        out.update(epsilon=eps, epsilon_margin=ex.margin, witness=ex.witness,
                   lhs=pK, rhs=pL + c * eps, margin=eK + eL)
        return out

    if cid in ("sec-sep", "sec-frac-sep", "proj-sep", "proj-diff"):
        ex = _extremum(ctx, fam, L, K, "min")
        eps = ex.value - ex.margin
        out.update(epsilon=eps, epsilon_margin=ex.margin, witness=ex.witness)
        if eps <= 0:
            raise _Unmet(f"separation gap {ex.value:.6g} does not exceed its margin {ex.margin:.3g}")
        pK, eK = ctx.power(K)
        pL, eL = ctx.power(L)
        if cid == "proj-diff":
            out.update(lhs=c_n * eps, rhs=pL - pK, margin=eK + eL)
            return out
        if cid == "sec-sep":
            c = named_constant("thm2-factor", n) * B.normalized_inradius(K, ctx.level)
        elif cid == "sec-frac-sep":
            c = named_constant("thm4-factor", n, ctx.alpha) * B.normalized_inradius(K, ctx.level)
        else:
            c = c_n
        out.update(lhs=pK, rhs=pL - c * eps, margin=eK + eL)
        return out

    if cid in ("sec-diff", "meas-diff"):
        a = _extremum(ctx, fam, K, L, "max")
        b = _extremum(ctx, fam, L, K, "max")
        top = a if a.value >= b.value else b
        d = max(a.value, b.value, 0.0) + top.margin
        out.update(epsilon=d, epsilon_margin=top.margin, witness=top.witness)
        if cid == "sec-diff":
            pK, eK = ctx.power(K)
            pL, eL = ctx.power(L)
            out.update(lhs=abs(pK - pL), rhs=c_n * d, margin=eK + eL)
        else:
            mK, eK = ctx.measure(K)
            mL, eL = ctx.measure(L)
            rK, erK = ctx.root(K)
            rL, erL = ctx.root(L)
            c = named_constant("meas-factor", n)
            out.update(lhs=abs(mK - mL), rhs=c * d * max(rK, rL), margin=eK + eL + c * d * max(erK, erL))
        return out

    # single body cases
    if cid == "sec-hyper":
        ex = _extremum(ctx, "section", K, None, "max")
        pK, eK = ctx.power(K)
        out.update(lhs=pK, rhs=c_n * ex.value, margin=eK + c_n * ex.margin, witness=ex.witness)
        return out
    if cid == "meas-hyper":
        ex = _extremum(ctx, "measure", K, None, "max")
        mK, eK = ctx.measure(K)
        rK, erK = ctx.root(K)
        c = named_constant("meas-factor", n)
        out.update(lhs=mK, rhs=c * ex.value * rK,
                   margin=eK + c * (ex.margin * rK + ex.value * erK), witness=ex.witness)
        return out
    if cid == "sec-avg":
        ex = _extremum(ctx, "section-avg", K, None, "max")
        a = F.avg_section(K, level=ctx.level)
        ea = abs(a - F.avg_section(K, level="high"))
        rK, erK = ctx.root(K)
        c = named_constant("cor2", n)
        out.update(lhs=a, rhs=c * ex.value * rK,
                   margin=ea + c * (ex.margin * rK + ex.value * erK), witness=ex.witness)
        return out
    if cid == "proj-hyper-min":
        ex = _extremum(ctx, "projection", K, None, "min")
        pK, eK = ctx.power(K)
        out.update(lhs=c_n * ex.value, rhs=pK, margin=eK + c_n * ex.margin, witness=ex.witness)
        return out
    if cid == "proj-hyper-max":
        ex = _extremum(ctx, "projection", K, None, "max")
        pK, eK = ctx.power(K)
        out.update(lhs=pK, rhs=c_n * ex.value, margin=eK + c_n * ex.margin, witness=ex.witness)
        return out
    if cid in ("proj-surf", "proj-avg"):
        fam2 = "projection-surface" if cid == "proj-surf" else "projection-avg"
        ex = _extremum(ctx, fam2, K, None, "min")
        rK, erK = ctx.root(K)
        if cid == "proj-surf":
            c = n / (n - 1) * c_n
            top = F.surface_area(K, level=ctx.level)
        else:
            c = named_constant("cor2", n)
            top = F.avg_projection(K, level=ctx.level, method="cauchy")
        out.update(lhs=c * ex.value * rK, rhs=top,
                   margin=c * (ex.margin * rK + ex.value * erK), witness=ex.witness)
        return out
    raise InputError(f"unknown case {cid!r}")


def _tolerance(case, params):
    d_abs, d_rel = FRACTIONAL_TOL if case.fractional else DEFAULT_TOL
    return float(params.get("tol_abs", d_abs)), float(params.get("tol_rel", d_rel))


def check_case(case_id, K, L=None, params=None, seed=None):
    """Evaluate one inequality case and return a CheckReport."""
    if case_id not in REGISTRY:
        raise InputError(f"unknown case {case_id!r}; known: {sorted(REGISTRY)}")
    case = REGISTRY[case_id]
    params = dict(params or {})
    if case.bodies == 2 and L is None:
        raise InputError(f"case {case_id!r} needs two bodies")
    if case.bodies == 1:
        L = None
    if L is not None and L.n != K.n:
        raise InputError(f"dimension mismatch: {K.n} vs {L.n}")
    n = K.n
    if n < case.min_n:
        raise DomainError(f"case {case_id!r} needs n >= {case.min_n}")
    if case.fractional:
        lo, hi = {"fractional-section": (n - 4.0, n - 1.0),
                  "fractional-projection": (float(n), n + 1.0)}[case.family]
        a = params.get("alpha")
        if a is None or not lo <= float(a) < hi:
            raise DomainError(f"alpha={a} outside the validity window [{lo:g}, {hi:g}) for n={n}")
    if "density" in params and isinstance(params["density"], (dict, str)):
        params["density"] = F.density_from_spec(params["density"], n)
    if case.family == "measure" and params.get("density") is None:
        raise InputError(f"case {case_id!r} needs a density")

    ctx = _Ctx(case, K, L, params)
    shown = {k: v for k, v in params.items() if k not in ("density",)}
    if params.get("density") is not None:
        shown["density"] = params["density"].to_spec()
    report = CheckReport(case=case_id, n=n, seed=seed,
                         bodies=[X.to_spec() for X in (K, L) if X is not None],
                         params=shown, level=ctx.level, statement=case.statement)
    tol_abs, tol_rel = _tolerance(case, params)
    roles = {"K": K, "L": L}
    mode = "none"
    try:
        for role, cls in case.requires:
            X = roles[role]
            m, detail = _resolve(X, cls, ctx.cutoff)
            report.hypothesis_detail.append(f"{role}: {detail}")
            if _MODE_RANK[m] > _MODE_RANK[mode]:
                mode = m
        report.hypothesis_mode = mode
        sides = _sides(case, ctx)
    except _Unmet as exc:
        report.hypothesis_mode = report.hypothesis_mode or mode
        report.hypothesis_detail.append(f"unmet: {exc}")
        report.status = report.raw_status = "hypothesis-unmet"
        return report
    lhs, rhs = float(sides["lhs"]), float(sides["rhs"])
    slack = rhs - lhs
    tau = max(tol_abs, tol_rel * abs(rhs))
    margin = float(sides["margin"])
    if not (math.isfinite(slack) and math.isfinite(margin)):
        raw = "inconclusive"
    elif slack >= -tau:
        raw = "pass"
    elif slack < -(tau + margin):
        raw = "fail"
    else:
        raw = "inconclusive"
    report.epsilon, report.epsilon_margin = _f(sides["epsilon"]), _f(sides["epsilon_margin"])
    report.lhs, report.rhs, report.slack = lhs, rhs, slack
    report.tolerance, report.margin = tau, margin
    w = sides["witness"]
    report.witness = None if w is None else [float(x) for x in np.asarray(w).ravel()]
    report.raw_status = raw
    report.status = "quarantined" if mode == "assumed" else raw
    return report


# -- probes -------------------------------------------------------------------------------
def sharpness_shell_probe(widths, n=3, level="standard"):
    """Rows (width, ratio) of mu(B)/[n/(n-1) c_n max mu(B cap xi-perp) |B|^(1/n)] for shells.

    The shell of width w sits just inside the boundary: r0 = 1 - w.
    """
    widths = [float(w) for w in widths]
    if any(w <= 0 for w in widths):
        raise DomainError("widths must be positive")
    if any(b >= a for a, b in zip(widths, widths[1:])):
        raise DomainError("widths must be strictly decreasing")
    K = B.EuclideanBall(n)
    c = named_constant("meas-factor", n) * ball_volume(n) ** (1.0 / n)
    rows = []
    for w in widths:
        mu = F.Shell(n, 1.0 - w, w)
        total = F.measure_volume(K, mu, level=level)
        sec = F.measure_section_function(K, mu, level)
        ex = extremize(sec, n, "max", 60, "low")
        rows.append((w, float(total / (c * ex.value))))
    return rows


_EQUALITY_CASES = ("sec-avg", "sec-hyper", "proj-hyper-min", "proj-hyper-max")


def equality_probe_ball(case_id, n, level=None):
    if case_id not in _EQUALITY_CASES:
        raise DomainError(f"equality probe supports {_EQUALITY_CASES}")
    return check_case(case_id, B.EuclideanBall(n), params={"level": level} if level else None)


# -- random bodies -------------------------------------------------------------------------
def case_rng(seed, i, j):
    """Counter-based generator for draw j of suite entry i."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(i), int(j)])))


def _loguniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def random_ellipsoid(rng, n):
    return B.Ellipsoid(_loguniform(rng, 0.5, 2.0, n))


def random_zonal_ball(rng, n, convex=True, scale=0.12):
    for _ in range(50):
        coeffs = {2: float(rng.uniform(-scale, scale)), 4: float(rng.uniform(-scale / 3, scale / 3))}
        try:
            Z = B.ZonalPerturbedBall(n, float(_loguniform(rng, 0.7, 1.4)), coeffs)
        except DomainError:
            continue
        if Z.is_convex or not convex:
            return Z
    return B.EuclideanBall(n)


def random_intersection_body(rng, n):
    """Draw from l_p balls (p <= 2), ellipsoids, their radial sums and certified zonal balls."""
    kind = int(rng.integers(4))
    beta = float(_loguniform(rng, 0.7, 1.4))
    if kind == 0:
        return B.dilate(B.LpBall(n, float(rng.uniform(0.5, 2.0))), beta)
    if kind == 1:
        return random_ellipsoid(rng, n)
    if kind == 2:
        return B.radial_sum(B.dilate(B.LpBall(n, float(rng.uniform(0.5, 2.0))), 0.5 * beta),
                            B.dilate(random_ellipsoid(rng, n), 0.5))
    Z = random_zonal_ball(rng, n)
    if Z.intersection_reason:
        return Z
    if SP.is_intersection_body(Z).verdict == "certified-positive":
        return Z
    return random_ellipsoid(rng, n)


def random_star_body(rng, n):
    kind = int(rng.integers(5))
    beta = float(_loguniform(rng, 0.7, 1.4))
    if kind == 0:
        return B.dilate(B.LpBall(n, float(rng.uniform(0.5, 4.0))), beta)
    if kind == 1:
        return random_ellipsoid(rng, n)
    if kind == 2:
        return B.cube(n, 0.8 * beta)
    if kind == 3:
        return random_zonal_ball(rng, n, convex=False, scale=0.25)
    return B.radial_sum(B.dilate(random_ellipsoid(rng, n), 0.5),
                        B.dilate(B.LpBall(n, float(rng.uniform(0.5, 4.0))), 0.5 * beta))


def random_zonotope(rng, n, count=None):
    k = int(rng.integers(n + 2, 3 * n + 1)) if count is None else count
    g = rng.standard_normal((k, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    g *= rng.uniform(0.5, 1.5, (k, 1))
    return B.Zonotope(g)


def random_smooth_zonal(rng, n):
    kind = int(rng.integers(3))
    if kind == 0:
        a = float(_loguniform(rng, 0.5, 2.0))
        b = float(_loguniform(rng, 0.5, 2.0))
        return B.Ellipsoid([a] * (n - 1) + [b])
    if kind == 1:
        return B.EuclideanBall(n, float(_loguniform(rng, 0.7, 1.4)))
    return random_zonal_ball(rng, n, convex=True)


def random_smooth_zonal_projection(rng, n):
    """Zonal ellipsoids and balls (closed-form projection functions)."""
    if rng.integers(4) == 0:
        return B.EuclideanBall(n, float(_loguniform(rng, 0.7, 1.4)))
    a = float(_loguniform(rng, 0.5, 2.0))
    b = float(_loguniform(rng, 0.5, 2.0))
    return B.Ellipsoid([a] * (n - 1) + [b])


def _random_density(rng, n, how):
    if isinstance(how, dict):
        return F.density_from_spec(how, n)
    if how == "mixed":
        how = "gaussian" if rng.integers(2) == 0 else "radial_power"
    if how == "gaussian":
        return F.Gaussian(n, float(_loguniform(rng, 0.5, 2.0)))
    if how == "radial_power":
        return F.RadialPower(n, float(rng.uniform(-1.0, 2.0)))
    if how == "constant":
        return F.Constant(n, 1.0)
    raise InputError(f"unknown density choice {how!r}")


def draw_case(case_id, rng, n, entry):
    """Random bodies and parameters for one suite draw -> (K, L, params)."""
    params = {}
    case = REGISTRY[case_id]
    if case.fractional:
        lo, hi = ((n - 4.0, n - 1.0) if case.family == "fractional-section" else (float(n), n + 1.0))
        a_lo, a_hi = entry.get("alpha") or (lo + 0.2, hi - 0.2)
        params["alpha"] = float(rng.uniform(a_lo, a_hi))
    if case.family == "measure":
        params["density"] = _random_density(rng, n, entry.get("density", "mixed"))
    fixedK, fixedL = entry.get("bodyK"), entry.get("bodyL")
    if fixedK is not None:
        K = B.body_from_spec(fixedK)
        L = B.body_from_spec(fixedL) if fixedL is not None else None
        return K, L, params
    if case_id in ("sec-stab", "meas-stab"):
        return random_intersection_body(rng, n), random_star_body(rng, n), params
    if case_id in ("sec-diff", "meas-diff"):
        return random_intersection_body(rng, n), random_intersection_body(rng, n), params
    if case_id in ("sec-hyper", "sec-avg", "meas-hyper"):
        return random_intersection_body(rng, n), None, params
    if case_id == "sec-sep":
        K = random_intersection_body(rng, n)
        extra = B.dilate(random_star_body(rng, n), float(rng.uniform(0.05, 0.3)))
        return K, B.radial_sum(K, extra), params
    if case_id == "sec-frac-stab":
        return random_smooth_zonal(rng, n), random_smooth_zonal(rng, n), params
    if case_id == "sec-frac-sep":
        K = random_smooth_zonal(rng, n)
        return K, B.dilate(K, float(rng.uniform(1.05, 1.4))), params
    if case_id in ("proj-frac-stab", "proj-frac-stab-rev"):
        return random_smooth_zonal_projection(rng, n), random_smooth_zonal_projection(rng, n), params
    if case_id in ("proj-sep", "proj-diff"):
        K = random_zonotope(rng, n)
        if rng.integers(2) == 0:
            # one extra segment leaves the shadow along itself unchanged; two avoid that
            extra = rng.standard_normal((int(rng.integers(2, n + 2)), n))
            g = np.vstack([K.generators, 0.5 * extra])
            return K, B.Zonotope(g), params
        L = random_zonotope(rng, n)
        # shrink K until its shadows sit strictly inside those of L
        ratio = float(np.min(F.projection_function(L)(build_sphere_rule(n, "low").half)) /
                      np.max(F.projection_function(K)(build_sphere_rule(n, "low").half)))
        return B.dilate(K, (0.9 * ratio) ** (1.0 / (n - 1))), L, params
    if case_id == "proj-stab":
        return random_zonotope(rng, n), random_zonotope(rng, n), params
    if case_id in ("proj-hyper-min", "proj-hyper-max", "proj-surf", "proj-avg"):
        return random_zonotope(rng, n), None, params
    raise InputError(f"no random generator for case {case_id!r}")


# -- suites ------------------------------------------------------------------------------------
def _run_task(task):
    entry, i, j, seed, base = task
    case_id = entry["case"]
    ns = entry["n"]
    n = int(ns[j % len(ns)])
    rng = case_rng(seed, i, j)
    K, L, params = draw_case(case_id, rng, n, entry)
    params.update({k: v for k, v in base.items() if v is not None})
    for key in ("tol_abs", "tol_rel"):
        if entry.get(key) is not None:
            params[key] = entry[key]
    return check_case(case_id, K, L, params, seed=int(seed))


def run_suite(config, seed=None, workers=1):
    """Run every configured case; deterministic for a given (config, seed).

    ``config`` is a RunConfig or its mapping form.  Returns (reports, summary).
    """
    from .config import RunConfig, parse_config
    if not isinstance(config, RunConfig):
        config = parse_config(config)
    seed = config.seed if seed is None else int(seed)
    base = {"level": config.quad, "cutoff": config.cutoff, "budget": config.budget,
            "tol_abs": config.tol_abs, "tol_rel": config.tol_rel}
    tasks = [(entry, i, j, seed, base) for i, entry in enumerate(config.cases)
             for j in range(entry["count"])]
    t0 = time.perf_counter()
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        reports = [_run_task(t) for t in tasks]
    summary = summarize(reports)
    summary["seconds"] = time.perf_counter() - t0
    return reports, summary


def summarize(reports):
    """Order-independent counts per status and per case."""
    counts = {}
    per_case = {}
    worst = None
    for r in reports:
        counts[r.status] = counts.get(r.status, 0) + 1
        pc = per_case.setdefault(r.case, {})
        pc[r.status] = pc.get(r.status, 0) + 1
        if r.slack is not None and r.status != "quarantined":
            rel = r.slack / max(abs(r.rhs), 1e-300)
            worst = rel if worst is None else min(worst, rel)
    return {"total": len(reports), "counts": dict(sorted(counts.items())),
            "per_case": {k: dict(sorted(v.items())) for k, v in sorted(per_case.items())},
            "quarantined": counts.get("quarantined", 0),
            "worst_relative_slack": worst}
