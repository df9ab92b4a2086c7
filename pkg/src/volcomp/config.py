"""Suite configuration: YAML text -> validated RunConfig.

Schema (all keys optional except ``cases``)::

    seed: 42
    quad: low | standard | high
    cutoff: 40
    budget: 240
    tol: {abs: 1.0e-6, rel: 1.0e-5}
    require_hypothesis: false
    inconclusive_quota: 0.0   # fraction of reports allowed to be inconclusive
    out: results
    cases:
      - case: sec-stab
        count: 200
        n: [3, 4, 5]
        alpha: [lo, hi]               # fractional cases only
        density: gaussian | radial_power | mixed | constant | {type: ..., ...}
        bodyK: {type: cube, n: 3}     # optional fixed bodies
        bodyL: {...}
        tol: {abs: ..., rel: ...}
"""
from dataclasses import dataclass, field

import yaml

from . import bodies as B
from .exceptions import DomainError, InputError, SchemaError
from .functionals import density_from_spec
from .quadrature import LEVELS

__all__ = ["RunConfig", "parse_config", "load_config"]

_TOP = {"seed", "quad", "cutoff", "budget", "tol", "require_hypothesis", "inconclusive_quota",
        "out", "cases"}
_ENTRY = {"case", "count", "n", "alpha", "density", "bodyK", "bodyL", "tol"}
_DENSITY_NAMES = ("gaussian", "radial_power", "mixed", "constant")


@dataclass
class RunConfig:
    cases: list
    seed: int = 0
    quad: str = None
    cutoff: int = None
    budget: int = 240
    tol_abs: float = None
    tol_rel: float = None
    require_hypothesis: bool = False
    inconclusive_quota: float = 0.0
    out: str = None
    raw: dict = field(default_factory=dict, repr=False)


def _num(value, path, kind=float, lo=None, strict=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number, got {value!r}", path)
    if kind is int and int(value) != value:
        raise SchemaError(f"expected an integer, got {value!r}", path)
    value = kind(value)
    if lo is not None and (value <= lo if strict else value < lo):
        raise SchemaError(f"must be {'>' if strict else '>='} {lo}, got {value}", path)
    return value


def _tol(value, path):
    if not isinstance(value, dict) or set(value) - {"abs", "rel"}:
        raise SchemaError("expected a mapping with keys abs/rel", path)
    return (_num(value["abs"], f"{path}.abs", lo=0) if "abs" in value else None,
            _num(value["rel"], f"{path}.rel", lo=0) if "rel" in value else None)


def _entry(e, path):
    from .verify import REGISTRY
    if not isinstance(e, dict):
        raise SchemaError("expected a mapping", path)
    extra = set(e) - _ENTRY
    if extra:
        k = sorted(extra)[0]
        raise SchemaError("unknown key", f"{path}.{k}")
    if "case" not in e:
        raise SchemaError("missing", f"{path}.case")
    cid = e["case"]
    if cid not in REGISTRY:
        raise SchemaError(f"unknown case id {cid!r}", f"{path}.case")
    case = REGISTRY[cid]
    count = _num(e.get("count", 1), f"{path}.count", int, lo=1)
    ns = e.get("n", [3])
    ns = [ns] if not isinstance(ns, list) else ns
    if not ns:
        raise SchemaError("empty", f"{path}.n")
    dims = []
    for k, n in enumerate(ns):
        n = _num(n, f"{path}.n[{k}]", int, lo=2)
        if n < case.min_n:
            raise SchemaError(f"case {cid} needs n >= {case.min_n}", f"{path}.n[{k}]")
        dims.append(n)
    out = {"case": cid, "count": count, "n": dims}
    if "alpha" in e:
        if not case.fractional:
            raise SchemaError(f"case {cid} takes no alpha", f"{path}.alpha")
        a = e["alpha"]
        a = [a, a] if not isinstance(a, list) else a
        if len(a) != 2:
            raise SchemaError("expected a value or [lo, hi]", f"{path}.alpha")
        lo_a = _num(a[0], f"{path}.alpha[0]")
        hi_a = _num(a[1], f"{path}.alpha[1]")
        if lo_a > hi_a:
            raise SchemaError("lo > hi", f"{path}.alpha")
        for n in dims:
            lo, hi = ((n - 4, n - 1) if case.family == "fractional-section" else (n, n + 1))
            sym = "[n-4, n-1)" if case.family == "fractional-section" else "[n, n+1)"
            for v in (lo_a, hi_a):
                if not lo <= v < hi:
                    raise SchemaError(f"alpha={v:g} outside the validity window "
                                      f"{sym} = [{lo}, {hi}) for n={n}", f"{path}.alpha")
        out["alpha"] = [lo_a, hi_a]
    if "density" in e:
        d = e["density"]
        if case.family != "measure":
            raise SchemaError(f"case {cid} takes no density", f"{path}.density")
        if isinstance(d, str):
            if d not in _DENSITY_NAMES:
                raise SchemaError(f"unknown density {d!r}", f"{path}.density")
        else:
            try:
                for n in dims:
                    density_from_spec(d, n)
            except (InputError, DomainError, TypeError, KeyError) as exc:
                raise SchemaError(f"{exc}", f"{path}.density") from None
        out["density"] = d
    for key in ("bodyK", "bodyL"):
        if key in e:
            try:
                body = B.body_from_spec(e[key])
            except (InputError, DomainError, TypeError, KeyError, ValueError) as exc:
                raise SchemaError(f"malformed body spec: {exc}", f"{path}.{key}") from None
            if body.n not in dims or len(dims) != 1:
                raise SchemaError(f"body dimension {body.n} does not match n={dims}",
                                  f"{path}.{key}")
            out[key] = e[key]
    if "bodyL" in out and "bodyK" not in out:
        raise SchemaError("needs bodyK", f"{path}.bodyL")
    if case.bodies == 2 and "bodyK" in out and "bodyL" not in out:
        raise SchemaError(f"case {cid} needs two bodies", f"{path}.bodyL")
    if "tol" in e:
        out["tol_abs"], out["tol_rel"] = _tol(e["tol"], f"{path}.tol")
    return out


def parse_config(text):
    """Parse and validate YAML text (or an already-loaded mapping)."""
    if isinstance(text, dict):
        data = text
    else:
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise SchemaError(f"not valid YAML: {exc}", "<root>") from None
    if not isinstance(data, dict):
        raise SchemaError("expected a mapping", "<root>")
    extra = set(data) - _TOP
    if extra:
        k = sorted(extra)[0]
        raise SchemaError("unknown key", k)
    if "cases" not in data or not isinstance(data["cases"], list) or not data["cases"]:
        raise SchemaError("expected a non-empty list", "cases")
    cfg = RunConfig(cases=[_entry(e, f"cases[{i}]") for i, e in enumerate(data["cases"])], raw=data)
    if "seed" in data:
        cfg.seed = _num(data["seed"], "seed", int, lo=0)
    if data.get("quad") is not None:
        if data["quad"] not in LEVELS:
            raise SchemaError(f"unknown level {data['quad']!r}", "quad")
        cfg.quad = data["quad"]
    if data.get("cutoff") is not None:
        cfg.cutoff = _num(data["cutoff"], "cutoff", int, lo=2)
    if "budget" in data:
        cfg.budget = _num(data["budget"], "budget", int, lo=10)
    if "tol" in data:
        cfg.tol_abs, cfg.tol_rel = _tol(data["tol"], "tol")
    if "require_hypothesis" in data:
        if not isinstance(data["require_hypothesis"], bool):
            raise SchemaError("expected true/false", "require_hypothesis")
        cfg.require_hypothesis = data["require_hypothesis"]
    if "inconclusive_quota" in data:
        q = _num(data["inconclusive_quota"], "inconclusive_quota", lo=0)
        if q > 1:
            raise SchemaError("must lie in [0, 1]", "inconclusive_quota")
        cfg.inconclusive_quota = q
    if data.get("out") is not None:
        if not isinstance(data["out"], str):
            raise SchemaError("expected a path string", "out")
        cfg.out = data["out"]
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
