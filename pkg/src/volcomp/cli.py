"""Command-line interface: constants, bodies, eval, certify, check, suite."""
import argparse
import csv
import io
import json
import os
import sys

import numpy as np
import yaml

from . import bodies as B
from . import functionals as F
from . import spectral as SP
from . import verify as V
from .config import load_config
from .constants import NAMED_CONSTANTS, constant_window, named_constant
from .exceptions import HypothesisUnmet, SchemaError, VolcompError
from .quadrature import LEVELS

__all__ = ["main", "dispatch", "build_parser", "write_reports", "read_reports",
           "reports_csv", "slack_histogram"]

EXIT_OK, EXIT_FAIL, EXIT_UNMET, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4
CSV_COLUMNS = ("case", "seed", "n", "epsilon", "lhs", "rhs", "slack", "mode", "status")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _dims(text):
    try:
        if ".." in text:
            a, b = text.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}") from None


def _vector(text):
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad direction {text!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quad", choices=LEVELS, help="quadrature quality tier")
    common.add_argument("--cutoff", type=int, help="spectral cutoff degree")
    common.add_argument("--tol", type=float, help="relative pass tolerance")
    common.add_argument("--seed", type=int, help="suite seed")
    common.add_argument("--out", help="output directory or file")

    p = _Parser(prog="volcomp", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constants", parents=[common], help="table of named constants (CSV)")
    c.add_argument("--n", type=_dims, default=[2, 3, 4, 5])
    c.add_argument("--alpha", type=float)
    c.add_argument("--name", choices=sorted(NAMED_CONSTANTS))

    b = sub.add_parser("bodies", parents=[common], help="supported body variants")
    b.add_argument("action", choices=["list"], nargs="?", default="list")

    e = sub.add_parser("eval", parents=[common], help="evaluate a functional")
    e.add_argument("--body", required=True)
    e.add_argument("--bodyL", help="second body (v1)")
    e.add_argument("--functional", required=True,
                   choices=["volume", "section", "projection", "as", "ap", "surface", "v1", "mu"])
    e.add_argument("--direction", type=_vector)
    e.add_argument("--density")

    ce = sub.add_parser("certify", parents=[common], help="membership certificate (JSON)")
    ce.add_argument("--body", required=True)
    ce.add_argument("--test", required=True, choices=["intersection", "projection"])

    ch = sub.add_parser("check", parents=[common], help="check one inequality case")
    ch.add_argument("--case", required=True)
    ch.add_argument("--bodyK", required=True)
    ch.add_argument("--bodyL")
    ch.add_argument("--alpha", type=float)
    ch.add_argument("--density")

    s = sub.add_parser("suite", parents=[common], help="run a randomized suite")
    s.add_argument("--config", required=True)
    s.add_argument("--workers", type=int, default=1)
    return p


# -- serialization -------------------------------------------------------------
def _fmt(x):
    return "" if x is None else repr(float(x)) if isinstance(x, float) else str(x)


def reports_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow([r.case, _fmt(r.seed), r.n, _fmt(r.epsilon), _fmt(r.lhs), _fmt(r.rhs),
                    _fmt(r.slack), r.hypothesis_mode, r.status])
    return buf.getvalue()


def slack_histogram(reports, bins=40):
    """Two-column text: bin centre of slack/|rhs|, count."""
    rel = np.array([r.slack / max(abs(r.rhs), 1e-300) for r in reports if r.slack is not None])
    lines = ["# relative slack (slack/|rhs|)  count"]
    if rel.size:
        lo, hi = float(rel.min()), float(rel.max())
        if hi <= lo:
            hi = lo + 1e-12
        counts, edges = np.histogram(rel, bins=bins, range=(lo, hi))
        for k, cnt in enumerate(counts):
            lines.append(f"{0.5 * (edges[k] + edges[k + 1]):.12e} {int(cnt)}")
    return "\n".join(lines) + "\n"


def write_reports(reports, summary, out):
    os.makedirs(out, exist_ok=True)
    doc = {"schema_version": V.SCHEMA_VERSION, "summary": summary,
           "reports": [r.to_dict() for r in reports]}
    with open(os.path.join(out, "reports.json"), "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
    with open(os.path.join(out, "reports.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(reports_csv(reports))
    with open(os.path.join(out, "slack_histogram.dat"), "w", encoding="utf-8") as fh:
        fh.write(slack_histogram(reports))


def read_reports(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema_version") != V.SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {doc.get('schema_version')!r}",
                          "schema_version")
    return [V.CheckReport.from_dict(d) for d in doc["reports"]], doc["summary"]


def _exit_code(reports, require_hypothesis=False, quota=0.0):
    statuses = [r.status for r in reports]
    if "fail" in statuses:
        return EXIT_FAIL
    if require_hypothesis and "hypothesis-unmet" in statuses:
        return EXIT_UNMET
    inconclusive = statuses.count("inconclusive")
    if reports and inconclusive > quota * len(reports):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# -- commands -------------------------------------------------------------------------
def _cmd_constants(args, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["name", "n", "alpha", "value"])
    names = [args.name] if args.name else sorted(NAMED_CONSTANTS)
    for name in names:
        needs_alpha, min_n, _ = NAMED_CONSTANTS[name]
        for n in args.n:
            if n < min_n:
                continue
            if needs_alpha:
                lo, hi = constant_window(name, n)
                alpha = args.alpha
                if alpha is None:
                    alpha = 0.5 * (lo + hi)
                elif not lo <= alpha < hi:
                    if args.name:
                        named_constant(name, n, alpha)  # raises the window error
                    continue
                w.writerow([name, n, repr(float(alpha)), repr(named_constant(name, n, alpha))])
            else:
                w.writerow([name, n, "", repr(named_constant(name, n))])
    return EXIT_OK


def _cmd_bodies(args, out):
    out.write("variants:\n")
    for k, v in B.VARIANTS.items():
        out.write(f"  {k:18s} {v}\n")
    out.write("\ncapabilities (variant, radial, support, surface measure, exact volume):\n")
    for row in B.capability_matrix():
        out.write("  " + "  ".join(f"{c:16s}" for c in row).rstrip() + "\n")
    return EXIT_OK


def _direction(args, n):
    if args.direction is None:
        return np.eye(n)[-1]
    d = args.direction
    if d.size != n:
        raise VolcompError(f"direction has {d.size} entries, body has n={n}")
    return d / np.linalg.norm(d)


def _cmd_eval(args, out):
    K = B.body_from_spec(args.body)
    n, lv, f = K.n, args.quad, args.functional
    res = {"functional": f, "body": K.to_spec()}
    if f == "volume":
        res["value"] = F.volume(K, level=lv)
    elif f == "section":
        xi = _direction(args, n)
        res.update(direction=xi.tolist(), value=F.section_volume(K, xi, lv))
    elif f == "projection":
        xi = _direction(args, n)
        res.update(direction=xi.tolist(), value=F.projection_volume(K, xi, lv))
    elif f == "as":
        res["value"] = F.avg_section(K, level=lv)
    elif f == "ap":
        res["value"] = F.avg_projection(K, level=lv)
    elif f == "surface":
        res["value"] = F.surface_area(K, level=lv)
    elif f == "v1":
        if not args.bodyL:
            raise VolcompError("v1 needs --bodyL")
        L = B.body_from_spec(args.bodyL)
        res.update(bodyL=L.to_spec(), value=F.mixed_volume_v1(K, L, lv))
    else:
        if not args.density:
            raise VolcompError("mu needs --density")
        mu = F.density_from_spec(yaml.safe_load(args.density), n)
        res["density"] = mu.to_spec()
        if args.direction is not None:
            xi = _direction(args, n)
            res.update(direction=xi.tolist(), value=F.measure_section(K, mu, xi, lv))
        else:
            res["value"] = F.measure_volume(K, mu, level=lv)
    res["value"] = float(res["value"])
    out.write(json.dumps(res, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_certify(args, out):
    K = B.body_from_spec(args.body)
    lv = args.quad or "standard"
    tol = 1e-9 if args.tol is None else args.tol
    test = SP.is_intersection_body if args.test == "intersection" else SP.is_projection_body
    cert = test(K, args.cutoff, tol=tol, level=lv)
    out.write(json.dumps(cert.to_dict(), sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_check(args, out):
    K = B.body_from_spec(args.bodyK)
    L = B.body_from_spec(args.bodyL) if args.bodyL else None
    params = {"level": args.quad, "cutoff": args.cutoff}
    if args.alpha is not None:
        params["alpha"] = args.alpha
    if args.density:
        params["density"] = yaml.safe_load(args.density)
    if args.tol is not None:
        params["tol_rel"] = args.tol
    r = V.check_case(args.case, K, L, {k: v for k, v in params.items() if v is not None},
                     seed=args.seed)
    out.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")
    if args.out:
        write_reports([r], V.summarize([r]), args.out)
    return _exit_code([r])


def _cmd_suite(args, out):
    cfg = load_config(args.config)
    if args.quad:
        cfg.quad = args.quad
    if args.cutoff is not None:
        cfg.cutoff = args.cutoff
    if args.tol is not None:
        cfg.tol_rel = args.tol
    seed = cfg.seed if args.seed is None else args.seed
    reports, summary = V.run_suite(cfg, seed, workers=args.workers)
    dest = args.out or cfg.out or "."
    summary.pop("seconds", None)
    write_reports(reports, summary, dest)
    out.write(json.dumps(summary, sort_keys=True) + "\n")
    return _exit_code(reports, cfg.require_hypothesis, cfg.inconclusive_quota)


_COMMANDS = {"constants": _cmd_constants, "bodies": _cmd_bodies, "eval": _cmd_eval,
             "certify": _cmd_certify, "check": _cmd_check, "suite": _cmd_suite}


def dispatch(command, args, out=None):
    """Run one parsed command; returns the documented exit code."""
    out = sys.stdout if out is None else out
    try:
        return _COMMANDS[command](args, out)
    except HypothesisUnmet as exc:
        print(f"volcomp: hypothesis unmet: {exc}", file=sys.stderr)
        return EXIT_UNMET
    except (VolcompError, ValueError, OSError) as exc:
        print(f"volcomp: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None):
    args = build_parser().parse_args(argv)
    return dispatch(args.command, args)


if __name__ == "__main__":
    sys.exit(main())
