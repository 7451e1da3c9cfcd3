"""Orlicz spaces over vector measures: norms, semivariation, interpolation, checks.

Every argument that takes a spec accepts inline JSON or a path to a JSON
file.  Output documents are JSON on stdout (or ``--out``) and carry
``"v": 1``.  Exit codes: 0 success, 1 verification failure, 2 unreadable
input, 3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import interp, verify
from .exceptions import OrliczError, UnknownFilter
from .orlicz import OrliczSpace
from .qbfs import space_from_spec
from .vecmeasure import VectorMeasure, distribution_function, semivariation
from .young import validate

SCHEMA_VERSION = 1
EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN = 1, 2, 3

SUITES = {
    "orlicz": {
        None: "axiom-*,semivar-*,young-*,lem-*,thm-*,vec-*",
        "axioms": "axiom-*",
        "semivar": "semivar-*",
        "young": "young-*",
        "lemmas": "lem-*",
        "theorems": "thm-*",
        "vector": "vec-*",
    },
    "interp": {
        None: "interp-*",
        "cp": "interp-cp-*,interp-equal-collapse,interp-exponent",
        "lconvex": "interp-lconvex-*,interp-s-convexity",
        "powers": "interp-powers",
    },
}


class InputError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


def load_json(arg, what):
    """Inline JSON (starting with { or [) or a path to a JSON file."""
    text = arg.strip()
    if not text.startswith(("{", "[")):
        if not os.path.exists(arg):
            raise InputError(f"{what}: no such file {arg!r}")
        with open(arg) as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON ({exc})") from None
    if isinstance(doc, dict) and "v" in doc and doc["v"] != SCHEMA_VERSION:
        raise InputError(f"{what}: unsupported schema version {doc['v']!r}")
    return doc


def load_fn(arg):
    doc = load_json(arg, "--fn")
    if isinstance(doc, dict):
        doc = doc.get("values", doc.get("fn"))
    try:
        f = np.asarray(doc, dtype=float)
    except (TypeError, ValueError):
        raise InputError("--fn: expected a list of numbers") from None
    if f.ndim != 1 or len(f) == 0:
        raise InputError("--fn: expected a non-empty list of numbers")
    return f


def _number(x, digits):
    x = float(x)
    if not np.isfinite(x):
        return "inf" if x > 0 else "nan"
    return round(x, digits) if digits is not None else x


def _emit(doc, out):
    doc = {"v": SCHEMA_VERSION, **doc}
    text = json.dumps(doc, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _measure(args):
    return VectorMeasure.from_spec(load_json(args.measure, "--measure"))


def cmd_norm(args):
    f = load_fn(args.fn)
    X = space_from_spec(load_json(args.space, "--space"), n_atoms=len(f))
    _emit({"value": _number(X.norm(f), args.digits), "K": X.K, "tags": X.tags}, args.out)


def cmd_semivar(args):
    m = _measure(args)
    A = None if args.set is None else m.space.atom_set(load_json(args.set, "--set"))
    _emit({"value": _number(semivariation(m, A), args.digits)}, args.out)


def cmd_distfn(args):
    m = _measure(args)
    f = load_fn(args.fn)
    step = distribution_function(m, f)
    t = step.breakpoints.tolist()
    vals = step.values.tolist()
    _emit({"t": t, "value": vals, "choquet_norm": step.integral()}, args.out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "value"])
            for a, b in zip(t, vals):
                w.writerow([repr(a), repr(b)])
    if args.svg:
        _staircase_svg(step, args.svg)


def _staircase_svg(step, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "orliczlab"
    t = np.append(step.breakpoints, step.breakpoints[-1] * 1.1 + 1e-12)
    v = np.append(step.values, 0.0)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.step(t, v, where="post")
    ax.set_xlabel("t")
    ax.set_ylabel("semivariation of [|f| > t]")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_luxemburg(args):
    f = load_fn(args.fn)
    base = space_from_spec(load_json(args.base, "--base"), n_atoms=len(f))
    OS = OrliczSpace(base, validate(load_json(args.phi, "--phi")), tol=args.tol)
    doc = {"value": _number(OS.norm(f), args.digits)}
    try:
        doc["modular"] = _number(OS.modular(f), args.digits)
    except OrliczError:
        doc["modular"] = "inf"
    _emit(doc, args.out)


def cmd_calderon(args):
    f = load_fn(args.fn)
    X0 = space_from_spec(load_json(args.x0, "--x0"), n_atoms=len(f))
    X1 = space_from_spec(load_json(args.x1, "--x1"), n_atoms=len(f))
    lam, fac = interp.calderon_norm_upper(interp.CalderonInstance(X0, X1, args.theta), f,
                                          args.method)
    _emit({"value": _number(lam, args.digits), "method": args.method,
           "f0": fac.f0.tolist(), "f1": fac.f1.tolist()}, args.out)


def cmd_interpolate(args):
    base_spec = load_json(args.base, "--base")
    f = load_fn(args.fn) if args.fn else None
    base = space_from_spec(base_spec, n_atoms=None if f is None else len(f))
    phi0 = validate(load_json(args.phi0, "--phi0"))
    phi1 = validate(load_json(args.phi1, "--phi1"))
    cert = interp.l_convexity_search(base, args.eps, args.trials, seed=args.seed)
    S = interp.complex_interpolation(base, phi0, phi1, args.theta, certificate=cert)
    doc = {"space": S.to_spec(), "preconditions": S.preconditions, "exponent": S.exponent}
    if f is not None:
        doc["value"] = _number(S.norm(f), args.digits)
    _emit(doc, args.out)


def cmd_verify(args):
    if args.filter:
        pattern = args.filter
    elif args.group:
        try:
            pattern = SUITES[args.group][args.suite]
        except KeyError:
            raise UnknownFilter(f"no suite {args.suite!r} in group {args.group!r}") from None
    elif args.suite:
        raise InputError("--suite needs a group (orlicz or interp)")
    else:
        pattern = None
    verdicts = verify.run_suite(pattern, seed=args.seed, budget=args.budget)
    doc = verify.report(verdicts, args.seed, args.budget, pattern)
    text = verify.dumps_report(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    for v in verdicts:
        print(f"{'PASS' if v.passed else 'FAIL'} {v.check} ({v.instances} instances)",
              file=sys.stderr if not args.out else sys.stdout)
    if not args.out:
        print(text)
    return 0 if doc["pass"] else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="orliczlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, digits=True):
        sp.add_argument("--out", help="write the JSON document here instead of stdout")
        if digits:
            sp.add_argument("--digits", type=int, default=10,
                            help="round reported values to this many decimals (default 10)")

    sp = sub.add_parser("norm", help="quasi-norm of a function in a space")
    sp.add_argument("--space", required=True)
    sp.add_argument("--fn", required=True)
    common(sp)
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("semivar", help="semivariation of a set")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--set", help="JSON list of atom ids (default: all atoms)")
    common(sp)
    sp.set_defaults(func=cmd_semivar)

    sp = sub.add_parser("distfn", help="distribution function t -> ||m||([|f| > t])")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--fn", required=True)
    sp.add_argument("--csv", help="also write columns t,value")
    sp.add_argument("--svg", help="also write a staircase plot")
    common(sp, digits=False)
    sp.set_defaults(func=cmd_distfn)

    sp = sub.add_parser("luxemburg", help="Luxemburg quasi-norm over X^Phi")
    sp.add_argument("--base", required=True)
    sp.add_argument("--phi", required=True)
    sp.add_argument("--fn", required=True)
    sp.add_argument("--tol", type=float, default=1e-10)
    common(sp)
    sp.set_defaults(func=cmd_luxemburg)

    sp = sub.add_parser("calderon", help="upper bound on the Calderon product quasi-norm")
    sp.add_argument("--x0", required=True)
    sp.add_argument("--x1", required=True)
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--fn", required=True)
    sp.add_argument("--method", choices=interp.METHODS, default="alternating")
    common(sp)
    sp.set_defaults(func=cmd_calderon)

    sp = sub.add_parser("interpolate", help="Orlicz space realizing [X^Phi0, X^Phi1]_theta")
    sp.add_argument("--base", required=True)
    sp.add_argument("--phi0", required=True)
    sp.add_argument("--phi1", required=True)
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--fn", help="optionally evaluate the interpolated norm of this function")
    sp.add_argument("--eps", type=float, default=0.25, help="L-convexity level to certify")
    sp.add_argument("--trials", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_interpolate)

    sp = sub.add_parser("verify", help="run the property-check registry")
    sp.add_argument("group", nargs="?", choices=sorted(SUITES))
    sp.add_argument("--suite")
    sp.add_argument("--filter", help="comma-separated glob(s) over check ids")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, help="instances per check (default: per-check)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnknownFilter as exc:
        print(f"error: unknown filter {exc.args[0]!r}", file=sys.stderr)
        return EXIT_PARSE
    except (OrliczError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
