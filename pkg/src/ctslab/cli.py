"""Command line front end: one subcommand per module, JSON on stdout.

Exit codes: 0 on success (verdicts live in the JSON), 2 on invalid input,
3 when a resource cap is hit.  A run manifest (argv, seed, versions, wall
time) goes to stderr, or to ``--manifest FILE``, so stdout stays a pure
function of the arguments.
"""

from __future__ import annotations

import argparse
import itertools
import json
import platform
import sys
import time
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from . import bounds as B
from .cts import covering_number, density_experiment, dense_family, family_from_json, is_cts
from .errors import CtsLabError, InvalidInput, ResourceCapExceeded
from .field import PrimeField, Rng
from .kakeya import (
    KakeyaCandidate,
    build_star,
    cts_not_kakeya_experiment,
    is_kakeya,
    kakeya_cts_check,
)
from .nullsatz import (
    algebra_from_json,
    extract_coefficient,
    find_witness,
    homothety_trace_check,
    alon_membership,
    pairing,
)
from .poly import Circuit, MultiPoly
from .secante import decide_secante, default_cases, input_from_json, truth_harness
from .variety import ConstructibleSet, count_report, croix_de_berny, intersect_count, ore_check


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _load(path: Optional[str]) -> dict:
    if path is None:
        raise InvalidInput("this subcommand needs --input FILE")
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise InvalidInput("missing required flag(s): " + ", ".join("--" + n for n in missing))


def _poly_or_circuit(obj: dict, p=None, n=None):
    if "circuit" in obj:
        return Circuit.from_json(obj["circuit"])
    return MultiPoly.from_json(obj["poly"], p, n)


# ----------------------------------------------------------------- handlers

def cmd_cts(args) -> dict:
    if args.input:
        obj = _load(args.input)
        family = family_from_json(obj["family"])
    else:
        _need(args, "p", "n", "d")
        obj = {}
        family = dense_family(args.p, args.n, [args.d])
    p, n = family.p, family.n
    if args.action == "verify":
        points = [tuple(x) for x in obj.get("points", [])]
        verdict = is_cts(family, None, points, args.cap)
        return {"schema": "ctslab/cts-verify/v1", **verdict.to_json()}
    if args.action == "cover":
        pool = obj.get("pool") or list(itertools.product(range(p), repeat=n))
        res = covering_number(family, None, [tuple(x) for x in pool], cap=args.cap)
        return {"schema": "ctslab/cts-cover/v1", **res.to_json()}
    # density
    _need(args, "grid", "length")
    values = list(range(1, args.grid + 1))
    rep = density_experiment(family, None, values, args.length, args.trials, args.seed, args.threads, args.cap)
    return rep.to_json()


def cmd_secante(args) -> dict:
    if args.harness:
        p = args.p or 10007
        return truth_harness(default_cases(p), args.trials, args.seed, args.threads)
    inp = input_from_json(_load(args.input), args.dim_omega, args.deg_omega)
    return decide_secante(inp, Rng(args.seed)).to_json()


def cmd_kakeya(args) -> dict:
    if args.action == "build":
        _need(args, "p", "n")
        E = build_star(args.p, args.n, args.center)
        return {"schema": "ctslab/kakeya-set/v1", "size": len(E), **E.to_json()}
    if args.action == "experiment":
        _need(args, "p", "n", "d", "k")
        return cts_not_kakeya_experiment(args.p, args.n, args.d, args.k, args.trials, args.seed)
    if args.input:
        E = KakeyaCandidate.from_json(_load(args.input))
    else:
        _need(args, "p", "n")
        E = build_star(args.p, args.n)
    if args.action == "verify":
        return {"schema": "ctslab/kakeya-verify/v1", **is_kakeya(E).to_json()}
    _need(args, "d")
    return {"schema": "ctslab/kakeya-cts/v1", **kakeya_cts_check(E, args.d)}


def cmd_nullsatz(args) -> dict:
    obj = _load(args.input)
    alg = algebra_from_json(obj, args.cap)
    if args.action == "duality":
        box = alg.box()
        matrix = [[pairing(alg, t, m) for m in box] for t in box]
        identity = all(v == int(i == j) for i, row in enumerate(matrix) for j, v in enumerate(row))
        return {
            "schema": "ctslab/nullsatz-duality/v1",
            "D": alg.size,
            "box": [list(t) for t in box],
            "is_identity": identity,
            "duals": alg.to_json()["duals"],
            "h": alg.to_json()["h"],
        }
    if args.action == "trace":
        h = MultiPoly.from_json(obj["h"], alg.p, alg.n)
        return {"schema": "ctslab/nullsatz-trace/v1", **homothety_trace_check(alg, h)}
    f = _poly_or_circuit(obj, alg.p, alg.n)
    if args.action == "coeff":
        theta = obj.get("theta")
        if theta is None:
            raise InvalidInput("coeff input needs a theta exponent vector")
        value = extract_coefficient(alg, f, theta, obj.get("degree"))
        return {"schema": "ctslab/nullsatz-coeff/v1", "theta": list(theta), "coefficient": value}
    z = find_witness(alg, f)
    out = {"schema": "ctslab/nullsatz-witness/v1", "witness": None if z is None else list(z)}
    if isinstance(f, MultiPoly):
        out["in_alon_family"] = alon_membership(alg, f)
    return out


def cmd_variety(args) -> dict:
    if args.action == "croix":
        _need(args, "p")
        return {"schema": "ctslab/croix/v1", **croix_de_berny(args.p, args.cap)}
    obj = _load(args.input)
    if args.action == "count":
        rep = count_report(ConstructibleSet.from_json(obj), args.cap)
    elif args.action == "ore":
        rep = ore_check(MultiPoly.from_json(obj.get("poly", obj)), cap=args.cap)
    else:
        sets = [ConstructibleSet.from_json(s) for s in obj["sets"]]
        rep = intersect_count(
            sets,
            degrees=obj.get("degrees"),
            dims=obj.get("dims"),
            intersection_dim=int(obj.get("intersection_dim", 0)),
            cap=args.cap,
        )
    return {"schema": f"ctslab/variety-{args.action}/v1", **rep.to_json()}


def cmd_bounds(args) -> dict:
    a = args.action
    if a == "params":
        _need(args, "dim", "deg", "d")
        return {"schema": "ctslab/params/v1", **B.cts_params(args.dim, args.deg, args.d).to_json()}
    if a == "intersection":
        _need(args, "degrees", "r")
        res = B.intersection_bounds(args.degrees, args.r, args.sum_from)
        return {"schema": "ctslab/intersection/v1", **res.to_json()}
    if a == "extrinsic":
        _need(args, "degrees", "n", "m", "dim_w", "deg_v")
        res = B.extrinsic_bound(args.degrees, args.n, args.m, args.dim_w, args.deg_v)
        return {"schema": "ctslab/extrinsic/v1", **res.to_json()}
    if a == "hypotheses":
        _need(args, "n", "m", "d", "length", "dim", "deg", "delta", "dmax", "r")
        res = B.density_hypotheses(
            args.n, args.m, args.d, args.length, args.dim, args.deg, args.delta, args.dmax, args.r
        )
        return {"schema": "ctslab/hypotheses/v1", **res.to_json()}
    if a == "sz":
        _need(args, "deg", "card", "codim")
        return {"schema": "ctslab/sz/v1", **B.sz_bound(args.deg, args.card, args.codim).to_json()}
    # prob
    _need(args, "dim", "deg")
    m = args.m or 1
    return {
        "schema": "ctslab/prob/v1",
        "density": B.density_bound(args.dim, args.deg, m, args.length or 0).to_json(),
        "secante_error": B.secante_error_bound(args.dim, args.deg, m).to_json(),
    }


# ------------------------------------------------------------------- parser

def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--p", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--cap", type=int, default=10**8)
    c.add_argument("--input")
    c.add_argument("--format", choices=["json"], default="json")
    c.add_argument("--manifest", help="write the run manifest here instead of stderr")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="ctslab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ctslab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cts", parents=[common], help="verify, cover or sample CTS")
    c.add_argument("action", choices=["verify", "cover", "density"])
    c.add_argument("--grid", type=int, help="grid {1..G} for density runs")
    c.add_argument("--length", "--L", type=int, dest="length")
    c.set_defaults(func=cmd_cts)

    s = sub.add_parser("secante", parents=[common], help="evaluation-only Suite Sécante decision")
    s.add_argument("--dim-omega", type=int)
    s.add_argument("--deg-omega", type=int)
    s.add_argument("--harness", action="store_true", help="run the ground-truth harness instead")
    s.set_defaults(func=cmd_secante)

    k = sub.add_parser("kakeya", parents=[common], help="Kakeya sets")
    k.add_argument("action", choices=["build", "verify", "cts-check", "experiment"])
    k.add_argument("--center", type=_int_list)
    k.add_argument("--k", type=int)
    k.set_defaults(func=cmd_kakeya)

    nz = sub.add_parser("nullsatz", parents=[common], help="grid algebra and coefficient extraction")
    nz.add_argument("action", choices=["coeff", "witness", "duality", "trace"])
    nz.set_defaults(func=cmd_nullsatz)

    v = sub.add_parser("variety", parents=[common], help="brute-force geometry over F_p")
    v.add_argument("action", choices=["croix", "count", "ore", "intersect"])
    v.set_defaults(func=cmd_variety)

    b = sub.add_parser("bounds", parents=[common], help="closed-form bound calculators")
    b.add_argument("action", choices=["intersection", "extrinsic", "hypotheses", "sz", "prob", "params"])
    b.add_argument("--dim", type=int)
    b.add_argument("--deg", type=int)
    b.add_argument("--degrees", type=_int_list)
    b.add_argument("--r", type=int)
    b.add_argument("--m", type=int)
    b.add_argument("--sum-from", type=int, default=2, choices=[1, 2])
    b.add_argument("--dim-w", type=int)
    b.add_argument("--deg-v", type=int)
    b.add_argument("--length", "--L", type=int, dest="length")
    b.add_argument("--delta", type=str, help="rational, e.g. 30 or 59/2")
    b.add_argument("--dmax", type=str)
    b.add_argument("--card", type=int)
    b.add_argument("--codim", type=int)
    b.set_defaults(func=cmd_bounds)
    return parser


def _manifest(args, argv: Sequence[str], elapsed: float, cap_hit: Optional[dict]) -> dict:
    return {
        "schema": "ctslab/manifest/v1",
        "subcommand": args.command,
        "argv": list(argv),
        "flags": {k: v for k, v in vars(args).items() if k != "func"},
        "seed": args.seed,
        "versions": {
            "ctslab": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
        "wall_time_s": round(elapsed, 6),
        "caps_hit": cap_hit,
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    code, cap_hit, out = 0, None, None
    try:
        if args.p is not None and args.command != "bounds":
            PrimeField(args.p)
        out = args.func(args)
    except ResourceCapExceeded as exc:
        print(f"ctslab: {exc}", file=sys.stderr)
        code, cap_hit = 3, {"what": exc.what, "needed": str(exc.needed), "cap": str(exc.cap)}
    except (CtsLabError, KeyError, TypeError, ValueError) as exc:
        print(f"ctslab: invalid input: {exc}", file=sys.stderr)
        code = 2
    if out is not None:
        sys.stdout.write(json.dumps(out) + "\n")
    manifest = json.dumps(_manifest(args, argv, time.perf_counter() - start, cap_hit))
    if args.manifest:
        with open(args.manifest, "w") as fh:
            fh.write(manifest + "\n")
    else:
        print(manifest, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
