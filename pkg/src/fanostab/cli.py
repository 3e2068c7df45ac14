"""Command-line frontend: expression parsing, JSON batch runs, dispatch.

All numbers are read and printed as exact fractions "p/q".  Batch output is
deterministic byte-for-byte for a fixed input; wall-clock timing goes to
stderr only, so reports can be diffed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .chow import blowup_push, cm_class, pe_constants
from .errors import FanostabError, IncompleteGeometry, ParseError
from .expr import format_poly, parse_poly
from .hm import (
    Chamber,
    CurvePair,
    OnePS,
    Wall,
    WALLS,
    chamber_of,
    destabilizer_search,
    hk_map,
    hm_index,
    one_ps_limit,
)
from .lattice import GramLattice, nef_check_unigonal, rr_h0, unigonal_obstruction
from .quadrics import quadric_normal_form
from .rationals import as_rat
from .singularities import (
    bidegree_to_p3,
    singular_points,
    surface_point_from_p3,
)
from .verdict import T0, extract_pair, git_verdict, k_verdict, sarkisov_cubic

DEFAULT_PRECISION = int(os.environ.get("FANOSTAB_PRECISION", "24"))


def _rat(text: str) -> Fraction:
    try:
        return as_rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FanostabError(f"not an exact rational: {text!r}") from exc


def _parse_weights(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise FanostabError("weights must be four comma-separated integers")
    return tuple(int(x) for x in parts)


def _parse_frame(text: str):
    entries = [_rat(x) for x in text.split(",")]
    if len(entries) == 12:
        entries += [Fraction(0), Fraction(0), Fraction(0), Fraction(1)]
    if len(entries) != 16:
        raise FanostabError("frame needs 16 (or 12) comma-separated rationals")
    return [entries[4 * i : 4 * i + 4] for i in range(4)]


def _pair_from_args(args) -> CurvePair:
    if getattr(args, "f", None):
        f = parse_poly(args.f, "bidegree33").poly
        q = parse_poly("x0*x3 - x1*x2", "quadric").poly
        return CurvePair(q, bidegree_to_p3(f))
    if not args.q or not args.g:
        raise FanostabError("provide --q and --g, or a bidegree form via --f")
    q = parse_poly(args.q, "quadric").poly
    g = parse_poly(args.g, "cubic").poly
    return CurvePair(q, g)


def _one_ps_from_args(args) -> OnePS:
    weights = _parse_weights(args.weights)
    if args.frame:
        return OnePS(tuple(tuple(r) for r in _parse_frame(args.frame)), weights)
    return OnePS.diagonal(weights)


def _emit(args, payload: dict, human: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        print(human)


# -- subcommands -----------------------------------------------------------------

def cmd_cm(args):
    result = cm_class()
    xi, eta = result.as_pair()
    payload = {
        "class": {"xi": str(xi), "eta": str(eta)},
        "t0": str(result.slope),
        "pushforwards": {
            "H2E2": repr(blowup_push(2, 2)),
            "H1E3": repr(blowup_push(1, 3)),
            "E4": repr(blowup_push(0, 4)),
        },
        "parameter_space": pe_constants().as_dict(),
    }
    _emit(
        args,
        payload,
        f"CM class: {result.chow!r}\nslope t0 = {result.slope}",
    )
    return 0


def cmd_hm(args):
    pair = _pair_from_args(args)
    l = _one_ps_from_args(args)
    value = hm_index(pair, l)
    payload = {
        "mu_eta": str(value.constant),
        "mu_xi": str(value.slope),
        "mu": repr(value),
    }
    human = f"mu_eta = {value.constant}, mu_xi = {value.slope}; mu(t) = {value!r}"
    if args.t is not None:
        t = _rat(args.t)
        payload["at_t"] = str(value.value_at(t))
        payload["destabilizing"] = value.destabilizing_at(t)
        human += f"\nmu({t}) = {value.value_at(t)}"
        human += " < 0: destabilizing" if value.destabilizing_at(t) else " >= 0"
    _emit(args, payload, human)
    return 0


def cmd_limit(args):
    pair = _pair_from_args(args)
    l = _one_ps_from_args(args)
    lim = one_ps_limit(pair, l)
    payload = {"q": format_poly(lim.q), "g": format_poly(lim.g)}
    _emit(args, payload, f"q -> {format_poly(lim.q)}\ng -> {format_poly(lim.g)}")
    return 0


def cmd_search(args):
    pair = _pair_from_args(args)
    t = _rat(args.t)
    frames = [_parse_frame(f) for f in args.frame] if args.frame else None
    cert = destabilizer_search(pair, t, frames=frames, bound=args.bound)
    if cert is None:
        _emit(
            args,
            {"certificate": None, "bound": args.bound},
            f"no destabilizer found with |w| <= {args.bound}",
        )
        return 0
    payload = {"certificate": cert.as_dict(), "bound": args.bound}
    human = (
        f"destabilizer: weights {cert.subgroup.weights}, mu(t) = {cert.value!r}, "
        f"mu({t}) = {cert.value.value_at(t)}"
    )
    _emit(args, payload, human)
    return 0


def cmd_walls(args):
    t = _rat(args.t)
    place = chamber_of(t)
    if isinstance(place, Wall):
        payload = {"t": str(t), "wall": str(place.value)}
        human = f"t = {t} is the wall at {place.value}"
    else:
        payload = {"t": str(t), "chamber": [str(place.low), str(place.high)]}
        human = f"t = {t} lies in the open chamber ({place.low}, {place.high})"
    payload["walls"] = [str(w) for w in WALLS]
    _emit(args, payload, human)
    return 0


def cmd_hk(args):
    if (args.alpha is None) == (args.t is None):
        raise FanostabError("provide exactly one of --alpha or --t")
    if args.alpha is not None:
        t = hk_map(_rat(args.alpha), "alpha_to_t")
        _emit(args, {"t": str(t)}, f"t = {t}")
    else:
        alpha = hk_map(_rat(args.t), "t_to_alpha")
        _emit(args, {"alpha": str(alpha)}, f"alpha = {alpha}")
    return 0


def cmd_sing(args):
    pair = _pair_from_args(args)
    info = quadric_normal_form(pair.q)
    if info.normal_frame is None:
        raise IncompleteGeometry(["no quadric normal frame available"])
    assist = []
    for text in args.point or []:
        coords = [_rat(x) for x in text.split(",")]
        assist.append(surface_point_from_p3(coords, info))
    locus = singular_points(pair, info, args.precision, assist)
    payload = {
        "quadric_rank": info.rank,
        "model": info.target,
        "points": [cp.as_dict() for cp in locus.points],
        "complete": locus.complete,
        "unresolved": locus.unresolved,
    }
    lines = [f"quadric rank {info.rank} ({info.target} model)"]
    for cp in locus.points:
        lines.append(f"  {cp.germ!r} at {cp.point.as_dict()}")
    if not locus.points:
        lines.append("  no singular points: the curve is smooth")
    if not locus.complete:
        lines.append(f"  unresolved: {locus.unresolved}")
    _emit(args, payload, "\n".join(lines))
    return 0 if locus.complete else 2


def cmd_sarkisov(args):
    if args.cubic:
        cubic = parse_poly(args.cubic, "p4cubic").poly
        vertex = [_rat(x) for x in args.vertex.split(",")] if args.vertex else None
        pair = extract_pair(cubic, vertex)
        payload = {"q": format_poly(pair.q), "g": format_poly(pair.g)}
        _emit(args, payload, f"q = {format_poly(pair.q)}\ng = {format_poly(pair.g)}")
        return 0
    pair = _pair_from_args(args)
    cubic = sarkisov_cubic(pair)
    payload = {"cubic": format_poly(cubic.form), "integral": cubic.integral}
    _emit(
        args,
        payload,
        f"cubic threefold: {format_poly(cubic.form)}\nintegral: {cubic.integral}",
    )
    return 0


def cmd_k3(args):
    if args.k3_command == "rr":
        value = rr_h0(args.degree)
        _emit(args, {"h0": value}, f"h0 = {value}")
        return 0
    if args.k3_command == "unigonal":
        report = unigonal_obstruction(args.case)
        payload = report.as_dict()
        lines = [f"case {report.case}: solutions {list(report.solutions)}"]
        lines += [f"  {row}" for row in report.table]
        lines.append("obstruction holds" if report.empty else "unexpected solution")
        _emit(args, payload, "\n".join(lines))
        return 0
    if args.k3_command == "pair":
        gram = tuple(
            tuple(int(x) for x in row.split(",")) for row in args.gram.split(";")
        )
        names = tuple(f"e{i}" for i in range(len(gram)))
        lat = GramLattice(names, gram)
        v = [_rat(x) for x in args.v.split(",")]
        w = [_rat(x) for x in args.w.split(",")]
        value = lat.pair(v, w)
        _emit(args, {"pairing": str(value)}, f"pairing = {value}")
        return 0
    raise FanostabError(f"unknown k3 subcommand {args.k3_command!r}")


def _classify_entry(entry, t, precision):
    try:
        if "f" in entry:
            f = parse_poly(entry["f"], "bidegree33").poly
            pair = CurvePair(
                parse_poly("x0*x3 - x1*x2", "quadric").poly, bidegree_to_p3(f)
            )
        else:
            pair = CurvePair(
                parse_poly(entry["q"], "quadric").poly,
                parse_poly(entry["g"], "cubic").poly,
            )
        assist = []
        if entry.get("points"):
            info = quadric_normal_form(pair.q)
            for coords in entry["points"]:
                assist.append(
                    surface_point_from_p3([_rat(str(c)) for c in coords], info)
                )
        if t is None:
            verdict = k_verdict(pair, precision, assist_points=tuple(assist))
            return verdict.as_dict()
        gv = git_verdict(pair, t, precision)
        out = gv.as_dict()
        if gv.k is not None:
            out["reasons"] = gv.k.reasons
        return out
    except IncompleteGeometry as exc:
        return {"verdict": "Incomplete", "missing": [str(m) for m in exc.missing]}


def cmd_classify(args):
    try:
        raw = open(args.input, "rb").read()
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 1
    try:
        entries = json.loads(raw.decode("utf-8"))
        if not isinstance(entries, list):
            raise ValueError("top-level JSON value must be an array")
    except (ValueError, UnicodeDecodeError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return 1
    t = _rat(args.t) if args.t is not None else None
    started = time.monotonic()
    try:
        if args.threads > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                results = list(
                    pool.map(lambda e: _classify_entry(e, t, args.precision), entries)
                )
        else:
            results = [_classify_entry(e, t, args.precision) for e in entries]
    except (FanostabError, KeyError) as exc:
        print(f"bad entry: {exc}", file=sys.stderr)
        return 1
    report = {
        "version": __version__,
        "input_sha256": hashlib.sha256(raw).hexdigest(),
        "t": str(t) if t is not None else str(T0),
        "results": results,
    }
    print(json.dumps(report, sort_keys=True, separators=(",", ":")))
    print(
        f"classified {len(results)} curve(s) in {time.monotonic() - started:.2f}s",
        file=sys.stderr,
    )
    incomplete = any(r.get("verdict") == "Incomplete" for r in results)
    return 2 if incomplete else 0


# -- argument wiring ----------------------------------------------------------------

def _add_pair_args(sub):
    sub.add_argument("--q", help="quadric expression in x0..x3")
    sub.add_argument("--g", help="cubic expression in x0..x3")
    sub.add_argument("--f", help="bidegree (3,3) expression in u,v,s,w")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fanostab",
        description="exact GIT/K-stability calculator for blow-ups of P^3 "
        "along (2,3)-intersection curves",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument(
        "--precision",
        type=int,
        default=DEFAULT_PRECISION,
        help="series precision for germ classification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cm", help="CM divisor class and its slope")
    p.set_defaults(func=cmd_cm)

    p = sub.add_parser("hm", help="Hilbert-Mumford index of a pair")
    _add_pair_args(p)
    p.add_argument("--weights", required=True, help="a,b,c,d with zero sum")
    p.add_argument("--frame", help="16 (or 12) rationals, row-major")
    p.add_argument("--t", help="evaluate the index at this slope")
    p.set_defaults(func=cmd_hm)

    p = sub.add_parser("limit", help="one-parameter-subgroup limit of a pair")
    _add_pair_args(p)
    p.add_argument("--weights", required=True)
    p.add_argument("--frame")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("search", help="bounded destabilizer search")
    _add_pair_args(p)
    p.add_argument("--t", required=True)
    p.add_argument("--bound", type=int, default=9)
    p.add_argument("--frame", action="append", help="extra frame (repeatable)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("walls", help="wall/chamber position of a slope")
    p.add_argument("--t", required=True)
    p.set_defaults(func=cmd_walls)

    p = sub.add_parser("hk", help="Hassett-Keel slope correspondence")
    p.add_argument("--alpha")
    p.add_argument("--t")
    p.set_defaults(func=cmd_hk)

    p = sub.add_parser("sing", help="singular points and germ types")
    _add_pair_args(p)
    p.add_argument(
        "--point",
        action="append",
        help="assist point x0,x1,x2,x3 on the quadric (repeatable)",
    )
    p.set_defaults(func=cmd_sing)

    p = sub.add_parser("classify", help="batch K/GIT verdicts from JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--t", help="GIT slope; omit for the K verdict")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sarkisov", help="cubic-threefold correspondence")
    _add_pair_args(p)
    p.add_argument("--cubic", help="cubic in x0..x4 for the inverse direction")
    p.add_argument("--vertex", help="double point, five rationals")
    p.set_defaults(func=cmd_sarkisov)

    p = sub.add_parser("k3", help="K3 lattice computations")
    k3sub = p.add_subparsers(dest="k3_command", required=True)
    prr = k3sub.add_parser("rr", help="sections of a degree-d polarization")
    prr.add_argument("--degree", type=int, required=True)
    pun = k3sub.add_parser("unigonal", help="unigonal degeneration obstruction")
    pun.add_argument("--case", choices=("smooth", "a1"), required=True)
    ppair = k3sub.add_parser("pair", help="lattice pairing")
    ppair.add_argument("--gram", required=True, help="rows 'a,b;c,d'")
    ppair.add_argument("--v", required=True)
    ppair.add_argument("--w", required=True)
    p.set_defaults(func=cmd_k3)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except IncompleteGeometry as exc:
        print(f"incomplete geometry: {exc}", file=sys.stderr)
        return 2
    except FanostabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
