"""Command-line interface.

Machine output goes to stdout, diagnostics to stderr.  Exit status is 0 on
success, 1 when a checked identity fails and 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import building_local as bl
from . import ck_subshift as ck
from . import group_words as gw
from . import presentation as pr
from . import sector_geometry as sg
from .apartment import grow_apartment
from .errors import BacktrackExhausted, SearchBudgetExceeded, TriangleBuildingError
from .labels import ChamberLabel
from .projective_plane import build_plane, plane_to_json
from .verify import run_all

EMITS = ("json", "csv", "dot", "text")


class UsageError(Exception):
    pass


def _dump(data) -> str:
    return json.dumps(data, separators=(", ", ": "))


def parse_label(text: str) -> ChamberLabel:
    """``0^-1:1`` or ``0:1``."""
    try:
        a, b = text.split(":")
        return ChamberLabel(int(a.replace("^-1", "")), int(b))
    except ValueError:
        raise UsageError(f"bad chamber label {text!r}; expected a^-1:b") from None


def load_presentation(args) -> pr.TrianglePresentation:
    if args.presentation:
        with open(args.presentation) as fh:
            pres = pr.presentation_from_json(fh.read())
        rep = pr.verify(pres)
        if not rep.ok:
            raise UsageError("presentation file fails the axioms: " + "; ".join(rep.violations))
        return pres
    if args.q not in (2, 3):
        raise UsageError(f"no built-in presentation for q={args.q}; pass --presentation")
    return pr.canonical(args.q)


def _word(pres, text: str) -> gw.NormalForm:
    try:
        letters = gw.parse_word(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for x, _ in letters:
        if not 0 <= x < pres.n_points:
            raise UsageError(f"generator {x} out of range for q={pres.q}")
    return gw.reduce(pres, letters)


def _need(args, *allowed):
    if args.emit not in allowed:
        raise UsageError(f"--emit {args.emit} is not available here; use one of {', '.join(allowed)}")


# Handlers return (text, exit status).

def cmd_plane(args):
    _need(args, "json", "text")
    plane = build_plane(args.q)
    if args.emit == "json":
        return plane_to_json(plane), 0
    rows = [f"line {i}: {' '.join(map(str, sorted(pts)))}" for i, pts in enumerate(plane.line_points)]
    return "\n".join(rows), 0


def cmd_presentation(args):
    _need(args, "json", "text")
    pres = load_presentation(args)
    if args.action == "verify":
        rep = pr.verify(pres)
        if args.emit == "json":
            out = _dump({"ok": rep.ok, "violations": rep.violations, "triples": len(pres.triples)})
        else:
            out = "ok" if rep.ok else "\n".join(rep.violations)
        return out, 0 if rep.ok else 1
    if args.action == "canonical":
        if args.emit == "json":
            return pr.presentation_to_json(pres), 0
        lines = [f"lambda({x}) = {{{', '.join(map(str, sorted(pres.lam_pts[x])))}}}" for x in range(pres.n_points)]
        lines += [" ".join(map(str, t)) for t in sorted({pr.canonical_rotation(t) for t in pres.triples})]
        return "\n".join(lines), 0
    found, truncated = pr.enumerate_presentations(pres.plane, pres.lam, args.budget)
    if truncated:
        print(f"stopped after {args.budget} presentations", file=sys.stderr)
    if args.emit == "json":
        return "[" + ", ".join(pr.presentation_to_json(p) for p in found) + "]", 0
    return f"{len(found)} presentations" + (" (truncated)" if truncated else ""), 0


def cmd_word(args):
    _need(args, "json", "text")
    pres = load_presentation(args)
    g = _word(pres, args.word)
    if args.emit == "json":
        return _dump({"input": args.word, "normal_form": str(g), "shape": list(g.shape), "length": g.length}), 0
    return str(g), 0


def cmd_ball(args):
    _need(args, "json", "csv", "text")
    pres = load_presentation(args)
    b = gw.ball(pres, args.radius, args.budget)
    census = b.census()
    shapes = sorted(census, key=lambda s: (s[0] + s[1], s))
    if args.emit == "csv":
        return "\n".join(["n,m,count"] + [f"{n},{m},{census[(n, m)]}" for n, m in shapes]), 0
    if args.emit == "json":
        return _dump({"spheres": b.spheres(), "census": [[n, m, census[(n, m)]] for n, m in shapes]}), 0
    return " ".join(map(str, b.spheres())), 0


def cmd_residue(args):
    pres = load_presentation(args)
    res = bl.residue_graph(pres, _word(pres, args.at))
    if args.emit == "dot":
        return bl.residue_to_dot(res).rstrip("\n"), 0
    if args.emit == "json":
        return _dump({"center": str(res.center), "vertices": list(res.labels), "edges": [list(e) for e in res.edges]}), 0
    _need(args, "dot", "json", "text")
    return "\n".join(f"{u} -- {w}" for u, w in res.edges), 0


def cmd_hexagons(args):
    _need(args, "json", "text")
    pres = load_presentation(args)
    hexes = bl.hexagons(bl.residue_graph(pres, _word(pres, args.at)))
    if args.emit == "json":
        return _dump({"count": len(hexes), "hexagons": [sorted(h) for h in hexes]}), 0
    return str(len(hexes)), 0


def cmd_ck(args):
    pres = load_presentation(args)
    act = args.action
    if act == "matrices":
        _need(args, "csv", "json", "text")
        plus, minus = ck.matrices(pres)
        if args.emit == "csv":
            return plus.to_csv() + "\n" + minus.to_csv().rstrip("\n"), 0
        if args.emit == "json":
            return _dump({m.direction: m.entries.tolist() for m in (plus, minus)} | {"labels": [str(l) for l in plus.labels]}), 0
        rows = set(plus.entries.sum(axis=1)) | set(minus.entries.sum(axis=1))
        return f"{plus.dim} labels, row sums {sorted(int(r) for r in rows)}", 0
    if act in ("aplus", "aminus"):
        _need(args, "json", "text")
        if not args.args:
            raise UsageError(f"ck {act} needs a label")
        lab = parse_label(args.args[0])
        if lab not in ck.alphabet(pres):
            raise UsageError(f"{args.args[0]} is not a chamber label")
        row = sorted((ck.a_plus if act == "aplus" else ck.a_minus)(pres, lab))
        if args.emit == "json":
            return _dump([str(l) for l in row]), 0
        return " ".join(map(str, row)), 0
    if act == "decompose":
        _need(args, "json", "text")
        gens = [int(x) for x in args.args] or list(range(pres.n_points))
        reports = [ck.decompose_generator(pres, b) for b in gens]
        ok = all(r["initial_partition_ok"] and r["final_partition_ok"] and r["c_groups_ok"] and r["words_ok"] for r in reports)
        if args.emit == "json":
            return _dump([ck.report_to_jsonable(r) for r in reports]), 0 if ok else 1
        return "\n".join(f"a_{b}: {r['counts']}" for b, r in zip(gens, reports)), 0 if ok else 1
    if act == "weakcomm":
        _need(args, "json", "text")
        if args.args:
            if len(args.args) != 4:
                raise UsageError("ck weakcomm takes a b c h, or nothing for all quadruples")
            quads = [tuple(int(x) for x in args.args)]
        else:
            quads = ck.admissible_quadruples(pres)
        try:
            reports = [ck.weak_commutativity_check(pres, *qd) for qd in quads]
        except TriangleBuildingError as exc:
            raise UsageError(str(exc)) from None
        ok = all(r["equal"] for r in reports)
        if args.emit == "json":
            return _dump(reports), 0 if ok else 1
        return f"{sum(r['equal'] for r in reports)}/{len(reports)} equal", 0 if ok else 1
    if act == "freegroup":
        _need(args, "json", "csv", "text")
        r = int(args.args[0]) if args.args else 2
        m = ck.free_group_matrix(r)
        if args.emit == "json":
            return _dump(m.tolist()), 0
        sep = "," if args.emit == "csv" else " "
        return "\n".join(sep.join(str(int(v)) for v in row) for row in m), 0
    raise UsageError(f"unknown ck action {act}")


def _diagram_source(args, pres, rng):
    if args.diagram:
        with open(args.diagram) as fh:
            d = sg.diagram_from_json(pres, fh.read())
        problems = sg.diagram_problems(pres, d)
        if problems:
            raise UsageError("invalid diagram: " + "; ".join(problems))
        return d
    label = parse_label(args.label) if args.label else None
    return sg.random_diagram(pres, args.depth, rng, label)


def cmd_boundary(args):
    _need(args, "json", "text")
    pres = load_presentation(args)
    rng = random.Random(args.seed)
    act = args.action
    if act == "witness":
        v = _word(pres, args.v)
        source = parse_label(args.source or "0^-1:1")
        k = sg.minimality_witness(pres, v, source)
        checked, failures = sg.check_witness(pres, v, source, k, args.depth)
        status = 0 if failures == 0 else 1
        if args.emit == "json":
            return _dump({"v": str(v), "source": str(source), "k": str(k), "checked": checked, "failures": failures}), status
        return f"k = {k} ({checked} diagrams, {failures} failures)", status
    if act == "overlap":
        s = _word(pres, args.s)
        i = args.i
        if args.diagram:
            omega = _diagram_source(args, pres, rng)
        else:
            omega = sg.random_diagram(pres, max(args.depth, i + s.length + 2), rng)
        try:
            val = sg.amenability_overlap(pres, omega, s, i)
        except TriangleBuildingError as exc:
            raise UsageError(str(exc)) from None
        if args.emit == "json":
            return _dump({"s": str(s), "i": i, "overlap": str(val), "value": float(val)}), 0
        return str(val), 0
    if act == "extensions":
        d = _diagram_source(args, pres, rng)
        exts = sg.enumerate_extensions(pres, d)
        if args.emit == "json":
            return "[" + ", ".join(sg.diagram_to_json(e) for e in exts) + "]", 0
        return f"{len(exts)} extensions of a depth-{d.depth} diagram with base {d.base_label}", 0
    raise UsageError(f"unknown boundary action {act}")


def cmd_apartment(args):
    _need(args, "json", "dot", "text")
    pres = load_presentation(args)
    try:
        patch = grow_apartment(pres, args.t_depth, args.seed, args.radius)
    except BacktrackExhausted as exc:
        print(f"backtracking exhausted: {exc}", file=sys.stderr)
        return "", 1
    status = 0 if patch.verified() else 1
    if args.emit == "json":
        return patch.to_json(), status
    if args.emit == "dot":
        chambers = [bl.chamber_from_vertices(pres, vs) for vs in patch.chambers(pres)]
        return bl.chamber_graph_to_dot(pres, chambers).rstrip("\n"), status
    lines = [f"case {patch.case}, radius {patch.radius}, {len(patch.vertices)} vertices, tip {patch.tip}"]
    for b in patch.boundary:
        lines.append(f"sector {b.frame}: label {b.label}, depth {b.depth}, contains seed {b.contains_seed}")
    return "\n".join(lines), status


def cmd_verify(args):
    _need(args, "json", "text")
    pres = load_presentation(args)
    results = run_all(pres, args.seed)
    status = 0 if all(r.ok for r in results) else 1
    if args.emit == "json":
        return _dump([{"check": r.name, "ok": r.ok, "detail": r.detail} for r in results]), status
    return "\n".join(r.line() for r in results), status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=2)
    common.add_argument("--presentation", metavar="FILE", help="presentation JSON instead of the built-in one")
    common.add_argument("--emit", choices=EMITS, default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None)

    parser = argparse.ArgumentParser(prog="triangle-building", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plane", parents=[common])
    p.set_defaults(func=cmd_plane)

    p = sub.add_parser("presentation", parents=[common])
    p.add_argument("action", choices=("verify", "canonical", "enumerate"))
    p.set_defaults(func=cmd_presentation)

    p = sub.add_parser("word", parents=[common])
    p.add_argument("action", choices=("reduce",))
    p.add_argument("word")
    p.set_defaults(func=cmd_word)

    p = sub.add_parser("ball", parents=[common])
    p.add_argument("--radius", type=int, default=2)
    p.set_defaults(func=cmd_ball)

    for name, func in (("residue", cmd_residue), ("hexagons", cmd_hexagons)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--at", default="e", help="centre vertex as a word")
        p.set_defaults(func=func)

    p = sub.add_parser("ck", parents=[common])
    p.add_argument("action", choices=("matrices", "aplus", "aminus", "decompose", "weakcomm", "freegroup"))
    p.add_argument("args", nargs="*")
    p.set_defaults(func=cmd_ck)

    p = sub.add_parser("boundary", parents=[common])
    p.add_argument("action", choices=("witness", "overlap", "extensions"))
    p.add_argument("--v", default="e")
    p.add_argument("--source", help="source chamber label a^-1:b")
    p.add_argument("--s", default="e")
    p.add_argument("--i", type=int, default=10)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--label")
    p.add_argument("--diagram", metavar="FILE")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("apartment", parents=[common])
    p.add_argument("action", choices=("grow",))
    p.add_argument("--t-depth", type=int, default=1)
    p.add_argument("--radius", type=int, default=None)
    p.set_defaults(func=cmd_apartment)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("action", choices=("all",))
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "boundary" and args.depth is None:
        args.depth = {"extensions": 2, "overlap": 0}.get(args.action)
    print(f"seed {args.seed}", file=sys.stderr)
    try:
        text, status = args.func(args)
    except (UsageError, OSError, ValueError, SearchBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TriangleBuildingError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if text:
        print(text, file=out)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
