"""Command-line front end.

Every subcommand prints a short summary and, when an output path is given
(``--out`` or the ``CUBECOLOR_OUTDIR`` directory), writes JSON or CSV there.
Exit codes: 0 ok, 2 usage, 3 instance too large, 4 audit failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .asymptotics import (
    eg_conjecture_value,
    f_q,
    ideal_bound_below_theorem,
    ideal_upper_bound,
    lemma_mp_bound,
    ratio_report,
)
from .bounds import (
    boundary_profile,
    compositions,
    compositions_bounded,
    compositions_count,
    connected_subsets,
    min_vertex_boundary,
    rooted_two_linked_census,
    sapozhenko_census,
)
from .config import Config, load_config
from .counting import Coloring, count_colorings, count_independent_sets, coloring_tuples
from .cube import Cube, Side
from .entropy import (
    FiniteDistribution,
    decomposition_audit,
    neighborhood_cover,
    shearer_check,
    split_neighborhood_ensembles,
    t_u_terms,
)
from .errors import AuditFailure, InstanceTooLarge
from .phases import MAIN, PHASES, classify, fstar_census
from .templates import (
    canonical_sf_pair,
    decompose,
    fixed_template_classes,
    fixed_vertices,
    sf_conditions,
    template_cost_ledger,
    verify_monochromatic,
)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_AUDIT = 0, 2, 3, 4
OUTDIR_ENV = "CUBECOLOR_OUTDIR"


class UsageError(Exception):
    pass


def parse_d_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def _vertex_list(text: str, cube: Cube, default) -> frozenset:
    text = text.strip().lower()
    if text in ("", "none", "empty"):
        return frozenset()
    if text in ("odd", "o"):
        return cube.odd
    if text in ("even", "e"):
        return cube.even
    if text == "default":
        return default
    return cube.check(int(x) for x in text.split(","))


# output ---------------------------------------------------------------------

def _output_path(args) -> Path | None:
    if args.out:
        return Path(args.out)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir:
        return Path(outdir) / ("%s.json" % args.command)
    return None


def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        keys = list(rows[0])
        for r in rows[1:]:
            keys += [k for k in r if k not in keys]
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(r.get(k, "")) for k in keys})
    return buf.getvalue()


def _cell(x):
    if isinstance(x, (list, tuple, dict)):
        return json.dumps(x, sort_keys=True)
    return x


def emit(args, payload: dict, rows: list[dict] | None = None) -> None:
    path = _output_path(args)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == ".csv":
        path.write_text(_csv_text(rows if rows is not None else [payload]))
        return
    doc = dict(payload)
    doc["command"] = args.command
    doc["version"] = __version__
    if not args.no_timestamp:
        doc["generated_at"] = datetime.now(timezone.utc).isoformat()
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")


# subcommands ----------------------------------------------------------------

def cmd_count(args, cfg: Config) -> int:
    cube = Cube(args.d)
    res = count_colorings(cube, args.q, method=args.method, workers=cfg.workers)
    print(res.value)
    emit(args, res.to_dict(timestamp=not args.no_timestamp))
    return EXIT_OK


def cmd_isets(args, cfg: Config) -> int:
    cube = Cube(args.d)
    methods = ["exhaustive", "product"] if args.method == "both" else [args.method]
    results = [count_independent_sets(cube, m, workers=cfg.workers) for m in methods]
    values = {r.value for r in results}
    print(" ".join("%s=%d" % (r.method, r.value) for r in results))
    emit(args, {"d": args.d, "results": [r.to_dict(timestamp=not args.no_timestamp) for r in results],
                "agree": len(values) == 1})
    if len(values) != 1:
        return EXIT_AUDIT
    return EXIT_OK


def cmd_phases(args, cfg: Config) -> int:
    if args.coloring:
        f = Coloring.from_string(args.coloring)
        rep = classify(f, cfg.threshold)
        print("phase=%s flaws=%d ideal=%s in_fstar=%s" % (
            rep.phase, rep.flaw_count, rep.ideal, rep.in_fstar))
        emit(args, rep.to_dict())
        return EXIT_OK
    if args.d is None:
        raise UsageError("phases needs --coloring or --d")
    cube = Cube(args.d)
    from .counting import enumerate_colorings

    by_phase = {str(p): 0 for p in PHASES}
    total = no_phase = ideal = fstar = 0
    for f in enumerate_colorings(cube, 4):
        rep = classify(f, cfg.threshold)
        total += 1
        if rep.phase is None:
            no_phase += 1
            continue
        by_phase[str(rep.phase)] += 1
        ideal += rep.ideal
        fstar += rep.in_fstar
    summary = {"d": args.d, "total": total, "no_main_phase": no_phase, "ideal": ideal,
               "in_fstar": fstar, "by_phase": by_phase}
    print("d=%d total=%d ideal=%d in_fstar=%d no_main_phase=%d" % (args.d, total, ideal, fstar, no_phase))
    emit(args, summary)
    return EXIT_OK


def _template_payload(f: Coloring, cfg: Config) -> tuple[dict, bool]:
    cube = f.cube
    t = decompose(f, cfg.threshold, cfg.cutoff)
    mono = verify_monochromatic(f, t)
    sf = []
    pairs = []
    for P in t.large_P_components():
        pair = canonical_sf_pair(t, P, cube)
        pairs.append(pair)
        sf.append({"target": sorted(P), "S": sorted(pair.S), "F": sorted(pair.F),
                   "conditions": sf_conditions(pair, t, cube)})
    ledger = template_cost_ledger(t, cube, pairs, cfg.constants)
    payload = {"coloring": str(f), "template": t.to_dict(), "monochromatic": mono.to_dict(),
               "sf_pairs": sf, "ledger": ledger}
    return payload, mono.passed


def cmd_template(args, cfg: Config) -> int:
    if args.coloring:
        f = Coloring.from_string(args.coloring)
    else:
        members = fstar_census(Cube(args.d), cfg.threshold)
        if not 0 <= args.id < len(members):
            raise UsageError("census id %d out of range (F* has %d members)" % (args.id, len(members)))
        f = members[args.id]
    payload, ok = _template_payload(f, cfg)
    t = payload["template"]
    print("coloring=%s A=%s A_hat=%s P=%s Pbar=%s Phat=%s monochromatic=%s" % (
        f, t["A"], t["A_hat"], t["P"], t["Pbar"], t["Phat"], "pass" if ok else "FAIL"))
    emit(args, payload)
    return EXIT_OK if ok else EXIT_AUDIT


def cmd_audit(args, cfg: Config) -> int:
    cube = Cube(args.d)
    tol = cfg.entropy_tol
    ok = True
    if args.ensemble == "uniform":
        cols = coloring_tuples(cube, 4)
        default_U, default_V = cube.odd, frozenset()
        label = "uniform"
    else:
        classes = list(fixed_template_classes(fstar_census(cube, cfg.threshold), cfg.threshold, cfg.cutoff).values())
        if not 0 <= args.id < len(classes):
            raise UsageError("template class id %d out of range (%d classes)" % (args.id, len(classes)))
        members = classes[args.id]
        t = decompose(members[0], cfg.threshold, cfg.cutoff)
        cols = [f.colors for f in members]
        default_U, default_V = t.G | t.G_hat, fixed_vertices(t)
        label = "fixed-template class %d" % args.id
    U = _vertex_list(args.U, cube, default_U)
    V = _vertex_list(args.V, cube, default_V)
    ens = FiniteDistribution.uniform(cols)
    audit = decomposition_audit(ens, U, V, cube, tol)
    ok &= audit.holds
    if audit.n2u and audit.n2u["applicable"]:
        ok &= bool(audit.n2u["holds"])
    payload = {"d": args.d, "ensemble": label, "size": len(cols), "U": sorted(U), "V": sorted(V),
               "audit": audit.to_dict()}
    evens, cover = neighborhood_cover(cube)
    sh = shearer_check(ens.map(lambda f: tuple(f[v] for v in evens)), cover, tol)
    ok &= sh.holds
    payload["Shearer"] = {"lhs": sh.lhs, "rhs": sh.rhs, "holds": sh.holds}
    tu = []
    for u in sorted(cube.odd):
        terms = t_u_terms(ens, u, cube)
        good = terms.main_part <= 2 + tol
        ok &= good
        tu.append({"u": u, "T": terms.value, "main_part": terms.main_part,
                   "image_term": terms.h_image / cube.d, "Tu_main_le_2": good})
    payload["Tu"] = tu
    if args.ensemble == "uniform":
        worst = None
        for u in sorted(cube.odd):
            for X, Y, sub in split_neighborhood_ensembles(cols, u, cube, MAIN.agrees):
                m = t_u_terms(sub, u, cube).main_part
                worst = m if worst is None else max(worst, m)
        good = worst is None or worst <= 1 + tol
        ok &= good
        payload["Tuagain"] = {"max_main_part": worst, "holds": good}
    print("H(f)=%.12f rhs=%.12f slack=%.3e shearer=%s -> %s" % (
        audit.lhs, audit.rhs, audit.slack, sh.holds, "pass" if ok else "FAIL"))
    payload["passed"] = ok
    emit(args, payload)
    if not ok:
        raise AuditFailure("entropy audit failed")
    return EXIT_OK


def _bounds_rows(args, cfg: Config) -> list[dict]:
    lemma = args.lemma
    rows = []
    if lemma == "compositions":
        for m in range(1, args.m + 1):
            exact = sum(1 for _ in compositions(m))
            rows.append({"d": "", "params": "m=%d" % m, "count": exact,
                         "bound": compositions_count(m), "constant": ""})
    elif lemma == "compositions-bounded":
        if args.m < 2:
            raise UsageError("compositions-bounded needs m >= 2")
        for b in range(1, args.m // 2 + 1):
            r = compositions_bounded(args.m, b)
            rows.append({"d": "", "params": "m=%d,b=%d" % (args.m, b), "count": r.count,
                         "bound": repr(r.bound), "constant": "", "holds": r.holds})
    elif lemma == "connected":
        cube = Cube(args.d)
        for link in ("adjacency", "two_linked"):
            for n in range(1, args.n + 1):
                r = connected_subsets(cube, args.root, n, link)
                rows.append({"d": args.d, "params": "root=%d,n=%d,linkage=%s" % (args.root, n, link),
                             "count": r.count, "bound": repr(r.tree_bound), "constant": r.delta,
                             "holds": r.holds})
    elif lemma == "rooted":
        cube = Cube(args.d)
        Y = _vertex_list(args.Y, cube, cube.even)
        r = rooted_two_linked_census(cube, Y, args.x, args.b, cfg.c)
        rows.append({"d": args.d, "params": "|Y|=%d,x=%d,b=%d" % (len(Y), args.x, args.b),
                     "count": r.count, "bound": repr(r.bound), "constant": cfg.c})
    elif lemma == "isoperimetry":
        cube = Cube(args.d)
        side = Side(args.side)
        for a in range(1, cube.N // 2 + 1):
            r = min_vertex_boundary(cube, a, side)
            rows.append({"d": args.d, "params": "a=%d,side=%s" % (a, side.value), "count": r.min,
                         "bound": r.ball_value, "constant": "", "sandwich_min": r.sandwich_min,
                         "attained_by_sandwich": r.attained_by_sandwich})
    elif lemma == "sapozhenko":
        cube = Cube(args.d)
        prof = boundary_profile(cube)
        for g, b in sorted(prof):
            r = sapozhenko_census(cube, g, b, cfg.zeta, prof)
            rows.append({"d": args.d, "params": "g=%d,b=%d" % (g, b), "count": r.count_H,
                         "bound": repr(2.0 ** r.lemma_bounds["H_log2"]), "constant": cfg.zeta,
                         "count_G": r.count_G, "bound_G": repr(2.0 ** r.lemma_bounds["G_log2"])})
    elif lemma == "main-lemma":
        cube = Cube(args.d)
        r = lemma_mp_bound(args.g, args.g_hat, cube, cfg.zeta)
        rows.append({"d": args.d, "params": "g=%d,g_hat=%d" % (args.g, args.g_hat), "count": "",
                     "bound": "2^%s" % r.to_dict()["log2"], "constant": cfg.zeta,
                     "branch": r.branch, "aggregate": r.to_dict()["aggregate"]})
    elif lemma == "ideal-bound":
        for d in parse_d_range(args.d_range):
            cube = Cube(d)
            lv = ideal_upper_bound(cube)
            rows.append({"d": d, "params": "", "count": lv.exact, "bound": "6e*2^%d" % cube.N,
                         "constant": "", "below": ideal_bound_below_theorem(cube)})
    elif lemma == "eg":
        for d in parse_d_range(args.d_range):
            lv = eg_conjecture_value(args.q, Cube(d))
            rows.append({"d": d, "params": "q=%d" % args.q, "count": "",
                         "bound": "2^%s" % lv.to_dict()["log2"], "constant": "",
                         "f_q": str(f_q(args.q, d))})
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError("unknown lemma %r" % lemma)
    return rows


def cmd_bounds(args, cfg: Config) -> int:
    rows = _bounds_rows(args, cfg)
    for r in rows:
        print(", ".join("%s=%s" % (k, v) for k, v in r.items()))
    emit(args, {"lemma": args.lemma, "rows": rows}, rows)
    failed = [r for r in rows if r.get("holds") is False or r.get("below") is False
              or r.get("attained_by_sandwich") is False]
    return EXIT_AUDIT if failed else EXIT_OK


def cmd_census_fstar(args, cfg: Config) -> int:
    cube = Cube(args.d)
    members = fstar_census(cube, cfg.threshold)
    exceptional = sum(decompose(f, cfg.threshold, cfg.cutoff).exceptional for f in members)
    print("d=%d |F*|=%d exceptional=%d" % (args.d, len(members), exceptional))
    emit(args, {"d": args.d, "size": len(members), "exceptional": exceptional,
                "members": [str(f) for f in members]})
    return EXIT_OK


def cmd_report(args, cfg: Config) -> int:
    rows = ratio_report(parse_d_range(args.d), args.q, cfg.threshold, cfg.workers)
    for r in rows:
        print("d=%s exact=%s ideal=%s theorem=%s" % (r["d"], r["exact"] or "-", r["ideal_census"] or "-",
                                                   r["theorem"] or "-"))
    emit(args, {"q": args.q, "rows": rows}, rows)
    return EXIT_OK


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (.json or .csv)")
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--no-timestamp", action="store_true", help="omit timing and timestamp fields")
    common.add_argument("--workers", type=int, help="parallelism degree")
    common.add_argument("--threshold-base", type=float, help="main-phase threshold is base**d")
    common.add_argument("--cutoff", type=float, help="small/large component cutoff")
    common.add_argument("--zeta", type=float, help="constant standing in for Omega(.)")
    common.add_argument("--c", type=float, dest="c_const", help="constant standing in for O(.)")
    common.add_argument("--entropy-tol", type=float, help="tolerance on entropy inequalities")

    p = argparse.ArgumentParser(prog="cubecolor", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("count", parents=[common], help="count proper q-colorings of Q_d")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, default=4)
    s.add_argument("--method", choices=["auto", "brute", "bruteforce", "product"], default="auto")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("isets", parents=[common], help="count independent sets of Q_d")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--method", choices=["exhaustive", "product", "both"], default="both")
    s.set_defaults(func=cmd_isets)

    s = sub.add_parser("phases", parents=[common], help="classify one coloring or census all")
    s.add_argument("--coloring", help="2^d color digits in vertex order")
    s.add_argument("--d", type=int)
    s.set_defaults(func=cmd_phases)

    s = sub.add_parser("template", parents=[common], help="template decomposition of an F* coloring")
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--id", type=int, default=0, help="index into the F* census")
    s.add_argument("--coloring")
    s.set_defaults(func=cmd_template)

    s = sub.add_parser("audit-entropy", parents=[common], help="entropy decomposition audit")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--ensemble", choices=["uniform", "template"], default="uniform")
    s.add_argument("--id", type=int, default=0, help="fixed-template class index")
    s.add_argument("--U", default="default", help="odd|none|default|comma list")
    s.add_argument("--V", default="default", help="none|default|comma list")
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("bounds", parents=[common], help="lemma censuses and bound evaluations")
    s.add_argument("--lemma", required=True, choices=[
        "compositions", "compositions-bounded", "connected", "rooted", "isoperimetry",
        "sapozhenko", "main-lemma", "ideal-bound", "eg"])
    s.add_argument("--m", type=int, default=20)
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--d-range", default="1..4")
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--root", type=int, default=0)
    s.add_argument("--Y", default="even")
    s.add_argument("--x", type=int, default=2)
    s.add_argument("--b", type=int, default=1)
    s.add_argument("--g", type=int, default=0)
    s.add_argument("--g-hat", type=int, default=0)
    s.add_argument("--side", choices=["even", "odd"], default="even")
    s.add_argument("--q", type=int, default=4)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("census-fstar", parents=[common], help="exhaustive F* census")
    s.add_argument("--d", type=int, default=3)
    s.set_defaults(func=cmd_census_fstar)

    s = sub.add_parser("report", parents=[common], help="exact vs asymptotic comparison table")
    s.add_argument("--d", default="1..3", help="range such as 1..4 or list 1,2,3")
    s.add_argument("--q", type=int, default=4)
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config).update(
            threshold_base=args.threshold_base, cutoff=args.cutoff, zeta=args.zeta, c=args.c_const,
            entropy_tol=args.entropy_tol, workers=args.workers)
        return args.func(args, cfg)
    except InstanceTooLarge as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INFEASIBLE
    except AuditFailure as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_AUDIT
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
