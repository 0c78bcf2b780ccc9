"""Command-line interface.

Loop arguments are files in the loop text format or catalog names
(``Z27``, ``Z9xZ3``, ``Z3^3``, ``Heis3``, ``Z9:Z3``, ``B1``..``B10``).
Progress goes to stderr; stdout is deterministic.

Exit codes: 0 success, 1 a verification failed or input was invalid,
2 usage error, 3 a search hit ``--timeout-secs`` (its resume file is kept).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import report
from .loop import Loop, LoopError, format_loop, read_loop, write_loop

EXIT_OK, EXIT_FAIL, EXIT_TIMEOUT = 0, 1, 3


class VerificationError(RuntimeError):
    pass


def _load(arg: str) -> Loop:
    from .constructions import CATALOG_NAMES, build
    path = Path(arg)
    if path.exists():
        return read_loop(path)
    if arg in CATALOG_NAMES:
        return build(arg)
    raise LoopError(f"{arg!r} is neither a file nor a catalog name")


def _emit(data, as_json: bool, text: str) -> None:
    if as_json:
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _progress(label: str):
    def show(done, total):
        print(f"{label}: {done}/{total} subtrees", file=sys.stderr, flush=True)
    return show


def _check_bol(loops) -> None:
    for q in loops:
        Loop(q.table)   # re-validate the table from scratch
        if not q.is_right_bol():
            raise VerificationError(f"{q.name or 'a loop'} is not right Bol")


def _write_reps(out_dir: str | None, loops, stem: str) -> None:
    if out_dir is None:
        return
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, q in enumerate(loops, 1):
        write_loop(q, out / f"{stem}-{i:02d}.txt")


# -- subcommands -----------------------------------------------------------------------


def cmd_construct(args) -> int:
    from .constructions import build
    q = build(args.name)
    _check_bol([q])
    text = format_loop(q)
    if args.emit_dir:
        out = Path(args.emit_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.name.replace(':', '_').replace('^', '')}.txt").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    from .invariants import center
    try:
        q = _load(args.loop)
    except LoopError as exc:
        _emit({"valid": False, "error": str(exc)}, args.json, f"invalid: {exc}\n")
        return EXIT_FAIL
    info = {
        "valid": True, "order": q.n,
        "right_bol": q.is_right_bol(), "left_bol": q.is_left_bol(),
        "moufang": q.is_moufang(), "associative": q.is_associative(),
        "commutative": q.is_commutative(), "center_order": len(center(q)),
    }
    text = "".join(f"{k.replace('_', ' ')}: {report._cell(v)}\n" for k, v in info.items())
    _emit(info, args.json, text)
    return EXIT_OK


def cmd_profile(args) -> int:
    from .invariants import profile
    tagger = report._bruck_tagger()
    profiles = {}
    for arg in args.loops:
        q = _load(arg)
        profiles[q.name or arg] = profile(q, bruck_tagger=tagger)
    if args.json:
        flat = []
        for name, p in profiles.items():
            d = p.to_dict()
            d.pop("aut_generators")
            flat.append({"name": name, **d})
        _emit(flat[0] if len(flat) == 1 else flat, True, "")
    elif args.table:
        sys.stdout.write(report.render_table1(profiles))
    else:
        for name, p in profiles.items():
            sys.stdout.write(f"# {name}\n")
            for key, label in report.TABLE1_ROWS.items():
                sys.stdout.write(f"{label}: {report._cell(getattr(p, key))}\n")
    return EXIT_OK


def cmd_classify(args) -> int:
    from .classify import up_to_isomorphism
    loops = [_load(a) for a in args.loops]
    reps, member = up_to_isomorphism(loops)
    names = [q.name or a for q, a in zip(loops, args.loops)]
    data = {
        "representatives": [names[member.index(k)] for k in range(len(reps))],
        "membership": dict(zip(names, member)),
    }
    lines = [f"{len(reps)} isomorphism classes"]
    for k, rep in enumerate(data["representatives"]):
        members = [n for n, m in zip(names, member) if m == k]
        lines.append(f"class {k}: {rep}  <- {', '.join(members)}")
    _emit(data, args.json, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_isotopy(args) -> int:
    from .classify import find_isotopy, principal_isotope
    a, b = _load(args.first), _load(args.second)
    w = find_isotopy(a, b)
    if w is None:
        _emit({"isotopic": False}, args.json, "not isotopic\n")
        return EXIT_OK
    iso = principal_isotope(a, w.a, w.b)
    if not all(b.table[w.bijection[x], w.bijection[y]] == w.bijection[iso.table[x, y]]
               for x in range(a.n) for y in range(a.n)):
        raise VerificationError("isotopy witness does not verify")
    phi = [int(v) for v in w.bijection]
    _emit({"isotopic": True, "a": w.a, "b": w.b, "phi": phi}, args.json,
          f"isotopic: a={w.a} b={w.b}\nphi: {' '.join(map(str, phi))}\n")
    return EXIT_OK


def _search_central(args) -> int:
    from .classify import identify
    from .cocycles import central_extensions_in_variety
    from .invariants import center, is_centrally_nilpotent
    classes = central_extensions_in_variety(args.p)
    _check_bol(classes)
    rows = []
    for q in classes:
        if len(center(q)) < args.p or not is_centrally_nilpotent(q):
            raise VerificationError("an extension has too small a center")
        rows.append({"name": identify(q) if q.n == 27 else None,
                     "associative": q.is_associative(), "center_order": len(center(q)),
                     "exponent": q.exponent()})
    groups = sum(r["associative"] for r in rows)
    data = {"p": args.p, "classes": len(rows), "groups": groups,
            "nonassociative": len(rows) - groups,
            "centrally_nilpotent_census": len(rows) + 1, "loops": rows}
    lines = [f"p={args.p}: {len(rows)} classes ({groups} groups, {len(rows) - groups} nonassociative)",
             f"centrally nilpotent right Bol loops of order p^3 (with the cyclic group): {len(rows) + 1}"]
    for i, r in enumerate(rows, 1):
        lines.append(f"{i:2d}  {r['name'] or '-':6s} group={report._cell(r['associative'])} "
                     f"|Z|={r['center_order']} exp={r['exponent']}")
    _emit(data, args.json, "\n".join(lines) + "\n")
    _write_reps(args.emit_dir, classes, f"central-ext-p{args.p}")
    return EXIT_OK


def _resume_path(args, label: str) -> Path:
    base = Path(args.emit_dir) if args.emit_dir else Path.cwd()
    base.mkdir(parents=True, exist_ok=True)
    return base / f"{label}.resume.json"


def _search_trivial(args) -> int:
    from .classify import identify, up_to_isomorphism
    from .modelsearch import justify_trivial_center_coverage, model_search, trivial_center_spec
    spec = trivial_center_spec(args.case)
    ckpt = _resume_path(args, spec.label)
    found = model_search(spec, jobs=args.jobs, checkpoint=ckpt, timeout=args.timeout_secs,
                         progress=_progress(spec.label))
    _check_bol(found)
    reps, _ = up_to_isomorphism(found)
    coverage = justify_trivial_center_coverage(reps)
    if not all(r.ok for r in coverage):
        raise VerificationError("coverage check failed for a trivial-center loop")
    names = [identify(q) for q in reps]
    nonassoc = sum(not q.is_associative() for q in reps)
    data = {"case": args.case, "models": len(found), "classes": len(reps),
            "nonassociative": nonassoc, "loops": names,
            "coverage": [vars(r) | {"name": n} for r, n in zip(coverage, names)]}
    lines = [f"case {args.case}: {len(found)} models, {len(reps)} classes, {nonassoc} nonassociative",
             "classes: " + ", ".join(n or "?" for n in names)]
    for r, n in zip(coverage, names):
        if r.center_order == 1:
            lines.append(f"trivial center {n}: |Q'|={r.derived_order}, "
                         f"|Q' & N_lambda|={r.derived_meets_left_nucleus}, Q'={r.derived_type}")
    _emit(data, args.json, "\n".join(lines) + "\n")
    _write_reps(args.emit_dir, reps, spec.label)
    ckpt.unlink(missing_ok=True)
    return EXIT_OK


def cmd_search(args) -> int:
    return _search_central(args) if args.kind == "central-ext" else _search_trivial(args)


def _figures_and_files(args, stem, text, tsv, data, draw) -> None:
    if args.emit_dir:
        report.write_outputs(args.emit_dir, stem, text, tsv, data)
        draw(Path(args.emit_dir))


def cmd_table1(args) -> int:
    from .constructions import BOL_NAMES, build
    profiles = report.table1_data()
    _check_bol([build(n) for n in BOL_NAMES])
    text, data = report.render_table1(profiles), report.table1_json(profiles)
    _emit(data, args.json, text)
    _figures_and_files(args, "table1", text, report.render_table1(profiles, "\t"), data,
                       lambda d: (report.table1_figure(profiles, d / "table1.png"),
                                  report.cayley_figure({n: build(n) for n in BOL_NAMES},
                                                       d / "cayley_tables.png")))
    return EXIT_OK


def cmd_table2(args) -> int:
    t = report.table2_data()
    text, data = report.render_table2(t), report.table2_json(t)
    _emit(data, args.json, text)
    _figures_and_files(args, "table2", text, report.render_table2(t, "\t"), data,
                       lambda d: report.table2_figure(t, d / "table2.png"))
    return EXIT_OK


def cmd_classify_all(args) -> int:
    base = Path(args.emit_dir) if args.emit_dir else Path.cwd()
    c = report.classify_all(jobs=args.jobs, checkpoint_dir=base, timeout=args.timeout_secs,
                            progress=lambda case, a, b: _progress(case)(a, b))
    text, data = report.render_census(c), c.to_dict()
    _emit(data, args.json, text)
    _figures_and_files(args, "census", text, report.render_census(c, "\t"), data,
                       lambda d: report.census_figure(c, d / "census.png"))
    for case in ("ea", "cyc"):
        (base / f"trivial-center-{case}.resume.json").unlink(missing_ok=True)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bolloops", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress details to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, *, json_=True, emit=False, jobs=False, timeout=False):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        if json_:
            sp.add_argument("--json", action="store_true", help="machine-readable output")
        if emit:
            sp.add_argument("--emit-dir", metavar="DIR", help="write outputs and figures here")
        if jobs:
            sp.add_argument("--jobs", type=_positive, default=1, help="parallel subtree workers")
        if timeout:
            sp.add_argument("--timeout-secs", type=float, default=None,
                            help="stop between subtrees after this long; progress is kept")
        return sp

    sp = add("construct", cmd_construct, "print a catalog loop", json_=False, emit=True)
    sp.add_argument("name")
    sp = add("validate", cmd_validate, "check a loop file")
    sp.add_argument("loop")
    sp = sub.add_parser("profile", help="the table1 invariants of loops")
    sp.set_defaults(func=cmd_profile)
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--table", action="store_true")
    sp.add_argument("loops", nargs="+")
    sp = add("classify", cmd_classify, "sort loops into isomorphism classes")
    sp.add_argument("loops", nargs="+")
    sp = add("isotopy", cmd_isotopy, "test two loops for isotopy")
    sp.add_argument("first")
    sp.add_argument("second")

    sp = sub.add_parser("search", help="run a classification search")
    kinds = sp.add_subparsers(dest="kind", required=True)
    ce = kinds.add_parser("central-ext", help="right Bol central extensions of Zp by Zp x Zp")
    ce.set_defaults(func=cmd_search)
    ce.add_argument("--p", type=int, required=True, choices=(3, 5, 7))
    tc = kinds.add_parser("trivial-center", help="model search for the trivial-center loops")
    tc.set_defaults(func=cmd_search)
    tc.add_argument("--case", required=True, choices=("ea", "cyc"))
    tc.add_argument("--timeout-secs", type=float, default=None)
    for k in (ce, tc):
        k.add_argument("--json", action="store_true")
        k.add_argument("--emit-dir", metavar="DIR")
        k.add_argument("--jobs", type=_positive, default=1)

    add("table1", cmd_table1, "invariants of B1..B10", emit=True)
    add("table2", cmd_table2, "right multiplication groups of B1..B10", emit=True)
    add("classify-all", cmd_classify_all, "all right Bol loops of order 27",
        emit=True, jobs=True, timeout=True)
    return p


def main(argv=None) -> int:
    from .modelsearch import SearchTimeout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except SearchTimeout as exc:
        print(f"timeout: {exc}; rerun the same command to resume", file=sys.stderr)
        return EXIT_TIMEOUT
    except (LoopError, VerificationError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
