"""Tables, census and figures for the right Bol loops of order 27.

Each ``*_data`` function computes; ``render_*`` turns the result into an
aligned text table, a tab-separated table or a JSON-ready dict; and
``*_figure`` draws it with matplotlib into a file.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classify import identify, up_to_isomorphism
from .constructions import BOL_NAMES, build, standard_loops
from .invariants import (TABLE1_ROWS, InvariantProfile, center, central_nilpotency,
                         group_as_loop, profile, right_multiplication_group, rmlt_profile)
from .loop import Loop, cyclic_group

TABLE2_ROWS = {
    "rmlt_order": "|G|",
    "rmlt_exponent": "exp(G)",
    "rmlt_center_order": "|Z(G)|",
}


# -- table1 ------------------------------------------------------------------------------


def _bruck_tagger():
    catalog = standard_loops(check=False)
    pool = {name: catalog[name] for name in ("Z3^3", "B5", "B6", "B7", "B8")}

    def tag(q: Loop) -> str | None:
        return identify(q, pool) or identify(q, catalog)
    return tag


def table1_data(names=BOL_NAMES) -> dict[str, InvariantProfile]:
    tagger = _bruck_tagger()
    return {name: profile(build(name), bruck_tagger=tagger) for name in names}


def _cell(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    return "-" if value is None else str(value)


def _grid(header: list[str], rows: list[list[str]], sep: str | None = None) -> str:
    if sep is not None:
        return "\n".join(sep.join(r) for r in [header] + rows) + "\n"
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = []
    for r in [header] + rows:
        first = r[0].ljust(widths[0])
        rest = [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join([first] + rest).rstrip())
    return "\n".join(lines) + "\n"


def render_table1(profiles: dict[str, InvariantProfile], sep: str | None = None) -> str:
    names = list(profiles)
    rows = [[label] + [_cell(getattr(profiles[n], key)) for n in names]
            for key, label in TABLE1_ROWS.items()]
    return _grid(["Q"] + names, rows, sep)


def table1_json(profiles: dict[str, InvariantProfile]) -> dict:
    names = list(profiles)
    return {
        "columns": names,
        "rows": {key: [getattr(profiles[n], key) for n in names] for key in TABLE1_ROWS},
        "labels": dict(TABLE1_ROWS),
    }


# -- table2 ------------------------------------------------------------------------------


@dataclass
class Table2:
    columns: list[str]
    rows: dict[str, list[int]]
    groups: list[list[str]]     # loops whose right multiplication groups are isomorphic


def table2_data(names=BOL_NAMES) -> Table2:
    rows = {key: [] for key in TABLE2_ROWS}
    groups = []
    for name in names:
        q = build(name)
        order, exp, zc = rmlt_profile(q)
        rows["rmlt_order"].append(order)
        rows["rmlt_exponent"].append(exp)
        rows["rmlt_center_order"].append(zc)
        groups.append(group_as_loop(right_multiplication_group(q)))
    _, member = up_to_isomorphism(groups)
    classes: dict[int, list[str]] = {}
    for name, k in zip(names, member):
        classes.setdefault(k, []).append(name)
    return Table2(list(names), rows, list(classes.values()))


def render_table2(t: Table2, sep: str | None = None) -> str:
    rows = [[label] + [str(v) for v in t.rows[key]] for key, label in TABLE2_ROWS.items()]
    cls = {name: i + 1 for i, members in enumerate(t.groups) for name in members}
    rows.append(["RMlt class"] + [str(cls[n]) for n in t.columns])
    return _grid(["Q"] + t.columns, rows, sep)


def table2_json(t: Table2) -> dict:
    return {"columns": t.columns, "rows": t.rows, "rmlt_isomorphism_classes": t.groups,
            "labels": dict(TABLE2_ROWS)}


# -- census ------------------------------------------------------------------------------


@dataclass
class ClassRow:
    name: str | None
    source: str
    associative: bool
    commutative: bool
    center_order: int
    nilpotency_class: int | None
    exponent: int
    order3_count: int


@dataclass
class Census:
    classes: list[ClassRow] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    sources: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"counts": self.counts, "sources": self.sources,
                "classes": [vars(c) for c in self.classes]}


def census(loops: list[Loop], sources: list[str]) -> Census:
    """Reduce ``loops`` to isomorphism classes and summarise them."""
    reps, member = up_to_isomorphism(loops)
    first_source = {}
    for k, src in zip(member, sources):
        first_source.setdefault(k, src)
    rows = []
    for k, q in enumerate(reps):
        nil, cls = central_nilpotency(q)
        orders = q.element_orders()
        rows.append(ClassRow(
            name=identify(q), source=first_source[k],
            associative=q.is_associative(), commutative=q.is_commutative(),
            center_order=len(center(q)), nilpotency_class=cls if nil else None,
            exponent=q.exponent(), order3_count=int(np.sum(orders == 3)),
        ))
    counts = {
        "classes": len(rows),
        "associative": sum(r.associative for r in rows),
        "abelian": sum(r.associative and r.commutative for r in rows),
        "centrally_nilpotent": sum(r.nilpotency_class is not None for r in rows),
        "trivial_center": sum(r.center_order == 1 for r in rows),
    }
    tally: dict[str, int] = {}
    for s in sources:
        tally[s] = tally.get(s, 0) + 1
    return Census(rows, counts, tally)


def classify_all(jobs: int = 1, checkpoint_dir: str | Path | None = None,
                 timeout: float | None = None, progress=None,
                 searched: dict[str, list[Loop]] | None = None) -> Census:
    """All right Bol loops of order 27 from the two searches plus the cyclic group.

    Central extensions of ``Z3`` by ``Z3 x Z3`` cover the loops with
    nontrivial center except ``Z27``; the two model searches cover the
    trivial-center loops.  ``searched`` may carry finished model-search
    output per case (``"ea"``, ``"cyc"``) so it is not recomputed.
    """
    from .cocycles import central_extensions_in_variety
    from .modelsearch import model_search, trivial_center_spec

    loops: list[Loop] = []
    sources: list[str] = []
    for q in central_extensions_in_variety(3):
        loops.append(q)
        sources.append("central-ext")
    for case in ("ea", "cyc"):
        if searched is not None and case in searched:
            found = searched[case]
        else:
            spec = trivial_center_spec(case)
            ckpt = (None if checkpoint_dir is None
                    else Path(checkpoint_dir) / f"{spec.label}.resume.json")
            found = model_search(spec, jobs=jobs, checkpoint=ckpt, timeout=timeout,
                                 progress=None if progress is None else
                                 (lambda a, b, c=case: progress(c, a, b)))
        reps, _ = up_to_isomorphism(found)
        loops.extend(reps)
        sources.extend([f"trivial-center-{case}"] * len(reps))
    loops.append(cyclic_group(27))
    sources.append("cyclic")
    return census(loops, sources)


def render_census(c: Census, sep: str | None = None) -> str:
    header = ["class", "catalog", "source", "group", "abelian", "|Z(Q)|", "nilp.class",
              "exp(Q)", "#order 3"]
    rows = []
    for i, r in enumerate(c.classes, 1):
        rows.append([str(i), r.name or "?", r.source, _cell(r.associative),
                     _cell(r.associative and r.commutative), str(r.center_order),
                     _cell(r.nilpotency_class), str(r.exponent), str(r.order3_count)])
    body = _grid(header, rows, sep)
    if sep is not None:
        return body
    tail = "\n".join(f"{k.replace('_', ' ')}: {v}" for k, v in c.counts.items())
    return body + "\n" + tail + "\n"


# -- figures -----------------------------------------------------------------------------


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, metadata={"Software": None})
    return path


def cayley_figure(loops: dict[str, Loop], path: str | Path, cols: int = 5) -> Path:
    """Heat maps of Cayley tables, one panel per loop."""
    plt = _pyplot()
    rows = -(-len(loops) // cols)
    fig, axes = plt.subplots(rows, cols, figsize=(2.4 * cols, 2.5 * rows), squeeze=False)
    for ax in axes.ravel():
        ax.axis("off")
    for ax, (name, q) in zip(axes.ravel(), loops.items()):
        ax.imshow(q.table, cmap="viridis", interpolation="nearest")
        ax.set_title(name, fontsize=9)
    fig.tight_layout()
    out = _save(fig, Path(path))
    plt.close(fig)
    return out


def table1_figure(profiles: dict[str, InvariantProfile], path: str | Path) -> Path:
    """|Aut(Q)| and the number of elements of order 3, the two separating invariants."""
    plt = _pyplot()
    names = list(profiles)
    x = np.arange(len(names))
    fig, ax = plt.subplots(figsize=(8, 3.2))
    ax.bar(x - 0.2, [profiles[n].aut_order for n in names], 0.4, label="|Aut(Q)|")
    ax.bar(x + 0.2, [profiles[n].order3_count for n in names], 0.4, label="elements of order 3")
    ax.set_xticks(x, names)
    ax.legend(frameon=False)
    fig.tight_layout()
    out = _save(fig, Path(path))
    plt.close(fig)
    return out


def table2_figure(t: Table2, path: str | Path) -> Path:
    plt = _pyplot()
    x = np.arange(len(t.columns))
    fig, ax = plt.subplots(figsize=(8, 3.2))
    colors = {}
    for i, members in enumerate(t.groups):
        for name in members:
            colors[name] = f"C{i % 10}"
    ax.bar(x, t.rows["rmlt_order"], color=[colors[n] for n in t.columns])
    ax.set_xticks(x, t.columns)
    ax.set_ylabel("|RMlt(Q)|  (colour = isomorphism class)")
    fig.tight_layout()
    out = _save(fig, Path(path))
    plt.close(fig)
    return out


def census_figure(c: Census, path: str | Path) -> Path:
    plt = _pyplot()
    keys = list(c.counts)
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.barh(keys[::-1], [c.counts[k] for k in keys][::-1])
    for i, k in enumerate(keys[::-1]):
        ax.text(c.counts[k] + 0.1, i, str(c.counts[k]), va="center")
    fig.tight_layout()
    out = _save(fig, Path(path))
    plt.close(fig)
    return out


def write_outputs(out_dir: str | Path, stem: str, text: str, tsv: str, data: dict) -> None:
    """The text table, a tab-separated copy and the JSON payload side by side."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.txt").write_text(text)
    (out / f"{stem}.tsv").write_text(tsv)
    (out / f"{stem}.json").write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
