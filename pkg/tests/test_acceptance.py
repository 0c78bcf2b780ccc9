"""End-to-end acceptance checks, one test per criterion.

Each test records a one-line verdict; the lines are printed in the pytest
terminal summary and also when this file is run as a script.
"""
from __future__ import annotations

import time
from itertools import combinations

import pytest

import oracles
import properties
from bolloops import report
from bolloops.classify import are_isotopic, identify, up_to_isomorphism
from bolloops.cocycles import central_extensions_in_variety
from bolloops.constructions import BOL_NAMES, build
from bolloops.loop import Loop

VERDICTS: dict[int, str] = {}

EXPECTED_TABLE1 = {
    "center_order": [3] * 8 + [1, 1],
    "exponent": [9] * 8 + [3, 3],
    "order3_count": [2, 14, 8, 2, 20, 14, 8, 2, 26, 26],
    "derived_order": [3] * 8 + [9, 9],
    "left_nucleus_order": [9] * 10,
    "left_nucleus_exponent": [9, 3, 9, 9, 9, 3, 9, 9, 3, 3],
    "commuting_pairs": [459] * 4 + [405] * 4 + [153] * 2,
    "rmlt_order": [81] * 8 + [243] * 2,
    "lmlt_order": [243] * 8 + [139968] * 2,
    "mlt_order": [2187] * 8 + [139968] * 2,
    "aut_order": [54, 18, 18, 27, 108, 36, 36, 54, 72, 144],
    "right_bruck": [False] * 4 + [True] * 4 + [False] * 2,
    "associated_bruck": ["B5", "B6", "B7", "B8"] * 2 + ["Z3^3"] * 2,
}

EXPECTED_TABLE2 = {
    "rmlt_order": [81] * 8 + [243] * 2,
    "rmlt_exponent": [9] * 8 + [3] * 2,
    "rmlt_center_order": [3] * 8 + [9] * 2,
}
RMLT_PAIRS = [{"B1", "B5"}, {"B2", "B6"}, {"B3", "B7"}, {"B4", "B8"}, {"B9", "B10"}]


def verdict(n: int, ok: bool, detail: str) -> None:
    VERDICTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(VERDICTS[n])
    assert ok, detail


def test_criterion_1_table1():
    start = time.monotonic()
    profiles = report.table1_data()
    elapsed = time.monotonic() - start
    data = report.table1_json(profiles)["rows"]
    bad = [f"{key}[{name}]={got} (expected {want})"
           for key, values in EXPECTED_TABLE1.items()
           for name, got, want in zip(BOL_NAMES, data[key], values) if got != want]
    ok = not bad and elapsed < 60
    verdict(1, ok, f"{130 - len(bad)}/130 cells match, {elapsed:.1f}s"
            + (f"; mismatches: {', '.join(bad)}" if bad else ""))


def test_criterion_2_table2():
    start = time.monotonic()
    t = report.table2_data()
    elapsed = time.monotonic() - start
    rows_ok = all(t.rows[k] == v for k, v in EXPECTED_TABLE2.items())
    groups_ok = sorted(map(sorted, t.groups)) == sorted(map(sorted, RMLT_PAIRS))
    ok = rows_ok and groups_ok and elapsed < 120
    verdict(2, ok, f"rows {'match' if rows_ok else 'differ'}, RMlt classes {t.groups}, "
            f"{elapsed:.1f}s")


@pytest.fixture(scope="module")
def extensions():
    out = {}
    for p in (3, 5, 7):
        start = time.monotonic()
        loops = central_extensions_in_variety(p)
        out[p] = (loops, time.monotonic() - start)
    return out


def test_criterion_3_central_extensions(extensions):
    limits = {3: 10, 5: 300, 7: 3600}
    parts, ok = [], True
    for p, expected in ((3, 12), (5, 14), (7, 16)):
        loops, elapsed = extensions[p]
        groups = sum(q.is_associative() for q in loops)
        good = len(loops) == expected and groups == 4 and elapsed < limits[p]
        if p == 3:
            names = {identify(q) for q in loops}
            nonassoc = {n for n in names if n and n.startswith("B")}
            good &= "Z27" not in names and nonassoc == {f"B{i}" for i in range(1, 9)}
        ok &= good
        parts.append(f"p={p}: {len(loops)} ({groups}+{len(loops) - groups}) in {elapsed:.1f}s")
    verdict(3, ok, "; ".join(parts))


def test_criterion_4_centrally_nilpotent_census(extensions):
    from bolloops.invariants import is_centrally_nilpotent
    from bolloops.loop import cyclic_group
    counts = {}
    for p in (3, 5, 7):
        loops = list(extensions[p][0]) + [cyclic_group(p ** 3)]
        assert all(is_centrally_nilpotent(q) for q in loops)
        counts[p] = len(up_to_isomorphism(loops)[0])
    ok = counts == {3: 13, 5: 15, 7: 17}
    verdict(4, ok, " / ".join(f"{counts[p]}" for p in (3, 5, 7)) + " for p = 3 / 5 / 7")


def test_criterion_5_trivial_center_search(trivial_center_results):
    res = trivial_center_results
    nonassoc = {c: [q for q in res[c]["classes"] if not q.is_associative()] for c in res}
    merged, _ = up_to_isomorphism(nonassoc["ea"] + nonassoc["cyc"])
    merged_names = sorted((identify(q) or "?" for q in merged), key=lambda s: (len(s), s))
    counts = {c: (len(res[c]["classes"]), len(nonassoc[c])) for c in res}
    ok = (counts["ea"] == (11, 8) and counts["cyc"] == (12, 8)
          and merged_names == [f"B{i}" for i in range(1, 11)])
    verdict(5, ok, f"ea {counts['ea'][0]} classes ({counts['ea'][1]} nonassociative, "
            f"{len(res['ea']['models'])} models); cyc {counts['cyc'][0]} classes "
            f"({counts['cyc'][1]} nonassociative, {len(res['cyc']['models'])} models); "
            f"merged nonassociative {merged_names}")


def test_criterion_6_classify_all(trivial_center_results):
    searched = {c: r["models"] for c, r in trivial_center_results.items()}
    c = report.classify_all(searched=searched)
    expected = {"classes": 15, "associative": 5, "abelian": 3,
                "centrally_nilpotent": 13, "trivial_center": 2}
    ok = c.counts == expected
    verdict(6, ok, ", ".join(f"{k.replace('_', ' ')} {v}" for k, v in c.counts.items()))


def test_criterion_7_isotopy():
    start = time.monotonic()
    loops = {n: build(n) for n in BOL_NAMES}
    isotopic = {frozenset(pair) for pair in combinations(BOL_NAMES, 2)
                if are_isotopic(loops[pair[0]], loops[pair[1]])}
    elapsed = time.monotonic() - start
    expected = {frozenset(p) for p in RMLT_PAIRS}
    ok = isotopic == expected and elapsed < 600
    found = sorted(tuple(sorted(p, key=lambda s: (len(s), s))) for p in isotopic)
    verdict(7, ok, f"isotopic pairs {found}, {45 - len(isotopic)} pairs not isotopic, "
            f"{elapsed:.1f}s")


def test_criterion_8_properties(catalog):
    failures = properties.check_catalog(catalog)
    bad = {k: v for k, v in failures.items() if v}
    verdict(8, not bad, f"{len(failures)} properties on {len(catalog)} loops"
            + (f"; failures {bad}" if bad else ", all hold"))


def test_criterion_9_oracles(small_tables, rng):
    iso_ok = True
    total = 0
    for n, tables in small_tables.items():
        _, member = up_to_isomorphism([Loop(t) for t in tables])
        forms = oracles.canonical_forms(tables)
        index = {}
        for m, f in zip(member, forms):
            iso_ok &= index.setdefault(m, f) == f
        iso_ok &= len(set(member)) == len(set(forms))
        total += len(tables)
    bol_ok = True
    bol_count = 0
    small_bol = [t for n in (4, 5, 6) for t in small_tables[n] if oracles.is_right_bol(t)]
    for i in range(1000):
        if i % 5 == 0:
            t = small_bol[int(rng.integers(len(small_bol)))]
        else:
            t = oracles.normalize(oracles.random_latin_square(int(rng.integers(2, 9)), rng))
        expect = oracles.is_right_bol(t)
        bol_count += expect
        bol_ok &= Loop(t).is_right_bol() == expect
    verdict(9, iso_ok and bol_ok,
            f"isomorphism classes agree on all {total} loops of order <= 6: {iso_ok}; "
            f"right Bol agrees on 1000 random loops ({bol_count} right Bol): {bol_ok}")


if __name__ == "__main__":
    import sys
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
