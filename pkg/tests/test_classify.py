from itertools import combinations

import numpy as np
import pytest

import oracles
from bolloops.classify import (are_isomorphic, are_isotopic, find_isotopy, identify,
                               principal_isotope, up_to_isomorphism)
from bolloops.constructions import BOL_NAMES, build
from bolloops.loop import Loop

ISOTOPIC = {frozenset(p) for p in [("B1", "B5"), ("B2", "B6"), ("B3", "B7"),
                                     ("B4", "B8"), ("B9", "B10")]}


def _same_partition(a, b) -> bool:
    pairs = lambda labels: {(i, j) for i in range(len(labels)) for j in range(i)
                            if labels[i] == labels[j]}
    return pairs(a) == pairs(b)


@pytest.mark.parametrize("n", range(1, 7))
def test_up_to_isomorphism_matches_all_bijections(n, small_tables):
    tables = small_tables[n]
    _, member = up_to_isomorphism([Loop(t) for t in tables])
    assert _same_partition(member, oracles.canonical_forms(tables))


def test_pairwise_isomorphism_matches_all_bijections(small_tables, rng):
    tables = small_tables[5] + small_tables[6]
    forms = {}
    for n in (5, 6):
        forms.update(zip(map(id, small_tables[n]), oracles.canonical_forms(small_tables[n])))
    for _ in range(300):
        i, j = rng.integers(len(tables), size=2)
        a, b = tables[i], tables[j]
        if rng.random() < 0.3 and len(a) == 6:     # a relabelled copy
            perm = np.concatenate([[0], 1 + rng.permutation(5)])
            b = Loop(a).relabel(perm).table
            assert bool(are_isomorphic(Loop(a), Loop(b)))
            continue
        expect = len(a) == len(b) and forms[id(a)] == forms[id(b)]
        cert = are_isomorphic(Loop(a), Loop(b))
        assert bool(cert) == expect
        if cert:
            assert cert.verify()


def test_single_loop_is_its_own_class():
    q = build("B3")
    reps, member = up_to_isomorphism([q])
    assert reps == [q] and member == [0]


def test_identify(catalog):
    for name, q in catalog.items():
        perm = np.concatenate([[0], 1 + np.random.default_rng(1).permutation(26)])
        assert identify(q.relabel(perm)) == name


def test_principal_isotope_is_a_loop_with_identity_zero():
    q = build("B4")
    iso = principal_isotope(q, 5, 11)
    assert iso.table[0].tolist() == list(range(27))


def test_isotopy_witness_maps_isotope_onto_target():
    a, b = build("B2"), build("B6")
    w = find_isotopy(a, b)
    iso = principal_isotope(a, w.a, w.b)
    phi = w.bijection
    assert all(b.table[phi[x], phi[y]] == phi[iso.table[x, y]]
               for x in range(27) for y in range(27))


@pytest.mark.parametrize("pair", list(combinations(BOL_NAMES, 2)), ids="-".join)
def test_isotopy_pairs(pair):
    assert are_isotopic(build(pair[0]), build(pair[1])) == (frozenset(pair) in ISOTOPIC)


def test_groups_are_isotopic_only_to_isomorphic_groups():
    for g in ("Z27", "Z9xZ3", "Z3^3", "Heis3", "Z9:Z3"):
        for name in BOL_NAMES[:2] + ("Heis3", "Z9:Z3"):
            iso = are_isotopic(build(g), build(name))
            assert iso == (g == name)
