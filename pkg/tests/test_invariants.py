import pytest

from bolloops.constructions import build
from bolloops.invariants import (InvariantProfile, all_normal_subloops, associated_bruck,
                                 center, central_nilpotency, commutant, derived_subloop,
                                 is_normal, left_nucleus, profile, quotient, rmlt_profile,
                                 subloop_exponent)
from bolloops.loop import Loop, cyclic_group
from bolloops.report import _bruck_tagger

B6 = dict(center_order=3, exponent=9, order3_count=14, derived_order=3, left_nucleus_order=9,
          left_nucleus_exponent=3, commuting_pairs=405, rmlt_order=81, lmlt_order=243,
          mlt_order=2187, aut_order=36, right_bruck=True)
B10 = dict(center_order=1, exponent=3, order3_count=26, derived_order=9, left_nucleus_order=9,
           left_nucleus_exponent=3, commuting_pairs=153, rmlt_order=243, lmlt_order=139968,
           mlt_order=139968, aut_order=144, right_bruck=False)


@pytest.mark.parametrize("name, expected", [("B6", B6), ("B10", B10)])
def test_profile_columns(name, expected):
    p = profile(build(name))
    for key, value in expected.items():
        assert getattr(p, key) == value, key


def test_profile_of_trivial_loop():
    p = profile(Loop([[0]]))
    assert isinstance(p, InvariantProfile)
    assert (p.order, p.center_order, p.exponent, p.rmlt_order, p.aut_order) == (1, 1, 1, 1, 1)


def test_left_nucleus_and_center():
    b1, b2, b9 = build("B1"), build("B2"), build("B9")
    assert len(left_nucleus(b1)) == 9 and subloop_exponent(b1, left_nucleus(b1)) == 9
    assert len(left_nucleus(b2)) == 9 and subloop_exponent(b2, left_nucleus(b2)) == 3
    assert len(center(b1)) == 3 and len(center(b9)) == 1
    assert center(build("Z9xZ3")) == frozenset(range(27))


def test_quotients():
    q = build("B3")
    assert quotient(q, frozenset(range(27))).n == 1
    z = center(q)
    assert is_normal(q, z)
    f = quotient(q, z)
    assert f.n == 9 and f.is_associative() and f.is_commutative()


def test_derived_subloop():
    assert derived_subloop(build("Z3^3")) == {0}
    assert len(derived_subloop(build("B9"))) == 9


def test_central_nilpotency(bol_loops):
    for name, q in bol_loops.items():
        nil, cls = central_nilpotency(q)
        if name in ("B9", "B10"):
            assert not nil
        else:
            assert nil and cls == 2
    for name in ("Z27", "Heis3", "Z9:Z3"):
        assert central_nilpotency(build(name))[0]


def test_rmlt_profiles():
    assert rmlt_profile(build("B2")) == (81, 9, 3)
    assert rmlt_profile(build("B9")) == (243, 3, 9)
    for name in ("Z27", "Z9xZ3", "Z3^3"):
        q = build(name)
        assert rmlt_profile(q) == (27, q.exponent(), 27)


def test_associated_bruck_tags(bol_loops):
    tag = _bruck_tagger()
    tags = [tag(associated_bruck(q)) for q in bol_loops.values()]
    assert tags == ["B5", "B6", "B7", "B8"] * 2 + ["Z3^3"] * 2


def test_associated_bruck_fixes_bruck_loops():
    for name in ("B5", "B6", "B7", "B8"):
        assert associated_bruck(build(name)) == build(name)


def test_normal_subloops_of_cyclic_group():
    subs = all_normal_subloops(cyclic_group(9))
    assert sorted(len(s) for s in subs) == [1, 3, 9]


def test_commutant_is_subloop_for_b1():
    q = build("B1")
    c = commutant(q)
    assert q.subloop_generated(c) == c


def test_b1_order3_count_is_shared_with_its_bruck_partner():
    # squares agree in Q and its associated Bruck loop, so element orders do too
    b1 = build("B1")
    bruck = associated_bruck(b1)
    r = range(27)
    assert [b1.mul(x, x) for x in r] == [bruck.mul(x, x) for x in r]
    assert sorted(b1.element_orders()) == sorted(bruck.element_orders())
    assert int((b1.element_orders() == 3).sum()) == int((build("B5").element_orders() == 3).sum()) == 20
