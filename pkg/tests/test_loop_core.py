import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bolloops.constructions import build
from bolloops.invariants import is_right_bruck
from bolloops.loop import (BadEntry, NoIdentity, NotLatin, cyclic_group, format_loop,
                           parse_loop, validate)


def test_trivial_loop():
    q = validate([[0]])
    assert q.n == 1 and q.exponent() == 1


def test_cyclic_group_is_valid():
    q = validate([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    assert q.is_associative() and q.is_commutative()


@pytest.mark.parametrize("raw, exc", [
    ([[0, 1], [1, 1]], NotLatin),
    ([[1, 0], [0, 1]], NoIdentity),
    ([[0, 1], [1, 2]], BadEntry),
    ([[0, 1, 2], [1, 2, 0]], BadEntry),
])
def test_validate_rejects(raw, exc):
    with pytest.raises(exc):
        validate(raw)


def test_divisions(rng):
    for _ in range(100):
        q = build(str(rng.choice(["B1", "B4", "B9", "Heis3"])))
        x, y = (int(v) for v in rng.integers(0, 27, 2))
        z = q.mul(x, y)
        assert q.mul(0, y) == y
        assert q.rdiv_(z, y) == x
        assert q.ldiv_(x, z) == y


def test_powers_and_orders():
    b1, b5, b9 = build("B1"), build("B5"), build("B9")
    assert b1.power(5, 0) == 0 and b1.power(5, 1) == 5
    assert b1.exponent() == 9 and b9.exponent() == 3
    assert b1.element_order(0) == 1
    assert int(np.sum(b5.element_orders() == 3)) == 20


def test_subloop_generated():
    z9 = cyclic_group(9)
    assert z9.subloop_generated([]) == {0}
    assert z9.subloop_generated([3]) == {0, 3, 6}


def test_commuting_pairs():
    assert [build(n).count_commuting_pairs() for n in ("B1", "B5", "B9")] == [459, 405, 153]
    assert build("Z9xZ3").count_commuting_pairs() == 729


def test_bol_and_moufang_flags(bol_loops):
    for q in bol_loops.values():
        assert q.is_right_bol()
        assert not q.is_moufang()
    assert build("Heis3").is_right_bol() and build("Heis3").is_moufang()


def test_bruck_flags(bol_loops):
    flags = [is_right_bruck(q) for q in bol_loops.values()]
    assert flags == [False] * 4 + [True] * 4 + [False] * 2
    assert is_right_bruck(build("Z3^3"))


def test_text_format_round_trip(bol_loops):
    for q in bol_loops.values():
        assert parse_loop(format_loop(q)) == q


def test_text_format_comments_and_blank_lines():
    q = parse_loop("# Z2\n2\n\n0 1  # first row\n1 0\n")
    assert q.table.tolist() == [[0, 1], [1, 0]]


@pytest.mark.parametrize("text", ["", "2 2\n0 1\n1 0\n", "3\n0 1 2\n1 2 0\n"])
def test_text_format_rejects(text):
    with pytest.raises(BadEntry):
        parse_loop(text)


@settings(max_examples=40, deadline=None)
@given(st.permutations(list(range(1, 27))), st.sampled_from(["B2", "B7", "B10"]))
def test_relabelling_preserves_structure(perm, name):
    q = build(name)
    r = q.relabel([0] + perm)
    assert r.is_right_bol()
    assert r.count_commuting_pairs() == q.count_commuting_pairs()
    assert sorted(r.element_orders()) == sorted(q.element_orders())
