import numpy as np
import pytest
from sympy import GF, Matrix
from sympy.polys.matrices import DomainMatrix

from bolloops import gfp
from bolloops.classify import are_isomorphic, identify
from bolloops.cocycles import (NotAGroup, bol_cocycle_space, central_extensions_in_variety,
                               coboundary_basis, pad)
from bolloops.constructions import (DimensionMismatch, NotNormalized, build, central_extension,
                                    elementary_abelian)
from bolloops.invariants import center, quotient


def _sympy_rank(a, p):
    return DomainMatrix.from_Matrix(Matrix(a.tolist())).convert_to(GF(p)).rank()


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rref_and_nullspace_against_sympy(p, rng):
    for _ in range(10):
        rows, cols = rng.integers(1, 9, size=2)
        a = rng.integers(0, p, size=(rows, cols))
        if rng.random() < 0.5:
            a[-1] = (a[0] * 2) % p
        r, piv = gfp.rref(a, p)
        assert len(piv) == _sympy_rank(a, p)
        kern = gfp.nullspace(a, p)
        assert len(kern) == cols - len(piv)
        assert not np.any((a @ kern.T) % p)


def test_inverse(rng):
    p = 7
    while True:
        a = rng.integers(0, p, size=(5, 5))
        if _sympy_rank(a, p) == 5:
            break
    assert np.array_equal((a @ gfp.inverse(a, p)) % p, np.eye(5, dtype=np.int64))


def test_cocycle_space_contains_coboundaries():
    f = elementary_abelian(3, 2)
    space = bol_cocycle_space(3, f)
    assert space.dimension == space.quotient_dimension + len(space.coboundaries)
    for row in coboundary_basis(3, f):
        assert space.satisfies(row)
    for row in space.solutions:
        assert central_extension(3, f, pad(3, 9, row)).is_right_bol()


def test_coboundary_gives_isomorphic_extension(rng):
    f = elementary_abelian(3, 2)
    space = bol_cocycle_space(3, f)
    base = pad(3, 9, space.complement[0])
    shift = pad(3, 9, (rng.integers(0, 3, size=8) @ coboundary_basis(3, f)) % 3)
    assert are_isomorphic(central_extension(3, f, base), central_extension(3, f, base + shift))


def test_nonassociative_factor_rejected():
    with pytest.raises(NotAGroup):
        bol_cocycle_space(3, build("B1"))


def test_central_extension_errors():
    f = elementary_abelian(3, 2)
    with pytest.raises(DimensionMismatch):
        central_extension(3, f, np.zeros((3, 3), dtype=int))
    theta = np.zeros((9, 9), dtype=int)
    theta[0, 1] = 1
    with pytest.raises(NotNormalized):
        central_extension(3, f, theta)


@pytest.fixture(scope="module")
def extensions_p3():
    return central_extensions_in_variety(3)


def test_p3_extensions(extensions_p3):
    names = sorted(identify(q) for q in extensions_p3)
    assert names == sorted(["Z9xZ3", "Z3^3", "Heis3", "Z9:Z3"] + [f"B{i}" for i in range(1, 9)])
    assert "Z27" not in names


def test_extension_round_trip(extensions_p3):
    f = elementary_abelian(3, 2)
    for q in extensions_p3:
        z = frozenset(a * 9 for a in range(3))
        assert z <= center(q)
        assert are_isomorphic(quotient(q, z), f)


def test_p5_extensions():
    loops = central_extensions_in_variety(5)
    assert len(loops) == 14
    assert sum(q.is_associative() for q in loops) == 4


def test_extension_search_is_deterministic(extensions_p3):
    again = central_extensions_in_variety(3)
    assert [q.table.tobytes() for q in again] == [q.table.tobytes() for q in extensions_p3]
