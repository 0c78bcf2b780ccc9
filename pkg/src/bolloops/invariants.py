"""Substructures of a loop and the invariant profiles reported by ``table1`` and ``table2``."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import ceil, log2

import numpy as np

from . import morph
from .loop import Loop, LoopError
from .perm import PermGroup


class NotASubloop(LoopError):
    pass


class NotNormal(LoopError):
    pass


class IllDefined(LoopError):
    pass


class SquaringNotBijective(LoopError):
    pass


# -- nuclei, commutant, center ------------------------------------------------------


def _nucleus_mask(q: Loop, kind: str) -> np.ndarray:
    t = q.table
    col = t.T
    out = np.zeros(q.n, dtype=bool)
    for x in range(q.n):
        if kind == "left":      # x(yz) = (xy)z
            out[x] = np.array_equal(t[x][t], t[t[x]])
        elif kind == "middle":  # y(xz) = (yx)z
            out[x] = np.array_equal(t[:, t[x]], t[col[x]])
        else:                   # y(zx) = (yz)x
            out[x] = np.array_equal(t[:, col[x]], col[x][t])
    return out


def left_nucleus(q: Loop) -> frozenset[int]:
    return frozenset(np.flatnonzero(_nucleus_mask(q, "left")).tolist())


def middle_nucleus(q: Loop) -> frozenset[int]:
    return frozenset(np.flatnonzero(_nucleus_mask(q, "middle")).tolist())


def right_nucleus(q: Loop) -> frozenset[int]:
    return frozenset(np.flatnonzero(_nucleus_mask(q, "right")).tolist())


def nucleus(q: Loop) -> frozenset[int]:
    return left_nucleus(q) & middle_nucleus(q) & right_nucleus(q)


def commutant(q: Loop) -> frozenset[int]:
    """Elements commuting with everything; not a subloop in general."""
    t = q.table
    return frozenset(np.flatnonzero(np.all(t == t.T, axis=1)).tolist())


def center(q: Loop) -> frozenset[int]:
    z = nucleus(q) & commutant(q)
    assert is_normal(q, z), "center must be a normal subloop"
    return z


def is_subloop(q: Loop, h) -> bool:
    idx = np.array(sorted(h))
    if len(idx) == 0 or idx[0] != 0:
        return False
    mask = np.zeros(q.n, dtype=bool)
    mask[idx] = True
    return bool(mask[q.table[np.ix_(idx, idx)]].all())


def subloop_exponent(q: Loop, h) -> int:
    from math import lcm
    orders = q.element_orders()
    return lcm(*(int(orders[x]) for x in h))


# -- multiplication groups ---------------------------------------------------------------


def right_multiplication_group(q: Loop) -> PermGroup:
    return PermGroup(q.right_translations()[1:], q.n)


def left_multiplication_group(q: Loop) -> PermGroup:
    return PermGroup(q.left_translations()[1:], q.n)


def multiplication_group(q: Loop) -> PermGroup:
    return PermGroup(np.concatenate([q.right_translations()[1:], q.left_translations()[1:]]), q.n)


def right_inner_mapping_group(q: Loop) -> PermGroup:
    return right_multiplication_group(q).point_stabilizer(0)


def left_inner_mapping_group(q: Loop) -> PermGroup:
    return left_multiplication_group(q).point_stabilizer(0)


def inner_mapping_group(q: Loop) -> PermGroup:
    return multiplication_group(q).point_stabilizer(0)


def _inner_generators(q: Loop, x: int) -> np.ndarray:
    """``L_{x,y}``, ``R_{x,y}`` for all ``y`` and ``T_x``, one permutation per row."""
    t, ld, rd = q.table, q.ldiv, q.rdiv
    r = np.arange(q.n)
    # L_{x,y}(z) = (xy) \ (x(yz))
    lxy = ld[t[x][:, None], t[x][t]]
    # R_{x,y}(z) = ((zy)x) / (yx)
    rxy = rd[t[t.T, x], t[:, x][:, None]]
    # T_x(z) = x \ (zx)
    tx = ld[x, t[r, x]]
    return np.concatenate([lxy, rxy, tx[None, :]])


def is_normal(q: Loop, h) -> bool:
    """Whether ``h`` is fixed setwise by ``L_{x,y}``, ``R_{x,y}`` and ``T_x``."""
    if not is_subloop(q, h):
        raise NotASubloop("not a subloop")
    idx = np.array(sorted(h))
    mask = np.zeros(q.n, dtype=bool)
    mask[idx] = True
    for x in range(q.n):
        if not mask[_inner_generators(q, x)[:, idx]].all():
            return False
    return True


def all_subloops(q: Loop, max_gens: int | None = None) -> list[frozenset[int]]:
    """Subloops generated by at most ``max_gens`` elements, sorted by size then content.

    The default bound is 3 for order 27 and ``ceil(log2 n)`` otherwise.
    """
    if max_gens is None:
        max_gens = 3 if q.n == 27 else max(1, ceil(log2(max(q.n, 2))))
    found = {frozenset([0])}
    layer = {frozenset([0])}
    for _ in range(max_gens):
        nxt = set()
        for s in layer:
            for x in range(q.n):
                if x not in s:
                    h = q.subloop_generated(s | {x})
                    if h not in found:
                        found.add(h)
                        nxt.add(h)
        layer = nxt
        if not layer:
            break
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def all_normal_subloops(q: Loop, max_gens: int | None = None) -> list[frozenset[int]]:
    return [h for h in all_subloops(q, max_gens) if is_normal(q, h)]


# -- quotients and series -------------------------------------------------------------


def quotient(q: Loop, h) -> Loop:
    """Factor loop ``Q/H`` on the cosets of a normal subloop, identity coset first."""
    if not is_normal(q, h):
        raise NotNormal("subloop is not normal")
    idx = np.array(sorted(h))
    coset_of = np.full(q.n, -1, dtype=np.int64)
    reps = []
    for x in range(q.n):
        if coset_of[x] < 0:
            coset_of[q.table[x, idx]] = len(reps)
            reps.append(x)
    reps = np.array(reps)
    cq = coset_of[q.table]
    # coset of xy must depend only on the cosets of x and y
    table = np.full((len(reps), len(reps)), -1, dtype=np.int64)
    table[coset_of[:, None], coset_of[None, :]] = cq
    if not np.array_equal(table[coset_of[:, None], coset_of[None, :]], cq):
        raise IllDefined("coset multiplication is not well defined")
    return Loop(table)


def is_abelian_group(q: Loop) -> bool:
    return q.is_commutative() and q.is_associative()


def derived_subloop(q: Loop) -> frozenset[int]:
    """Smallest normal subloop with an abelian-group quotient."""
    cands = [h for h in all_normal_subloops(q) if is_abelian_group(quotient(q, h))]
    best = min(cands, key=len)
    assert all(best <= h for h in cands), "derived subloop is not unique"
    return best


def derived_series(q: Loop) -> list[Loop]:
    """``[Q, Q', Q'', ...]`` as loops, stopping once the series stabilises."""
    series = [q]
    while True:
        d = derived_subloop(series[-1])
        if len(d) == series[-1].n:
            return series
        series.append(restrict(series[-1], d))
        if len(d) == 1:
            return series


def is_solvable(q: Loop) -> bool:
    return derived_series(q)[-1].n == 1


def restrict(q: Loop, h) -> Loop:
    """The subloop ``h`` as a loop on ``0..|h|-1`` (sorted order, so 0 stays 0)."""
    idx = np.array(sorted(h))
    pos = np.full(q.n, -1, dtype=np.int64)
    pos[idx] = np.arange(len(idx))
    return Loop(pos[q.table[np.ix_(idx, idx)]])


def central_nilpotency(q: Loop) -> tuple[bool, int | None]:
    """``(nilpotent, class)`` from iterated quotients by the center."""
    cur = q
    steps = 0
    while cur.n > 1:
        z = center(cur)
        if len(z) == 1:
            return False, None
        cur = quotient(cur, z)
        steps += 1
    return True, steps


def is_centrally_nilpotent(q: Loop) -> bool:
    return central_nilpotency(q)[0]


# -- automorphisms ------------------------------------------------------------------------


def automorphism_group(q: Loop) -> PermGroup:
    """All automorphisms, found by backtracking on generator images.

    The returned group carries ``count`` (the number of automorphisms found),
    which must equal its order.
    """
    autos = list(morph.iter_isomorphisms(q, q))
    count = len(autos)
    group = PermGroup([], q.n)
    for phi in autos:
        if group.order() == count:
            break
        if not group.contains(phi):
            group = PermGroup(group.gens + [tuple(phi.tolist())], q.n)
    assert group.order() == count
    group.count = count
    return group


# -- associated right Bruck loop -------------------------------------------------------------


def associated_bruck(q: Loop) -> Loop:
    """The right Bruck loop ``x o y = ((y x^2) y)^(1/2)`` of a right Bol loop.

    Written ``((x y^2) x)^(1/2)`` with the operands read right-to-left; taken
    literally that expression yields the mirror (left Bruck) loop.  Square
    roots come from inverting the squaring permutation.
    """
    t = q.table
    r = np.arange(q.n)
    sq = t[r, r]
    if len(set(sq.tolist())) != q.n:
        raise SquaringNotBijective("x -> x^2 is not a permutation")
    root = np.argsort(sq)
    # [x, y] -> (y x^2) y
    return Loop(root[t[t[r[None, :], sq[:, None]], r[None, :]]])


def is_right_bruck(q: Loop) -> bool:
    from .loop import NoTwoSidedInverse
    if not q.has_two_sided_inverses():
        raise NoTwoSidedInverse("left and right inverses differ")
    if not q.is_right_bol():
        return False
    inv = q.right_inverse
    t = q.table
    return bool(np.array_equal(inv[t], t[inv[:, None], inv[None, :]]))


# -- profiles -------------------------------------------------------------------------------

TABLE1_ROWS = {
    "center_order": "|Z(Q)|",
    "exponent": "exp(Q)",
    "order3_count": "|{x in Q: |x|=3}|",
    "derived_order": "|Q'|",
    "left_nucleus_order": "|N_lambda(Q)|",
    "left_nucleus_exponent": "exp(N_lambda(Q))",
    "commuting_pairs": "|{(x,y) in QxQ: xy=yx}|",
    "rmlt_order": "|Mlt_rho(Q)|",
    "lmlt_order": "|Mlt_lambda(Q)|",
    "mlt_order": "|Mlt(Q)|",
    "aut_order": "|Aut(Q)|",
    "right_bruck": "is Q right Bruck?",
    "associated_bruck": "associated right Bruck loop",
}


@dataclass
class InvariantProfile:
    order: int
    center_order: int
    exponent: int
    order3_count: int
    derived_order: int
    left_nucleus_order: int
    left_nucleus_exponent: int
    commuting_pairs: int
    rmlt_order: int
    lmlt_order: int
    mlt_order: int
    aut_order: int
    right_bruck: bool
    associated_bruck: str | None = None
    aut_generators: list = field(default_factory=list, compare=False)

    def to_dict(self) -> dict:
        return asdict(self)


def profile(q: Loop, bruck_tagger=None) -> InvariantProfile:
    """Every invariant reported by ``table1``, for ``q``.

    ``bruck_tagger`` maps a loop to a name (e.g. by isomorphism against a
    catalog); without it the associated-Bruck tag is left empty.
    """
    orders = q.element_orders()
    lnuc = left_nucleus(q)
    aut = automorphism_group(q)
    try:
        bruck = is_right_bruck(q)
    except LoopError:
        bruck = False
    tag = None
    if bruck_tagger is not None:
        try:
            tag = bruck_tagger(associated_bruck(q))
        except SquaringNotBijective:
            tag = None
    return InvariantProfile(
        order=q.n,
        center_order=len(center(q)),
        exponent=q.exponent(),
        order3_count=int(np.count_nonzero(orders == 3)),
        derived_order=len(derived_subloop(q)),
        left_nucleus_order=len(lnuc),
        left_nucleus_exponent=subloop_exponent(q, lnuc),
        commuting_pairs=q.count_commuting_pairs(),
        rmlt_order=right_multiplication_group(q).order(),
        lmlt_order=left_multiplication_group(q).order(),
        mlt_order=multiplication_group(q).order(),
        aut_order=aut.count,
        right_bruck=bruck,
        associated_bruck=tag,
        aut_generators=[list(g) for g in aut.gens],
    )


def rmlt_profile(q: Loop) -> tuple[int, int, int]:
    """``(|G|, exp G, |Z(G)|)`` for ``G`` the right multiplication group."""
    g = right_multiplication_group(q)
    return g.order(), g.exponent(), g.center_order()


def group_as_loop(g: PermGroup) -> Loop:
    """Cayley table of an enumerable permutation group (identity at index 0)."""
    _, table = g.cayley_table()
    return Loop(table)
