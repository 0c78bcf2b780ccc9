"""Finite loops stored as Cayley tables.

A loop of order ``n`` lives on the elements ``0..n-1`` with ``0`` as the
two-sided identity.  Tables are immutable numpy arrays; the two division
tables are built once at validation time.
"""
from __future__ import annotations

from functools import cached_property
from math import lcm
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class LoopError(ValueError):
    pass


class BadEntry(LoopError):
    pass


class NotLatin(LoopError):
    pass


class NoIdentity(LoopError):
    pass


class NoInverse(LoopError):
    pass


class NoTwoSidedInverse(LoopError):
    pass


class NotPowerAssociative(LoopError):
    pass


class Loop:
    """An immutable loop of order ``n`` given by its multiplication table.

    Use :func:`validate` (or ``Loop(table)``, which calls it) to build one.
    ``ldiv[x, z]`` is the unique ``y`` with ``x*y == z`` and ``rdiv[z, y]``
    the unique ``x`` with ``x*y == z``.
    """

    def __init__(self, table, name: str | None = None):
        t = np.array(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise BadEntry(f"table must be a non-empty square array, got shape {t.shape}")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise BadEntry("entries must lie in 0..n-1")
        ident = np.arange(n)
        if not (np.array_equal(t[0], ident) and np.array_equal(t[:, 0], ident)):
            raise NoIdentity("row 0 and column 0 must be the identity map")
        rows = np.sort(t, axis=1)
        cols = np.sort(t, axis=0)
        if not (np.all(rows == ident) and np.all(cols == ident[:, None])):
            raise NotLatin("some row or column repeats an entry")
        ldiv = np.empty_like(t)
        rdiv = np.empty_like(t)
        r = np.arange(n)
        ldiv[r[:, None], t] = r[None, :]
        rdiv[t, r[None, :]] = r[:, None]
        for a in (t, ldiv, rdiv):
            a.setflags(write=False)
        self.table = t
        self.ldiv = ldiv
        self.rdiv = rdiv
        self.name = name

    @property
    def n(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Loop{label} of order {self.n}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, Loop) and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def ldiv_(self, x: int, y: int) -> int:
        """``x \\ y``."""
        return int(self.ldiv[x, y])

    def rdiv_(self, x: int, y: int) -> int:
        """``x / y``."""
        return int(self.rdiv[x, y])

    # -- identities ---------------------------------------------------------

    def _all_triples(self, lhs, rhs) -> bool:
        # one x-slab at a time keeps memory at O(n^2) and exits early
        n = self.n
        for x in range(n):
            if not np.array_equal(lhs(x), rhs(x)):
                return False
        return True

    def is_associative(self) -> bool:
        t = self.table
        return self._all_triples(lambda x: t[t[x]], lambda x: t[x][t])

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def is_right_bol(self) -> bool:
        """((xy)z)y == x((yz)y) for all x, y, z."""
        t = self.table
        n = self.n
        yz_y = t[t, np.arange(n)[:, None]]  # [y, z] -> (yz)y
        cols = np.arange(n)[:, None]

        def lhs(x):
            return t[t[t[x]], cols]  # [y, z] -> ((xy)z)y

        def rhs(x):
            return t[x][yz_y]

        return self._all_triples(lhs, rhs)

    def is_left_bol(self) -> bool:
        """y(z(yx)) == ((yz)y)x for all x, y, z."""
        return self.opposite().is_right_bol()

    def is_moufang(self) -> bool:
        return self.is_right_bol() and self.is_left_bol()

    def opposite(self) -> "Loop":
        return Loop(self.table.T)

    # -- inverses and powers ------------------------------------------------

    @cached_property
    def right_inverse(self) -> np.ndarray:
        """``x -> x^rho`` with ``x * x^rho = 1``."""
        return self.ldiv[:, 0].copy()

    @cached_property
    def left_inverse(self) -> np.ndarray:
        return self.rdiv[0, :].copy()

    def has_two_sided_inverses(self) -> bool:
        return bool(np.array_equal(self.left_inverse, self.right_inverse))

    def inverse(self, x: int) -> int:
        if self.left_inverse[x] != self.right_inverse[x]:
            raise NoInverse(f"element {x} has no two-sided inverse")
        return int(self.right_inverse[x])

    def power(self, x: int, k: int) -> int:
        """Left-normed power ``((x*x)*x)...``; negative ``k`` inverts ``x^-k``."""
        if k < 0:
            return self.inverse(self.power(x, -k))
        r = 0
        for _ in range(k):
            r = int(self.table[r, x])
        return r

    @cached_property
    def _orders(self) -> np.ndarray:
        n = self.n
        orders = np.zeros(n, dtype=np.int64)
        for x in range(n):
            cyc = self.subloop_generated([x])
            if not _is_associative_on(self.table, cyc):
                raise NotPowerAssociative(f"<{x}> is not associative")
            orders[x] = len(cyc)
        return orders

    def element_order(self, x: int) -> int:
        """Order of ``x``; requires power associativity (checked for every element)."""
        return int(self._orders[x])

    def element_orders(self) -> np.ndarray:
        return self._orders.copy()

    def is_power_associative(self) -> bool:
        try:
            self._orders
        except NotPowerAssociative:
            return False
        return True

    def exponent(self) -> int:
        return lcm(*map(int, self._orders))

    # -- subloops -----------------------------------------------------------

    def subloop_generated(self, gens: Iterable[int]) -> frozenset[int]:
        """Smallest subloop containing ``gens``.

        Closure under multiplication suffices in a finite loop: a finite set
        closed under ``*`` has bijective restricted translations.
        """
        t = self.table
        members = np.zeros(self.n, dtype=bool)
        members[0] = True
        for g in gens:
            members[g] = True
        while True:
            idx = np.flatnonzero(members)
            prods = t[np.ix_(idx, idx)].ravel()
            new = ~members[prods]
            if not new.any():
                return frozenset(int(i) for i in idx)
            members[prods] = True

    def count_commuting_pairs(self) -> int:
        return int(np.count_nonzero(self.table == self.table.T))

    # -- translations -------------------------------------------------------

    def left_translations(self) -> np.ndarray:
        """Row ``x`` is ``L_x`` as an image array (``y -> xy``)."""
        return self.table.copy()

    def right_translations(self) -> np.ndarray:
        """Row ``x`` is ``R_x`` as an image array (``y -> yx``)."""
        return self.table.T.copy()

    # -- io -----------------------------------------------------------------

    def to_text(self) -> str:
        return format_loop(self)

    def relabel(self, perm: Sequence[int]) -> "Loop":
        """Isomorphic copy under ``x -> perm[x]`` (``perm[0]`` must be 0)."""
        p = np.asarray(perm)
        inv = np.argsort(p)
        t = self.table
        return Loop(p[t[np.ix_(inv, inv)]])


def validate(raw) -> Loop:
    """Check a raw square array and return it as a :class:`Loop`."""
    return Loop(raw)


def _is_associative_on(t: np.ndarray, elems) -> bool:
    idx = np.array(sorted(elems))
    a = t[np.ix_(idx, idx)]
    # (xy)z vs x(yz) for x, y, z in idx
    xy_z = t[a[:, :, None], idx[None, None, :]]
    x_yz = t[idx[:, None, None], a[None, :, :]]
    return bool(np.array_equal(xy_z, x_yz))


def normalize(square) -> Loop:
    """Relabel an arbitrary latin square that has an identity so that it is 0.

    The identity ``e`` is swapped with 0 by a symbol/row/column relabelling,
    which is an isomorphism of the underlying quasigroup.
    """
    s = np.array(square, dtype=np.int64)
    n = s.shape[0]
    ident = np.arange(n)
    for e in range(n):
        if np.array_equal(s[e], ident) and np.array_equal(s[:, e], ident):
            perm = ident.copy()
            perm[0], perm[e] = e, 0
            inv = np.argsort(perm)
            return Loop(perm[s[np.ix_(inv, inv)]])
    raise NoIdentity("latin square has no two-sided identity element")


def direct_product(a: Loop, b: Loop) -> Loop:
    """``A x B`` with ``(x, y)`` encoded as ``x * |B| + y``."""
    na, nb = a.n, b.n
    x = np.arange(na * nb)
    xa, xb = x // nb, x % nb
    t = a.table[xa[:, None], xa[None, :]] * nb + b.table[xb[:, None], xb[None, :]]
    return Loop(t)


def cyclic_group(n: int) -> Loop:
    r = np.arange(n)
    return Loop((r[:, None] + r[None, :]) % n, name=f"Z{n}")


# -- text format ---------------------------------------------------------------


def format_loop(q: Loop) -> str:
    lines = [str(q.n)]
    lines.extend(" ".join(str(int(v)) for v in row) for row in q.table)
    return "\n".join(lines) + "\n"


def parse_loop(text: str) -> Loop:
    """Parse the loop text format: ``n`` then ``n`` rows; ``#`` comments allowed."""
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise BadEntry("empty loop file")
    if len(rows[0]) != 1:
        raise BadEntry("first line must hold the order n alone")
    n = int(rows[0][0])
    body = rows[1:]
    if len(body) != n or any(len(r) != n for r in body):
        raise BadEntry(f"expected {n} rows of {n} integers")
    return Loop([[int(v) for v in r] for r in body])


def read_loop(path) -> Loop:
    q = parse_loop(Path(path).read_text())
    q.name = Path(path).stem
    return q


def write_loop(q: Loop, path) -> None:
    Path(path).write_text(format_loop(q))
