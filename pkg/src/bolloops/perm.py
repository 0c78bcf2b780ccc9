"""Permutations and permutation groups (deterministic Schreier-Sims).

Permutations are tuples of images: ``p[i]`` is the image of ``i``.  They
compose right-to-left, ``compose(a, b)(x) == a(b(x))``.
"""
from __future__ import annotations

from math import lcm
from typing import Iterable, Sequence

import numpy as np

Perm = tuple

ENUMERATION_CAP = 10**6


class PermError(ValueError):
    pass


class DegreeMismatch(PermError):
    pass


class EmptyDegree(PermError):
    pass


class PointOutOfRange(PermError):
    pass


class TooLargeToEnumerate(PermError):
    pass


def perm(images: Sequence[int]) -> Perm:
    p = tuple(int(i) for i in images)
    if sorted(p) != list(range(len(p))):
        raise PermError("images do not form a bijection")
    return p


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(a: Perm, b: Perm) -> Perm:
    if len(a) != len(b):
        raise DegreeMismatch(f"degrees {len(a)} and {len(b)} differ")
    return tuple([a[i] for i in b])


def inverse(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, ai in enumerate(a):
        inv[ai] = i
    return tuple(inv)


def is_identity(a: Perm) -> bool:
    return all(i == ai for i, ai in enumerate(a))


def perm_order(a: Perm) -> int:
    seen = [False] * len(a)
    out = 1
    for i in range(len(a)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = a[j]
            length += 1
        out = lcm(out, length)
    return out


class PermGroup:
    """A permutation group with a base and strong generating set.

    ``strong[i]`` holds the strong generators fixing ``base[:i]`` and
    ``transversals[i]`` maps each point of the orbit of ``base[i]`` under them
    to a coset representative ``u`` with ``u(base[i]) == point``.
    """

    def __init__(self, gens: Iterable[Sequence[int]], degree: int | None = None,
                 base_prefix: Sequence[int] = ()):
        gens = [tuple(int(i) for i in g) for g in gens]
        if degree is None:
            if not gens:
                raise EmptyDegree("degree needed for an empty generator list")
            degree = len(gens[0])
        if degree <= 0:
            raise EmptyDegree("degree must be positive")
        for g in gens:
            if len(g) != degree:
                raise DegreeMismatch("generators of unequal degree")
        for pt in base_prefix:
            if not 0 <= pt < degree:
                raise PointOutOfRange(pt)
        self.degree = degree
        seen = set()
        self.gens: list[Perm] = []
        for g in gens:
            if not is_identity(g) and g not in seen:
                seen.add(g)
                self.gens.append(g)
        self._schreier_sims(list(base_prefix))

    # -- construction -------------------------------------------------------

    def _schreier_sims(self, base: list[int]) -> None:
        n = self.degree
        self.base = base
        strong: list[list[Perm]] = []
        for g in self.gens:
            if all(g[b] == b for b in base):
                base.append(next(i for i in range(n) if g[i] != i))
        strong = [[g for g in self.gens if all(g[b] == b for b in base[:i])]
                  for i in range(len(base))]
        trans = [self._transversal(base[i], strong[i]) for i in range(len(base))]
        i = len(base) - 1
        while i >= 0:
            restart = None
            orbit = trans[i]
            for pt, u in list(orbit.items()):
                for s in strong[i]:
                    # Schreier generator  u_{s(pt)}^-1 s u_pt  fixes base[i]
                    h = compose(inverse(orbit[s[pt]]), compose(s, u))
                    h, j = self._strip(h, i + 1, trans, base)
                    if j < len(base) or not is_identity(h):
                        if j == len(base):
                            base.append(next(x for x in range(n) if h[x] != x))
                            strong.append([])
                            trans.append({})
                        for lvl in range(i + 1, j + 1):
                            strong[lvl].append(h)
                            trans[lvl] = self._transversal(base[lvl], strong[lvl])
                        restart = j
                        break
                if restart is not None:
                    break
            if restart is not None:
                i = restart
            else:
                i -= 1
        self.strong = strong
        self.transversals = trans

    def _transversal(self, pt: int, gens: list[Perm]) -> dict[int, Perm]:
        trans = {pt: identity(self.degree)}
        queue = [pt]
        for x in queue:
            u = trans[x]
            for g in gens:
                y = g[x]
                if y not in trans:
                    trans[y] = compose(g, u)
                    queue.append(y)
        return trans

    def _strip(self, g: Perm, start: int, trans=None, base=None) -> tuple[Perm, int]:
        trans = self.transversals if trans is None else trans
        base = self.base if base is None else base
        for i in range(start, len(base)):
            b = g[base[i]]
            u = trans[i].get(b)
            if u is None:
                return g, i
            g = compose(inverse(u), g)
        return g, len(base)

    # -- queries ------------------------------------------------------------

    def order(self) -> int:
        out = 1
        for t in self.transversals:
            out *= len(t)
        return out

    def __len__(self) -> int:
        return self.order()

    def contains(self, g: Sequence[int]) -> bool:
        g = tuple(g)
        if len(g) != self.degree:
            raise DegreeMismatch("degree mismatch")
        h, _ = self._strip(g, 0)
        return is_identity(h)

    __contains__ = contains

    def orbit(self, pt: int) -> set[int]:
        if not 0 <= pt < self.degree:
            raise PointOutOfRange(pt)
        seen = {pt}
        queue = [pt]
        for x in queue:
            for g in self.gens:
                if g[x] not in seen:
                    seen.add(g[x])
                    queue.append(g[x])
        return seen

    def point_stabilizer(self, pt: int) -> "PermGroup":
        if not 0 <= pt < self.degree:
            raise PointOutOfRange(pt)
        g = PermGroup(self.gens, self.degree, base_prefix=[pt])
        stab = g.strong[1] if len(g.strong) > 1 else []
        return PermGroup(stab, self.degree)

    def fixed_points(self) -> set[int]:
        return {i for i in range(self.degree) if all(g[i] == i for g in self.gens)}

    def elements(self) -> np.ndarray:
        """All elements as rows of an ``(order, degree)`` array.

        Row 0 is the identity.
        """
        if self.order() > ENUMERATION_CAP:
            raise TooLargeToEnumerate(f"order {self.order()} exceeds {ENUMERATION_CAP}")
        els = np.arange(self.degree, dtype=np.int16)[None, :]
        # every element is u_0 u_1 ... u_k with u_i from transversal i
        for t in reversed(self.transversals):
            reps = [np.asarray(u, dtype=np.int16) for u in t.values()]
            els = np.concatenate([u[els] for u in reps])
        return els

    def exponent(self) -> int:
        els = self.elements()
        ident = np.arange(self.degree, dtype=np.int16)
        out = 1
        cur = els.copy()
        pending = np.ones(len(els), dtype=bool)
        k = 1
        while True:
            done = pending & np.all(cur == ident, axis=1)
            if done.any():
                out = lcm(out, k)
                pending &= ~done
            if not pending.any():
                return out
            cur = cur[np.arange(len(els))[:, None], els]
            k += 1

    def center_order(self) -> int:
        els = self.elements().astype(np.int64)
        keep = np.ones(len(els), dtype=bool)
        for g in self.gens:
            ga = np.asarray(g)
            keep &= np.all(els[:, ga] == ga[els], axis=1)
        return int(keep.sum())

    def cayley_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(elements, table)`` with ``table[i, j]`` the index of ``e_i e_j``."""
        els = self.elements().astype(np.int64)
        index = {row.tobytes(): k for k, row in enumerate(els)}
        m = len(els)
        table = np.empty((m, m), dtype=np.int64)
        for i in range(m):
            prods = els[i][els]
            table[i] = [index[r.tobytes()] for r in prods]
        return els, table


def group_from_generators(gens, degree: int | None = None) -> PermGroup:
    return PermGroup(gens, degree)


def group_exponent(g: PermGroup) -> int:
    return g.exponent()


def group_center_order(g: PermGroup) -> int:
    return g.center_order()
