"""Backtracking search for loop homomorphisms that are bijections.

Shared by isomorphism testing and automorphism-group computation.  The
source loop is generated by a small set ``g_1..g_k``; a straight-line
program expresses every other element as a product of earlier ones, so an
isomorphism is pinned down by the images of the generators.  Candidate
images are restricted to elements with the same isomorphism-invariant
signature, and each stage is checked on the subloop generated so far.
"""
from __future__ import annotations

from collections import Counter
from functools import lru_cache
from typing import Iterator

import numpy as np

from .loop import Loop


def element_signatures(q: Loop) -> np.ndarray:
    """Per-element isomorphism invariants as an ``(n, 7)`` integer array.

    Columns: size of ``<x>``, number of elements commuting with ``x``,
    left/middle/right nucleus flags, and the number of ``y`` with
    ``x(xy) = (xx)y`` and with ``(yx)x = y(xx)``.
    """
    return _signatures(q)


def _signatures(q: Loop) -> np.ndarray:
    cached = getattr(q, "_sig_cache", None)
    if cached is not None:
        return cached
    t = q.table
    n = q.n
    cyc = np.array([len(q.subloop_generated([x])) for x in range(n)])
    comm = np.count_nonzero(t == t.T, axis=1)
    lnuc = np.zeros(n, dtype=np.int64)
    mnuc = np.zeros(n, dtype=np.int64)
    rnuc = np.zeros(n, dtype=np.int64)
    col = t.T
    for x in range(n):
        lnuc[x] = np.array_equal(t[x][t], t[t[x]])
        mnuc[x] = np.array_equal(t[:, t[x]], t[col[x]])
        rnuc[x] = np.array_equal(t[:, col[x]], col[x][t])
    r = np.arange(n)
    xx = t[r, r]
    left_alt = np.count_nonzero(t[r[:, None], t] == t[xx], axis=1)
    right_alt = np.count_nonzero(t[t.T, r[:, None]] == t.T[xx], axis=1)
    sig = np.stack([cyc, comm, lnuc, mnuc, rnuc, left_alt, right_alt], axis=1)
    sig.setflags(write=False)
    q._sig_cache = sig
    return sig


def signature_multiset(q: Loop) -> Counter:
    return Counter(map(tuple, _signatures(q).tolist()))


def generating_set(q: Loop) -> list[int]:
    """Greedy small generating set.

    Each step adds the element whose inclusion produces the largest subloop;
    ties go to the element with the rarest signature, then the smallest index.
    """
    sig = _signatures(q)
    keys = [tuple(s) for s in sig.tolist()]
    freq = Counter(keys)
    gens: list[int] = []
    current = q.subloop_generated([])
    while len(current) < q.n:
        best = None
        for x in range(q.n):
            if x in current:
                continue
            size = len(q.subloop_generated(gens + [x]))
            key = (-size, freq[keys[x]], x)
            if best is None or key < best[0]:
                best = (key, x)
        gens.append(best[1])
        current = q.subloop_generated(gens)
    return gens


class Program:
    """Straight-line program building a loop from its generators.

    ``stages[k]`` lists ``(target, a, b)`` with ``target = a*b`` for the
    elements first reached once generator ``k`` is available, and
    ``closures[k]`` is the sorted subloop generated by the first ``k+1``
    generators.
    """

    def __init__(self, q: Loop, gens: list[int]):
        t = q.table
        self.gens = list(gens)
        known = [0]
        seen = {0}
        self.stages: list[list[tuple[int, int, int]]] = []
        self.closures: list[np.ndarray] = []
        for g in gens:
            steps = []
            if g not in seen:
                seen.add(g)
                known.append(g)
            i = 0
            # naive saturation; fine at the orders used here
            while i < len(known):
                a = known[i]
                for j in range(i + 1):
                    b = known[j]
                    for x, y in ((a, b), (b, a)):
                        z = int(t[x, y])
                        if z not in seen:
                            seen.add(z)
                            known.append(z)
                            steps.append((z, x, y))
                i += 1
            self.stages.append(steps)
            self.closures.append(np.array(sorted(seen)))


@lru_cache(maxsize=64)
def _program(q: Loop) -> Program:
    return Program(q, generating_set(q))


def iter_isomorphisms(a: Loop, b: Loop, first_only: bool = False) -> Iterator[np.ndarray]:
    """Yield every isomorphism ``a -> b`` as an image array."""
    if a.n != b.n:
        return
    sa, sb = _signatures(a), _signatures(b)
    if signature_multiset(a) != signature_multiset(b):
        return
    prog = _program(a)
    n = a.n
    tb = b.table
    ta = a.table
    keys_b: dict[tuple, list[int]] = {}
    for y, s in enumerate(sb.tolist()):
        keys_b.setdefault(tuple(s), []).append(y)

    phi = np.full(n, -1, dtype=np.int64)
    phi[0] = 0
    used = np.zeros(n, dtype=bool)
    used[0] = True

    def stage(k: int) -> Iterator[np.ndarray]:
        if k == len(prog.gens):
            yield phi.copy()
            return
        g = prog.gens[k]
        closure = prog.closures[k]
        for cand in keys_b.get(tuple(sa[g].tolist()), ()):
            if used[cand]:
                continue
            assigned = [g]
            phi[g] = cand
            used[cand] = True
            ok = True
            for z, x, y in prog.stages[k]:
                if z == g:
                    continue
                im = tb[phi[x], phi[y]]
                if used[im]:
                    ok = False
                    break
                phi[z] = im
                used[im] = True
                assigned.append(z)
            if ok:
                pc = phi[closure]
                ok = (np.array_equal(sa[closure], sb[pc])
                      and np.array_equal(phi[ta[np.ix_(closure, closure)]],
                                         tb[np.ix_(pc, pc)]))
            if ok:
                yield from stage(k + 1)
            for z in assigned:
                used[phi[z]] = False
                phi[z] = -1

    for iso in stage(0):
        yield iso
        if first_only:
            return


def find_isomorphism(a: Loop, b: Loop) -> np.ndarray | None:
    return next(iter_isomorphisms(a, b, first_only=True), None)


def is_homomorphism(a: Loop, b: Loop, phi) -> bool:
    phi = np.asarray(phi)
    return bool(np.array_equal(phi[a.table], b.table[phi[:, None], phi[None, :]]))
