"""Numba kernel for right Bol latin-square completion.

The whole propagation state lives in one flat int64 array ``S`` (passing a
single array keeps jitted calls cheap).  With ``nn = n*n`` and cells
``c = x*n + y`` its segments are:

``S[c]``            value of ``x*y``, or -1
``S[nn + c]``       bitmask of candidate values for the cell
``S[2nn + x*n+v]``  the ``y`` with ``x*y = v`` once known, else -1
``S[3nn + v*n+y]``  the ``x`` with ``x*y = v`` once known, else -1
``S[4nn + c]``      value queued for the cell, or -1
``S[5nn + i]``      queue of cells with a queued value
``S[6nn]``          set to 1 whenever a sweep narrows a domain

Deductions are queued through ``_force`` and applied by ``_drain``, so every
write passes the domain check and the latin elimination.
"""
from __future__ import annotations

import numpy as np
from numba import njit

FAIL = -1

_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)
_CTZ_TABLE = np.array([
    0, 1, 48, 2, 57, 49, 28, 3, 61, 58, 50, 42, 38, 29, 17, 4,
    62, 55, 59, 36, 53, 51, 43, 22, 45, 39, 33, 30, 24, 18, 12, 5,
    63, 47, 56, 27, 60, 41, 37, 16, 54, 35, 52, 21, 44, 32, 23, 11,
    46, 26, 40, 15, 34, 20, 31, 10, 25, 14, 19, 9, 13, 8, 7, 6], dtype=np.int64)


def state_size(n: int) -> int:
    return 6 * n * n + 1


@njit(cache=True)
def _ctz(m):
    """Index of the lowest set bit of a nonzero mask."""
    low = np.uint64(m & -m)
    return _CTZ_TABLE[(low * _DEBRUIJN) >> np.uint64(58)]


@njit(cache=True)
def _force(S, c, v, sp, nn):
    """Queue ``cell c := v``; returns the new queue length or FAIL."""
    if S[c] >= 0:
        return sp if S[c] == v else FAIL
    if (S[nn + c] >> v) & 1 == 0:
        return FAIL
    p = 4 * nn + c
    if S[p] < 0:
        S[p] = v
        S[5 * nn + sp] = c
        return sp + 1
    return sp if S[p] == v else FAIL


@njit(cache=True)
def _bol(S, x, y, z, n, nn, sp):
    """((xy)z)y = x((yz)y), forcing the last unknown product when possible."""
    u = S[x * n + y]
    s = S[y * n + z]
    v = S[u * n + z] if u >= 0 else -1
    w = S[v * n + y] if v >= 0 else -1
    t = S[s * n + y] if s >= 0 else -1
    w2 = S[x * n + t] if t >= 0 else -1
    if w >= 0 and w2 >= 0:
        return sp if w == w2 else FAIL
    if w >= 0:
        if t >= 0:
            return _force(S, x * n + t, w, sp, nn)
        tt = S[2 * nn + x * n + w]           # x * tt = w
        if tt < 0:
            return sp
        if s >= 0:
            return _force(S, s * n + y, tt, sp, nn)
        ss = S[3 * nn + tt * n + y]          # ss * y = tt
        if ss < 0:
            return sp
        return _force(S, y * n + z, ss, sp, nn)
    if w2 >= 0:
        if v >= 0:
            return _force(S, v * n + y, w2, sp, nn)
        vv = S[3 * nn + w2 * n + y]          # vv * y = w2
        if vv < 0:
            return sp
        if u >= 0:
            return _force(S, u * n + z, vv, sp, nn)
        uu = S[3 * nn + vv * n + z]          # uu * z = vv
        if uu < 0:
            return sp
        return _force(S, x * n + y, uu, sp, nn)
    return sp


@njit(cache=True)
def _lnuc(S, a, y, z, n, nn, sp):
    """a(yz) = (ay)z for a prescribed left-nucleus element ``a``."""
    s = S[y * n + z]
    lhs = S[a * n + s] if s >= 0 else -1
    u = S[a * n + y]
    rhs = S[u * n + z] if u >= 0 else -1
    if lhs >= 0 and rhs >= 0:
        return sp if lhs == rhs else FAIL
    if lhs >= 0:
        if u >= 0:
            return _force(S, u * n + z, lhs, sp, nn)
        uu = S[3 * nn + lhs * n + z]
        if uu >= 0:
            return _force(S, a * n + y, uu, sp, nn)
        return sp
    if rhs >= 0:
        if s >= 0:
            return _force(S, a * n + s, rhs, sp, nn)
        ss = S[2 * nn + a * n + rhs]
        if ss >= 0:
            return _force(S, y * n + z, ss, sp, nn)
    return sp


@njit(cache=True)
def _restrict(S, c, mask, sp, nn):
    """Intersect the domain of cell ``c`` with ``mask``."""
    if S[c] >= 0:
        return sp if (mask >> S[c]) & 1 else FAIL
    d = nn + c
    nd = S[d] & mask
    if nd == 0:
        return FAIL
    if nd != S[d]:
        S[d] = nd
        S[6 * nn] = 1
        if nd & (nd - 1) == 0:
            return _force(S, c, _ctz(nd), sp, nn)
    return sp


@njit(cache=True)
def _union_col(S, first, col, n, nn):
    """Union over ``v`` in the domain of ``first`` of the domains of ``(v, col)``."""
    m = S[nn + first]
    out = np.int64(0)
    while m:
        v = _ctz(m)
        m &= m - 1
        out |= S[nn + v * n + col]
    return out


@njit(cache=True)
def _union_row(S, first, row, n, nn):
    """Union over ``v`` in the domain of ``first`` of the domains of ``(row, v)``."""
    m = S[nn + first]
    out = np.int64(0)
    while m:
        v = _ctz(m)
        m &= m - 1
        out |= S[nn + row * n + v]
    return out


@njit(cache=True)
def _prune_col(S, first, col, target, n, nn, sp):
    """Keep ``v`` in the domain of ``first`` only if ``(v, col)`` can take a value in ``target``."""
    if S[first] >= 0:
        return sp
    m = S[nn + first]
    keep = np.int64(0)
    while m:
        v = _ctz(m)
        m &= m - 1
        if S[nn + v * n + col] & target:
            keep |= np.int64(1) << v
    return _restrict(S, first, keep, sp, nn)


@njit(cache=True)
def _prune_row(S, first, row, target, n, nn, sp):
    """Keep ``v`` in the domain of ``first`` only if ``(row, v)`` can take a value in ``target``."""
    if S[first] >= 0:
        return sp
    m = S[nn + first]
    keep = np.int64(0)
    while m:
        v = _ctz(m)
        m &= m - 1
        if S[nn + row * n + v] & target:
            keep |= np.int64(1) << v
    return _restrict(S, first, keep, sp, nn)


@njit(cache=True)
def _bol_filter(S, x, y, z, u, s, n, nn, sp):
    """Domain filtering for ((xy)z)y = x((yz)y) given ``u = xy`` and ``s = yz``.

    The left side ranges over ``(v, y)`` for ``v`` in the domain of
    ``(u, z)``; the right side over ``(x, t)`` for ``t`` in that of ``(s, y)``.
    """
    left = _union_col(S, u * n + z, y, n, nn)
    right = _union_row(S, s * n + y, x, n, nn)
    both = left & right
    if both == 0:
        return FAIL
    if left != both:
        sp = _prune_col(S, u * n + z, y, both, n, nn, sp)
        if sp == FAIL:
            return FAIL
        v = S[u * n + z]
        if v >= 0:
            sp = _restrict(S, v * n + y, both, sp, nn)
            if sp == FAIL:
                return FAIL
    if right != both:
        sp = _prune_row(S, s * n + y, x, both, n, nn, sp)
        if sp == FAIL:
            return FAIL
        t = S[s * n + y]
        if t >= 0:
            sp = _restrict(S, x * n + t, both, sp, nn)
    return sp


@njit(cache=True)
def _lnuc_filter(S, a, y, z, n, nn, sp):
    """Domain filtering for a(yz) = (ay)z."""
    left = _union_row(S, y * n + z, a, n, nn)
    right = _union_col(S, a * n + y, z, n, nn)
    both = left & right
    if both == 0:
        return FAIL
    if left != both:
        sp = _prune_row(S, y * n + z, a, both, n, nn, sp)
        if sp == FAIL:
            return FAIL
        s = S[y * n + z]
        if s >= 0:
            sp = _restrict(S, a * n + s, both, sp, nn)
            if sp == FAIL:
                return FAIL
    if right != both:
        sp = _prune_col(S, a * n + y, z, both, n, nn, sp)
        if sp == FAIL:
            return FAIL
        u = S[a * n + y]
        if u >= 0:
            sp = _restrict(S, u * n + z, both, sp, nn)
    return sp


@njit(cache=True)
def _set(S, c, v, n, nn, sp):
    """Write ``cell c := v`` and strike ``v`` from the row and column."""
    x = c // n
    y = c % n
    S[c] = v
    bit = np.int64(1) << v
    S[nn + c] = bit
    S[2 * nn + x * n + v] = y
    S[3 * nn + v * n + y] = x
    for k in range(n):
        for d in (x * n + k, k * n + y):
            if d == c or S[d] >= 0 or (S[nn + d] & bit) == 0:
                continue
            m = S[nn + d] & ~bit
            S[nn + d] = m
            if m == 0:
                return FAIL
            if m & (m - 1) == 0:
                sp = _force(S, d, _ctz(m), sp, nn)
                if sp == FAIL:
                    return FAIL
    return sp


@njit(cache=True)
def _triggers(S, a, b, n, nn, sp):
    """Re-examine Bol triples in which the product ``a*b`` now appears."""
    for z in range(n):                       # (x, y) = (a, b)
        sp = _bol(S, a, b, z, n, nn, sp)
        if sp == FAIL:
            return FAIL
    for x in range(n):
        sp = _bol(S, x, a, b, n, nn, sp)     # (y, z) = (a, b)
        if sp == FAIL:
            return FAIL
        y = S[2 * nn + x * n + a]            # (xy, z) = (a, b)
        if y >= 0:
            sp = _bol(S, x, y, b, n, nn, sp)
            if sp == FAIL:
                return FAIL
        u = S[x * n + b]                     # ((xy)z, y) = (a, b)
        if u >= 0:
            z = S[2 * nn + u * n + a]
            if z >= 0:
                sp = _bol(S, x, b, z, n, nn, sp)
                if sp == FAIL:
                    return FAIL
        s = S[3 * nn + b * n + x]            # (x, (yz)y) = (a, b), x plays y
        if s >= 0:
            z = S[2 * nn + x * n + s]
            if z >= 0:
                sp = _bol(S, a, x, z, n, nn, sp)
                if sp == FAIL:
                    return FAIL
    z = S[2 * nn + b * n + a]                # (yz, y) = (a, b)
    if z >= 0:
        for x in range(n):
            sp = _bol(S, x, b, z, n, nn, sp)
            if sp == FAIL:
                return FAIL
    return sp


@njit(cache=True)
def _drain(S, n, nn, sp, bol):
    while sp > 0:
        sp -= 1
        c = S[5 * nn + sp]
        v = S[4 * nn + c]
        S[4 * nn + c] = -1
        if S[c] >= 0:
            if S[c] != v:
                return FAIL
            continue
        if (S[nn + c] >> v) & 1 == 0:
            return FAIL
        sp = _set(S, c, v, n, nn, sp)
        if sp == FAIL:
            return FAIL
        if bol:
            sp = _triggers(S, c // n, c % n, n, nn, sp)
            if sp == FAIL:
                return FAIL
    return 0


@njit(cache=True)
def _sweep(S, n, nn, bol, lnuc):
    """One full pass of hidden singles, Bol triples and nucleus constraints."""
    sp = 0
    for x in range(n):
        for v in range(n):
            if S[2 * nn + x * n + v] < 0:        # v not yet placed in row x
                cnt = 0
                last = -1
                for y in range(n):
                    c = x * n + y
                    if S[c] < 0 and (S[nn + c] >> v) & 1:
                        cnt += 1
                        last = c
                if cnt == 0:
                    return FAIL
                if cnt == 1:
                    sp = _force(S, last, v, sp, nn)
                    if sp == FAIL:
                        return FAIL
            if S[3 * nn + v * n + x] < 0:        # v not yet placed in column x
                cnt = 0
                last = -1
                for y in range(n):
                    c = y * n + x
                    if S[c] < 0 and (S[nn + c] >> v) & 1:
                        cnt += 1
                        last = c
                if cnt == 0:
                    return FAIL
                if cnt == 1:
                    sp = _force(S, last, v, sp, nn)
                    if sp == FAIL:
                        return FAIL
    if bol:
        for x in range(n):
            for y in range(n):
                u = S[x * n + y]
                for z in range(n):
                    s = S[y * n + z]
                    if u < 0 and s < 0:
                        continue
                    # cheap inline test first: most triples are settled
                    v = S[u * n + z] if u >= 0 else -1
                    w = S[v * n + y] if v >= 0 else -1
                    t = S[s * n + y] if s >= 0 else -1
                    w2 = S[x * n + t] if t >= 0 else -1
                    if w >= 0 and w2 >= 0:
                        if w != w2:
                            return FAIL
                        continue
                    if w >= 0 or w2 >= 0:
                        sp = _bol(S, x, y, z, n, nn, sp)
                        if sp == FAIL:
                            return FAIL
                    if u >= 0 and s >= 0:
                        sp = _bol_filter(S, x, y, z, u, s, n, nn, sp)
                        if sp == FAIL:
                            return FAIL
    for a in lnuc:
        for y in range(n):
            for z in range(n):
                sp = _lnuc(S, a, y, z, n, nn, sp)
                if sp == FAIL:
                    return FAIL
                sp = _lnuc_filter(S, a, y, z, n, nn, sp)
                if sp == FAIL:
                    return FAIL
    return sp


@njit(cache=True)
def propagate(S, n, sp, bol, lnuc):
    """Run deductions to a fixpoint; returns False on contradiction."""
    nn = n * n
    while True:
        if _drain(S, n, nn, sp, bol) == FAIL:
            return False
        S[6 * nn] = 0
        sp = _sweep(S, n, nn, bol, lnuc)
        if sp == FAIL:
            return False
        if sp == 0 and S[6 * nn] == 0:
            return True


@njit(cache=True)
def _popcount(m):
    c = 0
    while m:
        m &= m - 1
        c += 1
    return c


@njit(cache=True)
def search(n, S0, bol, lnuc, split_depth, solutions, frontier, max_nodes, heuristic=1):
    """Depth-first completion from a propagated root state ``S0``.

    Complete tables go to ``solutions`` (rows of length ``n*n``).  When
    ``split_depth >= 0`` nodes at that depth are written to ``frontier``
    (rows holding the first ``4*n*n`` entries of the state) instead of
    being expanded.  Values are tried in increasing order on the open cell
    with fewest candidates.  Ties go to the cell whose branches have failed
    most often so far (``heuristic=1``), to the cell with most filled
    neighbours in its row and column (``heuristic=2``), then to the smallest
    index; ``heuristic=0`` uses the index alone.

    Returns ``(n_solutions, n_frontier, nodes, complete)``; counts past
    capacity are still tallied so the caller can detect overflow, and
    ``complete`` is False when ``max_nodes > 0`` stopped the search.
    """
    nn = n * n
    keep = 4 * nn
    maxd = nn + 1
    ST = np.empty((maxd, keep), dtype=np.int64)
    W = np.empty(6 * nn + 1, dtype=np.int64)
    cell = np.full(maxd, -1, dtype=np.int64)
    todo = np.zeros(maxd, dtype=np.int64)
    wdeg = np.zeros(nn, dtype=np.int64)
    ST[0] = S0[:keep]
    nsol = 0
    nfront = 0
    nodes = 0
    depth = 0
    fresh = True
    while depth >= 0:
        if fresh:
            nodes += 1
            fresh = False
            if max_nodes > 0 and nodes > max_nodes:
                return nsol, nfront, nodes, False
            if split_depth >= 0 and depth == split_depth:
                if nfront < frontier.shape[0]:
                    frontier[nfront] = ST[depth]
                nfront += 1
                depth -= 1
                continue
            best = -1
            bestc = 1 << 30
            for c in range(nn):
                if ST[depth, c] < 0:
                    pc = _popcount(ST[depth, nn + c])
                    if heuristic == 1:
                        pc = pc * 4096 - wdeg[c]
                    elif heuristic == 2:
                        x = c // n
                        y = c % n
                        known = 0
                        for k in range(n):
                            if ST[depth, x * n + k] >= 0:
                                known += 1
                            if ST[depth, k * n + y] >= 0:
                                known += 1
                        pc = pc * 4096 - known
                    if pc < bestc:
                        bestc = pc
                        best = c
            if best < 0:
                if nsol < solutions.shape[0]:
                    solutions[nsol] = ST[depth, :nn]
                nsol += 1
                depth -= 1
                continue
            cell[depth] = best
            todo[depth] = ST[depth, nn + best]
        if todo[depth] == 0:
            depth -= 1
            continue
        m = todo[depth]
        v = _ctz(m)
        todo[depth] = m & (m - 1)
        W[:keep] = ST[depth]
        W[4 * nn:5 * nn] = -1
        sp = _force(W, cell[depth], v, 0, nn)
        if sp != FAIL and propagate(W, n, sp, bol, lnuc):
            depth += 1
            ST[depth] = W[:keep]
            fresh = True
        else:
            wdeg[cell[depth]] += 1
    return nsol, nfront, nodes, True


@njit(cache=True)
def root_state(n, T0, D0, bol, lnuc):
    """Push the prescribed cells of ``T0`` through the propagator.

    Returns ``(ok, S)``.
    """
    nn = n * n
    S = np.full(6 * nn + 1, -1, dtype=np.int64)
    S[nn:2 * nn] = D0
    S[6 * nn] = 0
    sp = 0
    for c in range(nn):
        if T0[c] >= 0:
            sp = _force(S, c, T0[c], sp, nn)
            if sp == FAIL:
                return False, S
    ok = propagate(S, n, sp, bol, lnuc)
    return ok, S
