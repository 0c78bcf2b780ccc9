"""Central extensions of ``Zp`` by a group ``F`` inside the right Bol variety.

For a group ``F`` the extension ``(a,x)(b,y) = (a+b+t(x,y), xy)`` satisfies
the right Bol identity iff, for every ``x, y, z`` in ``F``,

    t(x,y) + t(xy,z) + t(xyz,y) = t(y,z) + t(yz,y) + t(x,yzy)   (mod p),

which is linear in the entries of the cocycle ``t``.  Unknowns are ``t(x,y)``
for ``x, y != 1`` (normalised cocycles), indexed ``(x-1)(m-1) + (y-1)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from . import gfp
from .classify import up_to_isomorphism
from .constructions import central_extension
from .invariants import automorphism_group
from .loop import Loop, LoopError, cyclic_group, direct_product

log = logging.getLogger(__name__)


class NotAGroup(LoopError):
    pass


def _var(m: int, x, y):
    return (x - 1) * (m - 1) + (y - 1)


def bol_equations(p: int, F: Loop) -> sparse.csr_matrix:
    """One row per triple ``(x, y, z)`` of ``F``; identity arguments drop out."""
    m = F.n
    t = F.table
    e = np.arange(m)
    x, y, z = (a.ravel() for a in np.meshgrid(e, e, e, indexing="ij"))
    xy = t[x, y]
    xyz = t[xy, z]
    yz = t[y, z]
    yzy = t[yz, y]
    terms = [(x, y, 1), (xy, z, 1), (xyz, y, 1), (y, z, -1), (yz, y, -1), (x, yzy, -1)]
    rows, cols, vals = [], [], []
    ridx = np.arange(len(x))
    for a, b, s in terms:
        keep = (a != 0) & (b != 0)
        rows.append(ridx[keep])
        cols.append(_var(m, a[keep], b[keep]))
        vals.append(np.full(keep.sum(), s))
    mat = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(len(x), (m - 1) ** 2),
    ).tocsr()
    mat.sum_duplicates()
    mat.data %= p
    mat.eliminate_zeros()
    return mat


def coboundary_basis(p: int, F: Loop) -> np.ndarray:
    """Rows ``t_g(x,y) = g(xy) - g(x) - g(y)`` for ``g`` the indicator of each ``v != 1``."""
    m = F.n
    t = F.table
    out = np.zeros((m - 1, (m - 1) ** 2), dtype=np.int64)
    xs, ys = np.meshgrid(np.arange(1, m), np.arange(1, m), indexing="ij")
    idx = _var(m, xs, ys).ravel()
    for v in range(1, m):
        g = np.zeros(m, dtype=np.int64)
        g[v] = 1
        out[v - 1, idx] = (g[t[xs, ys]] - g[xs] - g[ys]).ravel() % p
    return out


def pad(p: int, m: int, vec) -> np.ndarray:
    theta = np.zeros((m, m), dtype=np.int64)
    theta[1:, 1:] = np.asarray(vec).reshape(m - 1, m - 1) % p
    return theta


@dataclass
class CocycleSpace:
    p: int
    factor: Loop
    solutions: np.ndarray      # basis of the Bol cocycles, as rows
    coboundaries: np.ndarray   # echelon basis of the coboundary subspace
    complement: np.ndarray     # rows completing coboundaries to a basis of solutions

    @property
    def dimension(self) -> int:
        return len(self.solutions)

    @property
    def quotient_dimension(self) -> int:
        return len(self.complement)

    def satisfies(self, vec) -> bool:
        eqs = bol_equations(self.p, self.factor)
        return not np.any((eqs @ np.asarray(vec, dtype=np.int64)) % self.p)


def bol_cocycle_space(p: int, F: Loop, chunk: int = 512, seed: int = 0) -> CocycleSpace:
    """Solve the Bol cocycle equations and split off the coboundaries.

    Rows are fed to an incremental echelon form in a fixed pseudo-random
    order; once the rank stops growing the candidate kernel is checked
    against every equation, and any violated rows are fed back in.
    """
    if not F.is_associative():
        raise NotAGroup("the linear reduction needs an associative factor")
    eqs = bol_equations(p, F)
    cols = eqs.shape[1]
    order = np.random.default_rng(seed).permutation(eqs.shape[0])
    ech = gfp.IncrementalEchelon(cols, p)
    stale = 0
    pos = 0
    while True:
        while pos < len(order) and stale < 3:
            block = eqs[order[pos:pos + chunk]].toarray()
            pos += chunk
            stale = 0 if ech.add(block) else stale + 1
        kern = ech.kernel()
        resid = (eqs @ kern.T) % p if len(kern) else np.zeros((eqs.shape[0], 0))
        bad = np.flatnonzero(np.any(resid, axis=1))
        if not len(bad):
            break
        ech.add(eqs[bad[:chunk]].toarray())
        stale = 0
    log.info("p=%d: %d unknowns, rank %d, %d Bol cocycles", p, cols, ech.rank, len(kern))
    cob, _ = gfp.rref(coboundary_basis(p, F), p)
    assert not np.any((eqs @ cob.T) % p), "a coboundary violates the Bol equations"
    comp = gfp.independent_subset(cob, kern, p)
    return CocycleSpace(p, F, kern, cob, comp)


def _primitive_root(p: int) -> int:
    for g in range(1, p):
        if len({pow(g, k, p) for k in range(1, p)}) == p - 1:
            return g
    raise ValueError(p)


def quotient_action_matrices(space: CocycleSpace) -> list[np.ndarray]:
    """Matrices of ``Aut(Zp) x Aut(F)`` generators on cocycle classes.

    ``(lam, alpha)`` sends ``t`` to ``(x, y) -> lam * t(alpha^-1 x, alpha^-1 y)``;
    the extensions for ``t`` and its image are isomorphic, as are extensions
    whose cocycles differ by a coboundary.  Classes are written in the
    coordinates of ``space.complement``; a row-vector ``c`` maps to ``c @ A``.
    """
    p, F = space.p, space.factor
    m = F.n
    basis = np.concatenate([space.complement, space.coboundaries])
    k = len(space.complement)
    _, piv = gfp.rref(basis, p)
    # coordinates of v in `basis` are v[piv] @ inv(basis[:, piv])
    inv = gfp.inverse(basis[:, piv], p)
    alphas = [np.asarray(g) for g in automorphism_group(F).gens]
    gens = [(_primitive_root(p), np.arange(m))] + [(1, a) for a in alphas]
    mats = []
    for lam, alpha in gens:
        ainv = np.argsort(alpha)
        rows = []
        for vec in space.complement:
            theta = pad(p, m, vec)
            img = (lam * theta[ainv[:, None], ainv[None, :]]) % p
            coords = (img[1:, 1:].ravel()[piv] @ inv) % p
            rows.append(coords[:k])
        mats.append(np.array(rows, dtype=np.int64).reshape(k, k))
    return mats


def orbit_representatives(p: int, k: int, mats: list[np.ndarray]) -> np.ndarray:
    """Lexicographically least vector of each orbit on ``GF(p)^k``."""
    size = p ** k
    weights = p ** np.arange(k - 1, -1, -1)
    vecs = (np.arange(size)[:, None] // weights[None, :]) % p
    src = np.concatenate([np.arange(size)] * len(mats)) if mats else np.zeros(0, dtype=np.int64)
    dst = np.concatenate([((vecs @ a) % p) @ weights for a in mats]) if mats else src
    graph = sparse.coo_matrix((np.ones(len(src)), (src, dst)), shape=(size, size))
    _, labels = connected_components(graph, directed=True, connection="weak")
    # encoding is most-significant-first, so the least index is lexicographically least
    first = np.full(labels.max() + 1, size)
    np.minimum.at(first, labels, np.arange(size))
    return vecs[np.sort(first)]


def central_extensions_in_variety(p: int, F: Loop | None = None) -> list[Loop]:
    """All right Bol central extensions of ``Zp`` by ``F`` (default ``Cp x Cp``), up to isomorphism."""
    if F is None:
        F = direct_product(cyclic_group(p), cyclic_group(p))
    space = bol_cocycle_space(p, F)
    k = space.quotient_dimension
    mats = quotient_action_matrices(space)
    reps = orbit_representatives(p, k, mats)
    log.info("p=%d: %d cocycle classes, %d orbits", p, p ** k, len(reps))
    loops = []
    for coords in reps:
        vec = (coords @ space.complement) % p if k else np.zeros((F.n - 1) ** 2, dtype=np.int64)
        q = central_extension(p, F, pad(p, F.n, vec))
        loops.append(q)
    classes, _ = up_to_isomorphism(loops)
    return classes
