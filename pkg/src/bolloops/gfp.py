"""Linear algebra over the prime field GF(p).

Matrices are integer numpy arrays with entries in ``0..p-1``.  Products go
through float64 BLAS; with ``p < 2**10`` and fewer than ``2**30`` columns the
partial sums stay below ``2**53`` and are exact.
"""
from __future__ import annotations

import numpy as np


def _matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    out = a.astype(np.float64) @ b.astype(np.float64)
    return np.mod(out, p).astype(np.int64)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` mod ``p`` with zero rows dropped."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if len(nz) == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if len(hit):
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{v : a v = 0}`` over GF(p)."""
    a = np.asarray(a)
    cols = a.shape[1]
    r, piv = rref(a, p) if a.shape[0] else (np.zeros((0, cols), dtype=np.int64), [])
    return _kernel_from_rref(r, piv, cols, p)


def _kernel_from_rref(r: np.ndarray, piv: list[int], cols: int, p: int) -> np.ndarray:
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        if len(piv):
            basis[i, piv] = (-r[:, f]) % p
    return basis


class IncrementalEchelon:
    """Row space of a growing set of equations, kept in reduced echelon form."""

    def __init__(self, cols: int, p: int):
        self.p = p
        self.cols = cols
        self.rows = np.zeros((0, cols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, eqs: np.ndarray) -> int:
        """Add a block of rows; return how many were independent of the current span."""
        p = self.p
        eqs = np.asarray(eqs, dtype=np.int64) % p
        if self.rank:
            eqs = (eqs - _matmul(eqs[:, self.pivots], self.rows, p)) % p
        eqs = eqs[np.any(eqs, axis=1)]
        if not len(eqs):
            return 0
        new, newpiv = rref(eqs, p)
        if self.rank:
            self.rows = (self.rows - _matmul(self.rows[:, newpiv], new, p)) % p
        rows = np.concatenate([self.rows, new])
        piv = self.pivots + newpiv
        order = np.argsort(piv)
        self.rows = rows[order]
        self.pivots = [piv[i] for i in order]
        return len(newpiv)

    def kernel(self) -> np.ndarray:
        return _kernel_from_rref(self.rows, self.pivots, self.cols, self.p)


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64) % p
    n = a.shape[0]
    aug, piv = rref(np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1), p)
    if piv[:n] != list(range(n)) or len(aug) < n:
        raise ValueError("matrix is singular mod p")
    return aug[:n, n:]


def independent_subset(base: np.ndarray, extra: np.ndarray, p: int) -> np.ndarray:
    """Rows of ``extra`` that extend the span of ``base``, greedily in order."""
    ech = IncrementalEchelon(extra.shape[1], p)
    if len(base):
        ech.add(base)
    keep = []
    for v in extra:
        if ech.add(v[None, :]):
            keep.append(v)
    return np.array(keep, dtype=np.int64).reshape(-1, extra.shape[1])
