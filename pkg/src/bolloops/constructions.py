"""Explicit constructions of the right Bol loops and groups of order 27.

Element encodings are fixed so emitted tables are reproducible:

* ``Q(x, y, r)`` lives on ``Z3 x Z9`` with ``(u, i)`` stored as ``9u + i``;
* ``Q(M)`` and ``Q(M, N)`` use the row/column index in ``Z27`` directly;
* a central extension of ``Zp`` by ``F`` stores ``(a, x)`` as ``a*|F| + x``.
"""
from __future__ import annotations

import hashlib
from functools import lru_cache

import numpy as np

from .loop import Loop, LoopError, cyclic_group, direct_product


class ConstructionError(ValueError):
    pass


class NotAUnit(ConstructionError):
    pass


class NotALoop(ConstructionError):
    pass


class BadK(ConstructionError):
    pass


class DimensionMismatch(ConstructionError):
    pass


class NotNormalized(ConstructionError):
    pass


# -- central extensions ---------------------------------------------------------


def central_extension(p: int, factor: Loop, theta) -> Loop:
    """The loop on ``Zp x F`` with ``(a,x)(b,y) = (a+b+theta(x,y), xy)``."""
    theta = np.asarray(theta, dtype=np.int64)
    m = factor.n
    if theta.shape != (m, m):
        raise DimensionMismatch(f"cocycle must be {m}x{m}, got {theta.shape}")
    if np.any(theta[0] % p) or np.any(theta[:, 0] % p):
        raise NotNormalized("theta(1, x) and theta(x, 1) must vanish")
    theta = theta % p
    n = p * m
    e = np.arange(n)
    a, x = e // m, e % m
    z = (a[:, None] + a[None, :] + theta[x[:, None], x[None, :]]) % p
    return Loop(z * m + factor.table[x[:, None], x[None, :]])


def extract_cocycle(q: Loop, p: int) -> tuple[Loop, np.ndarray]:
    """Recover ``(F, theta)`` from a loop laid out as :func:`central_extension` emits.

    Assumes elements ``0..p-1`` are the central ``Zp`` (``a`` stored as ``a*m``)
    and the coset representatives of ``F`` are ``0..m-1``.
    """
    m = q.n // p
    t = q.table
    reps = np.arange(m)
    prod = t[reps[:, None], reps[None, :]]
    factor = Loop(prod % m)
    theta = prod // m
    return factor, theta


# -- the Q(x, y, r) family ---------------------------------------------------------


def loop_qxyr(x: int, y: int, r: int) -> Loop:
    """``(u,i)(v,j) = (u+v, i + f(u,v) j + r*floor((u+v)/3))`` on ``Z3 x Z9``."""
    if np.gcd(x, 9) != 1 or np.gcd(y, 9) != 1:
        raise NotAUnit(f"x={x} and y={y} must be units mod 9")
    inv = lambda a: pow(int(a), -1, 9)
    f = np.array([
        [1, 1, 1],
        [x, inv(y), y * inv(x)],
        [y, x * inv(y), inv(x)],
    ]) % 9
    e = np.arange(27)
    u, i = e // 9, e % 9
    uv = u[:, None] + u[None, :]
    second = (i[:, None] + f[u[:, None], u[None, :]] * i[None, :] + r * (uv // 3)) % 9
    try:
        return Loop(9 * (uv % 3) + second, name=f"Q({x},{y},{r})")
    except LoopError as exc:
        raise NotALoop(str(exc)) from exc


# -- the T(M, N) construction ------------------------------------------------------

STANDARD_K = np.arange(9).reshape(3, 3)


def t_block(k: int, K) -> np.ndarray:
    """The 3x3 matrix ``T(k, K)``.

    The top row is the cyclic shift, starting at ``k``, of the unique row of
    ``K`` containing ``k``; every column then runs cyclically through the
    triple ``{3c, 3c+1, 3c+2}`` of its top entry.
    """
    K = np.asarray(K, dtype=np.int64)
    if K.shape != (3, 3) or sorted(K.ravel().tolist()) != list(range(9)):
        raise BadK("K must contain every element of Z9 exactly once")
    rows, cols = np.nonzero(K == k)
    assert len(rows) == 1
    top = np.roll(K[rows[0]], -cols[0])
    r = np.arange(3)[:, None]
    return 3 * (top // 3)[None, :] + (top % 3 + r) % 3


def t_assemble(M, N) -> np.ndarray:
    """The 27x27 matrix whose block ``(i, j)`` is ``T(M[i,j], N-block(i//3, j//3))``."""
    M = np.asarray(M, dtype=np.int64)
    N = np.asarray(N, dtype=np.int64)
    out = np.empty((27, 27), dtype=np.int64)
    for i in range(9):
        for j in range(9):
            K = N[3 * (i // 3):3 * (i // 3) + 3, 3 * (j // 3):3 * (j // 3) + 3]
            out[3 * i:3 * i + 3, 3 * j:3 * j + 3] = t_block(M[i, j], K)
    return out


def _coarse_offset() -> np.ndarray:
    i = np.arange(27)
    return 9 * ((i[:, None] // 9 + i[None, :] // 9) % 3)


def loop_qmn(M, N, name: str | None = None) -> Loop:
    try:
        return Loop(t_assemble(M, N) + _coarse_offset(), name=name)
    except LoopError as exc:
        raise NotALoop(str(exc)) from exc


def loop_qm(M, name: str | None = None) -> Loop:
    return loop_qmn(M, np.tile(STANDARD_K, (3, 3)), name=name)


M2 = np.array([
    [0, 3, 6, 0, 3, 6, 0, 3, 6],
    [3, 6, 0, 3, 6, 0, 6, 1, 5],
    [6, 0, 3, 6, 0, 3, 5, 7, 0],
    [0, 3, 6, 0, 7, 4, 1, 6, 3],
    [3, 6, 0, 6, 3, 2, 4, 0, 6],
    [6, 0, 3, 5, 1, 8, 7, 3, 0],
    [0, 8, 3, 1, 5, 6, 1, 8, 4],
    [3, 0, 8, 8, 0, 4, 8, 3, 2],
    [6, 4, 1, 4, 8, 0, 4, 2, 7],
])

M6 = np.array([
    [0, 3, 6, 0, 3, 6, 0, 3, 6],
    [3, 6, 0, 3, 7, 2, 6, 2, 4],
    [6, 0, 3, 7, 0, 5, 4, 8, 0],
    [0, 4, 6, 0, 8, 4, 1, 6, 4],
    [3, 8, 2, 6, 3, 0, 4, 0, 7],
    [6, 0, 4, 3, 1, 8, 6, 5, 0],
    [0, 7, 3, 1, 4, 6, 1, 8, 3],
    [3, 0, 7, 6, 0, 5, 7, 3, 2],
    [6, 5, 2, 4, 7, 0, 4, 1, 7],
])

M9 = np.array([
    [0, 3, 6, 0, 3, 6, 0, 3, 6],
    [3, 6, 0, 5, 8, 2, 3, 6, 0],
    [6, 0, 3, 7, 1, 4, 6, 0, 3],
    [0, 1, 2, 0, 6, 3, 0, 2, 1],
    [3, 4, 5, 4, 1, 7, 4, 3, 5],
    [6, 7, 8, 8, 5, 2, 8, 7, 6],
    [0, 8, 4, 0, 2, 1, 0, 8, 4],
    [3, 2, 7, 3, 5, 4, 5, 1, 6],
    [6, 5, 1, 6, 8, 7, 7, 3, 2],
])

N9 = np.array([
    [0, 1, 2, 0, 1, 2, 0, 1, 2],
    [3, 4, 5, 3, 4, 5, 3, 4, 5],
    [6, 7, 8, 6, 7, 8, 6, 7, 8],
    [0, 3, 6, 0, 5, 7, 0, 8, 4],
    [1, 4, 7, 1, 3, 8, 1, 6, 5],
    [2, 5, 8, 2, 4, 6, 2, 7, 3],
    [0, 7, 5, 0, 6, 3, 0, 5, 7],
    [1, 8, 3, 1, 7, 4, 1, 3, 8],
    [2, 6, 4, 2, 8, 5, 2, 4, 6],
])

M10 = np.array([
    [0, 3, 6, 0, 3, 6, 0, 3, 6],
    [3, 6, 0, 5, 8, 2, 8, 2, 5],
    [6, 0, 3, 7, 1, 4, 4, 7, 1],
    [0, 1, 2, 0, 4, 8, 0, 2, 1],
    [3, 4, 5, 6, 1, 5, 4, 3, 5],
    [6, 7, 8, 3, 7, 2, 8, 7, 6],
    [0, 3, 6, 0, 2, 1, 0, 4, 8],
    [3, 6, 0, 8, 7, 6, 6, 1, 5],
    [6, 0, 3, 4, 3, 5, 3, 7, 2],
])

N10 = np.array([
    [0, 1, 2, 0, 1, 2, 0, 1, 2],
    [3, 4, 5, 3, 4, 5, 3, 4, 5],
    [6, 7, 8, 6, 7, 8, 6, 7, 8],
    [0, 4, 8, 0, 5, 7, 0, 8, 4],
    [1, 5, 6, 1, 3, 8, 1, 6, 5],
    [2, 3, 7, 2, 4, 6, 2, 7, 3],
    [0, 4, 8, 0, 4, 8, 0, 5, 7],
    [1, 5, 6, 1, 5, 6, 1, 3, 8],
    [2, 3, 7, 2, 3, 7, 2, 4, 6],
])

MATRICES = {"M2": M2, "M6": M6, "M9": M9, "N9": N9, "M10": M10, "N10": N10}


def matrices_digest() -> str:
    """SHA-256 over the embedded 9x9 matrices, in a fixed order."""
    h = hashlib.sha256()
    for key in sorted(MATRICES):
        h.update(key.encode())
        h.update(MATRICES[key].astype(np.int8).tobytes())
    return h.hexdigest()


# -- groups of order p^3 -------------------------------------------------------------


def heisenberg_group(p: int = 3) -> Loop:
    """Upper unitriangular 3x3 matrices over Zp: ``(a,b,c)`` stored as ``a p^2 + b p + c``."""
    e = np.arange(p ** 3)
    a, b, c = e // (p * p), (e // p) % p, e % p
    A, B, C = (v[:, None] for v in (a, b, c))
    A2, B2, C2 = (v[None, :] for v in (a, b, c))
    # (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a b')
    return Loop(((A + A2) % p) * p * p + ((B + B2) % p) * p + (C + C2 + A * B2) % p,
                name=f"Heis{p}")


def metacyclic_group(p: int = 3) -> Loop:
    """``Z_{p^2} : Z_p`` with ``(a,b)(c,d) = (a + (1+p)^b c, b + d)``; ``(a,b)`` stored as ``a p + b``."""
    m = p * p
    e = np.arange(m * p)
    a, b = e // p, e % p
    twist = np.array([pow(1 + p, int(k), m) for k in range(p)])
    first = (a[:, None] + twist[b][:, None] * a[None, :]) % m
    return Loop(first * p + (b[:, None] + b[None, :]) % p, name=f"Z{m}:Z{p}")


def elementary_abelian(p: int, k: int) -> Loop:
    g = cyclic_group(p)
    out = g
    for _ in range(k - 1):
        out = direct_product(out, g)
    out.name = f"Z{p}^{k}"
    return out


# -- the catalog ------------------------------------------------------------------

_BOL_BUILDERS = {
    "B1": lambda: loop_qxyr(1, 7, 0),
    "B2": lambda: loop_qm(M2),
    "B3": lambda: loop_qxyr(1, 4, 0),
    "B4": lambda: loop_qxyr(1, 7, 3),
    "B5": lambda: loop_qxyr(4, 4, 0),
    "B6": lambda: loop_qm(M6),
    "B7": lambda: loop_qxyr(7, 7, 0),
    "B8": lambda: loop_qxyr(4, 4, 3),
    "B9": lambda: loop_qmn(M9, N9),
    "B10": lambda: loop_qmn(M10, N10),
}

_GROUP_BUILDERS = {
    "Z27": lambda: cyclic_group(27),
    "Z9xZ3": lambda: direct_product(cyclic_group(9), cyclic_group(3)),
    "Z3^3": lambda: elementary_abelian(3, 3),
    "Heis3": lambda: heisenberg_group(3),
    "Z9:Z3": lambda: metacyclic_group(3),
}

GROUP_NAMES = tuple(_GROUP_BUILDERS)
BOL_NAMES = tuple(_BOL_BUILDERS)
CATALOG_NAMES = GROUP_NAMES + BOL_NAMES


@lru_cache(maxsize=None)
def build(name: str) -> Loop:
    """Build a catalog loop by name (``Z27``, ``Z9xZ3``, ``Z3^3``, ``Heis3``, ``Z9:Z3``, ``B1``..``B10``)."""
    if name in _BOL_BUILDERS:
        q = _BOL_BUILDERS[name]()
    elif name in _GROUP_BUILDERS:
        q = _GROUP_BUILDERS[name]()
    else:
        raise KeyError(f"unknown loop {name!r}; choose from {', '.join(CATALOG_NAMES)}")
    q.name = name
    return q


def standard_loops(check: bool = True) -> dict[str, Loop]:
    """All 15 right Bol loops of order 27 keyed by name (groups first)."""
    out = {name: build(name) for name in CATALOG_NAMES}
    if check:
        for name, q in out.items():
            if not q.is_right_bol():
                raise NotALoop(f"{name} is not right Bol")
            if (name in _GROUP_BUILDERS) != q.is_associative():
                raise NotALoop(f"{name} has the wrong associativity")
    return out
