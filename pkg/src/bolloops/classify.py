"""Isomorphism and isotopism of loops, and reduction to class representatives."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import morph
from .loop import Loop, normalize


@dataclass
class IsoCertificate:
    source: Loop
    target: Loop
    bijection: np.ndarray | None

    def __bool__(self) -> bool:
        return self.bijection is not None

    def verify(self) -> bool:
        phi = self.bijection
        if phi is None:
            return False
        return (phi[0] == 0 and len(set(phi.tolist())) == self.source.n
                and morph.is_homomorphism(self.source, self.target, phi))


def invariant_key(q: Loop) -> tuple:
    """Cheap isomorphism invariant used to bucket loops before backtracking."""
    sig = morph.signature_multiset(q)
    return (q.n, q.count_commuting_pairs(), tuple(sorted(sig.items())))


def are_isomorphic(a: Loop, b: Loop) -> IsoCertificate:
    if a.n != b.n or a.count_commuting_pairs() != b.count_commuting_pairs():
        return IsoCertificate(a, b, None)
    phi = morph.find_isomorphism(a, b)
    cert = IsoCertificate(a, b, phi)
    if phi is not None:
        assert cert.verify(), "isomorphism search returned a bad certificate"
    return cert


def up_to_isomorphism(loops: Sequence[Loop]) -> tuple[list[Loop], list[int]]:
    """Representatives (first occurrence kept, input order) and each input's class index."""
    reps: list[Loop] = []
    buckets: dict[tuple, list[int]] = {}
    membership: list[int] = []
    for q in loops:
        key = invariant_key(q)
        bucket = buckets.setdefault(key, [])
        for k in bucket:
            if are_isomorphic(q, reps[k]):
                membership.append(k)
                break
        else:
            bucket.append(len(reps))
            membership.append(len(reps))
            reps.append(q)
    return reps, membership


def principal_isotope(q: Loop, a: int, b: int) -> Loop:
    """``x o y = (x/b)(a\\y)``, relabelled so that its identity ``ab`` becomes 0."""
    t = q.table
    iso = t[q.rdiv[:, b][:, None], q.ldiv[a][None, :]]
    return normalize(iso)


@dataclass
class IsotopyWitness:
    a: int
    b: int
    bijection: np.ndarray


def find_isotopy(a: Loop, b: Loop) -> IsotopyWitness | None:
    """Search all principal isotopes of ``a`` for one isomorphic to ``b``.

    Every isotope of a finite loop is isomorphic to a principal isotope, so
    this is complete.
    """
    if a.n != b.n:
        return None
    target_key = invariant_key(b)
    target_comm = b.count_commuting_pairs()
    for x in range(a.n):
        for y in range(a.n):
            iso = principal_isotope(a, x, y)
            if iso.count_commuting_pairs() != target_comm:
                continue
            if invariant_key(iso) != target_key:
                continue
            phi = morph.find_isomorphism(iso, b)
            if phi is not None:
                return IsotopyWitness(x, y, phi)
    return None


def are_isotopic(a: Loop, b: Loop) -> bool:
    return find_isotopy(a, b) is not None


def identify(q: Loop, catalog: dict[str, Loop] | None = None) -> str | None:
    """Name of the catalog loop isomorphic to ``q``, or None.

    The default catalog is the fifteen right Bol loops of order 27.
    """
    if catalog is None:
        from .constructions import standard_loops
        catalog = standard_loops(check=False)
    key = invariant_key(q)
    for name, ref in catalog.items():
        if ref.n == q.n and invariant_key(ref) == key and are_isomorphic(q, ref):
            return name
    return None
