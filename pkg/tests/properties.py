"""Structural facts about right Bol loops of order 27, as executable checks."""
from __future__ import annotations

from sympy import primefactors

from bolloops.invariants import (all_normal_subloops, center, commutant, derived_subloop,
                                 quotient, right_multiplication_group)
from bolloops.loop import Loop


def right_inverse_property(q: Loop) -> bool:
    inv = q.right_inverse
    t = q.table
    return all(t[t[x, y], inv[y]] == x for x in range(q.n) for y in range(q.n))


def right_power_alternative(q: Loop, span=range(-4, 5)) -> bool:
    t = q.table
    for y in range(q.n):
        pw = {k: q.power(y, k) for k in range(2 * min(span), 2 * max(span) + 1)}
        for x in range(q.n):
            for a in span:
                for b in span:
                    if t[t[x, pw[a]], pw[b]] != t[x, pw[a + b]]:
                        return False
    return True


def center_trichotomy(q: Loop, p: int = 3) -> bool:
    z = center(q)
    if len(z) == 1:
        return True
    if q.is_associative() and q.is_commutative():
        return True
    f = quotient(q, z)
    return (len(z) == p and f.n == p * p and f.is_associative() and f.is_commutative()
            and f.exponent() == p)


def normal_order3_subloops_central(q: Loop) -> bool:
    z = center(q)
    return all(h <= z for h in all_normal_subloops(q) if len(h) == 3)


def has_normal_subloop_of_order9(q: Loop) -> bool:
    return any(len(h) == 9 for h in all_normal_subloops(q))


def trivial_center_gives_large_derived(q: Loop) -> bool:
    return len(center(q)) > 1 or len(derived_subloop(q)) == 9


def derived_equals_center_when_small(q: Loop) -> bool:
    z, d = center(q), derived_subloop(q)
    if len(z) == 3 or len(d) == 3:
        return z == d
    return True


def commutant_is_subloop(q: Loop) -> bool:
    c = commutant(q)
    return q.subloop_generated(c) == c


def rmlt_primes_match(q: Loop) -> bool:
    return primefactors(q.n) == primefactors(right_multiplication_group(q).order())


ALL = {
    "right inverse property": right_inverse_property,
    "right power alternative": right_power_alternative,
    "center trichotomy": center_trichotomy,
    "normal order-3 subloops are central": normal_order3_subloops_central,
    "normal subloop of order 9 exists": has_normal_subloop_of_order9,
    "trivial center => |Q'| = 9": trivial_center_gives_large_derived,
    "Q' = Z(Q) when either has order 3": derived_equals_center_when_small,
    "commutant is a subloop": commutant_is_subloop,
    "primes of |Q| and |RMlt(Q)| agree": rmlt_primes_match,
}


def check_catalog(catalog: dict[str, Loop]) -> dict[str, list[str]]:
    """Failures per property (empty lists when everything holds)."""
    return {label: [name for name, q in catalog.items() if not check(q)]
            for label, check in ALL.items()}
