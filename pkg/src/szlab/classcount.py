"""Counting subgroups of P through complements of Z/H in K/H.

Throughout, m = log2 q.  V = P/Z and Z are both identified with (F_q, +),
an m-dimensional space over F_2, and subspaces are stored as bit masks in
reduced echelon form.  For X <= V with full preimage K, Phi(K) sits inside Z
and V(X) = Z / Phi(K).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from . import gf2field as gf
from .certify import Certificate, divisors, multiplicative_order_of_two, qbinom
from .gf2field import FieldParams

EXHAUSTIVE_CAP = 11


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple[int, ...]  # one row per pivot (its highest bit), pivots ascending

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def span(cls, ambient_dim: int, vectors) -> Subspace:
        rows: dict[int, int] = {}
        for v in vectors:
            v = int(v)
            while v:
                top = v.bit_length() - 1
                if top in rows:
                    v ^= rows[top]
                else:
                    rows[top] = v
                    break
        # back-substitute so each pivot bit appears in one row only
        for top in sorted(rows):
            for other in rows:
                if other != top and (rows[other] >> top) & 1:
                    rows[other] ^= rows[top]
        return cls(ambient_dim, tuple(rows[k] for k in sorted(rows)))

    def elements(self) -> list[int]:
        out = [0]
        for b in self.basis:
            out += [x ^ b for x in out]
        return out

    def __contains__(self, v: int) -> bool:
        for b in reversed(self.basis):
            if (v >> (b.bit_length() - 1)) & 1:
                v ^= b
        return v == 0

    def issubspace(self, other: Subspace) -> bool:
        return all(b in other for b in self.basis)


def enumerate_subspaces(m: int, over_dim: int = 1) -> Iterator[Subspace]:
    """Every subspace of F_2^m exactly once, by dimension then pivot pattern."""
    if over_dim != 1:
        raise NotImplementedError("only subspaces over F_2 are enumerated")
    if m > EXHAUSTIVE_CAP:
        raise ValueError(f"exhaustive subspace enumeration is capped at m = {EXHAUSTIVE_CAP}")
    for k in range(m + 1):
        for pivots in itertools.combinations(range(m), k):
            pivot_set = set(pivots)
            # row with pivot p may use any non-pivot bit below p
            free = [[c for c in range(p) if c not in pivot_set] for p in pivots]
            for choice in itertools.product(*(range(1 << len(f)) for f in free)):
                rows = []
                for p, cols, bits in zip(pivots, free, choice):
                    v = 1 << p
                    for i, c in enumerate(cols):
                        if (bits >> i) & 1:
                            v |= 1 << c
                    rows.append(v)
                yield Subspace(m, tuple(rows))


def frattini_of_X(p: FieldParams, X: Subspace) -> Subspace:
    """Phi(K) for K the preimage of X, as a subspace of Z.

    Squares of K are (0, x^(1+theta)), commutators are (0, x y^theta + y x^theta);
    both are central of exponent 2, so Phi(K) is their F_2-span.
    """
    elems = X.elements()
    th = {x: gf.theta(p, x) for x in elems}
    gens = [gf.mul(p, x, th[x]) for x in elems]
    gens += [gf.mul(p, x, th[y]) ^ gf.mul(p, y, th[x])
             for x, y in itertools.combinations(X.basis, 2)]
    return Subspace.span(p.m, gens)


@dataclass
class ClassCountResult:
    m: int
    exact_class_count: int
    subgroup_count_upper: int
    boundP_closed_form: int


def _frattini_dims(p: FieldParams) -> list[tuple[int, int]]:
    """(dim X, dim Phi(K)) for every subspace X of V."""
    return [(X.dim, frattini_of_X(p, X).dim) for X in enumerate_subspaces(p.m)]


def complement_sum(p: FieldParams, weighted: bool = False) -> int:
    """Sum over X <= V and Y <= V(X) of |L(X, Y')|, times |X'| if ``weighted``.

    The Y-sum only depends on dim V(X), so it runs over dimensions with the
    Gaussian binomial as multiplicity.
    """
    m = p.m
    total = 0
    for dx, dphi in _frattini_dims(p):
        dv = m - dphi
        inner = sum(qbinom(dv, k, 2) << (dx * (dv - k)) for k in range(dv + 1))
        total += inner << (m - dx) if weighted else inner
    return total


def exact_class_count(p: FieldParams) -> ClassCountResult:
    if p.m > 7:
        raise ValueError("exact counting is limited to m <= 7")
    return ClassCountResult(
        m=p.m,
        exact_class_count=complement_sum(p),
        subgroup_count_upper=complement_sum(p, weighted=True),
        boundP_closed_form=boundP_closed_form(p.m),
    )


def subgroup_count_upper(p: FieldParams) -> int:
    if p.m > 7:
        raise ValueError("exact counting is limited to m <= 7")
    return complement_sum(p, weighted=True)


def boundP_closed_form(m: int) -> int:
    return sum(
        qbinom(m, i, 2) * qbinom(m - i, j, 2) * 2 ** (m + i * (m - (i + j + 1)))
        for i in range(m + 1) for j in range(m - i + 1))


def m_of_divisor(d: int, m: int | None = None) -> int:
    """Least r with d | 2^r - 1 (1 for d = 1)."""
    if m is not None and ((1 << m) - 1) % d:
        raise ValueError(f"{d} does not divide 2^{m} - 1")
    return multiplicative_order_of_two(d)


def gamma_divisor_term(m: int, mb: int) -> int:
    N = m // mb
    Q = 1 << mb
    return sum(
        qbinom(N, i, Q) * qbinom(N - i, j, Q) * 2 ** (m + i * (m - mb * (i + j + 1)))
        for i in range(N + 1) for j in range(N - i + 1))


def boundGamma_closed_form(m: int) -> int:
    """Sum over divisors b of 2^m - 1 of the boundP-shaped sum over F_(2^m_b)."""
    if m % 2 == 0:
        raise ValueError("m must be odd")
    return sum(gamma_divisor_term(m, m_of_divisor(b)) for b in divisors((1 << m) - 1))


# ---------------------------------------------------------- oracle helpers

def frattini_dimension_profile(p: FieldParams) -> dict[int, set[int]]:
    """dim X -> set of observed dim Phi(K)."""
    prof: dict[int, set[int]] = {}
    for dx, dphi in _frattini_dims(p):
        prof.setdefault(dx, set()).add(dphi)
    return prof


def frattini_inequality_certificate(p: FieldParams) -> Certificate:
    """|Phi(K)| >= |K : Z| for every Z <= K <= P, i.e. dim Phi(K) >= dim X."""
    bad = [(dx, dphi) for dx, dphi in _frattini_dims(p) if dphi < dx]
    prof = frattini_dimension_profile(p)
    cert = Certificate("frattini_inequality", {"m": p.m}, bad, [], "=", not bad)
    cert.notes = [{str(k): sorted(v) for k, v in sorted(prof.items())}]
    return cert


def b_invariant_subgroups(P_table, subs, lam: int, p: FieldParams) -> list:
    """Subgroups of the pair-form P (index a*q + b) invariant under c_act(lam)."""
    from .szcore import c_act

    q = p.q
    img = [0] * (q * q)
    for a in range(q):
        for b in range(q):
            na, nb = c_act(p, lam, (a, b))
            img[a * q + b] = na * q + nb
    out = []
    for H in subs:
        mask = 0
        for i in H.indices():
            mask |= 1 << img[int(i)]
        if mask == H.mask:
            out.append(H)
    return out


def b_invariant_check(p: FieldParams) -> Certificate:
    """At most one member of each P-class of subgroups is B-invariant, for every B <= C, B != 1."""
    from .groupengine import all_subgroups, subgroup_classes
    from .szcore import pair_group_table

    if p.m != 3:
        raise ValueError("exhaustive B-invariance check runs at m = 3")
    t = pair_group_table(p)
    subs = all_subgroups(t)
    # class membership: map every subgroup to its class representative
    class_of: dict[int, int] = {}
    gens = t.generators()
    for rep, _ in subgroup_classes(t, subs):
        orbit = {rep.mask}
        stack = [rep]
        while stack:
            h = stack.pop()
            for g in gens:
                from .groupengine import SubgroupSet
                c = SubgroupSet.from_indices(t.conjugate(h.indices(), g))
                if c.mask not in orbit:
                    orbit.add(c.mask)
                    stack.append(c)
        for msk in orbit:
            class_of[msk] = rep.mask
    g = gf.primitive_element(p)
    results = {}
    ok = True
    for d in divisors(p.q - 1):
        if d == 1:
            continue
        lam = gf.pow(p, g, (p.q - 1) // d)  # generator of the subgroup of order d
        inv = b_invariant_subgroups(t, subs, lam, p)
        per_class: dict[int, int] = {}
        for H in inv:
            per_class[class_of[H.mask]] = per_class.get(class_of[H.mask], 0) + 1
        ok &= all(v <= 1 for v in per_class.values())
        results[d] = len(inv)
    cert = Certificate("b_invariance", {"m": p.m}, results, None, "at most one per class", ok)
    cert.notes = [f"B of order {d}: {n} invariant subgroups" for d, n in results.items()]
    return cert


def frattini_witness(p: FieldParams) -> tuple[Subspace, Subspace] | None:
    """Two X of equal dimension whose preimages have Frattini subgroups of different order."""
    first: dict[int, tuple[int, Subspace]] = {}
    for X in enumerate_subspaces(p.m):
        d = frattini_of_X(p, X).dim
        if X.dim in first and first[X.dim][0] != d:
            return first[X.dim][1], X
        first.setdefault(X.dim, (d, X))
    return None
