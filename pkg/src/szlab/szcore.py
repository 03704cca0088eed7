"""Sz(q) from its matrix generators, and its Sylow 2-subgroup in pair form.

Pairs (a, b) in F_q^2 multiply by the twisted rule

    (a1, b1) * (a2, b2) = (a1 + a2, b1 + b2 + a1 a2^theta)

and the matrices S(a, b), C(lam), T generate Sz(q) inside GL_4(q).  The full
group is only materialised at q = 8 (29120 elements); pair-form checks run
for larger q.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import gf2field as gf
from .certify import Certificate
from .gf2field import FieldParams
from .groupengine import GroupTable, SubgroupSet, all_subgroups, bool_to_mask


class PPair(NamedTuple):
    a: int
    b: int


IDENTITY = PPair(0, 0)


def p_mul(p: FieldParams, x: PPair, y: PPair) -> PPair:
    return PPair(x[0] ^ y[0], x[1] ^ y[1] ^ gf.mul(p, x[0], gf.theta(p, y[0])))


def norm(p: FieldParams, a: int) -> int:
    """a^(1 + theta)."""
    return gf.mul(p, a, gf.theta(p, a))


def p_inv(p: FieldParams, x: PPair) -> PPair:
    return PPair(x[0], x[1] ^ norm(p, x[0]))


def p_pow(p: FieldParams, x: PPair, k: int) -> PPair:
    r = IDENTITY
    for _ in range(k):
        r = p_mul(p, r, x)
    return r


def p_commutator(p: FieldParams, x: PPair, y: PPair) -> PPair:
    """x y x^-1 y^-1."""
    return p_mul(p, p_mul(p, p_mul(p, x, y), p_inv(p, x)), p_inv(p, y))


def commutator_closed_form(p: FieldParams, a1: int, a2: int) -> int:
    return gf.mul(p, a1, gf.theta(p, a2)) ^ gf.mul(p, a2, gf.theta(p, a1))


def c_act(p: FieldParams, lam: int, x: PPair) -> PPair:
    """(a, b) -> (lam a, lam^(1+theta) b)."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    return PPair(gf.mul(p, lam, x[0]), gf.mul(p, norm(p, lam), x[1]))


def pairs(p: FieldParams):
    q = p.q
    return (PPair(a, b) for a in range(q) for b in range(q))


def pair_index(p: FieldParams, x: PPair) -> int:
    return x[0] * p.q + x[1]


def pair_group_table(p: FieldParams) -> GroupTable:
    """Dense Cayley table of (F_q^2, *); index a*q + b, so (0, 0) is element 0."""
    q = p.q
    if q * q > 5000:
        raise ValueError("pair-form Cayley table only for q^2 <= 5000")
    mul_t, th = field_arrays(p)
    idx = np.arange(q * q)
    a, b = np.divmod(idx, q)
    na = a[:, None] ^ a[None, :]
    nb = b[:, None] ^ b[None, :] ^ mul_t[a[:, None], th[a][None, :]]
    return GroupTable(na * q + nb, f"P({q})")


def field_arrays(p: FieldParams) -> tuple[np.ndarray, np.ndarray]:
    """Multiplication table and theta map of a small field as numpy arrays."""
    q = p.q
    mul_t = np.array([[gf.mul(p, x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
    th = np.array([gf.theta(p, x) for x in range(q)], dtype=np.int64)
    return mul_t, th


# ---------------------------------------------------------------- matrices

def s_matrix(p: FieldParams, a: int, b: int) -> np.ndarray:
    m = gf.mul
    at = gf.theta(p, a)
    corner = m(p, m(p, a, a), at) ^ m(p, a, b) ^ gf.theta(p, b)
    return np.array([
        [1, 0, 0, 0],
        [a, 1, 0, 0],
        [b, at, 1, 0],
        [corner, m(p, a, at) ^ b, a, 1],
    ], dtype=np.int64)


def c_matrix(p: FieldParams, lam: int) -> np.ndarray:
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    half = p.theta_exponent // 2
    lh = gf.pow(p, lam, half)
    d = [gf.mul(p, lam, lh), lh, gf.inverse(p, lh), gf.inverse(p, gf.mul(p, lam, lh))]
    return np.diag(d).astype(np.int64)


def t_matrix() -> np.ndarray:
    return np.eye(4, dtype=np.int64)[::-1].copy()


def mat_mul(p: FieldParams, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = np.zeros((4, 4), dtype=np.int64)
    for i in range(4):
        for j in range(4):
            v = 0
            for k in range(4):
                v ^= gf.mul(p, int(A[i, k]), int(B[k, j]))
            out[i, j] = v
    return out


def sz_generators(p: FieldParams) -> list[np.ndarray]:
    """S(x^i, 0) and S(0, x^i) for i < m, then C(lam*) for the least primitive lam*, then T."""
    gens = [s_matrix(p, 1 << i, 0) for i in range(p.m)]
    gens += [s_matrix(p, 0, 1 << i) for i in range(p.m)]
    gens.append(c_matrix(p, gf.primitive_element(p)))
    gens.append(t_matrix())
    return gens


def matrix_key(p: FieldParams, M: np.ndarray) -> int:
    k = 0
    for v in np.asarray(M).ravel()[::-1]:
        k = (k << p.m) | int(v)
    return k


# -------------------------------------------------------------- the group

class SzTable:
    """Sz(8) as indexed elements.

    Each element carries its 4x4 matrix and its permutation of the q^2 + 1
    points of the ovoid orbit of <e_4>.  Products are resolved through a
    3-point base: the images of the base points determine the element.
    """

    def __init__(self, p: FieldParams, matrices: np.ndarray, perms: np.ndarray,
                 base: tuple[int, int, int], name: str):
        self.params = p
        self.matrices = matrices
        self.perms = perms
        self.order = len(matrices)
        self.npoints = perms.shape[1]
        self.base = base
        self.name = name
        keys = self._key(perms[:, base[0]], perms[:, base[1]], perms[:, base[2]])
        lut = np.full(self.npoints**3, -1, dtype=np.int64)
        lut[keys] = np.arange(self.order)
        if (lut >= 0).sum() != self.order:
            raise AssertionError("base does not separate group elements")
        self._lut = lut
        self.inv = self._lut[self._key(*(np.argsort(perms, axis=1)[:, b] for b in base))]
        self._matrix_index = {matrix_key(p, M): i for i, M in enumerate(matrices)}

    def _key(self, x, y, z):
        n = self.npoints
        return (np.asarray(x, dtype=np.int64) * n + y) * n + z

    def mul_array(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        P = self.perms
        imgs = [P[a, P[b, pt]] for pt in self.base]
        return self._lut[self._key(*imgs)]

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_array(a, b))

    def conjugate(self, members, g: int) -> np.ndarray:
        """{g h g^-1 : h in members}."""
        return self.mul_array(self.mul_array(g, members), self.inv[g])

    def conjugate_by_all(self, h: int) -> np.ndarray:
        """g h g^-1 for every g, indexed by g."""
        g = np.arange(self.order)
        return self.mul_array(self.mul_array(g, h), self.inv)

    def index_of_matrix(self, M: np.ndarray) -> int:
        return self._matrix_index[matrix_key(self.params, M)]

    def elements(self) -> range:
        return range(self.order)

    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        g = np.arange(self.order)
        cur = g.copy()
        k = 1
        while (orders == 0).any():
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            cur = self.mul_array(cur, g)
            k += 1
        return orders

    def subgroup(self, idx) -> SubgroupSet:
        members = np.zeros(self.order, dtype=bool)
        members[np.asarray(idx, dtype=np.int64)] = True
        return SubgroupSet(int(members.sum()), bool_to_mask(members))

    def closure(self, gens) -> SubgroupSet:
        members = np.zeros(self.order, dtype=bool)
        members[0] = True
        frontier = np.array([0])
        g = np.asarray(gens, dtype=np.int64)
        while frontier.size:
            prod = self.mul_array(frontier[:, None], g[None, :]).ravel()
            new = np.unique(prod[~members[prod]])
            members[new] = True
            frontier = new
        return SubgroupSet(int(members.sum()), bool_to_mask(members))

    def normalizer(self, H: SubgroupSet, gens=None) -> SubgroupSet:
        """N_G(H) from a generating set of H, vectorised over all g."""
        gens = H.indices() if gens is None else gens
        members = np.zeros(self.order, dtype=bool)
        members[H.indices()] = True
        ok = np.ones(self.order, dtype=bool)
        for h in gens:
            ok &= members[self.conjugate_by_all(int(h))]
        return SubgroupSet(int(ok.sum()), bool_to_mask(ok))


@dataclass
class SzGroup:
    params: FieldParams
    table: SzTable
    sylow: SubgroupSet
    torus: SubgroupSet
    generators: list[int]

    @property
    def order(self) -> int:
        return self.table.order


def expected_order(q: int) -> int:
    return q * q * (q * q + 1) * (q - 1)


def build_sz(p: FieldParams) -> SzGroup:
    """Breadth-first closure of the generators, then the point action.

    Element indices follow BFS discovery order over the generators in the
    order S, C, T; the identity is element 0.
    """
    if p.m != 3:
        raise ValueError("the full Sz(q) table is only built at q = 8 (m = 3)")
    q = p.q
    mul_t, _ = field_arrays(p)
    gens = np.stack(sz_generators(p))
    limit = expected_order(q)

    def keys_of(mats: np.ndarray) -> np.ndarray:
        flat = mats.reshape(len(mats), 16)
        shifts = np.arange(16, dtype=np.int64) * p.m
        return (flat.astype(np.int64) << shifts).sum(axis=1)

    elems = [np.eye(4, dtype=np.int64)[None]]
    seen = {int(keys_of(elems[0])[0])}
    layer = elems[0]
    total = 1
    while len(layer):
        # products layer[n] @ gens[g], ordered by (n, g)
        prod = mul_t[layer[:, None, :, :, None], gens[None, :, None, :, :]]
        prod = np.bitwise_xor.reduce(prod, axis=3).reshape(-1, 4, 4)
        ks = keys_of(prod)
        _, first = np.unique(ks, return_index=True)
        first.sort()
        fresh = [i for i in first if int(ks[i]) not in seen]
        seen.update(int(ks[i]) for i in fresh)
        layer = prod[fresh]
        if len(layer):
            elems.append(layer)
            total += len(layer)
        if total > limit:
            raise AssertionError(f"closure exceeded |Sz({q})| = {limit}")
    matrices = np.concatenate(elems)

    perms = _point_action(p, matrices, mul_t)
    base = _find_base(perms)
    table = SzTable(p, matrices, perms, base, f"Sz({q})")

    sylow = table.subgroup([table.index_of_matrix(s_matrix(p, a, b))
                            for a in range(q) for b in range(q)])
    torus = table.subgroup([table.index_of_matrix(c_matrix(p, lam)) for lam in range(1, q)])
    gen_idx = [table.index_of_matrix(M) for M in sz_generators(p)]
    return SzGroup(p, table, sylow, torus, gen_idx)


def _normalize(vecs: np.ndarray, p: FieldParams) -> np.ndarray:
    inv = np.array([0] + [gf.inverse(p, x) for x in range(1, p.q)], dtype=np.int64)
    mul_t, _ = field_arrays(p)
    nz = vecs != 0
    lead = np.argmax(nz, axis=-1)
    lead_val = np.take_along_axis(vecs, lead[..., None], axis=-1)
    return mul_t[inv[lead_val], vecs]


def _point_action(p: FieldParams, matrices: np.ndarray, mul_t: np.ndarray) -> np.ndarray:
    """Permutation action on the orbit of the line <e_4> (q^2 + 1 points)."""
    q = p.q
    start = np.array([0, 0, 0, 1], dtype=np.int64)

    def apply(mats, v):
        # mats (..., 4, 4) times column vectors v (..., 4)
        return np.bitwise_xor.reduce(mul_t[mats, v[..., None, :]], axis=-1)

    def vkey(v):
        return ((v[..., 0] * q + v[..., 1]) * q + v[..., 2]) * q + v[..., 3]

    images = _normalize(apply(matrices, start[None, :]), p)
    pts_keys, first = np.unique(vkey(images), return_index=True)
    points = images[np.sort(first)]
    npts = len(points)
    lookup = np.full(q**4, -1, dtype=np.int64)
    lookup[vkey(points)] = np.arange(npts)
    perms = np.empty((len(matrices), npts), dtype=np.int64)
    for j in range(npts):
        img = _normalize(apply(matrices, np.broadcast_to(points[j], (len(matrices), 4))), p)
        perms[:, j] = lookup[vkey(img)]
    if (perms < 0).any():
        raise AssertionError("point orbit is not closed")
    return perms


def _find_base(perms: np.ndarray) -> tuple[int, int, int]:
    n = perms.shape[1]
    for b1 in range(1, n):
        for b2 in range(b1 + 1, n):
            keys = (perms[:, 0] * n + perms[:, b1]) * n + perms[:, b2]
            if np.unique(keys).size == len(perms):
                return (0, b1, b2)
    raise AssertionError("no separating base of three points")


def sylow_conjugates(G: SzGroup) -> list[SubgroupSet]:
    """All conjugates of P, by orbit search under the group generators."""
    t = G.table
    orbit = {G.sylow.mask: G.sylow}
    stack = [G.sylow]
    while stack:
        H = stack.pop()
        idx = H.indices()
        for g in G.generators:
            K = t.subgroup(t.conjugate(idx, g))
            if K.mask not in orbit:
                orbit[K.mask] = K
                stack.append(K)
    return sorted(orbit.values())


def build_normalizer(G: SzGroup) -> SubgroupSet:
    """Gamma = P C, checked against N_G(P)."""
    t = G.table
    prod = t.mul_array(G.sylow.indices()[:, None], G.torus.indices()[None, :]).ravel()
    gamma = t.subgroup(prod)
    q = G.params.q
    if gamma.order != q * q * (q - 1):
        raise AssertionError("P C has the wrong order")
    if t.normalizer(G.sylow) != gamma:
        raise AssertionError("N_G(P) differs from P C")
    return gamma


# ------------------------------------------------------- structure checks

def _rank(vectors) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def verify_special_structure(p: FieldParams, seed: int = 0) -> Certificate:
    """Pair-form checks: Z(P) = {(0, b)}, P' = Phi(P) = mho(P) = Z, exponent 4, class 2.

    At q^2 <= 5000 the dense table of P additionally checks that every
    subgroup containing Z or contained in Z is normal.
    """
    q = p.q
    mul_t, th = field_arrays(p) if q <= 256 else (None, None)
    checks: dict[str, bool] = {}

    # commutator formula against the definition
    rng = random.Random(seed)
    sample = list(pairs(p)) if q <= 8 else [PPair(rng.randrange(q), rng.randrange(q)) for _ in range(300)]
    checks["commutator_formula"] = all(
        p_commutator(p, x, y) == PPair(0, commutator_closed_form(p, x[0], y[0]))
        for x in sample for y in sample[:64])

    # centre: (a, b) central iff its commutator with every pair vanishes,
    # which depends on the first coordinates only
    if mul_t is not None:
        a = np.arange(q)
        comm = mul_t[a[:, None], th[a][None, :]] ^ mul_t[a[None, :], th[a][:, None]]
        central_a = np.flatnonzero((comm == 0).all(axis=1))
        comm_values = np.unique(comm)
    else:
        comm_rows = [[commutator_closed_form(p, x, y) for y in range(q)] for x in range(q)]
        central_a = [x for x in range(q) if not any(comm_rows[x])]
        comm_values = sorted({v for row in comm_rows for v in row})
    centre_size = len(central_a) * q
    checks["centre_is_0_b"] = list(central_a) == [0]
    derived_dim = _rank(int(v) for v in comm_values)
    squares = [norm(p, x) for x in range(q)]
    mho_dim = _rank(squares)
    checks["derived_eq_Z"] = derived_dim == p.m
    checks["mho_eq_Z"] = mho_dim == p.m
    checks["frattini_eq_Z"] = _rank(list(map(int, comm_values)) + squares) == p.m
    # exponent 4: x^2 = (0, a^(1+theta)) central and nontrivial for a != 0
    all_pairs = list(pairs(p)) if q <= 32 else sample
    checks["exponent_4"] = all(p_pow(p, x, 4) == IDENTITY for x in all_pairs) and any(
        p_pow(p, x, 2) != IDENTITY for x in all_pairs)
    checks["square_formula"] = all(p_mul(p, x, x) == PPair(0, norm(p, x[0])) for x in all_pairs)
    # class 2: nonabelian with P' <= Z
    # commutators are (0, c), so P' <= Z; nontrivial P' means class exactly 2
    checks["class_2"] = derived_dim > 0 and checks["centre_is_0_b"]
    # P/Z and Z are both elementary abelian of order q
    checks["quotient_elementary_abelian"] = all(p_mul(p, x, x)[0] == 0 for x in all_pairs)
    checks["Z_elementary_abelian"] = all(p_mul(p, PPair(0, b), PPair(0, b)) == IDENTITY
                                         for b in range(q))
    subgroup_checks = None
    if q * q <= 5000:
        t = pair_group_table(p)
        Zs = SubgroupSet.from_indices(range(q))  # pairs (0, b) have index b
        subs = all_subgroups(t) if q <= 8 else None
        if subs is not None:
            gens = t.generators()
            def normal(H):
                idx = H.indices()
                return all(SubgroupSet.from_indices(t.conjugate(idx, g)) == H for g in gens)
            subgroup_checks = all(normal(H) for H in subs
                                  if H.issubset(Zs) or Zs.issubset(H))
            checks["Z_related_subgroups_normal"] = subgroup_checks
    cert = Certificate(
        name="special_structure",
        params={"m": p.m, "q": q},
        lhs={"centre_order": centre_size, "derived_dim": derived_dim, "mho_dim": mho_dim},
        rhs={"centre_order": q, "derived_dim": p.m, "mho_dim": p.m},
        relation="=",
        holds=all(checks.values()),
    )
    cert.notes = [{k: v for k, v in checks.items()}]
    return cert
