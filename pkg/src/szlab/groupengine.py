"""Indexed finite groups, bitset subgroups, subgroup lattices and p(G).

Elements are the integers 0..order-1 with the identity at 0.  A subgroup is
stored as a Python int bit mask (bit i set iff element i is a member), which
makes equality, hashing and intersection cheap and exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

DIRECT_MODE_CAP = 5000


class GroupTable:
    """A finite group given by a dense Cayley table."""

    def __init__(self, table: np.ndarray, name: str = "group", check: bool = True):
        table = np.ascontiguousarray(table, dtype=np.int32)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("Cayley table must be square")
        if n > DIRECT_MODE_CAP:
            raise ValueError(f"dense tables are capped at order {DIRECT_MODE_CAP}")
        self.table = table
        self.order = n
        self.name = name
        if check:
            self._check_axioms()
        rows, cols = np.nonzero(table == 0)
        inv = np.empty(n, dtype=np.int32)
        inv[rows] = cols
        self.inv = inv
        self._gens: list[int] | None = None

    def _check_axioms(self) -> None:
        n = self.order
        ar = np.arange(n)
        if not (np.array_equal(self.table[0], ar) and np.array_equal(self.table[:, 0], ar)):
            raise ValueError("identity must be element 0")
        # Latin square + spot-checked associativity
        for row in (self.table, self.table.T):
            if not all(np.array_equal(np.sort(r), ar) for r in row):
                raise ValueError("table is not a Latin square")
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, min(2000, n**3)))
        if not np.array_equal(self.table[self.table[a, b], c], self.table[a, self.table[b, c]]):
            raise ValueError("table is not associative")

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def mul_array(self, a, b) -> np.ndarray:
        return self.table[a, b]

    def conjugate(self, members: np.ndarray, g: int) -> np.ndarray:
        """{g h g^-1 : h in members}."""
        return self.table[self.table[g, members], self.inv[g]]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = int(self.table[x, g])
            k += 1
        return k

    def generators(self) -> list[int]:
        """A small generating set, found greedily in index order."""
        if self._gens is None:
            gens: list[int] = []
            mask = 1
            for g in self.elements():
                if not (mask >> g) & 1:
                    gens.append(g)
                    mask = closure(self, gens).mask
                    if mask.bit_count() == self.order:
                        break
            self._gens = gens
        return list(self._gens)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))


# ----------------------------------------------------------------- subgroups

@dataclass(frozen=True, order=True)
class SubgroupSet:
    """A subgroup as a bit vector over element indices, with its order cached."""

    order: int
    mask: int

    @classmethod
    def from_indices(cls, idx: Iterable[int]) -> SubgroupSet:
        mask = 0
        for i in idx:
            mask |= 1 << int(i)
        return cls(mask.bit_count(), mask)

    @classmethod
    def from_bool(cls, members: np.ndarray) -> SubgroupSet:
        mask = bool_to_mask(members)
        return cls(int(members.sum()), mask)

    @property
    def size(self) -> int:
        return self.order

    def __contains__(self, g: int) -> bool:
        return bool((self.mask >> g) & 1)

    def indices(self) -> np.ndarray:
        return mask_to_indices(self.mask)

    def intersect(self, other: SubgroupSet) -> SubgroupSet:
        m = self.mask & other.mask
        return SubgroupSet(m.bit_count(), m)

    def issubset(self, other: SubgroupSet) -> bool:
        return self.mask & ~other.mask == 0


def bool_to_mask(members: np.ndarray) -> int:
    return int.from_bytes(np.packbits(members, bitorder="little").tobytes(), "little")


def mask_to_indices(mask: int) -> np.ndarray:
    if mask == 0:
        return np.empty(0, dtype=np.int64)
    raw = np.frombuffer(mask.to_bytes((mask.bit_length() + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little"))


def closure(t: GroupTable, seed: Iterable[int]) -> SubgroupSet:
    """<seed> by worklist closure under right multiplication."""
    gens = [int(g) for g in seed]
    if not gens:
        raise ValueError("closure needs a nonempty seed")
    return SubgroupSet.from_bool(_bool_closure(t, gens))


def _bool_closure(t: GroupTable, gens: Sequence[int]) -> np.ndarray:
    members = np.zeros(t.order, dtype=bool)
    members[0] = True
    frontier = np.array([0])
    g = np.asarray(gens, dtype=np.int64)
    while frontier.size:
        prod = t.table[np.ix_(frontier, g)].ravel()
        new = np.unique(prod[~members[prod]])
        members[new] = True
        frontier = new
    return members


def is_subgroup(t: GroupTable, members: np.ndarray) -> bool:
    idx = np.flatnonzero(members) if members.dtype == bool else np.asarray(members)
    inside = np.zeros(t.order, dtype=bool)
    inside[idx] = True
    return bool(inside[0] and inside[t.table[np.ix_(idx, idx)]].all())


def all_subgroups(t: GroupTable) -> list[SubgroupSet]:
    """Complete subgroup lattice by cyclic extension.

    Every subgroup K > 1 equals <H, x> for a maximal subgroup H of K and any
    x in K \\ H, so extending every subgroup found so far by every element
    reaches the whole lattice.  <H, x> only depends on the coset Hx, so one
    element per right coset is tried.
    """
    if t.order > DIRECT_MODE_CAP:
        raise ValueError(f"direct subgroup enumeration is capped at order {DIRECT_MODE_CAP}")
    found: dict[int, SubgroupSet] = {}
    gensets: dict[int, np.ndarray] = {}
    frontier: list[SubgroupSet] = []
    for g in t.elements():
        members = _bool_closure(t, [g])
        s = SubgroupSet.from_bool(members)
        if s.mask not in found:
            found[s.mask] = s
            gensets[s.mask] = np.array([g], dtype=np.int64) if g else np.empty(0, np.int64)
            frontier.append(s)
    while frontier:
        nxt: list[SubgroupSet] = []
        for h in frontier:
            h_members = np.zeros(t.order, dtype=bool)
            h_idx = h.indices()
            h_members[h_idx] = True
            covered = h_members.copy()
            hgens = gensets[h.mask]
            for x in range(t.order):
                if covered[x]:
                    continue
                covered[t.table[h_idx, x]] = True  # the coset Hx
                gens = np.append(hgens, x)
                k_members = _bool_closure(t, gens)
                k = SubgroupSet.from_bool(k_members)
                if k.mask not in found:
                    found[k.mask] = k
                    gensets[k.mask] = gens
                    nxt.append(k)
        frontier = nxt
    return sorted(found.values())


def subgroup_classes(t: GroupTable, subs: Sequence[SubgroupSet]) -> list[tuple[SubgroupSet, int]]:
    """Partition ``subs`` into conjugacy classes.

    Returns (representative, class size) pairs; the representative is the
    member with the smallest mask integer.  Ordered by representative.
    """
    known = {s.mask for s in subs}
    gens = t.generators()
    seen: set[int] = set()
    out = []
    for s in sorted(subs):
        if s.mask in seen:
            continue
        orbit = {s.mask: s}
        stack = [s]
        while stack:
            h = stack.pop()
            idx = h.indices()
            for g in gens:
                c = SubgroupSet.from_indices(t.conjugate(idx, g))
                if c.mask not in orbit:
                    if c.mask not in known:
                        raise ValueError("subgroup list is not closed under conjugation")
                    orbit[c.mask] = c
                    stack.append(c)
        seen.update(orbit)
        out.append((min(orbit.values(), key=lambda x: x.mask), len(orbit)))
    return sorted(out, key=lambda rc: (rc[0].order, rc[0].mask))


def product_set(t: GroupTable, H: SubgroupSet, K: SubgroupSet) -> int:
    """HK as a bit mask."""
    members = np.zeros(t.order, dtype=bool)
    members[t.table[np.ix_(H.indices(), K.indices())].ravel()] = True
    return bool_to_mask(members)


def permutes(t: GroupTable, H: SubgroupSet, K: SubgroupSet) -> bool:
    """HK == KH."""
    if H.issubset(K) or K.issubset(H):
        return True
    inter = H.intersect(K).order
    size, rem = divmod(H.order * K.order, inter)
    if rem or t.order % size:
        return False
    return product_set(t, H, K) == product_set(t, K, H)


def per_count(t: GroupTable, H: SubgroupSet, subs: Sequence[SubgroupSet]) -> int:
    return sum(1 for K in subs if permutes(t, H, K))


@dataclass
class PermutabilityReport:
    subgroup_count: int
    class_count: int
    per_sizes: dict[int, int]  # representative mask -> |Per(H)|
    degree: Fraction
    pair_count: int


def permutability_degree(t: GroupTable, subs: Sequence[SubgroupSet] | None = None) -> PermutabilityReport:
    """Exact p(G) = sum over classes of class_size * |Per(rep)|, over |s(G)|^2."""
    if subs is None:
        subs = all_subgroups(t)
    classes = subgroup_classes(t, subs)
    per = {}
    pairs = 0
    for rep, size in classes:
        c = per_count(t, rep, subs)
        per[rep.mask] = c
        pairs += size * c
    n = len(subs)
    return PermutabilityReport(n, len(classes), per, Fraction(pairs, n * n), pairs)


# ------------------------------------------------------------ constructions

def table_from_mul(n: int, mul: Callable[[int, int], int], name: str) -> GroupTable:
    table = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        for b in range(n):
            table[a, b] = mul(a, b)
    return GroupTable(table, name)


def make_cyclic(k: int) -> GroupTable:
    ar = np.arange(k)
    return GroupTable((ar[:, None] + ar[None, :]) % k, f"C{k}")


def make_dihedral(order: int) -> GroupTable:
    """D_order: index i < k is r^i, index k + i is s r^i (k = order / 2)."""
    if order < 2 or order % 2:
        raise ValueError("dihedral order must be even")
    k = order // 2

    def mul(a: int, b: int) -> int:
        fa, ia = divmod(a, k)
        fb, ib = divmod(b, k)
        # s^fa r^ia s^fb r^ib = s^(fa+fb) r^(ib + (-1)^fb ia)
        i = (ib + (-ia if fb else ia)) % k
        return ((fa + fb) % 2) * k + i

    return table_from_mul(order, mul, f"D{order}")


_Q8_UNITS = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
_Q8_BASE = {("1", x): x for x in "1ijk"} | {(x, "1"): x for x in "1ijk"} | {
    ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
    ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
    ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
}


def make_quaternion8() -> GroupTable:
    def mul(a: int, b: int) -> int:
        sa, ua = divmod(a, 4)
        sb, ub = divmod(b, 4)
        r = _Q8_BASE[(_Q8_UNITS[ua], _Q8_UNITS[ub])]
        neg = (sa + sb + r.startswith("-")) % 2
        return _Q8_UNITS.index(r.lstrip("-")) + 4 * neg

    return table_from_mul(8, mul, "Q8")


def make_symmetric3() -> GroupTable:
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}

    def mul(a: int, b: int) -> int:
        pa, pb = perms[a], perms[b]
        return index[tuple(pa[pb[x]] for x in range(3))]

    return table_from_mul(6, mul, "S3")


def make_semidirect_cyclic(m: int, k: int, g: int) -> GroupTable:
    """C_m : C_k with the generator of C_k acting as x -> x^g.

    Element index a + m*b stands for (a, b); (a1, b1)(a2, b2) = (a1 + g^b1 a2, b1 + b2).
    """
    if math.gcd(g, m) != 1 or pow(g, k, m) != 1 % m:
        raise ValueError(f"x -> x^{g} is not an automorphism of order dividing {k} of C{m}")
    powers = [pow(g, b, m) for b in range(k)]

    def mul(x: int, y: int) -> int:
        b1, a1 = divmod(x, m)
        b2, a2 = divmod(y, m)
        return (a1 + powers[b1] * a2) % m + m * ((b1 + b2) % k)

    return table_from_mul(m * k, mul, f"C{m}:C{k}")


def direct_product(t1: GroupTable, t2: GroupTable) -> GroupTable:
    n1, n2 = t1.order, t2.order
    a = np.arange(n1 * n2)
    i1, i2 = np.divmod(a, n2)
    table = t1.table[np.ix_(i1, i1)] * n2 + t2.table[np.ix_(i2, i2)]
    return GroupTable(table, f"{t1.name}x{t2.name}")


def primorial_ratio(n: int, drop: int) -> int:
    """r_n / r_drop with r_n the product of the first n primes."""
    from sympy import prime

    return math.prod(prime(i) for i in range(drop + 1, n + 1))


def family(name: str, n: int) -> GroupTable:
    """The example families used for finite trend checks."""
    if name == "dihedral":
        return make_dihedral(2**n)
    if name == "cq8":
        if n < 3:
            raise ValueError("cq8 needs n >= 3")
        return direct_product(make_cyclic(2 ** (n - 3)), make_quaternion8())
    if name == "modular-s3":
        if n < 2:
            raise ValueError("modular-s3 needs n >= 2")
        return direct_product(make_cyclic(primorial_ratio(n, 2)), make_symmetric3())
    if name == "modular-d":
        if n < 2:
            raise ValueError("modular-d needs n >= 2")
        from sympy import prime

        p = prime(n)
        return direct_product(make_cyclic(primorial_ratio(n, 0) // (2 * p)), make_dihedral(2 * p))
    raise ValueError(f"unknown family {name!r}")


def read_cayley(path: str | Path) -> GroupTable:
    """Plain-text Cayley table: order N on the first line, then N rows of N indices."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    n = int(lines[0][0])
    rows = lines[1:]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"expected {n} rows of {n} entries")
    table = np.array([[int(x) for x in r] for r in rows], dtype=np.int64)
    if table.min() < 0 or table.max() >= n:
        raise ValueError("entries must be 0-based indices below the order")
    return GroupTable(table, Path(path).stem)


def write_cayley(t: GroupTable, path: str | Path) -> None:
    lines = [str(t.order)] + [" ".join(map(str, row)) for row in t.table.tolist()]
    Path(path).write_text("\n".join(lines) + "\n")


def induced_table(t, members: np.ndarray, name: str = "sub") -> tuple[GroupTable, np.ndarray]:
    """Cayley table of a subgroup, re-indexed with the identity first.

    ``t`` only needs ``mul_array``; returns the table and the local -> global index map.
    """
    glob = np.sort(np.asarray(members, dtype=np.int64))
    if glob[0] != 0:
        raise ValueError("subgroup must contain the identity")
    lut = np.full(int(glob.max()) + 1, -1, dtype=np.int64)
    lut[glob] = np.arange(glob.size)
    prod = t.mul_array(glob[:, None], glob[None, :])
    if prod.max() > glob.max() or (lut[prod] < 0).any():
        raise ValueError("members are not closed under multiplication")
    return GroupTable(lut[prod], name), glob


# --------------------------------------------------------- coprime products

def schur_zassenhaus_decompose(t: GroupTable, A: SubgroupSet, B: SubgroupSet, H: SubgroupSet):
    """Write H = (H n A)(H n gBg^-1) for some g in A.

    Requires A normal, AB = G, A n B = 1 and gcd(|A|, |B|) = 1.
    """
    if math.gcd(A.order, B.order) != 1 or A.order * B.order != t.order:
        raise ValueError("need coprime A, B with |A||B| = |G|")
    if A.intersect(B).order != 1:
        raise ValueError("A and B must intersect trivially")
    a_idx = A.indices()
    for g in t.generators():
        if SubgroupSet.from_indices(t.conjugate(a_idx, g)) != A:
            raise ValueError("A is not normal")
    HA = H.intersect(A)
    b_idx = B.indices()
    for g in a_idx:
        Bg = SubgroupSet.from_indices(t.conjugate(b_idx, int(g)))
        HB = H.intersect(Bg)
        if HA.order * HB.order == H.order:
            return HA, int(g), HB
    raise AssertionError("no conjugating element found; Schur-Zassenhaus violated")


def coprime_count_bound(A_table: GroupTable, B_table: GroupTable) -> int:
    """|A| |s(A)| |s(B)|, an upper bound on |s(A : B)| for coprime orders."""
    if math.gcd(A_table.order, B_table.order) != 1:
        raise ValueError("orders must be coprime")
    return A_table.order * len(all_subgroups(A_table)) * len(all_subgroups(B_table))
