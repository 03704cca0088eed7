"""The subgroup lattice of Sz(8), assembled from its maximal subgroups.

Every proper subgroup lies in a conjugate of one of four maximal subgroups
(q = 8 has no subfield subgroups), so s(Sz(8)) is the union over the four
representatives M of {gHg^-1 : H <= M, g in G/M}, plus G itself.
"""

from __future__ import annotations

import json
import logging
import struct
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .certify import comeback_bound
from .groupengine import SubgroupSet, all_subgroups, induced_table
from .szcore import SzGroup, build_normalizer, sylow_conjugates

log = logging.getLogger(__name__)

CACHE_MAGIC = b"SZLAT1\0\0"


def _key(members: np.ndarray) -> bytes:
    return np.packbits(members, bitorder="little").tobytes()


def _key_to_indices(key: bytes, order: int) -> np.ndarray:
    raw = np.frombuffer(key, dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:order])


def _key_to_subgroup(key: bytes) -> SubgroupSet:
    mask = int.from_bytes(key, "little")
    return SubgroupSet(mask.bit_count(), mask)


def generating_set(G: SzGroup, H: SubgroupSet) -> list[int]:
    t = G.table
    gens: list[int] = []
    got = t.subgroup([0])
    for h in H.indices():
        if int(h) not in got:
            gens.append(int(h))
            got = t.closure(gens)
            if got.order == H.order:
                break
    return gens


def two_generators(G: SzGroup) -> list[int]:
    """A deterministic generating pair (T, g) with g least in index order."""
    t = G.table
    T = G.generators[-1]
    for g in range(1, t.order):
        if t.closure([T, g]).order == t.order:
            return [T, g]
    return list(G.generators)


@dataclass
class MaximalRep:
    name: str
    subgroup: SubgroupSet
    generators: list[int]

    @property
    def order(self) -> int:
        return self.subgroup.order


def maximal_reps(G: SzGroup) -> list[MaximalRep]:
    """Gamma = N(P), and N(<x>) for the first elements of order 7, 13, 5."""
    if G.params.q != 8:
        raise ValueError("maximal subgroup survey is implemented for q = 8")
    t = G.table
    gamma = build_normalizer(G)
    reps = [MaximalRep("P:C", gamma, generating_set(G, gamma))]
    orders = t.element_orders()
    for k, name in ((7, "D14"), (13, "C13:C4"), (5, "C5:C4")):
        hits = np.flatnonzero(orders == k)
        if not hits.size:
            raise AssertionError(f"no element of order {k}")
        x = int(hits[0])
        N = t.normalizer(t.closure([x]), gens=[x])
        reps.append(MaximalRep(name, N, generating_set(G, N)))
    for r in reps:
        if t.normalizer(r.subgroup, gens=r.generators) != r.subgroup:
            raise AssertionError(f"{r.name} is not self-normalising")
        if r.order == t.order:
            raise AssertionError(f"{r.name} is not proper")
    return reps


def left_coset_reps(G: SzGroup, M: SubgroupSet) -> list[int]:
    t = G.table
    covered = np.zeros(t.order, dtype=bool)
    m_idx = M.indices()
    reps = []
    for g in range(t.order):
        if not covered[g]:
            reps.append(g)
            covered[t.mul_array(g, m_idx)] = True
    return reps


@dataclass
class LatticeSurvey:
    group_order: int
    keys: dict[bytes, int]  # subgroup bit vector -> order
    class_reps: list[tuple[SubgroupSet, int, int]]  # (rep, class size, order)
    sylow_count: int
    ti_verified: bool
    sylow_subgroup_count: int  # |s(P)|
    maximal: list[dict] = field(default_factory=list)
    runtime_s: float = 0.0

    @property
    def total_subgroups(self) -> int:
        return len(self.keys)

    def subgroups(self) -> list[SubgroupSet]:
        return sorted(_key_to_subgroup(k) for k in self.keys)

    def order_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for o in self.keys.values():
            hist[o] = hist.get(o, 0) + 1
        return dict(sorted(hist.items()))


def _conjugate_lattice(G: SzGroup, M: SubgroupSet, local_subs: list[np.ndarray],
                       glob: np.ndarray, reps: list[int], keys: dict[bytes, int]) -> None:
    t = G.table
    N = t.order
    sizes = np.array([len(s) for s in local_subs])
    rows = np.repeat(np.arange(len(local_subs)), sizes)
    flat = np.concatenate(local_subs)
    for g in reps:
        image = t.conjugate(glob, g)  # local index -> global index of gxg^-1
        members = np.zeros((len(local_subs), N), dtype=bool)
        members[rows, image[flat]] = True
        packed = np.packbits(members, axis=1, bitorder="little")
        for i, row in enumerate(packed):
            keys.setdefault(row.tobytes(), int(sizes[i]))


def survey(G: SzGroup, work_order: list[int] | None = None) -> LatticeSurvey:
    """Enumerate s(Sz(8)) through conjugates of the maximal subgroups' lattices.

    ``work_order`` permutes the maximal representatives (used to check that
    the result does not depend on processing order).
    """
    t0 = time.perf_counter()
    t = G.table
    N = t.order
    reps = maximal_reps(G)
    order = work_order if work_order is not None else list(range(len(reps)))
    keys: dict[bytes, int] = {}
    info = []
    for i in order:
        r = reps[i]
        local_t, glob = induced_table(t, r.subgroup.indices(), r.name)
        subs = all_subgroups(local_t)
        cosets = left_coset_reps(G, r.subgroup)
        log.info("%s: order %d, %d subgroups, %d conjugates", r.name, r.order, len(subs), len(cosets))
        info.append({"name": r.name, "order": r.order, "index": len(cosets),
                     "subgroups": len(subs)})
        _conjugate_lattice(G, r.subgroup, [s.indices() for s in subs], glob, cosets, keys)
    keys[_key(np.ones(N, dtype=bool))] = N
    # canonical ordering so the dict contents are schedule independent
    keys = dict(sorted(keys.items(), key=lambda kv: (kv[1], int.from_bytes(kv[0], "little"))))

    sylows = sylow_conjugates(G)
    ti = all((a.mask & b.mask).bit_count() == 1
             for i, a in enumerate(sylows) for b in sylows[i + 1:])
    sP = sum(1 for k in keys if (int.from_bytes(k, "little") & ~G.sylow.mask) == 0)

    class_reps = conjugacy_classes(G, keys)
    return LatticeSurvey(N, keys, class_reps, len(sylows), ti, sP, info,
                         time.perf_counter() - t0)


def conjugacy_classes(G: SzGroup, keys: dict[bytes, int]) -> list[tuple[SubgroupSet, int, int]]:
    """Orbits of conjugation on the surveyed subgroups, by search under a generating pair."""
    t = G.table
    gens = two_generators(G)
    seen: set[bytes] = set()
    out = []
    for key, order in keys.items():
        if key in seen:
            continue
        orbit = {key}
        stack = [key]
        while stack:
            k = stack.pop()
            idx = _key_to_indices(k, t.order)
            for g in gens:
                members = np.zeros(t.order, dtype=bool)
                members[t.conjugate(idx, g)] = True
                c = _key(members)
                if c not in orbit:
                    if c not in keys:
                        raise AssertionError("surveyed lattice is not closed under conjugation")
                    orbit.add(c)
                    stack.append(c)
        seen |= orbit
        rep = min(orbit, key=lambda k: int.from_bytes(k, "little"))
        out.append((_key_to_subgroup(rep), len(orbit), order))
    return sorted(out, key=lambda x: (x[2], x[0].mask))


def two_subgroup_census(s: LatticeSurvey) -> tuple[int, int]:
    """(count including the trivial subgroup, count excluding it) of 2-power order subgroups."""
    with_trivial = sum(1 for o in s.keys.values() if o & (o - 1) == 0)
    return with_trivial, with_trivial - 1


@dataclass
class TIBound:
    bound: Fraction
    ratio: Fraction
    E: int
    S: int
    nsyl: int


def ti_bound_report(s: LatticeSurvey) -> TIBound:
    _, E = two_subgroup_census(s)
    S = s.total_subgroups
    return TIBound(comeback_bound(E, S, s.sylow_count), Fraction(E, S), E, S, s.sylow_count)


# ---------------------------------------------------------------- p(Sz(8))

class SzPermTester:
    """HK = KH for subgroups of the big group, with divisibility pruning."""

    def __init__(self, G: SzGroup):
        self.G = G

    def __call__(self, H: SubgroupSet, K: SubgroupSet, h_idx=None, k_idx=None) -> bool:
        if H.issubset(K) or K.issubset(H):
            return True
        inter = H.intersect(K).order
        size, rem = divmod(H.order * K.order, inter)
        if rem or self.G.order % size:
            return False
        t = self.G.table
        h_idx = H.indices() if h_idx is None else h_idx
        k_idx = K.indices() if k_idx is None else k_idx
        hk = np.zeros(t.order, dtype=bool)
        hk[t.mul_array(h_idx[:, None], k_idx[None, :]).ravel()] = True
        # HK is a subgroup iff it is closed under left multiplication by K
        kh = t.mul_array(k_idx[:, None], h_idx[None, :]).ravel()
        return bool(hk[kh].all())


def degree_sz8_extended(G: SzGroup, s: LatticeSurvey, budget_s: float | None = None,
                        checkpoint: Path | None = None) -> dict:
    """Exact p(Sz(8)) as sum over classes of class size * |Per(rep)| / |s(G)|^2.

    Progress is checkpointed to JSON; a rerun resumes from it.  If the budget
    runs out the partial result is returned with ``complete = False``.
    """
    t0 = time.perf_counter()
    done: dict[str, int] = {}
    if checkpoint and Path(checkpoint).exists():
        done = json.loads(Path(checkpoint).read_text())["per"]
    tester = SzPermTester(G)
    subs = s.subgroups()
    sub_idx = [K.indices() for K in subs]
    complete = True
    for rep, size, order in s.class_reps:
        key = hex(rep.mask)
        if key in done:
            continue
        if budget_s is not None and time.perf_counter() - t0 > budget_s:
            complete = False
            break
        h_idx = rep.indices()
        done[key] = sum(1 for K, k_idx in zip(subs, sub_idx) if tester(rep, K, h_idx, k_idx))
        if checkpoint:
            Path(checkpoint).write_text(json.dumps({"per": done}))
    pairs = sum(size * done[hex(rep.mask)] for rep, size, _ in s.class_reps if hex(rep.mask) in done)
    S = s.total_subgroups
    out = {"complete": complete, "classes_done": sum(hex(r.mask) in done for r, _, _ in s.class_reps), "class_count": len(s.class_reps),
           "permuting_pairs": pairs}
    if complete:
        out["degree"] = Fraction(pairs, S * S)
    return out


# ---------------------------------------------------------------- cache

def write_cache(s: LatticeSurvey, path: str | Path) -> None:
    """Binary lattice cache plus a JSON summary next to it."""
    path = Path(path)
    words = -(-s.group_order // 64)
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<QQ", s.group_order, len(s.keys)))
        for key, order in s.keys.items():
            fh.write(struct.pack("<I", order))
            fh.write(key.ljust(words * 8, b"\0"))
    path.with_suffix(path.suffix + ".json").write_text(json.dumps(survey_summary(s), indent=2))


def read_cache(path: str | Path) -> tuple[int, dict[bytes, int]]:
    data = Path(path).read_bytes()
    if data[:8] != CACHE_MAGIC:
        raise ValueError("not a subgroup lattice cache")
    order, count = struct.unpack_from("<QQ", data, 8)
    words = -(-order // 64)
    nbytes = (order + 7) // 8
    keys: dict[bytes, int] = {}
    off = 24
    for _ in range(count):
        (o,) = struct.unpack_from("<I", data, off)
        off += 4
        key = data[off:off + nbytes]
        off += words * 8
        if int.from_bytes(key, "little").bit_count() != o:
            raise ValueError("cache entry order does not match its bit vector")
        keys[key] = o
    if off != len(data):
        raise ValueError("trailing bytes in lattice cache")
    return order, keys


def survey_summary(s: LatticeSurvey) -> dict:
    with_t, without_t = two_subgroup_census(s)
    ti = ti_bound_report(s)
    return {
        "schema": 1,
        "group_order": s.group_order,
        "total_subgroups": s.total_subgroups,
        "class_count": len(s.class_reps),
        "sylow_count": s.sylow_count,
        "ti_verified": s.ti_verified,
        "sylow_subgroup_count": s.sylow_subgroup_count,
        "two_subgroups_with_trivial": with_t,
        "two_subgroups_without_trivial": without_t,
        "maximal": s.maximal,
        "order_histogram": {str(k): v for k, v in s.order_histogram().items()},
        "ti_bound": {"num": str(ti.bound.numerator), "den": str(ti.bound.denominator)},
        "two_subgroup_ratio": {"num": str(ti.ratio.numerator), "den": str(ti.ratio.denominator)},
    }
