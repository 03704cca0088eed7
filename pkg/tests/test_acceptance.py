"""Acceptance criteria 1-8.  Each test prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines appear even
under output capture.
"""

import time
import tracemalloc
from fractions import Fraction

import pytest

from oracles import complements, conjugacy_partition
from szlab import certify
from szlab import classcount as cc
from szlab import gf2field as gf
from szlab import groupengine as ge
from szlab import szcore, szlattice
from szlab.groupengine import SubgroupSet


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return emit


def test_criterion_1_sz8_construction(report):
    t0 = time.perf_counter()
    G = szcore.build_sz(gf.field_new(3))
    sylows = szcore.sylow_conjugates(G)
    ti = all((a.mask & b.mask).bit_count() == 1 for i, a in enumerate(sylows) for b in sylows[i + 1:])
    dt = time.perf_counter() - t0
    ok = G.order == 29120 and len(sylows) == 65 and ti and dt <= 60
    assert report(1, ok, f"|G|={G.order} Sylow2={len(sylows)} TI={ti} {dt:.1f}s (limit 60s)")


def test_criterion_2_lattice_count(report, sz8):
    tracemalloc.start()
    t0 = time.perf_counter()
    s = szlattice.survey(sz8)
    dt = time.perf_counter() - t0
    peak = tracemalloc.get_traced_memory()[1] / 2**20
    tracemalloc.stop()
    ok = s.total_subgroups == 17295 and dt <= 600 and peak <= 512
    assert report(2, ok, f"|s(Sz(8))|={s.total_subgroups} (expected 17295) {dt:.1f}s "
                         f"peak {peak:.0f} MB (limits 600s, 512 MB)")


def test_criterion_3_structure(report):
    t0 = time.perf_counter()
    results = {m: szcore.verify_special_structure(gf.field_new(m)) for m in (3, 5, 7)}
    G = szcore.pair_group_table(gf.field_new(3))
    Z = SubgroupSet.from_indices(range(8))
    quotient_ok = all(G.mul(x, x) < 8 for x in range(64))  # P/Z elementary abelian
    dt = time.perf_counter() - t0
    ok = all(c.holds for c in results.values()) and quotient_ok and Z.order == 8 and dt <= 10
    failed = {m: [k for k, v in c.notes[0].items() if not v] for m, c in results.items()}
    assert report(3, ok, f"|Z|=q, P'=Phi=mho=Z, exp 4, class 2 at m=3,5,7; failed checks {failed} {dt:.1f}s")


def test_criterion_4_oracle_equivalence(report, sz8):
    t0 = time.perf_counter()
    p = gf.field_new(3)
    t = szcore.pair_group_table(p)
    subs = ge.all_subgroups(t)
    classes = len(ge.subgroup_classes(t, subs))
    r = cc.exact_class_count(p)
    gamma = szcore.build_normalizer(sz8)
    local, _ = ge.induced_table(sz8.table, gamma.indices())
    s_gamma = len(ge.all_subgroups(local))
    bg = cc.boundGamma_closed_form(3)
    dt = time.perf_counter() - t0
    clauses = {
        "exact_class_count == classes": r.exact_class_count == classes,
        "|s(P)| <= upper <= boundP": len(subs) <= r.subgroup_count_upper <= r.boundP_closed_form,
        "|s(Gamma)| <= boundGamma": s_gamma <= bg,
        "runtime": dt <= 300,
    }
    ok = all(clauses.values())
    assert report(4, ok, f"exact_class_count={r.exact_class_count} classes={classes} |s(P)|={len(subs)} "
                         f"upper={r.subgroup_count_upper} boundP={r.boundP_closed_form} "
                         f"|s(Gamma)|={s_gamma} boundGamma={bg} {dt:.1f}s; "
                         f"failing: {[k for k, v in clauses.items() if not v]}")


def test_criterion_5_complement_classes(report):
    t0 = time.perf_counter()
    p = gf.field_new(3)
    t = szcore.pair_group_table(p)
    subs = ge.all_subgroups(t)
    Z = SubgroupSet.from_indices(range(8))
    pairs = mismatched = 0
    for K in subs:
        if not Z.issubset(K):
            continue
        X = cc.Subspace.span(3, {int(i) // 8 for i in K.indices()})
        phi = set(cc.frattini_of_X(p, X).elements())
        for H in subs:
            if not H.issubset(Z) or not phi <= set(H.indices().tolist()):
                continue
            pairs += 1
            comps = complements(subs, K, H, Z)
            p_classes = conjugacy_partition(t, comps, range(t.order))
            expected = 2 ** (X.dim * (3 - (H.order.bit_length() - 1)))
            mismatched += p_classes != expected
    dt = time.perf_counter() - t0
    ok = mismatched == 0 and dt <= 600
    assert report(5, ok, f"P-classes of complements == 2^(dimX*dim(V(X)/Y)) in "
                         f"{pairs - mismatched}/{pairs} pairs {dt:.1f}s")


def test_criterion_6_certificate_sweep(report):
    t0 = time.perf_counter()
    p = gf.field_new(3)
    sP = len(ge.all_subgroups(szcore.pair_group_table(p)))
    certs = [certify.dbound_certificate(m, k, q)
             for m in range(21) for k in range(m + 1) for q in (2, 4, 8)]
    certs.append(certify.sp_bounds_certificate(3, brute_force_sp=sP))
    certs += [certify.f_max_certificate(m) for m in range(9, 100, 2)]
    certs.append(certify.induction_certificate(199))
    dt = time.perf_counter() - t0
    failed = [c.name for c in certs if not c.holds]
    ok = not failed and dt <= 60
    assert report(6, ok, f"{len(certs)} certificates, {len(failed)} failed {failed[:5]} {dt:.1f}s")


def test_criterion_7_degrees(report):
    t0 = time.perf_counter()
    deg = lambda t: ge.permutability_degree(t).degree  # noqa: E731
    abelian = deg(ge.direct_product(ge.make_cyclic(4), ge.make_cyclic(6)))
    q8 = deg(ge.make_quaternion8())
    s3 = deg(ge.make_symmetric3())
    dih = [deg(ge.family("dihedral", n)) for n in range(4, 8)]
    cq8 = deg(ge.family("cq8", 7))
    dt = time.perf_counter() - t0
    ok = (abelian == 1 and q8 == 1 and s3 == Fraction(5, 6)
          and all(a > b for a, b in zip(dih, dih[1:])) and cq8 > Fraction(9, 10) and dt <= 300)
    assert report(7, ok, f"p(C4xC6)={abelian} p(Q8)={q8} p(S3)={s3} "
                         f"p(D16..D128)={[str(x) for x in dih]} p(C16xQ8)={cq8} {dt:.1f}s")


def test_criterion_8_ti_bound(report, sz8, sz8_survey):
    ti = szlattice.ti_bound_report(sz8_survey)
    ext = szlattice.degree_sz8_extended(sz8, sz8_survey)
    ok = ti.S == 17295 and ti.nsyl == 65 and ext["complete"] and ext["degree"] <= ti.bound
    assert report(8, ok, f"|E|={ti.E} bound={ti.bound} (~{float(ti.bound):.4f}); "
                         f"p(Sz(8))={ext['degree']} (~{float(ext['degree']):.5f})")
