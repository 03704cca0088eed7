"""szlab command line: field, sz, classes, certify, degree, lattice."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from .certify import _jsonify

SCHEMA = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2 with the offending flag in the message
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _rational(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _odd_m(m: int) -> None:
    if m < 3 or m % 2 == 0:
        raise UsageError(f"--m must be odd and >= 3, got {m}")


def cmd_field(args) -> tuple[dict, bool]:
    from . import gf2field as gf

    _odd_m(args.m)
    p = gf.field_new(args.m)
    certs = gf.field_verify(args.m)
    out = {"m": p.m, "q": p.q, "modulus": bin(p.modulus), "theta_exponent": p.theta_exponent,
           "primitive_element": gf.primitive_element(p) if p.m <= 16 else None,
           "certificates": [c.to_json() for c in certs]}
    return out, all(c.holds for c in certs)


def cmd_sz(args) -> tuple[dict, bool]:
    from . import gf2field as gf
    from . import szcore

    _odd_m(args.m)
    p = gf.field_new(args.m)
    if args.action == "verify-structure":
        cert = szcore.verify_special_structure(p)
        return {"m": p.m, "certificate": cert.to_json()}, cert.holds
    if p.m != 3:
        raise UsageError("sz build is available for --m 3 only")
    G = szcore.build_sz(p)
    sylows = szcore.sylow_conjugates(G)
    ti = all((a.mask & b.mask).bit_count() == 1 for i, a in enumerate(sylows) for b in sylows[i + 1:])
    gamma = szcore.build_normalizer(G)
    ok = G.order == szcore.expected_order(p.q) and len(sylows) == p.q ** 2 + 1 and ti
    return {"m": p.m, "order": G.order, "expected_order": szcore.expected_order(p.q),
            "sylow_count": len(sylows), "ti_verified": ti, "normalizer_order": gamma.order}, ok


def cmd_classes(args) -> tuple[dict, bool]:
    from . import classcount as cc
    from . import gf2field as gf

    _odd_m(args.m)
    if args.m > 7:
        raise UsageError("classes supports m <= 7")
    p = gf.field_new(args.m)
    r = cc.exact_class_count(p)
    out = {"m": r.m, "exact_class_count": r.exact_class_count,
           "subgroup_count_upper": r.subgroup_count_upper,
           "boundP_closed_form": r.boundP_closed_form,
           "boundGamma_closed_form": cc.boundGamma_closed_form(p.m)}
    ok = r.subgroup_count_upper <= r.boundP_closed_form
    if args.oracle:
        if p.m != 3:
            raise UsageError("--oracle runs at --m 3 only")
        from .groupengine import all_subgroups, subgroup_classes
        from .szcore import pair_group_table

        t = pair_group_table(p)
        subs = all_subgroups(t)
        out["oracle"] = {"subgroups": len(subs), "classes": len(subgroup_classes(t, subs))}
    return out, ok


def cmd_certify(args) -> tuple[list, bool]:
    from . import certify

    if not args.all:
        raise UsageError("certify needs --all")
    certs = certify.certify_all(args.m_max)
    return [c.to_json() for c in certs], all(c.holds for c in certs)


def cmd_degree(args) -> tuple[object, bool]:
    from . import groupengine as ge

    if args.cayley:
        tables = [("cayley", None, ge.read_cayley(args.cayley))]
    elif args.family:
        ns = [args.n] if args.n is not None else list(range(args.n_min, args.n_max + 1))
        if any(n is None for n in ns):
            raise UsageError("degree --family needs --n or --n-min/--n-max")
        tables = [(args.family, n, ge.family(args.family, n)) for n in ns]
    else:
        raise UsageError("degree needs --family or --cayley")
    rows = []
    for fam, n, t in tables:
        rep = ge.permutability_degree(t)
        rows.append({"family": fam, "n": n, "order": t.order, "subgroups": rep.subgroup_count,
                     "classes": rep.class_count, "permuting_pairs": rep.pair_count,
                     "degree": _rational(rep.degree)})
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "n", "order", "subgroups", "classes", "permuting_pairs", "num", "den"])
        for r in rows:
            w.writerow([r["family"], r["n"], r["order"], r["subgroups"], r["classes"],
                        r["permuting_pairs"], r["degree"]["num"], r["degree"]["den"]])
        return buf.getvalue(), True
    return rows if len(rows) > 1 else rows[0], True


def _default_cache() -> Path | None:
    d = os.environ.get("SZLAB_CACHE_DIR")
    return Path(d) / "sz8.szlat" if d else None


def cmd_lattice(args) -> tuple[dict, bool]:
    from . import gf2field as gf
    from . import szcore
    from . import szlattice as sl

    if args.m != 3:
        raise UsageError("lattice supports --m 3 only (Sz(8))")
    G = szcore.build_sz(gf.field_new(3))
    s = sl.survey(G)
    cache = Path(args.cache) if args.cache else _default_cache()
    if cache is not None:
        cache.parent.mkdir(parents=True, exist_ok=True)
        sl.write_cache(s, cache)
    out = sl.survey_summary(s)
    ok = s.total_subgroups == 17295 and s.ti_verified
    if args.degree:
        ck = cache.with_suffix(".degree.json") if cache is not None else None
        budget = args.budget_mins * 60 if args.budget_mins is not None else None
        d = sl.degree_sz8_extended(G, s, budget, ck)
        if d.get("complete"):
            ti = sl.ti_bound_report(s)
            d["within_ti_bound"] = d["degree"] <= ti.bound
            ok &= d["within_ti_bound"]
            d["degree"] = _rational(d["degree"])
        out["degree"] = d
    return out, ok


def build_parser() -> argparse.ArgumentParser:
    # shared flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--out", help="write JSON (or CSV) here instead of stdout")
    common.add_argument("--threads", type=int,
                        help="worker threads (results are identical for any value)")
    common.add_argument("-v", "--verbose", action="store_true")
    ap = _Parser(prog="szlab", description=__doc__, parents=[common])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("field", parents=[common], help="GF(2^m) parameters and identity checks")
    f.add_argument("--m", type=int, required=True)
    f.set_defaults(func=cmd_field)

    s = sub.add_parser("sz", parents=[common], help="Sz(8) construction or pair-form structure checks")
    s.add_argument("action", choices=["build", "verify-structure"])
    s.add_argument("--m", type=int, default=3)
    s.set_defaults(func=cmd_sz)

    c = sub.add_parser("classes", parents=[common], help="complement-sum counts for P")
    c.add_argument("--m", type=int, default=3)
    c.add_argument("--oracle", action="store_true", help="also brute-force the 64-element P")
    c.set_defaults(func=cmd_classes)

    ce = sub.add_parser("certify", parents=[common], help="exact inequality certificates")
    ce.add_argument("--all", action="store_true")
    ce.add_argument("--m-max", type=int, default=99)
    ce.set_defaults(func=cmd_certify)

    d = sub.add_parser("degree", parents=[common], help="exact subgroup permutability degree")
    d.add_argument("--family", choices=["dihedral", "cq8", "modular-s3", "modular-d"])
    d.add_argument("--n", type=int)
    d.add_argument("--n-min", type=int)
    d.add_argument("--n-max", type=int)
    d.add_argument("--cayley", help="plain-text Cayley table file")
    d.add_argument("--csv", action="store_true")
    d.set_defaults(func=cmd_degree)

    la = sub.add_parser("lattice", parents=[common], help="Sz(8) subgroup lattice survey")
    la.add_argument("--m", type=int, default=3)
    la.add_argument("--degree", action="store_true", help="also compute exact p(Sz(8))")
    la.add_argument("--budget-mins", type=float)
    la.add_argument("--cache", help="binary lattice cache path (default $SZLAB_CACHE_DIR/sz8.szlat)")
    la.set_defaults(func=cmd_lattice)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    # applied after parsing: the shared flag actions must keep SUPPRESS defaults
    for k, v in (("out", None), ("threads", os.cpu_count() or 1), ("verbose", False)):
        if not hasattr(args, k):
            setattr(args, k, v)
    if args.threads < 1:
        ap.error("argument --threads: must be >= 1")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        result, ok = args.func(args)
    except UsageError as e:
        print(f"szlab {args.command}: error: {e}", file=sys.stderr)
        return 2
    if isinstance(result, str):
        text = result
    else:
        payload = {"schema": SCHEMA, "command": args.command}
        payload["result"] = _jsonify(result)
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
