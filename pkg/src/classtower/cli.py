"""Command line surface: classify, verify-fixtures, group, scan.

Exit codes: 0 success, 2 invalid input/usage, 3 internal consistency failure,
4 fixture mismatch.  All JSON output is canonical (sorted keys, compact
separators, integers only) so that parse + re-serialize is byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .abelian import AbelianType
from .classify import (
    ConsistencyError,
    InvariantRecord,
    PredictionReport,
    ValidationReport,
    classify_pair,
    vector_name,
)
from .gengroup import (
    GPresentation,
    PresentationError,
    PsiVariant,
    Subgroup,
    abelian_invariants,
    lower_central_series,
)
from .quadratic import norm_eps, two_part_of_class_group, field_discriminant
from .symbols import InvalidPairError, primes_5_mod_8, quartic_symbol, validate_pair
from .unitindex import QAgreementError, q_from_symbols, unit_index_q

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONSISTENCY = 3
EXIT_FIXTURE = 4


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _vectors(vs) -> list[str]:
    return sorted(vector_name(v) for v in vs)


def _type_list(t: AbelianType) -> list[int]:
    return list(t.divisors)


def report_to_dict(
    record: InvariantRecord, report: PredictionReport, validation: ValidationReport
) -> dict:
    k = {}
    for j, kf in report.k_fields.items():
        k[f"K{j}"] = {
            "radicand": kf.radicand,
            "norm_group": _vectors(kf.norm_group),
            "kernel": _vectors(kf.kernel),
            "kernel_size": len(kf.kernel),
            "cl2": _type_list(kf.cl2),
            "taussky_A": kf.taussky_A,
        }
    l = {}
    for j, lf in report.l_fields.items():
        l[f"L{j}"] = {
            "factors": [f"K{i}" for i in lf.factors],
            "norm_group": _vectors(lf.norm_group),
            "kernel_size": len(lf.kernel),
            "cl2": _type_list(lf.cl2),
        }
    return {
        "p1": record.pair.p1,
        "p2": record.pair.p2,
        "d": record.d,
        "disc": report.disc,
        "invariants": {
            "legendre": record.legendre,
            "pi": record.pi,
            "B": record.B,
            "m": record.m,
            "n": record.n,
            "q": record.q,
            "norm_eps_r": record.norm_eps_r,
            "psi": record.psi.value,
        },
        "group": {
            "order": report.group_order,
            "coclass": report.coclass,
            "nilpotency_class": report.nilpotency_class,
            "derived_type": _type_list(report.derived),
            "cl2_hilbert": _type_list(report.derived),
            "cl2_K3": _type_list(report.cl2_k3),
        },
        "K": k,
        "L": l,
        "cross_validation": {
            "passed": validation.passed,
            "checks": len(validation.checks),
            "failures": [
                {"name": c.name, "expected": c.expected, "got": c.got}
                for c in validation.failures()
            ],
        },
    }


def _print_classify_text(record, report, validation):
    rec = record
    print(f"pair (p1, p2) = ({rec.pair.p1}, {rec.pair.p2}),  d = {rec.d},  disc = {report.disc}")
    print(
        f"symbols: (p1/p2) = {rec.legendre:+d}, pi = {rec.pi:+d}, B = {rec.B:+d}, "
        f"N(eps_r) = {rec.norm_eps_r:+d}"
    )
    print(f"exponents: m = {rec.m}, n = {rec.n}, q = {rec.q}, psi = {rec.psi.value}")
    print(
        f"group: order {report.group_order}, coclass {report.coclass}, "
        f"class {report.nilpotency_class}, derived {report.derived}, Cl2(K3) {report.cl2_k3}"
    )
    print(f"{'field':<5} {'Cl2':<12} {'kernel':<22} {'norm group':<22} {'A?'}")
    for j in range(1, 8):
        kf = report.k_fields[j]
        print(
            f"K{j:<4} {str(kf.cl2):<12} {','.join(_vectors(kf.kernel)):<22} "
            f"{','.join(_vectors(kf.norm_group)):<22} {'yes' if kf.taussky_A else 'NO'}"
        )
    for j in range(1, 8):
        lf = report.l_fields[j]
        print(
            f"L{j:<4} {str(lf.cl2):<12} {'all 8 classes':<22} "
            f"{','.join(_vectors(lf.norm_group)):<22} yes"
        )
    status = "passed" if validation.passed else "FAILED"
    print(f"cross-validation: {len(validation.checks)} checks {status}")
    for c in validation.failures():
        print(f"  FAIL {c.name}: expected {c.expected}, got {c.got}")


def cmd_classify(args) -> int:
    try:
        record, report, validation = classify_pair(args.p1, args.p2)
    except InvalidPairError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConsistencyError, QAgreementError) as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    if args.json:
        print(dumps(report_to_dict(record, report, validation)))
    else:
        _print_classify_text(record, report, validation)
    return EXIT_OK if validation.passed else EXIT_CONSISTENCY


def cmd_verify_fixtures(args) -> int:
    from .fixtures import verify_fixtures

    try:
        results = verify_fixtures(table=args.table, filter_d=args.filter)
    except (ValueError, OSError) as exc:
        print(f"fixture error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConsistencyError, QAgreementError) as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    n_rows = len(results)
    n_pass = sum(1 for r in results if r.passed)
    if args.json:
        payload = {
            "rows": n_rows,
            "passed": n_pass,
            "failed": n_rows - n_pass,
            "results": [
                {
                    "table": r.table,
                    "d": r.d,
                    "p1": r.p1,
                    "p2": r.p2,
                    "passed": r.passed,
                    "columns": [
                        {
                            "column": c.column,
                            "ok": c.ok,
                            "printed": c.printed,
                            "expected": c.expected,
                            "computed": c.got,
                        }
                        for c in r.columns
                    ],
                }
                for r in results
            ],
        }
        print(dumps(payload))
    else:
        for r in results:
            mark = "ok " if r.passed else "FAIL"
            print(f"[{mark}] table {r.table:>2}  d = {r.d:<6} (p1={r.p1}, p2={r.p2})  "
                  f"{len(r.columns)} columns")
            audit = r.columns if args.verbose else r.failures()
            for c in audit:
                src = f"printed {c.printed} -> {c.expected}" if c.printed else f"printed {c.expected}"
                print(f"       {c.column}: {src}, computed {c.got}")
        print(f"{n_pass}/{n_rows} rows pass")
        if n_rows == 0:
            print("0 rows matched the filter")
    return EXIT_OK if n_pass == n_rows else EXIT_FIXTURE


def _admissible(m: int, n: int, q: int) -> bool:
    if q == 2:
        return m == 2
    return (n == 1 and m >= 3) or (m == 2 and n >= 2)


def cmd_group(args) -> int:
    psi = PsiVariant.SIGMA_ONLY if args.psi == "sigma" else PsiVariant.TAU_SIGMA
    try:
        pres = GPresentation(args.m, args.n, args.q, psi)
    except PresentationError as exc:
        print(f"invalid presentation: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not _admissible(args.m, args.n, args.q) and not args.force:
        print(
            f"(m={args.m}, n={args.n}, q={args.q}) is not an admissible exponent "
            "pattern; pass --force to inspect it anyway",
            file=sys.stderr,
        )
        return EXIT_INPUT
    G = Subgroup.whole_group(pres)
    Gp = G.derived_subgroup()
    series = lower_central_series(pres)
    shape = [s.order for s in series]
    info = {
        "m": args.m,
        "n": args.n,
        "q": args.q,
        "psi": psi.value,
        "order": pres.order,
        "derived_type": _type_list(abelian_invariants(Gp, Subgroup.trivial(pres))),
        "abelianization": _type_list(abelian_invariants(G, Gp)),
        "lower_central_orders": shape,
        "nilpotency_class": len(series) - 1,
        "coclass": pres.order.bit_length() - len(series),
        "admissible": _admissible(args.m, args.n, args.q),
    }
    if args.legendre is not None:
        from .classify import engine_abelianizations

        if args.legendre == -1 and (args.q == 1) != (args.pi == args.b):
            print(
                "symbol tuple inconsistent: for (p1/p2) = -1, q = 1 holds "
                "exactly when pi = B",
                file=sys.stderr,
            )
            return EXIT_INPUT
        profile = (args.legendre, args.pi, args.b, args.q, args.m, args.n, psi)
        try:
            fields = engine_abelianizations(profile)
        except KeyError:
            print("symbol tuple outside the tabulated cases", file=sys.stderr)
            return EXIT_INPUT
        info["fields"] = {name: _type_list(t) for name, t in fields.items()}
    if args.json:
        print(dumps(info))
    else:
        print(
            f"G(m={args.m}, n={args.n}, q={args.q}, psi={psi.value}): order {info['order']}, "
            f"G/G' = {AbelianType.from_factors(info['abelianization'])}, "
            f"G' = {AbelianType.from_factors(info['derived_type'])}"
        )
        print(f"lower central series orders: {shape}")
        print(f"nilpotency class {info['nilpotency_class']}, coclass {info['coclass']}")
        if "fields" in info:
            for name, tp in info["fields"].items():
                print(f"  Cl2({name}) = {AbelianType.from_factors(tp)}")
    return EXIT_OK


def _scan_pair(pair_tuple) -> dict:
    p1, p2 = pair_tuple
    pair = validate_pair(p1, p2)
    record, report, validation = classify_pair(p1, p2)
    props = {}
    if record.legendre == 1:
        quartic = quartic_symbol(p1, p2) * quartic_symbol(p2, p1)
        props["quartic-product-rule"] = quartic == record.pi
    props["unit-norm-minus-one"] = norm_eps(pair.d) == -1
    props["genus-2-2"] = (
        str(two_part_of_class_group(field_discriminant(pair.d))) == "(2, 2)"
        and str(two_part_of_class_group(field_discriminant(-pair.d))) == "(2, 2)"
    )
    minus = two_part_of_class_group(field_discriminant(-pair.r))
    plus = two_part_of_class_group(field_discriminant(pair.r))
    props["two-class-shapes"] = (
        minus.rank() == 2
        and minus.divisors[0] == 2
        and minus.divisors[1] >= 4
        and plus.is_cyclic()
        and plus.order() >= 2
    )
    props["exponent-coupling"] = _exponent_coupling_ok(record)
    if record.legendre == -1:
        props["q-agreement"] = q_from_symbols(pair) == unit_index_q(pair)
    props["prediction-vs-engine"] = validation.passed
    return {
        "p1": p1,
        "p2": p2,
        "d": pair.d,
        "q": record.q,
        "m": record.m,
        "n": record.n,
        "properties": props,
        "ok": all(props.values()),
    }


def _exponent_coupling_ok(record) -> bool:
    if record.q == 2 and record.m != 2:
        return False
    if record.legendre == -1 and record.n != 1:
        return False
    if record.q == 1 and record.legendre == -1 and record.m < 3:
        return False
    if record.legendre == 1 and record.pi == -1:
        return record.q == 1 and record.n == 1 and record.m >= 3
    if record.legendre == 1 and record.pi == 1:
        return record.m == 2 and record.n >= 2
    return True


def cmd_scan(args) -> int:
    if args.max < 13:
        print("scan needs --max >= 13 (the smallest valid pair is (5, 13))", file=sys.stderr)
        return EXIT_INPUT
    ps = primes_5_mod_8(args.max)
    pairs = [(a, b) for i, a in enumerate(ps) for b in ps[i + 1 :]]
    try:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                rows = list(pool.map(_scan_pair, pairs, chunksize=8))
        else:
            rows = [_scan_pair(p) for p in pairs]
    except (ConsistencyError, QAgreementError, AssertionError) as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    rows.sort(key=lambda r: (r["p1"], r["p2"]))
    failures = [r for r in rows if not r["ok"]]
    prop_counts: dict[str, int] = {}
    for r in rows:
        for name, ok in r["properties"].items():
            prop_counts[name] = prop_counts.get(name, 0) + (0 if ok else 1)
    summary = {
        "max": args.max,
        "pairs": len(rows),
        "property_failures": prop_counts,
        "failing_pairs": [
            {
                "p1": r["p1"],
                "p2": r["p2"],
                "failed": sorted(k for k, v in r["properties"].items() if not v),
            }
            for r in failures
        ],
        "ok": not failures,
    }
    if args.json:
        print(dumps(summary))
    else:
        print(f"scanned {len(rows)} pairs with p1 < p2 <= {args.max}")
        for name in sorted(prop_counts):
            n_bad = prop_counts[name]
            print(f"  {name}: {'all pass' if n_bad == 0 else f'{n_bad} FAILURES'}")
        if failures:
            for r in failures:
                bad = sorted(k for k, v in r["properties"].items() if not v)
                print(f"  FAIL ({r['p1']}, {r['p2']}): {', '.join(bad)}")
    return EXIT_OK if not failures else EXIT_CONSISTENCY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="classtower",
        description=(
            "Class-group invariants, Galois group structure and capitulation "
            "kernels for the 2-class field tower over Q(sqrt(2*p1*p2), i)"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="full report for one prime pair")
    p_classify.add_argument("--p1", type=int, required=True)
    p_classify.add_argument("--p2", type=int, required=True)
    p_classify.add_argument("--json", action="store_true")
    p_classify.set_defaults(func=cmd_classify)

    p_verify = sub.add_parser("verify-fixtures", help="compare embedded table fixtures")
    p_verify.add_argument("--table", type=str, default=None, help="fixture table id (4..8, 34, 35)")
    p_verify.add_argument("--filter", type=int, default=None, help="restrict to one d value")
    p_verify.add_argument(
        "--verbose", action="store_true",
        help="print every column with the printed tuple and its 2-part",
    )
    p_verify.add_argument("--json", action="store_true")
    p_verify.set_defaults(func=cmd_verify_fixtures)

    p_group = sub.add_parser("group", help="inspect the presented group for (m, n, q, psi)")
    p_group.add_argument("--m", type=int, required=True)
    p_group.add_argument("--n", type=int, required=True)
    p_group.add_argument("--q", type=int, required=True, choices=(1, 2))
    p_group.add_argument("--psi", choices=("sigma", "tau-sigma"), default="tau-sigma")
    p_group.add_argument("--force", action="store_true", help="allow inadmissible exponents")
    p_group.add_argument("--legendre", type=int, choices=(1, -1), default=None)
    p_group.add_argument("--pi", type=int, choices=(1, -1), default=1)
    p_group.add_argument("--b", type=int, choices=(1, -1), default=1)
    p_group.add_argument("--json", action="store_true")
    p_group.set_defaults(func=cmd_group)

    p_scan = sub.add_parser("scan", help="run the property suites over all pairs up to a bound")
    p_scan.add_argument("--max", type=int, required=True)
    p_scan.add_argument("--jobs", type=int, default=1)
    p_scan.add_argument("--json", action="store_true")
    p_scan.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
