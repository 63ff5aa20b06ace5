"""Command-line front end.

Exit codes: 0 success, 2 degenerate or invalid mathematical input, 3 parse
or I/O error, 4 guardrail exceeded, 5 internal cross-check failure.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import geomslab, harness, invariants, primorial, sicount, signspace
from .errors import ParseError, SignCountError, TooManyElements
from .exactnum import FactoredInteger, factorize, format_rational, parse_rational
from .sicount import WeightVector

DEFAULT_TABLE_MAX = 23


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


def render_table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def parse_csv_rationals(text: str):
    return [parse_rational(x) for x in text.split(",") if x.strip()]


def load_weights(args) -> WeightVector:
    if args.alpha:
        return WeightVector(tuple(parse_csv_rationals(args.alpha)))
    if not args.weights:
        raise ParseError("give --weights FILE or --alpha \"a1,a2,...\"")
    try:
        with open(args.weights) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read weight file {args.weights}: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("weights"), list):
        raise ParseError("weight file must be an object with a 'weights' list")
    return WeightVector(tuple(parse_rational(w) for w in data["weights"]))


def _pair_args(args):
    if args.i is None or args.j is None:
        return None
    return args.i - 1, args.j - 1


# ------------------------------------------------------------- handlers


def cmd_invariants(args) -> str:
    w = load_weights(args)
    a = invariants.AlphaInstance(w, engine=args.engine, threads=args.threads)
    if args.action == "closed-form":
        h = invariants.h_alpha(a)
        obj = {"alpha": [format_rational(x) for x in w.weights], "h": h}
        return dump_json(obj) if args.format == "json" else f"h(alpha) = {h}"
    if args.action == "parity":
        mode = "plain"
    else:
        mode = args.mode
    pair = _pair_args(args)
    if pair and not args.all_pairs:
        i, j = pair
        if args.action == "parity":
            value = invariants.s_parity(a, i, j)
            key = "parity"
        elif mode == "plain":
            value, key = invariants.n_ij(a, i, j), "N"
        else:
            value, key = invariants.n_cal_ij(a, i, j), "N_cal"
        obj = {"i": args.i, "j": args.j, key: value}
        return dump_json(obj) if args.format == "json" else f"{key}_{args.i},{args.j} = {value}"
    report = invariants.all_pairs_report(a, mode)
    if args.format == "json":
        return dump_json(report.to_dict())
    if args.action == "parity":
        rows = [(r.i + 1, r.j + 1, r.cardinality, r.parity) for r in report.rows]
        body = render_table(("i", "j", "#S", "parity"), rows)
        return body + f"\nparity constant: {report.parity_constant}"
    rows = [(r.i + 1, r.j + 1, r.value, r.cardinality, r.parity) for r in report.rows]
    label = "N" if mode == "plain" else "N_cal"
    body = render_table(("i", "j", label, "#", "parity"), rows)
    summary = [f"all equal: {report.all_equal}", f"common value: {report.common_value}"]
    if report.h is not None:
        summary.append(f"h(alpha): {report.h}")
    else:
        summary.append("m even: no invariance claim")
    return body + "\n" + "\n".join(summary)


def cmd_evenmap(args) -> str:
    sigma = signspace.load_dense_map(args.map)
    if args.action == "verify":
        ok, bad = signspace.verify_even(sigma)
        obj = {"m": sigma.size, "even": ok, "counterexample": None if ok else str(bad)}
        if args.format == "json":
            return dump_json(obj)
        return f"even: {ok}" + ("" if ok else f"\ncounterexample A = {bad.indices()} (0-based bits), sign vector {bad}")
    if args.verify_even:
        sigma = sigma.verified()
    total, quarter = signspace.theorem1_value(sigma)
    pairs = [(args.u - 1, args.v - 1)] if args.u and args.v else [
        (u, v) for u in range(sigma.size) for v in range(sigma.size) if u != v
    ]
    rows = [(u + 1, v + 1, signspace.n_sigma(sigma, u, v)) for u, v in pairs]
    if args.format == "json":
        return dump_json({
            "m": sigma.size, "sum": total, "quarter": quarter,
            "pairs": [{"u": u, "v": v, "N_sigma": n} for u, v, n in rows],
        })
    return render_table(("u", "v", "N_sigma"), rows) + f"\nsum of sigma: {total}\nsum / 4: {quarter}"


def _factored_from_args(args) -> FactoredInteger:
    if args.factors:
        primes = [int(x) for x in args.factors.split(",") if x.strip()]
        fi = FactoredInteger.from_primes(primes)
        if args.n is not None and args.n != fi.value:
            raise ParseError(f"--factors multiply to {fi.value}, not --n {args.n}")
        return fi
    if args.n is None:
        raise ParseError("give --n N or --factors \"p1,p2,...\"")
    return factorize(args.n)


def _check_table_size(args, m: int) -> None:
    if m > DEFAULT_TABLE_MAX and not args.allow_large:
        raise TooManyElements(f"m = {m} is past {DEFAULT_TABLE_MAX}; pass --allow-large (limit {primorial.PRIMORIAL_MAX})")


def cmd_primorial(args) -> str:
    fmt = args.format
    if args.action == "g":
        _check_table_size(args, args.m)
        method = args.method.replace("-", "_")
        g = primorial.g_m(args.m, method)
        return dump_json({"m": args.m, "g": g, "method": args.method}) if fmt == "json" else f"g({args.m}) = {g}"
    if args.action == "table":
        _check_table_size(args, args.odd_max)
        method = args.method.replace("-", "_")
        rows = primorial.g_table(args.odd_max, method, "all" if args.even else "odd")
        if fmt == "json":
            return dump_json({"method": args.method, "table": [{"m": m, "g": g} for m, g in rows]})
        return render_table(("m", "g(m)"), rows)
    if args.action == "q":
        n = _factored_from_args(args)
        q = primorial.q_of_n(n)
        if fmt == "json":
            return dump_json({"n": str(n.value), "factors": [[str(p), e] for p, e in n.factors], "Q": q})
        return f"Q({n.value}) = {q}"
    if args.action == "nij":
        _check_table_size(args, args.m)
        ctx = primorial.PrimorialContext(args.m)
        i, j = args.i - 1, args.j - 1
        if args.method == "direct":
            value = primorial.n_ij_beta(ctx, i, j)
        elif args.method == "moebius":
            value = primorial.n_ij_beta_mobius(ctx, i, j)
        else:
            value = primorial.n_ij_beta_checked(ctx, i, j)
        if fmt == "json":
            return dump_json({"m": args.m, "i": args.i, "j": args.j, "method": args.method, "N": value})
        return f"N_{args.i},{args.j}(beta_{args.m}) = {value}"
    if args.action == "scan-prop1":
        counts = primorial.scan_proposition1(args.max)
        if fmt == "json":
            return dump_json({"max": args.max, "counts": counts, "violations": 0})
        rows = sorted(counts.items())
        return render_table(("class", "count"), rows) + f"\nall squarefree 1 < n <= {args.max} classified, 0 violations"
    raise ParseError(f"unknown primorial action {args.action}")


def cmd_geom(args) -> str:
    points = geomslab.load_points(args.points)
    if args.normal:
        inst = geomslab.validate_normal(points, parse_csv_rationals(args.normal))
    else:
        inst = geomslab.find_normal(points, seed=args.seed)
    normal = [format_rational(x) for x in inst.normal]
    if inst.m % 2 and args.all_pairs:
        rep = geomslab.slab_report(inst, args.engine)
        if args.format == "json":
            return dump_json({"normal": normal, "seed": args.seed, **rep.to_dict()})
        rows = [(i + 1, j + 1, v, rep.expected_sign[i, j]) for (i, j), v in rep.table.items()]
        head = f"normal: ({','.join(normal)})\nprojections: {[format_rational(a) for a in rep.projections]}"
        return head + "\n" + render_table(("i", "j", "M", "-sgn(a_j)c"), rows) + (
            f"\nh = {rep.h}, c = N_sigma = {rep.c}, |M| constant: {rep.abs_constant}"
        )
    rows = [
        (i + 1, j + 1, geomslab.m_ij(inst, i, j, args.engine))
        for i in range(inst.m) for j in range(inst.m) if i != j
    ]
    if args.format == "json":
        return dump_json({"normal": normal, "pairs": [{"i": i, "j": j, "M": v} for i, j, v in rows]})
    note = "" if inst.m % 2 else "\nm even: the slab map is not even, no relation asserted"
    return f"normal: ({','.join(normal)})\n" + render_table(("i", "j", "M"), rows) + note


class VerifyFailed(SignCountError):
    exit_code = 5

    def __init__(self, message, output=""):
        super().__init__(message)
        self.output = output


def cmd_verify(args) -> str:
    cfg = harness.HarnessConfig(seed=args.seed, quick=args.quick, inject_fault=args.inject_fault, threads=args.threads)
    results = harness.run_all(cfg)
    ok = all(r.passed for r in results)
    if args.format == "json":
        out = dump_json({"seed": args.seed, "quick": args.quick, "passed": ok, "suites": [r.to_dict() for r in results]})
    else:
        lines = [f"# seed: {args.seed}  quick: {args.quick}"]
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status}  {r.name:<12} cases={r.cases}")
            if not r.passed:
                lines.append(f"      {r.message}")
                lines.append(f"      replay: {json.dumps(r.instance, sort_keys=True)}")
        lines.append("all suites passed" if ok else "FAILED")
        out = "\n".join(lines)
    if not ok:
        failed = ", ".join(r.name for r in results if not r.passed)
        raise VerifyFailed(f"check failed: {failed}", output=out)
    return out


def cmd_bench(args) -> str:
    rng = random.Random(args.seed)
    weights = [rng.getrandbits(args.bits) for _ in range(args.m)]
    w = WeightVector(tuple(weights))
    sicount.require_nondegenerate(w)
    rows = []
    results = {}
    for threads in sorted({1, args.threads}):
        t0 = time.perf_counter()
        value = sicount.alternating_sign_sum(WeightVector(tuple(weights)), threads=threads)
        rows.append((f"alternating_sign_sum m={args.m} threads={threads}", value, f"{time.perf_counter() - t0:.3f}"))
        results[threads] = value
    t0 = time.perf_counter()
    primorial.g_table(DEFAULT_TABLE_MAX, "both")
    rows.append((f"g table to m={DEFAULT_TABLE_MAX}, both methods", "", f"{time.perf_counter() - t0:.3f}"))
    same = len(set(results.values())) == 1
    if args.format == "json":
        return dump_json({"seed": args.seed, "rows": [{"task": a, "value": b, "seconds": c} for a, b, c in rows], "threads_agree": same})
    return f"# seed: {args.seed}\n" + render_table(("task", "value", "seconds"), rows) + f"\nthread results agree: {same}"


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--threads", default=None, help="worker threads (or 'auto'); SIGNCOUNT_THREADS overrides")
    common.add_argument("--engine", choices=("brute", "mitm", "auto"), default="auto")
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="signcount", description="Exact signed sign-vector counts and their invariants.")
    sub = p.add_subparsers(dest="command", required=True)

    inv = sub.add_parser("invariants", parents=[common], help="pair invariants of a weight vector")
    inv.add_argument("action", choices=("compute", "closed-form", "parity"))
    inv.add_argument("--weights", help="JSON file {\"weights\": [\"1/3\", ...]}")
    inv.add_argument("--alpha", help="comma separated rationals")
    inv.add_argument("--mode", choices=("plain", "calligraphic"), default="plain")
    inv.add_argument("--i", type=int)
    inv.add_argument("--j", type=int)
    inv.add_argument("--all-pairs", action="store_true")
    inv.set_defaults(handler=cmd_invariants)

    ev = sub.add_parser("evenmap", parents=[common], help="dense even maps")
    ev.add_argument("action", choices=("verify", "nsigma"))
    ev.add_argument("--map", required=True, help="JSON file {\"m\": M, \"values\": [...]}")
    ev.add_argument("--u", type=int)
    ev.add_argument("--v", type=int)
    ev.add_argument("--verify-even", action="store_true", help="check evenness before computing")
    ev.set_defaults(handler=cmd_evenmap)

    pr = sub.add_parser("primorial", parents=[common], help="Moebius sums over primorial divisors")
    pr.add_argument("action", choices=("g", "table", "q", "nij", "scan-prop1"))
    pr.add_argument("--m", type=int, default=3)
    pr.add_argument("--odd-max", type=int, default=DEFAULT_TABLE_MAX)
    pr.add_argument("--even", action="store_true", help="include even m in the table")
    pr.add_argument("--method", default="both", choices=("definition", "via-q", "both", "direct", "moebius"))
    pr.add_argument("--n", type=int)
    pr.add_argument("--factors")
    pr.add_argument("--i", type=int, default=1)
    pr.add_argument("--j", type=int, default=2)
    pr.add_argument("--max", type=int, default=100_000)
    pr.add_argument("--allow-large", action="store_true")
    pr.set_defaults(handler=cmd_primorial)

    ge = sub.add_parser("geom", parents=[common], help="point sets and slabs")
    ge.add_argument("action", choices=("slab",))
    ge.add_argument("--points", required=True)
    ge.add_argument("--normal")
    ge.add_argument("--all-pairs", action="store_true")
    ge.set_defaults(handler=cmd_geom)

    ve = sub.add_parser("verify", parents=[common], help="run every property suite")
    ve.add_argument("action", choices=("all",))
    ve.add_argument("--quick", action="store_true")
    ve.add_argument("--inject-fault", choices=("g-table",), help=argparse.SUPPRESS)
    ve.set_defaults(handler=cmd_verify)

    be = sub.add_parser("bench", parents=[common], help="timing runs")
    be.add_argument("--m", type=int, default=22)
    be.add_argument("--bits", type=int, default=60)
    be.set_defaults(handler=cmd_bench)
    return p


def _check_method(args) -> None:
    if args.command != "primorial":
        return
    allowed = {"g": ("definition", "via-q", "both"), "table": ("definition", "via-q", "both"), "nij": ("direct", "moebius", "both")}
    if args.action in allowed and args.method not in allowed[args.action]:
        raise ParseError(f"--method {args.method} does not apply to 'primorial {args.action}'")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _check_method(args)
        args.threads = sicount.resolve_threads(args.threads)
        out = args.handler(args)
    except SignCountError as exc:
        output = getattr(exc, "output", None)
        if output:
            print(output, file=stdout)
        print(f"error: {exc}", file=stderr)
        witness = getattr(exc, "witness", None) or getattr(exc, "counterexample", None)
        if witness is not None:
            print(f"witness: {witness}", file=stderr)
        return exc.exit_code
    print(out, file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
