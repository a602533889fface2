"""Command-line front end.

Subcommands: sieve, main-term, variance, expsum, farey, verify.  Exit
codes: 0 success (all checks pass), 1 check failure, 2 usage error,
3 resource limit.  Output is CSV or JSON with floats printed to 17
significant digits (round-trip safe); thread count comes from --threads,
then the APVAR_THREADS environment variable, then the host CPU count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import farey as farey_mod
from . import stats
from .errors import DomainError, ResourceError
from .residues import ap_main_term, eval_logpoly, logpoly_json, m_poly
from .sieve import ap_sums, exp_sum, read_table, sieve_dk, total_sum, write_table

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

SUITES = ("identities", "dirichlet", "farey", "growth", "all")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _resolve_threads(value) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("APVAR_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise DomainError(f"APVAR_THREADS={env!r} is not an integer") from exc
    return os.cpu_count() or 1


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_or_sieve(args, x: int, k: int, threads: int):
    if getattr(args, "table", None):
        table = read_table(args.table)
        if table.k != k or table.x < x:
            raise DomainError(
                f"cached table holds k={table.k}, x={table.x}; need k={k}, x>={x}"
            )
        return table
    return sieve_dk(x, k, threads=threads)


def cmd_sieve(args) -> int:
    threads = _resolve_threads(args.threads)
    table = sieve_dk(args.x, args.k, threads=threads)
    write_table(table, args.out)
    print(f"wrote {args.out}: x={table.x} k={table.k} total={total_sum(table)}")
    return EXIT_OK


def cmd_main_term(args) -> int:
    if args.a > args.q:
        raise DomainError(f"residue a={args.a} exceeds modulus q={args.q}")
    f = ap_main_term(args.q, args.a, args.k)
    m = m_poly(args.q, args.k)
    payload = {
        "f": logpoly_json(f, k=args.k, q=args.q, a=args.a),
        "M": logpoly_json(m, k=args.k, q=args.q),
    }
    if args.x is not None:
        payload["f"]["value_at_x"] = eval_logpoly(f, args.x)
        payload["M"]["value_at_x"] = eval_logpoly(m, args.x)
        payload["x"] = args.x
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_variance(args) -> int:
    if args.Q > args.x:
        raise DomainError(f"Q={args.Q} exceeds x={args.x}")
    threads = _resolve_threads(args.threads)
    table = _load_or_sieve(args, args.x, args.k, threads)
    report = stats.variance_total(table, args.x, args.Q, args.k, threads=threads)
    if args.format == "json":
        payload = {
            "x": report.x,
            "Q": report.Q,
            "k": report.k,
            "per_q": list(report.per_q),
            "total": report.total,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["q,V_q"]
        lines += [f"{q},{_fmt(v)}" for q, v in enumerate(report.per_q, start=1)]
        lines.append(f"total,{_fmt(report.total)}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_expsum(args) -> int:
    threads = _resolve_threads(args.threads)
    table = _load_or_sieve(args, args.x, args.k, threads)
    cls = ap_sums(table, args.q, args.x)
    s = exp_sum(cls, args.a)
    if args.format == "json":
        payload = {"a": s.a, "q": s.q, "x": s.X, "re": s.re, "im": s.im}
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(f"a,q,x,re,im\n{s.a},{s.q},{s.X},{_fmt(s.re)},{_fmt(s.im)}\n", args.out)
    return EXIT_OK


def cmd_farey(args) -> int:
    arcs = farey_mod.dissection(args.gamma)
    lines = ["a,q,left_num,left_den,right_num,right_den"]
    lines += [
        f"{arc.center.numerator},{arc.center.denominator},"
        f"{arc.left.numerator},{arc.left.denominator},"
        f"{arc.right.numerator},{arc.right.denominator}"
        for arc in arcs
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _check_row(name: str, lhs: float, rhs: float, tol: float) -> dict:
    denom = max(abs(lhs), abs(rhs))
    rel = abs(lhs - rhs) / denom if denom else 0.0
    return {
        "check": name,
        "lhs": lhs,
        "rhs": rhs,
        "rel_diff": rel,
        "pass": bool(rel <= tol),
    }


def _suite_identities(args, threads: int) -> list[dict]:
    from .arith import divisors, euler_phi, ramanujan_sum

    x = args.x or 10**4
    k = args.k
    Q = args.Q or min(100, x)
    table = _load_or_sieve(args, x, k, threads)
    rows = []
    worst = None
    for q in range(1, 51):
        lhs, rhs = stats.parseval_check(table, q, x, k)
        row = _check_row(f"parseval q={q}", lhs, rhs, 1e-9)
        if worst is None or row["rel_diff"] > worst["rel_diff"]:
            worst = row
    rows.append({**worst, "check": "parseval worst (q<=50)"})
    direct, expanded = stats.variance_expansion_check(
        table, x, Q, k, budget=args.budget
    )
    rows.append(_check_row(f"variance expansion Q={Q}", direct, expanded, 1e-9))
    worst = None
    for q in range(1, 61):
        lhs, rhs = stats.density_square_sum_check(q, float(x), k)
        row = _check_row(f"density square sum q={q}", lhs, rhs, 1e-9)
        if worst is None or row["rel_diff"] > worst["rel_diff"]:
            worst = row
    rows.append({**worst, "check": "density square sum worst (q<=60)"})
    ortho_bad = 0
    for q in range(1, 101):
        ds = divisors(q)
        for d1 in ds:
            for d2 in ds:
                got = sum(
                    ramanujan_sum(d1, a) * ramanujan_sum(d2, a) for a in range(1, q + 1)
                )
                want = q * euler_phi(d1) if d1 == d2 else 0
                if got != want:
                    ortho_bad += 1
    rows.append(
        {
            "check": "ramanujan orthogonality q<=100",
            "lhs": float(ortho_bad),
            "rhs": 0.0,
            "rel_diff": float(ortho_bad),
            "pass": ortho_bad == 0,
        }
    )
    return rows


def _suite_dirichlet(args, threads: int) -> list[dict]:
    k = args.k
    n = args.x or 10**5
    table = _load_or_sieve(args, n, k, threads)
    from .arith import divisors

    worst = None
    for q in range(1, 31):
        for delta in divisors(q):
            lhs, rhs = stats.dirichlet_partial_sum_check(table, q, delta)
            row = _check_row(f"dirichlet q={q} delta={delta}", lhs, rhs, 1e-3)
            if worst is None or row["rel_diff"] > worst["rel_diff"]:
                worst = row
    return [{**worst, "check": f"dirichlet worst (q<=30, N={n})"}]


def _suite_farey(args, threads: int) -> list[dict]:
    gamma = args.gamma or 300
    bad = 0
    arcs = 0
    for g in range(2, gamma + 1):
        rep = farey_mod.verify_containment(g)
        arcs += rep.arcs_checked
        if not rep.ok:
            bad += 1
    counts = farey_mod.denominator_counts(1000)
    from .arith import euler_phi

    length_ok = counts[1] == 2 and all(
        counts[q] == euler_phi(q) for q in range(2, 1001)
    )
    return [
        {
            "check": f"farey containment+tiling gamma<={gamma} ({arcs} arcs)",
            "lhs": float(bad),
            "rhs": 0.0,
            "rel_diff": float(bad),
            "pass": bad == 0,
        },
        {
            "check": "farey length histogram gamma<=1000",
            "lhs": 1.0 if length_ok else 0.0,
            "rhs": 1.0,
            "rel_diff": 0.0 if length_ok else 1.0,
            "pass": length_ok,
        },
    ]


def _suite_growth(args, threads: int) -> list[dict]:
    top = args.x or 2**18
    grid = [2**j for j in range(14, 19) if 2**j <= top]
    if len(grid) < 2:
        raise DomainError("growth suite needs --x of at least 2^15")
    study = stats.growth_study(
        args.k,
        grid,
        ("power", 0.75),
        threads=threads,
    )
    lo, hi = 0.85, 1.2
    return [
        {
            "check": "growth slope log V vs log(xQ)",
            "lhs": study.slope,
            "rhs": 1.0,
            "rel_diff": abs(study.slope - 1.0),
            "pass": bool(lo <= study.slope <= hi),
        }
    ]


def cmd_verify(args) -> int:
    threads = _resolve_threads(args.threads)
    rows = []
    if args.suite in ("identities", "all"):
        rows += _suite_identities(args, threads)
    if args.suite in ("dirichlet", "all"):
        rows += _suite_dirichlet(args, threads)
    if args.suite in ("farey", "all"):
        rows += _suite_farey(args, threads)
    if args.suite in ("growth", "all"):
        rows += _suite_growth(args, threads)
    text = "\n".join(json.dumps(r) for r in rows) + "\n"
    _emit(text, args.out)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apvar",
        description="Divisor-function statistics in arithmetic progressions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="sieve d_k up to x and write a binary table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("main-term", help="density and reduced main-term polynomials")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--x", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_main_term)

    p = sub.add_parser("variance", help="per-modulus variances and their total")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--table", help="path to a cached sieve table")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("expsum", help="exponential sum S_x(a/q)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--table")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_expsum)

    p = sub.add_parser("farey", help="mediant dissection as CSV")
    p.add_argument("--gamma", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_farey)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--x", type=int)
    p.add_argument("--Q", type=int)
    p.add_argument("--gamma", type=int)
    p.add_argument("--table")
    p.add_argument("--budget", type=int, default=stats.DEFAULT_WORK_BUDGET)
    p.add_argument("--out")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
