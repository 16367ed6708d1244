"""Command-line front end.

Exit codes: 0 success, 1 a checked mathematical property failed, 2 usage or
precondition error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys

from ._validation import DomainError, PreconditionError, check_rational
from .bound import PUBLISHED_A_BOUNDS, certified_below, minimize_A, progression_bound
from .lattice import MSetSpec, complement_identity_check, m_complement_size, m_set_size
from .search import bound_consistency, max_progression_free

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

BOUND_FIELDS = ["k", "q", "d", "m", "witness_y", "a_value", "c_value", "trivial_flag", "grid_lower"]
TABLE_FIELDS = BOUND_FIELDS + ["published_a_bound", "below_published", "error"]
A_TABLE_FIELDS = ["m", "witness_y", "a_value", "grid_lower", "published_a_bound", "below_published"]


def _real(x) -> str:
    return "" if x is None else format(x, ".15g")


def _cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return _real(x)
    return "" if x is None else str(x)


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


def _write_csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({f: _cell(row.get(f)) for f in fields})
    return buf.getvalue()


def _published_cells(m: int, a_value: float) -> dict:
    published = PUBLISHED_A_BOUNDS.get(m)
    return {
        "published_a_bound": published,
        "below_published": None if published is None else certified_below(a_value, published),
    }


def cmd_bound(args) -> tuple[int, str]:
    report = progression_bound(args.k, args.q)
    data = report.to_dict()
    if args.format == "json":
        return EXIT_OK, _json(data) + "\n"
    if args.format == "csv":
        return EXIT_OK, _write_csv([data], BOUND_FIELDS)
    lines = [
        f"k = {report.k}, q = {report.q}",
        f"d = gcd(L_k, q) = {report.d}, m = q/d = {report.m}",
        f"witness y = {_real(report.witness_y)}",
        f"A(m) <= {_real(report.a_value)}  (grid lower estimate {_real(report.grid_lower)})",
        f"c_k(q) = {_real(report.c_value)}",
    ]
    published = PUBLISHED_A_BOUNDS.get(report.m)
    if published is not None:
        verdict = "yes" if certified_below(report.a_value, published) else "NO"
        lines.append(f"below published A({report.m}) < {published}: {verdict}")
    if report.trivial_flag:
        lines.append("trivial: m = 1, the bound is q^n")
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_table(args) -> tuple[int, str]:
    if args.m is not None:
        rows = []
        for m in _int_list(args.m):
            amin = minimize_A(m)
            rows.append(
                {"m": m, "witness_y": amin.witness_y, "a_value": amin.a_value, "grid_lower": amin.grid_lower}
                | _published_cells(m, amin.a_value)
            )
        fields = A_TABLE_FIELDS
    else:
        rows = []
        for k in _int_list(args.k):
            for q in _int_list(args.q):
                try:
                    data = progression_bound(k, q).to_dict()
                except DomainError as exc:
                    rows.append({"k": k, "q": q, "error": str(exc)})
                    continue
                rows.append(data | _published_cells(data["m"], data["a_value"]))
        fields = TABLE_FIELDS
    if args.format == "json":
        return EXIT_OK, _json(rows) + "\n"
    return EXIT_OK, _write_csv(rows, fields)


def cmd_count(args) -> tuple[int, str]:
    alpha = check_rational(args.alpha)
    spec = MSetSpec.of(alpha, args.q, args.n)
    identity = complement_identity_check(spec)
    data = {
        "q": spec.q,
        "n": spec.n,
        "alpha": f"{alpha.numerator}/{alpha.denominator}",
        "total": spec.q**spec.n,
        "size": m_set_size(spec),
        "complement_size": m_complement_size(spec),
        "mirror_size": identity.mirror_size,
        "identity_holds": identity.holds,
        "boundary_integral": identity.boundary_integral,
    }
    if args.format == "json":
        return EXIT_OK, _json(data) + "\n"
    if args.format == "csv":
        return EXIT_OK, _write_csv([data], list(data))
    return EXIT_OK, "".join(f"{key} = {_cell(value)}\n" for key, value in data.items())


def cmd_search(args) -> tuple[int, str]:
    result = max_progression_free(args.q, args.n, args.k, args.semantics, args.budget_nodes, args.threads)
    consistency = bound_consistency(args.q, args.n, args.k, args.budget_nodes, args.threads, exact=result)
    code = EXIT_OK if consistency.holds else EXIT_FAIL
    if args.format == "json":
        return code, _json({"search": result.to_dict(), "consistency": consistency.to_dict()}) + "\n"
    lines = [
        f"r_{result.k}(Z_{result.q}^{result.n}) [{result.semantics}] = {result.max_size}"
        + ("" if result.optimal else "  (lower bound, budget exhausted)"),
        f"witness: {' '.join(''.join(map(str, p)) if result.q <= 10 else str(p) for p in result.witness)}",
        f"nodes explored: {result.nodes_explored}",
    ]
    if consistency.theorem_applicable:
        verdict = "holds" if consistency.theorem_holds else "FAILS"
        lines.append(
            f"c_k(q)^n = {_real(consistency.c_value)}^{result.n}, floor = {consistency.bound_floor}: {verdict}"
        )
    for red in consistency.reductions:
        verdict = "holds" if red.holds else "FAILS"
        lines.append(f"subgroup Z_{red.N}: r = {red.r_N}, (q/N)^n r = {red.rhs}: {verdict}")
    return code, "\n".join(lines) + "\n"


def cmd_verify(args) -> tuple[int, str]:
    from .verify import run_suite

    results = run_suite(args.suite, args.seed, inject_fault=args.inject_fault)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAIL
    if args.format == "json":
        return code, _json({"suite": args.suite, "seed": args.seed, "checks": [r.to_dict() for r in results]}) + "\n"
    if args.format == "csv":
        return code, _write_csv([r.to_dict() for r in results], ["name", "trials", "failures", "passed", "detail"])
    lines = [
        f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.failures}/{r.trials} failures" + (f"  [{r.detail}]" if r.detail else "")
        for r in results
    ]
    return code, "\n".join(lines) + "\n"


def cmd_selftest(args) -> tuple[int, str]:
    from .acceptance import format_results, run_all

    results = run_all(seed=args.seed)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAIL
    if args.format == "json":
        return code, _json([r.to_dict() for r in results]) + "\n"
    return code, format_results(results)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="progfree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help, default_format="text"):
        # a fresh parent per command: argparse parents share their Action objects
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--format", choices=["text", "json", "csv"], default=default_format)
        common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
        return sub.add_parser(name, parents=[common], help=help)

    p = add("bound", "c_k(q) for a prime power q >= k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_bound)

    p = add("table", "batch table of c_k(q) or of A(m)", default_format="csv")
    p.add_argument("--k", default="", help="comma-separated list")
    p.add_argument("--q", default="", help="comma-separated list")
    p.add_argument("--m", default=None, help="comma-separated list; tabulate A(m) directly")
    p.set_defaults(func=cmd_table)

    p = add("count", "|M_alpha| and the complement identity")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True, help="exact rational 'num/den'")
    p.set_defaults(func=cmd_count)

    p = add("search", "exact r_k(Z_q^n) by branch and bound")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--semantics", choices=["literal", "distinct"], default="literal")
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = add("verify", "run the seeded property suites")
    p.add_argument("--suite", choices=["algebra", "rank", "keylemma", "chernoff", "all"], default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = add("selftest", "run every acceptance criterion")
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = args.func(args)
    except (DomainError, PreconditionError) as exc:
        print(f"progfree {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def run_captured(argv) -> tuple[int, str]:
    """Run ``main`` and return (exit code, stdout text)."""
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
