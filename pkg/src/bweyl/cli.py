"""Command-line driver: verification sweeps, the isolated-block atlas, and
supplement structure summaries.

Reports go to stdout (JSON or markdown), diagnostics to stderr.  Exit codes:
0 all checks passed, 1 a verified identity failed, 2 bad usage/parameters.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import BudgetExceededError, VerificationError
from .cyclo import EllContext, is_prime

USAGE_ERROR, CHECK_FAILURE = 2, 1


def _parse_int_list(text: str) -> tuple:
    return tuple(int(x) for x in text.split(",") if x)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bweyl",
        description="exact verification of signed-permutation Weyl group "
        "constructions: twists, supplements, sign calculus, atlas",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run verification suites")
    verify.add_argument("--suite", action="append", default=None,
                        help="suite name (repeatable); default: all")
    verify.add_argument("--d0", type=_parse_int_list, default=(1, 3))
    verify.add_argument("--tl", type=_parse_int_list, default=(1, 2))
    verify.add_argument("--m", type=_parse_int_list, default=(0, 1))
    verify.add_argument("--d", type=_parse_int_list, default=None,
                        help="twist orders; default: both parities per d0")
    verify.add_argument("--ell", type=_parse_int_list, default=(5, 7))
    verify.add_argument("--q", type=_parse_int_list, default=(2, 3, 4))
    verify.add_argument("--n", type=int, default=6,
                        help="atlas rank cap for the sweep")
    verify.add_argument("--budget", type=int, default=4_000_000)
    verify.add_argument("--jobs", type=int, default=1)
    verify.add_argument("--format", choices=("json", "md"), default="json")
    verify.add_argument("--mutate", default=None,
                        help="self-test injection: 'sign:<index>' flips one "
                        "sign-table entry, 'cocycle' corrupts the fold branch")

    atlas = sub.add_parser("atlas", help="emit isolated-block atlas rows")
    atlas.add_argument("--n", type=int, required=True)
    atlas.add_argument("--q", type=int, required=True)
    atlas.add_argument("--ell", type=int, required=True)
    atlas.add_argument("--format", choices=("json", "md"), default="md")

    group = sub.add_parser("group", help="print supplement structure")
    group.add_argument("--d0", type=int, required=True)
    group.add_argument("--tl", type=int, required=True)
    group.add_argument("--m", type=int, required=True)
    group.add_argument("--d", type=int, required=True)
    group.add_argument("--format", choices=("json", "md"), default="md")
    return parser


def _verify_points(args) -> list:
    points = []
    for d0 in args.d0:
        for t_l in args.tl:
            for m in args.m:
                d_values = args.d if args.d else (d0, 2 * d0)
                for d in d_values:
                    dd0 = d if d % 2 else d // 2
                    if dd0 != d0 or d0 % 2 == 0:
                        continue
                    points.append((d0, t_l, m, d))
    return points


def _run_point_suite(task):
    from .suites import POINT_SUITES, suite_supplement

    name, point, budget = task
    if name == "supplement":
        return suite_supplement(*point, budget=budget)
    return POINT_SUITES[name](*point)


def cmd_verify(args) -> int:
    from .suites import GLOBAL_SUITES, POINT_SUITES

    for ell in args.ell:
        if not is_prime(ell) or ell == 2:
            print(f"error: --ell wants odd primes, got {ell}", file=sys.stderr)
            return USAGE_ERROR
    if any(q < 2 for q in args.q):
        print("error: --q wants integers >= 2", file=sys.stderr)
        return USAGE_ERROR
    suites = args.suite or (list(GLOBAL_SUITES) + list(POINT_SUITES))
    unknown = [s for s in suites if s not in GLOBAL_SUITES and s not in POINT_SUITES]
    if unknown:
        print(f"error: unknown suites {unknown}", file=sys.stderr)
        return USAGE_ERROR
    if args.mutate is not None:
        return _run_mutation(args)
    reports = []
    global_kwargs = {
        "cyclo-lemma": {"ells": args.ell, "q_max": max(args.q), "k_max": 12},
        "hl-structure": {"d0_values": args.d0,
                         "l_cap": 2 * max(args.d0) * max(args.tl)},
        "atlas-ellparts": {"n_max": args.n, "ells": args.ell,
                           "q_values": args.q},
        "tits-core": {"random_triples": 2000},
        "wreath": {},
        "mutation": {},
    }
    for name in suites:
        if name in GLOBAL_SUITES:
            print(f"running {name} ...", file=sys.stderr)
            reports.append(GLOBAL_SUITES[name](**global_kwargs.get(name, {})))
    point_tasks = [
        (name, point, args.budget)
        for name in suites if name in POINT_SUITES
        for point in _verify_points(args)
    ]
    if args.jobs > 1 and point_tasks:
        import multiprocessing

        with multiprocessing.Pool(args.jobs) as pool:
            point_reports = pool.map(_run_point_suite, point_tasks)
    else:
        point_reports = []
        for task in point_tasks:
            print(f"running {task[0]} at {task[1]} ...", file=sys.stderr)
            point_reports.append(_run_point_suite(task))
    # canonical merge order regardless of worker scheduling
    reports.extend(sorted(
        point_reports, key=lambda r: (r.suite, sorted(r.params.items()))
    ))
    for r in reports:
        print(f"{r.suite} {r.params}: "
              f"{'ok' if r.passed else 'FAILED'} in {r.seconds:.1f}s",
              file=sys.stderr)
    _emit(reports, args.format)
    return 0 if all(r.passed for r in reports) else CHECK_FAILURE


def _run_mutation(args) -> int:
    """Deliberately corrupt one ingredient and report the detected failure."""
    from .chevsign import build_sign_table, check_sign_table_consistency
    from .suites import CheckResult, SuiteReport, suite_tits_core

    if args.mutate == "cocycle":
        # the corrupted fold must fail verification: exit 1 with the
        # counterexample when detected, 0 only if it slipped through
        report = suite_tits_core(random_triples=400, cocycle_rule="ascent")
        _emit([report], args.format)
        return CHECK_FAILURE if not report.passed else 0
    if args.mutate.startswith("sign:"):
        index = int(args.mutate.split(":", 1)[1])
        table = build_sign_table(3)
        keys = sorted(table.eta)
        if not 0 <= index < len(keys):
            print(f"error: sign index out of range 0..{len(keys) - 1}",
                  file=sys.stderr)
            return USAGE_ERROR
        violations = check_sign_table_consistency(table.flipped(*keys[index]))
        report = SuiteReport(
            "mutation-injection", {"entry": keys[index]},
            [CheckResult("sign-flip-detected",
                         "the flipped entry violates a consistency law",
                         bool(violations),
                         {"violations": violations[:3]})],
        )
        # the injected corruption must be detected: report failure (exit 1)
        # with the counterexample when it is, success only if undetected
        _emit([report], args.format)
        return CHECK_FAILURE if violations else 0
    print("error: --mutate wants 'cocycle' or 'sign:<index>'", file=sys.stderr)
    return USAGE_ERROR


def _emit(reports, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps([r.as_dict() for r in reports], sort_keys=True, indent=2))
    else:
        print("\n\n".join(r.to_markdown() for r in reports))


def cmd_atlas(args) -> int:
    from .atlas import enumerate_rows, rows_to_json, rows_to_markdown

    if args.n < 2:
        print("error: --n must be >= 2", file=sys.stderr)
        return USAGE_ERROR
    if not is_prime(args.ell) or args.ell < 5:
        print("error: --ell must be a prime >= 5", file=sys.stderr)
        return USAGE_ERROR
    if args.q < 2 or args.q % args.ell == 0:
        print("error: --q must be >= 2 and coprime to --ell", file=sys.stderr)
        return USAGE_ERROR
    ctx = EllContext(q=args.q, ell=args.ell)
    rows = enumerate_rows(args.n, ctx)
    if args.format == "json":
        print(rows_to_json(rows, ctx))
    else:
        print(rows_to_markdown(rows, ctx))
    return 0


def cmd_group(args) -> int:
    from .supplement import build_supplement

    d0 = args.d if args.d % 2 else args.d // 2
    if d0 != args.d0 or args.d0 % 2 == 0 or args.tl < 1 or args.m < 0:
        print("error: need odd d0 with d in {d0, 2 d0} and tl >= 1",
              file=sys.stderr)
        return USAGE_ERROR
    l = 2 * args.d0 * args.tl
    try:
        data = build_supplement(l, args.d, args.m)
    except (ValueError, BudgetExceededError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except VerificationError as err:
        print(f"identity failure: {err} {err.counterexample}", file=sys.stderr)
        return CHECK_FAILURE
    g = data.ctx.group
    summary = {
        "params": {"d0": args.d0, "t_l": args.tl, "m": args.m, "d": args.d,
                   "l": l, "rank": data.ctx.n},
        "orders": {
            "V_prime": data.v_prime_order,
            "C_prime": len(data.c_closure.elements),
            "P_prime": len(data.p_closure.elements),
            "H_prime": len(data.h_prime.elements),
            "relative_weyl": data.relative_weyl_order,
        },
        "generators": {
            "c_primes": [
                {"torus": list(c.torus), "weyl": list(c.weyl.images)}
                for c in data.c_primes
            ],
            "p_primes": [
                {"torus": list(p.torus), "weyl": list(p.weyl.images)}
                for p in data.p_primes
            ],
        },
        "conjugation_table": [
            {
                "i": i, "j": j,
                "image": "c_{}'".format(
                    data.c_primes.index(data.ctx.pconj(c, pp)) + 1
                ),
            }
            for i, c in enumerate(data.c_primes, start=1)
            for j, pp in enumerate(data.p_primes, start=1)
        ],
    }
    if args.format == "json":
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        print(f"supplement at d0={args.d0} t_l={args.tl} m={args.m} d={args.d}")
        for k, v in summary["orders"].items():
            print(f"  |{k}| = {v}")
        for i, c in enumerate(data.c_primes, 1):
            print(f"  c_{i}' = (torus {list(c.torus)}, weyl {list(c.weyl.images)})")
        for i, p in enumerate(data.p_primes, 1):
            print(f"  p_{i}' = (torus {list(p.torus)}, weyl {list(p.weyl.images)})")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    handlers = {"verify": cmd_verify, "atlas": cmd_atlas, "group": cmd_group}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
