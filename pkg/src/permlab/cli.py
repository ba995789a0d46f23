"""Command-line front end.

Exit codes: 0 success (or verification pass), 1 verification failure,
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import factorial

from . import verify as vf
from .chi import chi, chi_inverse
from .errors import PermlabError
from .maps import fundamental, fundamental_inverse, runsort, sort_descending_runs_by_bottom
from .permutation import Permutation, parse_permutation, reverse

MAPS = {
    "runsort": runsort,
    "reverse": reverse,
    "sortruns": sort_descending_runs_by_bottom,
    "chi1": lambda p: chi(p, 1)[0],
    "chi2": lambda p: chi(p, 2)[0],
    "chi1-inv": lambda p: chi_inverse(p, 1),
    "chi2-inv": lambda p: chi_inverse(p, 2),
    "fundamental": fundamental,
    "fundamental-inv": fundamental_inverse,
}


def _print(text: str) -> None:
    print(text, flush=True)


def _to_json(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _split_checks(value: str) -> list[str]:
    return [c for c in value.split(",") if c]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permlab",
        description="Permutation statistics, the chi bijections, and an "
        "exhaustive verification harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_stats = sub.add_parser("stats", help="evaluate a statistic on one permutation")
    p_stats.add_argument("--stat", required=True, choices=sorted(vf.STATISTICS))
    p_stats.add_argument("--perm", required=True)
    p_stats.add_argument("--format", default="human", choices=["human", "json"])
    p_stats.set_defaults(func=cmd_stats)

    p_map = sub.add_parser("map", help="apply a map to one permutation")
    p_map.add_argument("--map", required=True, choices=sorted(MAPS), dest="map_name")
    p_map.add_argument("--perm", required=True)
    p_map.add_argument("--format", default="human", choices=["human", "json"])
    p_map.set_defaults(func=cmd_map)

    p_verify = sub.add_parser("verify", help="run checks over all of S_n")
    p_verify.add_argument("--n", required=True, type=int)
    p_verify.add_argument("--variant", type=int, default=1, choices=[1, 2])
    p_verify.add_argument(
        "--checks",
        default="all",
        help="comma-separated subset of: all, "
        + ", ".join(sorted(vf.ALL_CHECKS | vf.EXTRA_CHECKS)),
    )
    p_verify.add_argument("--jobs", type=int, default=1)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument(
        "--sample",
        type=int,
        default=None,
        help="sample this many completions per permutation instead of all",
    )
    p_verify.add_argument("--max-n", type=int, default=None, help="cap override")
    p_verify.add_argument("--format", default="human", choices=["human", "json"])
    p_verify.set_defaults(func=cmd_verify)

    p_dist = sub.add_parser("dist", help="distribution of a statistic over S_n")
    p_dist.add_argument("--stat", required=True, choices=sorted(vf.STATISTICS))
    p_dist.add_argument("--n", required=True, type=int)
    p_dist.add_argument(
        "--format", default="human", choices=["human", "json", "csv", "findstat"]
    )
    p_dist.add_argument("--max-n", type=int, default=None, help="cap override")
    p_dist.set_defaults(func=cmd_dist)

    p_rank = sub.add_parser("rank", help="lexicographic rank of a permutation")
    p_rank.add_argument("--perm", required=True)
    p_rank.add_argument("--format", default="human", choices=["human", "json"])
    p_rank.set_defaults(func=cmd_rank)

    p_unrank = sub.add_parser("unrank", help="permutation at a lexicographic rank")
    p_unrank.add_argument("--n", required=True, type=int)
    p_unrank.add_argument("--rank", required=True, type=int)
    p_unrank.add_argument("--format", default="human", choices=["human", "json"])
    p_unrank.set_defaults(func=cmd_unrank)

    return parser


def cmd_stats(ns: argparse.Namespace) -> int:
    p = parse_permutation(ns.perm)
    value = vf.STATISTICS[ns.stat](p)
    if ns.format == "json":
        _print(_to_json({"statistic": ns.stat, "perm": list(p.word), "value": value}))
    else:
        _print(str(value))
    return 0


def cmd_map(ns: argparse.Namespace) -> int:
    p = parse_permutation(ns.perm)
    result = MAPS[ns.map_name](p)
    if ns.format == "json":
        _print(
            _to_json(
                {"map": ns.map_name, "perm": list(p.word), "result": list(result.word)}
            )
        )
    else:
        _print(str(result))
    return 0


def cmd_verify(ns: argparse.Namespace) -> int:
    report = vf.verify_suite(
        ns.n,
        variant=ns.variant,
        checks=_split_checks(ns.checks),
        jobs=ns.jobs,
        cap=ns.max_n,
        seed=ns.seed,
        completions_sample=ns.sample,
    )
    if ns.format == "json":
        _print(_to_json(report.as_dict()))
    else:
        _print(
            f"verify n={report.n} variant={report.variant} "
            f"checks={','.join(report.checks)}"
        )
        _print(
            f"examined {report.examined} permutations in {report.elapsed:.3f}s "
            f"(jobs={report.jobs}, seed={report.seed})"
        )
        for key, value in sorted(report.counts.items()):
            _print(f"{key} {value}")
        for f in report.failures[:20]:
            where = ",".join(map(str, f.perm)) if f.perm else "-"
            _print(f"FAIL {f.check} perm={where} {f.detail}")
        if len(report.failures) > 20:
            _print(f"... and {len(report.failures) - 20} more failures")
        _print("PASS" if report.passed else f"FAIL ({len(report.failures)} failures)")
    return 0 if report.passed else 1


def cmd_dist(ns: argparse.Namespace) -> int:
    if ns.format == "findstat":
        vf._require_within_cap(ns.n, ns.max_n)
        fn = vf.STATISTICS[ns.stat]
        for r in range(factorial(ns.n)):
            _print(str(fn(vf.unrank(ns.n, r))))
        return 0
    poly = vf.distribution(ns.stat, ns.n, cap=ns.max_n)
    if ns.format == "json":
        _print(
            _to_json(
                {
                    "n": ns.n,
                    "statistic": ns.stat,
                    "coefficients": {str(e): c for e, c in sorted(poly.items())},
                }
            )
        )
    elif ns.format == "csv":
        _print("n,statistic,exponent,count")
        for e, c in sorted(poly.items()):
            _print(f"{ns.n},{ns.stat},{e},{c}")
    else:
        for e, c in sorted(poly.items()):
            _print(f"{e}\t{c}")
    return 0


def cmd_rank(ns: argparse.Namespace) -> int:
    p = parse_permutation(ns.perm)
    r = vf.rank(p)
    if ns.format == "json":
        _print(_to_json({"perm": list(p.word), "rank": r}))
    else:
        _print(str(r))
    return 0


def cmd_unrank(ns: argparse.Namespace) -> int:
    p = vf.unrank(ns.n, ns.rank)
    if ns.format == "json":
        _print(_to_json({"n": ns.n, "rank": ns.rank, "perm": list(p.word)}))
    else:
        _print(str(p))
    return 0


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code or 0)
    try:
        return ns.func(ns)
    except (PermlabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr, flush=True)
        return 2


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
