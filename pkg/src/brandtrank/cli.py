"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import re
import sys
from pathlib import Path

from . import affine, brandt, ranks, verify
from .semigroup import DomainError, FiniteSemigroup, SemigroupError, read_cache, write_cache

CACHE_ENV = "BRANDTRANK_CACHE_DIR"
RANK_IDS = ("r1", "r2", "r3", "r4", "r5")


class UsageError(Exception):
    pass


def parse_duration(text: str) -> float:
    m = re.fullmatch(r"\s*(\d+(?:\.\d+)?)\s*(ms|s|m|h)?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"bad duration {text!r}")
    value = float(m.group(1))
    scale = {"ms": 1e-3, "s": 1, None: 1, "m": 60, "h": 3600}[m.group(2)]
    if value <= 0:
        raise argparse.ArgumentTypeError("duration must be positive")
    return value * scale


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_universe(n: int, universe: str) -> FiniteSemigroup:
    if universe in ("aplus", "aff"):
        return affine.build_cayley(n, universe)
    parts = universe.split(":")
    if parts[0] == "brandt":
        if parts[1:] == ["trivial"]:
            return brandt.build_brandt(brandt.trivial_group(), n)
        if len(parts) == 3 and parts[1] == "sym" and parts[2].isdigit():
            return brandt.build_brandt(brandt.symmetric_group(int(parts[2])), n)
    raise UsageError(f"unknown universe {universe!r}; use aplus, aff, brandt:trivial or brandt:sym:K")


def default_cache_path(n: int, universe: str) -> Path:
    root = Path(os.environ.get(CACHE_ENV, Path.home() / ".cache" / "brandtrank"))
    return root / f"{universe.replace(':', '-')}-n{n}.sgp"


def load_universe(args) -> FiniteSemigroup:
    """Fresh table, cross-checked against the cache file when one exists."""
    S = build_universe(args.n, args.universe)
    path = Path(args.cache) if args.cache else default_cache_path(args.n, args.universe)
    if path.exists():
        cached = read_cache(path)
        if cached.labels != S.labels or not (cached.table == S.table).all():
            raise UsageError(f"cache {path} does not match the {args.universe} table for n={args.n}")
    return S


def _budget(args) -> ranks.SearchBudget:
    return ranks.SearchBudget(args.budget, args.max_nodes, args.workers)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, list):
        return " ".join(map(str, v))
    return str(v)


def _emit_rows(rows: list[dict], fmt: str, columns: list[str], out) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=2, ensure_ascii=False)
        out.write("\n")
        return
    if fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _cell(v) for k, v in row.items()})
        return
    cells = [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


REPORT_COLUMNS = ["rank", "value", "status", "method", "elapsed_ms", "witness"]


def cmd_build(args, out) -> int:
    S = build_universe(args.n, args.universe)
    path = Path(args.cache) if args.cache else default_cache_path(args.n, args.universe)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = write_cache(S, path)
    out.write(f"wrote {path}\nsize {S.size}\nsha256 {hashlib.sha256(data).hexdigest()}\n")
    return 0


def _seeds(args, S) -> dict:
    if args.universe != "aplus" or args.n < 2:
        return {}
    return {
        "r2": [S.index(f) for f in verify.minimum_generating_set(args.n)],
        "r3": [S.index(f) for f in verify.independent_generating_set(args.n)],
        "r4": [S.index(f) for f in verify.large_independent_set(args.n)],
    }


def compute_rank(rank: str, S, args, budget) -> ranks.RankReport:
    seeds = _seeds(args, S)
    if rank == "r1":
        return ranks.small_rank(S, budget)
    if rank == "r2":
        if args.universe == "aplus" and args.n >= 3:
            return ranks.certified_lower_rank_aplus(args.n, budget)
        return ranks.lower_rank(S, budget, seeds.get("r2"))
    if rank == "r3":
        return ranks.independent_set_search(S, True, budget, seeds.get("r3"))
    if rank == "r4":
        return ranks.independent_set_search(S, False, budget, seeds.get("r4"))
    return ranks.large_rank(S, budget)


def cmd_ranks(args, out) -> int:
    wanted = [r.strip() for r in args.ranks.split(",") if r.strip()]
    bad = [r for r in wanted if r not in RANK_IDS]
    if bad or not wanted:
        raise UsageError(f"unknown rank id(s) {bad}; choose from {', '.join(RANK_IDS)}")
    S = load_universe(args)
    budget = _budget(args)
    rows = [compute_rank(r, S, args, budget).to_dict() for r in wanted]
    _emit_rows(rows, args.format, REPORT_COLUMNS, out)
    return 0


def cmd_search(args, out) -> int:
    S = load_universe(args)
    budget = _budget(args)
    if args.kind == "prime":
        rep = ranks.smallest_prime_subset(S, budget)
    else:
        seeds = _seeds(args, S)
        key = "r3" if args.generating else "r4"
        rep = ranks.independent_set_search(S, args.generating, budget, seeds.get(key))
    _emit_rows([rep.to_dict()], args.format, REPORT_COLUMNS, out)
    return 0


def cmd_verify(args, out) -> int:
    checks = verify.verify_paper(args.n, _budget(args), perturb_table=args.perturb_table)
    rows = [c.to_dict() for c in checks]
    _emit_rows(rows, args.format, ["id", "n", "outcome", "details"], out)
    return 1 if any(c.outcome == "fail" for c in checks) else 0


def cmd_element(args, out) -> int:
    result = affine.parse_expression(args.expr, args.n)
    out.write(affine.format_element(result) + "\n")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brandtrank", description="Ranks of A+(B_n), Aff(B_n) and Brandt semigroups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def universe_opts(p):
        p.add_argument("--n", type=_positive_int, required=True)
        p.add_argument("--universe", default="aplus", help="aplus | aff | brandt:trivial | brandt:sym:K")
        p.add_argument("--cache", help=f"cache file (default under ${CACHE_ENV})")

    def search_opts(p):
        p.add_argument("--budget", type=parse_duration, default=60.0, help="wall-clock limit, e.g. 60s or 2m")
        p.add_argument("--max-nodes", type=_positive_int, default=None)
        p.add_argument("--workers", type=_positive_int, default=1)
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")

    p = sub.add_parser("build", help="build a composition table and write the SGP1 cache")
    universe_opts(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("ranks", help="compute ranks")
    universe_opts(p)
    search_opts(p)
    p.add_argument("--ranks", default="r1,r2,r3,r4,r5")
    p.set_defaults(func=cmd_ranks)

    p = sub.add_parser("search", help="run one search directly")
    p.add_argument("kind", choices=("prime", "independent"))
    universe_opts(p)
    search_opts(p)
    p.add_argument("--generating", action="store_true", help="independent generating sets only")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="run the checklist for A+(B_n)")
    p.add_argument("--n", type=_positive_int, required=True)
    search_opts(p)
    p.add_argument("--perturb-table", action="store_true", help="corrupt one table entry first")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("element", help="compose elements, e.g. 'const:1,1 . ns:1,2;[2,1]'")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("expr")
    p.set_defaults(func=cmd_element)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args, out)
    except ranks.CertificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, affine.ParseError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SemigroupError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
