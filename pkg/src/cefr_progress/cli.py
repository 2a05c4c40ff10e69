"""Command-line front end.

Subcommands:
  analyze   mine a repository and write JSON/CSV/HTML reports
  classify  print one file's construct occurrences and level vector as JSON

Exit codes: 0 success, 2 repository error, 3 catalog error, 4 I/O error,
5 parse failure (classify only).  Progress goes to stderr; machine output
goes to files or stdout only.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

from .analyzer import analyze_source
from .catalog import Catalog, CatalogError, load_catalog, LEVEL_LABELS
from .history import RepoError, RepoSpec, extract_commits, prepare_repo
from .report import write_report_bundle
from .scoring import DEFAULT_BOT_PATTERNS, Granularity, build_report, score_commit

log = logging.getLogger("cefr_progress")

EXIT_OK = 0
EXIT_REPO = 2
EXIT_CATALOG = 3
EXIT_IO = 4
EXIT_PARSE = 5


@dataclass
class RunConfig:
    source: str
    out_dir: Path = Path("cefr-report")
    period: Granularity = Granularity.YEARLY
    catalog_path: Path | None = None
    top_n: int = 10
    show_names: bool = False
    bot_patterns: tuple[str, ...] = DEFAULT_BOT_PATTERNS
    identity: str = "author"
    jobs: int = 1
    workdir: Path | None = None

    def __post_init__(self) -> None:
        if self.top_n < 1:
            raise ValueError("top_n must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


def _score_all(records, catalog: Catalog, jobs: int):
    scorer = partial(score_commit, catalog=catalog)
    if jobs <= 1 or len(records) < 2:
        return [scorer(record) for record in records]
    # executor.map preserves input order, so aggregation stays deterministic
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(scorer, records, chunksize=max(1, len(records) // (jobs * 4))))


def cmd_analyze(config: RunConfig) -> int:
    try:
        catalog = load_catalog(config.catalog_path)
    except CatalogError as exc:
        log.error("catalog error: %s", exc)
        return EXIT_CATALOG

    try:
        repo = prepare_repo(RepoSpec(source=config.source, workdir=config.workdir))
        with repo:
            log.info("extracting commit history of %s", config.source)
            records = extract_commits(repo, identity=config.identity)
    except RepoError as exc:
        log.error("repository error: %s", exc)
        return EXIT_REPO

    log.info("scoring %d commits with %d job(s)", len(records), config.jobs)
    scores = _score_all(records, catalog, config.jobs)
    report = build_report(
        scores,
        repo=config.source,
        period=config.period,
        bot_patterns=config.bot_patterns,
    )

    try:
        bundle = write_report_bundle(
            report, config.out_dir, top_n=config.top_n, show_names=config.show_names
        )
    except OSError as exc:
        log.error("cannot write reports: %s", exc)
        return EXIT_IO

    top = report.top_contributor.contributor.anon_id if report.top_contributor else "-"
    print(
        f"commits analyzed: {report.commit_count}; files skipped: {report.files_skipped}; "
        f"top contributor: {top}"
    )
    log.info("wrote %s, %s, %s", bundle.json_path, bundle.csv_path, bundle.html_path)
    return EXIT_OK


def cmd_classify(path: Path, catalog_path: Path | None) -> int:
    try:
        catalog = load_catalog(catalog_path)
    except CatalogError as exc:
        log.error("catalog error: %s", exc)
        return EXIT_CATALOG
    try:
        source = Path(path).read_text(encoding="utf-8", errors="replace")
    except OSError as exc:
        log.error("cannot read %s: %s", path, exc)
        return EXIT_IO

    result = analyze_source(source, catalog)
    if not result.parse_ok:
        log.error("%s does not parse under the running Python grammar", path)
        return EXIT_PARSE

    payload = {
        "file": str(path),
        "levels": dict(zip(LEVEL_LABELS, result.vector.as_list())),
        "total": result.vector.total(),
        "occurrences": [{"kind": kind, "line": line} for kind, line in result.occurrences],
        "unclassified_count": result.unclassified_count,
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cefr-progress",
        description="Track six-level code proficiency progression across a git history.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="mine a repository and write reports")
    analyze.add_argument("repo", help="local path or clone URL of a git repository")
    analyze.add_argument("--out", default="cefr-report", help="output directory (default: %(default)s)")
    analyze.add_argument(
        "--period", choices=[g.value for g in Granularity], default="yearly",
        help="time bucket granularity (default: %(default)s)",
    )
    analyze.add_argument("--catalog", default=None, help="catalog file overriding default rules")
    analyze.add_argument("--top", type=int, default=10, help="contributor radars in the HTML (default: %(default)s)")
    analyze.add_argument("--show-names", action="store_true", help="show real names instead of anonymized IDs")
    analyze.add_argument(
        "--bot-pattern", action="append", default=None, metavar="REGEX",
        help="identity-name regex treated as a bot; repeatable; replaces the default (\\[bot\\]$)",
    )
    analyze.add_argument(
        "--identity", choices=["author", "committer"], default="author",
        help="which git identity is credited (default: %(default)s)",
    )
    analyze.add_argument("--jobs", type=int, default=1, help="parallel scoring processes (default: %(default)s)")

    classify = sub.add_parser("classify", help="classify a single Python file")
    classify.add_argument("file", help="Python source file")
    classify.add_argument("--catalog", default=None, help="catalog file overriding default rules")

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)

    if args.command == "classify":
        catalog_path = Path(args.catalog) if args.catalog else None
        return cmd_classify(Path(args.file), catalog_path)

    try:
        config = RunConfig(
            source=args.repo,
            out_dir=Path(args.out),
            period=Granularity(args.period),
            catalog_path=Path(args.catalog) if args.catalog else None,
            top_n=args.top,
            show_names=args.show_names,
            bot_patterns=tuple(args.bot_pattern) if args.bot_pattern else DEFAULT_BOT_PATTERNS,
            identity=args.identity,
            jobs=args.jobs,
        )
    except ValueError as exc:
        build_parser().error(str(exc))
    return cmd_analyze(config)


if __name__ == "__main__":
    sys.exit(main())
