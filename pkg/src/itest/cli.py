"""Command-line entry point.

Subcommands: ``run`` (scan -> extract -> synthesize -> run -> report),
``list`` (show declarations without executing), ``strip`` and ``dup``
(source rewrites), and ``bench`` (timing table over duplication factors).
"""

from __future__ import annotations

import argparse
import sys
import tempfile
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import reporter, rewriter
from .errors import (
    BadParameterization,
    GroupIndexOutOfRange,
    GroupOnNonHeader,
    ItestError,
    MalformedChain,
    NoOracle,
    NoTarget,
    UnbalancedDelimiter,
)
from .extractor import ExtractedTest, collect_imports, extract_file, parse_chain, resolve_target
from .runner import RunConfig, Status, TestOutcome, run_suite
from .scanner import find_inline_tests, scan_path
from .synthesizer import GeneratedProgram, expand, render_program


def discover_files(paths: list[str]) -> list[Path]:
    """Files from the given paths: directories contribute their *.py files
    recursively, in sorted order; duplicates are dropped."""
    found: list[Path] = []
    seen: set[Path] = set()
    for raw in paths:
        path = Path(raw)
        candidates = sorted(path.rglob("*.py")) if path.is_dir() else [path]
        for candidate in candidates:
            key = candidate.resolve()
            if key not in seen:
                seen.add(key)
                found.append(candidate)
    return found


@dataclass
class FileSuite:
    """Per-file build result: a runnable program plus any per-test build
    failures reported as synthetic ERROR outcomes."""

    path: Path
    program: GeneratedProgram | None
    problems: list[TestOutcome]


def build_file_suite(path: Path, copy_all_imports: bool = False) -> FileSuite:
    problems: list[TestOutcome] = []
    try:
        unit = scan_path(path)
    except (UnbalancedDelimiter, UnicodeDecodeError, OSError) as exc:
        problems.append(
            TestOutcome(
                id=f"{path.stem}:scan",
                file=str(path),
                line=getattr(exc, "line", 0) or 0,
                status=Status.ERROR,
                message=str(exc),
            )
        )
        return FileSuite(path=path, program=None, problems=problems)

    instances = []
    for index in find_inline_tests(unit):
        stmt = unit.statements[index]
        try:
            decl = parse_chain(stmt, unit.path)
            target = resolve_target(unit, index)
            imports = collect_imports(unit, target, decl, copy_all=copy_all_imports)
            instances.extend(expand(ExtractedTest(decl=decl, target=target, imports=imports)))
        except (MalformedChain, NoOracle, BadParameterization, NoTarget,
                GroupIndexOutOfRange, GroupOnNonHeader) as exc:
            problems.append(
                TestOutcome(
                    id=f"{path.stem}_{stmt.start_line}:extract",
                    file=str(path),
                    line=stmt.start_line,
                    status=Status.ERROR,
                    message=str(exc),
                )
            )
    program = render_program(instances, str(path)) if instances else None
    return FileSuite(path=path, program=program, problems=problems)


def run_files(files: list[Path], cfg: RunConfig,
              copy_all_imports: bool = False) -> tuple[list[TestOutcome], float]:
    """Full pipeline over the given files; returns outcomes and wall ms."""
    start = time.perf_counter()
    suites = [build_file_suite(path, copy_all_imports) for path in files]
    programs = [suite.program for suite in suites if suite.program is not None]
    executed = run_suite(programs, cfg)

    outcomes: list[TestOutcome] = []
    cursor = 0
    for suite in suites:
        merged = list(suite.problems)
        if suite.program is not None:
            count = len(suite.program.instances)
            merged.extend(executed[cursor : cursor + count])
            cursor += count
        merged.sort(key=lambda outcome: outcome.line)
        outcomes.extend(merged)
    wall_ms = (time.perf_counter() - start) * 1000.0
    return outcomes, wall_ms


def _config_echo(cfg: RunConfig) -> dict:
    return {
        "jobs": cfg.jobs,
        "timeout_s": cfg.timeout_s,
        "tags": sorted(cfg.tag_filter) if cfg.tag_filter else None,
        "name": cfg.name_filter,
        "interpreter": cfg.interpreter,
    }


def _make_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        interpreter=args.interpreter,
        jobs=args.jobs,
        timeout_s=args.timeout,
        tag_filter=frozenset(args.tag) if args.tag else None,
        name_filter=args.name,
    )


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _make_config(args)
    files = discover_files(args.paths)
    outcomes, wall_ms = run_files(files, cfg, copy_all_imports=args.copy_all_imports)
    report = reporter.summarize(
        outcomes,
        suite_wall_ms=wall_ms,
        started_at=datetime.now(timezone.utc).isoformat(),
        config_echo=_config_echo(cfg),
    )
    reporter.emit(report, args.format, args.output)
    if args.format != "console" and args.output is not None:
        sys.stdout.write(reporter.render_console(report))
    return reporter.exit_code(report)


def cmd_list(args: argparse.Namespace) -> int:
    status = reporter.EXIT_OK
    for path in discover_files(args.paths):
        try:
            unit = scan_path(path)
            extracted = extract_file(unit)
        except ItestError as exc:
            sys.stderr.write(f"error: {exc}\n")
            status = reporter.EXIT_FAILURES
            continue
        for item in extracted:
            decl = item.decl
            flags = []
            if decl.disabled:
                flags.append("disabled")
            if decl.parameterized:
                rows = len(decl.givens[0].elements or ()) if decl.givens else 0
                flags.append(f"parameterized x{rows}")
            if decl.repeated > 1:
                flags.append(f"repeated x{decl.repeated}")
            if decl.tags:
                flags.append("tags: " + ",".join(sorted(decl.tags)))
            suffix = f"  [{'; '.join(flags)}]" if flags else ""
            sys.stdout.write(
                f"{decl.file}:{decl.line}  {decl.name}  "
                f"target@{item.target.start_line} ({item.target.kind.value})  "
                f"givens={len(decl.givens)} oracles={len(decl.oracles)}{suffix}\n"
            )
    return status


def _rewrite_command(args: argparse.Namespace, transform) -> int:
    out_dir = Path(args.out_dir) if args.out_dir else None
    for path in discover_files(args.paths):
        unit = scan_path(path)
        new_text = transform(unit)
        written = rewriter.write_rewrite(path, new_text, args.in_place, out_dir)
        sys.stdout.write(f"{path} -> {written}\n")
    return reporter.EXIT_OK


def cmd_strip(args: argparse.Namespace) -> int:
    return _rewrite_command(args, rewriter.strip)


def cmd_dup(args: argparse.Namespace) -> int:
    return _rewrite_command(args, lambda unit: rewriter.duplicate(unit, args.k))


def bench_corpus(files: list[Path], ks: list[int], runs: int, cfg: RunConfig,
                 copy_all_imports: bool = False) -> list[tuple[int, int, float, float]]:
    """Timing rows (k, tests, mean total seconds, mean per-test ms).

    Each k gets one warm-up run (discarded) plus ``runs`` measured runs of
    the full pipeline; totals are averaged over the measured runs.
    """
    rows: list[tuple[int, int, float, float]] = []
    for k in ks:
        with tempfile.TemporaryDirectory(prefix="itest-bench-") as tmp:
            bench_dir = Path(tmp)
            for index, path in enumerate(files):
                unit = scan_path(path)
                text = rewriter.duplicate(unit, k) if k > 1 else unit.text
                (bench_dir / f"{index:03d}_{path.name}").write_bytes(text.encode("utf-8"))
            bench_files = sorted(bench_dir.glob("*.py"))
            totals: list[float] = []
            count = 0
            for attempt in range(runs + 1):
                start = time.perf_counter()
                outcomes, _ = run_files(bench_files, cfg, copy_all_imports=copy_all_imports)
                elapsed = time.perf_counter() - start
                count = len(outcomes)
                if attempt > 0:  # first run is warm-up
                    totals.append(elapsed)
            mean_total = sum(totals) / len(totals)
            per_test_ms = (mean_total / count * 1000.0) if count else 0.0
            rows.append((k, count, mean_total, per_test_ms))
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _make_config(args)
    files = discover_files(args.paths)
    ks = [int(part) for part in args.ks.split(",") if part.strip()]
    rows = bench_corpus(files, ks, args.runs, cfg, copy_all_imports=args.copy_all_imports)
    sys.stdout.write(f"{'k':>6}  {'tests':>7}  {'total[s]':>9}  {'per-test[ms]':>12}\n")
    for k, count, total, per_test in rows:
        sys.stdout.write(f"{k:>6}  {count:>7}  {total:>9.3f}  {per_test:>12.3f}\n")
    return reporter.EXIT_OK


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--jobs", "-j", type=int, default=RunConfig().jobs,
                        help="max concurrent interpreter processes")
    parser.add_argument("--timeout", type=float, default=60.0,
                        help="per-program wall-clock budget in seconds")
    parser.add_argument("--tag", action="append", default=[],
                        help="run only declarations carrying this tag (repeatable)")
    parser.add_argument("--name", default=None,
                        help="run only declarations whose name matches this glob")
    parser.add_argument("--interpreter", default=None,
                        help="subject interpreter (default: $ITEST_INTERPRETER, then this Python)")
    parser.add_argument("--copy-all-imports", action="store_true",
                        help="copy every import statement into generated programs")


def _add_rewrite_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--in-place", action="store_true",
                       help="rewrite files in place, keeping a .orig backup")
    group.add_argument("--out-dir", default=None,
                       help="write rewritten files into this directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itest",
        description="Run statement-level inline tests written as Here(...) chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="extract, execute, and report inline tests")
    run_parser.add_argument("paths", nargs="+")
    _add_run_options(run_parser)
    run_parser.add_argument("--format", choices=reporter.FORMATS, default="console")
    run_parser.add_argument("--output", default=None, help="report destination path")
    run_parser.set_defaults(func=cmd_run)

    list_parser = sub.add_parser("list", help="show inline-test declarations without running")
    list_parser.add_argument("paths", nargs="+")
    list_parser.set_defaults(func=cmd_list)

    strip_parser = sub.add_parser("strip", help="remove inline tests from source files")
    strip_parser.add_argument("paths", nargs="+")
    _add_rewrite_options(strip_parser)
    strip_parser.set_defaults(func=cmd_strip)

    dup_parser = sub.add_parser("dup", help="duplicate each inline test k times")
    dup_parser.add_argument("paths", nargs="+")
    dup_parser.add_argument("--k", type=int, required=True)
    _add_rewrite_options(dup_parser)
    dup_parser.set_defaults(func=cmd_dup)

    bench_parser = sub.add_parser("bench", help="timing table across duplication factors")
    bench_parser.add_argument("paths", nargs="+")
    _add_run_options(bench_parser)
    bench_parser.add_argument("--ks", default="1,10,100,1000",
                              help="comma-separated duplication factors")
    bench_parser.add_argument("--runs", type=int, default=3,
                              help="measured runs per factor (plus one warm-up)")
    bench_parser.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else reporter.EXIT_USAGE
    try:
        return args.func(args)
    except ItestError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return reporter.EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return reporter.EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
