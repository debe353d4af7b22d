"""Execution of generated test programs.

One interpreter process per program, a wall-clock budget per process, and
bounded parallelism across programs. Outcomes come only from the result
records a program prints between its sentinel lines; exit status alone never
decides an outcome. Instances without a record become ERROR (crash) or
TIMEOUT (budget expiry).
"""

from __future__ import annotations

import fnmatch
import json
import os
import shutil
import subprocess
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import InterpreterNotFound, ItestError, ProtocolViolation
from .synthesizer import SENTINEL_BEGIN, SENTINEL_END, GeneratedProgram, TestInstance, render_program

INTERPRETER_ENV_VAR = "ITEST_INTERPRETER"

_STDERR_TAIL = 800


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"
    SKIPPED = "skipped"
    TIMEOUT = "timeout"


_RECORD_STATUSES = {s.value for s in (Status.PASS, Status.FAIL, Status.ERROR, Status.SKIPPED)}


@dataclass(frozen=True)
class TestOutcome:
    id: str
    file: str
    line: int
    status: Status
    duration_ms: float = 0.0
    expected: str | None = None
    observed: str | None = None
    message: str | None = None


@dataclass(frozen=True)
class RunConfig:
    """Execution knobs. ``interpreter=None`` falls back to the
    ITEST_INTERPRETER environment variable, then this Python."""

    interpreter: str | None = None
    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)
    timeout_s: float = 60.0
    tag_filter: frozenset[str] | None = None
    name_filter: str | None = None
    env: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be > 0")


def resolve_interpreter(cfg: RunConfig) -> str:
    """Interpreter command: explicit setting, then env var, then this Python."""
    command = cfg.interpreter or os.environ.get(INTERPRETER_ENV_VAR) or sys.executable or "python3"
    if shutil.which(command) is None and not Path(command).exists():
        raise InterpreterNotFound(command)
    return command


def _parse_records(stdout: str) -> dict[str, dict]:
    lines = stdout.splitlines()
    try:
        begin = lines.index(SENTINEL_BEGIN)
        end = lines.index(SENTINEL_END, begin + 1)
    except ValueError:
        return {}
    records: dict[str, dict] = {}
    for line in lines[begin + 1 : end]:
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolViolation(line) from exc
        if not isinstance(record, dict) or not isinstance(record.get("id"), str):
            raise ProtocolViolation(line)
        if record.get("status") not in _RECORD_STATUSES:
            raise ProtocolViolation(line)
        records[record["id"]] = record
    return records


def _outcome_from_record(instance: TestInstance, record: dict) -> TestOutcome:
    return TestOutcome(
        id=instance.id,
        file=str(record.get("file", instance.file)),
        line=int(record.get("line", instance.line)),
        status=Status(record["status"]),
        duration_ms=float(record.get("duration_ms", 0.0)),
        expected=record.get("expected"),
        observed=record.get("observed"),
        message=record.get("message"),
    )


def run_program(program: GeneratedProgram, cfg: RunConfig) -> list[TestOutcome]:
    """Run one generated program and collect an outcome per instance.

    Raises:
        InterpreterNotFound: the interpreter cannot be resolved.
        ProtocolViolation: a line between the sentinels is not a record.
    """
    interpreter = resolve_interpreter(cfg)
    env = dict(os.environ)
    env.update(cfg.env)
    timed_out = False
    stdout = ""
    stderr = ""
    returncode: int | None = None
    with tempfile.TemporaryDirectory(prefix="itest-") as tmp:
        program_path = Path(tmp) / (Path(program.origin).stem + "_cases.py")
        program_path.write_text(program.source_text, encoding="utf-8")
        try:
            proc = subprocess.run(
                [interpreter, str(program_path)],
                capture_output=True,
                text=True,
                timeout=cfg.timeout_s,
                env=env,
            )
            stdout, stderr, returncode = proc.stdout, proc.stderr, proc.returncode
        except subprocess.TimeoutExpired as exc:
            timed_out = True
            stdout = exc.stdout if isinstance(exc.stdout, str) else ""
            stderr = exc.stderr if isinstance(exc.stderr, str) else ""

    records = _parse_records(stdout)
    outcomes: list[TestOutcome] = []
    for instance in program.instances:
        record = records.get(instance.id)
        if record is not None:
            outcomes.append(_outcome_from_record(instance, record))
        elif timed_out:
            outcomes.append(
                TestOutcome(
                    id=instance.id,
                    file=instance.file,
                    line=instance.line,
                    status=Status.TIMEOUT,
                    duration_ms=cfg.timeout_s * 1000.0,
                    message=f"no result within {cfg.timeout_s:g}s budget",
                )
            )
        else:
            tail = stderr.strip()[-_STDERR_TAIL:]
            outcomes.append(
                TestOutcome(
                    id=instance.id,
                    file=instance.file,
                    line=instance.line,
                    status=Status.ERROR,
                    message=f"no result record (exit {returncode}): {tail}",
                )
            )
    return outcomes


def instance_selected(instance: TestInstance, cfg: RunConfig) -> bool:
    """Apply tag and name filters; both must pass when both are set."""
    if cfg.tag_filter is not None and not (instance.tags & cfg.tag_filter):
        return False
    if cfg.name_filter is not None:
        if not (fnmatch.fnmatchcase(instance.name, cfg.name_filter)
                or fnmatch.fnmatchcase(instance.id, cfg.name_filter)):
            return False
    return True


def _filtered_outcome(instance: TestInstance) -> TestOutcome:
    return TestOutcome(
        id=instance.id,
        file=instance.file,
        line=instance.line,
        status=Status.SKIPPED,
        message="filtered",
    )


def _error_outcomes(instances: tuple[TestInstance, ...], message: str) -> dict[str, TestOutcome]:
    return {
        instance.id: TestOutcome(
            id=instance.id,
            file=instance.file,
            line=instance.line,
            status=Status.ERROR,
            message=message,
        )
        for instance in instances
    }


def _run_one(program: GeneratedProgram, cfg: RunConfig) -> dict[str, TestOutcome]:
    try:
        return {outcome.id: outcome for outcome in run_program(program, cfg)}
    except (ItestError, OSError) as exc:
        return _error_outcomes(program.instances, str(exc))


def run_suite(programs: list[GeneratedProgram], cfg: RunConfig) -> list[TestOutcome]:
    """Run many programs with at most ``cfg.jobs`` concurrent processes.

    Filtered-out instances are reported SKIPPED without executing; a
    program's failure never aborts the rest of the suite. Output order is
    deterministic: program input order, then instance order (declaration
    line, then row, then repetition).
    """
    to_run: list[GeneratedProgram] = []
    per_program_selected: list[tuple[GeneratedProgram, GeneratedProgram | None]] = []
    for program in programs:
        selected = [i for i in program.instances if instance_selected(i, cfg)]
        if not selected:
            per_program_selected.append((program, None))
            continue
        if len(selected) == len(program.instances):
            runnable = program
        else:
            runnable = render_program(selected, program.origin)
        per_program_selected.append((program, runnable))
        to_run.append(runnable)

    results: dict[int, dict[str, TestOutcome]] = {}
    if cfg.jobs == 1 or len(to_run) <= 1:
        for program in to_run:
            results[id(program)] = _run_one(program, cfg)
    else:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [(program, pool.submit(_run_one, program, cfg)) for program in to_run]
            for program, future in futures:
                results[id(program)] = future.result()

    outcomes: list[TestOutcome] = []
    for program, runnable in per_program_selected:
        ran = results.get(id(runnable), {}) if runnable is not None else {}
        for instance in program.instances:
            outcome = ran.get(instance.id)
            outcomes.append(outcome if outcome is not None else _filtered_outcome(instance))
    return outcomes
