"""Standalone test-program generation.

Expands each extracted declaration into concrete test instances
(parameterized rows x repeat count) and renders one runnable program per
source file. The program carries only the copied imports plus the standard
library, executes every instance in its own function scope, and writes one
JSON result record per instance between sentinel lines on stdout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import GroupIndexOutOfRange, GroupOnNonHeader
from .extractor import ExtractedTest, Oracle, OracleKind
from .scanner import StatementKind, mask_source

SENTINEL_BEGIN = "##ITEST-BEGIN##"
SENTINEL_END = "##ITEST-END##"
RESERVED_PREFIX = "_itest_"
REPR_LIMIT = 4096

_GROUP_CALL_RE = re.compile(r"\bGroup\s*\(\s*(\d+)\s*\)")


@dataclass(frozen=True)
class TestInstance:
    """One concrete executable check after expansion."""

    id: str
    name: str
    file: str
    line: int
    tags: frozenset[str]
    skipped: bool
    bindings: tuple[tuple[str, str], ...]
    target_kind: StatementKind
    target_indent: str
    target_text: str
    group_bindings: tuple[tuple[int, str], ...]
    oracles: tuple[Oracle, ...]
    imports: tuple[str, ...]


@dataclass(frozen=True)
class GeneratedProgram:
    """A complete runnable program holding all instances of one source file."""

    source_text: str
    instances: tuple[TestInstance, ...]
    origin: str

    @property
    def instance_ids(self) -> tuple[str, ...]:
        return tuple(instance.id for instance in self.instances)


def substitute_groups(text: str, mapping: dict[int, str]) -> str:
    """Replace ``Group(i)`` calls in expression text with reserved names.

    Matches are located on a string-masked copy so occurrences inside string
    literals are left alone.
    """
    masked, _ = mask_source(text)
    out: list[str] = []
    last = 0
    for match in _GROUP_CALL_RE.finditer(masked):
        index = int(match.group(1))
        if index not in mapping:
            continue
        out.append(text[last:match.start()])
        out.append(mapping[index])
        last = match.end()
    out.append(text[last:])
    return "".join(out)


def expand(extracted: ExtractedTest) -> list[TestInstance]:
    """Expand a declaration into instances.

    Row i of a parameterized declaration takes element i of every given
    list; a repeat count of N multiplies every row N times. Disabled
    declarations expand fully with every instance marked skipped.

    Raises:
        GroupOnNonHeader: an oracle references Group(i) but the target is
            not an if/while header.
        GroupIndexOutOfRange: Group(i) exceeds the header's operand count.
    """
    decl = extracted.decl
    target = extracted.target

    group_bindings: tuple[tuple[int, str], ...] = ()
    group_names: dict[int, str] = {}
    if decl.group_refs:
        if target.kind not in (StatementKind.IF_HEADER, StatementKind.WHILE_HEADER):
            raise GroupOnNonHeader(decl.file, decl.line)
        available = len(target.condition_operands)
        for index in sorted(decl.group_refs):
            if index >= available:
                raise GroupIndexOutOfRange(index, available, decl.file, decl.line)
        group_bindings = tuple(
            (index, target.condition_operands[index]) for index in sorted(decl.group_refs)
        )
        group_names = {index: f"{RESERVED_PREFIX}group_{index}" for index in decl.group_refs}

    oracles = tuple(
        Oracle(
            kind=oracle.kind,
            lhs=substitute_groups(oracle.lhs, group_names),
            rhs=substitute_groups(oracle.rhs, group_names) if oracle.rhs is not None else None,
        )
        for oracle in decl.oracles
    )

    rows = range(len(decl.givens[0].elements)) if decl.parameterized else [None]  # type: ignore[arg-type]
    instances: list[TestInstance] = []
    for row in rows:
        if row is None:
            bindings = tuple((g.name, g.text) for g in decl.givens)
        else:
            bindings = tuple((g.name, g.elements[row]) for g in decl.givens)  # type: ignore[index]
        for rep in range(decl.repeated):
            instance_id = decl.name
            if row is not None:
                instance_id += f"#{row}"
            if decl.repeated > 1:
                instance_id += f"@{rep}"
            instances.append(
                TestInstance(
                    id=instance_id,
                    name=decl.name,
                    file=decl.file,
                    line=decl.line,
                    tags=decl.tags,
                    skipped=decl.disabled,
                    bindings=bindings,
                    target_kind=target.kind,
                    target_indent=target.indent,
                    target_text=target.verbatim,
                    group_bindings=group_bindings,
                    oracles=oracles,
                    imports=extracted.imports,
                )
            )
    return instances


_PROGRAM_PRELUDE = f'''\
import json as _itest_json
import sys as _itest_sys
import time as _itest_time

_itest_records = []


def _itest_repr(value):
    try:
        text = repr(value)
    except BaseException as exc:
        text = "<unreprable: " + str(exc) + ">"
    if len(text) > {REPR_LIMIT}:
        text = text[:{REPR_LIMIT}] + "...[truncated]"
    return text


def _itest_run(case_id, case_file, case_line, case_fn, case_skipped):
    record = {{"id": case_id, "file": case_file, "line": case_line}}
    if case_skipped:
        record["status"] = "skipped"
        record["duration_ms"] = 0.0
        record["message"] = "disabled"
        _itest_records.append(record)
        return
    _itest_start = _itest_time.perf_counter()
    try:
        failure = case_fn()
    except BaseException as exc:
        record["duration_ms"] = (_itest_time.perf_counter() - _itest_start) * 1000.0
        record["status"] = "error"
        record["message"] = type(exc).__name__ + ": " + str(exc)
        _itest_records.append(record)
        return
    record["duration_ms"] = (_itest_time.perf_counter() - _itest_start) * 1000.0
    if failure is None:
        record["status"] = "pass"
    else:
        record["status"] = "fail"
        record["expected"], record["observed"], kind = failure
        record["message"] = kind + " failed: expected " + record["expected"] + \\
            ", observed " + record["observed"]
    _itest_records.append(record)
'''

_PROGRAM_EPILOGUE = f'''\
def _itest_main():
{{calls}}
    _itest_sys.stdout.write("{SENTINEL_BEGIN}\\n")
    for _itest_record in _itest_records:
        _itest_sys.stdout.write(_itest_json.dumps(_itest_record, sort_keys=True) + "\\n")
    _itest_sys.stdout.write("{SENTINEL_END}\\n")
    _itest_sys.stdout.flush()


if __name__ == "__main__":
    _itest_main()
'''


def _ensure_newline(text: str) -> str:
    return text if text.endswith("\n") else text + "\n"


def _render_case(index: int, instance: TestInstance) -> str:
    """One function per instance; returns None on pass, a failure tuple else."""
    indent = instance.target_indent if instance.target_indent else "    "
    lines: list[str] = [f"def {RESERVED_PREFIX}case_{index}():"]
    for name, value in instance.bindings:
        lines.append(f"{indent}{name} = ({value})")
    if instance.target_kind in (StatementKind.IF_HEADER, StatementKind.WHILE_HEADER):
        for group_index, operand in instance.group_bindings:
            lines.append(f"{indent}{RESERVED_PREFIX}group_{group_index} = ({operand})")
    else:
        lines.append(indent + _ensure_newline(instance.target_text).rstrip("\n"))
    observed = f"{RESERVED_PREFIX}observed"
    expected = f"{RESERVED_PREFIX}expected"
    for oracle in instance.oracles:
        lines.append(f"{indent}{observed} = ({oracle.lhs})")
        if oracle.kind is OracleKind.EQ:
            lines.append(f"{indent}{expected} = ({oracle.rhs})")
            lines.append(f"{indent}if not ({observed} == {expected}):")
            lines.append(
                f"{indent}    return (_itest_repr({expected}), "
                f"_itest_repr({observed}), {oracle.kind.value!r})"
            )
        elif oracle.kind is OracleKind.TRUE:
            lines.append(f"{indent}if not {observed}:")
            lines.append(
                f"{indent}    return ('True', _itest_repr({observed}), {oracle.kind.value!r})"
            )
        else:
            lines.append(f"{indent}if {observed}:")
            lines.append(
                f"{indent}    return ('False', _itest_repr({observed}), {oracle.kind.value!r})"
            )
    lines.append(f"{indent}return None")
    return "\n".join(lines) + "\n"


def render_program(instances: list[TestInstance] | tuple[TestInstance, ...],
                   origin: str) -> GeneratedProgram:
    """Render a standalone program running the given instances.

    The emitted target statement text is byte-identical to the source
    statement (header targets bind their referenced condition operands to
    reserved names instead). User-visible output happens before the sentinel
    block: records are buffered and flushed at the very end so stray prints
    from subject code cannot corrupt the result stream.
    """
    if not instances:
        raise ValueError("render_program needs at least one instance")
    imports: list[str] = []
    seen: set[str] = set()
    for instance in instances:
        for import_text in instance.imports:
            if import_text not in seen:
                seen.add(import_text)
                imports.append(import_text)

    parts: list[str] = [_PROGRAM_PRELUDE, "\n"]
    for import_text in imports:
        parts.append(_ensure_newline(import_text))
    if imports:
        parts.append("\n")
    calls: list[str] = []
    for index, instance in enumerate(instances):
        parts.append("\n")
        parts.append(_render_case(index, instance))
        calls.append(
            f"    _itest_run({instance.id!r}, {instance.file!r}, {instance.line!r}, "
            f"{RESERVED_PREFIX}case_{index}, {instance.skipped!r})"
        )
    parts.append("\n\n")
    parts.append(_PROGRAM_EPILOGUE.replace("{calls}", "\n".join(calls)))
    return GeneratedProgram(
        source_text="".join(parts),
        instances=tuple(instances),
        origin=origin,
    )
