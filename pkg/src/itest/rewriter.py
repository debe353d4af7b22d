"""Source-to-source rewrites: strip inline tests, or duplicate them.

Strip removes every inline-test statement's physical lines and nothing else;
duplicate replaces each inline test with k renamed copies at the same indent
(the scaling harness). Both keep all other bytes, including trivia and
newline style, untouched.
"""

from __future__ import annotations

import ast
import shutil
from pathlib import Path

from .scanner import SourceUnit, StatementKind


def strip(unit: SourceUnit) -> str:
    """The file text with every inline-test statement removed."""
    parts: list[str] = []
    for stmt in unit.statements:
        parts.append(stmt.trivia)
        if stmt.kind is not StatementKind.INLINE_TEST:
            parts.append(stmt.indent)
            parts.append(stmt.verbatim)
    parts.append(unit.trailing_trivia)
    return "".join(parts)


def duplicate(unit: SourceUnit, k: int) -> str:
    """The file text with every inline test replaced by ``k`` copies.

    Copy ``j`` gets a ``_dup<j>`` name suffix so report ids stay unique; an
    unnamed chain gets an explicit name derived from its original file stem
    and line first.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    stem = Path(unit.path).stem
    parts: list[str] = []
    for stmt in unit.statements:
        parts.append(stmt.trivia)
        if stmt.kind is not StatementKind.INLINE_TEST:
            parts.append(stmt.indent)
            parts.append(stmt.verbatim)
            continue
        for j in range(k):
            parts.append(stmt.indent)
            parts.append(_renamed_chain(stmt.verbatim, f"{stem}_{stmt.start_line}", j))
    parts.append(unit.trailing_trivia)
    return "".join(parts)


def _offset_of(text: str, lineno: int, col: int) -> int:
    lines = text.splitlines(keepends=True)
    return sum(len(line) for line in lines[: lineno - 1]) + col


def _renamed_chain(verbatim: str, default_base: str, copy_index: int) -> str:
    """Rewrite the chain's test name to carry a ``_dup<copy_index>`` suffix."""
    try:
        tree = ast.parse(verbatim, mode="eval")
    except SyntaxError:
        return verbatim if verbatim.endswith("\n") else verbatim + "\n"
    node = tree.body
    while isinstance(node, ast.Call) and isinstance(node.func, ast.Attribute):
        node = node.func.value
    if not (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id == "Here"):
        return verbatim if verbatim.endswith("\n") else verbatim + "\n"

    name_node: ast.expr | None = None
    if node.args and isinstance(node.args[0], ast.Constant) and isinstance(node.args[0].value, str):
        name_node = node.args[0]
    else:
        for kw in node.keywords:
            if kw.arg == "test_name" and isinstance(kw.value, ast.Constant) \
                    and isinstance(kw.value.value, str):
                name_node = kw.value
                break

    if name_node is not None:
        start = _offset_of(verbatim, name_node.lineno, name_node.col_offset)
        end = _offset_of(verbatim, name_node.end_lineno, name_node.end_col_offset)
        renamed = repr(f"{name_node.value}_dup{copy_index}")
        rewritten = verbatim[:start] + renamed + verbatim[end:]
    else:
        # Inject an explicit test_name right after Here's opening paren.
        func_end = _offset_of(verbatim, node.func.end_lineno, node.func.end_col_offset)
        paren = verbatim.index("(", func_end)
        argument = repr(f"{default_base}_dup{copy_index}")
        if node.args or node.keywords:
            argument += ", "
        rewritten = verbatim[: paren + 1] + argument + verbatim[paren + 1 :]
    return rewritten if rewritten.endswith("\n") else rewritten + "\n"


def write_rewrite(path: Path, new_text: str, in_place: bool, out_dir: Path | None) -> Path:
    """Write a rewritten file either in place (with a .orig backup) or into
    ``out_dir`` under the original file name. Returns the written path."""
    if in_place:
        backup = path.with_name(path.name + ".orig")
        shutil.copy2(path, backup)
        path.write_bytes(new_text.encode("utf-8"))
        return path
    assert out_dir is not None
    out_dir.mkdir(parents=True, exist_ok=True)
    destination = out_dir / path.name
    destination.write_bytes(new_text.encode("utf-8"))
    return destination
