"""Logical-statement scanner for subject source files.

Splits a file into logical statements at the lexical level: a statement ends
at a newline that is not protected by an open bracket, a backslash
continuation, or an unterminated (triple-quoted) string. Comment-only and
blank lines are attached as trivia to the following statement, so a scan can
be reassembled into the original text byte for byte. Each statement gets a
lexical kind tag; no subject-language parsing happens here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import UnbalancedDelimiter

_OPENERS = "([{"
_CLOSERS = ")]}"
_STRING_PREFIX_CHARS = frozenset("rRbBuUfF")
_INDENT_CHARS = " \t\f"

_INLINE_TEST_RE = re.compile(r"Here\s*\(")
_IMPORT_RE = re.compile(r"(?:import|from)\b")
_IF_RE = re.compile(r"if\b")
_WHILE_RE = re.compile(r"while\b")


class StatementKind(str, Enum):
    IMPORT = "import"
    ASSIGNMENT = "assignment"
    IF_HEADER = "if_header"
    WHILE_HEADER = "while_header"
    INLINE_TEST = "inline_test"
    OTHER = "other"


@dataclass(frozen=True)
class LogicalStatement:
    """One logical statement, covering whole physical lines.

    ``verbatim`` is the exact source text starting at the first
    non-whitespace character of the first line (the leading whitespace is
    kept separately in ``indent``) and running through the trailing newline
    of the last physical line. ``trivia`` holds the blank/comment lines
    immediately preceding the statement.
    """

    verbatim: str
    start_line: int
    end_line: int
    indent: str
    kind: StatementKind
    trivia: str = ""


@dataclass(frozen=True)
class SourceUnit:
    """A scanned file: ordered statements plus enough trivia to rebuild it."""

    path: str
    text: str
    statements: tuple[LogicalStatement, ...]
    newline_style: str  # "LF" or "CRLF"
    trailing_trivia: str = ""

    def reconstruct(self) -> str:
        """Reassemble the original text byte for byte."""
        parts: list[str] = []
        for stmt in self.statements:
            parts.append(stmt.trivia)
            parts.append(stmt.indent)
            parts.append(stmt.verbatim)
        parts.append(self.trailing_trivia)
        return "".join(parts)


def mask_source(text: str, path: str = "<source>") -> tuple[str, list[bool]]:
    """Blank out string contents and comments, preserving length and newlines.

    Returns ``(masked, in_string)`` where ``masked`` has every character of a
    string literal (prefix letters, quotes, contents) and every comment
    replaced by a space, except that newlines are kept so line structure
    survives. ``in_string[i]`` is True for characters inside string literals.

    Raises:
        UnbalancedDelimiter: a single-quoted string hits an unescaped newline,
            or any string is still open at end of file.
    """
    out = list(text)
    in_string = [False] * len(text)
    i = 0
    n = len(text)
    line = 1
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                out[i] = " "
                i += 1
            continue
        if c in "'\"":
            start_line = line
            triple = text.startswith(c * 3, i)
            delim = c * 3 if triple else c
            # Fold a 1-2 letter string prefix (r, b, f, u combos) into the
            # literal, but only when it is a whole identifier of its own.
            k = i
            while k > i - 2 and k > 0 and text[k - 1] in _STRING_PREFIX_CHARS:
                k -= 1
            if k < i and (k == 0 or not (text[k - 1].isalnum() or text[k - 1] == "_")):
                for p in range(k, i):
                    out[p] = " "
                    in_string[p] = True
            for p in range(i, i + len(delim)):
                out[p] = " "
                in_string[p] = True
            i += len(delim)
            closed = False
            while i < n:
                ch = text[i]
                if ch == "\\":
                    out[i] = " "
                    in_string[i] = True
                    i += 1
                    if i < n:
                        # Escaped char; a CRLF pair counts as one escape.
                        if text[i] == "\r" and i + 1 < n and text[i + 1] == "\n":
                            in_string[i] = True
                            in_string[i + 1] = True
                            line += 1
                            i += 2
                        else:
                            if text[i] == "\n":
                                line += 1
                            else:
                                out[i] = " "
                            in_string[i] = True
                            i += 1
                    continue
                if text.startswith(delim, i):
                    for p in range(i, i + len(delim)):
                        out[p] = " "
                        in_string[p] = True
                    i += len(delim)
                    closed = True
                    break
                if ch == "\n":
                    if not triple:
                        raise UnbalancedDelimiter(path, start_line, "unterminated string literal")
                    in_string[i] = True
                    line += 1
                    i += 1
                    continue
                if ch != "\r":
                    out[i] = " "
                in_string[i] = True
                i += 1
            if not closed:
                raise UnbalancedDelimiter(path, start_line, "string not closed by end of file")
            continue
        i += 1
    return "".join(out), in_string


def find_top_level_assign(masked: str) -> int | None:
    """Index of the first top-level assignment ``=`` in masked statement text.

    Comparison operators (==, !=, <=, >=) and the walrus := are excluded;
    augmented assignments count. Returns None when the statement binds
    nothing at the top level.
    """
    depth = 0
    for i, c in enumerate(masked):
        if c in _OPENERS:
            depth += 1
        elif c in _CLOSERS:
            depth = max(depth - 1, 0)
        elif c == "=" and depth == 0:
            nxt = masked[i + 1] if i + 1 < len(masked) else ""
            prev = masked[i - 1] if i > 0 else ""
            if nxt == "=" or prev in "=!:":
                continue
            if prev in "<>" and (i < 2 or masked[i - 2] != prev):
                continue  # <= or >= comparison; <<= and >>= still count
            return i
    return None


def _classify(verbatim: str, masked_verbatim: str) -> StatementKind:
    if _INLINE_TEST_RE.match(verbatim):
        return StatementKind.INLINE_TEST
    if _IMPORT_RE.match(verbatim):
        return StatementKind.IMPORT
    if _IF_RE.match(verbatim):
        return StatementKind.IF_HEADER
    if _WHILE_RE.match(verbatim):
        return StatementKind.WHILE_HEADER
    if find_top_level_assign(masked_verbatim) is not None:
        return StatementKind.ASSIGNMENT
    return StatementKind.OTHER


def _is_escaped_newline(masked: str, in_string: list[bool], i: int) -> bool:
    """True when the newline at ``i`` is consumed by a code-level backslash."""
    j = i - 1
    if j >= 0 and masked[j] == "\r":
        j -= 1
    return j >= 0 and masked[j] == "\\" and not in_string[j]


def scan_file(path: str | Path, text: str) -> SourceUnit:
    """Scan source text into a SourceUnit.

    Args:
        path: provenance only; nothing is read from disk.
        text: full file content, newlines preserved as found.

    Raises:
        UnbalancedDelimiter: brackets or strings cannot be closed by end of
            file; the file is rejected with no partial result.
    """
    path_str = str(path)
    masked, in_string = mask_source(text, path_str)

    # Chunk boundaries sit after every newline that ends a logical line.
    chunks: list[tuple[int, int]] = []
    depth = 0
    opener_lines: list[int] = []
    line = 1
    start = 0
    for i, c in enumerate(masked):
        if c == "\n":
            if not in_string[i] and depth == 0 and not _is_escaped_newline(masked, in_string, i):
                chunks.append((start, i + 1))
                start = i + 1
            line += 1
            continue
        if in_string[i]:
            continue
        if c in _OPENERS:
            depth += 1
            opener_lines.append(line)
        elif c in _CLOSERS:
            if depth > 0:
                depth -= 1
                opener_lines.pop()
    if depth > 0:
        raise UnbalancedDelimiter(path_str, opener_lines[0], "bracket not closed by end of file")
    if start < len(text):
        chunks.append((start, len(text)))

    statements: list[LogicalStatement] = []
    pending: list[str] = []
    line_no = 1
    for a, b in chunks:
        raw = text[a:b]
        if masked[a:b].strip() == "":
            pending.append(raw)
            line_no += raw.count("\n")
            continue
        indent_len = len(raw) - len(raw.lstrip(_INDENT_CHARS))
        indent = raw[:indent_len]
        verbatim = raw[indent_len:]
        content = raw[:-1] if raw.endswith("\n") else raw
        start_line = line_no
        end_line = line_no + content.count("\n")
        kind = _classify(verbatim, masked[a + indent_len : b])
        statements.append(
            LogicalStatement(
                verbatim=verbatim,
                start_line=start_line,
                end_line=end_line,
                indent=indent,
                kind=kind,
                trivia="".join(pending),
            )
        )
        pending = []
        line_no += raw.count("\n")

    newline_style = "CRLF" if "\r\n" in text else "LF"
    return SourceUnit(
        path=path_str,
        text=text,
        statements=tuple(statements),
        newline_style=newline_style,
        trailing_trivia="".join(pending),
    )


def scan_path(path: str | Path) -> SourceUnit:
    """Read a UTF-8 file without newline translation and scan it."""
    p = Path(path)
    return scan_file(p, p.read_bytes().decode("utf-8"))


def find_inline_tests(unit: SourceUnit) -> list[int]:
    """Indices of all INLINE_TEST statements, in file order."""
    return [i for i, stmt in enumerate(unit.statements) if stmt.kind is StatementKind.INLINE_TEST]
