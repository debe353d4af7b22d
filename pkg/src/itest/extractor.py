"""Chain parsing and target resolution.

Turns each ``Here(...)`` chain statement into a structured declaration,
resolves the statement it checks (nearest preceding non-chain statement at
the same indent), splits if/while header conditions into the operands that
``Group(i)`` can reference, and picks the import statements a test needs.
"""

from __future__ import annotations

import ast
import keyword
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import BadParameterization, MalformedChain, NoOracle, NoTarget
from .scanner import (
    LogicalStatement,
    SourceUnit,
    StatementKind,
    find_inline_tests,
    find_top_level_assign,
    mask_source,
)

# The chain DSL's own names; they never count as user identifiers.
DSL_NAMES = frozenset({"Here", "Group"})

_HERE_OPTIONS = ("test_name", "parameterized", "disabled", "repeated", "tag")
_CHAIN_CALLS = ("given", "check_eq", "check_true", "check_false")
_HEADER_KEYWORD_RE = re.compile(r"(?:if|while)\b")
_IDENT_RE = re.compile(r"[^\d\W]\w*")


class OracleKind(str, Enum):
    EQ = "check_eq"
    TRUE = "check_true"
    FALSE = "check_false"


@dataclass(frozen=True)
class Oracle:
    """One assertion: EQ compares lhs against rhs, TRUE/FALSE check lhs alone."""

    kind: OracleKind
    lhs: str
    rhs: str | None = None


@dataclass(frozen=True)
class Given:
    """One input binding. ``elements`` holds per-row element texts when the
    declaration is parameterized (the value is then a list literal)."""

    name: str
    text: str
    elements: tuple[str, ...] | None = None


@dataclass(frozen=True)
class InlineTestDecl:
    name: str
    file: str
    line: int
    disabled: bool = False
    parameterized: bool = False
    repeated: int = 1
    tags: frozenset[str] = frozenset()
    givens: tuple[Given, ...] = ()
    oracles: tuple[Oracle, ...] = ()
    group_refs: frozenset[int] = frozenset()


@dataclass(frozen=True)
class TargetStatement:
    kind: StatementKind
    verbatim: str
    start_line: int
    end_line: int
    indent: str
    assigned_names: tuple[str, ...] = ()
    condition_operands: tuple[str, ...] = ()


@dataclass(frozen=True)
class ExtractedTest:
    decl: InlineTestDecl
    target: TargetStatement
    imports: tuple[str, ...] = ()


def identifier_tokens(text: str) -> set[str]:
    """Identifier tokens of a code snippet, excluding keywords.

    String contents and comments do not contribute (they are not identifier
    tokens), so a pattern like ``'^{0-9A-F-}{36}$'`` adds nothing.
    """
    masked, _ = mask_source(text)
    return {m.group(0) for m in _IDENT_RE.finditer(masked) if not keyword.iskeyword(m.group(0))}


def bound_names(import_text: str) -> set[str]:
    """Names an import statement binds (``import a.b`` binds ``a``;
    star imports bind nothing knowable and yield the empty set)."""
    try:
        tree = ast.parse(import_text)
    except SyntaxError:
        return set()
    names: set[str] = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.Import):
            for alias in node.names:
                names.add(alias.asname or alias.name.split(".")[0])
        elif isinstance(node, ast.ImportFrom):
            for alias in node.names:
                if alias.name != "*":
                    names.add(alias.asname or alias.name)
    return names


def _literal_str(node: ast.expr) -> str | None:
    if isinstance(node, ast.Constant) and isinstance(node.value, str):
        return node.value
    return None


def _unwind_chain(expr: ast.expr) -> tuple[ast.Call, list[tuple[str, ast.Call]]] | None:
    """Split ``Here(...).a(...).b(...)`` into the Here call and chained calls."""
    chained: list[tuple[str, ast.Call]] = []
    node = expr
    while isinstance(node, ast.Call) and isinstance(node.func, ast.Attribute):
        chained.append((node.func.attr, node))
        node = node.func.value
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "Here":
        chained.reverse()
        return node, chained
    return None


def _collect_group_refs(node: ast.expr, path: str, line: int) -> set[int]:
    refs: set[int] = set()
    for sub in ast.walk(node):
        if isinstance(sub, ast.Call) and isinstance(sub.func, ast.Name) and sub.func.id == "Group":
            if len(sub.args) != 1 or sub.keywords:
                raise MalformedChain(path, line, "Group takes exactly one positional argument")
            arg = sub.args[0]
            if not (isinstance(arg, ast.Constant) and isinstance(arg.value, int)
                    and not isinstance(arg.value, bool) and arg.value >= 0):
                raise MalformedChain(path, line, "Group index must be a non-negative integer literal")
            refs.add(arg.value)
    return refs


def parse_chain(stmt: LogicalStatement, path: str | Path) -> InlineTestDecl:
    """Parse one INLINE_TEST statement into a declaration.

    Raises:
        MalformedChain: the chain is not ``Here(...)`` followed only by
            given/check_eq/check_true/check_false calls, or an option value
            is not the expected literal.
        NoOracle: the chain has no check_* call.
        BadParameterization: parameterized lists are missing, not bracketed
            list literals, empty, or of unequal lengths.
    """
    path_str = str(path)
    line = stmt.start_line
    source = stmt.verbatim
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise MalformedChain(path_str, line, f"not a parseable expression ({exc.msg})") from exc
    unwound = _unwind_chain(tree.body)
    if unwound is None:
        raise MalformedChain(path_str, line, "statement does not start with a Here(...) call")
    here, chained = unwound

    name: str | None = None
    disabled = False
    parameterized = False
    repeated = 1
    tags: set[str] = set()

    if len(here.args) > 1:
        raise MalformedChain(path_str, line, "Here takes at most one positional argument")
    if here.args:
        name = _literal_str(here.args[0])
        if name is None:
            raise MalformedChain(path_str, line, "test name must be a string literal")
    for kw in here.keywords:
        if kw.arg is None:
            raise MalformedChain(path_str, line, "Here does not accept ** arguments")
        if kw.arg not in _HERE_OPTIONS:
            raise MalformedChain(path_str, line, f"unknown Here option {kw.arg!r}")
        value = kw.value
        if kw.arg == "test_name":
            if name is not None:
                raise MalformedChain(path_str, line, "test name given twice")
            name = _literal_str(value)
            if name is None:
                raise MalformedChain(path_str, line, "test_name must be a string literal")
        elif kw.arg in ("parameterized", "disabled"):
            if not (isinstance(value, ast.Constant) and isinstance(value.value, bool)):
                raise MalformedChain(path_str, line, f"{kw.arg} must be True or False")
            if kw.arg == "parameterized":
                parameterized = value.value
            else:
                disabled = value.value
        elif kw.arg == "repeated":
            if not (isinstance(value, ast.Constant) and isinstance(value.value, int)
                    and not isinstance(value.value, bool)):
                raise MalformedChain(path_str, line, "repeated must be an integer literal")
            repeated = value.value
            if repeated < 1:
                raise MalformedChain(path_str, line, "repeated must be >= 1")
        elif kw.arg == "tag":
            if _literal_str(value) is not None:
                tags.add(value.value)  # type: ignore[union-attr]
            elif isinstance(value, (ast.List, ast.Tuple)):
                for elt in value.elts:
                    tag = _literal_str(elt)
                    if tag is None:
                        raise MalformedChain(path_str, line, "tag entries must be string literals")
                    tags.add(tag)
            else:
                raise MalformedChain(path_str, line, "tag must be a string or list of strings")

    givens: list[Given] = []
    oracles: list[Oracle] = []
    group_refs: set[int] = set()
    for call_name, call in chained:
        if call_name not in _CHAIN_CALLS:
            raise MalformedChain(path_str, line, f"unsupported chained call .{call_name}(...)")
        if call.keywords:
            raise MalformedChain(path_str, line, f"{call_name} takes positional arguments only")
        if call_name == "given":
            if len(call.args) != 2:
                raise MalformedChain(path_str, line, "given takes exactly (variable, value)")
            var = call.args[0]
            if not isinstance(var, ast.Name):
                raise MalformedChain(path_str, line, "given variable must be a plain identifier")
            value = call.args[1]
            text = ast.get_source_segment(source, value)
            if text is None:
                raise MalformedChain(path_str, line, "could not recover given value text")
            elements: tuple[str, ...] | None = None
            if parameterized:
                if not isinstance(value, ast.List):
                    raise BadParameterization(
                        path_str, line, f"given({var.id}, ...) value must be a bracketed list literal")
                elements = tuple(
                    seg for elt in value.elts
                    if (seg := ast.get_source_segment(source, elt)) is not None
                )
                if len(elements) != len(value.elts):
                    raise MalformedChain(path_str, line, "could not recover list element text")
            givens.append(Given(name=var.id, text=text, elements=elements))
        else:
            expected_arity = 2 if call_name == "check_eq" else 1
            if len(call.args) != expected_arity:
                raise MalformedChain(
                    path_str, line, f"{call_name} takes exactly {expected_arity} argument(s)")
            texts = []
            for arg in call.args:
                seg = ast.get_source_segment(source, arg)
                if seg is None:
                    raise MalformedChain(path_str, line, "could not recover oracle expression text")
                texts.append(seg)
                group_refs |= _collect_group_refs(arg, path_str, line)
            if call_name == "check_eq":
                oracles.append(Oracle(OracleKind.EQ, lhs=texts[0], rhs=texts[1]))
            elif call_name == "check_true":
                oracles.append(Oracle(OracleKind.TRUE, lhs=texts[0]))
            else:
                oracles.append(Oracle(OracleKind.FALSE, lhs=texts[0]))

    if not oracles:
        raise NoOracle(path_str, line)
    if parameterized:
        lengths = {len(g.elements) for g in givens if g.elements is not None}
        if not lengths:
            raise BadParameterization(path_str, line, "parameterized chain has no given lists")
        if len(lengths) != 1:
            raise BadParameterization(path_str, line, "given lists have unequal lengths")
        if 0 in lengths:
            raise BadParameterization(path_str, line, "given lists must be non-empty")

    if not name:
        name = f"{Path(path_str).stem}_{line}"
    return InlineTestDecl(
        name=name,
        file=path_str,
        line=line,
        disabled=disabled,
        parameterized=parameterized,
        repeated=repeated,
        tags=frozenset(tags),
        givens=tuple(givens),
        oracles=tuple(oracles),
        group_refs=frozenset(group_refs),
    )


def split_conditions(header: str) -> list[str]:
    """Top-level condition operands of an if/while header, in source order.

    The condition is split at every top-level ``and``/``or``, left to right,
    never inside parentheses, brackets, or strings. A condition without a
    top-level connective yields itself as the single operand.
    """
    operands, _ = split_conditions_with_connectives(header)
    return operands


def split_conditions_with_connectives(header: str) -> tuple[list[str], list[str]]:
    """Like :func:`split_conditions` but also returns the connectives hit."""
    masked, _ = mask_source(header)
    match = _HEADER_KEYWORD_RE.match(header)
    start = match.end() if match else 0
    end = _find_top_level_colon(masked, start)

    operands: list[str] = []
    connectives: list[str] = []
    depth = 0
    i = start
    last = start
    while i < end:
        c = masked[i]
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth = max(depth - 1, 0)
        elif depth == 0 and c in "ao":
            word = "and" if c == "a" else "or"
            if masked.startswith(word, i) and _is_word_at(masked, i, len(word)):
                operands.append(header[last:i].strip())
                connectives.append(word)
                i += len(word)
                last = i
                continue
        i += 1
    operands.append(header[last:end].strip())
    return operands, connectives


def _find_top_level_colon(masked: str, start: int) -> int:
    depth = 0
    for i in range(start, len(masked)):
        c = masked[i]
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth = max(depth - 1, 0)
        elif c == ":" and depth == 0:
            return i
    return len(masked)


def _is_word_at(masked: str, i: int, length: int) -> bool:
    before = masked[i - 1] if i > 0 else " "
    after = masked[i + length] if i + length < len(masked) else " "
    def wordish(ch: str) -> bool:
        return ch.isalnum() or ch == "_"
    return not wordish(before) and not wordish(after)


def _assigned_names(verbatim: str) -> tuple[str, ...]:
    """Lexical best-effort list of names bound by an assignment statement."""
    masked, _ = mask_source(verbatim)
    pos = find_top_level_assign(masked)
    if pos is None:
        return ()
    lhs = masked[:pos].rstrip("+-*/%&|^@<> \t")
    names: list[str] = []
    depth = 0
    for m in _IDENT_RE.finditer(lhs):
        before = lhs[:m.start()]
        depth = _net_depth(before)
        if depth > 0:
            continue
        if m.start() > 0 and lhs[m.start() - 1] == ".":
            continue
        tok = m.group(0)
        if keyword.iskeyword(tok):
            continue
        names.append(tok)
    seen: set[str] = set()
    unique = [n for n in names if not (n in seen or seen.add(n))]
    return tuple(unique)


def _net_depth(text: str) -> int:
    depth = 0
    for c in text:
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth = max(depth - 1, 0)
    return depth


def make_target(stmt: LogicalStatement) -> TargetStatement:
    """Build a TargetStatement view of a scanned statement."""
    if stmt.kind in (StatementKind.IF_HEADER, StatementKind.WHILE_HEADER):
        kind = stmt.kind
        operands = tuple(split_conditions(stmt.verbatim))
        assigned: tuple[str, ...] = ()
    elif stmt.kind is StatementKind.ASSIGNMENT:
        kind = StatementKind.ASSIGNMENT
        operands = ()
        assigned = _assigned_names(stmt.verbatim)
    else:
        kind = StatementKind.OTHER
        operands = ()
        assigned = ()
    return TargetStatement(
        kind=kind,
        verbatim=stmt.verbatim,
        start_line=stmt.start_line,
        end_line=stmt.end_line,
        indent=stmt.indent,
        assigned_names=assigned,
        condition_operands=operands,
    )


def resolve_target(unit: SourceUnit, test_index: int) -> TargetStatement:
    """Target of the inline test at ``test_index``: the nearest preceding
    statement at the same indent that is not itself an inline test.

    Raises:
        NoTarget: nothing precedes the test at its indent.
    """
    stmt = unit.statements[test_index]
    if stmt.kind is not StatementKind.INLINE_TEST:
        raise ValueError(f"statement {test_index} is not an inline test")
    for j in range(test_index - 1, -1, -1):
        candidate = unit.statements[j]
        if candidate.indent != stmt.indent:
            continue
        if candidate.kind is StatementKind.INLINE_TEST:
            continue
        return make_target(candidate)
    raise NoTarget(unit.path, stmt.start_line)


def collect_imports(
    unit: SourceUnit,
    target: TargetStatement,
    decl: InlineTestDecl,
    copy_all: bool = False,
) -> tuple[str, ...]:
    """IMPORT statements the generated program needs, in file order.

    An import is kept when a name it binds occurs as an identifier token in
    the target text, a given value expression, or an oracle expression.
    Imports binding only the chain DSL names (Here/Group) are never copied,
    even with ``copy_all``, so generated programs stay shim-free.
    """
    needed = identifier_tokens(target.verbatim)
    for given in decl.givens:
        needed |= identifier_tokens(given.text)
    for oracle in decl.oracles:
        needed |= identifier_tokens(oracle.lhs)
        if oracle.rhs is not None:
            needed |= identifier_tokens(oracle.rhs)
    needed -= DSL_NAMES

    kept: list[str] = []
    for stmt in unit.statements:
        if stmt.kind is not StatementKind.IMPORT:
            continue
        bound = bound_names(stmt.verbatim)
        if bound and bound <= DSL_NAMES:
            continue
        if copy_all or (bound & needed):
            kept.append(stmt.verbatim)
    return tuple(kept)


def extract_file(unit: SourceUnit, copy_all_imports: bool = False) -> list[ExtractedTest]:
    """Extract every inline test of a scanned file, in file order."""
    extracted: list[ExtractedTest] = []
    for index in find_inline_tests(unit):
        decl = parse_chain(unit.statements[index], unit.path)
        target = resolve_target(unit, index)
        imports = collect_imports(unit, target, decl, copy_all=copy_all_imports)
        extracted.append(ExtractedTest(decl=decl, target=target, imports=imports))
    return extracted
