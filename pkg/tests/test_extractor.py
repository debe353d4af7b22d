import io
import tokenize

import pytest
from hypothesis import given
from hypothesis import strategies as st

from itest.errors import BadParameterization, MalformedChain, NoOracle, NoTarget
from itest.extractor import (
    OracleKind,
    bound_names,
    collect_imports,
    extract_file,
    identifier_tokens,
    parse_chain,
    resolve_target,
    split_conditions,
)
from itest.scanner import StatementKind, scan_file


def chain_decl(text, path="t.py"):
    unit = scan_file(path, text if text.endswith("\n") else text + "\n")
    assert unit.statements[-1].kind is StatementKind.INLINE_TEST
    return parse_chain(unit.statements[-1], path)


# --- parse_chain ----------------------------------------------------------

def test_default_name_is_stem_and_line():
    text = "\n" * 6 + "Here().given(dt, (1980,1,25,17,13,14)).check_eq(dosdate, 57)\n"
    unit = scan_file("zip.py", text)
    decl = parse_chain(unit.statements[0], "zip.py")
    assert decl.name == "zip_7"
    assert decl.line == 7
    assert [(g.name, g.text) for g in decl.givens] == [("dt", "(1980,1,25,17,13,14)")]
    assert decl.oracles[0].kind is OracleKind.EQ
    assert decl.oracles[0].lhs == "dosdate"
    assert decl.oracles[0].rhs == "57"


def test_minimal_named_chain():
    decl = chain_decl('Here("t").check_true(x)')
    assert decl.name == "t"
    assert decl.givens == ()
    assert decl.oracles[0].kind is OracleKind.TRUE
    assert decl.oracles[0].lhs == "x"


def test_chain_without_oracle_rejected():
    with pytest.raises(NoOracle):
        chain_decl("Here().given(a, 1)")


def test_unknown_here_option_rejected():
    with pytest.raises(MalformedChain):
        chain_decl("Here(retries=2).check_true(x)")


def test_unknown_chained_call_rejected():
    with pytest.raises(MalformedChain):
        chain_decl("Here().expect(x)")


def test_given_variable_must_be_identifier():
    with pytest.raises(MalformedChain):
        chain_decl("Here().given(a.b, 1).check_true(x)")


def test_flags_and_tags_parse():
    decl = chain_decl(
        'Here(test_name="n", disabled=True, repeated=2, tag=["a", "b"]).check_false(x)'
    )
    assert decl.name == "n"
    assert decl.disabled
    assert decl.repeated == 2
    assert decl.tags == {"a", "b"}
    assert decl.oracles[0].kind is OracleKind.FALSE


def test_single_tag_string():
    assert chain_decl('Here(tag="regex").check_true(x)').tags == {"regex"}


def test_repeated_below_one_rejected():
    with pytest.raises(MalformedChain):
        chain_decl("Here(repeated=0).check_true(x)")


def test_parameterized_rows_recorded():
    decl = chain_decl("Here(parameterized=True).given(a, [1, 2]).given(b, [3, 4]).check_eq(y, a)")
    assert decl.parameterized
    assert decl.givens[0].elements == ("1", "2")
    assert decl.givens[1].elements == ("3", "4")


def test_parameterized_unequal_lists_rejected():
    with pytest.raises(BadParameterization):
        chain_decl("Here(parameterized=True).given(a, [1]).given(b, [1, 2]).check_true(a)")


def test_parameterized_non_list_rejected():
    with pytest.raises(BadParameterization):
        chain_decl("Here(parameterized=True).given(a, (1, 2)).check_true(a)")


def test_parameterized_without_givens_rejected():
    with pytest.raises(BadParameterization):
        chain_decl("Here(parameterized=True).check_true(x)")


def test_group_refs_collected():
    decl = chain_decl("Here().check_true(Group(1) and Group(0))")
    assert decl.group_refs == {0, 1}


def test_group_index_must_be_int_literal():
    with pytest.raises(MalformedChain):
        chain_decl("Here().check_true(Group(i))")


def test_name_collides_with_positional_rejected():
    with pytest.raises(MalformedChain):
        chain_decl('Here("a", test_name="b").check_true(x)')


# --- resolve_target -------------------------------------------------------

def test_consecutive_tests_share_one_target():
    text = "s1 = 1\nHere().check_true(s1)\nHere().check_false(s1)\n"
    unit = scan_file("t.py", text)
    t1 = resolve_target(unit, 1)
    t2 = resolve_target(unit, 2)
    assert t1 == t2
    assert t1.verbatim == "s1 = 1\n"
    assert t1.kind is StatementKind.ASSIGNMENT
    assert t1.assigned_names == ("s1",)


def test_inline_test_first_in_file_has_no_target():
    unit = scan_file("t.py", "Here().check_true(x)\n")
    with pytest.raises(NoTarget):
        resolve_target(unit, 0)


def test_header_target_with_condition_operands():
    text = (
        "if gen and re.match('^{0-9A-F-}{36}$', orig):\n"
        "    orig = gen\n"
        "Here().check_true(Group(1))\n"
    )
    unit = scan_file("t.py", text)
    target = resolve_target(unit, 2)
    assert target.kind is StatementKind.IF_HEADER
    assert target.condition_operands[1] == "re.match('^{0-9A-F-}{36}$', orig)"


def test_target_resolution_requires_equal_indent():
    text = "def f():\n    x = g()\nHere().check_true(x)\n"
    unit = scan_file("t.py", text)
    target = resolve_target(unit, 2)
    assert target.verbatim.startswith("def f():")


def test_deeper_inline_test_skips_shallower_statements():
    text = "a = 1\nif c:\n    b = 2\n    Here().check_true(b)\n"
    unit = scan_file("t.py", text)
    target = resolve_target(unit, 3)
    assert target.verbatim == "b = 2\n"


def test_tuple_assignment_names():
    unit = scan_file("t.py", "a, b = f()\nHere().check_true(a)\n")
    assert resolve_target(unit, 1).assigned_names == ("a", "b")


# --- split_conditions -----------------------------------------------------

def reference_split(condition):
    """Independent splitter: tokenize-based top-level and/or detection."""
    tokens = list(tokenize.generate_tokens(io.StringIO(condition).readline))
    depth = 0
    parts, connectives = [], []
    last = (1, 0)
    line_starts = [0]
    for i, ch in enumerate(condition):
        if ch == "\n":
            line_starts.append(i + 1)

    def offset(pos):
        return line_starts[pos[0] - 1] + pos[1]

    for tok in tokens:
        if tok.type == tokenize.OP and tok.string in "([{":
            depth += 1
        elif tok.type == tokenize.OP and tok.string in ")]}":
            depth -= 1
        elif tok.type == tokenize.NAME and tok.string in ("and", "or") and depth == 0:
            parts.append(condition[offset(last):offset(tok.start)].strip())
            connectives.append(tok.string)
            last = tok.end
    parts.append(condition[offset(last):].strip())
    return parts, connectives


@pytest.mark.parametrize(
    "header,expected",
    [
        ("if a and b or c:", ["a", "b", "c"]),
        ("if (a and b):", ["(a and b)"]),
        ("while x:", ["x"]),
        ("if not a and b:", ["not a", "b"]),
        ("if f(a, b) and g[0] or {1: 2}:", ["f(a, b)", "g[0]", "{1: 2}"]),
        ("if 'x and y' and z:", ["'x and y'", "z"]),
        ("if android or oracle:", ["android or oracle".split(" or ")[0], "oracle"]),
    ],
)
def test_split_conditions_examples(header, expected):
    operands = split_conditions(header + "\n")
    assert operands == expected
    # cross-check against the independent tokenize-based splitter
    condition = header[len("if"):].lstrip() if header.startswith("if") else \
        header[len("while"):].lstrip()
    condition = condition.rstrip(":").rstrip()
    ref_parts, _ = reference_split(condition)
    assert operands == ref_parts


_CONDITION_ATOMS = ["a", "b_1", "f(x, y)", "xs[0]", "(a and b)", "not flag",
                    "'and or'", "n > 0", "obj.attr", "{1: 2}"]


@given(
    st.lists(st.sampled_from(_CONDITION_ATOMS), min_size=1, max_size=5),
    st.lists(st.sampled_from(["and", "or"]), min_size=4, max_size=4),
    st.sampled_from(["if", "while"]),
)
def test_split_conditions_matches_reference(atoms, connectives, kw):
    condition = atoms[0]
    for i, atom in enumerate(atoms[1:]):
        condition += f" {connectives[i]} {atom}"
    header = f"{kw} {condition}:\n"
    operands = split_conditions(header)
    ref_parts, ref_conn = reference_split(condition)
    assert operands == ref_parts
    # join-back property: operands and connectives reproduce the condition
    rebuilt = operands[0]
    for conn, operand in zip(ref_conn, operands[1:]):
        rebuilt += f" {conn} {operand}"
    assert rebuilt == condition


# --- collect_imports ------------------------------------------------------

IMPORT_FILE = (
    "import re\n"
    "import os\n"
    "from collections import OrderedDict\n"
    "from itest_shim import Here, Group\n"
    "name = re.match('x', s)\n"
    "Here().given(s, 'x').check_true(name)\n"
)


def extracted(text, path="t.py", **kwargs):
    return extract_file(scan_file(path, text), **kwargs)


def test_import_used_by_target_is_copied():
    [item] = extracted(IMPORT_FILE)
    assert item.imports == ("import re\n",)


def test_unused_import_is_excluded():
    [item] = extracted(IMPORT_FILE)
    assert all("os" not in imp for imp in item.imports)


def test_from_import_bound_name_matches():
    text = (
        "from collections import OrderedDict\n"
        "d = OrderedDict()\n"
        "Here().check_eq(len(d), 0)\n"
    )
    [item] = extracted(text)
    assert item.imports == ("from collections import OrderedDict\n",)


def test_aliased_import_matches_alias():
    text = "import os.path as osp\nx = osp.sep\nHere().check_true(x)\n"
    [item] = extracted(text)
    assert item.imports == ("import os.path as osp\n",)


def test_identifier_inside_string_does_not_pull_import():
    text = "import os\nx = 'os'\nHere().check_eq(x, 'os')\n"
    [item] = extracted(text)
    assert item.imports == ()


def test_shim_import_never_copied_even_with_copy_all():
    [item] = extracted(IMPORT_FILE, copy_all_imports=True)
    assert "from itest_shim import Here, Group\n" not in item.imports
    assert set(item.imports) == {"import re\n", "import os\n",
                                 "from collections import OrderedDict\n"}


def test_star_import_binds_nothing():
    assert bound_names("from os import *\n") == set()
    assert bound_names("import a.b.c\n") == {"a"}
    assert bound_names("from x import a as b, c\n") == {"b", "c"}


def test_identifier_tokens_skip_keywords_and_strings():
    tokens = identifier_tokens("if re.match('os and sys', orig): pass\n")
    assert "re" in tokens and "match" in tokens and "orig" in tokens
    assert "os" not in tokens and "and" not in tokens and "if" not in tokens


# --- whole-file extraction ------------------------------------------------

def test_extraction_is_deterministic(corpus_files):
    from itest.scanner import scan_path

    for path in corpus_files:
        first = extract_file(scan_path(path))
        second = extract_file(scan_path(path))
        assert first == second


def test_every_extracted_test_has_exactly_one_target(corpus_files):
    from itest.scanner import scan_path

    for path in corpus_files:
        for item in extract_file(scan_path(path)):
            assert item.target is not None
            assert isinstance(item.target.verbatim, str)
