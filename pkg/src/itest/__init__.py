"""Statement-level inline tests for Python source files.

Write a fluent ``Here(...)`` chain directly after the statement it checks;
this package discovers those chains, extracts each one with its target into
a standalone program, runs the programs, and reports the results. It also
strips chains from source and benchmarks their scaling cost.
"""

from .errors import (
    BadParameterization,
    DestinationUnwritable,
    GroupIndexOutOfRange,
    GroupOnNonHeader,
    InterpreterNotFound,
    ItestError,
    MalformedChain,
    NoOracle,
    NoTarget,
    ProtocolViolation,
    UnbalancedDelimiter,
)
from .extractor import (
    ExtractedTest,
    Given,
    InlineTestDecl,
    Oracle,
    OracleKind,
    TargetStatement,
    collect_imports,
    extract_file,
    parse_chain,
    resolve_target,
    split_conditions,
)
from .reporter import TestReport, emit, exit_code, parse_json_report, render_json, summarize
from .rewriter import duplicate, strip
from .runner import RunConfig, Status, TestOutcome, run_program, run_suite
from .scanner import (
    LogicalStatement,
    SourceUnit,
    StatementKind,
    find_inline_tests,
    scan_file,
    scan_path,
)
from .synthesizer import GeneratedProgram, TestInstance, expand, render_program

__version__ = "0.1.0"

__all__ = [
    "BadParameterization",
    "DestinationUnwritable",
    "ExtractedTest",
    "GeneratedProgram",
    "Given",
    "GroupIndexOutOfRange",
    "GroupOnNonHeader",
    "InlineTestDecl",
    "InterpreterNotFound",
    "ItestError",
    "LogicalStatement",
    "MalformedChain",
    "NoOracle",
    "NoTarget",
    "Oracle",
    "OracleKind",
    "ProtocolViolation",
    "RunConfig",
    "SourceUnit",
    "StatementKind",
    "Status",
    "TargetStatement",
    "TestInstance",
    "TestOutcome",
    "TestReport",
    "UnbalancedDelimiter",
    "collect_imports",
    "duplicate",
    "emit",
    "exit_code",
    "expand",
    "extract_file",
    "find_inline_tests",
    "parse_chain",
    "parse_json_report",
    "render_json",
    "render_program",
    "resolve_target",
    "run_program",
    "run_suite",
    "scan_file",
    "scan_path",
    "split_conditions",
    "strip",
    "summarize",
]
