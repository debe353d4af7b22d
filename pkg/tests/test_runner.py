import sys
from collections import Counter

import pytest

from itest.errors import InterpreterNotFound, ProtocolViolation
from itest.extractor import extract_file
from itest.runner import (
    INTERPRETER_ENV_VAR,
    RunConfig,
    Status,
    resolve_interpreter,
    run_program,
    run_suite,
)
from itest.scanner import scan_file
from itest.synthesizer import GeneratedProgram, expand, render_program


def program_for(text, path="t.py"):
    unit = scan_file(path, text)
    instances = []
    for item in extract_file(unit):
        instances.extend(expand(item))
    return render_program(instances, path)


def test_simple_pass():
    program = program_for(
        "dosdate = (dt[0] - 1980) << 9 | dt[1] << 5 | dt[2]\n"
        "Here('pack').given(dt, (1980, 1, 25, 17, 13, 14)).check_eq(dosdate, 57)\n"
    )
    [outcome] = run_program(program, RunConfig(jobs=1))
    assert outcome.status is Status.PASS
    assert outcome.duration_ms >= 0.0


def test_dostime_example_passes_against_precomputed_value():
    # expected value evaluated beforehand in an interpreter session: 35239
    program = program_for(
        "dostime = dt[3] << 11 | dt[4] << 5 | dt[5] >> 1\n"
        "Here('time_pack').given(dt, (1980, 1, 25, 17, 13, 14)).check_eq(dostime, 35239)\n"
    )
    [outcome] = run_program(program, RunConfig(jobs=1))
    assert outcome.status is Status.PASS


def test_hanging_program_times_out_all_instances():
    program = program_for(
        "total = sum(iter(int, 1))\n"
        "Here('spin').check_eq(total, 0)\n"
        "Here('spin2').check_eq(total, 0)\n"
    )
    outcomes = run_program(program, RunConfig(jobs=1, timeout_s=1.5))
    assert [o.status for o in outcomes] == [Status.TIMEOUT, Status.TIMEOUT]
    assert all("budget" in o.message for o in outcomes)


def test_crashing_program_reports_error_per_instance():
    program = program_for(
        "import missing_module_xyz\n"
        "value = missing_module_xyz.thing\n"
        "Here('uses_missing').check_true(value)\n"
    )
    [outcome] = run_program(program, RunConfig(jobs=1))
    assert outcome.status is Status.ERROR
    assert "no result record" in outcome.message


def test_exit_status_alone_never_decides_outcomes():
    # Target calls sys.exit; the harness catches it and the record decides.
    program = program_for(
        "import sys\n"
        "code = sys.exit(3)\n"
        "Here('exits').check_eq(code, None)\n"
    )
    [outcome] = run_program(program, RunConfig(jobs=1))
    assert outcome.status is Status.ERROR
    assert "SystemExit" in outcome.message


def test_interpreter_not_found():
    cfg = RunConfig(interpreter="/nonexistent/interp", jobs=1)
    with pytest.raises(InterpreterNotFound):
        resolve_interpreter(cfg)


def test_interpreter_env_var_is_honored(monkeypatch):
    monkeypatch.setenv(INTERPRETER_ENV_VAR, "/nonexistent/interp")
    with pytest.raises(InterpreterNotFound):
        resolve_interpreter(RunConfig(jobs=1))
    monkeypatch.setenv(INTERPRETER_ENV_VAR, sys.executable)
    assert resolve_interpreter(RunConfig(jobs=1)) == sys.executable


def test_protocol_violation_on_garbage_between_sentinels():
    source = (
        'import sys\n'
        'sys.stdout.write("##ITEST-BEGIN##\\n")\n'
        'sys.stdout.write("not json\\n")\n'
        'sys.stdout.write("##ITEST-END##\\n")\n'
    )
    real = program_for("y = 1\nHere('x').check_eq(y, 1)\n")
    fake = GeneratedProgram(source_text=source, instances=real.instances, origin="t.py")
    with pytest.raises(ProtocolViolation):
        run_program(fake, RunConfig(jobs=1))


def test_run_suite_survives_protocol_violation():
    source = (
        'import sys\n'
        'sys.stdout.write("##ITEST-BEGIN##\\n")\n'
        'sys.stdout.write("still not json\\n")\n'
        'sys.stdout.write("##ITEST-END##\\n")\n'
    )
    good = program_for("y = 1\nHere('ok').check_eq(y, 1)\n")
    bad = GeneratedProgram(source_text=source, instances=good.instances, origin="bad.py")
    outcomes = run_suite([bad, good], RunConfig(jobs=1))
    assert [o.status for o in outcomes] == [Status.ERROR, Status.PASS]


SUITE_TEXT = (
    "y = x * 2\n"
    "Here('double_small', tag='math').given(x, 2).check_eq(y, 4)\n"
    "Here('double_big', tag='math').given(x, 30).check_eq(y, 60)\n"
    "Here('regex_like', tag='regex').given(x, 1).check_eq(y, 2)\n"
)


def test_tag_filter_skips_other_declarations():
    program = program_for(SUITE_TEXT)
    outcomes = run_suite([program], RunConfig(jobs=1, tag_filter=frozenset({"regex"})))
    by_name = {o.id: o for o in outcomes}
    assert by_name["regex_like"].status is Status.PASS
    assert by_name["double_small"].status is Status.SKIPPED
    assert by_name["double_small"].message == "filtered"
    assert len(outcomes) == 3


def test_name_filter_glob():
    program = program_for(SUITE_TEXT)
    outcomes = run_suite([program], RunConfig(jobs=1, name_filter="double_*"))
    executed = [o.id for o in outcomes if o.status is Status.PASS]
    assert executed == ["double_small", "double_big"]


def test_tag_and_name_filters_intersect():
    program = program_for(SUITE_TEXT)
    cfg = RunConfig(jobs=1, tag_filter=frozenset({"math"}), name_filter="*_big")
    outcomes = run_suite([program], cfg)
    executed = [o.id for o in outcomes if o.status is Status.PASS]
    assert executed == ["double_big"]


def test_empty_suite_gives_empty_outcomes():
    assert run_suite([], RunConfig(jobs=1)) == []


def multiset(outcomes):
    return Counter((o.id, o.file, o.line, o.status, o.expected, o.observed) for o in outcomes)


def test_outcomes_invariant_to_jobs():
    programs = [
        program_for(SUITE_TEXT, "a.py"),
        program_for("z = 1\nHere('zz').check_eq(z, 2)\n", "b.py"),
        program_for("q = []\nHere('qq').check_false(q)\n", "c.py"),
    ]
    serial = run_suite(programs, RunConfig(jobs=1))
    parallel = run_suite(programs, RunConfig(jobs=4))
    assert multiset(serial) == multiset(parallel)
    # complete, and deterministically ordered
    assert [o.id for o in serial] == [o.id for o in parallel]
    assert len(serial) == sum(len(p.instances) for p in programs)


def test_completeness_under_filter_and_timeout():
    programs = [
        program_for("t = sum(iter(int, 1))\nHere('hang', tag='slow').check_eq(t, 0)\n", "a.py"),
        program_for(SUITE_TEXT, "b.py"),
    ]
    cfg = RunConfig(jobs=2, timeout_s=1.5, tag_filter=frozenset({"slow"}))
    outcomes = run_suite(programs, cfg)
    assert len(outcomes) == sum(len(p.instances) for p in programs)
    statuses = Counter(o.status for o in outcomes)
    assert statuses[Status.TIMEOUT] == 1
    assert statuses[Status.SKIPPED] == 3


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(jobs=0)
    with pytest.raises(ValueError):
        RunConfig(timeout_s=0)


def test_repeated_runs_identical_except_timing():
    program = program_for(SUITE_TEXT)
    cfg = RunConfig(jobs=1)

    def essentials(outcomes):
        return [(o.id, o.file, o.line, o.status, o.expected, o.observed, o.message)
                for o in outcomes]

    assert essentials(run_program(program, cfg)) == essentials(run_program(program, cfg))
