import io
import json
import subprocess
import sys

import pytest

from cuntz.cli import EXIT_FALSE, EXIT_TRUE, EXIT_UNKNOWN, EXIT_USAGE, _exit_for, run
from cuntz.core import unknown


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def answers(text):
    return dict(line.split("=", 1) for line in text.splitlines())


def test_member_true():
    code, out, _ = cli("--spec", "zdd23", "--query", "member", "--lhs", "const 1")
    assert code == 0
    assert out.splitlines()[-1] == "answer: true"


def test_member_false_prints_reason():
    code, out, _ = cli("--spec", "zdd23", "--query", "member", "--lhs", "const 1/2")
    assert code == 1
    assert "reason: f(1)=1/2 ∉ (1/3)N̄" in out


def test_infinity_not_way_below_itself():
    code, _, _ = cli("--spec", "lsc-interval-nbar", "--query", "waybelow",
                     "--lhs", "const inf", "--rhs", "const inf")
    assert code == 1


def test_machine_format():
    code, out, _ = cli("--spec", "nccw-11", "--query", "approx", "--lhs", "inf | const inf",
                       "--count", "2", "--format", "machine")
    assert code == 0
    kv = answers(out)
    assert kv["approximant_1"] == "1 | const 1"
    assert kv["approximant_2"] == "2 | const 2"
    assert kv["answer"] == "true"


@pytest.mark.parametrize("lhs, rhs, code", [("1@0", "2@1", 0), ("3@0", "2@1", 1)])
def test_limit_leq(lhs, rhs, code):
    assert cli("--spec", "c2", "--query", "limit-leq", "--lhs", lhs, "--rhs", rhs)[0] == code


def test_sum():
    code, out, _ = cli("--spec", "c2", "--query", "add", "--lhs", "1/2", "--rhs", "soft 1/2",
                       "--format", "machine")
    assert code == 0
    assert answers(out)["sum"] == "soft 1"


def test_compacts():
    _, out, _ = cli("--spec", "zdd23", "--query", "compacts", "--bound", "2", "--format", "machine")
    lines = out.splitlines()
    assert [l for l in lines if l.startswith("compact=")] == [
        "compact=const 0", "compact=const 1", "compact=const 2"]


def test_check_axioms():
    code, out, _ = cli("--spec", "nbar2", "--query", "check-axioms", "--trials", "50",
                       "--format", "machine")
    assert code == 0
    assert answers(out)["violations"] == "0"


def test_graph_iso():
    code, out, _ = cli("--spec", "loop-graph-nbar", "--query", "graph-iso", "--trials", "20")
    assert code == 0


def test_suite_verb():
    code, out, _ = cli("--query", "suite", "--lhs", "graph-iso", "--format", "machine")
    assert code == 0
    assert answers(out)["suite"] == "graph-decomposition"


@pytest.mark.parametrize("argv", [
    [],
    ["--query", "leq"],
    ["--spec", "nbar", "--query", "nope"],
    ["--spec", "nbar", "--query", "leq", "--lhs", "1"],
    ["--query", "suite", "--lhs", "missing"],
    ["--spec", "no-such-preset", "--query", "leq", "--lhs", "1", "--rhs", "2"],
    ["--spec", "nbar", "--query", "limit-leq", "--lhs", "1@0", "--rhs", "1@0"],
])
def test_usage_errors(argv):
    assert cli(*argv)[0] == EXIT_USAGE


def test_parse_error():
    code, _, err = cli("--spec", "nbar", "--query", "leq", "--lhs", "x", "--rhs", "1")
    assert code == EXIT_USAGE
    assert err.startswith("parse error:")


def test_spec_file_parse_error_reports_line(tmp_path):
    p = tmp_path / "s.json"
    p.write_text('{\n"kind": scalar\n}\n')
    code, _, err = cli("--spec", str(p), "--query", "leq", "--lhs", "1", "--rhs", "2")
    assert code == EXIT_USAGE
    assert f"{p}:2" in err


def test_member_only_descriptor(tmp_path):
    spec = json.dumps({"kind": "two_dim_dimension_drop", "constraints": {"x0": 2, "x1": 3}})
    assert cli("--spec", spec, "--query", "member", "--lhs", "x0: 1/2; x1: 2/3")[0] == 0
    assert cli("--spec", spec, "--query", "member", "--lhs", "x0: 1/3; x1: 2/3")[0] == 1
    assert cli("--spec", spec, "--query", "leq", "--lhs", "1", "--rhs", "2")[0] == EXIT_USAGE


def test_exit_code_trichotomy():
    assert (EXIT_TRUE, EXIT_FALSE, EXIT_UNKNOWN) == (0, 1, 2)
    assert _exit_for(unknown(5)) == (2, "unknown@5")


def test_machine_output_is_deterministic():
    argv = ["--spec", "lsc-interval-nbar2", "--query", "check-axioms", "--trials", "30",
            "--seed", "7", "--format", "machine"]
    assert cli(*argv) == cli(*argv)


@pytest.mark.parametrize("spec, text", [
    ("lsc-interval-nbar", "[0,1/2)=2, {1/2}=1, (1/2,1]=2"),
    ("lsc-loop-nbar2", "v: (0,1); edge e: (0,1/3]=(1,1), (1/3,1)=(2,inf)"),
    ("c6", "soft 5/6"),
    ("nccw-11", "3 | const 3"),
])
def test_printed_elements_reparse(spec, text):
    _, out, _ = cli("--spec", spec, "--query", "approx", "--lhs", text, "--count", "3",
                    "--format", "machine")
    kv = [l.split("=", 1) for l in out.splitlines()]
    printed = [v for k, v in kv if k == "element" or k.startswith("approximant_")]
    for p in printed:
        code, out2, _ = cli("--spec", spec, "--query", "leq", "--lhs", p, "--rhs", p,
                            "--format", "machine")
        assert code == 0
        assert answers(out2)["lhs"] == p


def test_no_floats_in_output():
    _, out, _ = cli("--spec", "c6", "--query", "approx", "--lhs", "soft 1", "--count", "6")
    assert "." not in out.replace("...", "")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cuntz", "--spec", "nbar", "--query", "leq",
                        "--lhs", "2", "--rhs", "3"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.splitlines()[-1] == "answer: true"
