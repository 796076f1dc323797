import json
import subprocess
import sys

import pytest
from hypothesis import given, settings

from spdetect.cli import main
from spdetect.fsaio import ParseError, export_dot, parse_fsa, print_fsa
from spdetect.constructions import build_observer

from conftest import FIXTURES, fsas, load

FIXTURE_NAMES = ["s1", "s2", "s3"]
VERDICT_KEYS = {"property", "method", "holds", "conditions", "stats"}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def path(name):
    return str(FIXTURES / f"{name}.fsa")


# -- text format -------------------------------------------------------------

@pytest.mark.parametrize(
    "text, line",
    [
        ("states a\nbogus x\n", 2),
        ("states a\ninitial b\n", 2),
        ("states a\nevent t s\n\ntrans a u a\n", 4),
        ("states a a\n", 1),
        ("states a\nevent t s\ntrans a t a\ntrans a t a\n", 4),
        ("event t s\n", 1),
        ("states a\nspec a b\n", 2),
        ("states a\nevent t s\nevent t -\n", 3),
        ("states a\ninitial a\ninitial a\n", 3),
        ("states a?\n", 1),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_fsa(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_comments_and_order():
    doc = parse_fsa("# head\ntrans a t b  # late\nevent t -\nstates a b\ninitial a\n")
    assert doc.fsa.transitions == ((0, 0, 1),)
    assert doc.fsa.labels == (None,)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_round_trip(name):
    doc = load(name)
    text = print_fsa(doc)
    again = parse_fsa(text)
    assert again == doc
    assert print_fsa(again) == text


@settings(max_examples=150, deadline=None)
@given(fsas())
def test_round_trip(fsa):
    assert parse_fsa(print_fsa(fsa)).fsa == fsa


def test_dot_observer_s1(s1):
    assert export_dot(build_observer(s1)) == (
        "digraph observer {\n"
        "  rankdir=LR;\n"
        '  "{x0}" [shape=doublecircle];\n'
        '  "{x1,x2}" [shape=ellipse];\n'
        '  "{x0}" -> "{x1,x2}" [label="a"];\n'
        '  "{x1,x2}" -> "{x1,x2}" [label="a"];\n'
        "}\n"
    )


def test_dot_cc_eps_s3(capsys):
    code, out, _ = run(capsys, "dot", path("s3"), "--structure", "cc-eps")
    assert code == 0
    dotted = [line for line in out.splitlines() if "dotted" in line]
    assert dotted == [
        '  "(x1,x2)" -> "(x1,x1)" [label="ε", style=dotted];',
        '  "(x2,x1)" -> "(x1,x1)" [label="ε", style=dotted];',
    ]


@pytest.mark.parametrize("structure", ["observer", "detector", "cc", "cc-eps"])
def test_dot_every_structure(capsys, structure):
    for name in FIXTURE_NAMES:
        code, out, _ = run(capsys, "dot", path(name), "--structure", structure)
        assert code == 0 and out.startswith("digraph ") and out.endswith("}\n")


# -- check ---------------------------------------------------------------

@pytest.mark.parametrize(
    "argv, code",
    [
        (["check", "spd", path("s1")], 1),
        (["check", "spd", path("s2"), "--method", "all"], 1),
        (["check", "spd", path("s3"), "--method", "cc"], 1),
        (["check", "spdd", path("s3")], 1),
        (["check", "spdd", path("s3"), "--spec", "(x0,x2)"], 0),
        (["check", "spdd", path("s2"), "--method", "legacy-observer"], 0),
        (["check", "spd", path("s2"), "--method", "legacy-detector"], 0),
        (["check", "sd", path("s1")], 1),
        (["check", "spd", path("s1"), "--method", "observer", "--max-observer-nodes", "1"], 3),
    ],
)
def test_exit_codes(capsys, argv, code):
    got, out, _ = run(capsys, *argv)
    assert got == code
    report = json.loads(out)
    expected = {0: True, 1: False, 3: None}[code]
    assert report["holds"] is expected


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "spd", "/nonexistent.fsa"],
        ["check", "spdd", path("s3"), "--method", "detector"],
        ["check", "spdd", path("s3"), "--spec", "(x0,zz)"],
        ["check", "spdd", path("s3"), "--spec", "nonsense"],
        ["check", "spd", path("s1"), "--max-observer-nodes", "0"],
        ["fuzz", "--max-states", "9"],
        ["fuzz", "--count", "-1"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.fsa"
    bad.write_text("states a\nfrobnicate\n")
    code, _, err = run(capsys, "check", "spd", str(bad))
    assert code == 2 and "line 2" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["check", "nope", path("s1")])
    assert info.value.code == 2


@pytest.mark.parametrize("name", FIXTURE_NAMES)
@pytest.mark.parametrize("prop", ["spd", "spdd", "sd"])
def test_report_schema(capsys, name, prop):
    code, out, _ = run(capsys, "check", prop, path(name), "--method", "all", "--no-timings")
    report = json.loads(out)
    keys = {"file", "property", "methods", "holds", "assumption1", "assumption1_violated", "verdicts"}
    assert keys <= set(report)
    assert ("spec" in report) == (prop == "spdd")
    assert set(report["assumption1"]) == {"deadlock_free", "deadlock_witness", "divergence_free", "divergence_witness"}
    assert len(report["verdicts"]) == len(report["methods"])
    for v in report["verdicts"]:
        assert VERDICT_KEYS <= set(v)
        assert "seconds" not in v["stats"]
        for c in v["conditions"]:
            assert set(c) == {"id", "fired", "witness"}
            assert (c["witness"] is not None) == c["fired"]
    assert code == (0 if report["holds"] else 1)


def test_report_content_s2(capsys):
    _, out, err = run(capsys, "check", "spd", path("s2"), "--method", "legacy-detector")
    report = json.loads(out)
    assert report["assumption1_violated"] is True
    assert report["assumption1"]["deadlock_witness"] == "x1"
    assert report["assumption1"]["divergence_witness"] == ["x2", "x2"]
    assert "warning" in err


def test_report_witness_s2(capsys):
    _, out, _ = run(capsys, "check", "spd", path("s2"), "--method", "observer")
    cond = json.loads(out)["verdicts"][0]["conditions"]
    div = next(c for c in cond if c["id"] == "divergence")
    assert div["witness"]["node"] == "{x1,x2}"
    assert div["witness"]["lasso"]["cycle"] == [["x2", "t4", "x2"]]


def test_check_is_reproducible(capsys):
    outs = {run(capsys, "check", "spd", path("s3"), "--method", "all", "--no-timings")[1] for _ in range(2)}
    assert len(outs) == 1


# -- fuzz ----------------------------------------------------------------

def test_fuzz_empty(capsys):
    code, out, _ = run(capsys, "fuzz", "--count", "0")
    assert code == 0
    assert json.loads(out) == {"count": 0, "seed": 0, "max_states": 6, "discrepancies": []}


def test_fuzz_is_byte_reproducible():
    argv = [sys.executable, "-m", "spdetect.cli", "fuzz", "--count", "40", "--seed", "11"]
    a = subprocess.run(argv, capture_output=True, check=False)
    b = subprocess.run(argv, capture_output=True, check=False)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    assert json.loads(a.stdout)["discrepancies"] == []
