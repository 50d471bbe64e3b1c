import json

import pytest

from feynkit import cli


def run(argv, capsys):
    status = cli.main(argv)
    return status, capsys.readouterr().out


@pytest.mark.parametrize("argv,expected", [
    (["trees", "count", "--n", "4"], "16\n"),
    (["trees", "count", "--n", "6", "--valency", "1,3"], "90\n"),
    (["mm", "hz", "--m", "2"], "2x^3+x\n"),
    (["renorm", "classify", "--term", "phi^4", "--d", "4"], "critical\n"),
    (["gaussian", "moment", "--k", "4", "--b", "2"], "3/4\n"),
    (["graphs", "count", "--vertices", "2", "--edges", "3"], "2/3\n"),
])
def test_examples(argv, expected, capsys):
    assert run(argv, capsys) == (0, expected)


def test_asym_expand_exact(capsys):
    status, out = run(["asym", "expand", "--f", "[0,0,1/2,0,1/24]", "--terms", "3", "--format", "json"], capsys)
    assert status == 0
    assert [r["coefficient"] for r in json.loads(out)] == [1, "-1/8", "35/384", "-385/3072"]


def test_cft_checks(capsys):
    status, out = run(["cft", "virasoro-check", "--n", "3", "--m", "-3", "--deg", "5", "--format", "json"], capsys)
    assert status == 0 and json.loads(out)["pass"] is True
    status, out = run(["cft", "eta-check", "--tau", "i"], capsys)
    assert status == 0 and "pass: true" in out


def test_qm_defaults_to_csv(capsys):
    status, out = run(["qm", "spectrum", "--count", "3"], capsys)
    assert status == 0
    assert out.splitlines()[0] == "n,E" and len(out.splitlines()) == 4


@pytest.mark.parametrize("argv", [
    ["renorm", "bubble", "--d", "4", "--p", "1", "--m", "1", "--format", "json"],
    ["mm", "census", "--m", "3", "--format", "csv"],
    ["mm", "wigner", "--m", "4", "--N", "20", "--samples", "4", "--seed", "7"],
])
def test_repeat_output_is_identical(argv, capsys):
    first = run(argv, capsys)
    assert run(argv, capsys) == first


def test_census_independent_of_jobs(capsys):
    one = run(["mm", "census", "--m", "4", "--jobs", "1"], capsys)
    two = run(["mm", "census", "--m", "4", "--jobs", "2"], capsys)
    assert one == two


def test_number_formats():
    from fractions import Fraction
    assert cli.fmt(Fraction(-3, 8)) == "-3/8"
    assert cli.fmt(Fraction(4)) == "4"
    assert cli.fmt(0.1 + 0.2) == "0.3"
    assert cli.fmt(1 / 3) == "0.333333333333333"


@pytest.mark.parametrize("argv", [
    ["trees", "count"],
    ["renorm", "bubble", "--d", "5", "--p", "1"],
    ["cft", "eta-check", "--tau", "-i"],
    ["verify-all", "--only", "99"],
    ["asym", "expand", "--f", "[0,0,1/2", "--terms", "2"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code != 0


def test_invalid_value_exit_status(capsys):
    assert cli.main(["trees", "count", "--n", "0"]) != 0


def test_verify_all_schema(capsys):
    status, out = run(["verify-all", "--only", "1", "--format", "json"], capsys)
    assert status == 0
    rows = json.loads(out)
    assert rows
    for r in rows:
        assert {"criterion", "expected", "actual", "residual", "pass"} <= set(r)
        assert r["criterion"] == 1 and r["pass"] is True


def test_verify_all_text_summary(capsys):
    status, out = run(["verify-all", "--only", "1,2"], capsys)
    assert status == 0
    lines = out.splitlines()
    assert lines[0].split()[:2] == ["[PASS]", "1."] and lines[1].split()[:2] == ["[PASS]", "2."]
    assert lines[-1] == "2/2 criteria pass"
