import json

import pytest

from grasscat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    data = json.loads(out)
    assert data["schema"] == "grasscat/1"
    return data


def test_root_example(capsys):
    data = run_json(capsys, "root", "--kn", "3,9", "--profile", "[[3,5,9],[2,5,8],[1,4,7],[1,4,6]]")
    assert data["q"] == "2"
    assert data["type"] == "RealRoot"
    assert data["x"] == [2, 1, 1, 2, 2, 1, 1, 1, 1]
    assert data["phi"] == "4β+2α1+5α2+8α3+6α4+4α5+3α6+2α7+α8"


def test_root_accepts_json_object_and_bar_notation(capsys):
    a = run_json(capsys, "root", "--kn", "3,9", "--profile", '{"n":9,"k":3,"rows":[[3,5,9],[2,5,8]]}')
    b = run_json(capsys, "root", "--kn", "3,9", "--profile", "359|258")
    assert a == b


def test_census_count(capsys):
    code, out, _ = run(capsys, "census", "--kn", "3,9", "--count-only")
    assert code == 0 and out.strip() == "225"


def test_census_tsv(capsys):
    code, out, _ = run(capsys, "census", "--kn", "3,9")
    lines = out.strip().splitlines()
    assert lines[0] == "# seed=0"
    assert lines[1].split("\t") == ["profile", "q", "root_type", "tube_id"]
    body = [line.split("\t") for line in lines[2:]]
    assert len(body) == 225
    assert sum(r[2] == "ImaginaryRoot" for r in body) == 9
    assert sum(r[2] == "RealRoot" for r in body) == 216


def test_boxes_figure1(capsys):
    data = run_json(
        capsys, "boxes", "--kn", "7,16", "--upper", "4,5,8,10,13,14,16", "--lower", "1,2,6,7,11,13,15"
    )
    assert data["count"] == 4
    assert data["branching_points"] == [5, 10, 14, 16]


def test_collapse_and_shift(capsys):
    data = run_json(
        capsys, "collapse", "--kn", "7,16", "--upper", "4,5,8,10,13,14,16", "--lower", "1,2,6,7,11,13,15"
    )
    assert (data["n"], data["upper"], data["lower"]) == (12, [3, 4, 7, 8, 10, 12], [1, 2, 5, 6, 9, 11])
    data = run_json(capsys, "shift", "--kn", "3,9", "--profile", "157|369|248", "--a", "1")
    assert data["profile"] == "268|147|359"
    data = run_json(
        capsys,
        "shift",
        "--kn",
        "7,16",
        "--profile",
        "[[4,5,8,10,13,14,16],[1,2,6,7,11,13,15]]",
        "--a",
        "2",
        "--collapsed",
    )
    assert data["rows"] == [[2, 6, 7, 11, 13, 14, 16], [1, 4, 5, 8, 10, 13, 15]]


def test_tau_and_tube(capsys):
    data = run_json(capsys, "tau", "--kn", "3,9", "--profile", "359|246")
    assert data["tau_inverse"] == "135|247"
    data = run_json(capsys, "tube", "--kn", "3,9", "--start", "368|257|146")
    assert data["period"] == 3
    assert data["row"] == ["368|257|146", "359|248|137", "269|158|479"]
    code, out, _ = run(capsys, "tube", "--kn", "3,9", "--start", "124", "--format", "dot")
    assert code == 0 and out.startswith("digraph tube {")
    assert '"239" -> "124"' in out


def test_ar_command(capsys):
    data = run_json(capsys, "ar", "--kn", "3,9", "--subset", "147")
    assert (data["other_end"], data["middle"]) == ("258|369", "258|147|369")
    data = run_json(capsys, "ar", "--kn", "3,9", "--subset", "135", "--split", "1")
    assert data["split"] == {"summand": "235", "complement": "146|357"}


def test_classify_profile(capsys):
    data = run_json(capsys, "classify-profile", "--kn", "3,9", "--profile", "169|147|358", "--oracle")
    assert data["configuration"] == "No"
    assert data["oracle"]["indecomposable"] is False
    data = run_json(capsys, "classify-profile", "--kn", "3,9", "--profile", "147|258")
    assert data["configuration"] == "Yes" and data["three_boxes"] is True


def test_enumerate_commands(capsys):
    data = run_json(capsys, "enumerate", "rank2-boxes", "--k", "4", "--n", "8", "--count-only")
    assert data["count"] == data["formula"] == 120
    code, out, _ = run(capsys, "enumerate", "rank2-boxes", "--k", "3", "--n", "6")
    assert out.split() == ["135|246", "246|135"]
    data = run_json(capsys, "enumerate", "canonical", "--n", "9", "--count-only")
    assert data["count"] == 72
    data = run_json(capsys, "enumerate", "imaginary", "--n", "9", "--format", "json")
    assert data["count"] == 12 and sum(data["rigid_pattern"]) == 9


def test_oracle_check(capsys):
    data = run_json(capsys, "oracle-check", "--kn", "3,9", "--profile", "369|258|147")
    assert data["primes_agree"]
    assert all(r["ext1_self"] > 0 and r["indecomposable"] for r in data["results"])


def test_exit_codes(capsys):
    assert run(capsys, "root", "--kn", "3,9")[0] == 1
    assert run(capsys, "no-such-command")[0] == 1
    code, _, err = run(capsys, "root", "--kn", "3,9", "--profile", "[[3,5]]")
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "root", "--kn", "5,9", "--profile", "12345")
    assert code == 2 and "allow-large-k" in err
    assert run(capsys, "--allow-large-k", "root", "--kn", "5,9", "--profile", "12345")[0] == 0
    assert run(capsys, "tau", "--kn", "3,9", "--profile", "147|147|1x")[0] == 2
    assert run(capsys, "census", "--kn", "3,8")[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_output_is_deterministic(capsys):
    args = ("tube", "--kn", "3,9", "--start", "268|157", "--seed", "3")
    first = run(capsys, *args)
    assert first == run(capsys, *args)
