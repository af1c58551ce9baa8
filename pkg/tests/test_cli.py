import csv
import io
import json
import subprocess
import sys

import pytest

from padicds.cli import EXIT_COMPUTE, EXIT_INPUT, EXIT_OK, main
from padicds.psi import parse_rational

HALF = '{"kind":"rule","name":"constant","value":"1/2"}'
PSI_1 = '{"kind":"rule","name":"psi_k","p":2,"k":1}'


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    assert code == EXIT_OK, err
    return json.loads(out)


def test_measure():
    doc = run_json("measure", "--p", "3", "--n", "4", "--set", "A",
                   "--psi", '{"kind":"table","entries":[[4,"4/9"]]}')
    assert doc["measure"] == "4/9"
    assert doc["balls"] == [[2, 2], [2, 3], [2, 6], [2, 7]]


def test_spectrum():
    doc = run_json("spectrum", "--p", "2", "--bits", "101", "--N", "60")
    assert (doc["predicted"], doc["window"], doc["equal"]) == ("5/16", "5/16", True)


def test_mertens():
    doc = run_json("mertens", "--x", "10,100")
    assert doc["rows"][0]["sum"] == "247/210"
    assert abs(doc["rows"][1]["residual"]) <= doc["rows"][1]["bound"]


def test_window_rows_monotone():
    doc = run_json("window", "--p", "2", "--set", "B", "--psi", PSI_1, "--N", "60",
                   "--ladder", "1,10,30")
    assert [r["measure"] for r in doc["rows"]] == ["1/4"] * 3
    assert doc["monotone"] and doc["stabilized"]


def test_lambda_and_qia():
    doc = run_json("lambda", "--n", "3", "--psi", '{"kind":"table","entries":[[3,"1/4"]]}')
    assert doc["lambda"] == "1/3" and doc["equal"]
    doc = run_json("qia", "--psi", HALF, "--K", "2")
    assert [r["N"] for r in doc["rows"]] == [3, 7]
    assert doc["rows"][0]["statistic"] == "50/69"


def test_pv_and_et():
    doc = run_json("pv", "--psi", HALF, "--nmax", "30")
    assert doc["pairs"] == 435 and doc["violations"] == []
    assert doc["max_ratio_over_rhs"] == "17/12"
    doc = run_json("et", "--psi", HALF, "--X", "1", "--Y", "10", "--threshold", "1/2", "--K", "3")
    assert [2, 4] in doc["pairs"] and doc["rescale_contained"]
    doc = run_json("et", "--psi", HALF, "--X", "1", "--Y", "40")
    assert doc["count"] == 0 and doc["weighted_sum"] == "0/1"


def test_simulate_is_byte_identical():
    argv = ["simulate", "--p", "2", "--psi", PSI_1, "--N", "60", "--trials", "20000", "--seed", "9"]
    _, a, _ = run(*argv)
    _, b, _ = run(*argv)
    assert a == b
    doc = json.loads(a)
    assert doc["exact"] == "1/4" and doc["within_5se"]


def test_every_rational_round_trips():
    doc = run_json("pv", "--psi", '{"kind":"rule","name":"constant","value":"1/5"}', "--nmax", "12")

    def walk(v):
        if isinstance(v, str) and "/" in v:
            assert parse_rational(v).__str__() in (v, v.split("/")[0])
            assert f"{parse_rational(v).numerator}/{parse_rational(v).denominator}" == v
        elif isinstance(v, dict):
            for x in v.values():
                walk(x)
        elif isinstance(v, list):
            for x in v:
                walk(x)

    walk(doc)
    assert doc["violations"] == [[3, 4], [6, 8], [9, 12]]


def test_csv_output():
    code, out, _ = run("qia", "--psi", HALF, "--K", "3", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["N"] for r in rows] == ["3", "7", "10"]


def test_psi_from_file(tmp_path):
    path = tmp_path / "psi.json"
    path.write_text(PSI_1)
    doc = run_json("measure", "--p", "2", "--n", "6", "--psi", str(path))
    assert doc["measure"] == "1/4"


@pytest.mark.parametrize(
    "argv",
    [
        ["measure", "--p", "4", "--n", "3", "--psi", HALF],
        ["measure", "--p", "2", "--n", "0", "--psi", HALF],
        ["measure", "--p", "2", "--n", "3", "--psi", '{"kind":"table","entries":[[3,"2/4"]]}'],
        ["measure", "--p", "2", "--n", "3", "--psi", "no-such-file.json"],
        ["lambda", "--n", "3", "--psi", '{"kind":"rule","name":"constant","value":"2/3"}'],
        ["window", "--p", "2", "--psi", HALF, "--N", "5", "--ladder", "9"],
        ["et", "--psi", HALF, "--X", "5", "--Y", "4"],
        ["spectrum", "--p", "2", "--bits", "10x", "--N", "5"],
        ["bogus"],
    ],
)
def test_invalid_input_exit_2(argv):
    code, out, _ = run(*argv)
    assert code == EXIT_INPUT and out == ""


def test_computation_error_exit_3():
    code, _, err = run("qia", "--psi", '{"kind":"rule","name":"constant","value":"0/1"}',
                       "--cap", "50")
    assert code == EXIT_COMPUTE and "error" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "padicds", "mertens", "--x", "3"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["rows"][0]["sum"] == "5/6"
