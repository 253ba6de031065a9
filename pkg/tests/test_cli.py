import json
import subprocess
import sys

import pytest

from zinq.cli import main


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


# -- small commands ------------------------------------------------------------------

@pytest.mark.parametrize(
    "argv, output",
    [
        (("hilbert", "7", "7", "2"), "-1"),
        (("hilbert", "-1", "-1", "inf"), "-1"),
        (("hilbert", "1", "13", "5"), "1"),
        (("hilbert", "-3/7", "5", "7"), "-1"),
    ],
)
def test_hilbert(capsys, argv, output):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip() == output


def test_hilbert_usage_errors(capsys):
    assert run(capsys, "hilbert", "0", "1", "2")[0] == 2
    assert run(capsys, "hilbert", "1", "1", "4")[0] == 2
    assert run(capsys, "hilbert", "1", "x", "3")[0] == 2
    assert run(capsys, "hilbert", "1/0", "1", "3")[0] == 2
    assert run(capsys)[0] == 2


def test_ramified(capsys):
    code, out, _ = run(capsys, "ramified", "7", "7")
    assert code == 0
    assert out.splitlines() == ["Delta = {2, 7}", "infinite place ramified: no"]
    code, out, _ = run(capsys, "ramified", "-1", "-1")
    assert out.splitlines() == ["Delta = {2}", "infinite place ramified: yes"]


def test_in_t_and_decompose(capsys):
    assert run(capsys, "in-t", "7", "7", "1/3")[:2] == (0, "true\n")
    assert run(capsys, "in-t", "7", "7", "1/2")[:2] == (1, "false\n")
    assert run(capsys, "in-t", "-1", "-7", "0")[0] == 2
    code, out, _ = run(capsys, "decompose", "7", "7", "5")
    assert (code, out) == (0, "s=7 s'=-3 n=1\n")
    code, out, _ = run(capsys, "decompose", "7", "7", "1/2")
    assert code == 1 and out.startswith("NOT IN T")


def test_zp_gen(capsys):
    code, out, _ = run(capsys, "zp-gen", "3")
    assert code == 0
    assert out.splitlines() == ["first: (a,b)=(3,2) Delta={2, 3}", "second: (a,b)=(3,17) Delta={3, 17}"]
    assert run(capsys, "zp-gen", "9")[0] == 2


# -- classify / prove / refute / check ----------------------------------------------------

def test_classify(capsys, tmp_path):
    out_file = tmp_path / "c.json"
    code, out, _ = run(capsys, "classify", "5", "--out", str(out_file))
    assert code == 0 and out.startswith("INTEGER (") and out.rstrip().endswith("witnesses verified)")
    assert json.loads(out_file.read_text())["kind"] == "witness_bundle"
    code, out, _ = run(capsys, "classify", "1/2")
    assert (code, out) == (1, "NONINTEGER p=2 (a,b)=(7,7)\n")
    code, out, _ = run(capsys, "classify", "-2311/7")
    assert (code, out) == (1, "NONINTEGER p=7 (a,b)=(7,3)\n")


def test_classify_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "classify", "5/1", "--seed", "42", "--out", str(a))
    run(capsys, "classify", "5/1", "--seed", "42", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_prove_and_refute(capsys, tmp_path):
    code, out, _ = run(capsys, "prove", "5", "7", "7")
    cert = json.loads(out)
    assert code == 0 and cert["formula_id"] == "T1" and cert["payload"]["n"] == 1
    code, out, _ = run(capsys, "prove", "--formula", "t2", "-12", "1/3", "-5/2")
    assert code == 0 and json.loads(out)["formula_id"] == "T2"
    assert run(capsys, "prove", "1/2", "7", "7")[0] == 1
    code, out, _ = run(capsys, "refute", "--formula", "T2", "1/11")
    payload = json.loads(out)["payload"]
    assert code == 0 and (payload["p"], payload["a"], payload["b"]) == (11, "8", "1")
    assert run(capsys, "refute", "4")[0] == 1


def test_check_round_trip(capsys, tmp_path):
    cert = tmp_path / "w.json"
    assert run(capsys, "prove", "5", "7", "7", "--out", str(cert))[0] == 0
    assert run(capsys, "check", str(cert), "5")[:2] == (0, "VALID\n")
    assert run(capsys, "check", str(cert), "6")[:2] == (1, "INVALID\n")

    data = json.loads(cert.read_text())
    data["payload"]["x1"] = "9/2" if data["payload"]["x1"] != "9/2" else "11/2"
    cert.write_text(json.dumps(data))
    assert run(capsys, "check", str(cert), "5")[:2] == (1, "INVALID\n")

    data["version"] = 99
    cert.write_text(json.dumps(data))
    code, out, _ = run(capsys, "check", str(cert), "5")
    assert code == 1 and out.startswith("INVALID:")


def test_check_refutation(capsys, tmp_path):
    cert = tmp_path / "r.json"
    run(capsys, "refute", "1/3", "--out", str(cert))
    assert run(capsys, "check", str(cert), "1/3")[:2] == (0, "VALID\n")
    assert run(capsys, "check", str(cert), "1/5")[:2] == (1, "INVALID\n")


def test_check_io_errors(capsys, tmp_path):
    assert run(capsys, "check", str(tmp_path / "missing.json"), "1")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "check", str(bad), "1")[0] == 2


# -- verify-lemmas -------------------------------------------------------------------------------

def test_verify_lemmas(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify-lemmas", "--json", str(report), "--figures", str(tmp_path / "figs"))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "lemma\tstatus\tinstances\tfailures"
    rows = [line.split("\t") for line in lines[1:5]]
    assert [r[0] for r in rows] == ["U_q", "intersection_of_T", "some_Ts", "cs_structure"]
    assert all(r[1] == "PASS" and r[3] == "0" for r in rows)
    assert all(line.startswith("figure\t") for line in lines[5:]) and len(lines) == 7
    data = json.loads(report.read_text())
    assert all(d["passed"] for d in data) and "wall_time" not in data[0]


def test_verify_lemmas_bound(capsys):
    code, _, err = run(capsys, "verify-lemmas", "--max-q", "100000")
    assert code == 2 and "budget exceeded" in err


def test_verify_lemmas_timing(capsys, tmp_path):
    report = tmp_path / "r.json"
    run(capsys, "verify-lemmas", "--max-q", "16", "--max-p", "20", "--json", str(report), "--timing")
    assert all("wall_time" in d for d in json.loads(report.read_text()))


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "zinq", "hilbert", "7", "7", "2"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "-1"
