import json
import subprocess
import sys

from hypothesis import given

from conftest import hermitian, rational_matrix
from hadakern.cli import main
from hadakern.matrix import HermitianMatrix, Matrix
from hadakern.scalars import PrimeField
from hadakern.serialization import dump_matrix, load_matrix, matrix_from_json, matrix_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    lines = [json.loads(x) for x in out.out.splitlines() if x.strip()]
    return code, lines, out.err


@given(hermitian(max_n=5))
def test_json_round_trip_gaussian(A):
    B = matrix_from_json(json.loads(dump_matrix(A)))
    assert B == A and B.domain == A.domain and isinstance(B, HermitianMatrix)


@given(rational_matrix())
def test_json_round_trip_rectangular(A):
    B = matrix_from_json(matrix_to_json(A))
    assert B.rows == A.rows and B.shape == A.shape


def test_json_round_trip_prime_field():
    A = Matrix([[1, 2, 3], [4, 0, 1]], PrimeField(5))
    B = matrix_from_json(matrix_to_json(A))
    assert B == A and B.domain == PrimeField(5)


def test_csv_input(tmp_path):
    f = tmp_path / "m.csv"
    f.write_text("1,2\n2,5/2\n")
    A = load_matrix(str(f))
    assert A.rows[1][1] == 2.5 and isinstance(A, HermitianMatrix)


def test_analyze_worked_example(capsys):
    code, lines, _ = run(capsys, "analyze", "example5x5", "--group", "roots:4")
    assert code == 0
    assert lines[0]["pi_min"] == [[1, 2, 4, 5], [3]]
    assert lines[0]["pmp_order"] == 5


def test_analyze_identity(capsys):
    code, lines, _ = run(capsys, "analyze", "identity:4")
    assert code == 0
    assert lines[0]["pi_min"] == [[1], [2], [3], [4]]
    assert lines[0]["simultaneous_kernel"]["dim"] == 0


def test_analyze_hns_counterexample(capsys):
    code, lines, _ = run(capsys, "analyze", "hns-fail-3x3")
    assert code == 0
    assert lines[0]["pmp_order"] == 2
    assert lines[0]["checks"]["hns"].startswith("inapplicable")


def test_verify_toeplitz_reports_expected_failure(capsys):
    code, lines, _ = run(capsys, "verify", "T8")
    assert code == 0
    t3 = next(x for x in lines if x.get("check") == "t3pmp")
    assert t3["status"] == "expected-failure"
    assert lines[-1]["ok"]


def test_verify_t3pmp_subcommand(capsys):
    code, lines, _ = run(capsys, "verify", "t3pmp", "example5x5")
    assert code == 0 and lines[0]["all_equal"]


def test_verify_corpus(capsys):
    code, lines, _ = run(capsys, "verify", "--corpus", "1..25", "--jobs", "2")
    assert code == 0
    assert lines[-1] == {"summary": True, "total": 25, "failed": 0, "ok": True}
    assert [x["seed"] for x in lines[:-1]] == list(range(1, 26))


def test_verify_rejects_non_hermitian_file(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"n": 2, "domain": "rational", "entries": [["1", "2"], ["3", "1"]]}))
    code, _, err = run(capsys, "verify", str(f))
    assert code == 2 and "SymmetryError" in err


def test_parse_failure_exit_code(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    assert run(capsys, "analyze", str(f))[0] == 2
    assert run(capsys, "analyze", "no-such-thing")[0] == 2
    assert run(capsys, "partition", "example5x5", "--group", "cyclic:3/5+4/5i")[0] == 2


def test_property_violation_carries_witness(capsys):
    code, lines, _ = run(capsys, "hns", "hns-fail-3x3")
    assert code == 1 and lines[0]["witness"] == [1, 2, 3]
    code, lines, _ = run(capsys, "pmp", "hns-fail-3x3", "--k", "3")
    assert code == 1 and lines[0]["witness"] == [1, 2, 3]


def test_pmp_psrp_signature_partition_kernel(capsys):
    assert run(capsys, "pmp", "T5", "--order")[1][0]["pmp_order"] == 2
    assert run(capsys, "psrp", "example5x5", "--k", "2")[1][0]["holds"]
    sig = run(capsys, "signature", "T5")[1][0]
    assert sig["signature"] == {"n_plus": 3, "n_zero": 1, "n_minus": 1} and sig["bound_holds"]
    part = run(capsys, "partition", "example5x5", "--stratum", "--group", "circle")[1][0]
    assert part["partition"] == [[1, 2, 4, 5], [3]]
    assert run(capsys, "kernel", "T5")[1][0]["kernel"]["vectors"] == [["1", "-1", "0", "1", "-1"]]
    assert run(capsys, "kernel", "example5x5", "--block-ones")[1][0]["kernel"]["dim"] == 2
    assert run(capsys, "kernel", "ones:3", "--combination", "1,2,3")[1][0]["kernel"]["dim"] == 2
    assert run(capsys, "kernel", "ones:3", "--combination", "1,-2,3")[0] == 2


def test_rectangular_kernel_from_stdin(monkeypatch, capsys):
    import io

    payload = {"rows": 2, "cols": 4, "domain": "rational", "entries": [[1, 1, 2, 2], [1, 2, 1, 2]]}
    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(payload)))
    code, lines, _ = run(capsys, "kernel", "-")
    assert code == 0
    assert lines[0]["kernel"]["dim"] == 1 and lines[0]["partition_formula_exact"] is False


def test_generate_and_reload(tmp_path, capsys):
    out = tmp_path / "g.json"
    code = main(["generate", "signature", "--params", "n=4,k=2,n_plus=2,n_minus=1", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert all(payload["certificate"].values()) and payload["eps"] == "1/16"
    m = tmp_path / "m.json"
    m.write_text(json.dumps(payload["matrix"]))
    code, lines, _ = run(capsys, "pmp", str(m), "--order")
    assert lines[0]["pmp_order"] == 2
    assert run(capsys, "generate", "psrp-gap", "--params", "n=5,l=3,k=2")[0] == 0
    assert run(capsys, "generate", "random-hns", "--params", "n=5", "--seed", "4")[0] == 0
    assert run(capsys, "generate", "psrp-gap", "--params", "n=5,l=1,k=2")[0] == 2


def test_table_format(capsys):
    assert main(["pmp", "T5", "--order", "--format", "table"]) == 0
    assert "pmp_order" in capsys.readouterr().out


def test_domain_override_to_float(capsys):
    code, lines, _ = run(capsys, "partition", "example5x5", "--domain", "float", "--group", "roots:4")
    assert code == 0 and lines[0]["partition"] == [[1, 2, 4, 5], [3]]


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "hadakern.cli", "pmp", "hns-fail-3x3", "--order"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["first_violation"] == [1, 2, 3]
