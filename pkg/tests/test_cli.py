import csv
import io
import json
import math

import pytest

from orthoconv import __version__
from orthoconv.cli import parse_number, render_report, run, write_report, UsageError
from orthoconv.verify import IdentityId, SampleConfig, verify


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_eval_meixner_pollaczek_degree_one():
    code, out, _ = call("eval", "--family", "meixner-pollaczek", "--lambda", "1", "--phi", "1.5707963267948966", "--n", "1", "--x", "0.3")
    assert code == 0
    assert float(out) == pytest.approx(0.6, abs=1e-15)


def test_eval_complex_parameters():
    code, out, _ = call(
        "eval", "--family", "continuous-hahn", "--a", "0.5+0.2i", "--b", "0.7-0.1i", "--c", "0.5-0.2i", "--d", "0.7+0.1i",
        "--n", "2", "--x", "0.4",
    )
    assert code == 0 and math.isfinite(float(out))


@pytest.mark.parametrize(
    "argv",
    [
        (),
        ("frobnicate",),
        ("eval", "--family", "nope", "--n", "1", "--x", "0"),
        ("eval", "--family", "meixner-pollaczek", "--lambda", "1", "--n", "1", "--x", "0.3"),
        ("eval", "--family", "meixner-pollaczek", "--lambda", "x", "--phi", "1", "--n", "1", "--x", "0.3"),
        ("eval", "--family", "meixner-pollaczek", "--lambda", "-1", "--phi", "1", "--n", "1", "--x", "0.3"),
        ("verify", "--identity", "T9_9"),
        ("verify",),
        ("verify", "--identity", "T3_4", "--samples", "0"),
        ("quad", "--nodes", "3"),
        ("coeff", "--kind", "cgc-uq-su2-n0", "--N1", "2", "--N2", "2", "--j", "3", "--n1", "1", "--n2", "2", "--q", "0.5"),
    ],
)
def test_usage_errors_exit_two(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and err.startswith("orthoconv: error")


def test_failed_verification_exits_one():
    code, out, _ = call("verify", "--identity", "T3_4", "--samples", "3", "--tol", "1e-300")
    assert code == 1 and json.loads(out)["pass"] is False


def test_verify_t410_example():
    code, out, _ = call("verify", "--identity", "T4_10", "--samples", "200", "--seed", "42", "--tol", "1e-8", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] is True
    assert doc["identity"] == "T4_10" and len(doc["samples"]) == 200
    assert doc["max_residual"] <= 1e-8


def test_json_round_trip(tmp_path):
    rep = verify("C3_6ii", SampleConfig(seed=9, count=6))
    path = tmp_path / "r.json"
    write_report(rep, str(path), "json")
    doc = json.loads(path.read_text())
    assert [s["residual"] for s in doc["samples"]] == [s.scaled_residual for s in rep.samples]
    assert doc["max_residual"] == rep.max_scaled_residual
    assert doc["pass"] == (doc["max_residual"] <= doc["tolerance"])
    for s, r in zip(doc["samples"], rep.samples):
        assert complex(s["lhs"]["re"], s["lhs"]["im"]) == r.lhs
        assert s["params"] == r.parameters


def test_csv_rows_and_md():
    rep = verify("C3_8ii", SampleConfig(seed=2, count=9))
    rows = list(csv.reader(io.StringIO(render_report(rep, "csv"))))
    assert len(rows) == 9 + 1
    assert rows[0][:2] == ["identity", "index"]
    md = render_report(rep, "md")
    assert "C3_8ii" in md and md.count("\n") == 3
    with pytest.raises(UsageError):
        render_report(rep, "xml")


def test_residuals_printed_with_17_digits():
    rep = verify("T3_4", SampleConfig(seed=0, count=2))
    text = render_report(rep, "json")
    line = next(ln for ln in text.splitlines() if '"max_residual"' in ln)
    mantissa = line.split(":")[1].strip().rstrip(",").split("e")[0].replace(".", "").lstrip("-0")
    assert rep.max_scaled_residual == 0 or len(mantissa) >= 15


def test_same_argv_same_bytes():
    argv = ("verify", "--identity", "R4_11ii_qhahn", "--samples", "10", "--seed", "5")
    a = call(*argv)[1]
    b = call(*argv)[1]
    assert a == b
    assert json.loads(a)["tool_version"] == __version__


def test_workers_do_not_change_output():
    argv = ("verify", "--identity", "C3_15i", "--samples", "10", "--seed", "5")
    assert call(*argv)[1] == call(*argv, "--workers", "3")[1]


@pytest.mark.parametrize("identity", [i.value for i in IdentityId])
def test_every_identity_reachable(identity):
    code, out, _ = call("verify", "--identity", identity, "--samples", "2", "--seed", "1")
    assert code == 0 and json.loads(out)["identity"] == identity


def test_report_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("ORTHOCONV_REPORT_DIR", str(tmp_path))
    code, out, _ = call("verify", "--identity", "C3_8i", "--samples", "3", "--format", "csv")
    assert code == 0 and out == ""
    assert len((tmp_path / "C3_8i.csv").read_text().splitlines()) == 4


def test_explicit_report_path(tmp_path):
    path = tmp_path / "out.md"
    code, out, _ = call("verify", "--identity", "T5_5", "--samples", "3", "--format", "md", "--report", str(path))
    assert code == 0 and out == "" and "T5_5" in path.read_text()


def test_list_matches_catalog():
    code, out, _ = call("list", "--format", "json")
    assert code == 0
    assert [d["id"] for d in json.loads(out)] == [i.value for i in IdentityId]
    code, out, _ = call("list")
    assert out.splitlines()[0].startswith("T3_4")


def test_quad_family_and_operator(tmp_path):
    code, out, _ = call("quad", "--family", "meixner-pollaczek", "--lambda", "0.8", "--phi", "1.1", "--nodes", "5")
    doc = json.loads(out)
    assert code == 0 and len(doc["nodes"]) == 5
    assert sum(doc["weights"]) == pytest.approx(1.0, abs=1e-14)
    path = tmp_path / "q.csv"
    code, _, _ = call("quad", "--operator", "uq-su2-xpa", "--N", "4", "--p", "1.1", "--q", "0.6", "--nodes", "5", "--format", "csv", "--out", str(path))
    assert code == 0 and len(path.read_text().splitlines()) == 6
    code, _, _ = call("quad", "--operator", "uq-su2-xpa", "--N", "4", "--p", "1.1", "--q", "0.6", "--nodes", "6")
    assert code == 2


def test_coeff_commands():
    code, out, _ = call("coeff", "--kind", "racah-uq-su11", "--k1", "0.7", "--k2", "1.3", "--k3", "0.9", "--j12", "2", "--j23", "1", "--j", "1", "--q", "0.6")
    assert code == 0 and float(out) == pytest.approx(0.9015238783805458, abs=1e-13)
    code, out, _ = call("coeff", "--kind", "linearisation", "--l1", "2", "--l2", "1", "--p", "1", "--r", "1.2", "--q", "0.5")
    assert code == 0 and len(out.split()) == 3


def test_parse_number():
    assert parse_number("0.5-1.25i", "complex") == complex(0.5, -1.25)
    assert parse_number("2", "complex") == 2 + 0j
    assert parse_number("7", "int") == 7
    with pytest.raises(UsageError):
        parse_number("1.5", "int")
