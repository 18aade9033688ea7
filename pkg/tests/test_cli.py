import json

from ellprym.builder import bielliptic_spec, pirola_spec, spec_to_json
from ellprym.cli import main


def _write_spec(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_build_writes_datum(tmp_path):
    spec_path = _write_spec(tmp_path / "spec.json",
                            spec_to_json(pirola_spec(precision=10)))
    out = tmp_path / "datum.json"
    action_out = tmp_path / "action.json"
    code = main(["build", spec_path, "--out", str(out),
                 "--action-out", str(action_out)])
    assert code == 0
    obj = json.loads(out.read_text())
    assert obj["genus"] == 4 and obj["degree"] == 3
    assert json.loads(action_out.read_text())["order"] == 3


def test_build_rejects_nonprime_order(tmp_path, capsys):
    obj = spec_to_json(pirola_spec())
    obj["N"] = 4
    obj["field"] = {"cyclotomic_order": 4}
    spec_path = _write_spec(tmp_path / "spec.json", obj)
    code = main(["build", spec_path, "--out", str(tmp_path / "d.json")])
    assert code == 2
    assert "UnsupportedOrder" in capsys.readouterr().err


def test_build_unreadable_path(tmp_path):
    code = main(["build", str(tmp_path / "missing.json"),
                 "--out", str(tmp_path / "d.json")])
    assert code == 2


def test_analyze_full_report(tmp_path):
    spec_path = _write_spec(tmp_path / "spec.json",
                            spec_to_json(pirola_spec(precision=10)))
    datum_path = tmp_path / "datum.json"
    action_path = tmp_path / "action.json"
    assert main(["build", spec_path, "--out", str(datum_path),
                 "--action-out", str(action_path)]) == 0
    report_path = tmp_path / "report.json"
    code = main(["analyze", str(datum_path), "--action", str(action_path),
                 "--json", "--out", str(report_path)])
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["kernel_E"]["dim_dual"] == 4
    assert report["criterion"]["dim_kernel"] == ">=2"
    assert report["quadrics"]["h0"] == 1
    assert report["equivariant"]["battery"]["ok"] is True
    assert report["ledger"]["identities"][0]["holds"] is True
    assert "conventions" in report


def test_analyze_corrupt_datum(tmp_path, capsys):
    spec_path = _write_spec(tmp_path / "spec.json",
                            spec_to_json(pirola_spec(precision=10)))
    datum_path = tmp_path / "datum.json"
    assert main(["build", spec_path, "--out", str(datum_path)]) == 0
    obj = json.loads(datum_path.read_text())
    obj["genus"] = 5   # breaks Riemann-Hurwitz
    datum_path.write_text(json.dumps(obj))
    code = main(["analyze", str(datum_path)])
    assert code == 2
    assert "riemann_hurwitz" in capsys.readouterr().err


def test_analyze_under_truncated_is_precision_error(tmp_path, capsys):
    spec_path = _write_spec(tmp_path / "spec.json",
                            spec_to_json(pirola_spec(precision=3)))
    datum_path = tmp_path / "datum.json"
    assert main(["build", spec_path, "--out", str(datum_path)]) == 0
    code = main(["analyze", str(datum_path)])
    assert code == 2
    assert "InsufficientPrecision" in capsys.readouterr().err


def test_analyze_identity_violation_exits_3(tmp_path, capsys):
    """A structurally valid datum with corrupted series data trips an
    unconditional identity, which is the exit-3 contract."""
    spec_path = _write_spec(tmp_path / "spec.json",
                            spec_to_json(pirola_spec(precision=10)))
    datum_path = tmp_path / "datum.json"
    assert main(["build", spec_path, "--out", str(datum_path)]) == 0
    obj = json.loads(datum_path.read_text())
    obj["charts"][0]["forms"][2]["coeffs"][4] = "7/2"
    datum_path.write_text(json.dumps(obj))
    code = main(["analyze", str(datum_path)])
    assert code == 3
    assert "DimensionMismatch" in capsys.readouterr().err


def test_analyze_reports_byte_identical(tmp_path):
    spec_path = _write_spec(tmp_path / "spec.json",
                            spec_to_json(pirola_spec(precision=10)))
    datum_path = tmp_path / "datum.json"
    assert main(["build", spec_path, "--out", str(datum_path)]) == 0
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["analyze", str(datum_path), "--json", "--out", str(r1)]) == 0
    assert main(["analyze", str(datum_path), "--json", "--out", str(r2)]) == 0
    assert r1.read_bytes() == r2.read_bytes()


def test_build_and_analyze_double_cover(tmp_path, capsys):
    """End-to-end on the double-cover fixture: explicit base point in the
    spec file and a definite minimal-kernel verdict."""
    spec_path = _write_spec(tmp_path / "spec.json",
                            spec_to_json(bielliptic_spec(4)))
    datum_path = tmp_path / "datum.json"
    assert main(["build", spec_path, "--out", str(datum_path)]) == 0
    assert main(["analyze", str(datum_path), "--text"]) == 0
    out = capsys.readouterr().out
    assert "dim_kernel: 1" in out
    assert "qminus_in_all_quadrics: False" in out


def test_demo_default_passes(capsys):
    code = main(["demo-pirola", "--precision", "12"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("PASS") == 7
    assert "FAIL" not in out


def test_demo_low_precision_exits_2(capsys):
    code = main(["demo-pirola", "--precision", "3"])
    assert code == 2
    assert "InsufficientPrecision" in capsys.readouterr().err


def test_demo_json_battery(tmp_path):
    out = tmp_path / "demo.json"
    code = main(["demo-pirola", "--precision", "12", "--json",
                 "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    battery = report["equivariant"]["battery"]
    assert battery["ok"] and len(battery["checks"]) == 7
