import json

import pytest

from ellprym.covering import (CoveringDatum, FiberChart, RamificationChart,
                              datum_from_json, datum_to_json, load, save,
                              validate)
from ellprym.errors import SchemaError
from ellprym.scalars import FieldSpec
from ellprym.series import TruncatedSeries

Q = FieldSpec(1)


def _series(start, coeffs, prec):
    return TruncatedSeries.from_coefficients(Q, start, coeffs, prec)


def _fake_datum(genus=4, indices=(3, 3), degree=3):
    """Structurally complete datum with made-up series (for failure paths)."""
    charts = []
    for j, idx in enumerate(indices):
        alpha = _series(idx - 1, [1, 1], 8)
        forms = tuple(_series(i % 3, [1 + i + j], 8) for i in range(genus))
        charts.append(RamificationChart(f"a{j}", idx, alpha, forms))
    ratios = tuple(tuple(Q.scalar(1 if i == 0 else (k + 2) * (i + 1))
                         for i in range(genus)) for k in range(degree))
    fiber = FiberChart(tuple(f"x{k}" for k in range(degree)), ratios)
    return CoveringDatum(Q, genus, degree, tuple(charts), fiber,
                         tuple(f"b{i}" for i in range(genus)), 0)


def test_riemann_hurwitz_failure_detected():
    datum = _fake_datum(genus=4, indices=(3, 3))
    report = validate(datum)
    failed = {f.name for f in report.failures()}
    assert "riemann_hurwitz" in failed


def test_index_one_chart_rejected():
    datum = _fake_datum(genus=4, indices=(3, 3, 2, 1))
    report = validate(datum)
    assert any(f.name.startswith("chart_valuations") and not f.passed
               for f in report.findings)


def test_validate_never_aborts_early():
    datum = _fake_datum(genus=4, indices=(3, 3))
    report = validate(datum)
    names = [f.name for f in report.findings]
    assert "riemann_hurwitz" in names
    assert "trace_consistency" in names
    assert "quadric_precision" in names


def test_validation_on_built_fixture(pirola):
    report = validate(pirola.datum)
    assert report.ok
    assert report.quadric_certified
    assert report.coefficient_budget > report.independence_bound
    # trace of the pullback form equals the degree
    tau = pirola.split.tau
    assert tau[0] == pirola.datum.field.scalar(3)


def test_round_trip_identity(pirola, tmp_path):
    path = tmp_path / "datum.json"
    save(pirola.datum, path)
    loaded = load(path)
    assert loaded == pirola.datum


def test_round_trip_byte_exact(pirola, tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save(pirola.datum, p1)
    save(load(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_missing_charts_reports_pointer(pirola):
    obj = datum_to_json(pirola.datum)
    del obj["charts"]
    with pytest.raises(SchemaError) as err:
        datum_from_json(obj)
    assert err.value.pointer == "/charts"


def test_bad_scalar_reports_offending_location(pirola):
    obj = datum_to_json(pirola.datum)
    obj["fiber"]["ratios"][1][0] = "3/0x"
    with pytest.raises(SchemaError) as err:
        datum_from_json(obj)
    assert err.value.pointer.startswith("/fiber/ratios/1/0")


def test_truncated_series_schema_error(pirola):
    obj = datum_to_json(pirola.datum)
    obj["charts"][0]["alpha_pullback"]["prec"] = -99
    with pytest.raises(SchemaError) as err:
        datum_from_json(obj)
    assert "/charts/0/alpha_pullback" in err.value.pointer


def test_load_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(SchemaError):
        load(path)
