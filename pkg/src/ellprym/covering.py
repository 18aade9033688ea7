"""The covering datum: an exact local model of a branched cover of an elliptic curve.

A datum consists of one ramification chart per ramification point (series
expansions of the pulled-back base form and of every basis 1-form in an
arbitrary local parameter) together with ratio values on one unramified
fiber.  Everything downstream -- residues, kernels, quadrics -- is computed
from this data alone; no global equations of the cover are stored.

Local parameters are deliberately arbitrary: residues of 1-forms and values
of functions are coordinate invariant, so reparametrizing any chart leaves
every kernel dimension unchanged.  The validator certifies that the stored
truncation windows are wide enough for the exact linear algebra: a section
of the square of the canonical bundle has degree 4g-4, so if the known
coefficient budget exceeds that bound, vanishing of all known data forces
the section to vanish identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .errors import SchemaError, ValidationFailed
from .scalars import FieldSpec, Matrix, Scalar
from .series import TruncatedSeries


@dataclass(frozen=True)
class RamificationChart:
    """Series data at one ramification point, in a local parameter u.

    ``alpha_pullback`` is the coefficient series of the pulled-back base
    differential (as a du-coefficient); it vanishes to order index-1.
    ``forms`` holds one du-coefficient series per basis differential.
    """
    label: str
    index: int
    alpha_pullback: TruncatedSeries
    forms: tuple

    def window(self):
        """Certified coefficient count: exponents 0..window-1 are known."""
        return min([self.alpha_pullback.prec] + [s.prec for s in self.forms])


@dataclass(frozen=True)
class FiberChart:
    """Values of (form / pulled-back base form) at the points of one fiber."""
    labels: tuple
    ratios: tuple  # d rows, one per fiber point; each row has g scalars


@dataclass(frozen=True)
class CoveringDatum:
    field: FieldSpec
    genus: int
    degree: int
    charts: tuple
    fiber: FiberChart
    basis_names: tuple
    alpha_index_hint: Optional[int]

    @property
    def n_ramification(self):
        return len(self.charts)

    def reduced_branch_excess(self):
        """deg(R - R_red) = (2g-2) - n."""
        return (2 * self.genus - 2) - self.n_ramification


@dataclass(frozen=True)
class Finding:
    name: str
    passed: bool
    detail: str
    hard: bool = True  # certificate-level findings are recorded, not fatal


@dataclass
class ValidationReport:
    findings: list = dc_field(default_factory=list)
    chart_windows: list = dc_field(default_factory=list)
    coefficient_budget: int = 0
    independence_bound: int = 0
    quadric_bound: int = 0

    def add(self, name, passed, detail="", hard=True):
        self.findings.append(Finding(name, passed, detail, hard))

    @property
    def ok(self):
        return all(f.passed for f in self.findings if f.hard)

    @property
    def quadric_certified(self):
        return self.coefficient_budget >= self.quadric_bound

    def failures(self):
        return [f for f in self.findings if not f.passed]

    def to_json(self):
        return {
            "ok": self.ok,
            "quadric_certified": self.quadric_certified,
            "findings": [{"name": f.name, "passed": f.passed,
                          "detail": f.detail, "hard": f.hard}
                         for f in self.findings],
            "chart_windows": list(self.chart_windows),
            "coefficient_budget": self.coefficient_budget,
            "independence_bound": self.independence_bound,
            "quadric_bound": self.quadric_bound,
        }


def validate(datum):
    """Run every validation check; never aborts early.

    Checks, in order: Riemann-Hurwitz over an elliptic base, chart valuation
    rules, the rank-g independence certificate, the quadratic-differential
    precision certificate, and trace consistency on the fiber.
    """
    report = ValidationReport()
    g, d, n = datum.genus, datum.degree, datum.n_ramification

    # (1) Riemann-Hurwitz: sum of (n_j - 1) must equal 2g - 2
    rh = sum(c.index - 1 for c in datum.charts)
    report.add("riemann_hurwitz", rh == 2 * g - 2,
               f"sum(n_j - 1) = {rh}, expected 2g-2 = {2 * g - 2}")
    report.add("genus_bound", g >= 3, f"genus {g} (need >= 3)")

    # (2) chart valuation rules
    for j, c in enumerate(datum.charts):
        ok = True
        msgs = []
        if c.index < 2:
            ok = False
            msgs.append(f"index {c.index} < 2 is not a ramification point")
        if c.alpha_pullback.is_zero() or \
                c.alpha_pullback.valuation != c.index - 1:
            ok = False
            msgs.append(
                f"alpha pullback valuation {c.alpha_pullback.valuation} != "
                f"index-1 = {c.index - 1}")
        for i, s in enumerate(c.forms):
            if not s.is_zero() and s.valuation < 0:
                ok = False
                msgs.append(f"form {i} has a pole (valuation {s.valuation})")
        if len(c.forms) != g:
            ok = False
            msgs.append(f"{len(c.forms)} form expansions, expected g = {g}")
        report.add(f"chart_valuations[{j}]", ok, "; ".join(msgs) or "ok")

    # fiber shape
    shape_ok = len(datum.fiber.ratios) == d and \
        all(len(r) == g for r in datum.fiber.ratios)
    report.add("fiber_shape", shape_ok,
               f"{len(datum.fiber.ratios)} rows of "
               f"{[len(r) for r in datum.fiber.ratios]} entries; expected {d} x {g}")

    windows = [c.window() for c in datum.charts]
    report.chart_windows = windows
    budget = sum(windows) + d
    report.coefficient_budget = budget
    report.independence_bound = 2 * g - 2
    report.quadric_bound = 4 * g - 3

    # (3) independence certificate: a nonzero holomorphic 1-form has exactly
    # 2g-2 zeros, so with budget > 2g-2 a rank defect would be a genuine
    # linear dependence among the basis forms.
    if shape_ok:
        rows = []
        for i in range(g):
            row = []
            for j, c in enumerate(datum.charts):
                row.extend(c.forms[i].coefficients_in(0, windows[j]))
            for k in range(d):
                row.append(datum.fiber.ratios[k][i])
            rows.append(row)
        rank = Matrix(datum.field, rows).rank() if rows else 0
        report.add("independence_certificate",
                   budget > 2 * g - 2 and rank == g,
                   f"rank {rank} of g x {budget} coefficient matrix "
                   f"(budget {budget}, bound {2 * g - 2})")
    else:
        report.add("independence_certificate", False, "fiber shape invalid")

    # (4) quadric-precision certificate: sections of the squared canonical
    # bundle have degree 4g-4; budget >= 4g-3 makes their kernel computation
    # exact.  Recorded as a certificate level: operations that need it
    # refuse under-resolved input with InsufficientPrecision.
    report.add("quadric_precision", budget >= 4 * g - 3,
               f"budget {budget}, bound {4 * g - 3}", hard=False)

    # (5) trace consistency
    if shape_ok:
        tau = [datum.field.zero()] * g
        for row in datum.fiber.ratios:
            for i in range(g):
                tau[i] = tau[i] + row[i]
        nonzero = any(not t.is_zero() for t in tau)
        msg = "trace vector " + ("nonzero" if nonzero else "zero")
        ok = nonzero
        if datum.alpha_index_hint is not None:
            hint = datum.alpha_index_hint
            expect = datum.field.scalar(d)
            if not (0 <= hint < g):
                ok = False
                msg += f"; alpha index {hint} out of range"
            elif tau[hint] != expect:
                ok = False
                msg += f"; trace at alpha index = {tau[hint]}, expected {d}"
            else:
                col_ones = all(row[hint] == datum.field.one()
                               for row in datum.fiber.ratios)
                if not col_ones:
                    ok = False
                    msg += "; alpha column of ratios is not all ones"
        report.add("trace_consistency", ok, msg)
    else:
        report.add("trace_consistency", False, "fiber shape invalid")

    return report


def require_valid(datum):
    report = validate(datum)
    if not report.ok:
        names = ", ".join(f.name for f in report.failures())
        raise ValidationFailed(f"datum failed validation: {names}")
    return report


# ---------------------------------------------------------------------------
# JSON round trip
# ---------------------------------------------------------------------------

def _expect(obj, key, kind, pointer):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{pointer}/{key}", "missing required member")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"{pointer}/{key}",
                          f"expected {getattr(kind, '__name__', kind)}")
    return val


def _parse_scalar(field, text, pointer):
    try:
        return Scalar.from_string(field, text)
    except Exception as exc:
        raise SchemaError(pointer, str(exc)) from None


def _parse_series(field, obj, pointer):
    v = _expect(obj, "valuation", int, pointer)
    p = _expect(obj, "prec", int, pointer)
    raw = _expect(obj, "coeffs", list, pointer)
    coeffs = [_parse_scalar(field, s, f"{pointer}/coeffs/{i}")
              for i, s in enumerate(raw)]
    try:
        return TruncatedSeries(field, v, coeffs, p)
    except ValueError as exc:
        raise SchemaError(pointer, str(exc)) from None


def datum_to_json(datum):
    return {
        "field": {"cyclotomic_order": datum.field.cyclotomic_order},
        "genus": datum.genus,
        "degree": datum.degree,
        "basis_names": list(datum.basis_names),
        "alpha_index_hint": datum.alpha_index_hint,
        "charts": [
            {"label": c.label,
             "index": c.index,
             "alpha_pullback": c.alpha_pullback.to_json(),
             "forms": [s.to_json() for s in c.forms]}
            for c in datum.charts
        ],
        "fiber": {
            "labels": list(datum.fiber.labels),
            "ratios": [[x.to_string() for x in row]
                       for row in datum.fiber.ratios],
        },
    }


def datum_from_json(obj):
    fobj = _expect(obj, "field", dict, "")
    order = _expect(fobj, "cyclotomic_order", int, "/field")
    try:
        fld = FieldSpec(order)
    except Exception as exc:
        raise SchemaError("/field/cyclotomic_order", str(exc)) from None
    genus = _expect(obj, "genus", int, "")
    degree = _expect(obj, "degree", int, "")
    names = tuple(_expect(obj, "basis_names", list, ""))
    hint = obj.get("alpha_index_hint")
    if hint is not None and not isinstance(hint, int):
        raise SchemaError("/alpha_index_hint", "expected int or null")
    charts_raw = _expect(obj, "charts", list, "")
    charts = []
    for j, cobj in enumerate(charts_raw):
        ptr = f"/charts/{j}"
        label = _expect(cobj, "label", str, ptr)
        index = _expect(cobj, "index", int, ptr)
        alpha = _parse_series(fld, _expect(cobj, "alpha_pullback", dict, ptr),
                              f"{ptr}/alpha_pullback")
        forms_raw = _expect(cobj, "forms", list, ptr)
        forms = tuple(_parse_series(fld, s, f"{ptr}/forms/{i}")
                      for i, s in enumerate(forms_raw))
        charts.append(RamificationChart(label, index, alpha, forms))
    fobj2 = _expect(obj, "fiber", dict, "")
    labels = tuple(_expect(fobj2, "labels", list, "/fiber"))
    ratios_raw = _expect(fobj2, "ratios", list, "/fiber")
    ratios = tuple(
        tuple(_parse_scalar(fld, s, f"/fiber/ratios/{k}/{i}")
              for i, s in enumerate(row))
        for k, row in enumerate(ratios_raw))
    return CoveringDatum(fld, genus, degree, tuple(charts),
                         FiberChart(labels, ratios), names, hint)


def save(datum, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(datum_to_json(datum), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"invalid JSON: {exc}") from None
    return datum_from_json(obj)


def reparametrized(datum, substitutions):
    """Re-express chart series through new local parameters.

    ``substitutions`` maps chart index to a series phi with valuation 1 and
    invertible linear coefficient; chart series s(u) du become
    s(phi(v)) phi'(v) dv.  Kernel dimensions computed downstream are
    invariant under this operation.
    """
    from .series import transform_form
    charts = list(datum.charts)
    for j, phi in substitutions.items():
        c = charts[j]
        charts[j] = RamificationChart(
            c.label, c.index,
            transform_form(c.alpha_pullback, phi),
            tuple(transform_form(s, phi) for s in c.forms))
    return CoveringDatum(datum.field, datum.genus, datum.degree,
                         tuple(charts), datum.fiber, datum.basis_names,
                         datum.alpha_index_hint)


def change_basis(datum, matrix):
    """Replace the form basis eta by eta' = eta . B for an invertible B.

    Ratio rows transform by right multiplication; chart expansions by the
    same linear combinations.  The alpha index hint is dropped because the
    pullback form need not stay a basis vector.
    """
    g = datum.genus
    B = matrix
    charts = []
    for c in datum.charts:
        new_forms = []
        for i in range(g):
            acc = TruncatedSeries.zero(datum.field,
                                       min(s.prec for s in c.forms))
            for k in range(g):
                coef = B.rows[k][i]
                if not coef.is_zero():
                    acc = acc + c.forms[k].scale(coef)
            new_forms.append(acc)
        charts.append(RamificationChart(c.label, c.index, c.alpha_pullback,
                                        tuple(new_forms)))
    ratios = tuple(
        tuple(sum((row[k] * B.rows[k][i] for k in range(g)),
                  datum.field.zero()) for i in range(g))
        for row in datum.fiber.ratios)
    names = tuple(f"b{i}" for i in range(g))
    return CoveringDatum(datum.field, datum.genus, datum.degree,
                         tuple(charts), FiberChart(datum.fiber.labels, ratios),
                         names, None)
