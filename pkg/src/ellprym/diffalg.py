"""Trace splitting, symmetric squares, the multiplication map and its kernel.

The trace of a 1-form against the base differential is read off the fiber:
summing the ratio values over one unramified fiber evaluates the trace ratio
at the base point.  Its kernel is the trace-zero subspace, the tangent space
of the Prym variety, and the pullback line is a canonical complement.

The multiplication map sends a symmetric 2-tensor of 1-forms to a quadratic
differential, realized here as chart expansions plus fiber values.  Its
kernel is the space of quadrics through the canonically embedded cover; for
non-hyperelliptic covers that space has dimension (g-2)(g-3)/2 and the map
has rank 3g-3 (classical projective normality), both asserted exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .covering import require_valid, validate
from .errors import (DimensionMismatch, IdentityViolated,
                     InsufficientPrecision, ValidationFailed)
from .scalars import Matrix
from .series import TruncatedSeries


# ---------------------------------------------------------------------------
# symmetric 2-tensors
# ---------------------------------------------------------------------------

class SymSquareElement:
    """A symmetric 2-tensor over the form basis, phi = sum phi_ij eta_i . eta_j."""

    __slots__ = ("field", "coeffs", "size")

    def __init__(self, field, coeffs):
        self.field = field
        rows = [[field.scalar(x) for x in row] for row in coeffs]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("coefficient array must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("coefficient array must be symmetric")
        self.coeffs = rows
        self.size = n

    @classmethod
    def zero(cls, field, size):
        z = field.zero()
        return cls(field, [[z] * size for _ in range(size)])

    @classmethod
    def basis_element(cls, field, size, i, j):
        """The lexicographic basis tensor eta_i . eta_j (i <= j)."""
        elem = cls.zero(field, size)
        if i == j:
            elem.coeffs[i][i] = field.one()
        else:
            half = field.scalar(1) / field.scalar(2)
            elem.coeffs[i][j] = half
            elem.coeffs[j][i] = half
        return elem

    @classmethod
    def symmetric_product(cls, field, u, v):
        """u . v = (u (x) v + v (x) u) / 2 for coordinate vectors u, v."""
        size = len(u)
        half = field.scalar(1) / field.scalar(2)
        rows = [[(u[i] * v[j] + u[j] * v[i]) * half for j in range(size)]
                for i in range(size)]
        return cls(field, rows)

    @classmethod
    def from_lex(cls, field, size, coords):
        """Inverse of lex_coords."""
        elem = cls.zero(field, size)
        half = field.scalar(1) / field.scalar(2)
        k = 0
        for i in range(size):
            for j in range(i, size):
                c = coords[k]
                k += 1
                if i == j:
                    elem.coeffs[i][i] = c
                else:
                    elem.coeffs[i][j] = c * half
                    elem.coeffs[j][i] = c * half
        return elem

    def lex_coords(self):
        """Coordinates over the basis eta_i . eta_j, i <= j, lexicographic."""
        out = []
        two = self.field.scalar(2)
        for i in range(self.size):
            for j in range(i, self.size):
                out.append(self.coeffs[i][j] if i == j
                           else self.coeffs[i][j] * two)
        return out

    def __add__(self, other):
        return SymSquareElement(
            self.field,
            [[a + b for a, b in zip(r1, r2)]
             for r1, r2 in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return self + other.scale(self.field.scalar(-1))

    def scale(self, scalar):
        scalar = self.field.scalar(scalar)
        return SymSquareElement(
            self.field, [[scalar * x for x in row] for row in self.coeffs])

    def is_zero(self):
        return all(x.is_zero() for row in self.coeffs for x in row)

    def __eq__(self, other):
        return isinstance(other, SymSquareElement) and \
            self.coeffs == other.coeffs

    def transform(self, basis_matrix_inv):
        """Coefficients over a new basis u = eta . C, given C^-1.

        If phi = eta Phi eta^T in the old basis, the new coefficient array is
        C^-1-free: Phi_new = C^T Phi C ... expressed for coordinates of the
        tensor this is Cinv applied on both sides of the coordinate array.
        """
        A = basis_matrix_inv
        n = self.size
        # Phi_new = A * Phi * A^T where A = C^-1 acts on coordinates
        tmp = [[sum((A.rows[i][k] * self.coeffs[k][j] for k in range(n)),
                    self.field.zero()) for j in range(n)] for i in range(n)]
        new = [[sum((tmp[i][k] * A.rows[j][k] for k in range(n)),
                    self.field.zero()) for j in range(n)] for i in range(n)]
        return SymSquareElement(self.field, new)

    def __repr__(self):
        return "SymSquare(" + "; ".join(
            ", ".join(x.to_string() for x in row) for row in self.coeffs) + ")"


def lex_pairs(size):
    return [(i, j) for i in range(size) for j in range(i, size)]


def sym_dim(size):
    return size * (size + 1) // 2


# ---------------------------------------------------------------------------
# trace splitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceSplit:
    """The canonical splitting of the form space.

    ``tau`` lists the trace ratios of the basis forms at the fiber base
    point; ``minus_basis`` spans its kernel (the trace-zero forms) and
    ``alpha_coords`` locates the pulled-back base form, which spans a
    complement because its trace equals the covering degree.
    """
    tau: tuple
    minus_basis: tuple
    alpha_coords: tuple

    @property
    def genus(self):
        return len(self.tau)

    def trace_ratio(self, vec):
        """tau applied to a coordinate vector: the trace of the form, over alpha."""
        acc = None
        for t, v in zip(self.tau, vec):
            term = t * v
            acc = term if acc is None else acc + term
        return acc


def trace_split(datum):
    """Compute the trace vector, the trace-zero basis and the alpha coordinates."""
    require_valid(datum)
    field = datum.field
    g, d = datum.genus, datum.degree
    tau = [field.zero()] * g
    for row in datum.fiber.ratios:
        for i in range(g):
            tau[i] = tau[i] + row[i]
    if all(t.is_zero() for t in tau):
        raise ValidationFailed("trace vector is zero: corrupt fiber data")

    minus = Matrix(field, [tau]).kernel_basis()
    if len(minus) != g - 1:
        raise DimensionMismatch(
            f"trace-zero space has dimension {len(minus)}, expected {g - 1}")

    if datum.alpha_index_hint is not None:
        alpha = [field.zero()] * g
        alpha[datum.alpha_index_hint] = field.one()
    else:
        alpha = _solve_alpha_coords(datum)

    tr_alpha = sum((t * a for t, a in zip(tau, alpha)), field.zero())
    if tr_alpha != field.scalar(d):
        raise IdentityViolated(
            f"trace of the pullback form is {tr_alpha}, expected degree {d}")

    # the splitting is direct: alpha together with the minus basis spans
    span = Matrix(field, [list(alpha)] + [list(v) for v in minus])
    if span.rank() != g:
        raise IdentityViolated("pullback form lies in the trace-zero space")

    return TraceSplit(tuple(tau), tuple(tuple(v) for v in minus), tuple(alpha))


def _solve_alpha_coords(datum):
    """Locate the pullback form in the basis from ratio and chart data.

    Its fiber ratios are identically 1 and its chart expansions equal the
    stored alpha pullback series, which gives an overdetermined exact linear
    system with a unique solution once the independence certificate holds.
    """
    field = datum.field
    g = datum.genus
    rows, rhs = [], []
    for row in datum.fiber.ratios:
        rows.append(list(row))
        rhs.append(field.one())
    for c in datum.charts:
        w = c.window()
        for e in range(w):
            rows.append([s.coefficient(e) for s in c.forms])
            rhs.append(c.alpha_pullback.coefficient(e))
    sol = Matrix(field, rows).solve(rhs)
    if sol is None:
        raise ValidationFailed(
            "no basis combination matches the alpha pullback data")
    return sol


# ---------------------------------------------------------------------------
# multiplication map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadDifferentialData:
    """A quadratic differential in the coefficient model: chart series + fiber values."""
    charts: tuple   # one du^2-coefficient series per ramification chart
    fiber: tuple    # values of (section / alpha^2) at the fiber points

    def is_zero(self):
        return all(s.is_zero() for s in self.charts) and \
            all(x.is_zero() for x in self.fiber)


def multiply(datum, phi):
    """Image of a symmetric 2-tensor under the multiplication map.

    Per chart the expansion of the product differential; per fiber point the
    value divided by the square of the base pullback, which is the double
    sum of phi_ij times the two ratio values.
    """
    field = datum.field
    g = datum.genus
    charts = []
    for c in datum.charts:
        acc = TruncatedSeries.zero(field, c.window())
        for i in range(g):
            row = phi.coeffs[i]
            for j in range(i, g):
                coef = row[j] if i == j else row[j] * 2
                if coef.is_zero():
                    continue
                term = (c.forms[i] * c.forms[j]).scale(coef)
                acc = acc + term
        charts.append(acc)
    fiber = []
    for row in datum.fiber.ratios:
        acc = field.zero()
        for i in range(g):
            if row[i].is_zero():
                continue
            for j in range(g):
                coef = phi.coeffs[i][j]
                if not coef.is_zero() and not row[j].is_zero():
                    acc = acc + coef * row[i] * row[j]
        fiber.append(acc)
    return QuadDifferentialData(tuple(charts), tuple(fiber))


@dataclass(frozen=True)
class QuadricSpace:
    """Basis of the space of quadrics through the canonical model."""
    basis: tuple

    @property
    def dimension(self):
        return len(self.basis)


def multiply_matrix(datum):
    """Matrix of the multiplication map on the full symmetric square.

    Columns follow the lexicographic tensor basis; rows are the certified
    chart coefficients followed by the fiber values.
    """
    field = datum.field
    g = datum.genus
    windows = [c.window() for c in datum.charts]
    cols = []
    for (i, j) in lex_pairs(g):
        data = multiply(datum, SymSquareElement.basis_element(field, g, i, j))
        col = []
        for w, s in zip(windows, data.charts):
            col.extend(s.coefficients_in(0, w))
        col.extend(data.fiber)
        cols.append(col)
    rows = [[cols[c][r] for c in range(len(cols))]
            for r in range(len(cols[0]))]
    return Matrix(field, rows)


def quadric_kernel(datum):
    """Exact kernel of the multiplication map, certified by the zero-counting bound."""
    report = validate(datum)
    if not report.ok:
        raise ValidationFailed(
            "datum failed validation: " +
            ", ".join(f.name for f in report.failures()))
    g = datum.genus
    if not report.quadric_certified:
        raise InsufficientPrecision(
            f"coefficient budget {report.coefficient_budget} below the "
            f"quadric certification bound {report.quadric_bound}")
    M = multiply_matrix(datum)
    kernel = M.kernel_basis()
    expected = (g - 2) * (g - 3) // 2
    if len(kernel) != expected:
        raise DimensionMismatch(
            f"quadric space has dimension {len(kernel)}, expected {expected} "
            "(hyperelliptic or under-resolved input)")
    rank = sym_dim(g) - len(kernel)
    if rank != 3 * g - 3:
        raise DimensionMismatch(
            f"multiplication map has rank {rank}, expected {3 * g - 3}")
    basis = tuple(SymSquareElement.from_lex(datum.field, g, vec)
                  for vec in kernel)
    return QuadricSpace(basis)
