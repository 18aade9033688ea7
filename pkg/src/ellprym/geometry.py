"""Canonical-model geometry: the distinguished point, quadric decompositions,
the dual-route vanishing equivalence and the dimension bookkeeping.

Linear forms on the canonical space are 1-forms; the hyperplanes defined by
all trace-zero forms meet in a single distinguished point (coordinates
(1:0:...:0) once the pullback form is the zeroth basis vector), and the
pullback form cuts the distinguished hyperplane.  Whether the distinguished
point lies on every quadric through the cover decides, one way, that the
period-map kernel is minimal.

The vanishing equivalence is checked by two genuinely independent routes:
the fiber-sum route evaluates the trace-zero part of a quadric over the
fiber, the coefficient route reads off the pure pullback coefficient in
adapted coordinates.  Both must vanish together; the proof-level identity
(fiber sum = minus the trace ratio of the mixed component) is asserted
exactly as well.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diffalg import SymSquareElement, lex_pairs, multiply
from .errors import (ConsistencyViolated, EquivalenceViolated,
                     InputError)
from .prym import _inverse, codifferential, nu
from .scalars import Matrix


@dataclass(frozen=True)
class CanonicalFrame:
    """Adapted coordinates: basis (pullback form, trace-zero basis).

    ``change`` has the adapted basis vectors as columns; ``change_inv`` maps
    old coordinates to adapted ones.  In adapted coordinates the
    distinguished point is (1:0:...:0) and the distinguished hyperplane is
    the zero locus of the zeroth coordinate form.
    """
    change: Matrix
    change_inv: Matrix

    @property
    def size(self):
        return self.change.nrows


def canonical_frame(datum, split):
    g = datum.genus
    cols = [list(split.alpha_coords)] + [list(v) for v in split.minus_basis]
    C = Matrix(datum.field, [[cols[a][i] for a in range(g)] for i in range(g)])
    return CanonicalFrame(C, _inverse(C))


@dataclass(frozen=True)
class QuadricDecomposition:
    """G = G_minus + alpha . omega under the direct sum decomposition."""
    original: SymSquareElement
    minus_part: SymSquareElement
    omega: tuple  # coordinates of the 1-form factor in the eta basis


def decompose_quadric(datum, split, frame, G):
    """Unique decomposition of a tensor into trace-zero plus mixed parts."""
    field = datum.field
    g = frame.size
    adapted = G.transform(frame.change_inv)
    # mixed part in adapted coordinates: omega_hat[0] = G_00, omega_hat[i] = 2 G_0i
    omega_hat = [adapted.coeffs[0][0]] + \
        [adapted.coeffs[0][i] * 2 for i in range(1, g)]
    omega = frame.change.mul_vec(omega_hat)
    minus_adapted = [[field.zero()] * g for _ in range(g)]
    for i in range(1, g):
        for j in range(1, g):
            minus_adapted[i][j] = adapted.coeffs[i][j]
    minus_part = SymSquareElement(field, minus_adapted).transform(frame.change)
    # exact reconstruction check
    alpha_sym = SymSquareElement.symmetric_product(
        field, list(split.alpha_coords), list(omega))
    if not (minus_part + alpha_sym - G).is_zero():
        raise AssertionError("quadric decomposition failed to reconstruct")
    return QuadricDecomposition(G, minus_part, tuple(omega))


def evaluate_at_qminus(frame, G):
    """Value of the quadric at the distinguished point.

    This is the coefficient of the squared pullback form in adapted
    coordinates; it vanishes exactly when the point lies on the quadric.
    """
    return G.transform(frame.change_inv).coeffs[0][0]


@dataclass(frozen=True)
class QuadricCheck:
    index: int
    fiber_route: object      # fiber sum of the trace-zero part
    coefficient_route: object  # value at the distinguished point
    proof_identity_ok: bool  # fiber sum == -(trace ratio of omega)
    agree: bool


def functpoint_check(datum, split, frame, quadrics):
    """Dual-route vanishing check for every basis quadric.

    Precondition: each tensor actually lies in the kernel of the
    multiplication map (verified here against the certified coefficient
    model).  The equivalence of the two routes is unconditional, so any
    disagreement raises EquivalenceViolated.
    """
    results = []
    for idx, G in enumerate(quadrics.basis):
        if not multiply(datum, G).is_zero():
            raise InputError(
                f"tensor {idx} is not in the kernel of the multiplication map")
        dec = decompose_quadric(datum, split, frame, G)
        lhs = nu(datum, split, dec.minus_part)
        rhs = evaluate_at_qminus(frame, G)
        trace_omega = split.trace_ratio(dec.omega)
        proof_ok = (lhs == -trace_omega)
        agree = (lhs.is_zero() == rhs.is_zero())
        if not agree or not proof_ok:
            raise EquivalenceViolated(
                f"dual-route check failed on quadric {idx}: fiber route "
                f"{lhs}, coefficient route {rhs}, trace identity "
                f"{'ok' if proof_ok else 'violated'}")
        results.append(QuadricCheck(idx, lhs, rhs, proof_ok, agree))
    return results


@dataclass(frozen=True)
class GeometricCriterion:
    qminus_in_all: bool
    implies_dim1: bool
    note: str

    def to_json(self):
        return {"qminus_in_all_quadrics": self.qminus_in_all,
                "implies_minimal_kernel": self.implies_dim1,
                "note": self.note}


def halfgeo_criterion(datum, split, frame, quadrics, criterion_report):
    """One-directional geometric criterion.

    If the distinguished point avoids some quadric through the cover, the
    period-map kernel is minimal; the report cross-asserts this against the
    kernel scan.  When the point lies on every quadric no conclusion is
    drawn (the converse is open for general ramification; for covers whose
    ramification indices are all 2 the converse holds and is surfaced as an
    informational note only).
    """
    values = [evaluate_at_qminus(frame, G) for G in quadrics.basis]
    qminus_in_all = all(v.is_zero() for v in values)
    implies_dim1 = not qminus_in_all
    if implies_dim1 and criterion_report.dimension != "1":
        raise ConsistencyViolated(
            "distinguished point avoids a quadric but the kernel scan "
            f"reported dimension {criterion_report.dimension}")
    if quadrics.dimension == 0:
        note = ("no quadrics through the cover: the empty intersection "
                "contains the distinguished point vacuously; no conclusion")
    elif qminus_in_all:
        all_simple = all(c.index == 2 for c in datum.charts)
        if all_simple:
            note = ("point lies on every quadric; for all-simple "
                    "ramification the converse holds, so a non-minimal "
                    "kernel is expected (informational only)")
        else:
            note = ("point lies on every quadric; no conclusion for "
                    "general ramification")
    else:
        note = "point avoids a quadric: kernel dimension 1 certified"
    return GeometricCriterion(qminus_in_all, implies_dim1, note)


@dataclass(frozen=True)
class LedgerIdentity:
    name: str
    holds: bool
    detail: str


@dataclass(frozen=True)
class LedgerReport:
    identities: tuple
    h0_quadrics: int
    dim_kernel_E_dual: int
    excess: int
    dim_kernel_residue_map: int
    note: str

    @property
    def ok(self):
        return all(i.holds for i in self.identities)

    def to_json(self):
        return {
            "identities": [{"name": i.name, "holds": i.holds, "detail": i.detail}
                           for i in self.identities],
            "h0_quadrics": self.h0_quadrics,
            "dim_kernel_E_dual": self.dim_kernel_E_dual,
            "branch_excess": self.excess,
            "dim_kernel_residue_map": self.dim_kernel_residue_map,
            "note": self.note,
        }


def dimension_ledger(datum, split, quadrics, kernel_report):
    """Exact dimension bookkeeping identities.

    (a) dim Ker(base-fixed codifferential) - h0(quadrics) equals the branch
        excess (2g-2) - n;
    (b) projecting each basis quadric to the trace-zero square lands in the
        kernel and the projections stay independent;
    (c) dim Ker(base-fixed codifferential) = h0(quadrics)
        + dim Ker(residue-only map on all quadratic differentials) - g.

    The residue-only kernel is computed in the certified coefficient model
    from the ramification covector slots alone (base-fixed variant); the
    naming ambiguity for the full-family variant is recorded, not silently
    resolved.
    """
    field = datum.field
    g, n = datum.genus, datum.n_ramification
    h0 = quadrics.dimension
    excess = datum.reduced_branch_excess()
    identities = []

    # (a)
    lhs = kernel_report.dim_dual - h0
    identities.append(LedgerIdentity(
        "kernel_minus_quadrics_equals_excess", lhs == excess,
        f"{kernel_report.dim_dual} - {h0} = {lhs}, excess = {excess}"))

    # (b) quadric projections inject into the kernel
    frame = canonical_frame(datum, split)
    proj_rows = []
    inside = True
    for G in quadrics.basis:
        dec = decompose_quadric(datum, split, frame, G)
        cov = codifferential(datum, split, dec.minus_part)
        if not all(x.is_zero() for x in cov.gammas):
            inside = False
        proj_rows.append(_minus_sym_coords(datum, frame, dec.minus_part))
    if proj_rows:
        rank = Matrix(field, proj_rows).rank()
    else:
        rank = 0
    identities.append(LedgerIdentity(
        "quadric_projection_injects", inside and rank == h0,
        f"projections {'lie' if inside else 'do not lie'} in the kernel; "
        f"rank {rank} of {h0}"))

    # (c) exact-sequence count via the residue-only map on the full
    # symmetric square (its rank equals the rank on all quadratic
    # differentials because the multiplication map is surjective)
    rows = []
    for (i, j) in lex_pairs(g):
        phi = SymSquareElement.basis_element(field, g, i, j)
        cov = codifferential(datum, split, phi, check_minus=False)
        rows.append(list(cov.gammas))
    residue_rank = Matrix(field, rows).rank()
    dim_ker_residue = (3 * g - 3) - residue_rank
    rhs = h0 + dim_ker_residue - g
    identities.append(LedgerIdentity(
        "exact_sequence_count", kernel_report.dim_dual == rhs,
        f"{kernel_report.dim_dual} = {h0} + {dim_ker_residue} - {g}"))

    note = ("residue-only kernel computed from ramification covector slots "
            "only (base-fixed variant)")
    return LedgerReport(tuple(identities), h0, kernel_report.dim_dual,
                        excess, dim_ker_residue, note)


def _minus_sym_coords(datum, frame, phi):
    """Coordinates of a trace-zero tensor over the lexicographic minus basis."""
    field = datum.field
    m = datum.genus - 1
    adapted = phi.transform(frame.change_inv)
    out = []
    two = field.scalar(2)
    for a in range(m):
        for b in range(a, m):
            c = adapted.coeffs[a + 1][b + 1]
            out.append(c if a == b else c * two)
    return out
