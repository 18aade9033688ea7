"""Codifferential of the Prym period map and its kernel dimensions.

For a trace-zero symmetric 2-tensor the codifferential covector has one
residue slot per ramification point and one fiber-sum slot:

    slot t_j : residue at a_j of (product differential / base pullback)
    slot s   : sum over the fiber of (product differential / base pullback^2)

The 2*pi*i normalization that appears in some residue formulations is
dropped throughout; kernels and ranks are scaling invariant, so every
reported dimension is unaffected.  Reports record the convention.

Two unconditional identities are enforced (they are theorems for
non-hyperelliptic covers and act as corruption detectors):

    dim Ker(base-fixed codifferential) = g(g-1)/2 - n + 1
    dim Ker(base-fixed differential)   = 1
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .diffalg import SymSquareElement, multiply
from .errors import IdentityViolated, NotInMinusSpace
from .scalars import Matrix


@dataclass(frozen=True)
class Covector:
    """An element of the dual parameter space: (gamma_1..gamma_n, gamma_s)."""
    gammas: tuple
    gamma_s: object

    def slots(self):
        return list(self.gammas) + [self.gamma_s]

    def is_zero(self):
        return all(x.is_zero() for x in self.slots())


def minus_sym_basis(split):
    """Lexicographic basis of the symmetric square of the trace-zero space."""
    out = []
    m = split.minus_basis
    for a in range(len(m)):
        for b in range(a, len(m)):
            out.append((a, b))
    return out


def minus_sym_element(datum, split, a, b):
    return SymSquareElement.symmetric_product(
        datum.field, split.minus_basis[a], split.minus_basis[b])


def in_minus_sym(datum, split, phi):
    """Exact membership test for the symmetric square of the trace-zero space.

    In coordinates adapted to (alpha, minus basis) the tensor must have a
    vanishing alpha row and column.
    """
    field = datum.field
    g = datum.genus
    C = Matrix(field, [[split.alpha_coords[i]] + [split.minus_basis[a][i]
                                                  for a in range(g - 1)]
                       for i in range(g)])
    Cinv = _inverse(C)
    adapted = phi.transform(Cinv)
    return all(adapted.coeffs[0][j].is_zero() for j in range(g)), adapted


def _inverse(M):
    n = M.nrows
    aug = Matrix(M.field, [list(M.rows[i]) +
                           list(Matrix.identity(M.field, n).rows[i])
                           for i in range(n)])
    red, pivots = aug.rref()
    if pivots != list(range(n)):
        raise ValueError("matrix not invertible")
    return Matrix(M.field, [row[n:] for row in red.rows])


def codifferential(datum, split, phi, check_minus=True):
    """The covector of a symmetric 2-tensor.

    The public contract restricts the argument to the symmetric square of
    the trace-zero space; the extension to arbitrary tensors (used
    internally, e.g. for the residue-only map on all quadratic
    differentials) is obtained with check_minus=False.
    """
    if check_minus:
        ok, _ = in_minus_sym(datum, split, phi)
        if not ok:
            raise NotInMinusSpace(
                "tensor has a component along the pullback form")
    data = multiply(datum, phi)
    gammas = []
    for c, s in zip(datum.charts, data.charts):
        quotient = s / c.alpha_pullback
        gammas.append(quotient.residue())
    gamma_s = datum.field.zero()
    for v in data.fiber:
        gamma_s = gamma_s + v
    return Covector(tuple(gammas), gamma_s)


def nu(datum, split, beta):
    """The fiber sum: the s-slot of the covector, defined for any tensor."""
    acc = datum.field.zero()
    for v in multiply(datum, beta).fiber:
        acc = acc + v
    return acc


@dataclass(frozen=True)
class CodifferentialMatrix:
    """Rows: lexicographic trace-zero tensor basis; columns: (t_1..t_n, s)."""
    rows: tuple
    n_ramification: int

    def gamma_matrix(self, field):
        return Matrix(field, [list(r[:self.n_ramification]) for r in self.rows])

    def full_matrix(self, field):
        return Matrix(field, [list(r) for r in self.rows])


def codifferential_matrix(datum, split):
    pairs = minus_sym_basis(split)
    rows = []
    for (a, b) in pairs:
        cov = codifferential(datum, split, minus_sym_element(datum, split, a, b),
                             check_minus=False)
        rows.append(tuple(cov.slots()))
    return CodifferentialMatrix(tuple(rows), datum.n_ramification)


@dataclass(frozen=True)
class KernelEReport:
    """Kernel data of the base-fixed codifferential."""
    dim_dual: int            # dim Ker over the tensor space
    dim_primal: int          # dim Ker of the map on tangent vectors
    basis: tuple             # SymSquareElements spanning the dual kernel
    basis_minus_coords: tuple  # same vectors in minus-tensor coordinates
    matrix: CodifferentialMatrix


def kernel_E(datum, split):
    """Kernel of the residue slots on the trace-zero symmetric square.

    Asserts the exact dimension identity g(g-1)/2 - n + 1 and the dual count
    dim Ker = 1 on the tangent side; failure signals corrupt input because
    the identity is unconditional for non-hyperelliptic covers.
    """
    g, n = datum.genus, datum.n_ramification
    cmat = codifferential_matrix(datum, split)
    gam = cmat.gamma_matrix(datum.field)
    # kernel of the map tensor -> covector: vectors in row-index space
    kernel = gam.transpose().kernel_basis()
    rank = gam.rank()
    expected = g * (g - 1) // 2 - n + 1
    if len(kernel) != expected:
        raise IdentityViolated(
            f"dim Ker of the base-fixed codifferential is {len(kernel)}, "
            f"the identity requires g(g-1)/2 - n + 1 = {expected}")
    dim_primal = n - rank
    if dim_primal != 1:
        raise IdentityViolated(
            f"dim Ker of the base-fixed differential is {dim_primal}, "
            "the identity requires 1")
    pairs = minus_sym_basis(split)
    basis = []
    for vec in kernel:
        elem = SymSquareElement.zero(datum.field, g)
        for coef, (a, b) in zip(vec, pairs):
            if not coef.is_zero():
                elem = elem + minus_sym_element(datum, split, a, b).scale(coef)
        basis.append(elem)
    return KernelEReport(len(kernel), dim_primal, tuple(basis),
                         tuple(tuple(v) for v in kernel), cmat)


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of the minimal-kernel criterion.

    ``dimension`` is "1" exactly when some kernel tensor has a nonzero
    fiber sum (the witness); otherwise ">=2".  Vanishing of the fiber sum on
    the whole kernel is certified on the basis and on all pairwise sums of
    basis vectors (a finite polarization-style certificate rather than
    sampling).
    """
    dimension: str                   # "1" or ">=2"
    witness: Optional[SymSquareElement]
    witness_nu: Optional[object]
    nu_on_basis: tuple
    nu_on_pair_sums: tuple
    dim_kernel_E_dual: int
    dim_kernel_full_dual: int

    def to_json(self, field):
        return {
            "dim_kernel": self.dimension,
            "witness_nu": None if self.witness_nu is None
            else self.witness_nu.to_string(),
            "nu_on_basis": [x.to_string() for x in self.nu_on_basis],
            "nu_on_pair_sums": [x.to_string() for x in self.nu_on_pair_sums],
            "dim_kernel_E_dual": self.dim_kernel_E_dual,
            "dim_kernel_full_dual": self.dim_kernel_full_dual,
            "convention": "no 2*pi*i factor on residue slots",
        }


def kernel_full(datum, split, kernel_report):
    """Scan the base-fixed kernel for a tensor with nonzero fiber sum."""
    basis = kernel_report.basis
    nu_basis = tuple(nu(datum, split, b) for b in basis)
    witness = None
    witness_nu = None
    for b, val in zip(basis, nu_basis):
        if not val.is_zero():
            witness, witness_nu = b, val
            break
    nu_sums = []
    if witness is None:
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                val = nu(datum, split, basis[i] + basis[j])
                nu_sums.append(val)
                if not val.is_zero() and witness is None:
                    witness, witness_nu = basis[i] + basis[j], val
    if witness is not None:
        dimension = "1"
        dim_full = kernel_report.dim_dual - 1
    else:
        dimension = ">=2"
        dim_full = kernel_report.dim_dual
    return CriterionReport(dimension, witness, witness_nu, nu_basis,
                           tuple(nu_sums), kernel_report.dim_dual, dim_full)
