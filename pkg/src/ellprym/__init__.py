"""Exact Prym period-map codifferentials for branched covers of elliptic curves.

The package computes, in exact cyclotomic arithmetic, the codifferential of
the Prym period map attached to a branched cover of an elliptic curve, its
kernel dimensions, and the canonical-model criterion deciding whether the
kernel is minimal.  Covering data for cyclic covers of Weierstrass curves is
constructed exactly from curve equations.
"""

from .scalars import FieldSpec, Matrix, Scalar
from .series import TruncatedSeries

__all__ = ["FieldSpec", "Matrix", "Scalar", "TruncatedSeries"]
__version__ = "0.1.0"
