"""Truncated Laurent series over a cyclotomic scalar field.

A series carries its own truncation window: coefficients are known exactly
for every exponent v <= e < prec and unknown beyond.  Every operation
propagates the window (min-rule for sums, valuation-shifted rule for
products and quotients) and consumers fail loudly with InsufficientPrecision
instead of silently truncating; the downstream kernel computations rely on
certified windows.

Representation: ``coeffs[0]`` is the coefficient at exponent ``valuation``
and is nonzero unless the series is the tracked-precision zero series, in
which case ``coeffs`` is empty and ``valuation == prec``.
"""

from __future__ import annotations

from .errors import (DivisionByZeroSeries, FieldError, InsufficientPrecision,
                     NonDivisibleValuation, NotAnNthPower, SingularJacobian,
                     ValuationError)
from .scalars import Scalar


class TruncatedSeries:

    __slots__ = ("field", "valuation", "coeffs", "prec")

    def __init__(self, field, valuation, coeffs, prec):
        self.field = field
        coeffs = [field.scalar(c) for c in coeffs]
        valuation = int(valuation)
        prec = int(prec)
        if valuation + len(coeffs) > prec:
            raise ValueError("coefficients extend beyond the stated precision")
        # normalize: strip leading zeros, collapse the zero series
        while coeffs and coeffs[0].is_zero():
            coeffs.pop(0)
            valuation += 1
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            valuation = prec
        self.valuation = valuation
        self.coeffs = tuple(coeffs)
        self.prec = prec

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field, prec):
        return cls(field, prec, [], prec)

    @classmethod
    def monomial(cls, field, exponent, coeff, prec):
        return cls(field, exponent, [coeff], prec)

    @classmethod
    def from_coefficients(cls, field, start_exponent, coeffs, prec=None):
        if prec is None:
            prec = start_exponent + len(coeffs)
        return cls(field, start_exponent, coeffs, prec)

    @classmethod
    def identity(cls, field, prec):
        """The series z, known to the given precision."""
        return cls.monomial(field, 1, field.one(), prec)

    # -- basics ---------------------------------------------------------------

    def is_zero(self):
        """True when no nonzero coefficient is known (within the window)."""
        return not self.coeffs

    def relative_precision(self):
        return self.prec - self.valuation

    def coefficient(self, exponent):
        if exponent >= self.prec:
            raise InsufficientPrecision(
                f"coefficient at exponent {exponent} outside window "
                f"[{self.valuation}, {self.prec})")
        if exponent < self.valuation or \
                exponent - self.valuation >= len(self.coeffs):
            return self.field.zero()
        return self.coeffs[exponent - self.valuation]

    def coefficients_in(self, start, stop):
        """Known coefficients for exponents start..stop-1 (stop <= prec)."""
        return [self.coefficient(e) for e in range(start, stop)]

    def truncate(self, new_prec):
        if new_prec > self.prec:
            raise InsufficientPrecision(
                f"cannot extend window from {self.prec} to {new_prec}")
        keep = [c for i, c in enumerate(self.coeffs)
                if self.valuation + i < new_prec]
        return TruncatedSeries(self.field, min(self.valuation, new_prec),
                               keep, new_prec)

    def shift(self, k):
        """Multiply by z^k (exact)."""
        return TruncatedSeries(self.field, self.valuation + k, self.coeffs,
                               self.prec + k)

    def scale(self, scalar):
        scalar = self.field.scalar(scalar)
        if scalar.is_zero():
            return TruncatedSeries.zero(self.field, self.prec)
        return TruncatedSeries(self.field, self.valuation,
                               [scalar * c for c in self.coeffs], self.prec)

    # -- arithmetic -------------------------------------------------------------

    def _check_field(self, other):
        if self.field != other.field:
            raise FieldError("mixed-field series arithmetic")

    def __add__(self, other):
        self._check_field(other)
        prec = min(self.prec, other.prec)
        lo = min(self.valuation, other.valuation, prec)
        out = [self.field.zero()] * (prec - lo)
        for i, c in enumerate(self.coeffs):
            e = self.valuation + i
            if e < prec:
                out[e - lo] = out[e - lo] + c
        for i, c in enumerate(other.coeffs):
            e = other.valuation + i
            if e < prec:
                out[e - lo] = out[e - lo] + c
        return TruncatedSeries(self.field, lo, out, prec)

    def __neg__(self):
        return TruncatedSeries(self.field, self.valuation,
                               [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check_field(other)
        prec = min(self.valuation + other.prec, other.valuation + self.prec)
        lo = self.valuation + other.valuation
        out = [self.field.zero()] * max(0, prec - lo)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            ea = self.valuation + i
            for j, b in enumerate(other.coeffs):
                e = ea + other.valuation + j
                if e >= prec:
                    break
                if not b.is_zero():
                    out[e - lo] = out[e - lo] + a * b
        return TruncatedSeries(self.field, min(lo, prec), out, prec)

    def inverse(self):
        """Reciprocal of a series that is nonzero up to its precision."""
        if self.is_zero():
            raise DivisionByZeroSeries(
                "inverse of a series that is zero to its precision")
        rel = self.relative_precision()
        lead = self.coeffs[0]
        lead_inv = lead.inverse()
        # unit part u = self / (lead * z^v); invert by the standard recurrence
        u = [self.coefficient(self.valuation + i) * lead_inv
             for i in range(rel)]
        inv = [self.field.one()] + [self.field.zero()] * (rel - 1)
        for k in range(1, rel):
            acc = self.field.zero()
            for i in range(1, k + 1):
                if not u[i].is_zero() and not inv[k - i].is_zero():
                    acc = acc + u[i] * inv[k - i]
            inv[k] = -acc
        out = [c * lead_inv for c in inv]
        return TruncatedSeries(self.field, -self.valuation, out,
                               -self.valuation + rel)

    def __truediv__(self, other):
        self._check_field(other)
        if other.is_zero():
            raise DivisionByZeroSeries("division by the zero series")
        return self * other.inverse()

    def derivative(self):
        out = []
        lo = self.valuation - 1
        for i, c in enumerate(self.coeffs):
            e = self.valuation + i
            out.append(c * e)
        return TruncatedSeries(self.field, lo, out, self.prec - 1)

    def add_constant(self, scalar):
        """Add an exact constant without losing window width."""
        scalar = self.field.scalar(scalar)
        const = TruncatedSeries(self.field, 0, [scalar], max(self.prec, 1))
        return self + const

    # -- analytic operations ------------------------------------------------------

    def residue(self):
        """Coefficient of z^(-1), interpreting the series as a 1-form coefficient."""
        if self.prec <= -1:
            raise InsufficientPrecision(
                f"window [{self.valuation}, {self.prec}) does not reach exponent -1")
        if self.valuation > -1:
            return self.field.zero()
        return self.coefficient(-1)

    def compose(self, inner):
        """self(inner) for an inner series with valuation >= 1."""
        self._check_field(inner)
        if inner.is_zero() or inner.valuation < 1:
            raise ValuationError("composition requires inner valuation >= 1")
        vg = inner.valuation
        # window of the result: error from outer truncation is O(inner^prec);
        # error from inner truncation is O(z^(inner.prec + (v-1)*vg))
        prec = min(vg * self.prec, inner.prec + (self.valuation - 1) * vg)
        work = prec - min(0, self.valuation - 1) * vg + 1
        zero = TruncatedSeries.zero(self.field, work)
        inner_w = inner
        acc = zero
        # nonnegative powers by Horner from the top
        for e in range(self.prec - 1, max(self.valuation, 0) - 1, -1):
            acc = acc * inner_w
            c = self.coefficient(e)
            if not c.is_zero():
                acc = acc.add_constant(c)
        if self.valuation > 0:
            for _ in range(self.valuation):
                acc = acc * inner_w
        result = acc
        # negative powers via the reciprocal of inner
        if self.valuation < 0:
            inv = inner_w.inverse()
            power = inv
            neg = zero
            for e in range(-1, self.valuation - 1, -1):
                c = self.coefficient(e)
                if not c.is_zero():
                    neg = neg + power.scale(c)
                if e > self.valuation:
                    power = power * inv
            result = result + neg
        return result.truncate(min(prec, result.prec))

    def nth_root(self, n):
        """g with g^n = self, leading coefficient the designated n-th root.

        Requires n | valuation and a rational leading coefficient with a
        rational real n-th root (the canonical choice; anything else raises
        NotAnNthPower so the caller can extend the field).
        """
        if n < 1:
            raise ValueError("root order must be positive")
        if self.is_zero():
            raise NotAnNthPower("the zero series has no designated n-th root")
        if self.valuation % n != 0:
            raise NonDivisibleValuation(
                f"valuation {self.valuation} not divisible by {n}")
        lead_root = self.coeffs[0].nth_root_rational(n)
        rel = self.relative_precision()
        v = self.valuation // n
        unit = self.shift(-self.valuation).scale(self.coeffs[0].inverse())
        # Newton iteration for u with u^n = unit, u(0) = 1
        u = TruncatedSeries(self.field, 0, [self.field.one()], rel)
        known = 1
        n_scalar = self.field.scalar(n)
        while known < rel:
            known = min(2 * known, rel)
            power = _pow(u, n - 1)
            f = power * u - unit
            u = u - f / (power.scale(n_scalar))
        root = u.scale(lead_root).shift(v)
        check = _pow(root, n)
        window = min(check.prec, self.prec)
        if not (check - self).truncate(window).is_zero():
            raise AssertionError("n-th root verification failed")
        return root.truncate(v + rel)

    def reversion(self):
        """Compositional inverse g with self(g) = z, for valuation exactly 1."""
        if self.valuation != 1:
            raise ValuationError(
                f"reversion requires valuation 1, got {self.valuation}")
        rel = self.relative_precision()
        ident = TruncatedSeries.identity(self.field, rel + 1)
        g = ident.scale(self.coeffs[0].inverse()).truncate(2)
        known = 2
        while known < rel + 1:
            known = min(2 * known, rel + 1)
            g = TruncatedSeries(self.field, g.valuation, g.coeffs, known)
            err = self.truncate(min(self.prec, known)).compose(g) - \
                ident.truncate(known)
            dg = self.derivative().compose(g)
            g = (g - err / dg).truncate(known)
        g = g.truncate(rel + 1 if rel + 1 <= g.prec else g.prec)
        check = self.compose(g)
        window = min(check.prec, rel + 1)
        if not (check - ident.truncate(window)).truncate(window).is_zero():
            raise AssertionError("reversion verification failed")
        return g

    # -- serialization ------------------------------------------------------------

    def to_json(self):
        return {"valuation": self.valuation,
                "prec": self.prec,
                "coeffs": [c.to_string() for c in self.coeffs]}

    @classmethod
    def from_json(cls, field, obj):
        return cls(field, obj["valuation"],
                   [Scalar.from_string(field, s) for s in obj["coeffs"]],
                   obj["prec"])

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and
                self.field == other.field and
                self.valuation == other.valuation and
                self.coeffs == other.coeffs and
                self.prec == other.prec)

    def __repr__(self):
        if self.is_zero():
            return f"O(z^{self.prec})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            e = self.valuation + i
            cs = c.to_string()
            if "+" in cs or "*" in cs:
                cs = f"({cs})"
            terms.append(cs if e == 0 else f"{cs}*z^{e}")
        return " + ".join(terms) + f" + O(z^{self.prec})"


def _pow(s, n):
    if n == 0:
        return TruncatedSeries(s.field, 0, [s.field.one()],
                               s.relative_precision())
    out = s
    for _ in range(n - 1):
        out = out * s
    return out


def series_arith(a, b, op):
    """Dispatch basic series arithmetic by name."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def newton_solve(coeffs_in_y, seed, target_prec):
    """Series solution of F(z, y) = 0 by Newton iteration.

    ``coeffs_in_y`` lists the coefficients of F as a polynomial in y, each a
    TruncatedSeries in z (constant coefficients may be given as exact scalars
    wrapped at high precision by the caller).  The seed must satisfy
    F(seed) = 0 within its own window and dF/dy(seed) must be a unit.
    """
    field = seed.field
    work = target_prec + 1

    def lift(s, prec):
        return TruncatedSeries(s.field, s.valuation if s.coeffs else prec,
                               s.coeffs, prec)

    cs = [lift(c, max(c.prec, work)) if c.prec < work else c
          for c in coeffs_in_y]

    def f_at(y):
        acc = TruncatedSeries.zero(field, y.prec + max(0, y.valuation) + 1)
        for c in reversed(cs):
            acc = acc * y + c
        return acc

    def fprime_at(y):
        acc = TruncatedSeries.zero(field, y.prec + max(0, y.valuation) + 1)
        for k in range(len(cs) - 1, 0, -1):
            acc = acc * y + cs[k].scale(field.scalar(k))
        return acc

    if not f_at(seed).truncate(min(seed.prec, f_at(seed).prec)).is_zero():
        raise ValueError("seed does not satisfy the equation to its precision")
    deriv = fprime_at(seed)
    if deriv.is_zero() or deriv.valuation != 0:
        raise SingularJacobian(
            "dF/dy at the seed is not a unit; Newton cannot start")

    y = lift(seed, work)
    known = max(1, seed.prec - seed.valuation)
    while known < target_prec:
        known = min(2 * known, target_prec)
        correction = f_at(y) / fprime_at(y)
        y = (y - correction).truncate(work)
    y = y.truncate(target_prec)
    if not f_at(y).truncate(target_prec).is_zero():
        raise AssertionError("Newton result fails the equation to target precision")
    return y


def transform_form(coefficient_series, substitution):
    """Rewrite a 1-form coefficient under a parameter substitution.

    If the form is s(z) dz and z = phi(u), the new coefficient series is
    s(phi(u)) * phi'(u).  Residues are invariant under this operation, which
    is what licenses arbitrary local parameters in covering data.
    """
    return coefficient_series.compose(substitution) * substitution.derivative()


def transform_quadratic(coefficient_series, substitution):
    """Same as transform_form for quadratic differentials: s(phi) * phi'^2."""
    d = substitution.derivative()
    return coefficient_series.compose(substitution) * d * d
