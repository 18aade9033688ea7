"""Exact construction of covering data for cyclic covers of elliptic curves.

The input is a Weierstrass curve y^2 = x^3 + Ax + B, a function h on it, a
prime order N and a fiber base point c.  The cover is w^N = h; at every
divisor point of h the valuation must be divisible by N (unramified layer)
or have absolute value 1 (total ramification) -- the only shapes this
builder supports.

Construction is purely algebraic.  Charts use w (or 1/w) as the local
parameter; the base uniformizer is re-expressed through it by reverting the
local series of h, so no transcendental coordinate ever appears.  The
differential basis consists of f * w^(-k) * (pullback of dx/y) with f
running over Riemann-Roch bases of explicit divisors; holomorphy of every
emitted form is re-proved from its chart expansions rather than trusted
from the divisor recipe.

Deck-transformation convention: the generator sends w to zeta_N * w, acts
diagonally on the basis, fixes each ramification chart (reparametrizing the
local parameter by a root of unity) and rotates the fiber.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .covering import (CoveringDatum, FiberChart, RamificationChart,
                       require_valid)
from .equivariant import CyclicAction
from .errors import (BuilderError, DivisionByZero, FieldTooSmall,
                     InputError, NotAnNthPower, PointOutsideField,
                     PrecisionUnreachable, SchemaError, UnsupportedOrder,
                     UnsupportedRamification)
from .scalars import FieldSpec, Matrix, Scalar
from .series import TruncatedSeries, newton_solve

SUPPORTED_COVER_ORDERS = (2, 3, 5, 7, 11, 13)


# ---------------------------------------------------------------------------
# polynomials over the scalar field (dense, low-to-high)
# ---------------------------------------------------------------------------

def _ptrim(p):
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def _pzero(poly):
    return not _ptrim(poly)


def _padd(f, a, b):
    out = [f.zero()] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = out[i] + c
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _ptrim(out)


def _pmul(f, a, b):
    if _pzero(a) or _pzero(b):
        return []
    out = [f.zero()] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            if not bj.is_zero():
                out[i + j] = out[i + j] + ai * bj
    return _ptrim(out)


def _pscale(a, s):
    return [c * s for c in a]


def _peval(f, poly, value):
    acc = f.zero()
    for c in reversed(poly):
        acc = acc * value + c
    return acc


def _peval_series(f, poly, series):
    acc = TruncatedSeries.zero(f, series.prec + abs(series.valuation) + 1)
    for c in reversed(poly):
        acc = acc * series
        if not c.is_zero():
            acc = acc.add_constant(c)
    return acc


def _pdiv_linear(f, poly, root):
    """Synthetic division by (x - root); returns (quotient, remainder)."""
    quot = []
    acc = f.zero()
    for c in reversed(poly):
        quot.append(acc)
        acc = acc * root + c
    quot = list(reversed(quot))[:-1]  # drop the seeding zero above the lead
    return _ptrim(quot), acc


def _rational_roots(poly):
    """All rational roots (with multiplicity) of a rational-coefficient polynomial."""
    coeffs = [c.rational_value() for c in poly]
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    if not ints:
        return []
    roots = []
    # factor out x^m
    m = 0
    while ints[m] == 0:
        m += 1
    if m:
        roots.extend([Fraction(0)] * m)
        ints = ints[m:]
    if len(ints) <= 1:
        return roots
    for p in _divisors(abs(ints[0])):
        for q in _divisors(abs(ints[-1])):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                while _eval_int_poly(ints, cand) == 0:
                    roots.append(cand)
                    ints = _deflate(ints, cand)
                    if len(ints) <= 1:
                        return roots
    return roots


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    if n == 0:
        return [1]
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _eval_int_poly(ints, x):
    acc = Fraction(0)
    for c in reversed(ints):
        acc = acc * x + c
    return acc


def _deflate(ints, root):
    fracs = [Fraction(c) for c in ints]
    quot = []
    acc = Fraction(0)
    for c in reversed(fracs):
        quot.append(acc)
        acc = acc * root + c
    quot = list(reversed(quot))[:-1]
    den = 1
    for c in quot:
        den = den * c.denominator // _gcd(den, c.denominator)
    return [int(c * den) for c in quot]


# ---------------------------------------------------------------------------
# curve, points, functions
# ---------------------------------------------------------------------------

class _InfinityPoint:
    __slots__ = ()

    def __repr__(self):
        return "O"

    def __eq__(self, other):
        return isinstance(other, _InfinityPoint)

    def __hash__(self):
        return hash("_ellprym_point_at_infinity")


INFINITY = _InfinityPoint()


@dataclass(frozen=True)
class Point:
    x: Scalar
    y: Scalar

    def __repr__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class EllipticCurve:
    """y^2 = x^3 + Ax + B with nonzero discriminant."""
    field: FieldSpec
    A: Scalar
    B: Scalar

    def __post_init__(self):
        disc = self.A ** 3 * 4 + self.B ** 2 * 27
        if disc.is_zero():
            raise InputError("singular curve: 4A^3 + 27B^2 = 0")

    def rhs(self):
        f = self.field
        return [self.B, self.A, f.zero(), f.one()]

    def contains(self, pt):
        if pt is INFINITY:
            return True
        return pt.y * pt.y == _peval(self.field, self.rhs(), pt.x)

    def is_two_torsion(self, pt):
        return pt is not INFINITY and pt.y.is_zero()

    def point(self, x, y):
        pt = Point(self.field.scalar(x), self.field.scalar(y))
        if not self.contains(pt):
            raise InputError(f"point {pt} is not on the curve")
        return pt


@dataclass(frozen=True)
class CurveFunction:
    """(P(x) + y Q(x)) / den(x), reduced through the curve equation."""
    curve: EllipticCurve
    P: tuple
    Q: tuple
    den: tuple

    @classmethod
    def make(cls, curve, P, Q=(), den=None):
        f = curve.field
        P = tuple(_ptrim([f.scalar(c) for c in P]))
        Q = tuple(_ptrim([f.scalar(c) for c in Q]))
        den = tuple(_ptrim([f.scalar(c) for c in den])) if den else (f.one(),)
        if not den:
            raise DivisionByZero("zero denominator polynomial")
        return cls(curve, P, Q, den)

    def is_zero(self):
        return not self.P and not self.Q

    def evaluate(self, pt):
        f = self.curve.field
        d = _peval(f, list(self.den), pt.x)
        if d.is_zero():
            raise DivisionByZero(f"denominator vanishes at {pt}")
        num = _peval(f, list(self.P), pt.x) + pt.y * _peval(f, list(self.Q), pt.x)
        return num / d

    def series_from_xy(self, x_series, y_series):
        f = self.curve.field
        num = _peval_series(f, list(self.P), x_series)
        if self.Q:
            num = num + _peval_series(f, list(self.Q), x_series) * y_series
        d = _peval_series(f, list(self.den), x_series)
        return num / d

    def conjugate(self):
        f = self.curve.field
        return CurveFunction(self.curve, self.P,
                             tuple(-c for c in self.Q), self.den)

    def pole_bound_at_infinity(self):
        degP = len(self.P) - 1 if self.P else -1
        degQ = len(self.Q) - 1 if self.Q else -1
        num = max(2 * degP if degP >= 0 else -10 ** 9,
                  2 * degQ + 3 if degQ >= 0 else -10 ** 9)
        return num + 2 * (len(self.den) - 1)

    def __repr__(self):
        def fmt(poly):
            return "[" + ", ".join(c.to_string() for c in poly) + "]"
        s = f"({fmt(self.P)} + y*{fmt(self.Q)})"
        if len(self.den) > 1 or not self.den[0] == self.curve.field.one():
            s += f"/{fmt(self.den)}"
        return s


# ---------------------------------------------------------------------------
# local expansions on the base curve
# ---------------------------------------------------------------------------

def base_series(curve, place, prec):
    """Expansions of (x, y) in the designated uniformizer at a place.

    Finite non-2-torsion: t = x - x0.  2-torsion: t = y (the x-line is
    tangent there).  Infinity: t = x/y.
    """
    f = curve.field
    big = prec + 4

    def const(c, p=big):
        return TruncatedSeries.from_coefficients(f, 0, [c], p)

    if place is INFINITY:
        # x = v/t^2, y = v/t^3 with v^3 - v^2 + A t^4 v + B t^6 = 0, v(0)=1
        coeffs = [
            TruncatedSeries.monomial(f, 6, curve.B, big),
            TruncatedSeries.monomial(f, 4, curve.A, big),
            const(f.scalar(-1)),
            const(f.one()),
        ]
        seed = TruncatedSeries.from_coefficients(f, 0, [f.one()], 1)
        v = newton_solve(coeffs, seed, prec)
        x = v.shift(-2)
        y = v.shift(-3)
        return x, y
    if place.y.is_zero():
        # t = y; solve X^3 + A X + (B - t^2) = 0 near x0
        coeffs = [
            TruncatedSeries.from_coefficients(f, 0, [curve.B], big) -
            TruncatedSeries.monomial(f, 2, f.one(), big),
            const(curve.A),
            const(f.zero()),
            const(f.one()),
        ]
        seed = TruncatedSeries.from_coefficients(f, 0, [place.x], 1)
        x = newton_solve(coeffs, seed, prec)
        y = TruncatedSeries.identity(f, prec)
        return x, y
    # t = x - x0; y = sqrt(f(x0 + t)) with sign chosen by the seed
    x = TruncatedSeries.from_coefficients(f, 0, [place.x], prec) + \
        TruncatedSeries.identity(f, prec)
    shifted = _peval_series(f, curve.rhs(), x)
    coeffs = [
        -shifted,
        TruncatedSeries.zero(f, big),
        TruncatedSeries.from_coefficients(f, 0, [f.one()], big),
    ]
    seed = TruncatedSeries.from_coefficients(f, 0, [place.y], 1)
    y = newton_solve(coeffs, seed, prec)
    return x, y


def valuation_at(fn, place, hint=8):
    """Exact valuation of a curve function at a place, via local series."""
    prec = hint
    bound = fn.pole_bound_at_infinity() + abs(hint) + 6
    while prec <= max(bound, hint) + 30:
        x, y = base_series(fn.curve, place, prec)
        s = fn.series_from_xy(x, y)
        if not s.is_zero():
            return s.valuation
        prec *= 2
    raise BuilderError(f"function appears to vanish identically at {place}")


# ---------------------------------------------------------------------------
# divisors
# ---------------------------------------------------------------------------

def divisor_of(curve, fn):
    """The exact divisor of a nonzero curve function, infinity included.

    Points whose coordinates do not lie in the field are reported through
    PointOutsideField together with their defining polynomials, so the
    caller may extend the field.  Degrees always sum to zero (checked).
    """
    if fn.is_zero():
        raise InputError("zero function has no divisor")
    f = curve.field
    div = {}
    outside = []

    def add(place, mult):
        if mult:
            div[place] = div.get(place, 0) + mult
            if div[place] == 0:
                del div[place]

    # numerator part: norm polynomial P^2 - rhs * Q^2
    norm = _psub_poly(f, _pmul(f, list(fn.P), list(fn.P)),
                      _pmul(f, curve.rhs(), _pmul(f, list(fn.Q), list(fn.Q))))
    _collect_affine(curve, CurveFunction(curve, fn.P, fn.Q, (f.one(),)),
                    norm, add, outside, sign=+1)
    # denominator part
    if len(fn.den) > 1:
        den_norm = _pmul(f, list(fn.den), list(fn.den))
        _collect_affine(curve,
                        CurveFunction(curve, fn.den, (), (f.one(),)),
                        den_norm, add, outside, sign=-1)
    if outside:
        raise PointOutsideField(outside)

    v_inf = valuation_at(fn, INFINITY,
                         hint=max(8, fn.pole_bound_at_infinity() + 4))
    add(INFINITY, v_inf)
    total = sum(div.values())
    if total != 0:
        raise BuilderError(f"divisor degrees sum to {total}, not 0")
    return div


def _psub_poly(f, a, b):
    return _padd(f, a, _pscale(b, f.scalar(-1)))


def _collect_affine(curve, numerator_fn, norm, add, outside, sign):
    """Resolve affine divisor points of a polynomial curve function."""
    f = curve.field
    if _pzero(norm):
        raise BuilderError("norm polynomial vanished; function is degenerate")
    rational = all(c.is_rational() for c in norm)
    if rational:
        work = list(norm)
    else:
        # multiply the Galois conjugates to reach rational coefficients
        work = list(norm)
        n = f.cyclotomic_order
        for a in range(2, n + 1):
            if _gcd(a, n) == 1 and n > 1:
                work = _pmul(f, work, [c.galois(a) for c in norm])
        if not all(c.is_rational() for c in work):
            raise BuilderError("Galois norm is not rational")
    roots = {}
    for r in _rational_roots(work):
        roots[r] = roots.get(r, 0) + 1
    leftover_degree = len(_ptrim(list(norm))) - 1
    for x0, _ in sorted(roots.items()):
        x0s = f.scalar(x0)
        if not _peval(f, list(norm), x0s).is_zero():
            continue  # root of a conjugate factor only
        mult = 0
        probe = list(norm)
        while True:
            quot, rem = _pdiv_linear(f, probe, x0s)
            if not rem.is_zero():
                break
            probe = quot
            mult += 1
        leftover_degree -= mult
        fx = _peval(f, curve.rhs(), x0s)
        if fx.is_zero():
            pt = Point(x0s, f.zero())
            v = valuation_at(numerator_fn, pt, hint=2 * mult + 6)
            if v != mult:
                raise BuilderError(
                    f"2-torsion valuation {v} inconsistent with norm "
                    f"multiplicity {mult} at x = {x0}")
            add(pt, sign * v)
            continue
        y0 = _rational_sqrt_in_field(fx)
        if y0 is None:
            outside.append(f"y^2 - ({fx.to_string()}) at x = {x0}")
            continue
        for yy in (y0, -y0):
            pt = Point(x0s, yy)
            v = valuation_at(numerator_fn, pt, hint=mult + 6)
            add(pt, sign * v)
            mult -= v
        if mult != 0:
            raise BuilderError(
                f"valuations at x = {x0} inconsistent with norm multiplicity")
    if leftover_degree > 0:
        tail = _ptrim(list(norm))
        outside.append(
            "unresolved factor of degree "
            f"{leftover_degree} in norm polynomial "
            f"[{', '.join(c.to_string() for c in tail)}]")


def _rational_sqrt_in_field(value):
    """Square root of a rational field element, if rational; else None."""
    if not value.is_rational():
        return None
    from .scalars import rational_nth_root
    r = rational_nth_root(value.rational_value(), 2)
    return None if r is None else value.field.scalar(r)


# ---------------------------------------------------------------------------
# Riemann-Roch spaces
# ---------------------------------------------------------------------------

def riemann_roch_basis(curve, divisor):
    """Deterministic basis of L(D) = { f : div f + D >= 0 }.

    Strategy: clear allowed finite poles with a product of vertical-line
    functions, put an ansatz in the monomial space with poles only at
    infinity, impose the vanishing conditions through local series and take
    the exact kernel.  The dimension is checked against deg D.
    """
    f = curve.field
    deg = sum(divisor.values())
    clear = [f.one()]
    residual = dict(divisor)
    for place, mult in sorted(divisor.items(), key=_place_sort_key):
        if place is INFINITY or mult <= 0:
            continue
        line = [-place.x, f.one()]
        for _ in range(mult):
            clear = _pmul(f, clear, line)
        # subtract div((x - x0)^mult) from the requirement
        conj = place if curve.is_two_torsion(place) else Point(place.x, -place.y)
        if curve.is_two_torsion(place):
            residual[place] = residual.get(place, 0) - 2 * mult
        else:
            residual[place] = residual.get(place, 0) - mult
            residual[conj] = residual.get(conj, 0) - mult
        residual[INFINITY] = residual.get(INFINITY, 0) + 2 * mult

    M = residual.get(INFINITY, 0)
    if M < 0:
        return []
    monomials = _monomials_up_to(curve, M)
    constraints = []
    for place, mult in sorted(residual.items(), key=_place_sort_key):
        if place is INFINITY or mult >= 0:
            continue
        order = -mult
        x, y = base_series(curve, place, order + 2)
        series = [m.series_from_xy(x, y) for m in monomials]
        for e in range(order):
            constraints.append([s.coefficient(e) for s in series])
    if constraints:
        kernel = Matrix(f, constraints).kernel_basis()
    else:
        kernel = [[f.one() if i == j else f.zero()
                   for i in range(len(monomials))]
                  for j in range(len(monomials))]
    basis = []
    for vec in kernel:
        P, Q = [], []
        for coef, mono in zip(vec, monomials):
            if coef.is_zero():
                continue
            if mono.Q:
                Q = _padd(f, Q, _pscale(list(mono.Q), coef))
            else:
                P = _padd(f, P, _pscale(list(mono.P), coef))
        basis.append(CurveFunction.make(curve, P, Q,
                                        clear if len(clear) > 1 else None))
    expected = deg if deg >= 1 else (1 if not divisor else None)
    if expected is not None and len(basis) != expected:
        from .errors import DimensionMismatch
        raise DimensionMismatch(
            f"Riemann-Roch space has dimension {len(basis)}, expected {expected}")
    return basis


def _place_sort_key(item):
    place, _ = item
    if place is INFINITY:
        return (1, (), ())
    return (0, place.x.coeffs, place.y.coeffs)


def _monomials_up_to(curve, M):
    """Monomials 1, x, y, x^2, xy, ... with pole order at infinity <= M."""
    f = curve.field
    out = []
    entries = []
    i = 0
    while 2 * i <= M:
        entries.append((2 * i, i, 0))
        i += 1
    i = 0
    while 2 * i + 3 <= M:
        entries.append((2 * i + 3, i, 1))
        i += 1
    entries.sort()
    for _, i, j in entries:
        xs = [f.zero()] * i + [f.one()]
        if j:
            out.append(CurveFunction.make(curve, (), xs))
        else:
            out.append(CurveFunction.make(curve, xs))
    return out


# ---------------------------------------------------------------------------
# cover specification and construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CyclicCoverSpec:
    curve: EllipticCurve
    h: CurveFunction
    order: int
    base_point: Union[Point, str]    # a Point or "auto"
    precision: Optional[int] = None  # chart coefficient window; None = default


@dataclass(frozen=True)
class BuildResult:
    datum: CoveringDatum
    action: CyclicAction
    spec: CyclicCoverSpec
    base_point: Point
    root_value: Scalar               # designated N-th root of h(c)
    basis_plan: tuple                # (k, CurveFunction) per basis form
    eigen_dims: tuple                # dim L(D_k) per character exponent k

    def probe_fiber(self, point):
        """Ratio rows over a second unramified fiber (for cross-validation).

        The point must be admissible like the base point: on the curve, h
        nonzero there and an exact N-th power.
        """
        curve = self.spec.curve
        if not curve.contains(point) or point is INFINITY:
            raise InputError("probe point must be an affine curve point")
        value = self.spec.h.evaluate(point)
        if value.is_zero():
            raise InputError("probe point is a branch point")
        root = value.nth_root_rational(self.spec.order)
        field = curve.field
        zeta = field.root_of_unity(self.spec.order)
        rows = []
        for kk in range(self.spec.order):
            w = zeta ** kk * root
            rows.append(tuple(fn.evaluate(point) * w ** (-k)
                              for (k, fn) in self.basis_plan))
        return tuple(rows)


def default_chart_window(genus, n_ram, index):
    return -(-(4 * genus - 3) // n_ram) + index + 2


def build_cover(spec):
    """Construct the covering datum and deck action for w^N = h."""
    curve = spec.curve
    field = curve.field
    N = spec.order
    if N not in SUPPORTED_COVER_ORDERS:
        raise UnsupportedOrder(
            f"cover order must be prime in {SUPPORTED_COVER_ORDERS}, got {N}")
    if not field.contains_root_of_unity(N):
        raise FieldTooSmall(
            f"Q(zeta_{field.cyclotomic_order}) lacks a primitive {N}-th root "
            "of unity")
    if spec.h.is_zero():
        raise InputError("cover function is zero")

    div = divisor_of(curve, spec.h)
    ram = []
    for place, v in sorted(div.items(), key=_place_sort_key):
        if abs(v) == 1:
            if place is INFINITY:
                raise UnsupportedRamification(
                    "simple zero or pole at infinity is not supported")
            ram.append((place, v))
        elif v % N != 0:
            raise UnsupportedRamification(
                f"valuation {v} at {place}: need |v| = 1 or {N} | v")
    r = len(ram)
    if r == 0:
        raise UnsupportedRamification("cover is unramified; no data to build")
    if (N - 1) * r % 2 != 0:
        raise BuilderError("parity violation in the ramification count")
    genus = 1 + (N - 1) * r // 2
    if genus < 3:
        raise UnsupportedRamification(
            f"genus {genus} < 3: the canonical-model analysis needs g >= 3")

    c, root = _resolve_base_point(spec, div)

    # divisor allowances for each character exponent
    plans, eigen_dims = [], []
    for k in range(N):
        D = {}
        for place, v in div.items():
            if abs(v) == 1:
                allow = -_ceil_div(k * v - N + 1, N)
            else:
                allow = -(k * (v // N))
            if allow:
                D[place] = allow
        basis_k = riemann_roch_basis(curve, D)
        eigen_dims.append(len(basis_k))
        plans.extend((k, fn) for fn in basis_k)
    if sum(eigen_dims) != genus:
        raise BuilderError(
            f"character space dimensions {eigen_dims} do not sum to g = {genus}")

    window = spec.precision if spec.precision is not None else \
        default_chart_window(genus, r, N)
    if window < 1:
        raise PrecisionUnreachable("requested window is empty")

    charts = []
    for place, v in ram:
        charts.append(_build_chart(curve, spec.h, place, v, N, window, plans))

    zeta = field.root_of_unity(N)
    rows = []
    for kk in range(N):
        w = zeta ** kk * root
        rows.append(tuple(fn.evaluate(c) * w ** (-k) for (k, fn) in plans))
    # the base point is recorded in the labels for reproducibility
    labels = tuple(f"x{kk + 1}@({c.x},{c.y})" for kk in range(N))

    names = []
    for k, fn in plans:
        names.append("alpha" if k == 0 and len(fn.P) == 1 and not fn.Q
                     else f"{_fn_name(fn)}*w^-{k}" if k else _fn_name(fn))

    datum = CoveringDatum(field, genus, N, tuple(charts),
                          FiberChart(labels, tuple(rows)), tuple(names), 0)
    require_valid(datum)

    matrix = Matrix(field,
                    [[(zeta ** (-plans[i][0]) if i == j else field.zero())
                      for j in range(len(plans))]
                     for i in range(len(plans))])
    moves = []
    for (place, v), chart in zip(ram, charts):
        twist = zeta if v == 1 else zeta ** (N - 1)
        moves.append((len(moves),
                      TruncatedSeries.monomial(field, 1, twist, chart.window())))
    perm = tuple((kk + 1) % N for kk in range(N))
    action = CyclicAction(N, matrix, tuple(moves), perm)

    return BuildResult(datum, action, spec, c, root, tuple(plans),
                       tuple(eigen_dims))


def _fn_name(fn):
    names = []
    for i, c in enumerate(fn.P):
        if not c.is_zero():
            names.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
    for i, c in enumerate(fn.Q):
        if not c.is_zero():
            names.append("y" if i == 0 else f"y*x^{i}")
    base = "+".join(names) if names else "0"
    if len(fn.den) > 1:
        base = f"({base})/den"
    return base


def _ceil_div(a, b):
    return -((-a) // b)


def _resolve_base_point(spec, divisor):
    """Find or check the fiber base point; returns (point, designated root)."""
    curve, h, N = spec.curve, spec.h, spec.order
    if isinstance(spec.base_point, Point):
        c = spec.base_point
        if not curve.contains(c):
            raise InputError(f"base point {c} is not on the curve")
        if c in divisor:
            raise InputError(f"base point {c} is a branch point")
        value = h.evaluate(c)
        if value.is_zero():
            raise InputError("cover function vanishes at the base point")
        try:
            root = value.nth_root_rational(N)
        except NotAnNthPower as exc:
            raise FieldTooSmall(
                f"h(c) = {value} is not an exact {N}-th power; rescale the "
                "cover function or extend the field") from exc
        return c, root
    if spec.base_point != "auto":
        raise InputError("base point must be a Point or the string 'auto'")
    if not (curve.A.is_rational() and curve.B.is_rational()):
        raise InputError("automatic base point search needs rational A, B")
    from .scalars import rational_nth_root
    candidates = [Fraction(0)]
    for m in range(1, 51):
        candidates.extend([Fraction(m), Fraction(-m)])
    for xq in candidates:
        fx = _peval(curve.field, curve.rhs(), curve.field.scalar(xq))
        y0 = _rational_sqrt_in_field(fx)
        if y0 is None:
            continue
        ys = [y0] if y0.is_zero() else [y0, -y0]
        for y in ys:
            c = Point(curve.field.scalar(xq), y)
            if c in divisor:
                continue
            try:
                value = h.evaluate(c)
            except DivisionByZero:
                continue
            if value.is_zero():
                continue
            try:
                root = value.nth_root_rational(N)
            except NotAnNthPower:
                continue
            return c, root
    raise FieldTooSmall(
        "no admissible base point with an exact root found in the search "
        "range; supply one explicitly or rescale the cover function")


def _build_chart(curve, h, place, v_h, N, window, plans):
    """Series data at a totally ramified point, in the parameter u.

    u = w when h has a simple zero below, u = 1/w for a simple pole.  With
    v = u^N, every needed series is supported on one residue class of
    exponents; the construction therefore works with pairs (offset, series
    in v) and expands at the end.
    """
    field = curve.field
    prec_v = _ceil_div(window + N, N) + 8
    base_prec = prec_v + 6
    x_t, y_t = base_series(curve, place, base_prec)
    h_t = h.series_from_xy(x_t, y_t)
    if h_t.is_zero() or h_t.valuation != v_h:
        raise BuilderError(
            f"cover function valuation {h_t.valuation} at {place} does not "
            f"match the divisor value {v_h}")
    core = h_t if v_h == 1 else h_t.inverse()
    t_of_v = core.reversion()
    x_v = x_t.compose(t_of_v)
    y_v = y_t.compose(t_of_v)
    alpha_v = x_v.derivative().scale(field.scalar(N)) / y_v
    w_offset = 1 if v_h == 1 else -1

    def expand(vs, offset, target):
        coeffs, exps = [], []
        for i, cc in enumerate(vs.coeffs):
            exps.append(N * (vs.valuation + i) + offset)
            coeffs.append(cc)
        prec_u = N * vs.prec + offset
        if prec_u < target:
            raise PrecisionUnreachable(
                f"achieved window {prec_u} < requested {target}")
        if not exps:
            return TruncatedSeries.zero(field, target)
        lo = exps[0]
        dense = [field.zero()] * (exps[-1] - lo + 1)
        for e, cc in zip(exps, coeffs):
            dense[e - lo] = cc
        return TruncatedSeries(field, lo, dense, prec_u).truncate(target)

    alpha_series = expand(alpha_v, N - 1, window)
    if alpha_series.valuation != N - 1:
        raise BuilderError(
            f"pullback differential vanishes to order {alpha_series.valuation}"
            f" at {place}, expected {N - 1}")
    forms = []
    for k, fn in plans:
        f_v = fn.series_from_xy(x_v, y_v)
        form_v = f_v * alpha_v
        offset = (N - 1) - k * w_offset
        s = expand(form_v, offset, window)
        if not s.is_zero() and s.valuation < 0:
            raise BuilderError(
                f"emitted form {_fn_name(fn)}*w^-{k} has a pole at {place}; "
                "the divisor recipe and the series data disagree")
        forms.append(s)
    label = f"a@({place.x},{place.y})"
    return RamificationChart(label, N, alpha_series, tuple(forms))


# ---------------------------------------------------------------------------
# spec file format and stock fixtures
# ---------------------------------------------------------------------------

def spec_to_json(spec):
    c = spec.base_point
    return {
        "field": {"cyclotomic_order": spec.curve.field.cyclotomic_order},
        "E": {"A": spec.curve.A.to_string(), "B": spec.curve.B.to_string()},
        "h": {"P": [s.to_string() for s in spec.h.P],
              "Q": [s.to_string() for s in spec.h.Q]},
        "N": spec.order,
        "c": "auto" if c == "auto" else {"x": c.x.to_string(),
                                         "y": c.y.to_string()},
        "precision": spec.precision,
    }


def spec_from_json(obj):
    if not isinstance(obj, dict):
        raise SchemaError("", "cover spec must be an object")
    if "N" not in obj:
        raise SchemaError("/N", "missing required member")
    N = obj["N"]
    if not isinstance(N, int):
        raise SchemaError("/N", "expected int")
    forder = obj.get("field", {}).get("cyclotomic_order")
    if forder is None:
        forder = N if N > 2 else 1
    try:
        field = FieldSpec(forder)
    except Exception as exc:
        raise SchemaError("/field/cyclotomic_order", str(exc)) from None

    def scal(text, ptr):
        try:
            return field.from_string(text)
        except Exception as exc:
            raise SchemaError(ptr, str(exc)) from None

    eobj = obj.get("E")
    if not isinstance(eobj, dict) or "A" not in eobj or "B" not in eobj:
        raise SchemaError("/E", "expected object with A and B")
    curve = EllipticCurve(field, scal(eobj["A"], "/E/A"), scal(eobj["B"], "/E/B"))
    hobj = obj.get("h")
    if not isinstance(hobj, dict):
        raise SchemaError("/h", "expected object with P and Q")
    P = [scal(s, f"/h/P/{i}") for i, s in enumerate(hobj.get("P", []))]
    Q = [scal(s, f"/h/Q/{i}") for i, s in enumerate(hobj.get("Q", []))]
    h = CurveFunction.make(curve, P, Q)
    cobj = obj.get("c", "auto")
    if cobj == "auto":
        c = "auto"
    elif isinstance(cobj, dict) and "x" in cobj and "y" in cobj:
        c = curve.point(scal(cobj["x"], "/c/x"), scal(cobj["y"], "/c/y"))
    else:
        raise SchemaError("/c", 'expected {"x", "y"} or "auto"')
    prec = obj.get("precision")
    if prec is not None and not isinstance(prec, int):
        raise SchemaError("/precision", "expected int or null")
    return CyclicCoverSpec(curve, h, N, c, prec)


def pirola_spec(precision=None):
    """The degree-3 Galois fixture: w^3 = (x + 1 - y)/2 on y^2 = x^3 + 1.

    The branch locus is the line section y = x + 1 (three collinear points
    summing to zero in the group law); the constant factor normalizes the
    value at the base point (0, -1) to 1, an exact cube, so all fiber data
    lives in Q(zeta_3).
    """
    field = FieldSpec(3)
    curve = EllipticCurve(field, field.zero(), field.one())
    half = Fraction(1, 2)
    h = CurveFunction.make(curve, [half, half], [-half])
    return CyclicCoverSpec(curve, h, 3, "auto", precision)


def bielliptic_spec(genus, precision=None):
    """Double-cover fixtures over y^2 = x^3 + 9 with rational branch data.

    genus 4: w^2 = x(x-3)(x+2), six simple branch points, base point (6, 15).
    genus 3: w^2 = x^2 + 10x + 24 - 8y, four simple branch points not
    paired by the hyperelliptic involution of the base (so the cover is a
    plane quartic, not hyperelliptic), base point (-2, -1).
    """
    field = FieldSpec(1)
    curve = EllipticCurve(field, field.zero(), field.scalar(9))
    if genus == 4:
        h = CurveFunction.make(curve, [0, -6, -1, 1])
        c = curve.point(6, 15)
    elif genus == 3:
        h = CurveFunction.make(curve, [24, 10, 1], [-8])
        c = curve.point(-2, -1)
    else:
        raise InputError("stock double-cover fixtures exist for genus 3 and 4")
    return CyclicCoverSpec(curve, h, 2, c, precision)
