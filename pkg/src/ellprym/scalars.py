"""Exact arithmetic in cyclotomic fields Q(zeta_N) and dense exact linear algebra.

Elements are represented on the power basis 1, z, ..., z^(phi(N)-1) with
z = zeta_N, reduced modulo the N-th cyclotomic polynomial.  All coefficients
are arbitrary-precision rationals, so equality is decidable and exact.

The linear algebra is deterministic: Gaussian elimination with the pivot
always taken as the first nonzero entry in column order.  Magnitude-based
pivoting would be meaningless over Q(zeta) and would break reproducibility.
"""

from __future__ import annotations

from fractions import Fraction
from .errors import DivisionByZero, FieldError, NotAnNthPower, ParseError

SUPPORTED_ORDERS = (1, 2, 3, 4, 5, 6, 7, 11, 13)


# ---------------------------------------------------------------------------
# rational polynomial helpers (dense, low-to-high coefficient lists)
# ---------------------------------------------------------------------------

def _ptrim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj != 0:
                out[i + j] += ai * bj
    return _ptrim(out)


def _pdivmod(a, b):
    """Exact division with remainder of rational polynomials (b monic-safe)."""
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and _ptrim(list(a)):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        coef = a[-1] / lead
        q[shift] = coef
        for i, bi in enumerate(b):
            a[shift + i] -= coef * bi
        a.pop()
    return _ptrim(q), _ptrim(a)


def _cyclotomic(n):
    """Coefficients of the n-th cyclotomic polynomial, by recursive division."""
    poly = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q, r = _pdivmod(poly, _cyclotomic(d))
            if r:
                raise AssertionError("cyclotomic recursion produced a remainder")
            poly = q
    return poly


def _pxgcd(a, b):
    """Extended gcd for rational polynomials: returns (g, s, t) with s*a + t*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while _ptrim(list(r1)):
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
        t0, t1 = t1, _psub(t0, _pmul(q, t1))
    return r0, s0, t0


def _psub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] += ai
    for i, bi in enumerate(b):
        out[i] -= bi
    return _ptrim(out)


def integer_nth_root(n, k):
    """Floor of the k-th root of a nonnegative integer, by integer Newton."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    x = 1 << (n.bit_length() // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def rational_nth_root(q, k):
    """The rational k-th root of a Fraction, or None if there is none.

    For odd k the sign passes to the root; for even k a negative radicand
    has no real root and None is returned.
    """
    if q == 0:
        return Fraction(0)
    sign = 1
    if q < 0:
        if k % 2 == 0:
            return None
        sign, q = -1, -q
    num, den = q.numerator, q.denominator
    rn, rd = integer_nth_root(num, k), integer_nth_root(den, k)
    if rn ** k != num or rd ** k != den:
        return None
    return Fraction(sign * rn, rd)


# ---------------------------------------------------------------------------
# field specification
# ---------------------------------------------------------------------------

class FieldSpec:
    """The coefficient field Q(zeta_N); N = 1 means plain rationals."""

    _cache = {}

    def __new__(cls, cyclotomic_order=1):
        n = int(cyclotomic_order)
        if n in cls._cache:
            return cls._cache[n]
        if n not in SUPPORTED_ORDERS:
            raise FieldError(
                f"unsupported cyclotomic order {n}; supported: {SUPPORTED_ORDERS}")
        self = super().__new__(cls)
        self.cyclotomic_order = n
        self.minimal_polynomial = tuple(_cyclotomic(n))
        self.degree = len(self.minimal_polynomial) - 1
        cls._cache[n] = self
        return self

    def __repr__(self):
        return f"FieldSpec({self.cyclotomic_order})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and \
            self.cyclotomic_order == other.cyclotomic_order

    def __hash__(self):
        return hash(("FieldSpec", self.cyclotomic_order))

    # -- element constructors ------------------------------------------------

    def scalar(self, value):
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldError("scalar belongs to a different field")
            return value
        return Scalar(self, [Fraction(value)])

    def zero(self):
        return self.scalar(0)

    def one(self):
        return self.scalar(1)

    def from_coefficients(self, coeffs):
        return Scalar(self, [Fraction(c) for c in coeffs])

    def zeta(self):
        """The designated generator zeta_N (equal to 1 for N = 1, -1 for N = 2)."""
        if self.degree == 1:
            return self.scalar(1 if self.cyclotomic_order == 1 else -1)
        return Scalar(self, [Fraction(0), Fraction(1)])

    def root_of_unity_order(self):
        """Order of the group of roots of unity contained in the field."""
        n = self.cyclotomic_order
        return n if n % 2 == 0 else 2 * n

    def contains_root_of_unity(self, m):
        return self.root_of_unity_order() % m == 0

    def root_of_unity(self, m):
        """A primitive m-th root of unity, if the field contains one."""
        if not self.contains_root_of_unity(m):
            raise FieldError(
                f"Q(zeta_{self.cyclotomic_order}) has no primitive {m}-th root of unity")
        n = self.cyclotomic_order
        if n % m == 0:
            return self.zeta() ** (n // m)
        # n odd, m | 2n: go through zeta_{2n} = -zeta_n^((n+1)//2)
        zeta_2n = -(self.zeta() ** ((n + 1) // 2))
        return zeta_2n ** (2 * n // m)

    def from_string(self, text):
        return Scalar.from_string(self, text)


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

class Scalar:
    """An element of Q(zeta_N), reduced modulo the cyclotomic polynomial."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        self.field = field
        deg = field.degree
        c = [Fraction(x) for x in coeffs]
        if len(c) > deg:
            c = self._reduce(field, c)
        c += [Fraction(0)] * (deg - len(c))
        self.coeffs = tuple(c[:deg])
        self._hash = None

    @staticmethod
    def _reduce(field, c):
        mod = field.minimal_polynomial
        deg = field.degree
        c = list(c)
        for i in range(len(c) - 1, deg - 1, -1):
            coef = c[i]
            if coef == 0:
                continue
            c[i] = Fraction(0)
            shift = i - deg
            for j in range(deg):
                c[shift + j] -= coef * mod[j]
        return _ptrim(c[:deg] if len(c) > deg else c)

    # -- coercion -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError("mixed-field arithmetic")
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(self.field, [Fraction(other)])
        return NotImplemented

    # -- ring operations --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.field, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        # fast paths: rational factors need no polynomial product
        if all(x == 0 for x in a[1:]):
            q = a[0]
            return Scalar(self.field, [q * y for y in b])
        if all(y == 0 for y in b[1:]):
            q = b[0]
            return Scalar(self.field, [q * x for x in a])
        prod = _pmul(list(a), list(b))
        return Scalar(self.field, self._reduce(self.field, prod))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        g, s, _ = _pxgcd(_ptrim(list(self.coeffs)), list(self.field.minimal_polynomial))
        if len(g) != 1:
            raise AssertionError("cyclotomic polynomial not coprime to element")
        inv = [c / g[0] for c in s]
        return Scalar(self.field, inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates -------------------------------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise FieldError(f"{self} is not rational")
        return self.coeffs[0]

    def nth_root_rational(self, k):
        """Designated k-th root: the real rational root of a rational element.

        Deterministic by construction.  Elements outside the rational subfield
        (or without a rational real root) raise NotAnNthPower, instructing the
        caller to extend the field or rescale.
        """
        if not self.is_rational():
            raise NotAnNthPower(
                f"{self} is not in the rational subfield; no designated root")
        root = rational_nth_root(self.coeffs[0], k)
        if root is None:
            raise NotAnNthPower(f"{self} has no rational {k}-th root")
        return self.field.scalar(root)

    def galois(self, a):
        """Image under the Galois automorphism z -> z^a (gcd(a, N) = 1)."""
        za = self.field.zeta() ** (a % max(self.field.cyclotomic_order, 1))
        out = self.field.zero()
        for c in reversed(self.coeffs):
            out = out * za + self.field.scalar(c)
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.cyclotomic_order, self.coeffs))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- serialization ------------------------------------------------------------

    def to_string(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*z")
            else:
                terms.append(f"{c}*z^{k}")
        return " + ".join(terms) if terms else "0"

    @staticmethod
    def from_string(field, text):
        if not isinstance(text, str):
            raise ParseError(text, "scalar must be a string")
        coeffs = [Fraction(0)] * field.degree
        body = text.strip()
        if body == "":
            raise ParseError(text, "empty scalar string")
        for raw in body.split("+"):
            term = raw.strip()
            if term == "":
                raise ParseError(text, "empty term in scalar string")
            if term == "0":
                continue
            if "*" in term:
                coef_part, _, z_part = term.partition("*")
            elif term.startswith("z"):
                coef_part, z_part = "1", term
            elif term.startswith("-z"):
                coef_part, z_part = "-1", term[1:]
            else:
                coef_part, z_part = term, ""
            coef_part = coef_part.strip()
            z_part = z_part.strip()
            try:
                coef = Fraction(coef_part)
            except (ValueError, ZeroDivisionError):
                raise ParseError(coef_part) from None
            if z_part == "":
                power = 0
            elif z_part == "z":
                power = 1
            elif z_part.startswith("z^"):
                try:
                    power = int(z_part[2:])
                except ValueError:
                    raise ParseError(z_part) from None
                if power < 0:
                    raise ParseError(z_part, "negative zeta power")
            else:
                raise ParseError(z_part)
            if power >= field.degree:
                raise ParseError(term, "zeta power not reduced for this field")
            coeffs[power] += coef
        return Scalar(field, coeffs)

    def __repr__(self):
        return self.to_string()


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Dense exact matrix over a FieldSpec."""

    def __init__(self, field, rows):
        self.field = field
        self.rows = [[field.scalar(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, field, n):
        one, zero = field.one(), field.zero()
        return cls(field, [[one if i == j else zero for j in range(n)]
                           for i in range(n)])

    @classmethod
    def zero(cls, field, nrows, ncols):
        z = field.zero()
        return cls(field, [[z] * ncols for _ in range(nrows)])

    def copy(self):
        return Matrix(self.field, [list(r) for r in self.rows])

    def transpose(self):
        return Matrix(self.field, [[self.rows[i][j] for i in range(self.nrows)]
                                   for j in range(self.ncols)])

    def matmul(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        zero = self.field.zero()
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = zero
                for k in range(self.ncols):
                    a = self.rows[i][k]
                    if not a.is_zero():
                        acc = acc + a * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return Matrix(self.field, out)

    def mul_vec(self, vec):
        zero = self.field.zero()
        out = []
        for i in range(self.nrows):
            acc = zero
            for k in range(self.ncols):
                a = self.rows[i][k]
                if not a.is_zero():
                    acc = acc + a * vec[k]
            out.append(acc)
        return out

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    # -- elimination ------------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (matrix, pivot column list).

        Deterministic: the pivot is the first row with a nonzero entry in the
        current column.  Entries are exact, so no magnitude heuristics apply.
        """
        m = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            if r >= self.nrows:
                break
            sel = None
            for i in range(r, self.nrows):
                if not m[i][c].is_zero():
                    sel = i
                    break
            if sel is None:
                continue
            m[r], m[sel] = m[sel], m[r]
            inv = m[r][c].inverse()
            m[r] = [x * inv for x in m[r]]
            for i in range(self.nrows):
                if i != r and not m[i][c].is_zero():
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return Matrix(self.field, m), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis of the right kernel, reduced column echelon convention.

        For each free column f (in ascending order) the basis vector has a 1
        in slot f, the negated reduced coefficients in the pivot slots, and
        zeros elsewhere.  Output is deterministic and satisfies rank-nullity.
        """
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        one, zero = self.field.one(), self.field.zero()
        basis = []
        for f in free:
            v = [zero] * self.ncols
            v[f] = one
            for i, p in enumerate(pivots):
                v[p] = -red.rows[i][f]
            basis.append(v)
        if len(basis) != self.ncols - len(pivots):
            raise AssertionError("rank-nullity violated")
        return basis

    def solve(self, rhs):
        """Exact solution of self * x = rhs, or None if inconsistent.

        When the system is underdetermined, free variables are set to zero
        (deterministic by the rref convention).
        """
        aug = Matrix(self.field,
                     [list(r) + [b] for r, b in zip(self.rows, rhs)])
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        zero = self.field.zero()
        x = [zero] * self.ncols
        for i, p in enumerate(pivots):
            x[p] = red.rows[i][self.ncols]
        return x

    def __repr__(self):
        return "Matrix([" + ",\n        ".join(
            "[" + ", ".join(map(str, r)) + "]" for r in self.rows) + "])"


def vector_is_zero(vec):
    return all(x.is_zero() for x in vec)


def field_arithmetic(a, b, op):
    """Dispatch basic field operations by name; inv/neg ignore ``b``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown op {op!r}")
