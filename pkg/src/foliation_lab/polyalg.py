"""Exact arithmetic substrate: Gaussian-rational scalars, sparse bivariate
polynomials, univariate polynomials and rational functions, residues.

Everything here is immutable after construction and safe to share across
threads.  Numeric (double precision) evaluation is provided as an explicit
conversion, never silently.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional

from .errors import InternalInconsistencyError, InvalidInputError, ResidueDepthError

RESIDUE_SERIES_DEPTH = 64  # default cap on pole order in residue extraction


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot build an exact rational from {v!r}")


def _fraction_sqrt(f: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if f < 0:
        return None
    pn, pd = math.isqrt(f.numerator), math.isqrt(f.denominator)
    if pn * pn == f.numerator and pd * pd == f.denominator:
        return Fraction(pn, pd)
    return None


class ExactComplex:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, *_):
        raise AttributeError("ExactComplex is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def coerce(v) -> "ExactComplex":
        if isinstance(v, ExactComplex):
            return v
        if isinstance(v, (int, Fraction)):
            return ExactComplex(v)
        raise TypeError(f"cannot coerce {v!r} to ExactComplex")

    @staticmethod
    def from_complex_snapped(z: complex, max_denominator=10**6,
                             tol=1e-9) -> Optional["ExactComplex"]:
        """Nearest small-denominator Gaussian rational within tol, else None."""
        re = Fraction(z.real).limit_denominator(max_denominator)
        im = Fraction(z.imag).limit_denominator(max_denominator)
        if abs(float(re) - z.real) <= tol and abs(float(im) - z.imag) <= tol:
            return ExactComplex(re, im)
        return None

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_rational(self) -> bool:
        return not self.im

    # -- arithmetic ---------------------------------------------------
    def __add__(self, o):
        o = ExactComplex.coerce(o)
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-ExactComplex.coerce(o))

    def __rsub__(self, o):
        return ExactComplex.coerce(o) + (-self)

    def __mul__(self, o):
        o = ExactComplex.coerce(o)
        return ExactComplex(self.re * o.re - self.im * o.im,
                            self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = ExactComplex.coerce(o)
        n2 = o.norm2()
        if not n2:
            raise ZeroDivisionError("division by exact zero")
        return self * ExactComplex(o.re / n2, -o.im / n2)

    def __rtruediv__(self, o):
        return ExactComplex.coerce(o) / self

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def sqrt(self) -> Optional["ExactComplex"]:
        """Exact square root inside the Gaussian rationals, or None."""
        if self.is_zero():
            return ExactComplex(0)
        n = _fraction_sqrt(self.norm2())
        if n is None:
            return None
        c2 = (self.re + n) / 2
        c = _fraction_sqrt(c2)
        if c is None:
            return None
        if c:
            w = ExactComplex(c, self.im / (2 * c))
        else:
            d = _fraction_sqrt(-self.re)
            if d is None:
                return None
            w = ExactComplex(0, d)
        return w if w * w == self else None

    # -- comparisons / hashing ----------------------------------------
    def __eq__(self, o):
        try:
            o = ExactComplex.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- conversions ---------------------------------------------------
    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    __complex__ = to_complex

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


EC_ZERO = ExactComplex(0)
EC_ONE = ExactComplex(1)
EC_I = ExactComplex(0, 1)


# ----------------------------------------------------------------------
# Univariate polynomials over ExactComplex
# ----------------------------------------------------------------------

class Poly1:
    """Dense univariate polynomial; coefficient list ascending, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [ExactComplex.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *_):
        raise AttributeError("Poly1 is immutable")

    @staticmethod
    def coerce(v) -> "Poly1":
        if isinstance(v, Poly1):
            return v
        return Poly1([ExactComplex.coerce(v)])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def __eq__(self, o):
        return isinstance(o, Poly1) and self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, o):
        o = Poly1.coerce(o)
        n = max(len(self.coeffs), len(o.coeffs))
        a = list(self.coeffs) + [EC_ZERO] * (n - len(self.coeffs))
        for i, c in enumerate(o.coeffs):
            a[i] = a[i] + c
        return Poly1(a)

    def __neg__(self):
        return Poly1([-c for c in self.coeffs])

    def __sub__(self, o):
        return self + (-Poly1.coerce(o))

    def __mul__(self, o):
        o = Poly1.coerce(o)
        if self.is_zero() or o.is_zero():
            return Poly1()
        out = [EC_ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly1(out)

    def scale(self, c) -> "Poly1":
        c = ExactComplex.coerce(c)
        return Poly1([a * c for a in self.coeffs])

    def divmod(self, o: "Poly1"):
        """Euclidean division; coefficients live in a field so this is exact."""
        o = Poly1.coerce(o)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [EC_ZERO] * max(0, len(rem) - len(o.coeffs) + 1)
        lead = o.coeffs[-1]
        while len(rem) >= len(o.coeffs):
            f = rem[-1] / lead
            k = len(rem) - len(o.coeffs)
            q[k] = f
            for i, c in enumerate(o.coeffs):
                rem[k + i] = rem[k + i] - f * c
            while rem and rem[-1].is_zero():
                rem.pop()
            if not rem:
                break
        return Poly1(q), Poly1(rem)

    def gcd(self, o: "Poly1") -> "Poly1":
        a, b = self, Poly1.coerce(o)
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a.scale(EC_ONE / a.coeffs[-1])  # monic normalization

    def derivative(self) -> "Poly1":
        return Poly1([c * i for i, c in enumerate(self.coeffs)][1:])

    def eval_exact(self, z: ExactComplex) -> ExactComplex:
        acc = EC_ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def eval_complex(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c.to_complex()
        return acc

    def to_complex_coeffs(self) -> list:
        return [c.to_complex() for c in self.coeffs]

    def shift(self, a: ExactComplex) -> "Poly1":
        """p(x + a), exactly."""
        out = Poly1()
        base = Poly1([a, EC_ONE])
        powr = Poly1([EC_ONE])
        for c in self.coeffs:
            out = out + powr.scale(c)
            powr = powr * base
        return out

    def __repr__(self):
        if self.is_zero():
            return "Poly1(0)"
        parts = [f"({c})*x^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return "Poly1(" + " + ".join(parts) + ")"


class RationalFunction1:
    """Quotient of two Poly1 with gcd(num, den) = 1 and monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=Poly1([1])):
        num, den = Poly1.coerce(num), Poly1.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if not g.is_zero() and g.degree() > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        if not den.is_zero() and not num.is_zero():
            lead = den.coeffs[-1]
            num = num.scale(EC_ONE / lead)
            den = den.scale(EC_ONE / lead)
        elif num.is_zero():
            den = Poly1([1])
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *_):
        raise AttributeError("RationalFunction1 is immutable")

    def __add__(self, o):
        o = o if isinstance(o, RationalFunction1) else RationalFunction1(o)
        return RationalFunction1(self.num * o.den + o.num * self.den,
                                 self.den * o.den)

    def __neg__(self):
        return RationalFunction1(-self.num, self.den)

    def __sub__(self, o):
        o = o if isinstance(o, RationalFunction1) else RationalFunction1(o)
        return self + (-o)

    def __mul__(self, o):
        o = o if isinstance(o, RationalFunction1) else RationalFunction1(o)
        return RationalFunction1(self.num * o.num, self.den * o.den)

    def __truediv__(self, o):
        o = o if isinstance(o, RationalFunction1) else RationalFunction1(o)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction1(self.num * o.den, self.den * o.num)

    def __eq__(self, o):
        return (isinstance(o, RationalFunction1)
                and self.num == o.num and self.den == o.den)

    def eval_complex(self, z: complex) -> complex:
        return self.num.eval_complex(z) / self.den.eval_complex(z)

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})"


def residue_at_zero(r: RationalFunction1,
                    max_depth: int = RESIDUE_SERIES_DEPTH) -> ExactComplex:
    """Exact coefficient of x^{-1} in the Laurent expansion of r at 0.

    Writes den = x^k * u with u(0) != 0 and reads the coefficient of x^{k-1}
    in the power series of num / u, obtained by exact series inversion.
    """
    num, den = r.num, r.den
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    k = 0
    dc = list(den.coeffs)
    while dc and dc[0].is_zero():
        dc.pop(0)
        k += 1
    if k > max_depth:
        raise ResidueDepthError(
            f"pole order {k} exceeds residue series depth {max_depth}")
    if k == 0:
        return EC_ZERO
    u = Poly1(dc)
    # series of 1/u to order k: standard recursion b_0 = 1/u_0,
    # b_m = -(1/u_0) * sum_{j=1..m} u_j b_{m-j}
    u0 = u.coeffs[0]
    inv = [EC_ONE / u0]
    for m in range(1, k):
        s = EC_ZERO
        for j in range(1, m + 1):
            uj = u.coeffs[j] if j < len(u.coeffs) else EC_ZERO
            s = s + uj * inv[m - j]
        inv.append(-s / u0)
    # coefficient of x^{k-1} in num * inv
    target = k - 1
    acc = EC_ZERO
    for i, c in enumerate(num.coeffs):
        if i > target:
            break
        acc = acc + c * inv[target - i]
    return acc


# ----------------------------------------------------------------------
# Sparse bivariate polynomials
# ----------------------------------------------------------------------

def _grlex_key(e):
    i, j = e
    return (i + j, i, j)


class Poly2:
    """Sparse exact polynomial in two variables.

    Terms map exponent pairs (i, j) >= (0, 0) to nonzero ExactComplex
    coefficients; the zero polynomial has no terms.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for (i, j), c in dict(terms).items():
                if i < 0 or j < 0:
                    raise ValueError("exponents must be nonnegative")
                c = ExactComplex.coerce(c)
                if not c.is_zero():
                    t[(int(i), int(j))] = c
        object.__setattr__(self, "terms", t)

    def __setattr__(self, *_):
        raise AttributeError("Poly2 is immutable")

    # -- builders ------------------------------------------------------
    @staticmethod
    def constant(c) -> "Poly2":
        return Poly2({(0, 0): ExactComplex.coerce(c)})

    @staticmethod
    def variable(axis: str) -> "Poly2":
        if axis == "x":
            return Poly2({(1, 0): 1})
        if axis == "y":
            return Poly2({(0, 1): 1})
        raise ValueError("axis must be 'x' or 'y'")

    @staticmethod
    def coerce(v) -> "Poly2":
        if isinstance(v, Poly2):
            return v
        return Poly2.constant(ExactComplex.coerce(v))

    # -- basic predicates ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(e == (0, 0) for e in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self):
        """Total degree; -inf for the zero polynomial."""
        if not self.terms:
            return -math.inf
        return max(i + j for i, j in self.terms)

    def degree_in(self, axis: str):
        if not self.terms:
            return -math.inf
        k = 0 if axis == "x" else 1
        return max(e[k] for e in self.terms)

    def order(self):
        """Minimal total degree of a term; +inf for the zero polynomial."""
        if not self.terms:
            return math.inf
        return min(i + j for i, j in self.terms)

    def homogeneous_part(self, d: int) -> "Poly2":
        return Poly2({e: c for e, c in self.terms.items() if e[0] + e[1] == d})

    def leading_term(self):
        """(exponent, coefficient) maximal in graded-lex order."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    # -- ring operations --------------------------------------------------
    def __add__(self, o):
        o = Poly2.coerce(o)
        t = dict(self.terms)
        for e, c in o.terms.items():
            s = t.get(e, EC_ZERO) + c
            if s.is_zero():
                t.pop(e, None)
            else:
                t[e] = s
        return Poly2(t)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-Poly2.coerce(o))

    def __rsub__(self, o):
        return Poly2.coerce(o) + (-self)

    def __mul__(self, o):
        o = Poly2.coerce(o)
        t = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in o.terms.items():
                e = (i1 + i2, j1 + j2)
                s = t.get(e, EC_ZERO) + c1 * c2
                if s.is_zero():
                    t.pop(e, None)
                else:
                    t[e] = s
        return Poly2(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise InvalidInputError("negative polynomial powers are not defined")
        out = Poly2.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c) -> "Poly2":
        c = ExactComplex.coerce(c)
        return Poly2({e: a * c for e, a in self.terms.items()})

    def partial_derivative(self, axis: str) -> "Poly2":
        t = {}
        if axis == "x":
            for (i, j), c in self.terms.items():
                if i:
                    t[(i - 1, j)] = c * i
        elif axis == "y":
            for (i, j), c in self.terms.items():
                if j:
                    t[(i, j - 1)] = c * j
        else:
            raise ValueError("axis must be 'x' or 'y'")
        return Poly2(t)

    def substitute(self, u: "Poly2", v: "Poly2") -> "Poly2":
        """Ring homomorphism x -> u, y -> v."""
        u, v = Poly2.coerce(u), Poly2.coerce(v)
        # cache powers
        ideg = max((e[0] for e in self.terms), default=0)
        jdeg = max((e[1] for e in self.terms), default=0)
        upow = [Poly2.constant(1)]
        for _ in range(ideg):
            upow.append(upow[-1] * u)
        vpow = [Poly2.constant(1)]
        for _ in range(jdeg):
            vpow.append(vpow[-1] * v)
        out = Poly2()
        for (i, j), c in self.terms.items():
            out = out + (upow[i] * vpow[j]).scale(c)
        return out

    def shift(self, a, b) -> "Poly2":
        """p(x + a, y + b), exactly."""
        x_a = Poly2({(1, 0): 1, (0, 0): ExactComplex.coerce(a)})
        y_b = Poly2({(0, 1): 1, (0, 0): ExactComplex.coerce(b)})
        return self.substitute(x_a, y_b)

    def swap_variables(self) -> "Poly2":
        return Poly2({(j, i): c for (i, j), c in self.terms.items()})

    # -- division ---------------------------------------------------------
    def try_divide(self, d: "Poly2") -> Optional["Poly2"]:
        """Exact quotient self / d, or None when the division is not exact."""
        d = Poly2.coerce(d)
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return Poly2()
        (de, dc) = d.leading_term()
        rem = self
        q = {}
        while not rem.is_zero():
            (re, rc) = rem.leading_term()
            ei, ej = re[0] - de[0], re[1] - de[1]
            if ei < 0 or ej < 0:
                return None
            coeff = rc / dc
            q[(ei, ej)] = q.get((ei, ej), EC_ZERO) + coeff
            rem = rem - d * Poly2({(ei, ej): coeff})
        return Poly2(q)

    def divides(self, other: "Poly2") -> bool:
        return Poly2.coerce(other).try_divide(self) is not None

    # -- conversions --------------------------------------------------------
    def y_coefficients(self) -> list:
        """Coefficients as Poly1 in x, listed by ascending power of y."""
        if self.is_zero():
            return []
        jmax = max(e[1] for e in self.terms)
        rows = [dict() for _ in range(jmax + 1)]
        for (i, j), c in self.terms.items():
            rows[j][i] = c
        out = []
        for row in rows:
            if row:
                n = max(row) + 1
                out.append(Poly1([row.get(i, EC_ZERO) for i in range(n)]))
            else:
                out.append(Poly1())
        return out

    @staticmethod
    def from_y_coefficients(rows) -> "Poly2":
        t = {}
        for j, p in enumerate(rows):
            for i, c in enumerate(Poly1.coerce(p).coeffs):
                if not c.is_zero():
                    t[(i, j)] = c
        return Poly2(t)

    def restrict_y0(self) -> Poly1:
        """p(x, 0) as a Poly1 in x."""
        t = {i: c for (i, j), c in self.terms.items() if j == 0}
        n = max(t, default=-1) + 1
        return Poly1([t.get(i, EC_ZERO) for i in range(n)])

    def restrict_x0(self) -> Poly1:
        """p(0, y) as a Poly1 in y."""
        t = {j: c for (i, j), c in self.terms.items() if i == 0}
        n = max(t, default=-1) + 1
        return Poly1([t.get(j, EC_ZERO) for j in range(n)])

    def eval_exact(self, a, b) -> ExactComplex:
        a, b = ExactComplex.coerce(a), ExactComplex.coerce(b)
        acc = EC_ZERO
        apow, bpow = {0: EC_ONE}, {0: EC_ONE}

        def power(cache, base, n):
            if n not in cache:
                cache[n] = power(cache, base, n - 1) * base
            return cache[n]

        for (i, j), c in self.terms.items():
            acc = acc + c * power(apow, a, i) * power(bpow, b, j)
        return acc

    def eval_complex(self, zx: complex, zy: complex) -> complex:
        acc = 0j
        xp, yp = {0: 1 + 0j}, {0: 1 + 0j}

        def power(cache, base, n):
            if n not in cache:
                cache[n] = power(cache, base, n - 1) * base
            return cache[n]

        for (i, j), c in self.terms.items():
            acc += c.to_complex() * power(xp, zx, i) * power(yp, zy, j)
        return acc

    # -- comparisons ----------------------------------------------------
    def __eq__(self, o):
        try:
            o = Poly2.coerce(o)
        except TypeError:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Poly2({format_poly(self)!r})"


def format_poly(p: Poly2) -> str:
    """Render in the expression grammar (x, y, ^, *, rational and i literals)."""
    if p.is_zero():
        return "0"
    parts = []
    for e in sorted(p.terms, key=_grlex_key, reverse=True):
        c = p.terms[e]
        mono = []
        if e[0]:
            mono.append("x" if e[0] == 1 else f"x^{e[0]}")
        if e[1]:
            mono.append("y" if e[1] == 1 else f"y^{e[1]}")
        if c == EC_ONE and mono:
            piece = "*".join(mono)
        elif c == ExactComplex(-1) and mono:
            piece = "-" + "*".join(mono)
        else:
            cs = _format_scalar(c)
            piece = "*".join([cs] + mono)
        parts.append(piece)
    out = parts[0]
    for piece in parts[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def _format_scalar(c: ExactComplex) -> str:
    if not c.im:
        return str(c.re)
    if not c.re:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{c.im}*i" if c.im.denominator == 1 else f"({c.im})*i"
    sign = "+" if c.im > 0 else "-"
    imag = abs(c.im)
    istr = "i" if imag == 1 else f"{imag}*i"
    return f"({c.re} {sign} {istr})"


# ----------------------------------------------------------------------
# Module-level operation surface
# ----------------------------------------------------------------------

def order(p: Poly2):
    return Poly2.coerce(p).order()


def homogeneous_part(p: Poly2, d: int) -> Poly2:
    return Poly2.coerce(p).homogeneous_part(d)


def exact_division(a: Poly2, b: Poly2) -> Poly2:
    q = Poly2.coerce(a).try_divide(b)
    if q is None:
        raise InvalidInputError("division is not exact")
    return q


def _content_in_x(p: Poly2) -> Poly1:
    """gcd of the Poly1-in-x coefficients (content w.r.t. y)."""
    g = Poly1()
    for row in p.y_coefficients():
        if row.is_zero():
            continue
        g = row if g.is_zero() else g.gcd(row)
        if g.degree() == 0:
            break
    return g if not g.is_zero() else Poly1([1])


def _poly1_to_poly2(p: Poly1) -> Poly2:
    return Poly2({(i, 0): c for i, c in enumerate(p.coeffs) if not c.is_zero()})


def _normalize_unit(p: Poly2) -> Poly2:
    """Divide by the graded-lex leading coefficient (canonical up-to-unit form)."""
    if p.is_zero():
        return p
    _, c = p.leading_term()
    return p.scale(EC_ONE / c)


def gcd2(a: Poly2, b: Poly2) -> Poly2:
    """Bivariate gcd via content / primitive-part Euclid in y over the
    rational-function field in x.  Result is normalized up to a unit."""
    a, b = Poly2.coerce(a), Poly2.coerce(b)
    if a.is_zero() and b.is_zero():
        raise InvalidInputError("gcd2(0, 0) is undefined")
    if a.is_zero():
        return _normalize_unit(b)
    if b.is_zero():
        return _normalize_unit(a)
    dya, dyb = a.degree_in("y"), b.degree_in("y")
    if dya == 0 and dyb == 0:
        return _normalize_unit(_poly1_to_poly2(
            a.restrict_y0().gcd(b.restrict_y0())))
    ca, cb = _content_in_x(a), _content_in_x(b)
    cont = ca.gcd(cb)
    pa = exact_division(a, _poly1_to_poly2(ca))
    pb = exact_division(b, _poly1_to_poly2(cb))
    # Euclid on primitive parts, coefficients in the fraction field Q(i)(x)
    fa = [RationalFunction1(c) for c in pa.y_coefficients()]
    fb = [RationalFunction1(c) for c in pb.y_coefficients()]

    def frac_rem(u, v):
        u = list(u)
        while len(u) >= len(v):
            f = u[-1] / v[-1]
            k = len(u) - len(v)
            for i, c in enumerate(v):
                u[k + i] = u[k + i] - f * c
            while u and u[-1].num.is_zero():
                u.pop()
            if not u:
                break
        return u

    u, v = fa, fb
    if len(u) < len(v):
        u, v = v, u
    while v:
        u, v = v, frac_rem(u, v)
    # clear denominators, take primitive part
    den = Poly1([1])
    for c in u:
        den = den * c.den
    rows = []
    for c in u:
        rows.append(c.num * den.divmod(c.den)[0])
    g = Poly2.from_y_coefficients(rows)
    g = exact_division(g, _poly1_to_poly2(_content_in_x(g)))
    return _normalize_unit(_poly1_to_poly2(cont) * g)


def resultant_y(a: Poly2, b: Poly2) -> Poly1:
    """Resultant with respect to y; a Poly1 in x.  Bareiss fraction-free
    elimination over the polynomial ring keeps every division exact."""
    ra, rb = a.y_coefficients(), b.y_coefficients()
    m, n = len(ra) - 1, len(rb) - 1
    if m < 0 or n < 0:
        raise InvalidInputError("resultant of the zero polynomial")
    if m == 0 and n == 0:
        return Poly1([1])
    if m == 0:
        return _pow_poly1(ra[0], n)
    if n == 0:
        return _pow_poly1(rb[0], m)
    size = m + n
    mat = [[Poly1() for _ in range(size)] for _ in range(size)]
    for r in range(n):
        for k, c in enumerate(reversed(ra)):
            mat[r][r + k] = c
    for r in range(m):
        for k, c in enumerate(reversed(rb)):
            mat[n + r][r + k] = c
    return _bareiss_det(mat)


def _pow_poly1(p: Poly1, n: int) -> Poly1:
    out = Poly1([1])
    for _ in range(n):
        out = out * p
    return out


def _bareiss_det(mat) -> Poly1:
    n = len(mat)
    sign = 1
    prev = Poly1([1])
    for k in range(n - 1):
        if mat[k][k].is_zero():
            for r in range(k + 1, n):
                if not mat[r][k].is_zero():
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return Poly1()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]
                q, rem = num.divmod(prev)
                if not rem.is_zero():
                    raise InternalInconsistencyError(
                        "Bareiss elimination division was inexact")
                mat[i][j] = q
            mat[i][k] = Poly1()
        prev = mat[k][k]
    det = mat[n - 1][n - 1]
    return det if sign == 1 else -det
