"""Foliations of the affine plane by a polynomial 1-form.

The central object pairs two coprime polynomials (P, Q) with a chart tag;
the form is omega = P dy - Q dx and the dual field is P d/dx + Q d/dy.
Leaves solve omega = 0.  Charts XY, UV (u = 1/x, v = y/x) and RS (r = 1/y,
s = x/y) cover the projective plane.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

from .errors import (InternalInconsistencyError, InvalidInputError,
                     RootFindingError)
from .polyalg import (EC_ONE, EC_ZERO, ExactComplex, Poly1, Poly2,
                      exact_division, gcd2, resultant_y)
from .roots import univariate_roots

SNAP_TOL = 1e-9
SNAP_MAX_DEN = 10**6


class Chart(Enum):
    XY = "xy"
    UV = "uv"   # u = 1/x, v = y/x
    RS = "rs"   # r = 1/y, s = x/y


@dataclass(frozen=True)
class AffineFoliation1Form:
    """omega = P dy - Q dx on an affine chart; gcd(P, Q) is a unit."""

    P: Poly2
    Q: Poly2
    chart: Chart = Chart.XY
    removed_factor: Poly2 = field(default_factory=lambda: Poly2.constant(1),
                                  compare=False)

    def dual_field(self):
        return self.P, self.Q

    def form_coefficients(self):
        """(A, B) with omega = A dx + B dy."""
        return -self.Q, self.P

    def vector_at(self, zx: complex, zy: complex):
        return evaluate_field(self, (zx, zy))

    def swap_axes(self) -> "AffineFoliation1Form":
        """Exchange the two coordinates (the chart tag is kept)."""
        return AffineFoliation1Form(self.Q.swap_variables(),
                                    self.P.swap_variables(), self.chart)

    def shift(self, a, b) -> "AffineFoliation1Form":
        return AffineFoliation1Form(self.P.shift(a, b), self.Q.shift(a, b),
                                    self.chart)

    def __repr__(self):
        from .polyalg import format_poly
        return (f"AffineFoliation1Form(P={format_poly(self.P)!r}, "
                f"Q={format_poly(self.Q)!r}, chart={self.chart.value})")


def make_foliation(P, Q, chart: Chart = Chart.XY) -> AffineFoliation1Form:
    """Build the foliation, removing (and recording) any common factor."""
    P, Q = Poly2.coerce(P), Poly2.coerce(Q)
    if P.is_zero() and Q.is_zero():
        raise InvalidInputError("the zero pair does not define a foliation")
    g = gcd2(P, Q)
    if not g.is_constant():
        P = exact_division(P, g)
        Q = exact_division(Q, g)
    else:
        g = Poly2.constant(1)
    return AffineFoliation1Form(P, Q, chart, removed_factor=g)


@dataclass(frozen=True)
class SingularPoint:
    """Common zero of P and Q; exact coordinates when both are Gaussian
    rational, with multiplicity nu = min(order P, order Q) there."""

    location: tuple                      # pair of complex
    multiplicity: int
    exact: Optional[tuple] = None        # pair of ExactComplex, when certified
    intersection_multiplicity: int = 1   # resultant-root cluster size

    @property
    def is_exact(self) -> bool:
        return self.exact is not None


# ----------------------------------------------------------------------
# Singular set
# ----------------------------------------------------------------------

def _order_at_exact(f: AffineFoliation1Form, pt) -> int:
    a, b = pt
    shifted_p = f.P.shift(a, b)
    shifted_q = f.Q.shift(a, b)
    return int(min(shifted_p.order(), shifted_q.order()))

def _order_at_numeric(f: AffineFoliation1Form, z, eps=1e-6) -> int:
    """Order of the translated field with float coefficients, thresholded."""
    zx, zy = z
    dmax = int(max(f.P.degree(), f.Q.degree()))
    best = dmax + 1
    for poly in (f.P, f.Q):
        coeffs = {}
        for (i, j), c in poly.terms.items():
            # shifted coefficient of x^a y^b collects binomials
            for a in range(i + 1):
                for b in range(j + 1):
                    key = (a, b)
                    coeffs[key] = coeffs.get(key, 0j) + (
                        c.to_complex() * math.comb(i, a) * math.comb(j, b)
                        * zx ** (i - a) * zy ** (j - b))
        scale = max((abs(v) for v in coeffs.values()), default=0.0) or 1.0
        for d in range(dmax + 1):
            mx = max((abs(v) for (a, b), v in coeffs.items() if a + b == d),
                     default=0.0)
            if mx > eps * scale:
                best = min(best, d)
                break
    return best


def _newton_polish(f: AffineFoliation1Form, z, steps=4):
    zx, zy = z
    px, py = f.P.partial_derivative("x"), f.P.partial_derivative("y")
    qx, qy = f.Q.partial_derivative("x"), f.Q.partial_derivative("y")
    for _ in range(steps):
        a = px.eval_complex(zx, zy)
        b = py.eval_complex(zx, zy)
        c = qx.eval_complex(zx, zy)
        d = qy.eval_complex(zx, zy)
        det = a * d - b * c
        if abs(det) < 1e-14:
            break
        fp = f.P.eval_complex(zx, zy)
        fq = f.Q.eval_complex(zx, zy)
        zx -= (d * fp - b * fq) / det
        zy -= (-c * fp + a * fq) / det
    return zx, zy


def _try_exact_point(f: AffineFoliation1Form, z):
    zx, zy = z
    ex = ExactComplex.from_complex_snapped(zx, SNAP_MAX_DEN, SNAP_TOL)
    ey = ExactComplex.from_complex_snapped(zy, SNAP_MAX_DEN, SNAP_TOL)
    if ex is None or ey is None:
        return None
    if f.P.eval_exact(ex, ey).is_zero() and f.Q.eval_exact(ex, ey).is_zero():
        return (ex, ey)
    return None


def find_singularities(f: AffineFoliation1Form, tol: float = 1e-9) -> list:
    """Common zeros of (P, Q) via the resultant in y plus back-substitution.

    Each returned point is polished by Newton iteration and certified by
    |P| <= tol, |Q| <= tol; Gaussian-rational points are re-verified exactly.
    """
    P, Q = f.P, f.Q
    dyP, dyQ = P.degree_in("y"), Q.degree_in("y")
    if dyP <= 0 and dyQ <= 0:
        # both depend on x alone; coprimality leaves no common zero
        # except through a shared constant, which gcd reduction forbids
        return []
    res = resultant_y(P, Q)
    if res.is_zero():
        raise InternalInconsistencyError(
            "resultant vanished identically for a coprime pair")
    points = []
    if res.degree() >= 1:
        xroots = univariate_roots(res, tol=1e-10)
    else:
        xroots = []
    # cluster equal x-roots to track intersection multiplicity
    clusters = []
    for xr in sorted(xroots, key=lambda z: (round(z.real, 7), round(z.imag, 7))):
        for cl in clusters:
            if abs(cl[0] - xr) < 1e-6:
                cl[1] += 1
                break
        else:
            clusters.append([xr, 1])
    for x0, mult in clusters:
        for y0 in _fiber_common_roots(P, Q, x0, tol):
            points.append(((x0, y0), mult))
    out = []
    for (z, mult) in points:
        z = _newton_polish(f, z)
        if abs(P.eval_complex(*z)) > tol or abs(Q.eval_complex(*z)) > tol:
            continue
        exact = _try_exact_point(f, z)
        if exact is not None:
            z = (exact[0].to_complex(), exact[1].to_complex())
            nu = _order_at_exact(f, exact)
        else:
            nu = _order_at_numeric(f, z)
        # dedupe against already-kept points
        for k, prev in enumerate(out):
            if (abs(prev.location[0] - z[0]) < 1e-7
                    and abs(prev.location[1] - z[1]) < 1e-7):
                merged = SingularPoint(prev.location, prev.multiplicity,
                                       prev.exact,
                                       prev.intersection_multiplicity + mult)
                out[k] = merged
                break
        else:
            out.append(SingularPoint(z, nu, exact, mult))
    return out


def _fiber_common_roots(P: Poly2, Q: Poly2, x0: complex, tol: float) -> list:
    """y-values above x = x0 where both P and Q vanish (numerically)."""
    def coeffs_at(poly):
        rows = poly.y_coefficients()
        return [row.eval_complex(x0) for row in rows]

    cp, cq = coeffs_at(P), coeffs_at(Q)

    def effective(cs):
        scale = max((abs(c) for c in cs), default=0.0)
        if scale == 0:
            return []
        out = list(cs)
        while out and abs(out[-1]) <= 1e-12 * scale:
            out.pop()
        return out

    cp, cq = effective(cp), effective(cq)
    primary, other_poly = (cp, Q) if len(cp) >= 2 else (cq, P)
    if len(primary) < 2:
        # the fiber polynomial degenerated to a constant on both sides
        return []
    try:
        cands = univariate_roots(primary, tol=1e-8)
    except RootFindingError:
        return []
    scale_other = max(1.0, max((abs(c.to_complex())
                                for c in other_poly.terms.values()), default=1.0))
    good = []
    for y0 in cands:
        if abs(other_poly.eval_complex(x0, y0)) <= 1e-5 * scale_other:
            if all(abs(y0 - g) > 1e-7 for g in good):
                good.append(y0)
    return good


# ----------------------------------------------------------------------
# Chart transitions (Laurent bookkeeping)
# ----------------------------------------------------------------------

class _Laurent:
    """Minimal Laurent-polynomial helper: dict (i, j) -> ExactComplex with
    possibly negative exponents.  Internal to chart algebra."""

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = ExactComplex.coerce(c)
                if not c.is_zero():
                    self.terms[e] = c

    @staticmethod
    def from_poly_sub(p: Poly2, ex_pair, ey_pair):
        """Substitute x -> monomial ex_pair, y -> monomial ey_pair where each
        pair is (exponent vector, and coefficient 1); supports (1/u, v/u) etc.
        ex_pair / ey_pair are exponent vectors of the target variables."""
        out = {}
        for (i, j), c in p.terms.items():
            e = (i * ex_pair[0] + j * ey_pair[0],
                 i * ex_pair[1] + j * ey_pair[1])
            prev = out.get(e, EC_ZERO) + c
            if prev.is_zero():
                out.pop(e, None)
            else:
                out[e] = prev
        return _Laurent(out)

    def mul_monomial(self, coeff, e):
        coeff = ExactComplex.coerce(coeff)
        out = {}
        for (i, j), c in self.terms.items():
            v = c * coeff
            if not v.is_zero():
                out[(i + e[0], j + e[1])] = v
        return _Laurent(out)

    def add(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, EC_ZERO) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return _Laurent(out)

    def min_exponents(self):
        if not self.terms:
            return (0, 0)
        return (min(e[0] for e in self.terms), min(e[1] for e in self.terms))


def _laurent_pair_to_polys(a: _Laurent, b: _Laurent):
    """Shift a common monomial so both Laurent values become polynomials with
    no common monomial denominator left; returns (A, B, (sx, sy)) where the
    pair was multiplied by x^sx y^sy."""
    mins = [m.min_exponents() for m in (a, b) if m.terms]
    if not mins:
        raise InvalidInputError("zero field in chart transition")
    sx = max(0, -min(m[0] for m in mins))
    sy = max(0, -min(m[1] for m in mins))
    def to_poly(l):
        return Poly2({(i + sx, j + sy): c for (i, j), c in l.terms.items()})
    return to_poly(a), to_poly(b), (sx, sy)


class ChartChangeResult(NamedTuple):
    foliation: AffineFoliation1Form   # reduced: coprime components
    raw_pair: tuple                   # pair straight from the transition algebra
    cleared_power: int                # l with X_source = (1/w^l) * raw field
    removed_factor: Poly2             # extra gcd removed to restore coprimality


# transition table: source -> target gives (substitution exponents of the
# source variables in target variables, and the 2x2 monomial matrix applied
# to (P o phi, Q o phi)); the divisor variable index in the target chart.
#
# Derivations follow the chain rule on the dual vector field, e.g. for
# XY -> UV with u = 1/x, v = y/x:  du/dt = -u^2 P(1/u, v/u),
# dv/dt = u Q(1/u, v/u) - u v P(1/u, v/u).
_TRANSITIONS = {
    (Chart.XY, Chart.UV): dict(xsub=(-1, 0), ysub=(-1, 1),
                               row1=[(-1, (2, 0)), None],
                               row2=[(-1, (1, 1)), (1, (1, 0))],
                               divisor_axis=0),
    (Chart.UV, Chart.XY): dict(xsub=(-1, 0), ysub=(-1, 1),
                               row1=[(-1, (2, 0)), None],
                               row2=[(-1, (1, 1)), (1, (1, 0))],
                               divisor_axis=0),
    (Chart.XY, Chart.RS): dict(xsub=(-1, 1), ysub=(-1, 0),
                               row1=[None, (-1, (2, 0))],
                               row2=[(1, (1, 0)), (-1, (1, 1))],
                               divisor_axis=0),
    # x = s/r, y = 1/r: xdot = y*sdot - x*y*rdot, ydot = -y^2*rdot
    (Chart.RS, Chart.XY): dict(xsub=(0, -1), ysub=(1, -1),
                               row1=[(-1, (1, 1)), (1, (0, 1))],
                               row2=[(-1, (0, 2)), None],
                               divisor_axis=1),
    (Chart.UV, Chart.RS): dict(xsub=(1, -1), ysub=(0, -1),
                               row1=[(1, (0, 1)), (-1, (1, 1))],
                               row2=[None, (-1, (0, 2))],
                               divisor_axis=1),
    (Chart.RS, Chart.UV): dict(xsub=(1, -1), ysub=(0, -1),
                               row1=[(1, (0, 1)), (-1, (1, 1))],
                               row2=[None, (-1, (0, 2))],
                               divisor_axis=1),
}


def chart_change(f: AffineFoliation1Form, target: Chart) -> ChartChangeResult:
    """Rewrite the foliation in another projective chart.

    The raw pair clears only the monomial denominators produced by the
    rational substitution (matching the classical computation); the returned
    foliation additionally removes any residual common factor so that the
    coprimality invariant holds.  cleared_power reports the net power l of
    the chart variable with X_source = w^{-l} X_target off the divisor.
    """
    if f.chart == target:
        return ChartChangeResult(f, (f.P, f.Q), 0, Poly2.constant(1))
    spec = _TRANSITIONS[(f.chart, target)]
    Pc = _Laurent.from_poly_sub(f.P, spec["xsub"], spec["ysub"])
    Qc = _Laurent.from_poly_sub(f.Q, spec["xsub"], spec["ysub"])

    def combine(row):
        acc = _Laurent()
        for basis, entry in zip((Pc, Qc), row):
            if entry is None:
                continue
            coeff, expo = entry
            acc = acc.add(basis.mul_monomial(coeff, expo))
        return acc

    comp1 = combine(spec["row1"])
    comp2 = combine(spec["row2"])
    A, B, shifts = _laurent_pair_to_polys(comp1, comp2)
    ell = shifts[spec["divisor_axis"]]
    fol = make_foliation(A, B, chart=target)
    return ChartChangeResult(fol, (A, B), ell, fol.removed_factor)


def line_at_infinity_invariant(f: AffineFoliation1Form) -> bool:
    """True iff the projective line at infinity is invariant.

    Computed in the UV chart: after reduction the divisor {u = 0} must divide
    the u-component of the transformed field.
    """
    if f.chart != Chart.XY:
        raise InvalidInputError("expected a foliation in the affine XY chart")
    res = chart_change(f, Chart.UV)
    u = Poly2.variable("x")  # first coordinate of the UV chart
    return u.divides(res.foliation.P)


# ----------------------------------------------------------------------
# Pull-back by a rational map
# ----------------------------------------------------------------------

def pullback(f: AffineFoliation1Form, component1, component2) -> AffineFoliation1Form:
    """Pull the foliation back by phi = (F1, F2).

    Each component is a Poly2 or a pair (numerator, denominator).  The result
    is the foliation of the rational 1-form phi*omega with denominators and
    common factors cleared.  phi must be generically non-degenerate.
    """
    n1, d1 = _as_frac2(component1)
    n2, d2 = _as_frac2(component2)
    jac = ((n1.partial_derivative("x") * d1 - n1 * d1.partial_derivative("x"))
           * (n2.partial_derivative("y") * d2 - n2 * d2.partial_derivative("y"))
           - (n1.partial_derivative("y") * d1 - n1 * d1.partial_derivative("y"))
           * (n2.partial_derivative("x") * d2 - n2 * d2.partial_derivative("x")))
    if jac.is_zero():
        raise InvalidInputError("the map has identically-zero Jacobian")

    # omega = P dy - Q dx;  phi*omega = (P o phi) dF2 - (Q o phi) dF1 with
    # dFk = (dk dnk - nk ddk) / dk^2 and (P o phi) = Pnum / (d1^pa d2^pb).
    Pnum, pa, pb = _compose_num(f.P, n1, d1, n2, d2)
    Qnum, qa, qb = _compose_num(f.Q, n1, d1, n2, d2)

    w1x = d1 * n1.partial_derivative("x") - n1 * d1.partial_derivative("x")
    w1y = d1 * n1.partial_derivative("y") - n1 * d1.partial_derivative("y")
    w2x = d2 * n2.partial_derivative("x") - n2 * d2.partial_derivative("x")
    w2y = d2 * n2.partial_derivative("y") - n2 * d2.partial_derivative("y")

    # common denominator d1^a d2^b over both terms
    a = max(pa, qa + 2)
    b = max(pb + 2, qb)
    scale_p = d1 ** (a - pa) * d2 ** (b - pb - 2)
    scale_q = d1 ** (a - qa - 2) * d2 ** (b - qb)
    A = (Pnum * w2x) * scale_p - (Qnum * w1x) * scale_q
    B = (Pnum * w2y) * scale_p - (Qnum * w1y) * scale_q
    if A.is_zero() and B.is_zero():
        raise InvalidInputError("pull-back collapsed to zero")
    return make_foliation(B, -A)


def _as_frac2(component):
    if isinstance(component, tuple):
        n, d = Poly2.coerce(component[0]), Poly2.coerce(component[1])
        if d.is_zero():
            raise InvalidInputError("zero denominator in map component")
        return n, d
    return Poly2.coerce(component), Poly2.constant(1)


def _compose_num(p: Poly2, n1, d1, n2, d2):
    """p(n1/d1, n2/d2) = poly / (d1^a d2^b); returns (poly, a, b)."""
    a = int(p.degree_in("x")) if not p.is_zero() else 0
    b = int(p.degree_in("y")) if not p.is_zero() else 0
    a, b = max(a, 0), max(b, 0)
    out = Poly2()
    for (i, j), c in p.terms.items():
        out = out + (n1 ** i * d1 ** (a - i) * n2 ** j * d2 ** (b - j)).scale(c)
    return out, a, b


def evaluate_field(f: AffineFoliation1Form, point) -> tuple:
    """Double-precision value of the dual field at an affine point."""
    zx, zy = complex(point[0]), complex(point[1])
    vx = f.P.eval_complex(zx, zy)
    vy = f.Q.eval_complex(zx, zy)
    if not (cmath.isfinite(vx) and cmath.isfinite(vy)):
        raise InvalidInputError("field evaluation overflowed")
    return vx, vy
