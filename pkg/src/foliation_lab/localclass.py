"""Local classification of singular germs: linear part and eigenvalues,
Poincare/Siegel domain, resonances, saddle-nodes, irreducibility, formal
normal forms, Camacho-Sad indices along a straight separatrix, and a numeric
sphere-transversality diagnostic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import (AmbiguousRatioError, InternalInconsistencyError,
                     InvalidInputError)
from .foliation import AffineFoliation1Form, Chart, chart_change, make_foliation
from .polyalg import (EC_ONE, EC_ZERO, ExactComplex, Poly1, Poly2,
                      RationalFunction1, residue_at_zero)

AMBIGUITY_TOL = 1e-9
AMBIGUITY_MAX_DEN = 10**6
NORMAL_FORM_ORDER_CAP = 20
SMALL_DIVISOR_FLOOR = 1e-12


class Domain:
    POINCARE = "Poincare"
    SIEGEL = "Siegel"
    SADDLE_NODE = "SaddleNode"
    NILPOTENT = "Nilpotent"
    DEGENERATE = "DegenerateLinearPart"


@dataclass(frozen=True)
class LinearPartInfo:
    matrix: tuple                 # 2x2 of ExactComplex (entries of the Jacobian)
    eigenvalues: tuple            # pair: ExactComplex when exact, else complex
    exact: bool
    trace: ExactComplex
    determinant: ExactComplex


@dataclass(frozen=True)
class SingularityReport:
    eigenvalues: tuple
    ratio: Optional[object]              # ExactComplex / complex / None
    domain: str
    resonance: Optional[int]
    irreducible: bool
    rational_ratio: Optional[Fraction]
    exact: bool

    def to_json_dict(self) -> dict:
        def num(v):
            if v is None:
                return None
            if isinstance(v, ExactComplex):
                return {"type": "exact", "re": str(v.re), "im": str(v.im)}
            z = complex(v)
            return {"type": "approx", "re": z.real, "im": z.imag,
                    "tol": AMBIGUITY_TOL}
        return {
            "eigenvalues": [num(e) for e in self.eigenvalues],
            "ratio": num(self.ratio),
            "domain": self.domain,
            "resonance": self.resonance,
            "irreducible": self.irreducible,
            "rational_ratio": (str(self.rational_ratio)
                               if self.rational_ratio is not None else None),
            "exact": self.exact,
        }


# ----------------------------------------------------------------------
# Linear part
# ----------------------------------------------------------------------

def linear_part(f: AffineFoliation1Form, point=None) -> LinearPartInfo:
    """Jacobian of (P, Q) at a singular point (default: origin), with exact
    eigenvalues whenever the characteristic polynomial splits over Q(i)."""
    g = _translated(f, point)
    J = (g.P.partial_derivative("x").eval_exact(0, 0),
         g.P.partial_derivative("y").eval_exact(0, 0),
         g.Q.partial_derivative("x").eval_exact(0, 0),
         g.Q.partial_derivative("y").eval_exact(0, 0))
    a, b, c, d = J
    tr = a + d
    det = a * d - b * c
    if b.is_zero() or c.is_zero():
        # triangular: keep the (x-direction, y-direction) order
        return LinearPartInfo(J, (a, d), True, tr, det)
    disc = tr * tr - 4 * det
    root = disc.sqrt()
    if root is not None:
        half = ExactComplex(Fraction(1, 2))
        eig = ((tr + root) * half, (tr - root) * half)
        return LinearPartInfo(J, eig, True, tr, det)
    zdisc = cmath.sqrt(disc.to_complex())
    zt = tr.to_complex()
    eig = ((zt + zdisc) / 2, (zt - zdisc) / 2)
    return LinearPartInfo(J, eig, False, tr, det)


def _translated(f: AffineFoliation1Form, point):
    if point is None:
        return f
    if isinstance(point, tuple) and len(point) == 2:
        a, b = point
        if isinstance(a, ExactComplex) and isinstance(b, ExactComplex):
            return f.shift(a, b)
        raise InvalidInputError(
            "translation point must be a pair of ExactComplex "
            "(numeric points: shift with floats upstream)")
    # SingularPoint duck-typing
    if getattr(point, "exact", None) is not None:
        a, b = point.exact
        return f.shift(a, b)
    raise InvalidInputError("point must be exact to translate the germ exactly")


# ----------------------------------------------------------------------
# Classification
# ----------------------------------------------------------------------

def _rational_ratio_from_trace_det(tr: ExactComplex,
                                   det: ExactComplex) -> Optional[Fraction]:
    """If the eigenvalue ratio r = l1/l2 is a (real) rational, return it.

    r satisfies det*r^2 + (2 det - tr^2) r + det = 0; rationality is decided
    exactly from s = tr^2/det via a perfect-square test.
    """
    s = tr * tr / det
    if not s.is_real():
        return None
    sv = s.re
    # r + 1/r = s - 2; rational roots need (s-2)^2 - 4 to be a rational square
    disc = (sv - 2) * (sv - 2) - 4
    if disc < 0:
        return None
    num, dnum = disc.numerator, disc.denominator
    rn, rd = math.isqrt(num), math.isqrt(dnum)
    if rn * rn != num or rd * rd != dnum:
        return None
    root = Fraction(rn, rd)
    r = ((sv - 2) + root) / 2
    if r == 0:
        r = ((sv - 2) - root) / 2
    return Fraction(r)


def _pick_ratio_fraction(eig_exact) -> Optional[Fraction]:
    l1, l2 = eig_exact
    if l2.is_zero():
        return None
    r = l1 / l2
    if r.is_real():
        return Fraction(r.re)
    return None


def classify(f: AffineFoliation1Form, point=None,
             ambiguity_tol: float = AMBIGUITY_TOL) -> SingularityReport:
    """Classify an isolated singular germ.

    Exact eigenvalue data (rational, or quadratic surds with a rational
    ratio) is decided exactly.  A numeric ratio that sits within
    ambiguity_tol of a small-denominator rational raises AmbiguousRatioError
    instead of silently choosing a side of the positive-rational test.
    """
    lp = linear_part(f, point)
    a, b, c, d = lp.matrix
    tr, det = lp.trace, lp.determinant
    lin_zero = all(v.is_zero() for v in lp.matrix)

    if det.is_zero():
        if tr.is_zero():
            domain = Domain.DEGENERATE if lin_zero else Domain.NILPOTENT
            return SingularityReport(lp.eigenvalues, None, domain, None,
                                     False, None, True)
        # exactly one zero eigenvalue
        return SingularityReport(lp.eigenvalues, None, Domain.SADDLE_NODE,
                                 None, True, None, True)

    if lp.exact:
        l1, l2 = lp.eigenvalues
        ratio = l1 / l2
        rat = _pick_ratio_fraction(lp.eigenvalues)
        return _report_from_exact_ratio(lp.eigenvalues, ratio, rat, exact=True)

    # eigenvalues live in a quadratic extension: the ratio test is still exact
    rat = _rational_ratio_from_trace_det(tr, det)
    if rat is not None:
        # surd eigenvalues with rational ratio; realness of the ratio is known
        z1, z2 = lp.eigenvalues
        return _report_from_exact_ratio(lp.eigenvalues, None, rat, exact=True,
                                        numeric_ratio=z1 / z2)
    s = tr * tr / det
    z1, z2 = lp.eigenvalues
    ratio = z1 / z2
    if s.is_real():
        # ratio is exactly real (or on the unit circle): decide Siegel exactly
        sv = s.re
        if sv <= 0:
            # real negative ratio
            return SingularityReport(lp.eigenvalues, ratio, Domain.SIEGEL,
                                     None, True, None, True)
        if sv < 4:
            # non-real ratio on the unit circle
            return SingularityReport(lp.eigenvalues, ratio, Domain.POINCARE,
                                     None, True, None, True)
        # real positive irrational ratio (rationality was excluded above)
        return SingularityReport(lp.eigenvalues, ratio, Domain.POINCARE,
                                 None, True, None, True)
    # genuinely numeric ratio: refuse to decide near rationals
    near = _nearest_rational(ratio, ambiguity_tol)
    if near is not None:
        raise AmbiguousRatioError(ratio, near)
    domain = Domain.SIEGEL if (abs(ratio.imag) <= ambiguity_tol
                               and ratio.real < 0) else Domain.POINCARE
    # not within tolerance of any small rational, so certainly outside Q+
    return SingularityReport(lp.eigenvalues, ratio, domain, None, True,
                             None, False)


def _nearest_rational(ratio: complex, tol: float) -> Optional[Fraction]:
    if abs(ratio.imag) > tol:
        return None
    cand = Fraction(ratio.real).limit_denominator(AMBIGUITY_MAX_DEN)
    if abs(float(cand) - ratio.real) <= tol:
        return cand
    return None


def _report_from_exact_ratio(eig, ratio, rat: Optional[Fraction], exact: bool,
                             numeric_ratio=None):
    """Common tail once the rationality of the ratio is decided exactly."""
    resonance = None
    if rat is not None:
        if rat > 0:
            irreducible = False
            if rat.denominator == 1 and rat >= 2:
                resonance = int(rat)
            elif rat.numerator == 1 and rat.denominator >= 2:
                resonance = int(rat.denominator)
            elif rat == 1:
                resonance = None
        else:
            irreducible = True
        domain = Domain.SIEGEL if rat < 0 else Domain.POINCARE
        shown = ratio if ratio is not None else numeric_ratio
        return SingularityReport(eig, shown, domain, resonance, irreducible,
                                 rat, exact)
    # exact non-rational ratio
    if isinstance(ratio, ExactComplex):
        siegel = ratio.is_real() and ratio.re < 0
    else:
        z = complex(numeric_ratio)
        siegel = abs(z.imag) < 1e-15 and z.real < 0
    domain = Domain.SIEGEL if siegel else Domain.POINCARE
    return SingularityReport(eig, ratio if ratio is not None else numeric_ratio,
                             domain, None, True, None, exact)


def is_irreducible(f: AffineFoliation1Form, point=None) -> bool:
    return classify(f, point).irreducible


# ----------------------------------------------------------------------
# Formal normal form
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FormalConjugacy:
    """Truncated polynomial change of coordinates x = xi(x~) with xi'(0) = Id."""

    components: tuple        # pair of Poly2 (new coordinates expression)
    order: int
    resonant_monomials: tuple = field(default_factory=tuple)

    def apply_to_field(self, P: Poly2, Q: Poly2, order: int):
        return _push_forward(self.components, P, Q, order)


@dataclass(frozen=True)
class NormalFormResult:
    conjugacy: FormalConjugacy
    normal_P: Poly2
    normal_Q: Poly2
    residual_order: float      # > order for success, math.inf when linearized


def _truncate(p: Poly2, order: int) -> Poly2:
    return Poly2({e: c for e, c in p.terms.items() if e[0] + e[1] <= order})


def _push_forward(phi, P: Poly2, Q: Poly2, order: int):
    """Field components in the new coordinates for x = phi(x~): the field
    X~ = (Dphi)^{-1} (X o phi), truncated at total degree `order`."""
    p1, p2 = phi
    Pn = _truncate(P.substitute(p1, p2), order)
    Qn = _truncate(Q.substitute(p1, p2), order)
    a = p1.partial_derivative("x")
    b = p1.partial_derivative("y")
    c = p2.partial_derivative("x")
    d = p2.partial_derivative("y")
    det = _truncate(a * d - b * c, order)
    inv_det = _series_inverse(det, order)
    newP = _truncate(_truncate(d * Pn - b * Qn, order) * inv_det, order)
    newQ = _truncate(_truncate(-c * Pn + a * Qn, order) * inv_det, order)
    return newP, newQ


def _series_inverse(p: Poly2, order: int) -> Poly2:
    """1/p as a truncated power series; p(0,0) must be invertible."""
    c0 = p.eval_exact(0, 0)
    if c0.is_zero():
        raise InvalidInputError("series inverse of a non-unit")
    rest = (p - Poly2.constant(c0)).scale(EC_ONE / c0)
    inv = Poly2.constant(EC_ONE / c0)
    powr = Poly2.constant(1)
    sign = 1
    acc = Poly2.constant(1)
    for _ in range(order):
        powr = _truncate(powr * rest, order)
        sign = -sign
        acc = acc + (powr if sign > 0 else -powr)
        if powr.is_zero():
            break
    return _truncate(acc.scale(EC_ONE / c0), order)


def formal_normal_form(f: AffineFoliation1Form, order: int = 6,
                       point=None) -> NormalFormResult:
    """Poincare-Dulac normal form through total degree `order`.

    Requires an exactly diagonal(izable over Q(i)) non-degenerate linear
    part.  Non-resonant monomials are removed degree by degree by solving the
    homological equation; monomials with vanishing divisor <m, l> - l_s are
    kept (these are the resonant terms of the normal form).
    """
    if order > NORMAL_FORM_ORDER_CAP:
        raise InvalidInputError(f"order cap is {NORMAL_FORM_ORDER_CAP}")
    g = _translated(f, point)
    lp = linear_part(g)
    if lp.determinant.is_zero():
        raise InvalidInputError("normal form requires a non-degenerate linear part")
    if not lp.exact:
        raise InvalidInputError(
            "normal form requires eigenvalues split over the Gaussian rationals")
    a, b, c, d = lp.matrix
    l1, l2 = lp.eigenvalues
    P, Q = g.P, g.Q
    if not (b.is_zero() and c.is_zero()):
        M = _exact_eigenbasis(lp)
        P, Q = _linear_change(P, Q, M)
        lp2 = (P.partial_derivative("x").eval_exact(0, 0),
               Q.partial_derivative("y").eval_exact(0, 0))
        l1, l2 = lp2
    P = _truncate(P, order)
    Q = _truncate(Q, order)

    xpoly, ypoly = Poly2.variable("x"), Poly2.variable("y")
    phi = (xpoly, ypoly)
    resonant = []
    for deg in range(2, order + 1):
        Pd = P.homogeneous_part(deg)
        Qd = Q.homogeneous_part(deg)
        h1 = {}
        h2 = {}
        for comp, part, store in ((0, Pd, h1), (1, Qd, h2)):
            ls = l1 if comp == 0 else l2
            for (m1, m2), coeff in part.terms.items():
                divisor = l1 * m1 + l2 * m2 - ls
                if divisor.is_zero():
                    resonant.append((comp, (m1, m2), coeff))
                    continue
                store[(m1, m2)] = coeff / divisor
        if not h1 and not h2:
            continue
        step = (xpoly + Poly2(h1), ypoly + Poly2(h2))
        P, Q = _push_forward(step, P, Q, order)
        phi = (_truncate(phi[0].substitute(step[0], step[1]), order),
               _truncate(phi[1].substitute(step[0], step[1]), order))

    conj = FormalConjugacy(phi, order, tuple(resonant))
    identity = (phi[0] == xpoly and phi[1] == ypoly)
    exactly_normal = (P == _truncate(g.P, order) and Q == _truncate(g.Q, order)
                      and g.P.degree() <= order and g.Q.degree() <= order)
    residual = math.inf if (identity and exactly_normal) else order + 1
    return NormalFormResult(conj, P, Q, residual_order=residual)


def _exact_eigenbasis(lp: LinearPartInfo):
    """Columns are exact eigenvectors of the Jacobian; requires exact,
    distinct-or-diagonal eigenvalues."""
    a, b, c, d = lp.matrix
    l1, l2 = lp.eigenvalues
    if l1 == l2:
        raise InvalidInputError(
            "equal eigenvalues with non-diagonal linear part are not supported")
    cols = []
    for lam in (l1, l2):
        # (a - lam) v1 + b v2 = 0
        if not b.is_zero():
            cols.append((b, lam - a))
        elif not c.is_zero():
            cols.append((lam - d, c))
        else:
            cols.append((EC_ONE, EC_ZERO) if lam == a else (EC_ZERO, EC_ONE))
    return cols


def _linear_change(P: Poly2, Q: Poly2, cols):
    """Field components after x = M x~ with M given by columns."""
    (m11, m21), (m12, m22) = cols
    det = m11 * m22 - m12 * m21
    if det.is_zero():
        raise InternalInconsistencyError("eigenbasis is singular")
    xpoly, ypoly = Poly2.variable("x"), Poly2.variable("y")
    newx = xpoly.scale(m11) + ypoly.scale(m12)
    newy = xpoly.scale(m21) + ypoly.scale(m22)
    Pc = P.substitute(newx, newy)
    Qc = Q.substitute(newx, newy)
    inv = EC_ONE / det
    newP = (Pc.scale(m22) - Qc.scale(m12)).scale(inv)
    newQ = (Qc.scale(m11) - Pc.scale(m21)).scale(inv)
    return newP, newQ


# ----------------------------------------------------------------------
# Camacho-Sad index
# ----------------------------------------------------------------------

def camacho_sad_index(f: AffineFoliation1Form, point=None):
    """Index of the separatrix {y = 0} at a singular point on the axis.

    With omega = A dx + B dy (A = -Q, B = P) and A = y A1 the index is the
    residue of -A1(x, 0)/B(x, 0) dx at the point.  Exact for exact points,
    numeric contour residue otherwise.
    """
    A = -f.Q
    B = f.P
    ypoly = Poly2.variable("y")
    A1 = A.try_divide(ypoly)
    if A1 is None:
        raise InvalidInputError("the axis {y=0} is not invariant")
    if B.restrict_y0().is_zero():
        raise InvalidInputError("B(x,0) vanishes identically on the axis")
    num = -A1.restrict_y0()
    den = B.restrict_y0()
    exact_pt = _exact_axis_point(point)
    if exact_pt is not None:
        r = RationalFunction1(num.shift(exact_pt), den.shift(exact_pt))
        return residue_at_zero(r)
    # numeric contour residue around the point
    x0 = complex(point) if point is not None else 0j
    others = [z for z in np.roots(list(reversed(den.to_complex_coeffs())))
              if abs(z - x0) > 1e-8]
    radius = 0.5 * min((abs(z - x0) for z in others), default=1.0)
    radius = min(max(radius, 1e-4), 1.0)
    n = 2048
    acc = 0j
    for k in range(n):
        th = 2 * math.pi * k / n
        z = x0 + radius * cmath.exp(1j * th)
        dz = radius * 1j * cmath.exp(1j * th)
        acc += num.eval_complex(z) / den.eval_complex(z) * dz
    # (1/2pi i) * integral, trapezoid weight 2pi/n
    return acc / (n * 1j)


def _exact_axis_point(point):
    if point is None:
        return ExactComplex(0)
    if isinstance(point, ExactComplex):
        return point
    if isinstance(point, (int, Fraction)):
        return ExactComplex(point)
    return None


@dataclass(frozen=True)
class IndexTheoremReport:
    indices: tuple          # ((point description, value), ...)
    total: object           # ExactComplex or complex
    expected: int
    passed: bool
    exact: bool


def index_theorem_check(f: AffineFoliation1Form, line=None,
                        tol: float = 1e-8) -> IndexTheoremReport:
    """Sum the Camacho-Sad indices over the projective closure of an
    invariant affine line (default {y = 0}) and compare with its
    self-intersection, which is 1 for a line in the projective plane.
    """
    g = _straighten_line(f, line)
    # affine singularities on {y = 0}: common roots of P(x,0), Q(x,0)
    h = g.P.restrict_y0().gcd(g.Q.restrict_y0())
    entries = []
    exact = True
    if h.degree() >= 1:
        from .roots import poly1_roots_tagged
        for z, ex in poly1_roots_tagged(h):
            if ex is not None:
                val = camacho_sad_index(g.shift(ex, EC_ZERO))
            else:
                val = camacho_sad_index(g, point=z)
                exact = False
            entries.append((("affine", z), val))
    elif h.is_zero():
        raise InvalidInputError("the line is a curve of singularities")
    # the point at infinity of the x-axis sits at the UV-chart origin on {v=0}
    guv = chart_change(g, Chart.UV).foliation
    if (guv.P.eval_exact(0, 0).is_zero()
            and guv.Q.eval_exact(0, 0).is_zero()):
        val = camacho_sad_index(guv)
        entries.append((("infinity", None), val))
    total = None
    for _, v in entries:
        if isinstance(v, ExactComplex) and isinstance(total, (type(None), ExactComplex)):
            total = v if total is None else total + v
        else:
            exact = False
            base = total.to_complex() if isinstance(total, ExactComplex) else (total or 0j)
            total = base + (v.to_complex() if isinstance(v, ExactComplex) else v)
    if total is None:
        total = EC_ZERO
    if isinstance(total, ExactComplex):
        passed = total == EC_ONE
    else:
        passed = abs(total - 1) <= tol
    return IndexTheoremReport(tuple(entries), total, 1, passed, exact)


def _straighten_line(f: AffineFoliation1Form, line):
    """Move an invariant affine line to {y = 0} by an exact affine map.

    line: None (already the x-axis), 'x' (the y-axis x = 0), or a triple
    (alpha, beta, gamma) of ExactComplex for alpha x + beta y + gamma = 0.
    """
    if line is None or line == "y":
        return f
    if line == "x":
        return f.swap_axes()
    alpha, beta, gamma = (ExactComplex.coerce(v) for v in line)
    if beta.is_zero():
        if alpha.is_zero():
            raise InvalidInputError("degenerate line")
        # x = -gamma/alpha: swap axes after translating
        shifted = f.shift(-gamma / alpha, EC_ZERO)
        return shifted.swap_axes()
    # substitute y' = alpha x + beta y + gamma, x' = x:
    # (x, y) = (x', (y' - gamma - alpha x')/beta)
    xp, yp = Poly2.variable("x"), Poly2.variable("y")
    binv = EC_ONE / beta
    ysub = (yp - xp.scale(alpha) - Poly2.constant(gamma)).scale(binv)
    newP = f.P.substitute(xp, ysub)
    newQ = f.Q.substitute(xp, ysub)
    # dy'/dt = alpha P + beta Q, dx'/dt = P
    return make_foliation(newP, newP.scale(alpha) + newQ.scale(beta))


# ----------------------------------------------------------------------
# Sphere transversality diagnostic
# ----------------------------------------------------------------------

def sphere_transversality(f: AffineFoliation1Form, radius: float = 1.0,
                          samples: int = 2000, seed: int = 0,
                          refine: int = 8) -> float:
    """Monte-Carlo minimum over the sphere |z| = radius of the normalized
    hermitian pairing |<Z(z), z>| / (||Z(z)|| * radius).

    A value above a threshold indicates transversality of the foliation to
    that sphere at the sampled resolution; this is a diagnostic, not a proof.
    """
    if radius <= 0:
        raise InvalidInputError("radius must be positive")
    rng = np.random.default_rng(seed)

    def pairing(v4):
        z1 = complex(v4[0], v4[1])
        z2 = complex(v4[2], v4[3])
        nrm = math.hypot(abs(z1), abs(z2))
        if nrm == 0:
            return 1.0
        z1, z2 = z1 / nrm * radius, z2 / nrm * radius
        p = f.P.eval_complex(z1, z2)
        q = f.Q.eval_complex(z1, z2)
        zn = math.hypot(abs(p), abs(q))
        if zn == 0:
            return 0.0
        return abs(z1.conjugate() * p + z2.conjugate() * q) / (zn * radius)

    pts = rng.normal(size=(samples, 4))
    values = np.array([pairing(v) for v in pts])
    order_idx = np.argsort(values)
    best = float(values[order_idx[0]])
    try:
        from scipy.optimize import minimize
        for idx in order_idx[:refine]:
            res = minimize(pairing, pts[idx], method="Nelder-Mead",
                           options={"maxiter": 200, "xatol": 1e-10,
                                    "fatol": 1e-12})
            best = min(best, float(res.fun))
    except Exception:
        pass
    return max(best, 0.0)
