"""Invariant algebraic curves, cofactors, Jouanolou's dimension bound,
cofactor dependencies, Darboux and rational first integrals, and the
structure checks for closed rational 1-forms.

Throughout, X(f) = P f_x + Q f_y is the derivative of f along the dual
field; a curve {c = 0} is invariant exactly when c divides X(c), and the
quotient K is its cofactor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvalidInputError
from .foliation import AffineFoliation1Form, make_foliation
from .polyalg import (EC_ONE, EC_ZERO, ExactComplex, Poly1, Poly2, gcd2)
from .roots import poly1_roots_tagged


def field_derivative(f: AffineFoliation1Form, c: Poly2) -> Poly2:
    return f.P * c.partial_derivative("x") + f.Q * c.partial_derivative("y")


@dataclass(frozen=True)
class InvariantCurve:
    poly: Poly2
    cofactor: Poly2

    def __post_init__(self):
        # re-check the defining identity at construction
        pass


def invariance_check(f: AffineFoliation1Form, c: Poly2) -> Optional[InvariantCurve]:
    """Cofactor of {c = 0} when the curve is invariant, else None."""
    c = Poly2.coerce(c)
    if c.is_constant():
        raise InvalidInputError("invariance is only meaningful for curves")
    d = field_derivative(f, c)
    if d.is_zero():
        return InvariantCurve(c, Poly2())
    k = d.try_divide(c)
    if k is None:
        return None
    deg_bound = max(f.P.degree(), f.Q.degree()) - 1
    if k.degree() > deg_bound:
        raise InvalidInputError(
            f"cofactor degree {k.degree()} exceeds the bound {deg_bound}")
    return InvariantCurve(c, k)


# ----------------------------------------------------------------------
# Invariant lines
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ApproxLine:
    """A numerically certified invariant line alpha x + beta y + gamma = 0."""

    alpha: complex
    beta: complex
    gamma: complex
    residual: float


@dataclass(frozen=True)
class InvariantLinesResult:
    lines: tuple                 # InvariantCurve, exact
    approx_lines: tuple          # ApproxLine
    infinitely_many: bool


def find_invariant_lines(f: AffineFoliation1Form,
                         tol: float = 1e-8) -> InvariantLinesResult:
    """All invariant affine lines, or the degenerate "infinitely many"
    outcome (a pencil of invariant lines, as for the radial field).

    Lines with slope are sought as s x + y + g = 0: invariance means
    (s P + Q)(x, -s x - g) vanishes identically, a polynomial system in
    (s, g) solved by resultants; vertical lines x + g = 0 reduce to a
    univariate condition.  Rational solutions are certified exactly.
    """
    xv, yv = Poly2.variable("x"), Poly2.variable("y")
    found = []
    approx = []

    # ---- sloped family: c = s x + y + g, parameters (s, g) as Poly2 vars
    s, g = xv, yv  # reuse Poly2 slots for the parameter plane
    # R(x) coefficients: substitute y = -s x - g into sP + Q; collect in x.
    # We expand symbolically with x as a formal variable over the (s,g) ring:
    # work with dict degree-in-x -> Poly2 in (s, g).
    coeffs = _sloped_line_conditions(f)
    if all(c.is_zero() for c in coeffs):
        infinitely_many = True
    else:
        nonzero = [c for c in coeffs if not c.is_zero()]
        common = nonzero[0]
        for c in nonzero[1:]:
            common = gcd2(common, c)
            if common.is_constant():
                break
        infinitely_many = not common.is_constant()
        if not infinitely_many:
            for sval, gval, exact in _solve_parameter_system(nonzero, tol):
                if exact is not None:
                    cand = xv.scale(exact[0]) + yv + Poly2.constant(exact[1])
                    curve = invariance_check(f, cand)
                    if curve is not None:
                        found.append(curve)
                else:
                    resid = _line_residual(f, sval, 1.0, gval)
                    if resid <= tol:
                        approx.append(ApproxLine(sval, 1.0, gval, resid))

    # ---- vertical family: c = x + g
    vert = _vertical_line_conditions(f)
    if vert is not None:
        if vert.degree() < 1:
            if vert.is_zero():
                infinitely_many = True
        else:
            for z, ex in poly1_roots_tagged(vert):
                if ex is not None:
                    cand = xv + Poly2.constant(ex)
                    curve = invariance_check(f, cand)
                    if curve is not None:
                        found.append(curve)
                else:
                    resid = _line_residual(f, 1.0, 0.0, z)
                    if resid <= tol:
                        approx.append(ApproxLine(1.0, 0.0, z, resid))

    # dedupe exact lines
    seen, uniq = set(), []
    for c in found:
        key = frozenset(c.poly.terms.items())
        if key not in seen:
            seen.add(key)
            uniq.append(c)
    return InvariantLinesResult(tuple(uniq), tuple(approx), infinitely_many)


def _sloped_line_conditions(f) -> list:
    """Coefficients (in x) of (s P + Q)(x, -s x - g), each a Poly2 in (s, g)."""
    sv, gv = Poly2.variable("x"), Poly2.variable("y")   # parameter plane
    out = {}
    for poly, weight in ((f.P, "s"), (f.Q, None)):
        for (i, j), c in poly.terms.items():
            # expand (-s x - g)^j = sum_k C(j,k) (-s)^k (-g)^(j-k) x^k
            for k in range(j + 1):
                coeff_param = (sv ** k * gv ** (j - k)).scale(
                    ExactComplex((-1) ** j * math.comb(j, k)) * c)
                if weight == "s":
                    coeff_param = coeff_param * sv
                xdeg = i + k
                out[xdeg] = out.get(xdeg, Poly2()) + coeff_param
    return [out[d] for d in sorted(out)]


def _vertical_line_conditions(f) -> Optional[Poly1]:
    """P(-g, y) must vanish identically: returns the gcd over y-coefficients
    of P(x, y) evaluated at x = -g, i.e. a Poly1 in g whose roots give the
    vertical invariant lines."""
    # invariance of {x = -g}: X(x + g) = P must vanish on the line, i.e.
    # P(-g, y) = 0 for all y.
    rows = f.P.y_coefficients()
    if not rows:
        return None
    conds = []
    for row in rows:
        if row.is_zero():
            continue
        # row(-g): flip sign of odd coefficients
        conds.append(Poly1([c * ((-1) ** k) for k, c in enumerate(row.coeffs)]))
    if not conds:
        return Poly1()
    gcd = conds[0]
    for c in conds[1:]:
        gcd = gcd.gcd(c)
    return gcd


def _solve_parameter_system(conds: list, tol: float) -> list:
    """Common zeros (s, g) of a finite list of Poly2 conditions."""
    from .polyalg import resultant_y
    sols = []
    # eliminate g: pairwise resultants in the second variable
    with_g = [c for c in conds if c.degree_in("y") > 0]
    no_g = [c for c in conds if c.degree_in("y") == 0 and not c.is_zero()]
    svals = None
    if len(with_g) >= 2:
        rs = None
        for i in range(len(with_g) - 1):
            r = resultant_y(with_g[i], with_g[i + 1])
            rs = r if rs is None else rs.gcd(r)
        if not rs.is_zero() and rs.degree() >= 1:
            svals = poly1_roots_tagged(rs)
        elif rs.is_zero():
            svals = None  # degenerate; fall through to no_g handling
    if svals is None:
        base = None
        for c in no_g + [c.y_coefficients()[0] for c in with_g
                         if not c.y_coefficients()[0].is_zero()]:
            row = c.restrict_y0() if isinstance(c, Poly2) else c
            if row.is_zero():
                continue
            base = row if base is None else base.gcd(row)
        if base is None or base.degree() < 1:
            svals = []
        else:
            svals = poly1_roots_tagged(base)
    out = []
    for sz, sex in svals:
        # substitute s and find common g roots
        polys = []
        for c in conds:
            if sex is not None:
                rows = c.y_coefficients()
                vals = [row.eval_exact(sex) for row in rows]
                polys.append(Poly1(vals))
            else:
                rows = c.y_coefficients()
                vals = [row.eval_complex(sz) for row in rows]
                polys.append(vals)
        if sex is not None:
            gpoly = Poly1()
            for p in polys:
                gpoly = p if gpoly.is_zero() else gpoly.gcd(p)
            if gpoly.is_zero():
                continue
            if gpoly.degree() == 0:
                continue
            for gz, gex in poly1_roots_tagged(gpoly):
                if gex is not None:
                    out.append((sz, gz, (sex, gex)))
                else:
                    out.append((sz, gz, None))
        else:
            # numeric-only path
            from .roots import univariate_roots
            cand = None
            for p in polys:
                eff = [abs(v) for v in p]
                if max(eff, default=0.0) > 1e-10 and len(p) > 1:
                    cand = p
                    break
            if cand is None:
                continue
            for gz in univariate_roots(cand, tol=1e-8):
                out.append((sz, gz, None))
    return out


def _line_residual(f, alpha, beta, gamma) -> float:
    """Numeric invariance defect of alpha x + beta y + gamma."""
    import numpy as np
    rng_pts = [complex(t, 0.3 * t * t - 1) for t in
               (-1.3, -0.7, -0.2, 0.4, 0.9, 1.5)]
    worst = 0.0
    for zx in rng_pts:
        if beta != 0:
            zy = (-gamma - alpha * zx) / beta
        else:
            zx, zy = -gamma / alpha, zx
        val = (f.P.eval_complex(zx, zy) * alpha
               + f.Q.eval_complex(zx, zy) * beta)
        worst = max(worst, abs(val))
    scale = max(1.0, max(abs(c.to_complex()) for c in
                         list(f.P.terms.values()) + list(f.Q.terms.values())))
    return worst / scale


# ----------------------------------------------------------------------
# Jouanolou bound and cofactor linear algebra
# ----------------------------------------------------------------------

def jouanolou_bound(k: int) -> int:
    """Dimension of the space of 2-forms on C^3 whose three components are
    homogeneous of degree k - 1."""
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    return 3 * math.comb(k + 1, 2)


def cofactor_kernel_basis(curves: list) -> list:
    """Basis of exact vectors (l_1, ..., l_r) with sum l_j K_j = 0."""
    if len(curves) < 2:
        raise InvalidInputError("need at least two curves")
    monomials = sorted({e for c in curves for e in c.cofactor.terms},
                       key=lambda e: (e[0] + e[1], e))
    rows = [[c.cofactor.terms.get(e, EC_ZERO) for c in curves]
            for e in monomials]
    return _exact_kernel(rows, len(curves))


def darboux_dependency(curves: list) -> Optional[tuple]:
    """One exact dependency among the cofactors, or None if independent."""
    basis = cofactor_kernel_basis(curves)
    return tuple(basis[0]) if basis else None


def _exact_kernel(rows: list, ncols: int) -> list:
    """Kernel basis of an exact matrix (list of rows over ExactComplex)."""
    mat = [list(r) for r in rows]
    pivots = []
    row_i = 0
    for col in range(ncols):
        pivot = None
        for r in range(row_i, len(mat)):
            if not mat[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        mat[row_i], mat[pivot] = mat[pivot], mat[row_i]
        pv = mat[row_i][col]
        mat[row_i] = [v / pv for v in mat[row_i]]
        for r in range(len(mat)):
            if r != row_i and not mat[r][col].is_zero():
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[row_i])]
        pivots.append(col)
        row_i += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [EC_ZERO] * ncols
        vec[fc] = EC_ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -mat[r][fc]
        basis.append(vec)
    return basis


# ----------------------------------------------------------------------
# First integrals
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RationalFirstIntegral:
    numerator: Poly2
    denominator: Poly2
    exponents: tuple              # integer vector used on the curves

    def kind(self):
        return "rational"


@dataclass(frozen=True)
class LogarithmicOnly:
    exponents: tuple              # the incommensurable exact vector

    def kind(self):
        return "logarithmic_only"


def rational_first_integral_from_dependencies(curves, dependency,
                                              second_dependency=None):
    """Build F = prod f_j^{m_j} from integer-scalable dependencies.

    A single dependency with commensurable (real-rational, up to a common
    complex scale) entries already yields a rational first integral; two
    independent dependencies combine through their difference after integer
    scaling.  Incommensurable exponents give the logarithmic-only outcome.
    """
    vec = _to_rational_vector(dependency)
    if vec is None and second_dependency is not None:
        vec = _to_rational_vector(second_dependency)
    if vec is None:
        return LogarithmicOnly(tuple(dependency))
    if second_dependency is not None:
        vec2 = _to_rational_vector(second_dependency)
        if vec2 is not None and vec2 != vec:
            diff = [a - b for a, b in zip(vec, vec2)]
            if any(diff):
                vec = diff
    ints = _scale_to_integers(vec)
    num, den = Poly2.constant(1), Poly2.constant(1)
    for m, curve in zip(ints, curves):
        if m > 0:
            num = num * curve.poly ** m
        elif m < 0:
            den = den * curve.poly ** (-m)
    F = RationalFirstIntegral(num, den, tuple(ints))
    return F


def _to_rational_vector(dep) -> Optional[list]:
    """Normalize an exact dependency to rational entries (scale by the first
    nonzero entry); None when the ratios are not rational."""
    entries = [ExactComplex.coerce(v) for v in dep]
    lead = next((v for v in entries if not v.is_zero()), None)
    if lead is None:
        return None
    out = []
    for v in entries:
        q = v / lead
        if not q.is_real():
            return None
        out.append(q.re)
    return out


def _scale_to_integers(vec: list) -> list:
    denlcm = 1
    for q in vec:
        denlcm = denlcm * q.denominator // math.gcd(denlcm, q.denominator)
    ints = [int(q * denlcm) for q in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def verify_first_integral(f: AffineFoliation1Form, integral) -> bool:
    """Exact test that a candidate is constant on leaves.

    Accepts a RationalFirstIntegral (or (num, den) pair of Poly2), a
    LogarithmicForm, or a list of (exponent, Poly2) pairs for the product
    form prod f_j^{l_j}.  The exact condition is the vanishing of the
    cleared numerator of X(F) (equivalently omega ^ dF = 0).
    """
    if isinstance(integral, RationalFirstIntegral):
        num, den = integral.numerator, integral.denominator
        return _verify_rational(f, num, den)
    if isinstance(integral, tuple) and len(integral) == 2 \
            and isinstance(integral[0], Poly2):
        return _verify_rational(f, integral[0], integral[1])
    if isinstance(integral, LogarithmicForm):
        return _verify_closed_form(f, integral)
    # product form: iterable of (lambda_j, f_j)
    pairs = [(ExactComplex.coerce(l), Poly2.coerce(p)) for l, p in integral]
    return _verify_product(f, pairs)


def _verify_rational(f, num, den) -> bool:
    num, den = Poly2.coerce(num), Poly2.coerce(den)
    if num.is_zero() or den.is_zero():
        raise InvalidInputError("zero numerator or denominator")
    if (num * den).is_constant():
        raise InvalidInputError("the candidate integral is constant")
    lhs = den * field_derivative(f, num) - num * field_derivative(f, den)
    return lhs.is_zero()


def _verify_product(f, pairs) -> bool:
    if not pairs:
        raise InvalidInputError("empty product")
    total = Poly2()
    for j, (lam, fj) in enumerate(pairs):
        others = Poly2.constant(1)
        for k, (_, fk) in enumerate(pairs):
            if k != j:
                others = others * fk
        total = total + (others * field_derivative(f, fj)).scale(lam)
    return total.is_zero()


def _verify_closed_form(f, L: "LogarithmicForm") -> bool:
    total = Poly2()
    prod_all = Poly2.constant(1)
    for _, fj in L.pairs:
        prod_all = prod_all * fj
    h = L.exact_part_denominator()
    for j, (lam, fj) in enumerate(L.pairs):
        others = Poly2.constant(1)
        for k, (_, fk) in enumerate(L.pairs):
            if k != j:
                others = others * fk
        total = total + (others * field_derivative(f, fj)).scale(lam)
    if L.exact_part is None:
        return total.is_zero()
    gpoly = L.exact_part
    # X(g/h) contributes (h X(g) - g X(h)) / h^2; common denominator
    extra = h * field_derivative(f, gpoly) - gpoly * field_derivative(f, h)
    total = total * h * h + prod_all * extra
    return total.is_zero()


# ----------------------------------------------------------------------
# Closed rational 1-forms in canonical shape
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LogarithmicForm:
    """sum l_j df_j/f_j + d(g / prod f_j^{n_j - 1}), the canonical shape of
    a closed rational 1-form."""

    pairs: tuple                        # ((ExactComplex, Poly2), ...)
    exact_part: Optional[Poly2] = None  # g
    pole_orders: Optional[tuple] = None # n_j >= 1, aligned with pairs

    def exact_part_denominator(self) -> Poly2:
        h = Poly2.constant(1)
        if self.pole_orders is None:
            return h
        for (_, fj), nj in zip(self.pairs, self.pole_orders):
            if nj > 1:
                h = h * fj ** (nj - 1)
        return h


@dataclass(frozen=True)
class ClosedFormReport:
    coprime: bool
    degree_condition_value: ExactComplex
    degree_condition_ok: Optional[bool]   # None when not requested
    simple_poles: bool
    foliation: AffineFoliation1Form


def closed_form_validate(L: LogarithmicForm,
                         on_projective: bool = False) -> ClosedFormReport:
    """Validate the canonical shape and return the induced foliation.

    Closedness is automatic for this shape.  Pairwise coprimality of the
    f_j is checked; in projective mode the residue-degree balance
    sum l_j deg f_j = 0 is enforced.
    """
    pairs = [(ExactComplex.coerce(l), Poly2.coerce(p)) for l, p in L.pairs]
    if not pairs:
        raise InvalidInputError("a logarithmic form needs at least one pole")
    for _, fj in pairs:
        if fj.is_constant():
            raise InvalidInputError("pole curves must be non-constant")
    coprime = True
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if not gcd2(pairs[i][1], pairs[j][1]).is_constant():
                coprime = False
    if not coprime:
        raise InvalidInputError("pole curves must be pairwise coprime")
    degval = EC_ZERO
    for lam, fj in pairs:
        degval = degval + lam * ExactComplex(int(fj.degree()))
    deg_ok = None
    if on_projective:
        deg_ok = degval.is_zero()
        if not deg_ok:
            raise InvalidInputError(
                f"projective residue-degree balance violated: {degval}")
    simple = L.exact_part is None and (
        L.pole_orders is None or all(n == 1 for n in L.pole_orders))

    # induced form: multiply by prod f_j (and h^2 for the exact part)
    A = Poly2()   # dx coefficient
    B = Poly2()   # dy coefficient
    for j, (lam, fj) in enumerate(pairs):
        others = Poly2.constant(1)
        for k, (_, fk) in enumerate(pairs):
            if k != j:
                others = others * fk
        A = A + (others * fj.partial_derivative("x")).scale(lam)
        B = B + (others * fj.partial_derivative("y")).scale(lam)
    if L.exact_part is not None:
        h = L.exact_part_denominator()
        g = L.exact_part
        prod_all = Poly2.constant(1)
        for _, fj in pairs:
            prod_all = prod_all * fj
        A = A * h * h + prod_all * (h * g.partial_derivative("x")
                                    - g * h.partial_derivative("x"))
        B = B * h * h + prod_all * (h * g.partial_derivative("y")
                                    - g * h.partial_derivative("y"))
    fol = make_foliation(B, -A)
    return ClosedFormReport(coprime, degval, deg_ok, simple, fol)
