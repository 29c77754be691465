"""Quadratic blow-up of plane foliation germs and the Seidenberg reduction
loop.

Chart 1 uses y = t x (coordinates (x, t), divisor {x = 0}); chart 2 uses
x = u y (coordinates (u, y), divisor {y = 0}).  The largest common divisor
power x^m (resp. y^m) is cleared from the transformed form; m equals the
multiplicity nu for a non-dicritical point and nu + 1 for a dicritical one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import (DepthExceededError, InternalInconsistencyError,
                     InvalidInputError)
from .foliation import AffineFoliation1Form, SingularPoint, make_foliation
from .localclass import SingularityReport, classify
from .polyalg import EC_ZERO, ExactComplex, Poly1, Poly2, gcd2
from .roots import poly1_roots_tagged

DEFAULT_MAX_DEPTH = 32


@dataclass(frozen=True)
class DivisorPoint:
    """A distinguished point on the exceptional divisor of one blow-up."""

    chart: int                      # 1: coordinates (x, t); 2: (u, y)
    point: SingularPoint


@dataclass(frozen=True)
class BlowupResult:
    chart1: AffineFoliation1Form    # coordinates (x, t), divisor {x = 0}
    chart2: AffineFoliation1Form    # coordinates (u, y), divisor {y = 0}
    multiplicity: int               # nu of the center
    cleared_power: int              # m
    dicritical: bool
    divisor_singularities: tuple    # DivisorPoint, corner deduplicated
    tangencies: tuple               # DivisorPoint where a dicritical divisor
                                    # is tangent to the foliation

    @property
    def m(self):
        return self.cleared_power


def _poly1_in(axis: str, p: Poly1) -> Poly2:
    if axis == "x":
        return Poly2({(i, 0): c for i, c in enumerate(p.coeffs) if not c.is_zero()})
    return Poly2({(0, i): c for i, c in enumerate(p.coeffs) if not c.is_zero()})


def _clear_axis_power(a: Poly2, b: Poly2, axis: int):
    """Largest k with w^k dividing both polynomials; returns (a/w^k, b/w^k, k)."""
    def min_exp(p):
        if p.is_zero():
            return math.inf
        return min(e[axis] for e in p.terms)

    k = min(min_exp(a), min_exp(b))
    if k is math.inf or k == 0:
        return a, b, 0
    k = int(k)

    def strip(p):
        return Poly2({(e[0] - (k if axis == 0 else 0),
                       e[1] - (k if axis == 1 else 0)): c
                      for e, c in p.terms.items()})

    return strip(a), strip(b), k


def blowup_at_origin(f: AffineFoliation1Form) -> BlowupResult:
    """Blow up the germ at the origin of its chart.

    The form P dy - Q dx pulls back under y = t x to
    [t P(x,tx) - Q(x,tx)] dx + x P(x,tx) dt, and under x = u y to
    [P(uy,y) - u Q(uy,y)] dy - y Q(uy,y) du; both are cleared of the
    divisor power x^m (resp. y^m).
    """
    P, Q = f.P, f.Q
    nu = int(min(P.order(), Q.order()))
    xv, yv = Poly2.variable("x"), Poly2.variable("y")

    # chart 1: (x, t) with y = t x; reuse variable slots (x -> x, y -> t)
    P1 = P.substitute(xv, yv * xv)        # P(x, tx)
    Q1 = Q.substitute(xv, yv * xv)
    A1 = yv * P1 - Q1                     # dx-coefficient
    B1 = xv * P1                          # dt-coefficient
    A1c, B1c, m1 = _clear_axis_power(A1, B1, axis=0)
    chart1 = AffineFoliation1Form(B1c, -A1c)

    # chart 2: (u, y) with x = u y (first variable u, second y)
    P2 = P.substitute(xv * yv, yv)        # P(uy, y)
    Q2 = Q.substitute(xv * yv, yv)
    A2 = -yv * Q2                         # du-coefficient
    B2 = P2 - xv * Q2                     # dy-coefficient
    A2c, B2c, m2 = _clear_axis_power(A2, B2, axis=1)
    chart2 = AffineFoliation1Form(B2c, -A2c)

    if m1 != m2:
        raise InternalInconsistencyError(
            f"chart clearing disagreed: {m1} vs {m2}")
    # dicritical criterion on the top homogeneous parts
    crit = (yv * P.homogeneous_part(nu).substitute(Poly2.constant(1), yv)
            - Q.homogeneous_part(nu).substitute(Poly2.constant(1), yv))
    dicritical = crit.is_zero()
    if m1 != nu + (1 if dicritical else 0):
        raise InternalInconsistencyError(
            f"cleared power {m1} does not match criterion (nu={nu}, "
            f"dicritical={dicritical})")
    for g in (chart1, chart2):
        if not gcd2(g.P, g.Q).is_constant():
            raise InternalInconsistencyError(
                "strict transform retained a common factor")

    divisor_sing = _divisor_points(chart1, chart2, kind="singular")
    tangent_pts = () if not dicritical else _divisor_points(
        chart1, chart2, kind="tangency")
    return BlowupResult(chart1, chart2, nu, m1, dicritical,
                        tuple(divisor_sing), tuple(tangent_pts))


def _divisor_points(chart1: AffineFoliation1Form,
                    chart2: AffineFoliation1Form, kind: str) -> list:
    """Points of interest on the divisor, corner-deduplicated: chart 1
    supplies all finite t, chart 2 only its origin (t = infinity)."""
    out = []
    p_r = chart1.P.restrict_x0()         # dt-component at x = 0, Poly1 in t
    q_r = chart1.Q.restrict_x0()
    if kind == "singular":
        targets = _common_roots_exactfirst(p_r, q_r)
    else:
        # tangency: x-component vanishes on the divisor, point not singular
        targets = [(z, ex) for z, ex in _poly_roots_tagged_safe(p_r)
                   if abs(q_r.eval_complex(z)) > 1e-9]
    for z, ex in targets:
        pt = _divisor_singular_point(chart1, z, ex, chart=1)
        out.append(pt)
    # chart-2 origin (the direction t = infinity)
    pu = chart2.P.eval_exact(0, 0)
    qu = chart2.Q.eval_exact(0, 0)
    if kind == "singular" and pu.is_zero() and qu.is_zero():
        out.append(_divisor_singular_point(chart2, 0j, ExactComplex(0), chart=2))
    if kind == "tangency":
        # divisor {y=0} in chart 2: tangency iff y-component Q vanishes at 0
        # while the point is regular
        if qu.is_zero() and not pu.is_zero():
            out.append(DivisorPoint(2, SingularPoint((0j, 0j), 0,
                                                     (ExactComplex(0),) * 2)))
    return out


def _poly_roots_tagged_safe(p: Poly1):
    if p.degree() < 1:
        return []
    return poly1_roots_tagged(p)


def _common_roots_exactfirst(a: Poly1, b: Poly1) -> list:
    """Common roots of two exact Poly1 via their exact gcd."""
    if a.is_zero() and b.is_zero():
        raise InternalInconsistencyError("divisor contained in singular set")
    if a.is_zero():
        g = b
    elif b.is_zero():
        g = a
    else:
        g = a.gcd(b)
    if g.degree() < 1:
        return []
    return poly1_roots_tagged(g)


def _divisor_singular_point(chart_fol, z, exact, chart):
    if exact is not None:
        if chart == 1:
            loc = (EC_ZERO, exact)
        else:
            loc = (exact, EC_ZERO)
        shifted = (chart_fol.shift(EC_ZERO, exact) if chart == 1
                   else chart_fol.shift(exact, EC_ZERO))
        nu = int(min(shifted.P.order(), shifted.Q.order()))
        zloc = tuple(c.to_complex() for c in loc)
        return DivisorPoint(chart, SingularPoint(zloc, nu, loc))
    from .foliation import _order_at_numeric
    zloc = (0j, z) if chart == 1 else (z, 0j)
    nu = _order_at_numeric(chart_fol, zloc)
    return DivisorPoint(chart, SingularPoint(zloc, nu, None))


# ----------------------------------------------------------------------
# Seidenberg reduction
# ----------------------------------------------------------------------

@dataclass
class DivisorComponent:
    index: int
    self_intersection: int
    invariant: bool
    tangencies: tuple = ()


@dataclass(frozen=True)
class TreeNode:
    """One blow-up event."""

    index: int
    parent: Optional[int]
    center_multiplicity: int
    dicritical: bool
    component: int                 # divisor component created here


@dataclass(frozen=True)
class ReductionLeaf:
    location_chain: tuple          # human-readable trail of charts/points
    report: SingularityReport


@dataclass
class ReductionTree:
    nodes: list = field(default_factory=list)
    components: list = field(default_factory=list)
    edges: set = field(default_factory=set)
    leaves: list = field(default_factory=list)
    depth: int = 0

    def to_json_dict(self) -> dict:
        return {
            "depth": self.depth,
            "blowups": [
                {"index": n.index, "parent": n.parent,
                 "center_multiplicity": n.center_multiplicity,
                 "dicritical": n.dicritical, "component": n.component}
                for n in self.nodes
            ],
            "components": [
                {"index": c.index, "self_intersection": c.self_intersection,
                 "invariant": c.invariant,
                 "tangencies": [str(t) for t in c.tangencies]}
                for c in self.components
            ],
            "edges": sorted([list(e) for e in self.edges]),
            "leaves": [
                {"chain": list(l.location_chain),
                 "report": l.report.to_json_dict()}
                for l in self.leaves
            ],
        }

    def to_dot(self) -> str:
        lines = ["graph reduction {", "  node [shape=box];"]
        for c in self.components:
            inv = "invariant" if c.invariant else "non-invariant"
            lines.append(
                f'  C{c.index} [label="C{c.index}\\nself-int {c.self_intersection}'
                f'\\n{inv}"];')
        for a, b in sorted(self.edges):
            lines.append(f"  C{a} -- C{b};")
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class _WorkItem:
    germ: AffineFoliation1Form      # singular point translated to the origin
    on_components: tuple            # ((component index, axis 0|1), ...)
    depth: int
    chain: tuple
    parent_node: Optional[int]


def seidenberg_reduce(f: AffineFoliation1Form, center=None,
                      max_depth: int = DEFAULT_MAX_DEPTH) -> ReductionTree:
    """Blow up every non-irreducible singularity, breadth-first (worst
    multiplicity first), until only irreducible ones remain.

    The center must be exact (pair of ExactComplex or a SingularPoint with
    exact coordinates); the loop is guaranteed finite in theory and bounded
    by max_depth in practice.
    """
    if max_depth < 1:
        raise InvalidInputError("max_depth must be at least 1")
    germ = _translate_center(f, center)
    if not (germ.P.eval_exact(0, 0).is_zero()
            and germ.Q.eval_exact(0, 0).is_zero()):
        raise InvalidInputError("the reduction center is not a singular point")
    tree = ReductionTree()
    queue = [_WorkItem(germ, (), 0, ("origin",), None)]
    while queue:
        queue.sort(key=lambda w: (-_germ_multiplicity(w.germ), w.chain))
        item = queue.pop(0)
        report = classify(item.germ)
        if report.irreducible:
            tree.leaves.append(ReductionLeaf(item.chain, report))
            continue
        if item.depth >= max_depth:
            raise DepthExceededError(max_depth)
        result = blowup_at_origin(item.germ)
        comp_idx = len(tree.components)
        node_idx = len(tree.nodes)
        tree.nodes.append(TreeNode(node_idx, item.parent_node,
                                   result.multiplicity, result.dicritical,
                                   comp_idx))
        tree.components.append(DivisorComponent(
            comp_idx, -1, not result.dicritical,
            tuple(t.point.location for t in result.tangencies)))
        tree.depth = max(tree.depth, item.depth + 1)
        # bookkeeping on the components through the center
        olds = dict(item.on_components)
        for cid in olds:
            tree.components[cid].self_intersection -= 1
            tree.edges.add(tuple(sorted((cid, comp_idx))))
        if len(olds) == 2:
            pair = tuple(sorted(olds))
            tree.edges.discard(pair)
        for dp in result.divisor_singularities:
            chart_f = result.chart1 if dp.chart == 1 else result.chart2
            if dp.point.exact is None:
                raise InvalidInputError(
                    "reduction needs exact divisor singularities; "
                    f"got {dp.point.location}")
            a, b = dp.point.exact
            shifted = chart_f.shift(a, b)
            on = [(comp_idx, 0 if dp.chart == 1 else 1)]
            # strict transforms of old components through the center:
            # a local axis {x=0} reappears in chart 2 as {u=0}, a local axis
            # {y=0} reappears in chart 1 as {t=0}
            for cid, axis in olds.items():
                if dp.chart == 1 and axis == 1 and b.is_zero():
                    on.append((cid, 1))
                elif dp.chart == 2 and axis == 0:
                    on.append((cid, 0))
            queue.append(_WorkItem(
                shifted, tuple(on), item.depth + 1,
                item.chain + (f"chart{dp.chart}@{dp.point.location}",),
                node_idx))
    return tree


def _translate_center(f, center):
    if center is None:
        return f
    if isinstance(center, SingularPoint):
        if center.exact is None:
            raise InvalidInputError("reduction center must be exact")
        a, b = center.exact
        return f.shift(a, b)
    a, b = center
    return f.shift(ExactComplex.coerce(a), ExactComplex.coerce(b))


def _germ_multiplicity(g: AffineFoliation1Form) -> int:
    return int(min(g.P.order(), g.Q.order()))


def dicritical_germ(f: AffineFoliation1Form, center=None,
                    max_depth: int = DEFAULT_MAX_DEPTH) -> bool:
    """True iff some component of the reduction divisor is non-invariant."""
    tree = seidenberg_reduce(f, center, max_depth)
    return any(not c.invariant for c in tree.components)
