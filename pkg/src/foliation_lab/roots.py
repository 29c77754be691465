"""Complex univariate root finding by Aberth-Ehrlich simultaneous iteration."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Optional

from .errors import InvalidInputError, RootFindingError
from .polyalg import ExactComplex, Poly1

MAX_ITERATIONS = 400


def univariate_roots(p, tol: float = 1e-10) -> list:
    """All complex roots of p with multiplicity (clusters for multiple roots).

    Accepts a Poly1 or a list of complex coefficients in ascending order.
    Every returned z satisfies |p(z)| <= tol * max|coeff| after polishing.
    """
    if isinstance(p, Poly1):
        coeffs = p.to_complex_coeffs()
    else:
        coeffs = [complex(c) for c in p]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        raise InvalidInputError("root finding needs degree >= 1")

    # peel off exact zero roots so clusters at the origin stay exact
    nzeros = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        nzeros += 1
    roots = [0j] * nzeros
    if len(coeffs) >= 2:
        roots.extend(_aberth(coeffs, tol))
    return roots


def _aberth(coeffs: list, tol: float) -> list:
    n = len(coeffs) - 1
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    scale = max(abs(c) for c in coeffs)

    if n == 1:
        return [-monic[0]]

    deriv = [monic[k] * k for k in range(1, n + 1)]

    def peval(cs, z):
        acc = 0j
        for c in reversed(cs):
            acc = acc * z + c
        return acc

    radius = 1.0 + max(abs(c) for c in monic[:-1])
    zs = [radius * cmath.exp(2j * math.pi * (k + 0.37) / n + 0.5j)
          for k in range(n)]

    for _ in range(MAX_ITERATIONS):
        converged = True
        for k in range(n):
            z = zs[k]
            pv = peval(monic, z)
            if pv == 0:
                continue
            dv = peval(deriv, z)
            newton = pv / dv if dv != 0 else pv
            s = 0j
            for j in range(n):
                if j != k:
                    diff = z - zs[j]
                    if diff == 0:
                        diff = 1e-30
                    s += 1.0 / diff
            denom = 1.0 - newton * s
            step = newton / denom if denom != 0 else newton
            zs[k] = z - step
            if abs(step) > 1e-14 * (1.0 + abs(z)):
                converged = False
        if converged:
            break

    # polish simple roots with plain Newton; harmless on clusters
    for k in range(n):
        for _ in range(3):
            pv = peval(monic, zs[k])
            dv = peval(deriv, zs[k])
            if dv == 0 or pv == 0:
                break
            zs[k] -= pv / dv

    bad = [z for z in zs if abs(peval(coeffs, z)) > tol * scale]
    if bad:
        raise RootFindingError(
            f"{len(bad)} root(s) failed the residual bound {tol:g}")
    return zs


def snap_root_exact(z: complex, p: Poly1, max_denominator: int = 10**6,
                    tol: float = 1e-9) -> Optional[ExactComplex]:
    """Return the exact Gaussian-rational root near z, verified by exact
    evaluation, or None."""
    cand = ExactComplex.from_complex_snapped(z, max_denominator, tol)
    if cand is not None and p.eval_exact(cand).is_zero():
        return cand
    return None


def poly1_roots_tagged(p: Poly1, tol: float = 1e-10):
    """Roots of an exact Poly1 as (complex value, exact value or None) pairs."""
    if p.degree() < 1:
        return []
    out = []
    for z in univariate_roots(p, tol):
        exact = snap_root_exact(z, p)
        if exact is not None:
            out.append((exact.to_complex(), exact))
        else:
            out.append((z, None))
    return out


def limit_denominator_fraction(x: float, max_den: int = 10**6) -> Fraction:
    return Fraction(x).limit_denominator(max_den)
