"""Holonomy of a straight separatrix by numerical integration.

For a foliation with invariant axis {y = 0} and the loop x(theta) =
x0 e^{i theta}, a transversal point y0 is transported along its leaf by

    dy/dtheta = i x(theta) Q(x, y) / P(x, y),

and the first-return map h(y0) = y(2 pi) is the holonomy of the axis.  The
multiplier h'(0) integrates the first variational equation along the axis
leaf itself.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationError, InvalidInputError
from .foliation import AffineFoliation1Form
from .polyalg import Poly2

DEFAULT_TOL = 1e-10
ESCAPE_FACTOR = 0.5


@dataclass(frozen=True)
class HolonomySetup:
    foliation: AffineFoliation1Form
    x0: complex = 1.0 + 0j
    tol: float = DEFAULT_TOL
    max_steps: int = 100_000

    def __post_init__(self):
        f = self.foliation
        if complex(self.x0) == 0:
            raise InvalidInputError("the loop base point must avoid the origin")
        if f.Q.try_divide(Poly2.variable("y")) is None and not f.Q.is_zero():
            raise InvalidInputError("the axis {y=0} is not invariant")
        if abs(f.P.eval_complex(complex(self.x0), 0j)) < 1e-13:
            raise InvalidInputError("P(x0, 0) = 0: transversal is singular")


def _rhs(setup: HolonomySetup):
    P, Q = setup.foliation.P, setup.foliation.Q
    x0 = complex(setup.x0)

    def fun(theta, state):
        y = complex(state[0], state[1])
        xv = x0 * cmath.exp(1j * theta)
        pv = P.eval_complex(xv, y)
        if pv == 0:
            raise IntegrationError("P vanished along the path")
        val = 1j * xv * Q.eval_complex(xv, y) / pv
        return [val.real, val.imag]

    return fun


def holonomy_map(setup: HolonomySetup, y0: complex,
                 span=(0.0, 2.0 * math.pi)) -> complex:
    """Transport y0 along the circular loop; returns y(span end).

    Escaping leaves (|y| beyond half the loop radius) abort with
    IntegrationError rather than returning garbage.
    """
    y0 = complex(y0)
    if y0 == 0:
        return 0j
    bound = ESCAPE_FACTOR * abs(complex(setup.x0))
    if abs(y0) >= bound:
        raise IntegrationError("initial point outside the safety bound")

    def escape(theta, state):
        return math.hypot(state[0], state[1]) - bound
    escape.terminal = True
    escape.direction = 1

    sol = solve_ivp(_rhs(setup), span, [y0.real, y0.imag], method="RK45",
                    rtol=setup.tol, atol=setup.tol * max(abs(y0), 1e-12),
                    events=[escape], max_step=0.2)
    if not sol.success:
        raise IntegrationError(f"integrator failed: {sol.message}")
    if sol.status == 1:
        raise IntegrationError("leaf escaped the transversal neighborhood")
    return complex(sol.y[0][-1], sol.y[1][-1])


def holonomy_trace(setup: HolonomySetup, y0: complex, samples: int = 256):
    """(theta, y) samples along the transport, for CSV export."""
    y0 = complex(y0)
    thetas = np.linspace(0.0, 2.0 * math.pi, samples)
    sol = solve_ivp(_rhs(setup), (0.0, 2.0 * math.pi),
                    [y0.real, y0.imag], method="RK45", rtol=setup.tol,
                    atol=setup.tol * max(abs(y0), 1e-12), t_eval=thetas,
                    max_step=0.2)
    if not sol.success:
        raise IntegrationError(f"integrator failed: {sol.message}")
    return [(float(t), complex(a, b))
            for t, a, b in zip(sol.t, sol.y[0], sol.y[1])]


def holonomy_multiplier(setup: HolonomySetup) -> complex:
    """h'(0) = exp of the integral of the variational equation along the
    axis leaf: d(log delta)/dtheta = i x d/dy (Q/P) at (x(theta), 0)."""
    P, Q = setup.foliation.P, setup.foliation.Q
    Qy = Q.partial_derivative("y")
    x0 = complex(setup.x0)

    def fun(theta, state):
        xv = x0 * cmath.exp(1j * theta)
        pv = P.eval_complex(xv, 0j)
        if pv == 0:
            raise IntegrationError("P vanished on the axis leaf")
        val = 1j * xv * Qy.eval_complex(xv, 0j) / pv
        return [val.real, val.imag]

    sol = solve_ivp(fun, (0.0, 2.0 * math.pi), [0.0, 0.0], method="RK45",
                    rtol=setup.tol, atol=setup.tol, max_step=0.2)
    if not sol.success:
        raise IntegrationError(f"integrator failed: {sol.message}")
    return cmath.exp(complex(sol.y[0][-1], sol.y[1][-1]))


def default_sample_circle(radius: float = 1e-2, count: int = 8) -> list:
    return [radius * cmath.exp(2j * math.pi * k / count) for k in range(count)]


def finite_order_test(h, n_max: int = 12, tol: float = 1e-8,
                      samples=None):
    """Smallest n <= n_max with h^n = identity on the samples (relative
    tolerance tol), or None.  A numeric diagnostic, not a proof.

    h is any callable on complex numbers; orbits leaving twice the sample
    radius raise IntegrationError.
    """
    if samples is None:
        samples = default_sample_circle()
    samples = [complex(s) for s in samples]
    bound = 4.0 * max(abs(s) for s in samples)
    current = list(samples)
    for n in range(1, n_max + 1):
        nxt = []
        for z in current:
            w = h(z)
            if abs(w) > bound:
                raise IntegrationError(f"orbit escaped after {n} iterations")
            nxt.append(w)
        current = nxt
        if all(abs(w - z0) <= tol * abs(z0)
               for w, z0 in zip(current, samples)):
            return n
    return None


def holonomy_order(setup: HolonomySetup, n_max: int = 12,
                   tol: float = 1e-8, samples=None):
    """finite_order_test applied to the integrated holonomy map."""
    return finite_order_test(lambda z: holonomy_map(setup, z),
                             n_max=n_max, tol=tol, samples=samples)
