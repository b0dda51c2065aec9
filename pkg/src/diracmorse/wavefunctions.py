"""Radial spinor components built from a converged energy.

Each mode yields one component of the form

    norm * s^w1 * exp(-w2 s) * L_n^{2 w1}(2 w2 s),    s = exp(-a (r - r0))

(the lower component for PDM and pseudospin, the upper one for spin).
Normalization runs over the physical range r in (0, inf) and uses that single
component only.
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from .errors import DivergentNorm, DomainError, InvalidState
from .morse_model import xi_parameters
from .special_functions import QuadratureSpec, integrate, laguerre


@dataclass(frozen=True)
class BoundState:
    E: float
    n: int
    problem: object
    w1: float
    w2: float
    norm: float = 1.0
    tail_mass: float | None = None

    @property
    def kappa(self):
        return self.problem.kappa

    @property
    def mode(self):
        return self.problem.mode

    @property
    def component(self):
        return self.problem.mode.component


@dataclass(frozen=True)
class RadialSamples:
    grid: np.ndarray
    values: np.ndarray
    component: str


def shape_parameters(problem, E):
    """(w1, w2) = (sqrt(xi3), sqrt(xi1)) at energy ``E``."""
    xi = xi_parameters(problem, E)
    if xi.xi1 <= 0 or xi.xi3 < 0:
        raise InvalidState(f"no decaying solution at E={E!r}: xi1={xi.xi1!r}, xi3={xi.xi3!r}")
    return math.sqrt(xi.xi3), math.sqrt(xi.xi1)


def bound_state(problem, E, n):
    w1, w2 = shape_parameters(problem, E)
    return BoundState(E=float(E), n=int(n), problem=problem, w1=w1, w2=w2)


def component_value(state, s):
    """Component at s > 0 (array or scalar); s = 0 from underflow gives the limit."""
    if not state.w2 > 0:
        raise InvalidState("w2 must be positive")
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("s must be positive")
    w1, w2 = state.w1, state.w2
    with np.errstate(under="ignore"):
        out = state.norm * s**w1 * np.exp(-w2 * s) * laguerre(state.n, 2.0 * w1, 2.0 * w2 * s)
    return out[()] if out.ndim == 0 else out


def value_at_r(state, r):
    pot = state.problem.potential
    return component_value(state, pot.s_of_r(r))


def sample_radial(state, r_lo, r_hi, count):
    if not 0 < r_lo < r_hi:
        raise DomainError("need 0 < r_lo < r_hi")
    if count < 2:
        raise DomainError("count must be >= 2")
    grid = np.linspace(r_lo, r_hi, int(count))
    return RadialSamples(grid, value_at_r(state, grid), state.component)


def norm_integral(state, quad=None):
    """(integral, error estimate) of |component(r)|^2 over r in (0, inf)."""
    quad = quad or QuadratureSpec(domain=(0.0, math.inf))
    pot = state.problem.potential

    def f(r):
        # r = 0 maps to s = e^beta: finite, so the endpoint is regular
        with np.errstate(under="ignore"):
            return value_at_r(state, np.maximum(r, 0.0)) ** 2

    try:
        return integrate(f, quad)
    except DomainError as exc:
        raise DivergentNorm(str(exc)) from exc


def normalize(state, quad=None, rel_tol=1e-10, max_panels=1 << 18):
    """Return ``state`` with ``norm`` set so the single-component integral is 1.

    Panels are doubled until the quadrature error estimate drops below
    ``rel_tol`` of the integral. The Laguerre solution also extends to r < 0
    (s > e^beta); the fraction of probability there is stored as
    ``tail_mass`` for diagnostics.
    """
    unit = replace(state, norm=1.0)
    quad = quad or QuadratureSpec(domain=(0.0, math.inf))
    while True:
        total, err = norm_integral(unit, quad)
        if not (math.isfinite(total) and total > 0):
            raise DivergentNorm(f"norm integral {total!r} is not positive and finite")
        if err <= rel_tol * total:
            break
        if 2 * quad.panels > max_panels:
            raise DivergentNorm(f"norm integral {total!r} +- {err!r} did not converge")
        quad = replace(quad, panels=2 * quad.panels)
    norm = 1.0 / math.sqrt(total)
    tail = _negative_r_mass(unit) / total
    return replace(state, norm=norm, tail_mass=tail)


def _negative_r_mass(state):
    # integral of |phi|^2 dr over r < 0, i.e. s in (e^beta, inf) with dr = ds / (a s)
    pot = state.problem.potential
    s0 = math.exp(pot.beta)

    def f(u):
        s = s0 + u
        with np.errstate(under="ignore"):
            return component_value(state, s) ** 2 / (pot.a * s)

    try:
        val, _ = integrate(f, QuadratureSpec(domain=(0.0, math.inf), panels=1024))
    except DomainError:
        return math.nan
    return val


def count_nodes(values):
    """Number of sign changes, ignoring exact zeros."""
    v = np.asarray(values, dtype=float)
    v = v[v != 0.0]
    return int(np.count_nonzero(np.signbit(v[:-1]) != np.signbit(v[1:])))


def node_count(state, points=20001, r_max=None):
    """Sign changes of the component on r in (0, r_max]."""
    pot = state.problem.potential
    r_max = r_max or pot.r0 + 60.0 / (pot.a * min(state.w1, state.w2) + 1e-300)
    r = np.linspace(r_max / points, r_max, points)
    return count_nodes(value_at_r(state, r))
