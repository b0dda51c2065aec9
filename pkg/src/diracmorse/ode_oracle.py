"""Shooting oracle for the radial equations.

Integrates phi''(x) = Q(x) phi(x) directly (x = r/r0 - 1) with the Numerov
scheme, either with the Pekeris-replaced centrifugal term or with the exact
kappa(kappa -/+ 1)/r^2 term. Q is built from the physical potentials, not
from the NU parameters, so agreement with the closed form is a genuine check.
"""

from dataclasses import dataclass
import math

import numpy as np
from numba import njit

from .errors import DomainError, NoEigenvalue, NonDecayingBoundary
from .morse_model import PDM, PSEUDOSPIN, mass_value, morse_value, quantum_numbers_from_kappa

ACTION = 40.0  # WKB decay exponent required beyond each turning point
EPS_R = 1e-6  # start of the exact-centrifugal grid, in units of r0


@dataclass(frozen=True)
class GridSpec:
    """Uniform x-grid; ``None`` ends are chosen from the WKB decay at the reference energy."""

    x_min: float | None = None
    x_max: float | None = None
    steps: int = 20000

    def __post_init__(self):
        if self.steps < 100:
            raise DomainError("steps must be >= 100")
        if self.x_min is not None and self.x_max is not None and not self.x_min < self.x_max:
            raise DomainError("x_min must be < x_max")


@dataclass(frozen=True)
class ShootResult:
    E: float
    nodes: int
    mismatch: float
    converged: bool


def effective_ode_rhs(problem, E, x, approximated=True):
    """Q(x) in phi'' = Q phi, derivatives taken in x.

    Q = r0^2 [centrifugal + mass/potential product], with the products

    * PDM:        (m(x) + E - V(x)) (m0 - E)     (m + Sigma = m0 by the mass identity)
    * pseudospin: (m0 + E - V(x)) (m0 - E + A)
    * spin:       (m0 + E - A) (m0 - E + V(x))

    where V is the Morse potential playing Delta (PDM, pseudospin) or Sigma (spin).
    """
    x = np.asarray(x, dtype=float)
    pot = problem.potential
    pk = problem.pekeris
    if approximated:
        cent = pk(x, pot.beta)
    else:
        if np.any(x <= -1.0):
            raise DomainError("r <= 0 in the exact centrifugal form")
        cent = pk.strength / (1.0 + x) ** 2
    V = morse_value(pot, x)
    m0 = problem.mass.m0
    kind = problem.mode.kind
    if kind == PDM:
        prod = (mass_value(problem.mass, pot.beta, x) + E - V) * (m0 - E)
    elif kind == PSEUDOSPIN:
        prod = (m0 + E - V) * (m0 - E + problem.mode.A)
    else:
        prod = (m0 + E - problem.mode.A) * (m0 - E + V)
    out = pot.r0**2 * (cent + prod)
    return out[()] if out.ndim == 0 else out


@njit(cache=True)
def _numerov(q, h, y0, y1, reverse):
    n = q.shape[0]
    y = np.zeros(n)
    c = h * h / 12.0
    if reverse:
        y[n - 1] = y0
        y[n - 2] = y1
        for i in range(n - 2, 0, -1):
            y[i - 1] = ((2.0 + 10.0 * c * q[i]) * y[i] - (1.0 - c * q[i + 1]) * y[i + 1]) / (1.0 - c * q[i - 1])
            if abs(y[i - 1]) > 1e150:
                for k in range(i - 1, n):
                    y[k] *= 1e-150
    else:
        y[0] = y0
        y[1] = y1
        for i in range(1, n - 1):
            y[i + 1] = ((2.0 + 10.0 * c * q[i]) * y[i] - (1.0 - c * q[i - 1]) * y[i - 1]) / (1.0 - c * q[i + 1])
            if abs(y[i + 1]) > 1e150:
                for k in range(0, i + 2):
                    y[k] *= 1e-150
    return y


class _Grid:
    def __init__(self, x, match, series_start, problem, approximated):
        self.x = x
        self.h = x[1] - x[0]
        self.match = match
        self.series_start = series_start
        if series_start:
            qn = quantum_numbers_from_kappa(problem.kappa)
            self.power = (qn.ell if problem.mode.component == "upper" else qn.ell_tilde) + 1
        self.problem = problem
        self.approximated = approximated


def _asymptotic_q(problem, E, approximated):
    x = 1e8
    return float(effective_ode_rhs(problem, E, x, approximated))


def _turning_window(problem, E, approximated):
    pot = problem.potential
    lo = -1.0 + EPS_R if not approximated else -1.0 - 6.0 / pot.beta
    hi = 40.0 / pot.beta + 2.0
    xs = np.linspace(lo, hi, 200001)
    with np.errstate(over="ignore"):
        q = effective_ode_rhs(problem, E, xs, approximated)
    neg = np.nonzero(q < 0)[0]
    return xs, q, neg


def build_grid(problem, E, approximated=True, spec=GridSpec()):
    """Uniform grid covering the classically allowed region plus decaying tails."""
    q_inf = _asymptotic_q(problem, E, approximated)
    if not q_inf > 0:
        raise NonDecayingBoundary(f"Q -> {q_inf!r} <= 0 as r -> inf at E={E!r}")
    xs, q, neg = _turning_window(problem, E, approximated)
    if neg.size == 0:
        raise NoEigenvalue(f"no classically allowed region at E={E!r}")
    il, ir = int(neg[0]), int(neg[-1])
    dx = xs[1] - xs[0]
    root_q = np.sqrt(np.clip(q, 0.0, None))
    series_start = False
    if spec.x_min is not None:
        x_min = spec.x_min
    else:
        action = np.cumsum(root_q[il::-1]) * dx
        k = np.searchsorted(action, ACTION)
        if k < action.size:
            x_min = xs[il - k]
        else:
            x_min = xs[0]
            series_start = not approximated
            if approximated:
                raise NonDecayingBoundary("left tail does not decay inside the scan window")
    if spec.x_max is not None:
        x_max = spec.x_max
    else:
        action = np.cumsum(root_q[ir:]) * dx
        k = np.searchsorted(action, ACTION)
        if k < action.size:
            x_max = xs[ir + k]
        else:
            x_max = xs[-1] + (ACTION - action[-1]) / math.sqrt(q_inf)
    if not approximated and x_min <= -1.0:
        raise NonDecayingBoundary("exact centrifugal grid must start at r > 0")
    x = np.linspace(x_min, x_max, spec.steps + 1)
    match = int(np.clip(np.searchsorted(x, xs[ir]), 2, spec.steps - 2))
    return _Grid(x, match, series_start, problem, approximated)


def _solutions(grid, E):
    q = effective_ode_rhs(grid.problem, E, grid.x, grid.approximated)
    m = grid.match
    if grid.series_start:
        r = grid.problem.potential.r0 * (1.0 + grid.x[:2])
        left = _numerov(q[: m + 2], grid.h, r[0] ** grid.power, r[1] ** grid.power, False)
    else:
        left = _numerov(q[: m + 2], grid.h, 0.0, 1e-30, False)
    right = _numerov(q[m - 1 :], grid.h, 0.0, 1e-30, True)
    left = left / np.max(np.abs(left))
    right = right / np.max(np.abs(right))
    return left, right


def _wronskian(grid, E):
    left, right = _solutions(grid, E)
    m = grid.match
    # right[1] sits at index m, right[2] at m+1
    return left[m] * right[2] - left[m + 1] * right[1]


def _stitched(grid, E):
    left, right = _solutions(grid, E)
    m = grid.match
    scale = left[m] / right[1] if right[1] != 0 else 1.0
    return np.concatenate([left[: m + 1], right[2:] * scale])


def _nodes(psi):
    v = psi[np.abs(psi) > 1e-14 * np.max(np.abs(psi))]
    return int(np.count_nonzero(np.signbit(v[:-1]) != np.signbit(v[1:])))


def _mismatch(grid, E):
    left, right = _solutions(grid, E)
    m = grid.match
    if left[m] == 0 or right[1] == 0:
        return math.inf
    return (left[m + 1] / left[m] - right[2] / right[1]) / grid.h


def _bisect(f, lo, hi, flo, iters=200):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _reference_grid(problem, bracket, approximated, spec):
    lo, hi = bracket
    for t in (0.5, 0.75, 0.25, 0.9, 0.1, 0.99, 0.01):
        try:
            return build_grid(problem, lo + t * (hi - lo), approximated, spec)
        except (NoEigenvalue, NonDecayingBoundary):
            continue
    raise NoEigenvalue(f"no usable reference grid in [{lo}, {hi}]")


def _candidates(problem, n, bracket, grid, scan):
    lo, hi = bracket
    Es = np.linspace(lo, hi, scan)
    ws = []
    for E in Es:
        try:
            ws.append(_wronskian(grid, float(E)))
        except (FloatingPointError, ZeroDivisionError):
            ws.append(math.nan)
    found = []
    for i in range(scan - 1):
        a, b = ws[i], ws[i + 1]
        if not (math.isfinite(a) and math.isfinite(b)) or a == 0 or (a > 0) == (b > 0):
            continue
        f = lambda E: _wronskian(grid, E)  # noqa: E731
        E = _bisect(f, float(Es[i]), float(Es[i + 1]), a)
        found.append((E, _nodes(_stitched(grid, E)), (float(Es[i]), float(Es[i + 1]))))
    return found


def shoot_eigenvalue(problem, n, bracket, grid=GridSpec(), approximated=True, scan=400, tol=1e-9):
    """Eigenvalue in ``bracket`` whose solution has exactly ``n`` interior nodes.

    Pass 1 scans the matching Wronskian on a grid built at a reference energy
    inside the bracket; pass 2 rebuilds the grid at the located eigenvalue and
    bisects again.

    Raises
    ------
    NoEigenvalue
        No eigenvalue with ``n`` nodes inside ``bracket``.
    NonDecayingBoundary
        The equation is not classically forbidden at a grid end.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise NoEigenvalue("empty bracket")
    g1 = _reference_grid(problem, (lo, hi), approximated, grid)
    hits = [c for c in _candidates(problem, n, (lo, hi), g1, scan) if c[1] == n]
    if not hits:
        raise NoEigenvalue(f"no eigenvalue with {n} nodes in [{lo}, {hi}]")
    E1, _, (blo, bhi) = hits[0]
    try:
        g2 = build_grid(problem, E1, approximated, grid)
    except (NoEigenvalue, NonDecayingBoundary):
        g2 = g1
    f = lambda E: _wronskian(g2, E)  # noqa: E731
    flo, fhi = f(blo), f(bhi)
    if flo != 0 and fhi != 0 and (flo > 0) != (fhi > 0):
        E = _bisect(f, blo, bhi, flo)
    else:
        E = E1
        g2 = g1
    nodes = _nodes(_stitched(g2, E))
    mismatch = _mismatch(g2, E)
    return ShootResult(E=E, nodes=nodes, mismatch=mismatch, converged=nodes == n and abs(mismatch) <= tol)


def pekeris_error_report(problem, state, bracket=None, grid=GridSpec(), exact_is_approximated=False):
    """Relative shift |E_approx - E_exact| / |E_exact| caused by the Pekeris replacement.

    ``exact_is_approximated`` replaces the exact-centrifugal shoot by a second
    approximated one on the same grid (a control that must give 0).
    """
    if problem.pekeris.strength == 0:
        return 0.0
    if bracket is None:
        bracket = _bracket_for(problem, state)
    approx = shoot_eigenvalue(problem, state.n, bracket, grid, approximated=True)
    exact = shoot_eigenvalue(problem, state.n, bracket, grid, approximated=exact_is_approximated)
    return abs(approx.E - exact.E) / abs(exact.E)


def _bracket_for(problem, state):
    from .eigensolver import admissible_domain

    for lo, hi in admissible_domain(problem):
        if lo <= state.E <= hi:
            return (lo, hi)
    raise NoEigenvalue(f"E={state.E!r} is outside the admissible domain")
