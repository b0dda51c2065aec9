"""Real energies solving the Morse-Dirac eigenvalue conditions.

Two residual forms are available:

``"bound"`` (default)
    xi2/sqrt(xi1) - 2 sqrt(xi3) - (2n+1). Its roots are the energies whose
    Laguerre solution s^w1 e^{-w2 s} L_n^{2 w1}(2 w2 s) decays at both ends,
    i.e. the true eigenvalues of the Pekeris-approximated radial equation.
``"reference"``
    The conditions in the closed physical-parameter form common in the
    literature, which carry +2 sqrt(xi3) instead. Kept for comparison with
    tabulated numbers; its roots do not correspond to normalizable solutions.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from . import nu_core
from .errors import DomainError, EmptyDomain, NegativeDiscriminant, NoRoot
from .morse_model import PDM, PSEUDOSPIN, SPIN, xi_parameters

log = logging.getLogger(__name__)

FORMS = ("bound", "reference")
BRANCHES = ("auto", "negative", "positive", "any")


@dataclass(frozen=True)
class SolverConfig:
    scan_points: int = 2000
    abs_tol: float = 1e-12
    max_bisections: int = 200
    energy_window: tuple | None = None
    form: str = "bound"
    branch: str = "auto"

    def __post_init__(self):
        if self.scan_points < 2 or self.max_bisections < 1:
            raise ValueError("scan_points >= 2 and max_bisections >= 1 required")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.energy_window is not None:
            lo, hi = self.energy_window
            if lo > hi:
                raise ValueError("energy_window needs lo <= hi")
        if self.form not in FORMS:
            raise ValueError(f"form must be one of {FORMS}")
        if self.branch not in BRANCHES:
            raise ValueError(f"branch must be one of {BRANCHES}")


@dataclass(frozen=True)
class Root:
    E: float
    residual: float
    bracket: tuple


@dataclass
class RootResult:
    roots: list
    domain: list
    branch: str
    tol: float = 1e-12
    unconverged: list = field(default_factory=list)


def mode_branch(problem):
    """Sign of the physically retained energies: negative for PDM and pseudospin."""
    return "positive" if problem.mode.kind == SPIN else "negative"


def default_window(problem):
    w = problem.mass.m0 + 2.0 * problem.potential.D + abs(problem.mode.A)
    return (-w, w)


def _constraints(problem, E):
    xi = xi_parameters(problem, E)
    return xi.xi1, xi.xi3


def _admissible(problem, E):
    x1, x3 = _constraints(problem, E)
    return x1 > 0 and x3 >= 0


def _bisect_sign(g, lo, hi, iters=200):
    glo = g(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        gm = g(mid)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _quadratic_roots(g, lo, hi):
    # xi1(E), xi3(E) are polynomials of degree <= 2 in every mode; the fit is
    # only trusted when it reproduces a fourth sample.
    if hi - lo <= 0:
        return []
    xs = np.array([lo, 0.5 * (lo + hi), hi])
    ys = np.array([g(x) for x in xs])
    coef = np.polyfit(xs, ys, 2)
    probe = lo + 0.3137 * (hi - lo)
    scale = max(1.0, float(np.max(np.abs(ys))))
    if abs(np.polyval(coef, probe) - g(probe)) > 1e-9 * scale:
        return []
    roots = np.roots(coef) if np.any(coef) else np.array([])
    return [float(r.real) for r in roots if abs(r.imag) < 1e-12 and lo < r.real < hi]


def admissible_domain(problem, n=0, config=SolverConfig()):
    """Maximal energy intervals where xi1 > 0 and xi3 >= 0.

    Constraint crossings are located by sign-change scanning (refined by
    bisection), supplemented by exact roots of the constraint quadratics so
    that intervals narrower than the scan spacing are not lost.

    Raises
    ------
    EmptyDomain
    """
    lo, hi = config.energy_window if config.energy_window is not None else default_window(problem)
    if not hi > lo:
        raise EmptyDomain(f"energy window [{lo}, {hi}] has zero width")
    grid = np.linspace(lo, hi, config.scan_points)
    cuts = {lo, hi}
    for idx in (0, 1):
        def g(E, idx=idx):
            return _constraints(problem, E)[idx]

        vals = np.array([g(E) for E in grid])
        pos = vals > 0
        for i in np.nonzero(pos[:-1] != pos[1:])[0]:
            cuts.add(_bisect_sign(g, grid[i], grid[i + 1]))
        cuts.update(_quadratic_roots(g, lo, hi))
    cuts = sorted(cuts)
    intervals = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b <= a:
            continue
        if _admissible(problem, 0.5 * (a + b)):
            if intervals and intervals[-1][1] == a:
                intervals[-1] = (intervals[-1][0], b)
            else:
                intervals.append((a, b))
    if not intervals:
        raise EmptyDomain(f"no admissible energies in [{lo}, {hi}]")
    return intervals


def reference_residual(problem, E, n):
    """Literature physical-parameter form of the eigenvalue condition (LHS - RHS)."""
    pot = problem.potential
    d, D, a = pot.delta, pot.D, pot.a
    m0 = problem.mass.m0
    pk = problem.pekeris
    g = pk.strength
    kind = problem.mode.kind
    if kind == PDM:
        m1, m2 = problem.mass.m1, problem.mass.m2
        root3 = g * pk.c1 + m0 * m0 - E * E
        root1 = g * pk.c3 + (m0 - E) * (m2 - D)
        _check_roots(root1, root3)
        return (
            2.0 * d * math.sqrt(root3)
            - d * (g * pk.c2 + (m0 - E) * (m1 + 2.0 * D)) / math.sqrt(root1)
            - (2 * n + 1)
        )
    if kind == PSEUDOSPIN:
        M = m0 + problem.mode.A - E
        root3 = g * pk.c1 + M * (m0 + E)
        root1 = g * pk.c3 - D * M
        _check_roots(root1, root3)
        return (
            2.0 * math.sqrt(root3)
            - (g * pk.c2 + 2.0 * D * M) / math.sqrt(root1)
            - a * (2 * n + 1)
        )
    Mp = m0 + E - problem.mode.A
    root3 = g * pk.c1 + Mp * (m0 - E)
    root1 = g * pk.c3 + D * Mp
    _check_roots(root1, root3)
    return (
        d * (2.0 * D * Mp - g * pk.c2) / math.sqrt(root1)
        + 2.0 * d * math.sqrt(root3)
        - (2 * n + 1)
    )


def _check_roots(root1, root3):
    if not root1 > 0 or root3 < 0:
        raise DomainError("energy outside the admissible domain")


def xi_form_residual(problem, E, n, form="bound"):
    """Eigenvalue condition routed through the NU parameter algebra.

    Returns xi2/sqrt(xi1) -/+ 2 sqrt(xi3) - (2n+1), obtained by dividing the
    NU residual by -sqrt(alpha9) = -sqrt(xi1).
    """
    xi = xi_parameters(problem, E)
    if not xi.xi1 > 0:
        raise DomainError("xi1 <= 0")
    inp = nu_core.NuInput.morse(xi.xi1, xi.xi2, xi.xi3)
    try:
        dp = nu_core.derive_parameters(inp)
    except NegativeDiscriminant as exc:
        raise DomainError(str(exc)) from exc
    if form == "bound":
        r = nu_core.eigen_residual_decaying(dp, inp, n)
    else:
        r = nu_core.eigen_residual_degenerate(dp, inp, n)
    return -r / math.sqrt(dp.alpha9)


def residual(problem, E, n, form="bound"):
    """LHS - RHS of the mode's eigenvalue condition at energy ``E``.

    ``form="reference"`` evaluates the literature expressions verbatim (the
    pseudospin one carries an overall factor ``a``); ``form="bound"`` returns
    xi2/sqrt(xi1) - 2 sqrt(xi3) - (2n+1).

    Raises
    ------
    DomainError
        Outside the admissible domain.
    """
    if form == "reference":
        return reference_residual(problem, E, n)
    if form == "bound":
        return xi_form_residual(problem, E, n, "bound")
    raise ValueError(f"form must be one of {FORMS}")


def _in_branch(E, branch):
    if branch == "negative":
        return E < 0
    if branch == "positive":
        return E > 0
    return True


def _clip_to_branch(intervals, branch):
    if branch == "any":
        return list(intervals)
    out = []
    for lo, hi in intervals:
        if branch == "negative":
            lo, hi = lo, min(hi, 0.0)
        else:
            lo, hi = max(lo, 0.0), hi
        if hi > lo:
            out.append((lo, hi))
    return out


def _refine(f, lo, hi, flo, config):
    """Bisection down to adjacent floats; returns the point with the smallest |f|."""
    best_E, best_r = None, math.inf
    for _ in range(config.max_bisections):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if abs(fm) < best_r:
            best_E, best_r = mid, abs(fm)
        if fm == 0.0:
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    for E in (lo, hi):
        r = abs(f(E))
        if r < best_r:
            best_E, best_r = E, r
    return best_E


def solve_energy(problem, n, config=SolverConfig()):
    """All roots of the eigenvalue condition for radial degree ``n``.

    Each admissible interval (clipped to the mode's energy branch) is sampled
    at ``config.scan_points`` points; every sign change is bisected.

    Raises
    ------
    EmptyDomain
        No admissible energy in the branch.
    NoRoot
        Admissible energies exist but the residual never changes sign.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    branch = mode_branch(problem) if config.branch == "auto" else config.branch
    domain = _clip_to_branch(admissible_domain(problem, n, config), branch)
    if not domain:
        raise EmptyDomain(f"admissible domain has no {branch} energies")

    def f(E):
        return residual(problem, E, n, config.form)

    roots, unconverged = [], []
    for lo, hi in domain:
        Es = np.linspace(lo, hi, config.scan_points)
        vals = []
        for E in Es:
            try:
                v = f(float(E))
            except DomainError:
                v = math.nan
            vals.append(v if math.isfinite(v) else math.nan)
        vals = np.array(vals)
        for i in range(len(Es) - 1):
            a, b = vals[i], vals[i + 1]
            if math.isnan(a) or math.isnan(b):
                continue
            if a == 0.0:
                E = float(Es[i])
                if _in_branch(E, branch):
                    roots.append(Root(E, 0.0, (E, E)))
                continue
            if (a > 0) == (b > 0) or b == 0.0:
                continue
            E = _refine(f, float(Es[i]), float(Es[i + 1]), a, config)
            if not _in_branch(E, branch):
                continue
            root = Root(E, f(E), (float(Es[i]), float(Es[i + 1])))
            if abs(root.residual) <= config.abs_tol:
                roots.append(root)
            else:
                log.warning("root near E=%r limited to |residual|=%g", E, abs(root.residual))
                unconverged.append(root)
    if not roots and not unconverged:
        raise NoRoot(f"no sign change of the residual for n={n}")
    roots.sort(key=lambda r: r.E)
    return RootResult(roots, domain, branch, config.abs_tol, unconverged)


def solve_batch(jobs, config=SolverConfig(), max_workers=None):
    """Solve ``[(problem, n), ...]`` concurrently; results keep input order.

    Failed solves are returned as the raised exception instance.
    """

    def one(job):
        problem, n = job
        try:
            return solve_energy(problem, n, config)
        except (EmptyDomain, NoRoot) as exc:
            return exc

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(one, jobs))
