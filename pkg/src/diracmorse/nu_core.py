"""Parametric Nikiforov-Uvarov machinery.

The equation handled here is

    Psi'' + (alpha1 - alpha2 s) / (s (1 - alpha3 s)) Psi'
          + (-xi1 s^2 + xi2 s - xi3) / (s (1 - alpha3 s))^2 Psi = 0

Six input numbers fix the derived set alpha4 ... alpha13, from which the
eigenvalue condition and the polynomial solutions follow without any
symbolic work.

Two eigenvalue conditions are exposed for alpha3 = 0:

* :func:`eigen_residual_degenerate` is the alpha3 -> 0 condition exactly as it
  is usually written for this method (it carries ``-2 sqrt(alpha8 alpha9)``).
  It belongs to the k-root whose solution grows like ``s**(-sqrt(alpha8))``
  near s = 0.
* :func:`eigen_residual_decaying` is the alpha3 -> 0 limit of the general
  condition (``+2 sqrt(alpha8 alpha9)``); it is the condition satisfied by
  the eigenfunction ``s**alpha12 exp(alpha13 s) L_n(...)`` that
  :func:`eigenfunction_degenerate` returns.
"""

from dataclasses import dataclass, fields
import math

import numpy as np

from .errors import DomainError, NegativeDiscriminant, NonDecaying, WrongBranch
from .special_functions import jacobi, laguerre


@dataclass(frozen=True)
class NuInput:
    alpha1: float
    alpha2: float
    alpha3: float
    xi1: float
    xi2: float
    xi3: float

    def __post_init__(self):
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise DomainError(f"{f.name} must be finite")

    @classmethod
    def morse(cls, xi1, xi2, xi3):
        """Input set for the exponential (Morse-type) reduction: alpha = (1, 0, 0)."""
        return cls(1.0, 0.0, 0.0, xi1, xi2, xi3)


@dataclass(frozen=True)
class NuDerived:
    alpha4: float
    alpha5: float
    alpha6: float
    alpha7: float
    alpha8: float
    alpha9: float
    alpha10: float
    alpha11: float
    alpha12: float
    alpha13: float


def derive_parameters(inp):
    """Compute alpha4 ... alpha13 from the six NU inputs.

    Raises
    ------
    NegativeDiscriminant
        If alpha8 or alpha9 is negative, i.e. the point lies outside the
        bound-state domain.
    """
    a1, a2, a3 = inp.alpha1, inp.alpha2, inp.alpha3
    a4 = 0.5 * (1.0 - a1)
    a5 = 0.5 * (a2 - 2.0 * a3)
    a6 = a5 * a5 + inp.xi1
    a7 = 2.0 * a4 * a5 - inp.xi2
    a8 = a4 * a4 + inp.xi3
    if a8 < 0:
        raise NegativeDiscriminant("alpha8", a8)
    a9 = a3 * a7 + a3 * a3 * a8 + a6
    if a9 < 0:
        raise NegativeDiscriminant("alpha9", a9)
    r8 = math.sqrt(a8)
    r9 = math.sqrt(a9)
    return NuDerived(
        alpha4=a4,
        alpha5=a5,
        alpha6=a6,
        alpha7=a7,
        alpha8=a8,
        alpha9=a9,
        alpha10=a1 + 2.0 * a4 + 2.0 * r8,
        alpha11=a2 - 2.0 * a5 + 2.0 * (r9 + a3 * r8),
        alpha12=a4 + r8,
        alpha13=a5 - (r9 + a3 * r8),
    )


def k_roots(d, inp):
    """Both roots of k that make the radicand in pi(s) a perfect square."""
    base = -(d.alpha7 + 2.0 * inp.alpha3 * d.alpha8)
    half = 2.0 * math.sqrt(d.alpha8 * d.alpha9)
    return base + half, base - half


def eigen_residual_general(d, inp, n):
    """Left-hand side of the NU eigenvalue condition for alpha3 != 0."""
    if inp.alpha3 == 0:
        raise WrongBranch("alpha3 == 0: use eigen_residual_degenerate")
    a2, a3 = inp.alpha2, inp.alpha3
    r8 = math.sqrt(d.alpha8)
    r9 = math.sqrt(d.alpha9)
    return (
        a2 * n
        - (2 * n + 1) * d.alpha5
        + (2 * n + 1) * (r9 + a3 * r8)
        + n * (n - 1) * a3
        + d.alpha7
        + 2.0 * a3 * d.alpha8
        + 2.0 * math.sqrt(d.alpha8 * d.alpha9)
    )


def eigen_residual_degenerate(d, inp, n):
    """Left-hand side of the alpha3 = 0 spectrum condition in its usual closed form.

    The full expression is

        alpha2 n - 2 alpha5 n + (2n+1)(sqrt(alpha9) - alpha3 sqrt(alpha8))
        + n(n-1) alpha3 + alpha7 + 2 alpha3 alpha8 - 2 sqrt(alpha8 alpha9) + alpha5

    and only its alpha3 = 0 reduction is used. For the Morse inputs
    (1, 0, 0) a zero of it is equivalent to 2n+1 = xi2/sqrt(xi1) + 2 sqrt(xi3).
    """
    if inp.alpha3 != 0:
        raise WrongBranch("alpha3 != 0: use eigen_residual_general")
    r9 = math.sqrt(d.alpha9)
    return (
        inp.alpha2 * n
        - 2.0 * d.alpha5 * n
        + (2 * n + 1) * r9
        + d.alpha7
        - 2.0 * math.sqrt(d.alpha8 * d.alpha9)
        + d.alpha5
    )


def eigen_residual_decaying(d, inp, n):
    """alpha3 = 0 condition matching the decaying eigenfunction.

    Limit alpha3 -> 0 of :func:`eigen_residual_general`. For Morse inputs a
    zero is equivalent to 2n+1 = xi2/sqrt(xi1) - 2 sqrt(xi3).
    """
    if inp.alpha3 != 0:
        raise WrongBranch("alpha3 != 0: use eigen_residual_general")
    r9 = math.sqrt(d.alpha9)
    return (
        inp.alpha2 * n
        - (2 * n + 1) * d.alpha5
        + (2 * n + 1) * r9
        + d.alpha7
        + 2.0 * math.sqrt(d.alpha8 * d.alpha9)
    )


def eigenfunction_general(d, inp, n, s):
    """Unnormalized Jacobi-type eigenfunction, valid for 0 < s and 1 - alpha3 s > 0."""
    a3 = inp.alpha3
    if a3 == 0:
        raise WrongBranch("alpha3 == 0: use eigenfunction_degenerate")
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0) or np.any(1.0 - a3 * s <= 0):
        raise DomainError("s must lie in (0, 1/alpha3)")
    pa = d.alpha10 - 1.0
    pb = d.alpha11 / a3 - d.alpha10 - 1.0
    out = (
        s**d.alpha12
        * (1.0 - a3 * s) ** (-d.alpha12 - d.alpha13 / a3)
        * jacobi(n, pa, pb, 1.0 - 2.0 * a3 * s)
    )
    return out[()] if out.ndim == 0 else out


def eigenfunction_degenerate(d, n, s, inp=None):
    """Unnormalized Laguerre-type eigenfunction s^a12 exp(a13 s) L_n^(a10-1)(a11 s).

    ``inp`` is optional and only used to guard against the alpha3 != 0 branch.
    """
    if inp is not None and inp.alpha3 != 0:
        raise WrongBranch("alpha3 != 0: use eigenfunction_general")
    if d.alpha13 >= 0:
        raise NonDecaying(f"alpha13 = {d.alpha13!r} >= 0")
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("s must be nonnegative")
    out = (
        np.power(s, d.alpha12)
        * np.exp(d.alpha13 * s)
        * laguerre(n, d.alpha10 - 1.0, d.alpha11 * s)
    )
    return out[()] if out.ndim == 0 else out
