"""Generalized Morse potential, Pekeris centrifugal replacement and the
mapping of each symmetry mode onto Nikiforov-Uvarov inputs.

Coordinates: x = r/r0 - 1 and s = exp(-beta x) with beta = a r0. All three
modes reduce, after the Pekeris replacement, to

    s^2 phi'' + s phi' + (-xi3 + xi2 s - xi1 s^2) phi = 0

with energy-dependent (xi1, xi2, xi3) returned by :func:`xi_parameters`.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError

PDM = "pdm"
PSEUDOSPIN = "pseudospin"
SPIN = "spin"
MODES = (PDM, PSEUDOSPIN, SPIN)


@dataclass(frozen=True)
class MorsePotential:
    """D e^{-2 beta x} - 2 D e^{-beta x}; ``a`` is the width (inverse length)."""

    D: float
    r0: float
    a: float

    def __post_init__(self):
        for name in ("D", "r0", "a"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and positive, got {v!r}")

    @property
    def beta(self):
        return self.a * self.r0

    @property
    def delta(self):
        return 1.0 / self.a

    def x_of_r(self, r):
        return np.asarray(r, dtype=float) / self.r0 - 1.0

    def s_of_r(self, r):
        return np.exp(-self.a * (np.asarray(r, dtype=float) - self.r0))


@dataclass(frozen=True)
class MassFunction:
    m0: float
    m1: float = 0.0
    m2: float = 0.0

    @classmethod
    def position_dependent(cls, m0, pot):
        """Mass profile fixed by dm/dr = -dSigma/dr: m1 = 2D, m2 = -D."""
        return cls(m0, 2.0 * pot.D, -pot.D)

    @classmethod
    def constant(cls, m0):
        return cls(m0, 0.0, 0.0)


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    kappa: int
    ell: int
    ell_tilde: int
    j: float

    @property
    def aligned(self):
        """True for kappa < 0, i.e. j = ell + 1/2."""
        return self.kappa < 0


@dataclass(frozen=True)
class SymmetryMode:
    kind: str
    A: float = 0.0

    def __post_init__(self):
        if self.kind not in MODES:
            raise DomainError(f"unknown mode {self.kind!r}")
        if not math.isfinite(self.A):
            raise DomainError("A must be finite")
        if self.kind == PDM and self.A != 0.0:
            raise DomainError("the PDM mode carries no constant A")

    @classmethod
    def pdm(cls):
        return cls(PDM)

    @classmethod
    def pseudospin(cls, A):
        return cls(PSEUDOSPIN, float(A))

    @classmethod
    def spin(cls, A):
        return cls(SPIN, float(A))

    @property
    def component(self):
        """Spinor component the mode's equation governs."""
        return "upper" if self.kind == SPIN else "lower"


@dataclass(frozen=True)
class PekerisCoefficients:
    c1: float
    c2: float
    c3: float
    strength: float

    def __call__(self, x, beta):
        s = np.exp(-beta * np.asarray(x, dtype=float))
        return self.strength * (self.c1 + self.c2 * s + self.c3 * s * s)


@dataclass(frozen=True)
class XiTriple:
    xi1: float
    xi2: float
    xi3: float


@dataclass(frozen=True)
class MorseProblem:
    potential: MorsePotential
    mass: MassFunction
    mode: SymmetryMode
    kappa: int
    pekeris: PekerisCoefficients = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.kappa) != self.kappa or self.kappa == 0:
            raise DomainError("kappa must be a nonzero integer")
        if self.mode.kind == PDM:
            want = MassFunction.position_dependent(self.mass.m0, self.potential)
        else:
            want = MassFunction.constant(self.mass.m0)
        if self.mass != want:
            raise DomainError(
                f"mass function {self.mass} inconsistent with mode {self.mode.kind}"
            )
        strength = centrifugal_strength(self.kappa, self.potential.r0, self.mode.component)
        c = pekeris_coefficients(self.potential.beta)
        object.__setattr__(self, "pekeris", PekerisCoefficients(*c, strength))

    @classmethod
    def build(cls, mode, D, r0, a, m0, kappa, A=0.0):
        """Assemble a problem from bare numbers; ``mode`` is a mode name."""
        pot = MorsePotential(float(D), float(r0), float(a))
        if mode == PDM:
            return cls(pot, MassFunction.position_dependent(float(m0), pot), SymmetryMode.pdm(), int(kappa))
        sym = SymmetryMode(mode, float(A))
        return cls(pot, MassFunction.constant(float(m0)), sym, int(kappa))


def pekeris_coefficients(beta):
    """Coefficients (c1, c2, c3) of c1 + c2 e^{-beta x} + c3 e^{-2 beta x} ~ 1/(1+x)^2."""
    if not beta > 0:
        raise DomainError("beta must be positive")
    ib = 1.0 / beta
    ib2 = ib * ib
    return 1.0 - 3.0 * ib + 3.0 * ib2, 4.0 * ib - 6.0 * ib2, -ib + 3.0 * ib2


def centrifugal_strength(kappa, r0, component):
    """kappa(kappa-1)/r0^2 for the lower component, kappa(kappa+1)/r0^2 for the upper."""
    if kappa == 0:
        raise DomainError("kappa must be nonzero")
    if not r0 > 0:
        raise DomainError("r0 must be positive")
    if component == "lower":
        return kappa * (kappa - 1) / r0**2
    if component == "upper":
        return kappa * (kappa + 1) / r0**2
    raise DomainError(f"component must be 'lower' or 'upper', got {component!r}")


def morse_value(pot, x):
    e = np.exp(-pot.beta * np.asarray(x, dtype=float))
    out = pot.D * e * e - 2.0 * pot.D * e
    return out[()] if out.ndim == 0 else out


def mass_value(m, beta, x):
    e = np.exp(-beta * np.asarray(x, dtype=float))
    out = m.m0 + m.m1 * e + m.m2 * e * e
    return out[()] if out.ndim == 0 else out


def xi_parameters(problem, E):
    """Energy-dependent NU inputs (xi1, xi2, xi3), delta^2 included."""
    pot, kind = problem.potential, problem.mode.kind
    d2 = pot.delta**2
    D = pot.D
    m0 = problem.mass.m0
    pk = problem.pekeris
    g = pk.strength
    if kind == PDM:
        m1, m2 = problem.mass.m1, problem.mass.m2
        xi1 = d2 * (g * pk.c3 + (m0 - E) * (m2 - D))
        xi2 = -d2 * (g * pk.c2 + (m0 - E) * (m1 + 2.0 * D))
        xi3 = d2 * (g * pk.c1 + m0 * m0 - E * E)
    elif kind == PSEUDOSPIN:
        M = m0 + problem.mode.A - E
        xi1 = d2 * (g * pk.c3 - M * D)
        xi2 = -d2 * (2.0 * M * D + g * pk.c2)
        xi3 = d2 * (g * pk.c1 + M * (m0 + E))
    else:
        Mp = m0 + E - problem.mode.A
        xi1 = d2 * (g * pk.c3 + D * Mp)
        xi2 = d2 * (2.0 * D * Mp - g * pk.c2)
        xi3 = d2 * (g * pk.c1 + Mp * (m0 - E))
    return XiTriple(xi1, xi2, xi3)


def _orbital_from_product(p):
    # nonnegative integer l with l(l+1) = p
    l = int(round((-1.0 + math.sqrt(1.0 + 4.0 * p)) / 2.0))
    if l * (l + 1) != p:
        raise DomainError(f"{p} is not of the form l(l+1)")
    return l


def quantum_numbers_from_kappa(kappa, n=0):
    if int(kappa) != kappa or kappa == 0:
        raise DomainError("kappa must be a nonzero integer")
    kappa = int(kappa)
    ell = _orbital_from_product(kappa * (kappa + 1))
    ell_tilde = _orbital_from_product(kappa * (kappa - 1))
    return QuantumNumbers(n=int(n), kappa=kappa, ell=ell, ell_tilde=ell_tilde, j=abs(kappa) - 0.5)


def kappa_from_j(j, aligned):
    """Inverse of the classification: kappa = -(j+1/2) if aligned else +(j+1/2)."""
    k = int(round(j + 0.5))
    return -k if aligned else k


_ORBITAL_LETTERS = "spdfghiklmnoqrtuv"


def state_label(n, ell, j):
    """Spectroscopic label such as ``1s1/2``."""
    letter = _ORBITAL_LETTERS[ell] if ell < len(_ORBITAL_LETTERS) else f"[l={ell}]"
    return f"{n}{letter}{int(round(2 * j))}/2"
