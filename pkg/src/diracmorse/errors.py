"""Exception hierarchy shared by every solver stage."""


class DiracMorseError(Exception):
    """Base class for all package errors."""


class DomainError(DiracMorseError, ValueError):
    """Argument outside the domain where a formula is defined."""


class NegativeDiscriminant(DomainError):
    """A square-root argument of the NU parameter algebra is negative.

    Attributes
    ----------
    which : str
        Name of the offending parameter (``"alpha8"`` or ``"alpha9"``).
    value : float
        The negative value encountered.
    """

    def __init__(self, which, value):
        self.which = which
        self.value = value
        super().__init__(f"{which} = {value!r} < 0; no real square root")


class WrongBranch(DiracMorseError):
    """Operation called for the wrong alpha3 branch (zero vs nonzero)."""


class NonDecaying(DiracMorseError):
    """Eigenfunction does not decay at large s (alpha13 >= 0)."""


class EmptyDomain(DiracMorseError):
    """No energy interval admits real square roots."""


class NoRoot(DiracMorseError):
    """Admissible domain is nonempty but the residual never changes sign."""


class InvalidState(DiracMorseError):
    """Bound-state parameters violate their invariants."""


class DivergentNorm(DiracMorseError):
    """Normalization integral failed to converge."""


class NonFinite(DiracMorseError, ArithmeticError):
    """Integrand produced a non-finite value at a quadrature node."""


class NoEigenvalue(DiracMorseError):
    """Shooting found no eigenvalue with the requested node count."""


class NonDecayingBoundary(DiracMorseError):
    """The effective ODE is not classically forbidden at a grid end."""


class ConfigError(DiracMorseError, ValueError):
    """Malformed run configuration."""
