"""Exception types shared across the workbench."""


class PlanevecError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(PlanevecError, ZeroDivisionError):
    """Division by the zero scalar."""


class ZeroDenominator(PlanevecError, ZeroDivisionError):
    """Ratio test against the zero scalar."""


class ModeViolation(PlanevecError, ValueError):
    """An operation would leave the declared exponent mode (negative x power,
    or a negative y power outside Laurent mode)."""


class ParseError(PlanevecError, ValueError):
    """Syntax error in an expression, with the offending position."""

    def __init__(self, message: str, position: int, source: str | None = None):
        self.position = position
        self.source = source
        if source is not None:
            message = f"{message} at position {position}: {source!r}"
        else:
            message = f"{message} at position {position}"
        super().__init__(message)


class NotConstantDivergence(PlanevecError, ValueError):
    """The vector field is not in Vec^c (its divergence is not constant)."""


class ZeroDerivation(PlanevecError, ValueError):
    """The zero vector field was passed where a nonzero one is required."""


class NotCertified(PlanevecError, ValueError):
    """A certificate does not match the derivation it is used with."""


class InvalidAutomorphism(PlanevecError, ValueError):
    """The supplied forward/inverse pair does not compose to the identity."""


class ZeroDelta(PlanevecError, ValueError):
    """The toral parameters (alpha, beta) were both zero."""


class RationalRatio(PlanevecError, ValueError):
    """alpha/beta is rational, so one-dimensionality of eigenspaces fails."""


class NotCoprime(PlanevecError, ValueError):
    """Centralizer weights (m, n) must be coprime and not both zero."""


class CentralizesDelta(PlanevecError, ValueError):
    """The field commutes with delta, so it has no nonzero spectral part."""


class NotLocallyFinite(PlanevecError, ValueError):
    """Local finiteness certification is a prerequisite and did not succeed."""


class FieldExtensionRequired(PlanevecError, ArithmeticError):
    """The computation needs eigen-data outside Q(sqrt2)."""


class DependentResult(PlanevecError, RuntimeError):
    """The two toral fields built from an opportune pair came out dependent;
    this contradicts the theory and is surfaced loudly."""


class BudgetZero(PlanevecError, ValueError):
    """A search budget must be positive."""


class InconclusiveBudget(PlanevecError, RuntimeError):
    """A certification budget was exhausted where a decision was required."""


class InternalConsistencyError(PlanevecError, RuntimeError):
    """An internal cross-check that must hold by theory failed."""
