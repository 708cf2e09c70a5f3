"""Exception types raised by kaehlerlab."""

from typing import Any, Dict, List, Optional


class KaehlerLabError(Exception):
    """Base class for all kaehlerlab errors."""


class ExprError(KaehlerLabError, ValueError):
    """Problem with an immersion component expression."""

    def __init__(self, message: str, offset: Optional[int] = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class ExprSyntaxError(ExprError):
    """Malformed expression source."""


class ExprDomainError(ExprError):
    """Evaluation left the domain of an operator (log of non-positive, division by zero, ...)."""


class UnboundVariableError(ExprError):
    """Expression refers to a variable missing from the environment."""

    def __init__(self, name: str, offset: Optional[int] = None):
        self.name = name
        super().__init__(f"Unbound variable '{name}'", offset)


class RankDeficiencyError(KaehlerLabError, ValueError):
    """A set of vectors is not linearly independent."""

    def __init__(self, index: int, message: Optional[str] = None):
        self.index = index
        super().__init__(message or f"Vector {index} is linearly dependent on the preceding ones")


class NotOrthonormalError(KaehlerLabError, ValueError):
    """Input frame is not orthonormal within tolerance."""


class NotPositiveDefiniteError(KaehlerLabError, ValueError):
    """Matrix failed symmetry or positive-definiteness checks."""


class DomainError(KaehlerLabError, ValueError):
    """Point lies outside a chart domain."""


class PreconditionError(KaehlerLabError, ValueError):
    """An operation's precondition failed; the measured residual is attached."""

    def __init__(self, message: str, residual: Optional[float] = None):
        self.residual = residual
        if residual is not None:
            message = f"{message} (measured {residual:.3e})"
        super().__init__(message)


class NotCRError(KaehlerLabError, ValueError):
    """Tangent space does not split into J-invariant and totally real parts."""

    def __init__(self, spectrum: List[float]):
        self.spectrum = list(spectrum)
        shown = ", ".join(f"{value:.6g}" for value in self.spectrum)
        super().__init__(f"Tangent space is not CR; spectrum of TᵀT = [{shown}]")


class ConfigError(KaehlerLabError, ValueError):
    """Run configuration could not be loaded or validated."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)


class UnknownCheckError(ConfigError):
    """A requested check name is not in the catalog."""

    def __init__(self, name: str, known: Optional[List[str]] = None, line: Optional[int] = None):
        self.name = name
        hint = f"; known checks: {', '.join(known)}" if known else ""
        super().__init__(f"Unknown check '{name}'{hint}", line)


def describe(exc: BaseException) -> Dict[str, Any]:
    """Flatten an exception into a JSON-friendly record."""
    record: Dict[str, Any] = {"type": type(exc).__name__, "message": str(exc)}
    for attr in ("offset", "index", "residual", "spectrum", "line", "name"):
        value = getattr(exc, attr, None)
        if value is not None:
            record[attr] = value
    return record
