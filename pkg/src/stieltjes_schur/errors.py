"""Exception types shared by the library and mapped to CLI exit codes."""

from __future__ import annotations


class SchurError(ValueError):
    """Base class for domain errors raised by the moment-problem routines.

    ``key`` is set when the error comes from one diagonal of a
    multidimensional problem.
    """

    key: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        payload = {"error": type(self).__name__, "message": str(self)}
        payload.update(self.details())
        if self.key is not None:
            payload["key"] = list(self.key)
        return payload

    def details(self) -> dict:
        return {}


class NoNormalIndex(SchurError):
    """The sequence has no nonzero Hankel determinant within the available data."""


class Truncated(SchurError):
    """Not enough moments to carry out the requested step."""

    def __init__(self, message: str, *, level: int | None = None,
                 required: int | None = None, available: int | None = None):
        super().__init__(message)
        self.level = level
        self.required = required
        self.available = available

    def details(self) -> dict:
        out = {}
        for name in ("level", "required", "available"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


class SingularStep(SchurError):
    """A pivot vanished at the given level of the continued-fraction recursion."""

    def __init__(self, message: str, *, level: int):
        super().__init__(message)
        self.level = level

    def details(self) -> dict:
        return {"level": self.level}


class FormulaInapplicable(SchurError):
    """A closed-form determinant formula cannot be evaluated on this input."""


class SeriesDivisionError(SchurError, ZeroDivisionError):
    """Division by a series that is zero on all of its trusted coefficients."""


class SingularMatrix(SchurError, ZeroDivisionError):
    """A triangular system with a zero diagonal entry was asked to be inverted."""
