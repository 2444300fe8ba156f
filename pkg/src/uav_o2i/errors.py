"""Exception hierarchy shared by all modules."""


class UavO2iError(Exception):
    """Base class for every error raised by this package."""


class DomainError(UavO2iError, ValueError):
    """An argument lies outside the domain where the model is defined."""


class GeometryInfeasibleError(DomainError):
    """The requested placement cannot be realised for this building."""


class SingularityError(DomainError):
    """A derivative is undefined (UAV vertically aligned with a user)."""


class PreconditionError(DomainError):
    """A structural precondition does not hold, e.g. an asymmetric layout."""


class SolverError(UavO2iError, RuntimeError):
    """A root finder could not bracket or converge."""


class ScenarioLoadError(UavO2iError):
    """A scenario file could not be parsed or failed validation."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class PowerRangeError(UavO2iError, OverflowError):
    """A linear power quantity overflows double precision."""
