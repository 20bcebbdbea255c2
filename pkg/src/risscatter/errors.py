"""Exception and warning classes shared by all modules."""


class RisError(Exception):
    """Base class for errors raised by risscatter."""


class DomainError(RisError, ValueError):
    """An argument lies outside the domain of the operation."""


class ContractError(RisError, ValueError):
    """A precondition on an argument was violated (e.g. a non-unit normal)."""


class BackIlluminationError(RisError):
    """The incident wave reaches the panel from behind (k_i . n > 0)."""


class WrongHalfSpaceError(RisError):
    """An observation point lies behind the panel plane."""


class FeasibilityError(RisError):
    """The array-engine tile pitch violates the hard grating-lobe bound."""


class BudgetError(RisError):
    """A power budget violates the balance identity in strict mode."""


class ScenarioError(RisError):
    """A scenario file failed to parse or validate.

    ``field`` names the offending key (dotted path) when known; ``line`` and
    ``column`` are 1-based positions for parse errors.
    """

    def __init__(self, message, field=None, line=None, column=None):
        super().__init__(message)
        self.field = field
        self.line = line
        self.column = column

    def __str__(self):
        msg = super().__str__()
        if self.line is not None:
            msg = f"{msg} (line {self.line}, column {self.column})"
        elif self.field is not None and self.field not in msg:
            msg = f"{self.field}: {msg}"
        return msg


class ReactiveNearFieldWarning(UserWarning):
    """Observation point closer than 3 wavelengths to the panel surface."""


class BudgetWarning(UserWarning):
    """Lenient power budget with rho + sum(m_n) above unity."""


class FeasibilityWarning(UserWarning):
    """Array-engine tile pitch outside a pattern-specific feasibility bound."""
