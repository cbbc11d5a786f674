"""Exception hierarchy shared by the toolkit."""


class PensionToolkitError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PensionToolkitError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InfeasibleTargetError(DomainError):
    """A present value cannot be reached by any finite annuity term."""


class IntegrityError(PensionToolkitError):
    """Bundled reference data failed its checksum or sanity checks."""


class MissingReferenceError(PensionToolkitError, KeyError):
    """A record refers to a UF that the life table does not contain."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class SchemaError(PensionToolkitError, ValueError):
    """An input file does not follow its documented column layout."""

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class SingularDesignError(PensionToolkitError, ValueError):
    """A regression design matrix is not of full column rank."""


class DegenerateError(PensionToolkitError, ValueError):
    """Input has no variation where the statistic needs some."""


class PreconditionError(PensionToolkitError, ValueError):
    """Too few observations (or similar) for the requested procedure."""
