"""Exception hierarchy shared by every module of the package."""


class HypertopeError(Exception):
    """Base class for all errors raised by this package."""


class DegreeMismatch(HypertopeError, ValueError):
    pass


class CapExceeded(HypertopeError):
    pass


class GeneratorNotInParent(HypertopeError, ValueError):
    pass


class ParentMismatch(HypertopeError, ValueError):
    pass


class InvalidIncidence(HypertopeError, ValueError):
    """Raised with the full list of violated incidence-system axioms."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid incidence system")


class NotAFlag(HypertopeError, ValueError):
    pass


class NotAGeometry(HypertopeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FlagBudgetExceeded(HypertopeError):
    pass


class ElementBudgetExceeded(HypertopeError):
    pass


class TypeOutOfRange(HypertopeError, ValueError):
    pass


class RDoesNotGenerate(HypertopeError, ValueError):
    pass


class NotAChamber(HypertopeError):
    pass


class NotInvolutions(HypertopeError, ValueError):
    pass


class OracleUnavailable(HypertopeError):
    pass


class InternalInconsistency(HypertopeError):
    """Two independent routes to the same fact disagreed; this is a bug."""


class ParseError(HypertopeError, ValueError):
    def __init__(self, errors):
        self.errors = list(errors) if not isinstance(errors, str) else [errors]
        super().__init__("; ".join(self.errors))
