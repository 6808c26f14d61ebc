"""Exception types raised across the package."""


class LineSchemeError(Exception):
    """Base class for every error raised by this package."""


class ParseError(LineSchemeError, ValueError):
    pass


# scalars
class PoleError(LineSchemeError, ZeroDivisionError):
    pass


class NonGenericError(LineSchemeError, ValueError):
    """alpha * (1 - alpha^2) vanishes at the requested value."""


class ZeroDivisorError(LineSchemeError, ZeroDivisionError):
    """Inverse requested for a tower element that is not a unit."""


class NameCollision(LineSchemeError, ValueError):
    pass


# multipoly
class VarSetMismatch(LineSchemeError, ValueError):
    pass


class MissingAssignment(LineSchemeError, KeyError):
    pass


class NotBihomogeneous(LineSchemeError, ValueError):
    pass


# polymat
class NotSquare(LineSchemeError, ValueError):
    pass


class SizeError(LineSchemeError, ValueError):
    pass


class IndeterminateRank(LineSchemeError):
    """Elimination hit a column with nonzero entries but no unit pivot."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


# ncalg
class NotQuadratic(LineSchemeError, ValueError):
    pass


class RankDeficient(LineSchemeError, ValueError):
    pass


# pointscheme
class VerificationFailure(LineSchemeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonUniqueImage(LineSchemeError):
    pass


# linescheme
class NotInInvariantRing(LineSchemeError):
    pass


# geometry
class RankError(LineSchemeError, ValueError):
    pass


class NotOnPluecker(LineSchemeError, ValueError):
    pass


class NoUnitPivot(LineSchemeError):
    pass


class MembershipFailure(LineSchemeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SolveFailure(LineSchemeError):
    pass


class UnknownPoint(LineSchemeError, KeyError):
    pass


# groebner
class ResourceLimit(LineSchemeError):
    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress or {}


class NotHomogeneous(LineSchemeError, ValueError):
    pass
