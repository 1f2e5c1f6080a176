"""Exception hierarchy shared by every module."""


class PosetError(Exception):
    """Base class for all errors raised by porel."""


class AntisymmetryViolation(PosetError):
    pass


class NotTransitivelyClosed(PosetError):
    pass


class ForeignElement(PosetError):
    pass


class OverlappingCarriers(PosetError):
    pass


class CarrierMismatch(PosetError):
    pass


class LimitExceeded(PosetError):
    pass


class NotMonotone(PosetError):
    pass


class NotInFamily(PosetError):
    """The relation does not satisfy the precondition of a map.

    ``witness`` carries a short human-readable reason (for example the
    offending non-convex triple).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PartitionViolation(PosetError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(PosetError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
