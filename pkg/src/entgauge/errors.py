"""Exception hierarchy shared by all entgauge modules."""


class EntgaugeError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgument(EntgaugeError, ValueError):
    """An argument has the wrong shape, dimension or value."""


class UnsupportedArity(InvalidArgument):
    """The operation is only defined for a different number of parties."""


class NotAntisymmetric(InvalidArgument):
    """A state expected to lie in the antisymmetric sector does not."""


class NotFermionicSupport(InvalidArgument):
    """A density functional is not supported on the antisymmetric sector."""


class StateFileError(EntgaugeError):
    """Base class for state-file problems; carries a line/field diagnostic."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class ParseError(StateFileError):
    pass


class VersionMismatch(StateFileError):
    pass


class LengthMismatch(StateFileError):
    pass


class TraceInvalid(StateFileError):
    pass


class InvariantViolation(StateFileError):
    pass
