"""Exception types shared across the library."""


class GsecLabError(Exception):
    """Base class for all library errors."""


class CapExceeded(GsecLabError):
    """An enumeration was requested on a host above the configured cap."""

    def __init__(self, n, cap):
        super().__init__(f"host has {n} vertices, enumeration cap is {cap}")
        self.n = n
        self.cap = cap


class InvalidDemand(GsecLabError):
    """A demand vector violates |d_v| <= Q."""


class BadParams(GsecLabError):
    """Structurally invalid parameters (negative budget, Q <= 0, ...)."""


class OutOfRange(GsecLabError):
    """A set function exceeds |S| somewhere, so no RHS table exists for it."""

    def __init__(self, mask, value):
        super().__init__(f"g(S) = {value} > |S| at subset mask {mask:#b}")
        self.mask = mask
        self.value = value


class EmptyFamily(GsecLabError):
    """An operation that minimizes over family members got an empty family."""


class PreconditionFailed(GsecLabError):
    """A hypothesis of the invoked characterization does not hold."""


class InternalMismatch(GsecLabError):
    """Two routes that must agree (theorem vs enumeration) disagreed.

    This always indicates an implementation bug and is never swallowed.
    """


class MalformedX(GsecLabError):
    """An integer vector cannot be decoded into depot-anchored cycles."""


class Infeasible(GsecLabError):
    """The instance admits no feasible solution."""


class ParseError(GsecLabError):
    """Bad input file; message carries the offending field."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
