"""Exception hierarchy shared across the package."""


class HullswarmError(Exception):
    """Base class for all library-specific failures."""


class InvalidInputError(HullswarmError, ValueError):
    """An argument violates a documented precondition."""


class WeightBoundError(HullswarmError):
    """A coupling-weight evaluation left its declared bounds."""

    def __init__(self, kind, i, j, t, value, lo, hi=None):
        self.kind = kind
        self.i = i
        self.j = j
        self.t = t
        self.value = value
        rng = f">= {lo}" if hi is None else f"in [{lo}, {hi}]"
        super().__init__(f"weight {kind}({i},{j}) = {value} at t={t} is not {rng}")


class DivergenceError(HullswarmError):
    """Numerical integration produced a nonfinite state."""

    def __init__(self, t):
        self.t = t
        super().__init__(f"nonfinite state first observed at t={t}")


class CertificateError(HullswarmError):
    """A certificate construction or guarantee failed validation."""


class PreconditionError(HullswarmError):
    """A verification was requested outside its domain of validity."""
