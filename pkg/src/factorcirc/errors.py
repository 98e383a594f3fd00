"""Exception types raised by factorcirc."""


class FactorCircError(Exception):
    """Base class for all library errors."""


class DegenerateFactor(FactorCircError, ValueError):
    """The factor is zero, so the scaling by its N-th root is singular."""


class SingularSpectrum(FactorCircError, ValueError):
    """At least one eigenvalue vanishes; ``modes`` lists the offending indices."""

    def __init__(self, modes, message=None):
        self.modes = tuple(int(l) for l in modes)
        if message is None:
            message = f"vanishing eigenvalue(s) at mode index {list(self.modes)}"
        super().__init__(message)


class MultiModal(FactorCircError, ValueError):
    """The dominant eigenvalue is not unique (within the tie tolerance)."""

    def __init__(self, modes, message=None):
        self.modes = tuple(int(l) for l in modes)
        if message is None:
            message = f"dominant modes tie: {list(self.modes)}"
        super().__init__(message)


class PreconditionFailed(FactorCircError, ValueError):
    """An operation was called outside the regime it is defined for."""


class ConfigError(FactorCircError, ValueError):
    """A scenario configuration is malformed; ``field`` names the culprit."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
