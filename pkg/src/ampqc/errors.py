"""Exception hierarchy shared by every module of the package."""


class AmpqcError(Exception):
    """Base class for all errors raised by :mod:`ampqc`."""


class DomainError(AmpqcError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapabilityError(AmpqcError):
    """The request exceeds a hard implementation cap (dense size, singlet order)."""


class ProtocolError(AmpqcError):
    """Protocol bookkeeping is inconsistent (missing announcement, bad records)."""


class ProtocolAborted(AmpqcError):
    """A run was terminated (eavesdropper detected or singlet test failed)."""

    def __init__(self, reason: str, transcript=None):
        super().__init__(reason)
        self.transcript = transcript
