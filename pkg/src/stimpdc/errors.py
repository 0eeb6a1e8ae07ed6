"""Exception types raised across the package.

Each error maps to a CLI exit status through ``exit_code``.
"""


class StimPDCError(Exception):
    exit_code = 1


class SymmetryRequired(StimPDCError, ValueError):
    """Closed-form counts need alpha0 == beta0; use the moment engine otherwise."""

    exit_code = 3


class DegenerateStatistics(StimPDCError, ValueError):
    """The requested quantity is undefined (e.g. no photons at all)."""

    exit_code = 3


class RangeExceeded(StimPDCError, ValueError):
    exit_code = 3


class EnvelopeExceeded(StimPDCError, ValueError):
    """Parameters fall outside the region the Fock oracle is built to handle."""

    exit_code = 3


class TruncationFailure(StimPDCError, RuntimeError):
    exit_code = 3


class UnsupportedOrder(StimPDCError, ValueError):
    exit_code = 1


class NumericalInconsistency(StimPDCError, ArithmeticError):
    """A quantity that must be real came out with a non-negligible imaginary part."""

    exit_code = 2


class VerificationFailure(StimPDCError):
    exit_code = 2
