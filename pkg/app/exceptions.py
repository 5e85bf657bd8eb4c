"""
Exception hierarchy for the Signed Qubit Entropy toolkit
"""


class SignedQubitError(Exception):
    """Base class for all toolkit errors."""


class InvalidDistributionError(SignedQubitError, ValueError):
    """Signed distribution has the wrong shape, non-finite entries or does not sum to 1."""


class InvalidStateError(SignedQubitError, ValueError):
    """Matrix is not a 2x2 Hermitian matrix with unit trace."""


class UndefinedEntropyError(SignedQubitError, ValueError):
    """Entropy requested for the zero vector."""


class EntropyDomainError(SignedQubitError, ValueError):
    """Order or distribution outside the domain of the requested entropy."""


class RatioDomainError(SignedQubitError, ValueError):
    """Zero direction passed to the ratio functional."""


class CertificateError(SignedQubitError):
    """Dual certificate failed its KKT or feasibility check."""

    def __init__(self, message: str, kkt_residual: float = float('nan'),
                 dual_norm: float = float('nan')):
        super().__init__(message)
        self.kkt_residual = kkt_residual
        self.dual_norm = dual_norm


class ConvergenceError(SignedQubitError):
    """A minimum-norm solve did not converge."""

    def __init__(self, message: str, k: int, report=None):
        super().__init__(message)
        self.k = k
        self.report = report


class ConfigError(SignedQubitError, ValueError):
    """Run configuration failed validation."""

    def __init__(self, message: str, errors=None):
        super().__init__(message)
        self.errors = errors or {}
