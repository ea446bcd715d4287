from .certify import CertificationService
from .driver import SolverService

__all__ = ["CertificationService", "SolverService"]
