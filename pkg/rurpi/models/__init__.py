from .document import RurDocument
from .rur import CertReport, CertStatus, DiscardedPrime, EquationVerdict, RurCandidate
from .system import PolySystem

__all__ = [
    "CertReport",
    "CertStatus",
    "DiscardedPrime",
    "EquationVerdict",
    "PolySystem",
    "RurCandidate",
    "RurDocument",
]
