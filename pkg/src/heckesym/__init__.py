"""Exact modular symbols, cohomology and Hecke eigensystems for
finite-index subgroups of Hecke triangle groups."""

from .rings import ZZ, QQ, GF, QuotientExtension, UnsupportedRingError

__all__ = ["ZZ", "QQ", "GF", "QuotientExtension", "UnsupportedRingError"]

__version__ = "0.1.0"
