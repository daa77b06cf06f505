"""Two-sorted polarity frames for substructural logics: ordered algebras,
their canonical frames, object and modal semantics, and a Sahlqvist-style
correspondence engine with semantic cross-checks."""

from .errors import NlogicError

__version__ = "0.1.0"

__all__ = ["NlogicError", "__version__"]
