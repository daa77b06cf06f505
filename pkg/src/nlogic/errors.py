"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class NlogicError(Exception):
    """Base class for all errors raised by nlogic."""


class ParseError(NlogicError):
    """Malformed input text.  ``position`` is a 0-based offset or a line number."""

    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)


# -- algebra validation -------------------------------------------------------

class AlgebraError(NlogicError):
    """An algebra description fails one of the structural checks."""

    def __init__(self, message: str, witness: dict | None = None):
        self.witness = witness or {}
        super().__init__(message)


class AntisymmetryViolation(AlgebraError):
    pass


class OperatorTypeViolation(AlgebraError):
    """An operation table has the wrong tonicity or breaks a distribution law."""

    def __init__(self, message: str, axiom: str, witness: dict | None = None):
        self.axiom = axiom
        super().__init__(message, witness)


class ResiduationViolation(AlgebraError):
    pass


class UnitAxiomViolation(AlgebraError):
    pass


class KindViolation(AlgebraError):
    """Declared kind (semilattice / lattice) is stronger than the order supports."""


class CarrierTooLarge(NlogicError):
    pass


class NotAFilter(NlogicError):
    pass


class NotAnIdeal(NlogicError):
    pass


# -- frames -------------------------------------------------------------------

class FrameError(NlogicError):
    """A frame description is ill-sorted or references unknown points."""


class MissingRelation(NlogicError):
    pass


class SignatureMismatch(NlogicError):
    pass


# -- semantics / correspondence ----------------------------------------------

class SearchSpaceTooLarge(NlogicError):
    pass


class RuleNotApplicable(NlogicError):
    pass


class NotSahlqvist(NlogicError):
    def __init__(self, message: str, trace: list[str] | None = None):
        self.trace = list(trace or [])
        super().__init__(message)


class NotInCanonicalForm(NlogicError):
    pass
