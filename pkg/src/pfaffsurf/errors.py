"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class PfaffsurfError(Exception):
    """Base class for library errors."""


class InvalidComplex(PfaffsurfError):
    """Input does not describe a closed orientable cellulated surface."""


class NonOrientableOrInvalid(InvalidComplex):
    pass


class UnknownFace(PfaffsurfError, KeyError):
    pass


class InvalidParameter(PfaffsurfError, ValueError):
    pass


class Inconsistent(PfaffsurfError):
    """Right-hand side is not in the column space of the matrix."""


class NotSquare(PfaffsurfError, ValueError):
    pass


class ReductionMismatch(PfaffsurfError):
    pass


class NullityMismatch(PfaffsurfError):
    pass


class RankDeficient(PfaffsurfError):
    pass


class CapExceeded(PfaffsurfError):
    pass


class ZeroIncidence(PfaffsurfError, ValueError):
    pass


class NotCyclic(PfaffsurfError, ValueError):
    pass


class PeelingStuck(PfaffsurfError):
    pass


class LengthMismatch(PfaffsurfError, ValueError):
    pass


class Incoherent(PfaffsurfError, ValueError):
    """A slot assignment violates an edge equation."""


class FormulaMismatch(PfaffsurfError):
    pass


class TooLarge(PfaffsurfError, ValueError):
    pass
