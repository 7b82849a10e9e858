# -*- coding: utf-8 -*-
"""
Exception hierarchy for toric-nc-algebra.

Every error raised by the library derives from ToricError and carries the
exit code the command-line front end reports for it:
  0 ok, 1 validation failure, 2 parse error, 3 internal invariant breach.
"""

from typing import Optional


class ToricError(Exception):
    """Base class for all library errors."""

    exit_code = 1

    def __init__(self, message: str = "", index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class ParseError(ToricError):
    """Syntax error in element text or workspace DSL, with position."""

    exit_code = 2

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class InvariantBreach(ToricError):
    """An internal consistency check failed."""

    exit_code = 3


class ValidationError(ToricError):
    """A value was well-formed but violates a mathematical requirement."""

    def __init__(self, message: str = "", index: Optional[int] = None,
                 name: Optional[str] = None, residue=None):
        super().__init__(message, index)
        self.name = name
        self.residue = residue


# phase_ring
class DimensionMismatch(ValidationError):
    pass


class Inconsistent(ValidationError):
    """Right-hand side lies outside the column space."""


# comodule_algebra
class InvalidGenerator(ValidationError):
    pass


class AlgebraMismatch(ValidationError):
    pass


# presentations
class InhomogeneousRelation(ValidationError):
    pass


class DegreeMismatch(ValidationError):
    pass


class DeformationMismatch(ValidationError):
    pass


class MorphismSourceMismatch(ValidationError):
    pass


class NotCoinvariant(ValidationError):
    pass


class ZeroElement(ValidationError):
    pass


class NonLaurentNormalForm(ValidationError):
    """Normal form needs a denominator that is not a unit of Q[q, q^-1]."""


# morphisms
class DegreeViolation(ValidationError):
    pass


class RelationViolation(ValidationError):
    pass


class CompositionMismatch(ValidationError):
    pass


# site
class PartitionOfUnityFails(ValidationError):
    pass


class EmptyCover(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class NotMatching(ValidationError):
    pass


class AmbiguousAtCap(ValidationError):
    pass


class NoSolutionAtCap(ValidationError):
    pass


# mapping_aut
class StageMismatch(ValidationError):
    pass


class NotPointed(ValidationError):
    pass


class LeibnizViolation(ValidationError):
    pass


# braided_der
class DegreeError(ValidationError):
    pass


# dsl_cli
class UnknownCommand(ValidationError):
    pass
