"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class FpfYbeError(Exception):
    """Base class for all errors raised by fpfybe."""


# group construction
class GroupError(FpfYbeError):
    pass


class NotLatinSquare(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class MissingInverse(GroupError):
    pass


class NotAssociative(GroupError):
    pass


class BadOrder(GroupError):
    pass


class BadCongruence(GroupError):
    pass


class NotPrime(GroupError):
    pass


class UnknownGroup(GroupError):
    pass


# maps and searches
class NotHomomorphic(FpfYbeError):
    pass


class NotBijective(FpfYbeError):
    pass


class SearchBudgetExceeded(FpfYbeError):
    pass


class BadPsi(FpfYbeError):
    """Raised when a map offered as a fixed point free abelian endomorphism is not one."""

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class GroupMismatch(FpfYbeError):
    pass


# braces and permutation subgroups
class BraceAxiomViolation(FpfYbeError):
    pass


class NotRegular(FpfYbeError):
    pass


class NotStable(FpfYbeError):
    pass


class NotClosed(FpfYbeError):
    pass


# families
class BadRange(FpfYbeError):
    pass


class BadParity(FpfYbeError):
    pass


class UnsupportedParity(FpfYbeError):
    pass


class UnsupportedFamily(FpfYbeError):
    pass


class OddTau(FpfYbeError):
    pass


class NonInvolutiveTau(FpfYbeError):
    pass
