"""Exception hierarchy.

Every error raised by the library derives from :class:`RellatError`, so the
CLI can map the whole family onto exit code 2.
"""


class RellatError(Exception):
    """Base class for all library errors."""


class SizeCapExceeded(RellatError):
    pass


# order_core
class NotAPoset(RellatError):
    pass


class NotALattice(RellatError):
    pass


class InvalidMooreFamily(RellatError):
    pass


class NotJoinIrreducible(RellatError):
    pass


class MethodDisagreement(RellatError):
    """Two independent computations of the same quantity disagree (a bug)."""


class NotDClosed(RellatError):
    def __init__(self, message, j=None, cover=None):
        super().__init__(message)
        self.j = j
        self.cover = cover


class NotACover(RellatError):
    pass


class NotAMorphism(RellatError):
    pass


class NotBoundPreserving(RellatError):
    pass


class NotAnEmbedding(RellatError):
    pass


# frames
class UnknownWorld(RellatError):
    pass


class UnknownAction(RellatError):
    pass


class DomainMismatch(RellatError):
    pass


class EmptyComponent(RellatError):
    pass


class InvalidPMorphism(RellatError):
    pass


class NotSurjective(RellatError):
    pass


class FrameNotS4(RellatError):
    pass


class FrameNotRooted(RellatError):
    pass


class FrameNotFull(RellatError):
    pass


# ultrametric
class SpaceAxiomError(RellatError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotReduced(SpaceAxiomError):
    pass


class NotSymmetric(SpaceAxiomError):
    pass


class TriangleViolation(SpaceAxiomError):
    pass


class EmptyFiber(RellatError):
    pass


class ModuleLawViolation(RellatError):
    pass


# relational
class NotASubset(RellatError):
    pass


class NotSI(RellatError):
    pass


class NotAtomistic(RellatError):
    pass


class NotTopPreserving(RellatError):
    pass


class NoInjectiveComponent(RellatError):
    pass


# reduction
class LIsBoolean(RellatError):
    pass


class EmptyF0(RellatError):
    pass


class InvalidAtomStructure(RellatError):
    pass


# cli
class ParseError(RellatError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnknownCommand(RellatError):
    pass


class UnsupportedKind(RellatError):
    pass
