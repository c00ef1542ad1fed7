"""Exception hierarchy shared by all modules."""


class RamlabError(Exception):
    """Base class; ``code`` is the short identifier used in CLI reports."""

    @property
    def code(self):
        return type(self).__name__


# linear algebra
class SubspaceNotContained(RamlabError):
    pass


class DimensionMismatch(RamlabError):
    pass


# groups and modules
class NotASubgroup(RamlabError):
    pass


class MixedGroups(RamlabError):
    pass


# ramification types and models
class InvalidType(RamlabError):
    pass


class InertiaDoesNotGenerate(InvalidType):
    pass


class ArchTooLarge(InvalidType):
    pass


class NonCyclicInertia(InvalidType):
    pass


class NoFullInertia(InvalidType):
    pass


class SizeCapExceeded(RamlabError):
    pass


class ComponentMismatch(RamlabError):
    pass


class WildPrimeUnsupported(RamlabError):
    pass


class IncompleteAssignment(RamlabError):
    pass


class RequiresSquareCase(RamlabError):
    pass


# bounds
class InvalidArgs(RamlabError):
    pass


class CharDividesDegree(RamlabError):
    pass


class OverlapSets(RamlabError):
    pass


# arithmetic
class BadModulus(RamlabError):
    pass


class WildPrime(RamlabError):
    pass


class NotIndependent(RamlabError):
    pass


class NotFundamental(RamlabError):
    pass


class SearchExhausted(RamlabError):
    pass


class UnitUnavailable(RamlabError):
    pass


class CharConflict(RamlabError):
    pass


class NotIrreducible(RamlabError):
    pass


# explorer / cli
class DomainTooLarge(RamlabError):
    pass


class ParseError(RamlabError):
    pass


class UnknownCheckId(RamlabError):
    pass
