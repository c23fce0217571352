"""Exception types shared across the package."""


class SubfibError(Exception):
    """Base class for all structured errors raised by subfib."""


class MalformedEntity(SubfibError):
    """A finite map references an identifier that is not present."""


class UnknownObject(SubfibError):
    pass


class UnknownMorphism(SubfibError):
    pass


class UnknownType(SubfibError):
    pass


class NoPullback(SubfibError):
    """No object of the category satisfies the pullback universal property."""


class NoTerminal(SubfibError):
    pass


class MissingBase(SubfibError):
    """Slice construction requested without a base object."""


class NoLift(SubfibError):
    """The functor has no cartesian lift at the requested (object, arrow)."""


class NonStrict(SubfibError):
    """Indexed-category reindexing laws fail strictly."""


class NonSplitCleavage(SubfibError):
    """The cleavage is not split (identities or composites misbehave)."""


class MismatchedBase(SubfibError):
    pass


class MismatchedJudgements(SubfibError):
    """Premises of a derivation rule do not share the required boundary."""


class NotFaithful(SubfibError):
    pass


class NotAFibration(SubfibError):
    pass


class TooLarge(SubfibError):
    """An enumeration would exceed the configured object bound."""


class StageTwoUnavailable(SubfibError):
    """lam-typing requested on a structure whose pullback stage failed."""


class ParseError(SubfibError):
    """Model file could not be parsed against the JSON schema."""


class ValidationError(SubfibError):
    """Model file parsed but an entity failed law validation."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
