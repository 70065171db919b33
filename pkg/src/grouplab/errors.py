"""Exception hierarchy for grouplab."""


class GroupLabError(Exception):
    """Base class for all grouplab errors."""


class UnknownGenerator(GroupLabError):
    pass


class AlphabetMismatch(GroupLabError):
    pass


class ResourceLimit(GroupLabError):
    pass


class IdentityInput(GroupLabError):
    pass


class NotStandardForm(GroupLabError):
    pass


class SearchExhausted(GroupLabError):
    pass


class MembershipUndecided(GroupLabError):
    """An edge-group membership question fell outside what can be decided."""


class NotInEdgeGroup(GroupLabError):
    pass


class NotAbelian(GroupLabError):
    pass


class LengthMismatch(GroupLabError):
    pass


class SolutionCheckFailed(GroupLabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MissingWitness(GroupLabError):
    pass


class ChainMismatch(GroupLabError):
    pass


class ChoiceOutOfRange(GroupLabError):
    pass


class MissingDecoration(GroupLabError):
    pass


class ArityMismatch(GroupLabError):
    pass


class ParseError(GroupLabError):
    pass
