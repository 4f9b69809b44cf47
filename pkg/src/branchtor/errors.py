class DomainError(ValueError):
    """Input is well formed but the requested object does not exist."""


class InfiniteIndexError(DomainError):
    pass


class NotASubgroupError(DomainError):
    pass


class NotASubpairError(DomainError):
    pass


class InfeasibleError(DomainError):
    pass


class NonOrientableError(DomainError):
    pass
