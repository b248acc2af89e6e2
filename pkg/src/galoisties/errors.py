class GaloisTiesError(Exception):
    def __init__(self, msg: str):
        self.msg = msg

    def __str__(self):
        return self.msg


class UsageError(GaloisTiesError):
    """Bad arguments: non-prime p, index out of range, dimension mismatch."""


class DomainError(GaloisTiesError):
    """Mathematical input outside the domain of an operation."""


class PreconditionError(GaloisTiesError):
    """A hypothesis of the construction does not hold for the given tower."""


class InternalConsistencyError(GaloisTiesError):
    """An identity which holds for every valid input has failed."""


class ResourceError(GaloisTiesError):
    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f'{what}: {size} exceeds the limit {limit}')
        self.size = size
        self.limit = limit
