"""Exception hierarchy.

Two families matter to callers: :class:`DataError` for anything wrong with
the input table, and :class:`ComputeError` for estimator or ranking
failures. The CLI maps them to distinct exit statuses.
"""


class MirankError(Exception):
    """Base class for all errors raised by this package."""


class DataError(MirankError):
    pass


class ComputeError(MirankError):
    pass


class RaggedRowsError(DataError):
    def __init__(self, line: int, expected: int, found: int):
        self.line = line
        super().__init__(f"line {line}: expected {expected} fields, found {found}")


class EmptyAfterFilteringError(DataError):
    def __init__(self, n_kept: int):
        super().__init__(
            f"only {n_kept} complete row(s) left after dropping rows with missing cells; need at least 2"
        )


class DuplicateColumnError(DataError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"duplicate column name {name!r}")


class TypeOverrideError(DataError):
    pass


class UnknownColumnError(DataError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown column {name!r}")


class EmptyCandidateSetError(DataError):
    def __init__(self):
        super().__init__("no candidate variables left to rank after removing the importance set")


class EmptyInputError(ComputeError):
    pass


class OverlappingGroupsError(ComputeError):
    def __init__(self, names):
        super().__init__(f"variable groups overlap on {sorted(names)}")


class SingularCovarianceError(ComputeError):
    def __init__(self, block: str):
        self.block = block
        super().__init__(f"covariance of block {block!r} is singular")


class TooFewRowsError(ComputeError):
    def __init__(self, n: int, k: int):
        super().__init__(f"k-nearest-neighbour estimate needs more than k={k} rows, got {n}")
