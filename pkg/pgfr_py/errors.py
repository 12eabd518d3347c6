from __future__ import annotations


class PgfrError(Exception):
    pass


class InvalidParameter(PgfrError, ValueError):
    pass


class NumericFailure(PgfrError, ArithmeticError):
    def __init__(self, message: str, *, iterations: int = 0, off_diagonal: float = 0.0) -> None:
        super().__init__(message)
        self.iterations = iterations
        self.off_diagonal = off_diagonal


class InternalInconsistency(PgfrError, AssertionError):
    pass


class InfeasibleTarget(PgfrError, ValueError):
    def __init__(self, message: str, *, relation: dict[int, int], mismatch: float) -> None:
        super().__init__(message)
        # label -> integer coefficient of the violated relation
        self.relation = dict(relation)
        self.mismatch = mismatch
