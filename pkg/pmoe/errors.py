from typing import List, Optional


class PmoeError(Exception):
    """Base class of every error raised by pmoe."""

    exit_code = 1


class ValidationError(PmoeError):
    """Bad input: data, configuration or command line."""

    exit_code = 2


class NumericalError(PmoeError):
    """A fit or estimate could not be computed."""

    exit_code = 3


class ConstantColumn(ValidationError):
    def __init__(self, column: int):
        self.column = column
        super().__init__("column %d has zero variance" % column)


class NonFinite(ValidationError):
    def __init__(self, row: int, column: int):
        self.row = row
        self.column = column
        super().__init__("non-finite value at row %d, column %d" % (row, column))


class DataFormatError(ValidationError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


class UnknownScenario(ValidationError):
    def __init__(self, name: str, available: List[str]):
        self.name = name
        self.available = available
        super().__init__(
            "unknown scenario '%s', available: %s" % (name, ", ".join(available))
        )


class InvalidConfig(ValidationError):
    pass


class RankDeficient(NumericalError):
    def __init__(self, column: int):
        self.column = column
        super().__init__(
            "column %d is numerically in the span of the preceding columns" % column
        )


class SingularDesign(NumericalError):
    def __init__(self, message: str = "normal equations are singular"):
        super().__init__(message + " (retry with ridge > 0)")


class Separation(NumericalError):
    def __init__(self, norm: float):
        self.norm = norm
        super().__init__(
            "logistic fit diverges (|alpha| = %.3g), data look separated; "
            "supply ridge > 0" % norm
        )


class NoConvergence(NumericalError):
    def __init__(self, kkt_violation: float, lam: Optional[float] = None):
        self.kkt_violation = kkt_violation
        self.lam = lam
        if lam is None:
            msg = "no convergence, kkt violation %.3g" % kkt_violation
        else:
            msg = "no convergence at lambda=%.6g, kkt violation %.3g" % (
                lam,
                kkt_violation,
            )
        super().__init__(msg)


class BootstrapFailure(NumericalError):
    def __init__(self, dropped: int, total: int):
        self.dropped = dropped
        self.total = total
        super().__init__(
            "%d of %d bootstrap replicates failed (limit 10%%)" % (dropped, total)
        )


class SimulationAborted(NumericalError):
    def __init__(self, method: str, failed: int, total: int):
        self.method = method
        self.failed = failed
        self.total = total
        super().__init__(
            "method %s failed in %d of %d replications (limit 5%%)"
            % (method, failed, total)
        )
