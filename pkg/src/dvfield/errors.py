"""Error taxonomy shared by all modules and mirrored verbatim by the CLI."""


class UltrametricError(Exception):
    """Base class for all domain/hypothesis failures (CLI exit code 2)."""


class DomainError(UltrametricError):
    pass


class DivisionByIndistinguishableZero(UltrametricError):
    pass


class DerivativeIndistinguishableFromZero(UltrametricError):
    pass


class HypothesesFail(UltrametricError):
    pass


class PrecisionExhausted(UltrametricError):
    pass


class ContractionFails(UltrametricError):
    pass


class AllCoefficientsIndistinguishableFromZero(UltrametricError):
    pass


class TailInconclusive(UltrametricError):
    pass


class UndecidedMultipleRoot(UltrametricError):
    pass


class InsufficientPrecision(UltrametricError):
    pass


class ParseError(Exception):
    """Raised by the text parsers; carries the offending position (CLI exit code 1)."""

    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position
