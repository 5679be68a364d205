"""Exception types raised across the toolkit.

Every error derives from :class:`TsllmError`; most also derive from
``ValueError`` because they signal bad input rather than a runtime fault.
"""

from __future__ import annotations


class TsllmError(Exception):
    """Base class for all toolkit errors."""


# -- series-core -------------------------------------------------------------


class SeriesError(TsllmError, ValueError):
    pass


class NonFiniteValue(SeriesError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"non-finite value at index {index}")


class TooShort(SeriesError):
    pass


class BadPeriod(SeriesError):
    pass


class ConstantSeries(SeriesError):
    pass


class DegenerateSplit(SeriesError):
    pass


class SpanTooSmall(SeriesError):
    pass


class LengthMismatch(SeriesError):
    pass


class SeriesTooShortForPeriod(SeriesError):
    pass


class SeriesTooShort(SeriesError):
    pass


class ZeroVariance(SeriesError):
    pass


# -- synthgen ----------------------------------------------------------------


class BadConfig(TsllmError, ValueError):
    pass


class BadRange(TsllmError, ValueError):
    pass


# -- codec -------------------------------------------------------------------


class CodecError(TsllmError, ValueError):
    pass


class ZeroDivisor(CodecError):
    pass


class EmptyText(CodecError):
    pass


class MalformedDigits(CodecError):
    def __init__(self, step: int, token: str = ""):
        self.step = step
        self.token = token
        super().__init__(f"malformed digit step {step}: {token!r}")


class NoClauses(CodecError):
    pass


class ChainBroken(CodecError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"clause {index} does not start where clause {index - 1} ended")


class DirectionMismatch(CodecError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"clause {index}: direction word contradicts its values")


# -- promptkit ---------------------------------------------------------------


class RegistryError(TsllmError, ValueError):
    pass


class UnknownDataset(RegistryError, KeyError):
    def __init__(self, key: str):
        self.key = key
        super().__init__(f"unknown dataset key {key!r}")

    def __str__(self) -> str:
        return self.args[0]


# -- forecasters -------------------------------------------------------------


class ForecastError(TsllmError):
    pass


class BackendUnavailable(ForecastError):
    pass


class AllSamplesMalformed(ForecastError):
    pass


class MissingPeriod(ForecastError, ValueError):
    pass


class WindowTooLarge(ForecastError, ValueError):
    pass


class BadParams(ForecastError, ValueError):
    pass


class PartialSamples(UserWarning):
    """Some, but not all, completions failed to decode."""


# -- analysis ----------------------------------------------------------------


class AnalysisError(TsllmError, ValueError):
    pass


class MapeUndefined(AnalysisError):
    def __init__(self, indices):
        self.indices = tuple(int(i) for i in indices)
        super().__init__(f"actual values too close to zero at indices {list(self.indices)}")


class NoParsableResponses(AnalysisError):
    pass


class AllSamplesTooShort(AnalysisError):
    pass


# -- harness -----------------------------------------------------------------


class HarnessError(TsllmError):
    pass


class ParseError(HarnessError, ValueError):
    def __init__(self, row: int, column: str, detail: str = ""):
        self.row = row
        self.column = column
        msg = f"row {row}, column {column!r}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class EmptyFile(HarnessError, ValueError):
    pass


class CacheCorrupt(HarnessError):
    pass


class ConfigError(HarnessError, ValueError):
    pass


class UnknownBackend(ConfigError):
    pass


class MissingCredentials(ConfigError):
    pass


class PipelineError(HarnessError):
    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {type(cause).__name__}: {cause}")
