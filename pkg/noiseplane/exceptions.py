class NoiseplaneError(Exception):
    # Define the template in Unicode to accommodate possible Unicode variables
    msg = u'An unspecified error'

    def __init__(self, *args, **kwargs):
        super(NoiseplaneError, self).__init__(self.msg.format(**kwargs), *args)
        self.kwargs = kwargs


class ConfigurationError(NoiseplaneError):
    msg = u"Invalid configuration: {reason}"


# Ingestion

class MalformedRow(NoiseplaneError):
    msg = u"Line {line}: {reason}"

    @property
    def line(self):
        return self.kwargs.get("line")


class MissingColumn(MalformedRow):
    msg = u"Line {line}: header has no column named {column!r}"

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("line", 1)
        super(MissingColumn, self).__init__(*args, **kwargs)


class EmptySeries(NoiseplaneError):
    msg = u"No valid rows found in {source}"


class DuplicateDate(NoiseplaneError):
    msg = u"Date {date} appears more than once in {source}"


class WindowOutOfRange(NoiseplaneError):
    msg = u"{reason}"


class ZeroVariance(NoiseplaneError):
    msg = u"Series {name!r} has zero sample variance and can not be standardized"


class SeriesTooShort(NoiseplaneError):
    msg = u"Series {name!r} has {length} points, at least {required} are needed"


# Ordinal patterns and information measures

class AdmissibilityViolated(NoiseplaneError, UserWarning):
    # Raised by default. Emitted via warnings.warn() when the caller overrides it.
    msg = (u"Series of length {length} is too short for d={d}: "
           u"at least 5*d! = {required} points are expected")


class DimensionMismatch(NoiseplaneError):
    msg = u"Distributions have different pattern spaces: {left} vs {right} slots"


# Spectra

class BandTooNarrow(NoiseplaneError):
    msg = (u"Only {count} frequency points fall inside [{f_lo}, {f_hi}], "
           u"at least {required} are needed")


# Forecasting and backtesting

class InsufficientData(NoiseplaneError):
    msg = u"{model} needs at least {required} training points, got {length}"


class SingularFit(NoiseplaneError):
    msg = u"{model}: {reason}"


class InsufficientHistory(NoiseplaneError):
    msg = (u"Window of {window} points ending at index {origin} "
           u"extends before the start of the series")


class ZeroActual(NoiseplaneError):
    msg = u"Actual value at position {index} is zero, MAPE is undefined"


class LengthMismatch(NoiseplaneError):
    msg = u"Got {forecasts} forecasts for {actuals} actual values"


class EmptyGroup(NoiseplaneError):
    msg = u"Group {group} has {count} cell(s), at least {required} are needed"

