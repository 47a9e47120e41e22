"""Loading, windowing, splitting and standardizing daily price series."""
import os
import re
import logging

import numpy as np
import pandas as pd

from .exceptions import (
    MalformedRow, MissingColumn, EmptySeries, DuplicateDate,
    WindowOutOfRange, ZeroVariance, SeriesTooShort)


logger = logging.getLogger(__name__)

DEFAULT_SPLIT_DATE = "2023-07-04"
EPOCH = "1970-01-01"  # Synthetic series are laid on consecutive days from here


def _as_day(value):
    return np.datetime64(pd.Timestamp(value).date(), "D")


class TimeSeries(object):
    """An immutable, dated, real-valued series.

    Dates are strictly increasing days. Gaps are allowed, and every consumer
    in this package treats the series as evenly sampled by index.
    """

    def __init__(self, name, dates, values, min_length=2):
        dates = np.asarray(dates, dtype="datetime64[D]")
        values = np.asarray(values, dtype=float)
        if dates.ndim != 1 or dates.shape != values.shape:
            raise ValueError(
                "dates and values should be 1-D and of equal length, got {} and {}"
                .format(dates.shape, values.shape))
        if len(values) < min_length:
            raise SeriesTooShort(name=name, length=len(values), required=min_length)
        if not np.all(np.isfinite(values)):
            raise ValueError("Series {!r} contains NaN or infinite values".format(name))
        if len(dates) > 1 and not np.all(dates[1:] > dates[:-1]):
            raise ValueError("Series {!r} dates are not strictly increasing".format(name))
        dates.setflags(write=False)
        values.setflags(write=False)
        self.name = name
        self.dates = dates
        self.values = values

    @classmethod
    def from_values(cls, values, name="series", start=EPOCH, **kwargs):
        """Wrap bare samples, dating them on consecutive days from ``start``."""
        values = np.asarray(values, dtype=float)
        dates = _as_day(start) + np.arange(len(values))
        return cls(name, dates, values, **kwargs)

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        if not len(self):
            return "TimeSeries({!r}, empty)".format(self.name)
        return "TimeSeries({!r}, {} points, {}..{})".format(
            self.name, len(self), self.dates[0], self.dates[-1])

    def replace(self, values=None, name=None, min_length=2):
        return TimeSeries(
            self.name if name is None else name,
            self.dates,
            self.values if values is None else values,
            min_length=min_length)

    def select(self, mask, min_length=2):
        return TimeSeries(
            self.name, self.dates[mask], self.values[mask], min_length=min_length)

    def to_csv(self, path, column="value"):
        """Write the (Date, value) pair per row with 6 decimal places."""
        frame = pd.DataFrame({
            "Date": pd.to_datetime(self.dates).strftime("%Y-%m-%d"),
            column: self.values,
            })
        frame.to_csv(path, index=False, float_format="%.6f", lineterminator="\n")


def _parser_error_line(error):
    # The tokenizer counts lines from 1 and rows from 0
    found = re.search(r"\bline (\d+)", str(error))
    if found:
        return int(found.group(1))
    found = re.search(r"\brow (\d+)", str(error))
    return int(found.group(1)) + 1 if found else None


def load_csv(path, column="Close", date_column="Date", name=None):
    # type: (str, str, str, str) -> TimeSeries
    """Load one value column of a daily CSV file, such as a Yahoo Finance export.

    :param path: A UTF-8 CSV file with a header row.
    :param column: The value column. Defaults to "Close".
    :param name: Series name. Defaults to the file name without extension.

    A row whose date or value can not be parsed (Yahoo writes "null" for
    missing quotes) is rejected with :class:`MalformedRow` naming its line,
    and so is a row with extra fields or an unterminated quote.
    Fully blank lines are ignored.
    """
    name = name or os.path.splitext(os.path.basename(path))[0]
    try:
        frame = pd.read_csv(
            path, dtype=str, keep_default_na=False, skip_blank_lines=False,
            encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise EmptySeries(source=path)
    except pd.errors.ParserError as e:
        raise MalformedRow(line=_parser_error_line(e), reason=str(e).strip())
    frame = frame.fillna("")  # Blank lines come back as rows of NaN
    for wanted in (date_column, column):
        if wanted not in frame.columns:
            raise MissingColumn(column=wanted)
    blank = (frame.apply(lambda c: c.str.strip()) == "").all(axis=1).to_numpy()
    dates = pd.to_datetime(
        frame[date_column].str.strip(), format="%Y-%m-%d", errors="coerce")
    values = pd.to_numeric(frame[column].str.strip(), errors="coerce").to_numpy(float)
    bad = (dates.isna().to_numpy() | ~np.isfinite(values)) & ~blank
    if bad.any():
        position = int(np.flatnonzero(bad)[0])
        raise MalformedRow(
            line=position + 2,  # Line 1 is the header
            reason="can not parse {}={!r}, {}={!r}".format(
                date_column, frame[date_column].iloc[position],
                column, frame[column].iloc[position]))
    keep = ~blank
    if not keep.any():
        raise EmptySeries(source=path)
    days = dates[keep].dt.date.to_numpy().astype("datetime64[D]")
    duplicated = pd.Index(days).duplicated()
    if duplicated.any():
        raise DuplicateDate(date=days[duplicated][0], source=path)
    order = np.argsort(days, kind="stable")
    logger.debug("Loaded %d rows of %s from %s", keep.sum(), column, path)
    return TimeSeries(name, days[order], values[keep][order])


class Window(object):
    """Training windows, each anchored to the split date by a calendar offset."""
    THREE_YEARS = "3y"
    ONE_YEAR = "1y"
    SIX_MONTHS = "6m"
    FULL = "full"

    # Yearly windows start one extra day early: 2020-07-03 and 2022-07-03
    # for a 2023-07-04 split. Six months starts on 2023-01-04.
    OFFSETS = {
        THREE_YEARS: pd.DateOffset(years=3, days=1),
        ONE_YEAR: pd.DateOffset(years=1, days=1),
        SIX_MONTHS: pd.DateOffset(months=6),
        }
    ALL = (THREE_YEARS, ONE_YEAR, SIX_MONTHS, FULL)


class SplitSpec(object):

    def __init__(self, split_date=DEFAULT_SPLIT_DATE, window=Window.FULL, start=None):
        """Describe a train/target split.

        :param split_date: The last date of the training series.
        :param window: One of :attr:`Window.ALL`.
        :param start: Optional explicit window start date, overriding ``window``.
        """
        if window not in Window.ALL:
            raise ValueError("window should be one of {}, got {!r}".format(
                Window.ALL, window))
        self.split_date = _as_day(split_date)
        self.window = window
        self._start = None if start is None else _as_day(start)

    def start_date(self, series=None):
        if self._start is not None:
            return self._start
        if self.window == Window.FULL:
            if series is None:
                raise ValueError("The full window needs a series to start from")
            return series.dates[0]
        return _as_day(
            pd.Timestamp(self.split_date) - Window.OFFSETS[self.window])

    def __repr__(self):
        return "SplitSpec({}, {})".format(self.split_date, self.window)


def split(series, spec, require_target=False):
    # type: (TimeSeries, SplitSpec, bool) -> (TimeSeries, TimeSeries)
    """Cut ``series`` into a windowed training series and a target series.

    Train holds every point with window start <= date <= split date, target
    every point after the split date. Target may be empty unless
    ``require_target`` is set.
    """
    if not series.dates[0] <= spec.split_date <= series.dates[-1]:
        raise WindowOutOfRange(reason="Split date {} is outside {}..{}".format(
            spec.split_date, series.dates[0], series.dates[-1]))
    start = spec.start_date(series)
    if start >= spec.split_date:
        raise WindowOutOfRange(reason="Window start {} is not before split date {}"
            .format(start, spec.split_date))
    in_train = (series.dates >= start) & (series.dates <= spec.split_date)
    in_target = series.dates > spec.split_date
    if in_train.sum() < 2:
        raise WindowOutOfRange(reason="Window {}..{} holds fewer than 2 points"
            .format(start, spec.split_date))
    if require_target and not in_target.any():
        raise WindowOutOfRange(reason="No target points after {}".format(
            spec.split_date))
    logger.debug("Split %r with %r: %d train, %d target",
        series, spec, in_train.sum(), in_target.sum())
    return series.select(in_train), series.select(in_target, min_length=0)


def standardize(series):
    # type: (TimeSeries) -> TimeSeries
    """Rescale to sample mean 0 and sample standard deviation 1."""
    if len(series) < 2:
        raise SeriesTooShort(name=series.name, length=len(series), required=2)
    mean = series.values.mean()
    std = series.values.std(ddof=1)
    if not std > 0:
        raise ZeroVariance(name=series.name)
    return series.replace(values=(series.values - mean) / std)

