"""Rolling-origin backtests scored by horizon-filtered MAPE."""
import json
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from .exceptions import (
    NoiseplaneError, InsufficientData, InsufficientHistory, SingularFit,
    ZeroActual, LengthMismatch, EmptyGroup, WindowOutOfRange)
from .forecast import ForecasterSpec, fit_predict
from .series import SplitSpec, Window, split, DEFAULT_SPLIT_DATE


logger = logging.getLogger(__name__)

DEFAULT_HORIZONS = (1, 7, 30)
FALLBACK = ForecasterSpec(ForecasterSpec.Kind.NAIVE_SEASONAL, k=1)


class BacktestSpec(object):

    def __init__(self, model, window, horizon, stride=1, expanding=False):
        """
        :param ForecasterSpec model: The model refit at every origin.
        :param int window: t_w, the number of samples each fit sees.
        :param int horizon: f_h. Only the f_h-th value of each forecast is scored.
        :param int stride: Score every ``stride``-th target point. Defaults to all.
        :param bool expanding:
            Keep the start of the first training window fixed and let later
            windows grow, instead of sliding a window of constant length.
        """
        if int(horizon) != horizon or horizon < 1:
            raise ValueError("horizon should be an integer >= 1, got {!r}".format(horizon))
        if int(stride) != stride or stride < 1:
            raise ValueError("stride should be an integer >= 1, got {!r}".format(stride))
        if window < model.min_length:
            raise InsufficientData(
                model=model.label, required=model.min_length, length=window)
        self.model = model
        self.window = int(window)
        self.horizon = int(horizon)
        self.stride = int(stride)
        self.expanding = expanding

    def __repr__(self):
        return "BacktestSpec({}, window={}, horizon={}{})".format(
            self.model.label, self.window, self.horizon,
            ", expanding" if self.expanding else "")


class Trace(object):
    """The scored forecast of every target point, plus how many fits fell back."""

    def __init__(self, dates, actual, forecast, fallbacks=0):
        self.dates = np.asarray(dates, dtype="datetime64[D]")
        self.actual = np.asarray(actual, dtype=float)
        self.forecast = np.asarray(forecast, dtype=float)
        self.fallbacks = fallbacks

    def __len__(self):
        return len(self.actual)

    def to_frame(self):
        return pd.DataFrame({
            "date": pd.to_datetime(self.dates).strftime("%Y-%m-%d"),
            "actual": self.actual,
            "forecast": self.forecast,
            })

    def as_dict(self):
        return {
            "dates": [str(d) for d in self.dates],
            "actual": self.actual.tolist(),
            "forecast": self.forecast.tolist(),
            "fallbacks": self.fallbacks,
            }

    @classmethod
    def from_dict(cls, payload):
        return cls(payload["dates"], payload["actual"], payload["forecast"],
            payload.get("fallbacks", 0))


def mape(forecasts, actuals):
    # type: (list, list) -> float
    """Mean absolute percentage error, in percent."""
    forecasts = np.asarray(forecasts, dtype=float)
    actuals = np.asarray(actuals, dtype=float)
    if forecasts.shape != actuals.shape or not len(actuals):
        raise LengthMismatch(forecasts=len(forecasts), actuals=len(actuals))
    zero = np.flatnonzero(actuals == 0)
    if len(zero):
        raise ZeroActual(index=int(zero[0]))
    return float(np.mean(np.abs(forecasts - actuals) / np.abs(actuals)) * 100)


def run(spec, history, target):
    # type: (BacktestSpec, TimeSeries, TimeSeries) -> (Trace, float)
    """Backtest one model on one series.

    Target point t is forecast from the origin f_h steps before it, using
    the t_w samples that end at that origin, so the first f_h - 1 origins
    precede the split. The model is refit at every origin. A fit that raises
    :class:`SingularFit` is replaced by the last-value forecast and counted
    in :attr:`Trace.fallbacks`.

    :param history: Every sample up to and including the split date.
    :param target: The samples after the split date, at least one.
    :raises InsufficientHistory: The first training window would start
        before the first sample of ``history``.
    """
    if not len(target):
        raise WindowOutOfRange(reason="Backtest of {} has no target points".format(
            getattr(target, "name", "series")))
    values = np.concatenate([history.values, target.values])
    first_origin = len(history) - spec.horizon
    first_start = first_origin - spec.window + 1
    if first_start < 0:
        raise InsufficientHistory(window=spec.window, origin=first_origin)
    scored = np.arange(0, len(target), spec.stride)
    forecasts = np.empty(len(scored))
    fallbacks = 0
    for i, position in enumerate(scored):
        origin = first_origin + position
        start = first_start if spec.expanding else origin - spec.window + 1
        train = values[start:origin + 1]
        try:
            forecast = fit_predict(spec.model, train, spec.horizon, origin=origin)
        except SingularFit as e:
            logger.debug("Origin %d falls back to %s: %s", origin, FALLBACK.label, e)
            forecast = fit_predict(FALLBACK, train, spec.horizon, origin=origin)
            fallbacks += 1
        forecasts[i] = forecast.values[-1]
    if fallbacks:
        logger.warning("%s fell back to %s at %d of %d origins",
            spec.model.label, FALLBACK.label, fallbacks, len(scored))
    trace = Trace(
        target.dates[scored], target.values[scored], forecasts, fallbacks=fallbacks)
    return trace, mape(trace.forecast, trace.actual)


class BacktestReport(object):
    """MAPE cells keyed by (model, series, window, horizon), with their traces
    and the errors of cells which could not be evaluated."""

    COLUMNS = ["model", "series", "window", "horizon", "mape", "fallbacks"]

    def __init__(self, cells=None, traces=None, errors=None):
        self.cells = list(cells or [])  # Dicts with the keys in COLUMNS
        self.traces = dict(traces or {})  # {(model, series, window, horizon): Trace}
        self.errors = list(errors or [])  # Dicts: model, series, window, horizon, error, message

    @staticmethod
    def key(cell):
        return (cell["model"], cell["series"], cell["window"], int(cell["horizon"]))

    def add(self, model, series, window, horizon, trace, value):
        cell = {
            "model": model, "series": series, "window": window, "horizon": horizon,
            "mape": value, "fallbacks": trace.fallbacks}
        self.cells.append(cell)
        self.traces[self.key(cell)] = trace

    def add_error(self, model, series, window, horizon, error):
        self.errors.append({
            "model": model, "series": series, "window": window, "horizon": horizon,
            "error": type(error).__name__, "message": str(error)})

    def cells_frame(self):
        return pd.DataFrame(self.cells, columns=self.COLUMNS)

    def table(self, window):
        """One window's cells, a row per model and a column per (series, horizon)."""
        frame = self.cells_frame()
        frame = frame[frame["window"] == window]
        if frame.empty:
            return pd.DataFrame()
        frame = frame.assign(column=frame["series"] + "@" + frame["horizon"].astype(str))
        table = frame.pivot(index="model", columns="column", values="mape")
        order = frame.drop_duplicates("column").sort_values(["series", "horizon"])
        return table[list(order["column"])].reset_index()

    def as_dict(self):
        return {
            "cells": self.cells,
            "traces": [dict(zip(("model", "series", "window", "horizon"), key),
                    trace=trace.as_dict())
                for key, trace in sorted(self.traces.items())],
            "errors": self.errors,
            }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, state):
        payload = json.loads(state)
        return cls(
            cells=payload["cells"],
            traces={cls.key(t): Trace.from_dict(t["trace"]) for t in payload["traces"]},
            errors=payload["errors"])


def aggregate(report):
    # type: (BacktestReport) -> pandas.DataFrame
    """Mean and sample standard deviation of MAPE per (model, horizon),
    taken over every series and window."""
    frame = report.cells_frame()
    if frame.empty:
        raise EmptyGroup(group=(), count=0, required=2)
    grouped = frame.groupby(["model", "horizon"], sort=True)["mape"]
    table = grouped.agg(["mean", "std", "count"]).reset_index().rename(
        columns={"count": "cells"})
    small = table[table["cells"] < 2]
    if len(small):
        raise EmptyGroup(
            group=tuple(small.iloc[0][["model", "horizon"]]),
            count=int(small.iloc[0]["cells"]), required=2)
    table["display"] = [
        u"{:.3f} ± {:.3f}".format(m, s) for m, s in zip(table["mean"], table["std"])]
    return table


def window_length(series, spec, horizon):
    """Samples in the dated span of the window, capped so that the earliest
    training window still fits inside the history before the split."""
    history, _ = split(series, SplitSpec(spec.split_date, Window.FULL))
    train, _ = split(series, spec)
    return min(len(train), len(history) - horizon + 1), history


def run_grid(series_list, models, windows=Window.ALL[:3], horizons=DEFAULT_HORIZONS,
        split_date=DEFAULT_SPLIT_DATE, expanding=False, workers=None):
    """Backtest every (model, series, window, horizon) cell.

    A cell that raises a :class:`NoiseplaneError` is recorded in
    :attr:`BacktestReport.errors` and the other cells proceed. Cells are
    evaluated concurrently by ``workers`` threads and stored in grid order.

    :raises ValueError: Two series share a name, two models share a label,
        or a window or horizon is repeated. Their cells would collide.
    """
    for kind, names in (
            ("series", [s.name for s in series_list]),
            ("model", [m.label for m in models]),
            ("window", list(windows)), ("horizon", list(horizons))):
        if len(set(names)) != len(names):
            raise ValueError("Each {} should appear once, got {}".format(kind, names))
    tasks = []
    for series in series_list:
        for window in windows:
            for model in models:
                for horizon in horizons:
                    tasks.append((series, window, model, horizon))

    def evaluate(task):
        series, window, model, horizon = task
        try:
            spec = SplitSpec(split_date, window)
            length, history = window_length(series, spec, horizon)
            _, target = split(series, spec, require_target=True)
            return run(BacktestSpec(model, length, horizon, expanding=expanding),
                history, target)
        except NoiseplaneError as e:
            logger.debug("Cell %s/%s/%s/%d failed: %s",
                model.label, series.name, window, horizon, e)
            return e

    with ThreadPoolExecutor(max_workers=workers) as executor:
        outcomes = list(executor.map(evaluate, tasks))
    report = BacktestReport()
    for (series, window, model, horizon), outcome in zip(tasks, outcomes):
        if isinstance(outcome, NoiseplaneError):
            report.add_error(model.label, series.name, window, horizon, outcome)
        else:
            report.add(model.label, series.name, window, horizon, *outcome)
    logger.info("Backtested %d cells, %d failed", len(tasks), len(report.errors))
    return report

