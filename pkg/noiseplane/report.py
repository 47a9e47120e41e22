"""Orchestration of the analysis pipeline and emission of its tables.

Every command takes a :class:`RunConfig`, writes its files into
``config.out`` and returns the list of errors of the items it could not
compute. Outputs are a deterministic function of the configuration and the
input files: noise seeds are fixed and floats are written with 6
significant digits.
"""
import os
import re
import json
import logging

import numpy as np
import pandas as pd

from .exceptions import NoiseplaneError, ConfigurationError, EmptyGroup
from .series import load_csv, split, SplitSpec, Window, DEFAULT_SPLIT_DATE
from .ordinal import OrdinalConfig, extract_patterns
from .complexity import (
    statistical_complexity, ch_boundaries, noise_reference_points,
    noise_reference_distances)
from .noise import NoiseSpec, generate, PJSD_REFERENCES
from .spectral import welch_psd, fit_power_law
from .forecast import ForecasterSpec
from .backtest import run_grid, aggregate


# The __init__.py will import this. Not the other way around.
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.6g"


class RunConfig(object):
    """Settings shared by every command.

    Sources apply in this order, later ones winning: the defaults below,
    an optional JSON file, then explicit keyword arguments (the CLI flags).
    A setting whose value is None is treated as not given.
    """
    FORMATS = ("csv", "json")
    DEFAULTS = {
        "inputs": [],
        "column": "Close",
        "windows": None,  # Each command has its own default
        "d": None,  # None picks d=5 for 3y and full, d=4 for 1y and 6m
        "tau": 1,
        "override_admissibility": False,
        "seed": None,  # None reads NOISEPLANE_SEED, falling back to 0
        "seeds": 10,
        "models": "naive_seasonal,naive_drift,ses,holt,auto_arima,ridge",
        "horizons": [1, 7, 30],
        "split_date": DEFAULT_SPLIT_DATE,
        "segment": 256,
        "overlap": 0.5,
        "resolution": 64,
        "expanding": False,
        "workers": None,
        "alpha": 2.0,
        "length": 16384,
        "out": ".",
        "format": "csv",
        }
    WINDOW_D = {
        Window.THREE_YEARS: 5, Window.FULL: 5, Window.ONE_YEAR: 4, Window.SIX_MONTHS: 4}

    def __init__(self, config_file=None, **settings):
        values = dict(self.DEFAULTS)
        if config_file:
            try:
                with open(config_file) as f:
                    from_file = json.load(f)
            except (IOError, ValueError) as e:
                raise ConfigurationError(reason="can not read {}: {}".format(config_file, e))
            if not isinstance(from_file, dict):
                raise ConfigurationError(reason="{} should hold a JSON object".format(
                    config_file))
            values.update(from_file)
        values.update((k, v) for k, v in settings.items() if v is not None)
        unknown = set(values) - set(self.DEFAULTS)
        if unknown:
            raise ConfigurationError(reason="unknown setting(s) {}".format(sorted(unknown)))
        if values["seed"] is None:
            values["seed"] = os.environ.get("NOISEPLANE_SEED", 0)
        self.__dict__.update(values)
        self._validate()

    def _validate(self):
        try:
            self.seed = int(self.seed)
        except (TypeError, ValueError):
            raise ConfigurationError(reason="seed should be an integer, got {!r}".format(
                self.seed))
        if isinstance(self.inputs, str):
            self.inputs = [self.inputs]
        if isinstance(self.windows, str):
            self.windows = [self.windows]
        for window in self.windows or ():
            if window not in Window.ALL:
                raise ConfigurationError(reason="window should be one of {}, got {!r}"
                    .format(Window.ALL, window))
        if self.format not in self.FORMATS:
            raise ConfigurationError(reason="format should be one of {}, got {!r}".format(
                self.FORMATS, self.format))
        if self.d is not None and (int(self.d) != self.d or self.d < 2):
            raise ConfigurationError(reason="d should be an integer >= 2")
        if int(self.seeds) != self.seeds or self.seeds < 1:
            raise ConfigurationError(reason="seeds should be an integer >= 1")
        if any(int(h) != h or h < 1 for h in self.horizons):
            raise ConfigurationError(reason="horizons should be integers >= 1")
        try:
            self.model_specs = (
                ForecasterSpec.parse_list(self.models) if isinstance(self.models, str)
                else [ForecasterSpec.parse(m) for m in self.models])
        except ValueError as e:
            raise ConfigurationError(reason=str(e))
        if not self.model_specs:
            raise ConfigurationError(reason="at least one model is needed")
        for kind, names in (
                ("model", [spec.label for spec in self.model_specs]),
                ("horizon", [int(h) for h in self.horizons]),
                ("window", list(self.windows or ()))):
            repeated = sorted(set(n for n in names if names.count(n) > 1))
            if repeated:
                raise ConfigurationError(reason="{} {} given more than once".format(
                    kind, ", ".join(map(str, repeated))))

    def windows_or(self, *default):
        return list(self.windows or default)

    def ordinal(self, window):
        return OrdinalConfig(
            self.d or self.WINDOW_D[window], self.tau,
            override_admissibility=self.override_admissibility)

    @property
    def noise_seeds(self):
        return range(self.seed, self.seed + self.seeds)

    def __repr__(self):
        return "RunConfig({})".format(", ".join(
            "{}={!r}".format(k, getattr(self, k)) for k in sorted(self.DEFAULTS)))


def load_inputs(config):
    if not config.inputs:
        raise ConfigurationError(reason="at least one --input series is needed")
    names = [os.path.splitext(os.path.basename(path))[0] for path in config.inputs]
    repeated = sorted(set(n for n in names if names.count(n) > 1))
    if repeated:
        raise ConfigurationError(reason="inputs share the series name(s) {}".format(
            ", ".join(repeated)))
    series = [load_csv(path, column=config.column) for path in config.inputs]
    for s in series:
        logger.info("Loaded %r", s)
    return series


def window_series(series, config, window):
    """The part of ``series`` analysed for a window.

    The full window covers the whole series, training and target alike.
    The other windows cover their training span only.
    """
    if window == Window.FULL:
        return series
    train, _ = split(series, SplitSpec(config.split_date, window))
    return train


def _record(errors, command, error, **where):
    logger.warning("%s %s: %s", command, where, error)
    entry = dict(where, command=command, error=type(error).__name__, message=str(error))
    errors.append(entry)


def _rounded(value):
    if isinstance(value, (float, np.floating)):
        return float(FLOAT_FORMAT % value)
    return value.item() if isinstance(value, np.generic) else value


def write_table(frame, config, name):
    """Write ``frame`` as <out>/<name>.csv or <out>/<name>.json."""
    path = os.path.join(config.out, "{}.{}".format(name, config.format))
    if not os.path.isdir(os.path.dirname(path)):
        os.makedirs(os.path.dirname(path))
    if config.format == "csv":
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    else:
        records = [
            {str(k): _rounded(v) for k, v in row.items()}
            for row in frame.to_dict(orient="records")]
        with open(path, "w") as f:
            json.dump(records, f, indent=2, sort_keys=True)
            f.write("\n")
    logger.info("Wrote %s", path)
    return path


def safe_name(text):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text).strip("_")


def cmd_chplane(config):
    """CH-plane coordinates of every input and noise reference, per window,
    together with the boundary curves of the window's embedding dimension."""
    series_list = load_inputs(config)
    errors = []
    for window in config.windows_or(
            Window.THREE_YEARS, Window.ONE_YEAR, Window.SIX_MONTHS):
        ordinal = config.ordinal(window)
        rows, lengths = [], []
        for series in series_list:
            try:
                part = window_series(series, config, window)
                point = statistical_complexity(extract_patterns(part, ordinal))
            except NoiseplaneError as e:
                _record(errors, "chplane", e, series=series.name, window=window)
                continue
            rows.append(("series", series.name, point.h, point.c))
            lengths.append(len(part))
        if lengths:
            references = noise_reference_points(
                max(lengths), ordinal, seeds=config.noise_seeds)
            rows.extend(("noise", label, p.h, p.c) for label, p in references.items())
        lower, upper = ch_boundaries(ordinal.d, config.resolution)
        for curve in (lower, upper):
            rows.extend((curve.kind, curve.kind, h, c) for h, c in curve.points)
            write_table(pd.DataFrame(curve.points, columns=["h", "c"]), config,
                "ch_bounds_d{}_{}".format(ordinal.d, curve.kind))
        write_table(pd.DataFrame(rows, columns=["kind", "label", "h", "c"]), config,
            "chplane_{}".format(window))
    return errors


def cmd_pjsd(config):
    """Mean PJSD between each input and each colored-noise reference."""
    series_list = load_inputs(config)
    errors = []
    labels = [ref.label for ref in PJSD_REFERENCES]
    for window in config.windows_or(Window.FULL):
        ordinal = config.ordinal(window)
        rows = []
        for series in series_list:
            try:
                distances = noise_reference_distances(
                    window_series(series, config, window), ordinal,
                    seeds=config.noise_seeds)
            except NoiseplaneError as e:
                _record(errors, "pjsd", e, series=series.name, window=window)
                continue
            row = dict(distances, series=series.name)
            row["argmin"] = min(labels, key=lambda label: distances[label])
            rows.append(row)
        write_table(pd.DataFrame(rows, columns=["series"] + labels + ["argmin"]),
            config, "pjsd_{}".format(window))
    return errors


def cmd_psd(config):
    """Welch PSD of each input per window, plus one table of power-law fits."""
    series_list = load_inputs(config)
    errors = []
    fits = []
    for window in config.windows_or(Window.FULL):
        for series in series_list:
            try:
                psd = welch_psd(
                    window_series(series, config, window), config.segment, config.overlap)
                fit = fit_power_law(psd)
            except NoiseplaneError as e:
                _record(errors, "psd", e, series=series.name, window=window)
                continue
            write_table(psd.to_frame(), config,
                "psd_{}_{}".format(safe_name(series.name), window))
            fits.append({
                "series": series.name, "window": window, "alpha": fit.alpha,
                "intercept": fit.intercept, "r2": fit.r2,
                "f_lo": fit.band[0], "f_hi": fit.band[1]})
    write_table(pd.DataFrame(fits, columns=[
        "series", "window", "alpha", "intercept", "r2", "f_lo", "f_hi"]),
        config, "psd_fits")
    return errors


def cmd_noise(config):
    """Write one colored-noise realization as (index, value)."""
    series = generate(NoiseSpec(config.alpha, config.length, config.seed))
    write_table(
        pd.DataFrame({"index": np.arange(len(series)), "value": series.values}),
        config, "noise_alpha{:g}_seed{}".format(config.alpha, config.seed))
    return []


def cmd_backtest(config):
    """Backtest grid: cells, one trace per cell, per-window tables, aggregates."""
    series_list = load_inputs(config)
    windows = config.windows_or(Window.THREE_YEARS, Window.ONE_YEAR, Window.SIX_MONTHS)
    report = run_grid(
        series_list, config.model_specs, windows=windows,
        horizons=[int(h) for h in config.horizons], split_date=config.split_date,
        expanding=config.expanding, workers=config.workers)
    write_table(report.cells_frame(), config, "backtest_cells")
    for (model, series, window, horizon), trace in sorted(report.traces.items()):
        write_table(trace.to_frame(), config, os.path.join("traces", "_".join([
            safe_name(model), safe_name(series), window, "h{}".format(horizon)])))
    for window in windows:
        table = report.table(window)
        if not table.empty:
            write_table(table, config, "mape_{}".format(window))
    try:
        write_table(aggregate(report), config, "backtest_aggregate")
    except EmptyGroup as e:
        logger.warning("Aggregate table skipped: %s", e)
    errors = []
    for error in report.errors:
        errors.append(dict(error, command="backtest"))
    return errors


def cmd_report(config):
    """Run chplane, pjsd, psd and backtest into one output directory."""
    errors = []
    for command in (cmd_chplane, cmd_pjsd, cmd_psd, cmd_backtest):
        logger.info("Running %s", command.__name__)
        errors.extend(command(config))
    return errors


def write_errors(config, errors):
    """Write the machine-readable error manifest, <out>/errors.json."""
    if not os.path.isdir(config.out):
        os.makedirs(config.out)
    path = os.path.join(config.out, "errors.json")
    with open(path, "w") as f:
        json.dump(errors, f, indent=2, sort_keys=True, default=str)
        f.write("\n")
    return path

