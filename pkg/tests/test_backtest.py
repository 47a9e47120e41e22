import logging
from unittest import mock

import numpy as np

from noiseplane.backtest import *
from noiseplane.exceptions import (
    InsufficientData, InsufficientHistory, ZeroActual, LengthMismatch, EmptyGroup)
from noiseplane.forecast import ForecasterSpec, Forecast
from noiseplane.series import TimeSeries, SplitSpec, Window, load_csv
from tests import unittest, FIXTURE


logging.basicConfig(level=logging.DEBUG)

NAIVE = ForecasterSpec(ForecasterSpec.Kind.NAIVE_SEASONAL, k=1)
DRIFT = ForecasterSpec(ForecasterSpec.Kind.NAIVE_DRIFT)


def geometric_walk(n, seed, volatility=0.02):
    steps = volatility * np.random.default_rng(seed).standard_normal(n)
    return 100.0 * np.exp(np.cumsum(steps))


def cut(values, at):
    """History of the first ``at`` samples and the rest as target."""
    whole = TimeSeries.from_values(values, name="walk")
    index = np.arange(len(values))
    return whole.select(index < at), whole.select(index >= at, min_length=0)


class TestMape(unittest.TestCase):

    def test_example(self):
        self.assertAlmostEqual(10.0, mape([110, 180], [100, 200]), delta=1e-12)
        self.assertAlmostEqual(10.0, mape([110, 90], [100, 100]), delta=1e-12)

    def test_perfect_forecast(self):
        self.assertEqual(0.0, mape([1.5, 2.5], [1.5, 2.5]))

    def test_scale_invariance(self):
        forecasts, actuals = np.array([3.0, 5.0, 8.0]), np.array([2.0, 6.0, 7.0])
        self.assertAlmostEqual(
            mape(forecasts, actuals), mape(1000 * forecasts, 1000 * actuals), delta=1e-12)

    def test_zero_actual(self):
        with self.assertRaises(ZeroActual) as context:
            mape([1, 2, 3], [1, 0, 3])
        self.assertEqual(1, context.exception.kwargs["index"])

    def test_length_mismatch(self):
        self.assertRaises(LengthMismatch, mape, [1, 2], [1, 2, 3])
        self.assertRaises(LengthMismatch, mape, [], [])


class TestRun(unittest.TestCase):

    def setUp(self):
        self.values = geometric_walk(400, seed=0)
        self.history, self.target = cut(self.values, 300)

    def test_perfect_foresight_scores_zero(self):
        values = self.values

        def oracle(spec, train, horizon, origin=None):
            return Forecast(origin, horizon, values[origin + 1:origin + 1 + horizon])

        with mock.patch("noiseplane.backtest.fit_predict", side_effect=oracle):
            trace, score = run(BacktestSpec(NAIVE, 100, 7), self.history, self.target)
        self.assertEqual(0.0, score)
        self.assertEqual(len(self.target), len(trace))

    def test_last_value_trace_is_the_lagged_target(self):
        for horizon in (1, 7, 30):
            trace, _ = run(BacktestSpec(NAIVE, 50, horizon), self.history, self.target)
            self.assertEqual(
                self.values[300 - horizon:400 - horizon].tolist(), trace.forecast.tolist())
            self.assertEqual(self.target.values.tolist(), trace.actual.tolist())
            self.assertEqual(self.target.dates.tolist(), trace.dates.tolist())

    def test_one_step_score_is_the_mean_relative_change(self):
        _, score = run(BacktestSpec(NAIVE, 50, 1), self.history, self.target)
        changes = np.abs(np.diff(self.values[299:])) / self.values[300:]
        self.assertAlmostEqual(100 * changes.mean(), score, delta=1e-9)

    def test_training_windows_slide(self):
        seen = []

        def recorder(spec, train, horizon, origin=None):
            seen.append((origin, len(train), train[-1]))
            return Forecast(origin, horizon, [train[-1]] * horizon)

        with mock.patch("noiseplane.backtest.fit_predict", side_effect=recorder):
            run(BacktestSpec(DRIFT, 60, 7), self.history, self.target)
        self.assertEqual((293, 60, self.values[293]), seen[0])
        self.assertEqual({60}, {length for _, length, _ in seen})
        self.assertEqual(293 + 99, seen[-1][0])

    def test_expanding_windows_grow(self):
        lengths = []

        def recorder(spec, train, horizon, origin=None):
            lengths.append(len(train))
            return Forecast(origin, horizon, [train[-1]] * horizon)

        with mock.patch("noiseplane.backtest.fit_predict", side_effect=recorder):
            run(BacktestSpec(DRIFT, 60, 1, expanding=True), self.history, self.target)
        self.assertEqual(list(range(60, 160)), lengths)

    def test_stride(self):
        trace, _ = run(BacktestSpec(NAIVE, 50, 1, stride=10), self.history, self.target)
        self.assertEqual(10, len(trace))
        self.assertEqual(self.target.values[::10].tolist(), trace.actual.tolist())

    def test_window_reaching_before_history(self):
        self.assertRaises(InsufficientHistory, run,
            BacktestSpec(NAIVE, 300, 7), self.history, self.target)

    def test_window_too_short_for_the_model(self):
        self.assertRaises(InsufficientData, BacktestSpec,
            ForecasterSpec.parse("ridge(lags=30)"), 20, 1)

    def test_singular_fits_fall_back_to_last_value(self):
        history, target = cut(np.full(200, 5.0), 150)
        model = ForecasterSpec(ForecasterSpec.Kind.ARIMA, p=1, d=1, q=0)
        trace, score = run(BacktestSpec(model, 50, 1), history, target)
        self.assertEqual(len(target), trace.fallbacks)
        self.assertEqual(0.0, score)

    def test_trace_frame(self):
        trace, _ = run(BacktestSpec(NAIVE, 50, 1), self.history, self.target)
        frame = trace.to_frame()
        self.assertEqual(["date", "actual", "forecast"], list(frame.columns))
        self.assertEqual("1970-10-28", frame["date"].iloc[0])


class TestHeadline(unittest.TestCase):

    def test_last_value_beats_lagged_ridge_on_random_walks(self):
        ridge = ForecasterSpec.parse("ridge(lags=30,lambda=1.0)")
        wins = 0
        for seed in range(20):
            history, target = cut(geometric_walk(1300, seed), 1120)
            _, naive_score = run(BacktestSpec(NAIVE, 1120, 1), history, target)
            _, ridge_score = run(BacktestSpec(ridge, 1120, 1), history, target)
            wins += naive_score <= ridge_score
        self.assertGreaterEqual(wins, 15)


class TestGrid(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.series = load_csv(FIXTURE)
        cls.report = run_grid([cls.series], [NAIVE, DRIFT], horizons=(1, 7), workers=2)

    def test_window_lengths(self):
        def length(window, horizon):
            return window_length(self.series, SplitSpec(window=window), horizon)[0]
        self.assertEqual(1097, length(Window.THREE_YEARS, 1))
        self.assertEqual(1091, length(Window.THREE_YEARS, 7))
        self.assertEqual(367, length(Window.ONE_YEAR, 1))
        self.assertEqual(182, length(Window.SIX_MONTHS, 30))

    def test_every_cell_is_evaluated(self):
        self.assertEqual(12, len(self.report.cells))
        self.assertEqual([], self.report.errors)
        self.assertEqual(12, len(self.report.traces))
        for trace in self.report.traces.values():
            self.assertEqual(170, len(trace))

    def test_cells_in_grid_order(self):
        keys = [BacktestReport.key(cell) for cell in self.report.cells]
        self.assertEqual(
            ("naive_seasonal(k=1)", "yahoo_sample", "3y", 1), keys[0])
        self.assertEqual(("naive_drift", "yahoo_sample", "6m", 7), keys[-1])

    def test_last_value_ignores_the_window(self):
        tables = [self.report.table(window) for window in Window.ALL[:3]]
        for table in tables[1:]:
            self.assertEqual(
                tables[0][tables[0]["model"] == NAIVE.label].values.tolist(),
                table[table["model"] == NAIVE.label].values.tolist())

    def test_table_layout(self):
        table = self.report.table(Window.ONE_YEAR)
        self.assertEqual(
            ["model", "yahoo_sample@1", "yahoo_sample@7"], list(table.columns))
        self.assertEqual(2, len(table))

    def test_json_round_trip(self):
        again = BacktestReport.from_json(self.report.to_json())
        self.assertEqual(self.report.cells, again.cells)
        key = BacktestReport.key(self.report.cells[0])
        self.assertEqual(
            self.report.traces[key].forecast.tolist(), again.traces[key].forecast.tolist())

    def test_deterministic(self):
        again = run_grid([self.series], [NAIVE, DRIFT], horizons=(1, 7), workers=1)
        self.assertEqual(self.report.to_json(), again.to_json())

    def test_split_after_the_data_is_recorded_per_cell(self):
        report = run_grid([self.series], [NAIVE], horizons=(1,), split_date="2030-01-01")
        self.assertEqual([], report.cells)
        self.assertEqual(3, len(report.errors))
        self.assertEqual({"WindowOutOfRange"}, {e["error"] for e in report.errors})

    def test_colliding_cells_are_rejected(self):
        seasonal = ForecasterSpec.parse("naive_seasonal(k=1)")
        for series, models, horizons in (
                ([self.series, self.series], [NAIVE], (1,)),
                ([self.series], [NAIVE, seasonal], (1,)),
                ([self.series], [DRIFT], (7, 7))):
            self.assertRaises(ValueError, run_grid, series, models, horizons=horizons)


class TestAggregate(unittest.TestCase):

    def cells(self, *values, **kwargs):
        return [dict({"model": "naive", "series": "s{}".format(i), "window": "3y",
            "horizon": 1, "mape": value, "fallbacks": 0}, **kwargs)
            for i, value in enumerate(values)]

    def test_mean_and_sample_deviation(self):
        table = aggregate(BacktestReport(cells=self.cells(1.0, 2.0, 3.0)))
        row = table.iloc[0]
        self.assertEqual(2.0, row["mean"])
        self.assertEqual(1.0, row["std"])
        self.assertEqual(3, row["cells"])
        self.assertEqual(u"2.000 ± 1.000", row["display"])

    def test_identical_cells_have_no_spread(self):
        table = aggregate(BacktestReport(cells=self.cells(1.5, 1.5, 1.5, 1.5)))
        self.assertEqual(0.0, table.iloc[0]["std"])

    def test_groups_by_model_and_horizon(self):
        cells = self.cells(1.0, 3.0) + self.cells(2.0, 4.0, horizon=7)
        table = aggregate(BacktestReport(cells=cells))
        self.assertEqual([1, 7], table["horizon"].tolist())
        self.assertEqual([2.0, 3.0], table["mean"].tolist())

    def test_group_of_one(self):
        cells = self.cells(1.0, 3.0) + self.cells(2.0, horizon=7)
        with self.assertRaises(EmptyGroup) as context:
            aggregate(BacktestReport(cells=cells))
        self.assertEqual(1, context.exception.kwargs["count"])

    def test_empty_report(self):
        self.assertRaises(EmptyGroup, aggregate, BacktestReport())


if __name__ == "__main__":
    unittest.main()

