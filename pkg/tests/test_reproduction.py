"""Reference figures recomputed from the daily Yahoo Finance exports.

Set NOISEPLANE_DATA to a directory holding LTC-USD.csv, BNB-USD.csv,
BTC-USD.csv, ETH-USD.csv and XRP-USD.csv covering 2020-07-03..2023-12-21.
"""
import logging

import numpy as np

from noiseplane.series import TimeSeries, load_csv
from noiseplane.ordinal import OrdinalConfig
from noiseplane.complexity import noise_reference_distances
from noiseplane.noise import PJSD_REFERENCES
from noiseplane.spectral import welch_psd, fit_power_law
from noiseplane.forecast import ForecasterSpec
from noiseplane.backtest import run_grid, aggregate
from tests import unittest, TICKERS, data_file, have_data


logger = logging.getLogger(__name__)
logging.basicConfig(level=logging.INFO)

LABELS = [ref.label for ref in PJSD_REFERENCES]

# Distance of each series to white, pink, Brownian, f^-2.5 and f^-3 noise
DISTANCES = {
    "LTC-USD": [0.368, 0.215, 0.198, 0.334, 0.539],
    "BNB-USD": [0.358, 0.212, 0.209, 0.353, 0.552],
    "BTC-USD": [0.355, 0.211, 0.194, 0.338, 0.530],
    "ETH-USD": [0.356, 0.202, 0.198, 0.339, 0.536],
    "XRP-USD": [0.351, 0.214, 0.230, 0.374, 0.566],
    }

# MAPE at horizons 1, 7 and 30 per series; last value is window independent
LAST_VALUE = {
    "LTC-USD": [1.911, 5.298, 12.436],
    "BNB-USD": [1.419, 3.759, 7.049],
    "BTC-USD": [1.296, 3.619, 11.307],
    "ETH-USD": [1.448, 3.886, 9.011],
    "XRP-USD": [2.105, 6.517, 16.276],
    }
DRIFT = {
    "3y": {
        "LTC-USD": [1.914, 5.361, 12.562],
        "BNB-USD": [1.415, 3.808, 7.815],
        "BTC-USD": [1.298, 3.617, 11.012],
        "ETH-USD": [1.452, 3.946, 9.203],
        "XRP-USD": [2.110, 6.600, 16.589],
        },
    "1y": {
        "LTC-USD": [1.919, 5.458, 12.995],
        "BNB-USD": [1.420, 3.779, 7.277],
        "BTC-USD": [1.299, 3.627, 11.077],
        "ETH-USD": [1.455, 3.967, 9.390],
        "XRP-USD": [2.117, 6.703, 17.179],
        },
    "6m": {
        "LTC-USD": [1.922, 5.454, 13.676],
        "BNB-USD": [1.425, 3.803, 7.433],
        "BTC-USD": [1.315, 3.787, 11.247],
        "ETH-USD": [1.463, 4.062, 9.966],
        "XRP-USD": [2.130, 6.881, 18.209],
        },
    }
# (mean, std) over series and windows, at horizons 1, 7 and 30
AGGREGATE = {
    "naive_seasonal(k=1)": [(1.636, 0.325), (4.616, 1.166), (11.216, 3.251)],
    "naive_drift": [(1.644, 0.328), (4.723, 1.227), (11.709, 3.496)],
    }
HORIZONS = (1, 7, 30)
TOLERANCE = 0.05


@unittest.skipUnless(have_data(), "NOISEPLANE_DATA does not hold the Yahoo exports")
class TestReferenceFigures(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.series = [load_csv(data_file(ticker)) for ticker in TICKERS]
        models = [ForecasterSpec.parse("naive_seasonal"), ForecasterSpec.parse("naive_drift")]
        cls.report = run_grid(cls.series, models, horizons=HORIZONS)
        cls.cells = {
            (c["model"], c["series"], c["window"], c["horizon"]): c["mape"]
            for c in cls.report.cells}

    def test_distances_to_noise(self):
        config = OrdinalConfig(d=5)
        for series in self.series:
            distances = noise_reference_distances(series, config, seeds=range(10))
            for label, expected in zip(LABELS, DISTANCES[series.name]):
                self.assertAlmostEqual(expected, distances[label], delta=TOLERANCE,
                    msg="{} vs {}".format(series.name, label))
            closest = min(LABELS, key=distances.get)
            self.assertEqual(
                "pink" if series.name == "XRP-USD" else "brownian", closest, series.name)

    def test_last_value_mape(self):
        self.assertEqual([], self.report.errors)
        for window in ("3y", "1y", "6m"):
            for name, expected in LAST_VALUE.items():
                for horizon, value in zip(HORIZONS, expected):
                    self.assertAlmostEqual(value,
                        self.cells["naive_seasonal(k=1)", name, window, horizon],
                        delta=TOLERANCE, msg=(name, window, horizon))

    def test_drift_mape(self):
        for window, rows in DRIFT.items():
            for name, expected in rows.items():
                for horizon, value in zip(HORIZONS, expected):
                    self.assertAlmostEqual(value,
                        self.cells["naive_drift", name, window, horizon],
                        delta=TOLERANCE, msg=(name, window, horizon))

    def test_aggregates(self):
        table = aggregate(self.report)
        for model, expected in AGGREGATE.items():
            for horizon, (mean, std) in zip(HORIZONS, expected):
                row = table[(table["model"] == model) & (table["horizon"] == horizon)]
                self.assertAlmostEqual(mean, row["mean"].iloc[0], delta=TOLERANCE)
                self.assertAlmostEqual(std, row["std"].iloc[0], delta=TOLERANCE)

    def test_error_grows_with_horizon(self):
        for (model, name, window, horizon), value in self.cells.items():
            if horizon > 1:
                self.assertLess(
                    self.cells[model, name, window, 1], value, (model, name, window))

    def test_spectra_are_brownian_like(self):
        for series in self.series:
            alpha = fit_power_law(welch_psd(series)).alpha
            self.assertTrue(1.4 <= alpha <= 2.6, "{}: {}".format(series.name, alpha))


class TestRandomWalkDistances(unittest.TestCase):

    def test_random_walk_is_closest_to_brownian_noise(self):
        config = OrdinalConfig(d=5)
        brownian = 0
        for seed in range(20):
            walk = TimeSeries.from_values(
                np.cumsum(np.random.default_rng(1000 + seed).standard_normal(4096)))
            distances = noise_reference_distances(walk, config, seeds=range(5))
            brownian += min(LABELS, key=distances.get) == "brownian"
        self.assertGreaterEqual(brownian, 16)


if __name__ == "__main__":
    unittest.main()

