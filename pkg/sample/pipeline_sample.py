"""
The configuration file would look like this:

{
    "inputs": ["LTC-USD.csv", "BTC-USD.csv"],
        // Daily exports from Yahoo Finance, or any CSV with Date and Close columns
    "split_date": "2023-07-04",
    "models": "naive_seasonal,naive_drift,holt,arima(2,1,1)",
    "horizons": [1, 7, 30]
}

You can then run this sample with a JSON configuration file:

    python pipeline_sample.py parameters.json
"""

import sys  # For simplicity, we'll read config file from 1st CLI param sys.argv[1]
import json
import logging

import noiseplane


# Optional logging
# logging.basicConfig(level=logging.DEBUG)  # Enable DEBUG log for entire script
# logging.getLogger("noiseplane.forecast").setLevel(logging.INFO)  # Quieter fits

config = json.load(open(sys.argv[1]))
series_list = [noiseplane.load_csv(path) for path in config["inputs"]]

# Where does each series sit, compared with colored noise?
ordinal = noiseplane.OrdinalConfig(d=5)
for series in series_list:
    point = noiseplane.statistical_complexity(
        noiseplane.extract_patterns(series, ordinal))
    fit = noiseplane.fit_power_law(noiseplane.welch_psd(series))
    print("%s: entropy %.3f, complexity %.3f, spectral exponent %.2f" % (
        series.name, point.h, point.c, fit.alpha))

# Then how well do simple forecasters do on it?
report = noiseplane.run_grid(
    series_list,
    noiseplane.ForecasterSpec.parse_list(config.get("models", "naive_seasonal")),
    horizons=config.get("horizons", [1, 7, 30]),
    split_date=config.get("split_date", "2023-07-04"),
    )
for error in report.errors:
    print("Skipped %(model)s on %(series)s (%(window)s, h=%(horizon)s): %(message)s"
        % error)
try:
    print(noiseplane.aggregate(report)[["model", "horizon", "display"]].to_string(
        index=False))
except noiseplane.EmptyGroup as e:
    print(e)  # A single series and window has nothing to average over
    print(report.cells_frame().to_string(index=False))
