import os
import unittest


FIXTURE = os.path.join(os.path.dirname(__file__), "yahoo_sample.csv")

# Directory of the full daily Yahoo Finance exports, one <TICKER>.csv each,
# covering 2020-07-03..2023-12-21. Tests needing them are skipped otherwise.
DATA_DIR = os.environ.get("NOISEPLANE_DATA")
TICKERS = ("LTC-USD", "BNB-USD", "BTC-USD", "ETH-USD", "XRP-USD")


def data_file(ticker):
    return os.path.join(DATA_DIR or "", "{}.csv".format(ticker))


def have_data():
    return bool(DATA_DIR) and all(os.path.exists(data_file(t)) for t in TICKERS)

