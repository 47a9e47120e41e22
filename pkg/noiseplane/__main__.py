"""Command line front end: ``python -m noiseplane <command> [options]``.

Exit status is 0 when every item was computed, 1 when some were not (their
errors are listed in <out>/errors.json), 2 on a usage error.
"""
import sys
import logging
import argparse

from .exceptions import NoiseplaneError, ConfigurationError
from .series import Window
from .report import (
    __version__, RunConfig, write_errors,
    cmd_chplane, cmd_pjsd, cmd_psd, cmd_noise, cmd_backtest, cmd_report)


logger = logging.getLogger(__name__)

COMMANDS = {
    "chplane": cmd_chplane,
    "pjsd": cmd_pjsd,
    "psd": cmd_psd,
    "noise": cmd_noise,
    "backtest": cmd_backtest,
    "report": cmd_report,
    }


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="JSON file of settings; flags override it")
    shared.add_argument("--input", action="append", dest="inputs", metavar="CSV",
        help="Daily price CSV, repeatable. The file name labels the series")
    shared.add_argument("--column", help="Value column (default: Close)")
    shared.add_argument("--window", action="append", dest="windows",
        choices=Window.ALL, help="Window to analyse, repeatable")
    shared.add_argument("--d", type=int, help="Embedding dimension for every window")
    shared.add_argument("--tau", type=int, help="Embedding delay (default: 1)")
    shared.add_argument("--override-admissibility", action="store_true", default=None,
        help="Warn instead of failing on series shorter than 5*d!")
    shared.add_argument("--seed", type=int,
        help="Base noise seed (default: $NOISEPLANE_SEED or 0)")
    shared.add_argument("--seeds", type=int, help="Noise realizations per reference")
    shared.add_argument("--split-date", help="Last training date (default: 2023-07-04)")
    shared.add_argument("--out", help="Output directory (default: .)")
    shared.add_argument("--format", choices=RunConfig.FORMATS)
    shared.add_argument("-v", "--verbose", action="count", default=0,
        help="-v for progress, -vv for details")

    parser = argparse.ArgumentParser(
        prog="noiseplane", description=(
            "Compare time series with colored noise on the complexity-entropy "
            "plane, and backtest naive and statistical forecasters."))
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True
    commands.add_parser("chplane", parents=[shared],
        help="Entropy and complexity of each input and noise reference")
    commands.add_parser("pjsd", parents=[shared],
        help="Distances between each input and the noise references")
    psd = commands.add_parser("psd", parents=[shared],
        help="Welch PSD and power-law exponent of each input")
    noise = commands.add_parser("noise", parents=[shared],
        help="Write one colored-noise realization")
    backtest = commands.add_parser("backtest", parents=[shared],
        help="Rolling-origin MAPE of each model, window and horizon")
    report = commands.add_parser("report", parents=[shared],
        help="chplane, pjsd, psd and backtest in one go")
    for p in (psd, report):
        p.add_argument("--segment", type=int, help="Welch segment length (default: 256)")
        p.add_argument("--overlap", type=float, help="Welch overlap fraction (default: 0.5)")
    noise.add_argument("--alpha", type=float, help="Spectral exponent (default: 2)")
    noise.add_argument("--length", type=int, help="Sample count (default: 16384)")
    for p in (backtest, report):
        p.add_argument("--models",
            help='Comma separated, e.g. "naive_seasonal,arima(2,1,1),ridge(lags=30,lambda=1.0)"')
        p.add_argument("--horizon", type=int, action="append", dest="horizons",
            help="Forecast horizon, repeatable (default: 1, 7 and 30)")
        p.add_argument("--expanding", action="store_true", default=None,
            help="Grow the training window instead of sliding it")
        p.add_argument("--workers", type=int, help="Threads evaluating the grid")
    return parser


def main(argv=None):
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    command = args.pop("command")
    verbose = args.pop("verbose")
    logging.basicConfig(
        level=logging.DEBUG if verbose > 1 else logging.INFO if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        config = RunConfig(config_file=args.pop("config"), **args)
        logger.debug("%r", config)
        errors = COMMANDS[command](config)
    except ConfigurationError as e:
        parser.error(str(e))  # Exits with status 2
    except (NoiseplaneError, IOError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        return 1
    if errors:
        logger.warning("%d item(s) failed, see %s",
            len(errors), write_errors(config, errors))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

