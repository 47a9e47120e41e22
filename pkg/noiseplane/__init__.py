#------------------------------------------------------------------------------
#
# This code is licensed under the MIT License.
#
#------------------------------------------------------------------------------

from .report import __version__, RunConfig
from .exceptions import *
from .series import TimeSeries, SplitSpec, Window, load_csv, split, standardize
from .ordinal import (
    OrdinalConfig, OrdinalDistribution, extract_patterns, permutation_entropy)
from .complexity import (
    CHPoint, BoundaryCurve, js_divergence, statistical_complexity, pjsd,
    ch_boundaries, ch_bounds_at, within_bounds)
from .noise import NoiseSpec, generate, brownian_by_integration
from .spectral import PsdEstimate, PowerLawFit, welch_psd, fit_power_law
from .forecast import ForecasterSpec, Forecast, fit_predict
from .backtest import (
    BacktestSpec, BacktestReport, Trace, run, mape, aggregate, run_grid)

