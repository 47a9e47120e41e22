"""Power spectral density estimation and power-law exponent fitting."""
import json
import logging

import numpy as np
import pandas as pd
from scipy import signal, stats

from .exceptions import SeriesTooShort, BandTooNarrow


logger = logging.getLogger(__name__)

DEFAULT_SEGMENT = 256
DEFAULT_OVERLAP = 0.5
DEFAULT_BAND_TOP = 0.25
MIN_BAND_POINTS = 8


class PsdEstimate(object):
    """One-sided PSD over positive normalized frequencies (cycles/sample)."""

    def __init__(self, freqs, power, segment, overlap, window="hann", detrend="linear"):
        freqs = np.asarray(freqs, dtype=float)
        power = np.asarray(power, dtype=float)
        if freqs.shape != power.shape:
            raise ValueError("freqs and power should have the same shape")
        if (freqs <= 0).any() or (np.diff(freqs) <= 0).any() or (power < 0).any():
            raise ValueError(
                "freqs should be positive and increasing, power non-negative")
        self.freqs = freqs
        self.power = power
        self.segment = segment
        self.overlap = overlap
        self.window = window
        self.detrend = detrend

    def default_band(self):
        return 4.0 / self.segment, DEFAULT_BAND_TOP

    def to_frame(self):
        return pd.DataFrame({"freq": self.freqs, "power": self.power})


class PowerLawFit(object):

    def __init__(self, alpha, intercept, r2, band):
        self.alpha = alpha
        self.intercept = intercept  # ln(power) at unit frequency
        self.r2 = r2
        self.band = tuple(band)

    def as_dict(self):
        return {
            "alpha": self.alpha, "intercept": self.intercept, "r2": self.r2,
            "band": list(self.band)}

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True)

    def __repr__(self):
        return "PowerLawFit(alpha={:.4f}, r2={:.4f}, band={})".format(
            self.alpha, self.r2, self.band)


def welch_psd(series, segment=DEFAULT_SEGMENT, overlap=DEFAULT_OVERLAP):
    # type: (TimeSeries, int, float) -> PsdEstimate
    """Welch's averaged periodogram with a Hann window.

    Each segment is linearly detrended before windowing. The DC bin is
    dropped. With density scaling, the sum of power times bin width
    approximates the variance of the signal.
    """
    values = np.asarray(getattr(series, "values", series), dtype=float)
    if not 0 <= overlap <= 0.9:
        raise ValueError("overlap should be within [0, 0.9], got {}".format(overlap))
    if segment < 16 or len(values) < segment:
        raise SeriesTooShort(
            name=getattr(series, "name", "series"), length=len(values),
            required=max(segment, 16))
    freqs, power = signal.welch(
        values, fs=1.0, window="hann", nperseg=segment,
        noverlap=int(round(overlap * segment)), detrend="linear",
        return_onesided=True, scaling="density")
    logger.debug("Welch PSD of %d samples: segment=%d, overlap=%s",
        len(values), segment, overlap)
    return PsdEstimate(freqs[1:], power[1:], segment, overlap)


def fit_power_law(psd, band=None):
    # type: (PsdEstimate, tuple) -> PowerLawFit
    """Least squares of ln(power) on ln(freq) inside the band; alpha = -slope.

    :param band: (f_lo, f_hi) in cycles/sample.
        Defaults to [4/segment, 0.25], skipping the leakage-dominated lowest bins.
    """
    f_lo, f_hi = band or psd.default_band()
    if not f_lo < f_hi:
        raise ValueError("Band should satisfy f_lo < f_hi, got {}".format((f_lo, f_hi)))
    inside = (psd.freqs >= f_lo) & (psd.freqs <= f_hi) & (psd.power > 0)
    if inside.sum() < MIN_BAND_POINTS:
        raise BandTooNarrow(
            count=int(inside.sum()), f_lo=f_lo, f_hi=f_hi, required=MIN_BAND_POINTS)
    result = stats.linregress(np.log(psd.freqs[inside]), np.log(psd.power[inside]))
    fit = PowerLawFit(
        alpha=-float(result.slope), intercept=float(result.intercept),
        r2=min(float(result.rvalue) ** 2, 1.0), band=(f_lo, f_hi))
    logger.debug("%r", fit)
    return fit

