"""Colored-noise reference series with a prescribed 1/f^alpha spectrum."""
import logging
from collections import namedtuple

import numpy as np

from .series import TimeSeries, standardize


logger = logging.getLogger(__name__)

NoiseReference = namedtuple("NoiseReference", "label alpha")

WHITE = NoiseReference("white", 0.0)
PINK = NoiseReference("pink", 1.0)
BROWNIAN = NoiseReference("brownian", 2.0)
F_2_5 = NoiseReference("f^-2.5", 2.5)
F_3 = NoiseReference("f^-3", 3.0)

CH_REFERENCES = (WHITE, PINK, BROWNIAN, F_2_5)  # Drawn on the CH-plane
PJSD_REFERENCES = (WHITE, PINK, BROWNIAN, F_2_5, F_3)  # Columns of the distance matrix


class NoiseSpec(object):

    def __init__(self, alpha, length, seed=0):
        """
        :param float alpha: Spectral exponent, S(f) ~ 1/f^alpha. 0 is white noise.
        :param int length: Number of samples, at least 8.
        :param int seed: Seed of the numpy random generator.
        """
        if not np.isfinite(alpha) or alpha < 0:
            raise ValueError("alpha should be a finite number >= 0, got {!r}".format(alpha))
        if int(length) != length or length < 8:
            raise ValueError("length should be an integer >= 8, got {!r}".format(length))
        self.alpha = float(alpha)
        self.length = int(length)
        self.seed = int(seed)

    def __repr__(self):
        return "NoiseSpec(alpha={}, length={}, seed={})".format(
            self.alpha, self.length, self.seed)


def generate(spec):
    # type: (NoiseSpec) -> TimeSeries
    """Spectral synthesis: shape a complex Gaussian spectrum, inverse-transform.

    The amplitude of bin k >= 1 is scaled by f_k^(-alpha/2), the DC bin is
    zeroed and the Nyquist bin kept real. The output is standardized and is
    a deterministic function of (alpha, length, seed).
    """
    rng = np.random.default_rng(spec.seed)
    freqs = np.fft.rfftfreq(spec.length)
    spectrum = (rng.standard_normal(len(freqs))
        + 1j * rng.standard_normal(len(freqs)))
    spectrum[1:] *= freqs[1:] ** (-spec.alpha / 2.0)
    spectrum[0] = 0.0
    if spec.length % 2 == 0:
        spectrum[-1] = spectrum[-1].real
    samples = np.fft.irfft(spectrum, spec.length)
    logger.debug("Generated %r", spec)
    return standardize(TimeSeries.from_values(
        samples, name="noise(alpha={:g},seed={})".format(spec.alpha, spec.seed)))


def brownian_by_integration(length, seed=0):
    # type: (int, int) -> TimeSeries
    """A random walk: cumulative sum of i.i.d. standard Gaussian steps, standardized."""
    if int(length) != length or length < 8:
        raise ValueError("length should be an integer >= 8, got {!r}".format(length))
    steps = np.random.default_rng(seed).standard_normal(int(length))
    return standardize(TimeSeries.from_values(
        np.cumsum(steps), name="random_walk(seed={})".format(seed)))


def references(length, refs=CH_REFERENCES, seeds=range(10)):
    """Yield (reference, seed, series) for every reference and seed."""
    for ref in refs:
        for seed in seeds:
            yield ref, seed, generate(NoiseSpec(ref.alpha, length, seed))

