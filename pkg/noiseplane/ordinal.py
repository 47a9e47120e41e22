"""Bandt-Pompe ordinal patterns and permutation entropy.

Each window of ``d`` samples, spaced ``tau`` apart, is mapped to the
permutation that sorts it ascending (ties broken by position), and that
permutation to its Lehmer code, a dense index in ``0..d!-1``. The identity
pattern is index 0 and indices follow the lexicographic order of
:func:`itertools.permutations`.
"""
import json
import math
import logging
import itertools
import warnings

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.stats import entropy

from .exceptions import (
    AdmissibilityViolated, SeriesTooShort, DimensionMismatch)


logger = logging.getLogger(__name__)


class OrdinalConfig(object):

    def __init__(self, d=3, tau=1, override_admissibility=False):
        """Embedding parameters.

        :param int d: Embedding dimension (pattern length), at least 2.
        :param int tau: Embedding delay, at least 1.
        :param bool override_admissibility:
            A series shorter than 5*d! normally raises
            :class:`AdmissibilityViolated`. With this flag the violation is
            only reported through :func:`warnings.warn`.
        """
        if int(d) != d or d < 2:
            raise ValueError("d should be an integer >= 2, got {!r}".format(d))
        if int(tau) != tau or tau < 1:
            raise ValueError("tau should be an integer >= 1, got {!r}".format(tau))
        self.d = int(d)
        self.tau = int(tau)
        self.override_admissibility = override_admissibility

    @property
    def n_patterns(self):
        return math.factorial(self.d)

    @property
    def span(self):  # Samples covered by one window
        return (self.d - 1) * self.tau + 1

    def check(self, length, name="series"):
        if length < self.span:
            raise SeriesTooShort(name=name, length=length, required=self.span)
        required = 5 * self.n_patterns
        if length < required:
            error = AdmissibilityViolated(length=length, d=self.d, required=required)
            if not self.override_admissibility:
                raise error
            warnings.warn(error, stacklevel=3)

    def __eq__(self, other):
        return (isinstance(other, OrdinalConfig)
            and (self.d, self.tau) == (other.d, other.tau))

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.d, self.tau))

    def __repr__(self):
        return "OrdinalConfig(d={}, tau={})".format(self.d, self.tau)


def patterns(d):
    """All d! permutations, in index order."""
    return list(itertools.permutations(range(d)))


def lehmer_index(permutations):
    """Map each row of an (m, d) array of permutations to its Lehmer code."""
    permutations = np.asarray(permutations)
    d = permutations.shape[1]
    index = np.zeros(len(permutations), dtype=np.int64)
    for i in range(d - 1):
        smaller_after = (permutations[:, i + 1:] < permutations[:, i:i + 1]).sum(axis=1)
        index += smaller_after * math.factorial(d - 1 - i)
    return index


def ordinal_indices(values, config):
    """Pattern index of every embedding window of ``values``."""
    values = np.asarray(values, dtype=float)
    windows = sliding_window_view(values, config.span)[:, ::config.tau]
    return lehmer_index(np.argsort(windows, axis=1, kind="stable"))


class OrdinalDistribution(object):
    """Counts and relative frequencies of the d! ordinal patterns.

    Zero-count patterns keep their slot, so two distributions with the same
    ``d`` always share one index space.
    """

    def __init__(self, config, counts):
        counts = np.asarray(counts, dtype=np.int64)
        if counts.shape != (config.n_patterns,):
            raise ValueError("Expected {} counts for d={}, got {}".format(
                config.n_patterns, config.d, counts.shape))
        if (counts < 0).any() or counts.sum() == 0:
            raise ValueError("Counts should be non-negative and not all zero")
        counts.setflags(write=False)
        self.config = config
        self.counts = counts
        self.probabilities = counts / counts.sum()
        self.probabilities.setflags(write=False)

    @property
    def total(self):
        return int(self.counts.sum())

    def merge(self, other):
        """Combine distributions counted over disjoint window ranges."""
        if other.config.n_patterns != self.config.n_patterns:
            raise DimensionMismatch(
                left=self.config.n_patterns, right=other.config.n_patterns)
        return OrdinalDistribution(self.config, self.counts + other.counts)

    def as_dict(self):
        """{pattern tuple: probability} for the observed patterns only."""
        return {
            pattern: float(p)
            for pattern, p in zip(patterns(self.config.d), self.probabilities)
            if p > 0}

    def to_json(self):
        return json.dumps({
            "d": self.config.d,
            "tau": self.config.tau,
            "counts": self.counts.tolist(),
            })

    @classmethod
    def from_json(cls, state):
        payload = json.loads(state)
        return cls(
            OrdinalConfig(payload["d"], payload["tau"], override_admissibility=True),
            payload["counts"])

    def __repr__(self):
        return "OrdinalDistribution({!r}, {} windows)".format(self.config, self.total)


def extract_patterns(series, config):
    # type: (TimeSeries, OrdinalConfig) -> OrdinalDistribution
    """Count the ordinal patterns of a series.

    :param series: A :class:`~noiseplane.series.TimeSeries` or a 1-D array.
    """
    values = getattr(series, "values", series)
    name = getattr(series, "name", "series")
    values = np.asarray(values, dtype=float)
    config.check(len(values), name=name)
    counts = np.bincount(
        ordinal_indices(values, config), minlength=config.n_patterns)
    logger.debug("%s: %d windows, %d of %d patterns observed",
        name, counts.sum(), np.count_nonzero(counts), config.n_patterns)
    return OrdinalDistribution(config, counts)


def permutation_entropy(dist, normalized=True):
    # type: (OrdinalDistribution, bool) -> float
    """Shannon entropy (natural log) of the pattern distribution.

    :param normalized: Divide by ln(d!) so that the result lies in [0, 1].
    """
    s = float(entropy(dist.probabilities))
    if normalized:
        return min(s / math.log(dist.config.n_patterns), 1.0)
    return s

