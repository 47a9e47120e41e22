"""Jensen-Shannon divergence, statistical complexity and the CH-plane.

All logarithms are natural. The statistical complexity is the intensive
form C = Q_J[P, P_e] * H_S[P], with Q_J the Jensen-Shannon divergence to the
uniform distribution P_e divided by its largest attainable value, so both
coordinates of a :class:`CHPoint` lie in [0, 1].
"""
import math
import logging
from collections import namedtuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import xlogy
from scipy.stats import entropy

from .exceptions import DimensionMismatch
from .ordinal import extract_patterns
from . import noise


logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


class CHPoint(namedtuple("CHPoint", "h c")):
    """(normalized permutation entropy, statistical complexity)"""
    __slots__ = ()

    def __new__(cls, h, c):
        h, c = float(h), float(c)
        if not (0.0 <= h <= 1.0 and 0.0 <= c <= 1.0):
            raise ValueError("CHPoint coordinates should be in [0, 1], got ({}, {})"
                .format(h, c))
        return super(CHPoint, cls).__new__(cls, h, c)


class BoundaryCurve(object):
    MIN = "min"
    MAX = "max"

    def __init__(self, kind, points):
        self.kind = kind
        self.points = np.asarray(points, dtype=float)  # Shape (n, 2), sorted by h

    @property
    def h(self):
        return self.points[:, 0]

    @property
    def c(self):
        return self.points[:, 1]

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return (CHPoint(h, c) for h, c in self.points)


def _probabilities(dist):
    # Accepts an OrdinalDistribution or a bare probability vector
    return np.asarray(getattr(dist, "probabilities", dist), dtype=float)


def _pair(p, q):
    p, q = _probabilities(p), _probabilities(q)
    if p.shape != q.shape:
        raise DimensionMismatch(left=len(p), right=len(q))
    return p, q


def _js(p, q):
    # Written so that swapping p and q yields the bit-identical result
    divergence = float(entropy((p + q) / 2)) - (float(entropy(p)) + float(entropy(q))) / 2
    return max(divergence, 0.0)


def js_divergence(p, q):
    # type: (OrdinalDistribution, OrdinalDistribution) -> float
    """D_JS = S[(P+Q)/2] - S[P]/2 - S[Q]/2, in [0, ln 2]."""
    return _js(*_pair(p, q))


def js_max(n):
    """Largest D_JS between a distribution over n slots and the uniform one."""
    return -0.5 * ((n + 1.0) / n * math.log(n + 1.0)
        - 2.0 * math.log(2.0 * n) + math.log(n))


def statistical_complexity(p):
    # type: (OrdinalDistribution) -> CHPoint
    """Place a distribution on the CH-plane."""
    p = _probabilities(p)
    n = len(p)
    h = min(float(entropy(p)) / math.log(n), 1.0)
    q_j = _js(p, np.full(n, 1.0 / n)) / js_max(n)
    return CHPoint(h, min(max(q_j * h, 0.0), 1.0))


def pjsd(p, q):
    # type: (OrdinalDistribution, OrdinalDistribution) -> float
    """Permutation Jensen-Shannon distance sqrt(D_JS / ln 2), a metric in [0, 1]."""
    return min(math.sqrt(_js(*_pair(p, q)) / LN2), 1.0)


# The boundaries of the CH-plane are traced by two families of distributions.
# Each family has a few groups of equal probabilities, so H and C are
# evaluated from (value, multiplicity) pairs rather than from d!-long vectors.

def _grouped(groups, n):
    # groups: [(values, multiplicity), ...]; values may be arrays of one shape
    log_n = math.log(n)
    s = sum(-m * xlogy(v, v) for v, m in groups)
    s_mix = sum(-m * xlogy((v + 1.0 / n) / 2, (v + 1.0 / n) / 2) for v, m in groups)
    h = s / log_n
    c = (s_mix - s / 2 - log_n / 2) / js_max(n) * h
    return np.clip(h, 0.0, 1.0), np.clip(c, 0.0, 1.0)


def _min_family(p, n):
    # One component p in [1/n, 1], the other n-1 share the rest
    return _grouped([(p, 1), ((1 - p) / (n - 1), n - 1)], n)


def _max_family(p, n, k):
    # k zeros, one component p in [0, 1/(n-k)], the other n-k-1 share the rest
    rest = n - k - 1
    return _grouped([(p, 1), ((1 - p) / rest, rest), (np.zeros_like(p), k)], n)


def ch_boundaries(d, resolution=64):
    # type: (int, int) -> (BoundaryCurve, BoundaryCurve)
    """Sample the lower and upper boundaries of the CH-plane for dimension d.

    The lower curve is sampled at ``resolution`` points. The upper curve
    consists of one piece per number of zeroed components, each sampled at
    ``resolution`` points. Samples are denser near the uniform end, where the
    two curves approach each other.
    """
    if d < 2 or resolution < 16:
        raise ValueError("Expecting d >= 2 and resolution >= 16")
    n = math.factorial(d)
    s = np.linspace(0.0, 1.0, resolution)
    lower = np.column_stack(_min_family(1.0 / n + (1 - 1.0 / n) * (1 - s) ** 2, n))
    pieces = []
    for k in range(n - 2, -1, -1):  # Ascending entropy
        p = (1.0 - (1 - s) ** 2) / (n - k)
        pieces.append(np.column_stack(_max_family(p, n, k)))
    upper = np.concatenate(pieces)
    lower = lower[np.argsort(lower[:, 0], kind="stable")]
    upper = upper[np.argsort(upper[:, 0], kind="stable")]
    return BoundaryCurve(BoundaryCurve.MIN, lower), BoundaryCurve(BoundaryCurve.MAX, upper)


def _root(f, a, b):
    # Rounding at a joint between two pieces can remove the sign change
    fa, fb = f(a), f(b)
    if fa * fb > 0:
        return a if abs(fa) < abs(fb) else b
    return brentq(f, a, b, xtol=1e-15)


def ch_bounds_at(h, d):
    """Exact (c_min, c_max) of the CH-plane at entropy h, by root finding."""
    n = math.factorial(d)
    if h <= 0.0 or h >= 1.0:
        return 0.0, 0.0
    c_min = _min_family(_root(
        lambda p: _min_family(p, n)[0] - h, 1.0 / n, 1.0), n)[1]
    # The piece with k zeros spans entropies ln(n-k-1)/ln n .. ln(n-k)/ln n
    k = min(max(n - int(math.ceil(n ** h)), 0), n - 2)
    c_max = _max_family(_root(
        lambda p: _max_family(p, n, k)[0] - h, 0.0, 1.0 / (n - k)), n, k)[1]
    return float(c_min), float(c_max)


def within_bounds(point, d, slack=1e-6):
    c_min, c_max = ch_bounds_at(point.h, d)
    return c_min - slack <= point.c <= c_max + slack


def noise_reference_points(length, config, refs=noise.CH_REFERENCES, seeds=range(10)):
    """{label: CHPoint} of each noise reference, averaged over seeds."""
    sums = {}
    for ref, seed, series in noise.references(length, refs, seeds):
        point = statistical_complexity(extract_patterns(series, config))
        h, c, count = sums.get(ref.label, (0.0, 0.0, 0))
        sums[ref.label] = (h + point.h, c + point.c, count + 1)
    return {
        label: CHPoint(h / count, c / count) for label, (h, c, count) in sums.items()}


def noise_reference_distances(series, config, refs=noise.PJSD_REFERENCES, seeds=range(10)):
    """{label: mean PJSD} between a series and each noise reference.

    Every noise realization has the same length as ``series``.
    """
    dist = extract_patterns(series, config)
    distances = {}
    for ref, seed, reference in noise.references(len(series), refs, seeds):
        distances.setdefault(ref.label, []).append(
            pjsd(dist, extract_patterns(reference, config)))
    logger.debug("%s: distances %s", getattr(series, "name", "series"), distances)
    return {label: float(np.mean(values)) for label, values in distances.items()}

