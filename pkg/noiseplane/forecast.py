"""Point forecasters sharing one contract: fit on a window, forecast h steps.

Every forecaster is a pure function of (spec, training values, horizon).
Parameters that are left unset are estimated from the training window by
minimizing in-sample one-step squared error (smoothing) or AICc (ARIMA).
"""
import re
import json
import math
import logging

import numpy as np
from scipy import signal, optimize
from statsmodels.tsa.holtwinters import SimpleExpSmoothing, Holt
from statsmodels.tsa.arima.estimators.hannan_rissanen import hannan_rissanen

from .exceptions import InsufficientData, SingularFit


logger = logging.getLogger(__name__)


class ForecasterSpec(object):

    class Kind:
        NAIVE_DRIFT = "naive_drift"
        NAIVE_SEASONAL = "naive_seasonal"
        SES = "ses"
        HOLT = "holt"
        ARIMA = "arima"
        AUTO_ARIMA = "auto_arima"
        LAGGED_RIDGE = "ridge"

    ALIASES = {
        "drift": Kind.NAIVE_DRIFT,
        "naivedrift": Kind.NAIVE_DRIFT,
        "naive": Kind.NAIVE_SEASONAL,
        "seasonal": Kind.NAIVE_SEASONAL,
        "naiveseasonal": Kind.NAIVE_SEASONAL,
        "autoarima": Kind.AUTO_ARIMA,
        "lagged_ridge": Kind.LAGGED_RIDGE,
        "laggedridge": Kind.LAGGED_RIDGE,
        }
    DEFAULTS = {  # Also the order of positional parameters
        Kind.NAIVE_DRIFT: (),
        Kind.NAIVE_SEASONAL: (("k", 1),),
        Kind.SES: (("alpha", None),),
        Kind.HOLT: (("alpha", None), ("beta", None)),
        Kind.ARIMA: (("p", 1), ("d", 1), ("q", 0)),
        Kind.AUTO_ARIMA: (),
        Kind.LAGGED_RIDGE: (("lags", 30), ("lambda", 1.0)),
        }

    def __init__(self, kind, **params):
        """
        :param str kind: One of the :class:`ForecasterSpec.Kind` values.
        :param params: Kind-specific parameters.

            * naive_seasonal: ``k``, the season length (default 1).
            * ses: ``alpha``; holt: ``alpha`` and ``beta``.
              Unset coefficients are optimized on the training window.
            * arima: ``p``, ``d``, ``q``.
            * ridge: ``lags`` and ``lambda`` (the penalty).
        """
        kind = self.ALIASES.get(kind, kind)
        if kind not in self.DEFAULTS:
            raise ValueError("Unknown forecaster {!r}, expecting one of {}".format(
                kind, sorted(self.DEFAULTS)))
        defaults = dict(self.DEFAULTS[kind])
        unknown = set(params) - set(defaults)
        if unknown:
            raise ValueError("{} does not accept parameter(s) {}".format(
                kind, sorted(unknown)))
        self.kind = kind
        self.params = dict(defaults, **params)
        self._validate()

    def _validate(self):
        p = self.params
        if self.kind == self.Kind.NAIVE_SEASONAL:
            p["k"] = _integer(p["k"], "k", 1, None)
        for name in ("alpha", "beta"):
            if p.get(name) is not None:
                p[name] = float(p[name])
                if not 0 <= p[name] <= 1:
                    raise ValueError(
                        "{} should be within [0, 1], got {}".format(name, p[name]))
        if self.kind == self.Kind.ARIMA:
            p["p"] = _integer(p["p"], "p", 0, 5)
            p["d"] = _integer(p["d"], "d", 0, 2)
            p["q"] = _integer(p["q"], "q", 0, 5)
        if self.kind == self.Kind.LAGGED_RIDGE:
            p["lags"] = _integer(p["lags"], "lags", 1, None)
            p["lambda"] = float(p["lambda"])
            if not p["lambda"] >= 0:
                raise ValueError("lambda should be >= 0, got {}".format(p["lambda"]))

    @property
    def label(self):
        """A canonical name which :meth:`parse` accepts, e.g. ``arima(2,1,1)``."""
        if self.kind == self.Kind.ARIMA:
            return "arima({p},{d},{q})".format(**self.params)
        pairs = ["{}={:g}".format(name, self.params[name])
            for name, _ in self.DEFAULTS[self.kind] if self.params[name] is not None]
        return "{}({})".format(self.kind, ",".join(pairs)) if pairs else self.kind

    @property
    def min_length(self):
        p = self.params
        return {
            self.Kind.NAIVE_SEASONAL: max(2, p.get("k", 1)),
            self.Kind.HOLT: 3,
            self.Kind.ARIMA: p.get("p", 0) + p.get("d", 0) + p.get("q", 0) + 2,
            self.Kind.AUTO_ARIMA: 4,
            self.Kind.LAGGED_RIDGE: p.get("lags", 0) + 2,
            }.get(self.kind, 2)

    @classmethod
    def parse(cls, text):
        """Parse one model such as ``holt``, ``arima(2,1,1)`` or
        ``ridge(lags=30,lambda=1.0)``. Positional and keyword forms mix freely.
        """
        matched = re.match(r"^\s*([A-Za-z_]+)\s*(?:\((.*)\))?\s*$", text)
        if not matched:
            raise ValueError("Can not parse model {!r}".format(text))
        kind = matched.group(1).lower()
        kind = cls.ALIASES.get(kind, kind)
        if kind not in cls.DEFAULTS:
            raise ValueError("Unknown forecaster {!r}, expecting one of {}".format(
                kind, sorted(cls.DEFAULTS)))
        names = [name for name, _ in cls.DEFAULTS[kind]]
        params = {}
        arguments = [a.strip() for a in (matched.group(2) or "").split(",") if a.strip()]
        for position, argument in enumerate(arguments):
            if "=" in argument:
                name, value = (s.strip() for s in argument.split("=", 1))
            elif position < len(names):
                name, value = names[position], argument
            else:
                raise ValueError("Too many arguments in {!r}".format(text))
            try:
                params[name.lower()] = float(value)
            except ValueError:
                raise ValueError("Parameter {} of {!r} is not a number".format(
                    name, text))
        return cls(kind, **params)

    @classmethod
    def parse_list(cls, text):
        """Parse a comma-separated model list; commas inside parentheses bind."""
        return [cls.parse(item) for item in re.findall(r"[^,()\s][^,(]*(?:\([^)]*\))?", text)]

    def as_dict(self):
        return {"kind": self.kind, "params": dict(self.params)}

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, state):
        payload = json.loads(state) if isinstance(state, str) else state
        return cls(payload["kind"], **payload.get("params", {}))

    def __eq__(self, other):
        return isinstance(other, ForecasterSpec) and self.as_dict() == other.as_dict()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.label)

    def __repr__(self):
        return "ForecasterSpec({})".format(self.label)


def _integer(value, name, lowest, highest):
    if value is None or int(value) != value:
        raise ValueError("{} should be an integer, got {!r}".format(name, value))
    value = int(value)
    if value < lowest or (highest is not None and value > highest):
        raise ValueError("{} should be within [{}, {}], got {}".format(
            name, lowest, "inf" if highest is None else highest, value))
    return value


class Forecast(object):

    def __init__(self, origin, horizon, values, fitted=None):
        """
        :param int origin: Index of the last training point within its series.
        :param int horizon: Number of steps forecast, at least 1.
        :param values: The ``horizon`` predicted values.
        :param dict fitted: Fitted parameters of the model, for inspection.
        """
        values = np.asarray(values, dtype=float)
        if horizon < 1 or values.shape != (horizon,):
            raise ValueError("Expecting {} forecast values, got shape {}".format(
                horizon, values.shape))
        if not np.all(np.isfinite(values)):
            raise ValueError("Forecast values should be finite")
        self.origin = origin
        self.horizon = horizon
        self.values = values
        self.fitted = fitted or {}

    def __repr__(self):
        return "Forecast(origin={}, horizon={})".format(self.origin, self.horizon)


# Exponential smoothing; the first value seeds the level, the rest are smoothed

def _ses(y, horizon, alpha=None):
    model = SimpleExpSmoothing(y[1:], initialization_method="known", initial_level=y[0])

    def fit(a):
        return model.fit(smoothing_level=a, optimized=False)

    if alpha is None:
        grid = np.linspace(0.0, 1.0, 101)
        sse = [fit(a).sse for a in grid]
        alpha = float(grid[int(np.argmin(sse))])
    return np.asarray(fit(alpha).forecast(horizon)), {"alpha": alpha}


def _holt(y, horizon, alpha=None, beta=None):
    # l_1 = y_1 and b_1 = y_2 - y_1
    model = Holt(y[1:], initialization_method="known",
        initial_level=y[0], initial_trend=y[1] - y[0])
    free = [name for name, value in (("alpha", alpha), ("beta", beta)) if value is None]
    scale = float(np.sum(np.diff(y) ** 2)) or 1.0

    def unpack(x):
        values = dict(zip(free, np.clip(x, 0.0, 1.0)))
        return (float(alpha if alpha is not None else values["alpha"]),
            float(beta if beta is not None else values["beta"]))

    def fit(x):
        a, b = unpack(x)
        return model.fit(smoothing_level=a, smoothing_trend=b, optimized=False)

    def sse(x):
        return float(fit(x).sse) / scale

    if free:
        grid = np.linspace(0.0, 1.0, 11)
        starts = [np.array(x) for x in np.stack(
            np.meshgrid(*[grid] * len(free), indexing="ij"), -1).reshape(-1, len(free))]
        start = min(starts, key=sse)  # First minimum in grid order
        result = optimize.minimize(
            sse, start, method="Nelder-Mead", bounds=[(0.0, 1.0)] * len(free),
            options={"xatol": 1e-6, "fatol": 1e-10})
        best = result.x if result.fun <= sse(start) else start
    else:
        best = []
    alpha, beta = unpack(best)
    return np.asarray(fit(best).forecast(horizon)), {"alpha": alpha, "beta": beta}


# ARIMA by Hannan-Rissanen regression, scored by conditional sum of squares

def _lagged(x, lags, first):
    """Rows t = first..len(x)-1 of the matrix [x_{t-1}, ..., x_{t-lags}]."""
    return np.column_stack(
        [x[first - i:len(x) - i] for i in range(1, lags + 1)]
        ) if lags else np.empty((len(x) - first, 0))


def _long_ar_order(n, p, q):
    order = max(int(math.log(n) ** 2), 2 * max(p, q))
    return min(order, (n - 1) // 2, n - p - 2 * q - 1)


def _css_residuals(w, ar, ma):
    # e_t = w_t - sum(ar_i w_{t-i}) - sum(ma_j e_{t-j}), conditioned on e_{<p} = 0
    p, q = len(ar), len(ma)
    if not p and not q:
        return w.copy()
    b = np.concatenate(([1.0], -ar))
    a = np.concatenate(([1.0], ma))
    zi = signal.lfiltic(b, a, np.zeros(q), w[:p][::-1] if p else None)
    residuals = np.zeros_like(w)
    residuals[p:] = signal.lfilter(b, a, w[p:], zi=zi)[0]
    return residuals


def _aicc(sse, n, k):
    with np.errstate(divide="ignore", invalid="ignore"):
        value = n * np.log(sse / n) + 2 * k
        value = value + 2.0 * k * (k + 1) / (n - k - 1) if n - k - 1 > 0 else np.inf
    return float(value) if np.isfinite(value) else np.inf


def _arma_fit(w, p, q):
    """Estimate (ar, ma, residuals) of a zero-mean ARMA(p, q) on w."""
    n = len(w)
    ar, ma = np.zeros(0), np.zeros(0)
    if p or q:
        order = None
        first = p
        if q:
            order = _long_ar_order(n, p, q)
            if order < 1:
                raise SingularFit(
                    model="arima", reason="{} points are too few to proxy innovations"
                    .format(n))
            if np.ptp(w) == 0:
                raise SingularFit(
                    model="arima", reason="innovations of a constant series are all zero")
            first = max(p, order + q)
        if n - first <= p + q:
            raise SingularFit(
                model="arima", reason="{} regression rows for {} coefficients"
                .format(n - first, p + q))
        if p and np.linalg.matrix_rank(_lagged(w, p, first)) < p:
            raise SingularFit(model="arima", reason="ARMA({},{}) regression is singular"
                .format(p, q))
        try:
            params, _ = hannan_rissanen(
                w, ar_order=p, ma_order=q, demean=False,
                initial_ar_order=order, unbiased=False)
        except (ValueError, np.linalg.LinAlgError) as e:
            raise SingularFit(model="arima", reason="ARMA({},{}): {}".format(p, q, e))
        ar = np.asarray(params.ar_params, dtype=float)
        ma = np.asarray(params.ma_params, dtype=float)
    residuals = _css_residuals(w, ar, ma)
    if not np.all(np.isfinite(residuals)):
        raise SingularFit(model="arima", reason="ARMA({},{}) filter diverged".format(p, q))
    return ar, ma, residuals


def _prepare(y, d):
    w = np.diff(y, n=d) if d else y - y.mean()
    return w, (0.0 if d else float(y.mean()))


def _arima_score(w, p, d, q):
    ar, ma, residuals = _arma_fit(w, p, q)
    effective = residuals[p:]
    k = p + q + 1 + (0 if d else 1)
    return ar, ma, residuals, _aicc(float(np.sum(effective ** 2)), len(effective), k)


def _arima_forecast(y, w, mean, d, ar, ma, residuals, horizon):
    p, q = len(ar), len(ma)
    history = list(w)
    shocks = list(residuals)
    for _ in range(horizon):
        value = sum(ar[i] * history[-1 - i] for i in range(p))
        value += sum(ma[j] * shocks[-1 - j] for j in range(q))
        history.append(value)
        shocks.append(0.0)
    forecasts = np.asarray(history[len(w):], dtype=float)
    for level in range(d - 1, -1, -1):  # Integrate back one difference at a time
        forecasts = np.diff(y, n=level)[-1] + np.cumsum(forecasts)
    forecasts = forecasts + mean
    if not np.all(np.isfinite(forecasts)):
        raise SingularFit(model="arima", reason="forecast diverged")
    return forecasts


def _arima(y, horizon, p, d, q):
    w, mean = _prepare(y, d)
    ar, ma, residuals, aicc = _arima_score(w, p, d, q)
    fitted = {"order": [p, d, q], "ar": ar.tolist(), "ma": ma.tolist(),
        "aicc": aicc, "mean": mean}
    return _arima_forecast(y, w, mean, d, ar, ma, residuals, horizon), fitted


def _auto_arima(y, horizon, max_p=3, max_d=2, max_q=3):
    best = None
    for d in range(max_d + 1):
        w, mean = _prepare(y, d)
        for p in range(max_p + 1):
            for q in range(max_q + 1):
                if p + d + q + 2 > len(y):
                    continue
                try:
                    ar, ma, residuals, aicc = _arima_score(w, p, d, q)
                except SingularFit as e:
                    logger.debug("Skipping ARIMA(%d,%d,%d): %s", p, d, q, e)
                    continue
                if best is None or aicc < best[0]:
                    best = (aicc, (p, d, q), w, mean, ar, ma, residuals)
    if best is None:
        raise SingularFit(model="auto_arima", reason="no candidate order could be fitted")
    aicc, (p, d, q), w, mean, ar, ma, residuals = best
    logger.debug("Selected ARIMA(%d,%d,%d) with AICc %.3f", p, d, q, aicc)
    fitted = {"order": [p, d, q], "ar": ar.tolist(), "ma": ma.tolist(),
        "aicc": aicc, "mean": mean}
    return _arima_forecast(y, w, mean, d, ar, ma, residuals, horizon), fitted


def _ridge(y, horizon, lags, penalty):
    # Columns: y_{t-1} .. y_{t-lags}, then the unpenalized intercept
    design = np.hstack([_lagged(y, lags, lags), np.ones((len(y) - lags, 1))])
    prior = np.hstack([math.sqrt(penalty) * np.eye(lags), np.zeros((lags, 1))])
    coef = np.linalg.lstsq(
        np.vstack([design, prior]),
        np.concatenate([y[lags:], np.zeros(lags)]), rcond=None)[0]
    history = list(y[-lags:])
    for _ in range(horizon):
        history.append(float(np.dot(coef[:lags], history[:-lags - 1:-1])) + coef[lags])
    forecasts = np.asarray(history[lags:], dtype=float)
    if not (np.all(np.isfinite(coef)) and np.all(np.isfinite(forecasts))):
        raise SingularFit(model="ridge", reason="penalized least squares did not converge")
    return forecasts, {"coefs": coef[:lags].tolist(), "intercept": float(coef[lags])}


def fit_predict(spec, train, horizon, origin=None):
    # type: (ForecasterSpec, TimeSeries, int, int) -> Forecast
    """Fit ``spec`` on the training values and forecast ``horizon`` steps ahead.

    :param train: A :class:`~noiseplane.series.TimeSeries` or a 1-D array.
    :param origin: Index of the last training point, recorded on the result.
        Defaults to ``len(train) - 1``.
    :raises InsufficientData: The training window is too short for the model.
    :raises SingularFit: The estimation problem has no usable solution.
        Callers may fall back to ``naive_seasonal``.
    """
    y = np.asarray(getattr(train, "values", train), dtype=float)
    if int(horizon) != horizon or horizon < 1:
        raise ValueError("horizon should be an integer >= 1, got {!r}".format(horizon))
    horizon = int(horizon)
    if len(y) < spec.min_length:
        raise InsufficientData(model=spec.label, required=spec.min_length, length=len(y))
    p = spec.params
    kind = spec.kind
    if kind == ForecasterSpec.Kind.NAIVE_DRIFT:
        slope = (y[-1] - y[0]) / (len(y) - 1)
        values, fitted = y[-1] + slope * np.arange(1, horizon + 1), {"slope": slope}
    elif kind == ForecasterSpec.Kind.NAIVE_SEASONAL:
        values, fitted = np.resize(y[-p["k"]:], horizon), {"k": p["k"]}
    elif kind == ForecasterSpec.Kind.SES:
        values, fitted = _ses(y, horizon, p["alpha"])
    elif kind == ForecasterSpec.Kind.HOLT:
        values, fitted = _holt(y, horizon, p["alpha"], p["beta"])
    elif kind == ForecasterSpec.Kind.ARIMA:
        values, fitted = _arima(y, horizon, p["p"], p["d"], p["q"])
    elif kind == ForecasterSpec.Kind.AUTO_ARIMA:
        values, fitted = _auto_arima(y, horizon)
    else:
        values, fitted = _ridge(y, horizon, p["lags"], p["lambda"])
    logger.debug("%s on %d points: %s", spec.label, len(y), fitted)
    return Forecast(len(y) - 1 if origin is None else origin, horizon, values, fitted)

