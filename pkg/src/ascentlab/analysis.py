"""Ratio-method machinery for exact coefficient series whose growth mixes
exponential, stretched-exponential and factorial factors.

Everything runs at a configurable decimal precision (mpmath); transforms of
exact integer series form each ratio as an exact rational and round once.
Estimators that assume a growth model take the model parameters explicitly;
nothing is inferred silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from .series import (CoefficientSeries, RealSeries, DEFAULT_DPS, to_mpf,
                     working_dps)


@dataclass
class StretchedFitParams:
    """c_n ~ C * mu^n * mu1^(n^sigma) * n^g with mu1 given through its log."""

    mu: float
    sigma: float
    log_mu1: float
    g: float
    C: float = 1.0

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if not 0 < self.sigma < 1:
            raise ValueError("sigma must lie strictly between 0 and 1")


@dataclass
class FactorialFitParams:
    """c_n ~ C * (alpha*n)! * mu^n * n^g."""

    alpha: float
    mu: float
    g: float = 0.0
    C: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")


@dataclass
class LinearFitWindow:
    """Solution of a 4x4 fit anchored at window center k; residual is the
    largest defect when the solution is substituted back."""

    k: int
    coefficients: list
    residual: object


@dataclass
class EstimatorTrace:
    """An estimator plotted against an abscissa, with local gradients.

    Indices with domain failures (log of a non-positive value) are skipped
    and recorded rather than aborting the trace.
    """

    name: str
    abscissa: str
    ns: list
    x: list
    y: list
    gradient_ns: list = field(default_factory=list)
    gradients: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    dps: int = DEFAULT_DPS

    def gradient_tail(self, count=1):
        return self.gradients[-count:]


@dataclass
class InterceptSummary:
    """The three readings of a trace's ordinate intercept: the raw tail value,
    a Neville extrapolation in the stated abscissa, and the trace itself."""

    name: str
    abscissa_power: float
    last_n: int
    last_value: object
    neville: object
    depth: int


def _values_with_indices(series):
    return list(series.indices()), list(series.values)


def ratios(c, dps=None) -> RealSeries:
    """r_n = c_n / c_{n-1}; exact rational first when the input is exact."""
    d = working_dps(c, dps=dps)
    ns, vals = _values_with_indices(c)
    if len(vals) < 2:
        raise ValueError("need at least two terms for ratios")
    exact = isinstance(c, CoefficientSeries)
    out = []
    with mpmath.workdps(d):
        for prev, cur in zip(vals, vals[1:]):
            if prev == 0:
                raise ValueError("zero coefficient in ratio transform")
            if exact:
                q = Fraction(cur, prev)
                out.append(mpf(q.numerator) / mpf(q.denominator))
            else:
                out.append(mpf(cur) / mpf(prev))
    return RealSeries(out, first_index=ns[1], dps=d)


def egf_ratios(c, dps=None) -> RealSeries:
    """Exponential-generating-function ratios r_n = c_n / (n * c_{n-1})."""
    d = working_dps(c, dps=dps)
    ns, vals = _values_with_indices(c)
    if len(vals) < 2:
        raise ValueError("need at least two terms for ratios")
    exact = isinstance(c, CoefficientSeries)
    out = []
    with mpmath.workdps(d):
        for n, prev, cur in zip(ns[1:], vals, vals[1:]):
            if prev == 0:
                raise ValueError("zero coefficient in ratio transform")
            if exact:
                q = Fraction(cur, n * prev)
                out.append(mpf(q.numerator) / mpf(q.denominator))
            else:
                out.append(mpf(cur) / (n * mpf(prev)))
    return RealSeries(out, first_index=ns[1], dps=d)


def linear_intercepts(r: RealSeries) -> RealSeries:
    """l_n = n*r_n - (n-1)*r_{n-1}; cancels an additive c/n correction."""
    if len(r) < 2:
        raise ValueError("need at least two terms")
    out = []
    with mpmath.workdps(r.dps):
        for n in range(r.first_index + 1, r.last_index + 1):
            out.append(n * r.at(n) - (n - 1) * r.at(n - 1))
    return RealSeries(out, first_index=r.first_index + 1, dps=r.dps)


def quadratic_intercepts(l: RealSeries) -> RealSeries:
    """l2_n = (n^2*l_n - (n-1)^2*l_{n-1}) / (2n-1); cancels a pure c/n^2
    correction (applied after linear_intercepts the residual is O(1/n^3))."""
    if len(l) < 2:
        raise ValueError("need at least two terms")
    out = []
    with mpmath.workdps(l.dps):
        for n in range(l.first_index + 1, l.last_index + 1):
            out.append((n * n * l.at(n) - (n - 1) * (n - 1) * l.at(n - 1))
                       / (2 * n - 1))
    return RealSeries(out, first_index=l.first_index + 1, dps=l.dps)


def intercept_pipeline(r: RealSeries):
    """(l, l2, l3): linear intercepts, quadratic intercepts, and the pairwise
    linear extrapolants of l2."""
    l = linear_intercepts(r)
    l2 = quadratic_intercepts(l)
    l3 = linear_intercepts(l2)
    return l, l2, l3


def local_gradients(y, xs) -> list:
    """Pairs (n, dy/dx) over consecutive points; xs maps n to the abscissa."""
    out = []
    with mpmath.workdps(y.dps):
        for n in range(y.first_index + 1, y.last_index + 1):
            dx = xs(n) - xs(n - 1)
            out.append((n, (y.at(n) - y.at(n - 1)) / dx))
    return out


def _log_trace(name, ns, raw, dps):
    """log(raw) against log(n), skipping non-positive entries."""
    xs, ys, kept = [], [], []
    skipped = []
    with mpmath.workdps(dps):
        for n, v in zip(ns, raw):
            if v <= 0:
                skipped.append((n, "non-positive argument to log"))
                continue
            kept.append(n)
            xs.append(mpmath.log(n))
            ys.append(mpmath.log(v))
        gns, grads = [], []
        for i in range(1, len(kept)):
            gns.append(kept[i])
            grads.append((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]))
    return EstimatorTrace(name=name, abscissa="log n", ns=kept, x=xs, y=ys,
                          gradient_ns=gns, gradients=grads, skipped=skipped,
                          dps=dps)


def sigma_estimator_ratio(r: RealSeries) -> EstimatorTrace:
    """log(r_n/r_{n-1} - 1) against log n; local gradients tend to sigma - 2."""
    if len(r) < 3:
        raise ValueError("need at least three ratio terms")
    ns, raw = [], []
    with mpmath.workdps(r.dps):
        for n in range(r.first_index + 1, r.last_index + 1):
            ns.append(n)
            raw.append(r.at(n) / r.at(n - 1) - 1)
    return _log_trace("sigma_ratio", ns, raw, r.dps)


def sigma_estimator_root(c, dps=None) -> EstimatorTrace:
    """log(c_n^{1/n}/c_{n-1}^{1/(n-1)} - 1) against log n; gradients tend to
    sigma - 2. Equal to the ratio estimator at leading order."""
    d = working_dps(c, dps=dps)
    ns, vals = _values_with_indices(c)
    if len(vals) < 3:
        raise ValueError("need at least three terms")
    out_ns, raw = [], []
    with mpmath.workdps(d):
        logs = [mpmath.log(mpf(v)) if not isinstance(v, mpf) else mpmath.log(v)
                for v in vals]
        for i in range(1, len(vals)):
            n = ns[i]
            if n - 1 == 0:
                continue
            a = mpmath.e ** (logs[i] / n - logs[i - 1] / (n - 1))
            out_ns.append(n)
            raw.append(a - 1)
    return _log_trace("sigma_root", out_ns, raw, d)


def sigma_local_gradient_known_mu(r: RealSeries, mu) -> RealSeries:
    """1 + (log|r_n/mu - 1| - log|r_{n-1}/mu - 1|) / (log n - log(n-1));
    tends to sigma when the growth constant mu is known."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    out = []
    with mpmath.workdps(r.dps):
        m = mpf(mu)
        for n in range(r.first_index + 1, r.last_index + 1):
            cur = r.at(n) / m - 1
            prev = r.at(n - 1) / m - 1
            if cur == 0 or prev == 0:
                raise ValueError(f"ratio equals mu exactly at index {n}")
            out.append(1 + (mpmath.log(abs(cur)) - mpmath.log(abs(prev)))
                       / (mpmath.log(n) - mpmath.log(n - 1)))
    return RealSeries(out, first_index=r.first_index + 1, dps=r.dps)


def mu1_estimator(r: RealSeries, mu, sigma) -> RealSeries:
    """(r_n/mu - 1) * n^(1-sigma); limit is sigma * log(mu1)."""
    if not mu > 0 or not 0 < sigma < 1:
        raise ValueError("need mu > 0 and 0 < sigma < 1")
    out = []
    with mpmath.workdps(r.dps):
        m, s = mpf(mu), mpf(sigma)
        for n in r.indices():
            out.append((r.at(n) / m - 1) * mpf(n) ** (1 - s))
    return RealSeries(out, first_index=r.first_index, dps=r.dps)


def g_estimator(c, mu, sigma, dps=None) -> EstimatorTrace:
    """e_n/sigma against log n, where
    e_n = ((n-1)^sigma log d_n - n^sigma log d_{n-1}) * n^(1-sigma) and
    d_n = c_n / mu^n. Local gradients tend to -g."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    d = working_dps(c, dps=dps)
    ns, vals = _values_with_indices(c)
    xs, ys, kept = [], [], []
    with mpmath.workdps(d):
        m, s = mpf(mu), mpf(sigma)
        logmu = mpmath.log(m)
        logd = [mpmath.log(mpf(v)) - n * logmu for n, v in zip(ns, vals)]
        for i in range(1, len(ns)):
            n = ns[i]
            e = ((mpf(n - 1) ** s) * logd[i] - (mpf(n) ** s) * logd[i - 1]) \
                * mpf(n) ** (1 - s)
            kept.append(n)
            xs.append(mpmath.log(n))
            ys.append(e / s)
        gns, grads = [], []
        for i in range(1, len(kept)):
            gns.append(kept[i])
            grads.append((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]))
    return EstimatorTrace(name="g_estimator", abscissa="log n", ns=kept, x=xs,
                          y=ys, gradient_ns=gns, gradients=grads, dps=d)


def mu1_refined(c, mu, sigma, g, dps=None) -> RealSeries:
    """(log f_n - log f_{n-1}) / (n^sigma - (n-1)^sigma) with
    f_n = c_n / (n^g mu^n); limit is log(mu1)."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    d = working_dps(c, dps=dps)
    ns, vals = _values_with_indices(c)
    out = []
    with mpmath.workdps(d):
        m, s, gg = mpf(mu), mpf(sigma), mpf(g)
        logmu = mpmath.log(m)
        logf = [mpmath.log(mpf(v)) - gg * mpmath.log(n) - n * logmu
                for n, v in zip(ns, vals)]
        for i in range(1, len(ns)):
            n = ns[i]
            denom = mpf(n) ** s - mpf(n - 1) ** s
            out.append((logf[i] - logf[i - 1]) / denom)
    return RealSeries(out, first_index=ns[1], dps=d)


def fit_ratio4(r: RealSeries, sigma, k) -> LinearFitWindow:
    """Solve r_n = c1 + c2/n^(1-sigma) + c3/n + c4/n^(2-2sigma) on the window
    n = k-2..k+1. c1 estimates mu, c2 -> mu*sigma*log(mu1), c3 -> mu*g
    (requires sigma != 1/2), c4 -> mu*sigma^2*log^2(mu1)/2."""
    if k - 2 < r.first_index or k + 1 > r.last_index:
        raise ValueError(f"window k={k} outside ratio series range")
    with mpmath.workdps(r.dps):
        s = mpf(sigma)
        rows, rhs = [], []
        for n in range(k - 2, k + 2):
            nn = mpf(n)
            rows.append([mpf(1), nn ** (s - 1), 1 / nn, nn ** (2 * s - 2)])
            rhs.append(r.at(n))
        A = mpmath.matrix(rows)
        b = mpmath.matrix(rhs)
        try:
            sol = mpmath.lu_solve(A, b)
        except ZeroDivisionError as exc:
            raise ValueError(f"singular fit system at window k={k}") from exc
        resid = max(abs(x) for x in (A * sol - b))
    return LinearFitWindow(k=k, coefficients=list(sol), residual=resid)


def fit_ratio4_sweep(r: RealSeries, sigma, ks=None):
    if ks is None:
        ks = range(r.first_index + 2, r.last_index)
    return [fit_ratio4(r, sigma, k) for k in ks]


def fit_stirling_log(c, m, dps=None) -> LinearFitWindow:
    """Solve log c_k = e1*k*log k + e2*k + e3*log k + e4 on k = m-2..m+1.
    For (alpha*n)!-type growth e1 estimates alpha and e2 estimates
    log mu + alpha log alpha - alpha."""
    d = working_dps(c, dps=dps)
    if m - 2 < c.first_index + 1 or m + 1 > c.last_index:
        raise ValueError(f"window m={m} outside series range")
    with mpmath.workdps(d):
        rows, rhs = [], []
        for k in range(m - 2, m + 2):
            lk = mpmath.log(k)
            rows.append([k * lk, mpf(k), lk, mpf(1)])
            rhs.append(mpmath.log(to_mpf(c.at(k), d)))
        A = mpmath.matrix(rows)
        b = mpmath.matrix(rhs)
        try:
            sol = mpmath.lu_solve(A, b)
        except ZeroDivisionError as exc:
            raise ValueError(f"singular fit system at window m={m}") from exc
        resid = max(abs(x) for x in (A * sol - b))
    return LinearFitWindow(k=m, coefficients=list(sol), residual=resid)


def fit_stirling_log_sweep(c, ms=None, dps=None):
    if ms is None:
        ms = range(c.first_index + 3, c.last_index)
    return [fit_stirling_log(c, m, dps=dps) for m in ms]


@dataclass
class FactorialRatioTraces:
    r: RealSeries
    s: RealSeries
    t: RealSeries
    alpha_estimates: list  # (n, 2 * gradient of t against 1/n)


def factorial_ratio_transforms(c, dps=None) -> FactorialRatioTraces:
    """r_n = c_n/c_{n-1}, s_n = r_n/r_{n-1},
    t_n = (n^2 s_n - (n-1)^2 s_{n-1})/(2n-1) ~ 1 + alpha/(2n);
    the gradient of t against 1/n therefore estimates alpha/2."""
    if len(c) < 4:
        raise ValueError("need at least four terms")
    r = ratios(c, dps=dps)
    out_s = []
    with mpmath.workdps(r.dps):
        for n in range(r.first_index + 1, r.last_index + 1):
            out_s.append(r.at(n) / r.at(n - 1))
        s = RealSeries(out_s, first_index=r.first_index + 1, dps=r.dps)
        out_t = []
        for n in range(s.first_index + 1, s.last_index + 1):
            out_t.append((n * n * s.at(n) - (n - 1) * (n - 1) * s.at(n - 1))
                         / (2 * n - 1))
        t = RealSeries(out_t, first_index=s.first_index + 1, dps=s.dps)
        grads = local_gradients(t, lambda n: mpf(1) / n)
        alpha = [(n, 2 * gv) for n, gv in grads]
    return FactorialRatioTraces(r=r, s=s, t=t, alpha_estimates=alpha)


def hadamard_quotient(a, b, dps=None) -> RealSeries:
    """h_n = a_n / b_n on the overlap of the two index ranges."""
    d = working_dps(a, b, dps=dps)
    lo = max(a.first_index, b.first_index)
    hi = min(a.last_index, b.last_index)
    if lo > hi:
        raise ValueError("series do not overlap")
    exact = isinstance(a, CoefficientSeries) and isinstance(b, CoefficientSeries)
    out = []
    with mpmath.workdps(d):
        for n in range(lo, hi + 1):
            bv = b.at(n)
            if bv == 0:
                raise ValueError(f"zero divisor at index {n}")
            if exact:
                q = Fraction(a.at(n), bv)
                out.append(mpf(q.numerator) / mpf(q.denominator))
            else:
                out.append(mpf(a.at(n)) / mpf(bv))
    return RealSeries(out, first_index=lo, dps=d)


def synth_series(params, n_terms, dps=DEFAULT_DPS) -> RealSeries:
    """Exact-model series used as ground truth in estimator-recovery tests."""
    if n_terms < 4:
        raise ValueError("need at least four terms")
    out = []
    with mpmath.workdps(dps):
        if isinstance(params, StretchedFitParams):
            mu = mpf(params.mu)
            sig = mpf(params.sigma)
            lm1 = mpf(params.log_mu1)
            g = mpf(params.g)
            C = mpf(params.C)
            for n in range(1, n_terms + 1):
                nn = mpf(n)
                out.append(C * mu ** nn * mpmath.e ** (lm1 * nn ** sig) * nn ** g)
        elif isinstance(params, FactorialFitParams):
            al = mpf(params.alpha)
            mu = mpf(params.mu)
            g = mpf(params.g)
            C = mpf(params.C)
            for n in range(1, n_terms + 1):
                nn = mpf(n)
                out.append(C * mpmath.gamma(al * nn + 1) * mu ** nn * nn ** g)
        else:
            raise TypeError("params must be StretchedFitParams or FactorialFitParams")
    return RealSeries(out, first_index=1, dps=dps)


@dataclass
class ReferenceConstants:
    dps: int
    ascent_growth: object          # 6/pi^2
    ascent_amplitude: object       # 12*sqrt(3)*exp(pi^2/12)/pi^(5/2)
    growth_000_conjecture: object  # 8/(3*pi^2)
    growth_120: object             # largest root of x^3 - 8x^2 + 5x + 1


def reference_constants(dps=DEFAULT_DPS) -> ReferenceConstants:
    with mpmath.workdps(dps):
        pi = mpmath.pi
        ascent_growth = 6 / pi ** 2
        amplitude = 12 * mpmath.sqrt(3) * mpmath.e ** (pi ** 2 / 12) / pi ** mpf(2.5)
        mu000 = 8 / (3 * pi ** 2)
        root = mpmath.findroot(lambda x: x ** 3 - 8 * x ** 2 + 5 * x + 1, mpf(7.3))
    return ReferenceConstants(dps=dps, ascent_growth=ascent_growth,
                              ascent_amplitude=amplitude,
                              growth_000_conjecture=mu000, growth_120=root)


def neville_extrapolate(xs, ys, x0=0, dps=DEFAULT_DPS):
    """Neville polynomial extrapolation of (xs, ys) to x0."""
    if len(xs) != len(ys) or not xs:
        raise ValueError("need equal nonzero numbers of abscissae and values")
    with mpmath.workdps(dps):
        tab = [mpf(y) for y in ys]
        xs = [mpf(x) for x in xs]
        x0 = mpf(x0)
        m = len(tab)
        for level in range(1, m):
            for i in range(m - level):
                tab[i] = ((x0 - xs[i + level]) * tab[i]
                          + (xs[i] - x0) * tab[i + 1]) / (xs[i] - xs[i + level])
        return tab[0]


def extrapolate_intercept(series, power=1.0, depth=3, name="trace") -> InterceptSummary:
    """Ordinate intercept of a trace via (a) the raw last value and (b) Neville
    extrapolation of the last `depth` points in the abscissa 1/n^power."""
    if isinstance(series, RealSeries):
        ns = list(series.indices())
        vals = list(series.values)
        dps = series.dps
    else:
        ns, vals = map(list, zip(*series))
        dps = DEFAULT_DPS
    if not ns:
        raise ValueError("empty trace")
    depth = min(depth, len(ns))
    with mpmath.workdps(dps):
        xs = [mpf(n) ** mpf(-power) for n in ns[-depth:]]
        ev = neville_extrapolate(xs, vals[-depth:], 0, dps=dps)
    return InterceptSummary(name=name, abscissa_power=power, last_n=ns[-1],
                            last_value=vals[-1], neville=ev, depth=depth)
