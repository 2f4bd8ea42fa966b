"""Log-domain special functions.

Everything here returns natural logarithms; ``-inf`` stands for zero.
The incomplete gamma and beta routines accept scalars or numpy arrays and
return the same shape (a Python float for scalar input).
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import betaln, zeta

LogReal = float
LogProb = float

CF_EPS = 1e-15
CF_MAX_ITER = 500
_FPMIN = 1e-300


class ConvergenceError(ArithmeticError):
    """A continued fraction, series, or quadrature failed to converge."""


def _check_positive(name, x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise ValueError(f"{name} must be positive and finite")
    return x


def _out(arr):
    arr = np.asarray(arr, dtype=float)
    return float(arr) if arr.ndim == 0 else arr


_lgamma_ufunc = np.frompyfunc(math.lgamma, 1, 1)


# (-1)^k zeta(k)/k, k >= 2: ln Gamma(1+s) = -euler*s + sum_k coef_k s^k for |s| < 1
_LG1P_COEF = np.concatenate(([0.0, -np.euler_gamma],
                             [(-1) ** k * zeta(k) / k for k in range(2, 60)]))


def _lgamma1p_series(s):
    return np.polynomial.polynomial.polyval(s, _LG1P_COEF)


def _lgamma(x):
    """ln Gamma(x), x > 0; series near the zeros at 1 and 2 (x - 1, x - 2 are exact there)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = float(x)
        if abs(x - 1.0) < 0.25:
            return np.float64(_lgamma1p_series(x - 1.0))
        if abs(x - 2.0) < 0.25:
            return np.float64(_lgamma1p_series(x - 2.0) + math.log1p(x - 2.0))
        return np.float64(math.lgamma(x))
    out = _lgamma_ufunc(x).astype(float)
    near1 = np.abs(x - 1.0) < 0.25
    near2 = np.abs(x - 2.0) < 0.25
    out[near1] = _lgamma1p_series(x[near1] - 1.0)
    out[near2] = _lgamma1p_series(x[near2] - 2.0) + np.log1p(x[near2] - 2.0)
    return out


def _lgamma1p(s):
    """ln Gamma(1 + s) without forming 1 + s (full precision for small s)."""
    s = np.asarray(s, dtype=float)
    if s.ndim == 0:
        return np.float64(_lgamma1p_series(float(s))) if abs(s) < 0.25 else _lgamma(1.0 + s)
    out = _lgamma(1.0 + s)
    small = np.abs(s) < 0.25
    out[small] = _lgamma1p_series(s[small])
    return out


def log_gamma(x) -> LogReal:
    """ln Gamma(x) for x > 0."""
    x = _check_positive("x", x)
    return _out(_lgamma(x))


def log_beta(a, b) -> LogReal:
    """ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b)."""
    a = _check_positive("a", a)
    b = _check_positive("b", b)
    return _out(_lgamma(a) + _lgamma(b) - _lgamma(a + b))


# ---------------------------------------------------------------------------
# regularized incomplete gamma

def _gamma_series_log_p(s, x):
    # ln P(s, x) from sum_{n>=0} x^n / (s (s+1) ... (s+n))
    term = 1.0 / s
    total = term.copy()
    ap = s.copy()
    done = np.zeros(s.shape, dtype=bool)
    for _ in range(CF_MAX_ITER * 4):
        ap = ap + 1.0
        term = term * x / ap
        total = total + np.where(done, 0.0, term)
        done |= np.abs(term) < np.abs(total) * CF_EPS
        if done.all():
            break
    else:
        raise ConvergenceError("incomplete gamma series did not converge")
    return s * np.log(x) - x - _lgamma(s) + np.log(total)


def _gamma_cf_log_q(s, x):
    return s * np.log(x) - x - _lgamma(s) + _gamma_cf_log_h(s, x)


def _gamma_cf_log_h(s, x):
    # Legendre continued fraction, modified Lentz; returns ln of
    # h = Gamma(s, x) e^x x^(-s).
    b = x + 1.0 - s
    c = np.full(s.shape, 1.0 / _FPMIN)
    d = 1.0 / b
    h = d.copy()
    done = np.zeros(s.shape, dtype=bool)
    for i in range(1, CF_MAX_ITER + 1):
        an = -i * (i - s)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = b + an / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        delta = np.where(done, 1.0, d * c)
        h = h * delta
        done |= np.abs(delta - 1.0) < CF_EPS
        if done.all():
            break
    else:
        raise ConvergenceError(
            f"incomplete gamma continued fraction exceeded {CF_MAX_ITER} iterations")
    return np.log(h)


def _gamma_small_s_log_q(s, x):
    # For s < 1 and x < s + 1: Q = -expm1(s ln x - lnGamma(1+s)) - x^s/Gamma(1+s) * s * T,
    # T = sum_{k>=1} (-x)^k / ((s+k) k!). Avoids 1 - P when Q is O(s).
    lead = s * np.log(x) - _lgamma1p(s)
    term = np.ones_like(s)
    t_sum = np.zeros_like(s)
    for k in range(1, 200):
        term = term * (-x) / k
        inc = term / (s + k)
        t_sum = t_sum + inc
        if np.all(np.abs(inc) <= CF_EPS * np.abs(t_sum)):
            break
    p = np.exp(lead) * (1.0 + s * t_sum)
    q = -np.expm1(lead) - np.exp(lead) * s * t_sum
    return np.where(p < 0.5, np.log1p(-p), np.log(q))


def log_reg_gamma_upper(s, x) -> LogProb:
    """ln Q(s, x), Q the regularized upper incomplete gamma function.

    Series below ``x = s + 1`` and continued fraction above, both with the
    ``x^s e^-x / Gamma(s)`` prefactor kept in log form, so deep tails
    (``x`` up to 1e6 and beyond) do not underflow.
    """
    s = _check_positive("s", s)
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < 0):
        raise ValueError("x must be nonnegative")
    s, x = np.broadcast_arrays(s, x)
    s = s.astype(float).copy()
    x = x.astype(float).copy()
    out = np.zeros(s.shape)

    inf = np.isinf(x)
    out[inf] = -np.inf
    pos = (x > 0) & ~inf
    use_cf = pos & (x >= s + 1.0)
    small_s = pos & ~use_cf & (s < 1.0)
    use_series = pos & ~use_cf & ~small_s

    if use_cf.any():
        out[use_cf] = _gamma_cf_log_q(s[use_cf], x[use_cf])
    if small_s.any():
        out[small_s] = _gamma_small_s_log_q(s[small_s], x[small_s])
    if use_series.any():
        log_p = _gamma_series_log_p(s[use_series], x[use_series])
        out[use_series] = np.log1p(-np.exp(log_p))
    return _out(out)


def log_gamma_upper_scaled(s, x) -> LogReal:
    """ln[Gamma(s, x) e^x x^(-s)], the upper incomplete gamma with its
    leading behaviour divided out; no cancellation against x for large x.
    """
    s = _check_positive("s", s)
    x = _check_positive("x", x)
    s, x = (arr.astype(float) for arr in np.broadcast_arrays(s, x))
    out = np.empty(s.shape)
    cf = x >= s + 1.0
    if cf.any():
        out[cf] = _gamma_cf_log_h(s[cf], x[cf])
    rest = ~cf
    if rest.any():
        sr, xr = s[rest], x[rest]
        out[rest] = log_reg_gamma_upper(sr, xr) + _lgamma(sr) + xr - sr * np.log(xr)
    return _out(out)


# ---------------------------------------------------------------------------
# regularized incomplete beta

def _beta_cf_log(a, b, x, y):
    """ln I_x(a, b) by the standard continued fraction; y = 1 - x given exactly."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones(a.shape)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
    d = 1.0 / d
    h = d.copy()
    done = np.zeros(a.shape, dtype=bool)
    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        h = h * np.where(done, 1.0, d * c)
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        delta = np.where(done, 1.0, d * c)
        h = h * delta
        done |= np.abs(delta - 1.0) < CF_EPS
        if done.all():
            break
    else:
        raise ConvergenceError(
            f"incomplete beta continued fraction exceeded {CF_MAX_ITER} iterations")
    # ln(a B(a, b)) through ln Gamma(1 + a) keeps full precision for small a
    log_a_beta = np.log(a) + betaln(a, b)
    return a * np.log(x) + b * np.log(y) - log_a_beta + np.log(h)


def _log_beta_upper(a, b, x, y):
    # arrays of equal shape, 0 < x < 1, y == 1 - x
    flip = x < (a + 1.0) / (a + b + 2.0)
    # direct: lower when flip, else upper = I_y(b, a)
    aa = np.where(flip, a, b)
    bb = np.where(flip, b, a)
    xx = np.where(flip, x, y)
    yy = np.where(flip, y, x)
    direct = _beta_cf_log(aa, bb, xx, yy)
    out = np.where(flip, 0.0, direct)
    if flip.any():
        # complement of the directly computed lower tail; for strongly skewed
        # shapes (tiny a) the other-side fraction converges too slowly, so
        # the upper tail comes from -expm1 of the full-precision lower log
        log_lower = direct[flip]
        out[flip] = np.where(log_lower < -math.log(2.0),
                             np.log1p(-np.exp(log_lower)),
                             np.log(-np.expm1(np.minimum(log_lower, -1e-300))))
    return out


def log_reg_beta_upper(a, b, x, y=None) -> LogProb:
    """ln P(B > x) for B ~ Beta(a, b).

    ``y`` optionally supplies ``1 - x`` when the caller has it to full
    precision (x close to 1); otherwise it is formed as ``1 - x``.
    """
    a = _check_positive("a", a)
    b = _check_positive("b", b)
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any((x < 0) | (x > 1)):
        raise ValueError("x must lie in [0, 1]")
    y = 1.0 - x if y is None else np.asarray(y, dtype=float)
    a, b, x, y = (arr.astype(float) for arr in np.broadcast_arrays(a, b, x, y))
    out = np.zeros(x.shape)
    out[(y <= 0) | (x >= 1)] = -np.inf
    inner = (x > 0) & (y > 0) & (x < 1)
    if inner.any():
        out[inner] = _log_beta_upper(a[inner], b[inner], x[inner], y[inner])
    return _out(out)


def log_reg_beta_lower(a, b, x, y=None) -> LogProb:
    """ln P(B <= x) for B ~ Beta(a, b), via the upper tail of Beta(b, a).

    ``y``, if given, is 1 - x computed without cancellation.
    """
    x = np.asarray(x, dtype=float)
    y = 1.0 - x if y is None else y
    return log_reg_beta_upper(b, a, y, x)


def logsumexp(values) -> LogReal:
    """Log of a sum of exponentials; ``-inf`` for an empty or all-zero sum."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        return -math.inf
    m = v.max()
    if not np.isfinite(m):
        return float(m)
    return float(m + np.log(np.sum(np.exp(v - m))))
