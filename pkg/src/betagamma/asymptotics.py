"""Closed-form tail asymptotic, the four-step approximation chain, and the
remainder bounds that tie consecutive chain steps together.

For B ~ Beta(a, b), E ~ Exp(1), W ~ Gamma(r) and threshold w the chain is

    T1 = P(B^p W > w | W > w)
    T2 = P(B^p (w + E) > w)
    T3 = P(1 - B < E / (pw))
    T4 = Gamma(b) / (B(a, b) (pw)^b)

each pinned to an exact expectation so that consecutive gaps are numbers
that can be checked against the explicit bounds below.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .distributions import BetaParams, GammaParams
from .exact_tail import TailQuery, conditional_tail_at, log_overshoot_integral
from .quadrature import QuadConfig, integrate_log
from .specfun import (
    LogProb,
    log_beta,
    log_gamma,
    log_gamma_upper_scaled,
    log_reg_beta_upper,
)

DEFAULT_W_GRID = (20.0, 40.0, 80.0, 160.0)
DEFAULT_TRIPLES = ((1.0, 1.0, 1.0), (2.0, 3.0, 2.0), (0.5, 1.7, 0.5), (1.0, 1.0, 2.0), (2.0, 3.0, 1.0))
DEFAULT_R = 2.0


def log_tail_claim1(query: TailQuery) -> LogProb:
    """ln of Gamma(a+b) / (Gamma(c/p) Gamma(a)) p^(-b) t^(c-(b+1)p) e^(-t^p)."""
    a, b = query.beta.a, query.beta.b
    c, p = query.gga.c, query.gga.p
    t = query.t
    if not t > 0:
        raise ValueError("t must be positive")
    return (log_gamma(a + b) - log_gamma(c / p) - log_gamma(a)
            - b * math.log(p) + (c - (b + 1.0) * p) * math.log(t) - t**p)


# ---------------------------------------------------------------------------
# chain quantities

def log_t2(beta: BetaParams, p: float, w: float, cfg: QuadConfig | None = None) -> LogProb:
    """ln E[P(B > (1 + E/w)^(-1/p))]: the overshoot integral with r = 1."""
    return min(0.0, log_overshoot_integral(beta, p, 1.0, w, cfg))


def log_t3(beta: BetaParams, p: float, w: float, cfg: QuadConfig | None = None) -> LogProb:
    """ln E[P(1 - B < E/(pw))] = ln(int_0^pw e^-z P(1-B < z/(pw)) dz + e^-pw)."""
    cfg = cfg or QuadConfig()
    pw = p * w

    def log_f(z):
        y = z / pw
        return -z + log_reg_beta_upper(beta.a, beta.b, 1.0 - y, y)

    upper = min(64.0, pw)
    first = min(1.0, pw) / 16.0
    pts = [0.0]
    while first < upper:
        pts.append(first)
        first *= 2.0
    pts.append(upper)
    value = integrate_log(log_f, pts, cfg, log_tail_bound=lambda u: -u, extend_to=pw)[0]
    return min(0.0, float(np.logaddexp(value, -pw)))


def log_t4(beta: BetaParams, p: float, w: float) -> LogProb:
    """ln[Gamma(b) / (B(a, b) (pw)^b)]."""
    return log_gamma(beta.b) - log_beta(beta.a, beta.b) - beta.b * math.log(p * w)


def gap_34(beta: BetaParams, p: float, w: float, cfg: QuadConfig | None = None) -> float:
    """T3 - T4 evaluated directly rather than as a difference of rounded values.

    Writing T3 = pw int_0^inf e^(-pwu) P(1-B < u) du and T4 the same with
    u^b/(b B(a,b)) in place of the probability, then swapping the order of
    integration on [0, 1]:

      T3 - T4 = (1/B) int_0^1 x^(b-1) [(1-x)^(a-1) - 1] (e^(-pwx) - e^(-pw)) dx
              + e^(-pw) (1 - pw h(b+1, pw) / (b B)),

    h(s, x) = Gamma(s, x) e^x x^(-s). The bracket has the sign of 1 - a and
    vanishes identically for a = 1, where the whole gap is the e^(-pw) term.
    """
    cfg = cfg or QuadConfig()
    a, b = beta.a, beta.b
    pw = p * w
    lb = log_beta(a, b)
    head = 0.0
    if a != 1.0:
        def log_f(x):
            with np.errstate(divide="ignore"):
                return (np.log(np.abs(np.expm1((a - 1.0) * np.log1p(-x))))
                        + (b - 1.0) * np.log(x) - pw * x + np.log(-np.expm1(-pw * (1.0 - x))))

        pts = [0.0]
        edge = min(1.0 / pw, 0.5) / 16.0
        while edge < 1.0:
            pts.append(edge)
            edge *= 2.0
        pts.append(1.0)
        log_k = integrate_log(log_f, pts, cfg)[0]
        head = math.copysign(math.exp(log_k - lb), 1.0 - a)
    log_scaled = math.log(pw) + log_gamma_upper_scaled(b + 1.0, pw) - math.log(b) - lb
    tail = math.exp(-pw) * -math.expm1(log_scaled)
    return head + tail


# ---------------------------------------------------------------------------
# remainder bounds (probability scale)

def bound_12(params: GammaParams, beta: BetaParams, p: float, w: float, t2: LogProb) -> float:
    """Upper bound on |T1 - T2|.

    With rho = w^(r-1) e^-w / int_w^inf x^(r-1) e^-x dx and
    J = int_0^inf P(B^p (w+z) > w) (1 + z/w)^(r-1) e^-z dz we have T1 = rho J,
    so |T1 - T2| <= |J - T2| + |rho - 1| J, and |J - T2| <= D with

      D = max(1/sqrt(w), e^(r/sqrt(w)) - 1) T2        (z in [0, sqrt(w)])
        + (sqrt(w) + 1)/w e^-sqrt(w)  if r < 1         (z > sqrt(w))
          2 e^(-sqrt(w)/2)            if r >= 1  (needs w >= 2r)

    Since J <= T2 + D the total is D + |rho - 1| (T2 + D). ``beta`` and ``p``
    enter only through ``t2``.
    """
    r = params.r
    w = float(w)
    if w < max(4.0, 2.0 * r):
        raise ValueError(f"bound_12 needs w >= max(4, 2r) (w={w}, r={r})")
    t2_prob = math.exp(t2)
    sw = math.sqrt(w)
    near = max(1.0 / sw, math.expm1(r / sw)) * t2_prob
    far = (sw + 1.0) / w * math.exp(-sw) if r < 1.0 else 2.0 * math.exp(-sw / 2.0)
    d = near + far
    # rho = 1 / (w * h(r, w)), h = Gamma(r, w) e^w w^-r
    rho_dev = abs(math.expm1(-math.log(w) - log_gamma_upper_scaled(r, w)))
    return d + rho_dev * (t2_prob + d)


def bound_23(beta: BetaParams, p: float, w: float) -> float:
    """Upper bound on |T2 - T3|:

    max(1, (p/(p+1))^(a-1)) / B(a, b) * (p+1)(b+1) Gamma(b+2) / (2 b p^(b+1)) * w^-(b+1)
        + 2 exp(-p w / (p+1))
    """
    a, b = beta.a, beta.b
    w = float(w)
    if not w > 0:
        raise ValueError("w must be positive")
    log_pref = max(0.0, (a - 1.0) * math.log(p / (p + 1.0))) - log_beta(a, b)
    log_const = (math.log(p + 1.0) + math.log(b + 1.0) + log_gamma(b + 2.0)
                 - math.log(2.0 * b) - (b + 1.0) * math.log(p))
    return math.exp(log_pref + log_const - (b + 1.0) * math.log(w)) + 2.0 * math.exp(-p * w / (p + 1.0))


def bound_34(beta: BetaParams, p: float, w: float) -> float:
    """Upper bound on |T3 - T4|, term by term:

      e^(-pw)                                  mass where E > pw
      e^(-pw/2)                                the u in [1/2, 1] piece
      max(a, 2) Gamma(b+1) / (B(a,b) (pw)^(b+1))  dropping (1 - x)^(a-1)
      e^(-pw/2) / (2^b b B(a,b))               boundary term of the integration by parts
      e^(-pw/2) (2/(pw) + 2^(b-1) Gamma(b)/(pw)^b) / B(a,b)
                                               int_(1/2)^inf u^(b-1) e^(-pwu) du,
                                               via (1/2 + v)^(b-1) <= 2 + (2v)^(b-1)
    """
    a, b = beta.a, beta.b
    w = float(w)
    if not w > 0:
        raise ValueError("w must be positive")
    pw = p * w
    lb = log_beta(a, b)
    drop_factor = max(a, 2.0) * math.exp(log_gamma(b + 1.0) - lb - (b + 1.0) * math.log(pw))
    half = math.exp(-pw / 2.0)
    ibp = half * math.exp(-b * math.log(2.0) - math.log(b) - lb)
    far = half * (2.0 / pw + math.exp((b - 1.0) * math.log(2.0) + log_gamma(b) - b * math.log(pw))) * math.exp(-lb)
    return math.exp(-pw) + half + drop_factor + ibp + far


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ApproxChainReport:
    w: float
    log_t1: LogProb
    log_t2: LogProb
    log_t3: LogProb
    log_t4: LogProb
    bound_12: float
    bound_23: float
    bound_34: float
    gap_12: float
    gap_23: float
    gap_34: float
    a: float = math.nan
    b: float = math.nan
    p: float = math.nan
    r: float = math.nan

    def passes(self) -> tuple[bool, bool, bool]:
        return (self.gap_12 <= self.bound_12,
                self.gap_23 <= self.bound_23,
                self.gap_34 <= self.bound_34)


def chain_evaluate(beta: BetaParams, p: float, w: float, cfg: QuadConfig | None = None,
                   r: float = DEFAULT_R) -> ApproxChainReport:
    """T1..T4 at threshold w, the measured gaps, and the three gap bounds.

    The T1-T2 and T2-T3 gaps are differences of the computed values (they are
    O(T/w), far above quadrature error); T3-T4 comes from :func:`gap_34`.

    ``r`` is the gamma shape c/p of W; it affects T1 (and bound_12) only.
    """
    cfg = cfg or QuadConfig()
    t1 = conditional_tail_at(beta, p, r, w, cfg)
    t2 = log_t2(beta, p, w, cfg)
    t3 = log_t3(beta, p, w, cfg)
    t4 = log_t4(beta, p, w)
    return ApproxChainReport(
        w=w, log_t1=t1, log_t2=t2, log_t3=t3, log_t4=t4,
        bound_12=bound_12(GammaParams(r), beta, p, w, t2),
        bound_23=bound_23(beta, p, w),
        bound_34=bound_34(beta, p, w),
        gap_12=abs(math.exp(t1) - math.exp(t2)),
        gap_23=abs(math.exp(t2) - math.exp(t3)),
        gap_34=abs(gap_34(beta, p, w, cfg)),
        a=beta.a, b=beta.b, p=p, r=r,
    )


# ---------------------------------------------------------------------------
# elementary inequalities used by the bounds

def _binom_neg_coeffs(s, n):
    # |binom(-s, k)| = s (s+1) ... (s+k-1) / k!, k = 0..n-1
    k = np.arange(n)
    s = np.asarray(s, dtype=float)[..., None]
    factors = np.where(k == 0, 1.0, (s + k - 1.0) / np.maximum(k, 1))
    return np.cumprod(factors, axis=-1)


def power_sandwich_holds(x, p):
    """1 - x/p <= (1+x)^(-1/p) < 1 - x/p + (p+1)/(2p^2) x^2, elementwise.

    Writes (1+x)^(-1/p) = 1 - x/p + h(x) and tests h >= 0 and
    (p+1)/(2p^2) x^2 - h > 0; for x < 1e-2 both come from the binomial series,
    divided by x^2 and x^3, so the third-order slack is not lost to rounding.
    """
    x, p = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    if np.any(x <= 0) or np.any(p <= 0):
        raise ValueError("x and p must be positive")
    shape = x.shape
    x, p = x.ravel(), p.ravel()
    q = (p + 1.0) / (2.0 * p * p)
    h = np.expm1(-np.log1p(x) / p) + x / p
    slack = q * x * x - h
    small = x < 1e-2
    if small.any():
        xs, ss = x[small], 1.0 / p[small]
        coef = _binom_neg_coeffs(ss, 60)
        k = np.arange(60)
        signed = (-1.0) ** k * coef
        # signs only matter, so test h / x^2 and slack / x^3 (no underflow)
        h[small] = (signed[:, 2:] * xs[:, None] ** (k[2:] - 2)).sum(axis=1)
        slack[small] = -(signed[:, 3:] * xs[:, None] ** (k[3:] - 3)).sum(axis=1)
    ok = ((h >= 0) & (slack > 0)).reshape(shape)
    return ok[()] if ok.ndim == 0 else ok


def shifted_power_bound_holds(v, b):
    """(1/2 + v)^(b-1) <= 2 + (2v)^(b-1), compared in log form."""
    v, b = np.broadcast_arrays(np.asarray(v, dtype=float), np.asarray(b, dtype=float))
    if np.any(v <= 0) or np.any(b <= 0):
        raise ValueError("v and b must be positive")
    lhs = (b - 1.0) * np.log(0.5 + v)
    rhs = np.logaddexp(math.log(2.0), (b - 1.0) * np.log(2.0 * v))
    return lhs <= rhs


def beta_factor_bound_holds(x, a):
    """|1 - (1-x)^(a-1)| <= max(a, 2) x for x in (0, 1/2)."""
    x, a = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(a, dtype=float))
    if np.any((x <= 0) | (x >= 0.5)) or np.any(a <= 0):
        raise ValueError("need 0 < x < 1/2 and a > 0")
    return np.abs(np.expm1((a - 1.0) * np.log1p(-x))) <= np.maximum(a, 2.0) * x


class InequalityChecks(NamedTuple):
    power_sandwich: bool
    shifted_power: bool
    beta_factor: bool

    def all(self) -> bool:
        return bool(np.all(self.power_sandwich) and np.all(self.shifted_power)
                    and np.all(self.beta_factor))


def check_elementary_inequalities(x, p, a, b, v) -> InequalityChecks:
    """Truth of the three inequalities behind the bounds at (x, p, a, b, v).

    x must lie in (0, 1/2) because the third inequality is only claimed there;
    the first one is available for all x > 0 via :func:`power_sandwich_holds`.
    """
    return InequalityChecks(
        power_sandwich_holds(x, p),
        shifted_power_bound_holds(v, b),
        beta_factor_bound_holds(x, a),
    )
