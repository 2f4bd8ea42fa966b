"""ln P(BZ > t) by log-space adaptive quadrature.

With W = Z^p ~ Gamma(r), r = c/p, and w = t^p,

    P(BZ > t) = P(B^p W > w)
              = w^(r-1) e^(-w) / Gamma(r) * J(w),
    J(w)      = int_0^inf (1 + u/w)^(r-1) e^(-u) P(B > (1 + u/w)^(-1/p)) du,

after substituting x = w + u in the integral of f_W(x) P(B > (w/x)^(1/p)).
J is the overshoot integral; its integrand never underflows near u = 0
whatever the size of w, and the beta factor is the incomplete-beta upper
tail evaluated with 1 - (1 + u/w)^(-1/p) formed by expm1, so the boundary
layer at B near 1 keeps full relative precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import BetaParams, GammaParams, GGaParams, overshoot_log_norm
from .quadrature import QuadConfig, QuadInfo, integrate_log
from .specfun import LogProb, log_gamma, log_reg_beta_upper, log_reg_gamma_upper

W_MAX = 1e8


@dataclass(frozen=True)
class TailQuery:
    beta: BetaParams
    gga: GGaParams
    t: float

    def __post_init__(self):
        t = float(self.t)
        if not (math.isfinite(t) and t >= 0):
            raise ValueError("t must be finite and nonnegative")
        object.__setattr__(self, "t", t)

    @classmethod
    def from_values(cls, a, b, c, p, t) -> TailQuery:
        return cls(BetaParams(a, b), GGaParams(c, p), t)

    @property
    def w(self) -> float:
        return self.t ** self.gga.p


def _log_beta_upper_at_scale(beta: BetaParams, p: float, log_scale: np.ndarray):
    """ln P(B > e^(-log_scale/p)), with the complement from expm1."""
    s = log_scale / p
    return log_reg_beta_upper(beta.a, beta.b, np.exp(-s), -np.expm1(-s))


def _breakpoints(w: float, upper: float) -> np.ndarray:
    # geometric panels resolve the u^b onset at 0 and the scale-w rise of
    # the beta factor when w is small
    first = min(1.0, w) / 16.0
    pts = [0.0]
    edge = first
    while edge < upper:
        pts.append(edge)
        edge *= 2.0
    pts.append(upper)
    return np.asarray(pts)


def log_overshoot_integral(beta: BetaParams, p: float, r: float, w: float,
                           cfg: QuadConfig | None = None, full_output=False):
    """ln J, J = int_0^inf (1 + u/w)^(r-1) e^(-u) P(B^p (w + u) > w) du."""
    cfg = cfg or QuadConfig()
    if not w > 0:
        raise ValueError("w must be positive")

    def log_f(u):
        ls = np.log1p(u / w)
        return (r - 1.0) * ls - u + _log_beta_upper_at_scale(beta, p, ls)

    # integral of the envelope (1 + u/w)^(r-1) e^(-u) beyond U
    def log_tail(upper):
        if r == 1.0:
            return -upper
        return ((1.0 - r) * math.log(w) + w + log_gamma(r)
                + log_reg_gamma_upper(r, w + upper))

    start = 64.0 * max(1.0, r)
    value, info = integrate_log(log_f, _breakpoints(w, start), cfg, log_tail_bound=log_tail)
    return (value, info) if full_output else value


def _validate(query: TailQuery):
    if query.w > W_MAX:
        raise ValueError(f"w = t^p = {query.w:g} exceeds {W_MAX:g}")


def log_tail_exact(query: TailQuery, cfg: QuadConfig | None = None, full_output=False):
    """ln P(B^p W > w) = ln P(BZ > t).

    With ``full_output`` returns ``(value, QuadInfo)``; ``info.log_delta`` is
    the log-difference between the last two refinement levels.
    """
    _validate(query)
    if query.t == 0:
        return (0.0, QuadInfo(0.0, -math.inf, 0, 0, 0.0)) if full_output else 0.0
    r, w = query.gga.r, query.w
    log_j, info = log_overshoot_integral(query.beta, query.gga.p, r, w, cfg, full_output=True)
    value = min(0.0, (r - 1.0) * math.log(w) - w - log_gamma(r) + log_j)
    return (value, info) if full_output else value


def log_conditional_tail(query: TailQuery, cfg: QuadConfig | None = None) -> LogProb:
    """ln P(B^p W > w | W > w), the exact tail minus ln P(W > w).

    Evaluated as ln J - ln(int_0^inf (1 + u/w)^(r-1) e^(-u) du) so the e^(-w)
    factors cancel analytically rather than numerically.
    """
    _validate(query)
    if query.t == 0:
        return 0.0
    return conditional_tail_at(query.beta, query.gga.p, query.gga.r, query.w, cfg)


def conditional_tail_at(beta: BetaParams, p: float, r: float, w: float,
                        cfg: QuadConfig | None = None) -> LogProb:
    """:func:`log_conditional_tail` addressed by the transformed threshold w."""
    log_j = log_overshoot_integral(beta, p, r, w, cfg)
    return min(0.0, log_j - overshoot_log_norm(GammaParams(r), w))
