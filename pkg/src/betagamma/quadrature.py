"""Adaptive Gauss-Kronrod (7/15) quadrature of integrands given in log form.

The integrand is a vectorized callable returning ``ln f(u)``; panel sums
are formed after shifting by the panel maximum, and panels are combined by
log-sum-exp, so integrals far below the double-precision underflow limit
are fine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .specfun import ConvergenceError, logsumexp

# Kronrod 15-point abscissae (non-negative half, descending) and weights,
# with the embedded 7-point Gauss weights on the odd-indexed nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))
KRONROD_WEIGHTS = np.concatenate((_WGK[:-1], _WGK[::-1]))
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:15:2] = _WG[2::-1]


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and truncation policy shared by every integral.

    ``truncation_log_tol`` is the log of the largest admissible ratio between
    discarded tail mass and the accumulated integral; None means
    ``ln(rel_tol / 10)``.
    """

    rel_tol: float = 1e-10
    max_refinements: int = 30
    truncation_log_tol: float | None = None

    def __post_init__(self):
        if not 0 < self.rel_tol <= 1e-3:
            raise ValueError("rel_tol must lie in (0, 1e-3]")
        if self.max_refinements < 4:
            raise ValueError("max_refinements must be at least 4")

    @property
    def log_truncation(self) -> float:
        if self.truncation_log_tol is not None:
            return self.truncation_log_tol
        return math.log(self.rel_tol / 10.0)


@dataclass(frozen=True)
class QuadInfo:
    """Diagnostics of one integral.

    ``log_delta`` is |ln I_k - ln I_(k-1)| between the last two refinement
    levels; ``log_err`` is the log of the summed Kronrod-Gauss error
    estimate plus the truncation bound.
    """

    log_delta: float
    log_err: float
    levels: int
    panels: int
    upper: float


def _panel_estimates(log_f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    vals = np.asarray(log_f(x.ravel()), dtype=float).reshape(x.shape)
    if np.any(np.isnan(vals)):
        raise FloatingPointError("integrand returned NaN")
    m = vals.max(axis=1)
    finite = np.isfinite(m)
    shift = np.where(finite, m, 0.0)
    scaled = np.exp(vals - shift[:, None])
    k = scaled @ KRONROD_WEIGHTS
    g = scaled @ GAUSS_WEIGHTS
    with np.errstate(divide="ignore"):
        log_half = np.log(half)
        log_k = np.where(finite, np.log(k) + shift + log_half, -np.inf)
        log_e = np.where(finite, np.log(np.abs(k - g)) + shift + log_half, -np.inf)
    return log_k, log_e


def integrate_log(
    log_f: Callable[[np.ndarray], np.ndarray],
    breakpoints,
    cfg: QuadConfig,
    log_tail_bound: Callable[[float], float] | None = None,
    extend_to: float = math.inf,
):
    """ln of the integral of exp(log_f) from ``breakpoints[0]`` onwards.

    Without ``log_tail_bound`` the domain is exactly the breakpoint span.
    With it, the domain is doubled (up to ``extend_to``) until the bound on
    the mass beyond the current upper limit drops below
    ``cfg.log_truncation`` relative to the integral.

    Returns ``(log_value, QuadInfo)``.
    """
    pts = np.asarray(breakpoints, dtype=float)
    lo, hi = pts[:-1].copy(), pts[1:].copy()
    log_k, log_e = _panel_estimates(log_f, lo, hi)
    upper = float(pts[-1])
    log_tol = math.log(cfg.rel_tol)
    previous = None
    for level in range(cfg.max_refinements + 1):
        total = logsumexp(log_k)
        err = logsumexp(log_e)
        tail = -math.inf
        if log_tail_bound is not None and upper < extend_to:
            tail = log_tail_bound(upper)
            if tail > total + cfg.log_truncation:
                new_upper = min(2.0 * upper, extend_to)
                edges = np.linspace(upper, new_upper, 5)
                nk, ne = _panel_estimates(log_f, edges[:-1], edges[1:])
                lo = np.concatenate((lo, edges[:-1]))
                hi = np.concatenate((hi, edges[1:]))
                log_k = np.concatenate((log_k, nk))
                log_e = np.concatenate((log_e, ne))
                upper = new_upper
                previous = total
                continue
        delta = abs(total - previous) if previous is not None else math.inf
        if total == -math.inf:
            return total, QuadInfo(0.0, -math.inf, level, lo.size, upper)
        if err <= total + log_tol:
            log_err = float(np.logaddexp(err, tail))
            if previous is None:
                delta = math.exp(err - total)
            return total, QuadInfo(delta, log_err, level, lo.size, upper)
        # bisect every panel carrying more than its share of the budget
        share = total + log_tol - math.log(lo.size)
        split = log_e > share
        split[np.argmax(log_e)] = True
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate((lo[split], mid))
        new_hi = np.concatenate((mid, hi[split]))
        nk, ne = _panel_estimates(log_f, new_lo, new_hi)
        keep = ~split
        lo = np.concatenate((lo[keep], new_lo))
        hi = np.concatenate((hi[keep], new_hi))
        log_k = np.concatenate((log_k[keep], nk))
        log_e = np.concatenate((log_e[keep], ne))
        previous = total
    raise ConvergenceError(
        f"quadrature did not reach rel_tol={cfg.rel_tol:g} within "
        f"{cfg.max_refinements} refinement levels")
