"""Naive and conditional (overshoot) Monte Carlo estimators of P(BZ > t).

Substreams. From a user seed every estimator draws on
``RngState(seed, stream)`` with

    stream = STREAM_STRIDE * shard + role

and ``role`` one of the constants below. Shard k of a sharded run therefore
uses streams disjoint from every other shard and from every other role, and
a run split into shards is reproducible from (seed, shard plan) alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import (
    RngState,
    sample_beta,
    sample_gamma_overshoot,
    sample_gga,
)
from .exact_tail import TailQuery
from .specfun import LogProb, log_reg_gamma_upper

ROLE_NAIVE_BETA = 0
ROLE_NAIVE_GGA = 1
ROLE_COND_BETA = 2
ROLE_COND_OVERSHOOT = 3
STREAM_STRIDE = 16

# fewer hits than this and the indicator variance estimate is not trusted
MIN_HITS = 10


@dataclass(frozen=True)
class McConfig:
    n: int
    seed: int = 0
    shards: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if int(self.shards) != self.shards or not 1 <= self.shards <= self.n:
            raise ValueError("shards must be an integer in [1, n]")

    def shard_sizes(self) -> list[int]:
        base, extra = divmod(self.n, self.shards)
        return [base + (k < extra) for k in range(self.shards)]


@dataclass(frozen=True)
class McEstimate:
    """``log_mean`` is ln of the estimate; ``stderr_rel`` is stderr / estimate."""

    log_mean: LogProb
    stderr_rel: float
    n: int
    seed: int
    hits: int
    undersampled: bool

    @property
    def mean(self) -> float:
        return math.exp(self.log_mean)

    @property
    def stderr(self) -> float:
        return self.mean * self.stderr_rel


def _stream(seed: int, shard: int, role: int) -> RngState:
    return RngState(seed, STREAM_STRIDE * shard + role)


def _from_hits(log_scale: float, hits: int, n: int, seed: int) -> McEstimate:
    # estimate = scale * hits / n; stderr of the indicator mean is sqrt(m(1-m)/n)
    if hits == 0:
        return McEstimate(-math.inf, math.inf, n, seed, 0, True)
    m = hits / n
    stderr_rel = math.sqrt((1.0 - m) / (m * n))
    return McEstimate(min(0.0, log_scale + math.log(m)), stderr_rel, n, seed, hits,
                      hits < MIN_HITS)


def _naive_hits(query: TailQuery, n: int, seed: int, shard: int) -> int:
    b = sample_beta(query.beta, _stream(seed, shard, ROLE_NAIVE_BETA), size=n)
    z = sample_gga(query.gga, _stream(seed, shard, ROLE_NAIVE_GGA), size=n)
    return int(np.count_nonzero(b * z > query.t))


def mc_naive(query: TailQuery, cfg: McConfig) -> McEstimate:
    """Fraction of n draws with B Z > t."""
    if query.t == 0:
        return McEstimate(0.0, 0.0, cfg.n, cfg.seed, cfg.n, False)
    hits = sum(_naive_hits(query, m, cfg.seed, k) for k, m in enumerate(cfg.shard_sizes()))
    return _from_hits(0.0, hits, cfg.n, cfg.seed)


def _conditional_hits(query: TailQuery, n: int, seed: int, shard: int) -> int:
    p, w = query.gga.p, query.w
    b = sample_beta(query.beta, _stream(seed, shard, ROLE_COND_BETA), size=n)
    o = sample_gamma_overshoot(query.gga.transformed(), w,
                               _stream(seed, shard, ROLE_COND_OVERSHOOT), size=n)
    # B^p (w + O) > w  <=>  p ln B > -ln(1 + O/w)
    with np.errstate(divide="ignore"):
        return int(np.count_nonzero(p * np.log(b) > -np.log1p(o / w)))


def mc_conditional(query: TailQuery, cfg: McConfig) -> McEstimate:
    """P(W > w) times the fraction of draws with B^p (w + O) > w, O an exact overshoot.

    P(W > w) is computed, not sampled, so the relative error depends only on
    the conditional probability, which tends to a positive limit times
    w^-b rather than to zero exponentially.
    """
    w = query.w
    if not w > 0:
        raise ValueError("mc_conditional needs t > 0")
    log_scale = log_reg_gamma_upper(query.gga.r, w)
    hits = sum(_conditional_hits(query, m, cfg.seed, k)
               for k, m in enumerate(cfg.shard_sizes()))
    return _from_hits(log_scale, hits, cfg.n, cfg.seed)
