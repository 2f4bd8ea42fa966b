"""Beta, generalized gamma and unit-scale gamma laws.

Parameter bundles validate on construction. Samplers draw from an explicit
:class:`RngState` and return a float when ``size`` is None, else an array.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .specfun import (
    LogProb,
    LogReal,
    log_beta,
    log_gamma,
    log_gamma_upper_scaled,
    log_reg_gamma_upper,
)


MIN_ENVELOPE_ACCEPTANCE = 0.05


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class BetaParams:
    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", _positive("a", self.a))
        object.__setattr__(self, "b", _positive("b", self.b))


@dataclass(frozen=True)
class GGaParams:
    """Generalized gamma GGa(c, p): density p x^(c-1) exp(-x^p) / Gamma(c/p)."""

    c: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, "c", _positive("c", self.c))
        object.__setattr__(self, "p", _positive("p", self.p))

    @property
    def r(self) -> float:
        """Shape of W = Z^p ~ Gamma(c/p, 1)."""
        return self.c / self.p

    def transformed(self) -> GammaParams:
        return GammaParams(self.r)


@dataclass(frozen=True)
class GammaParams:
    r: float

    def __post_init__(self):
        object.__setattr__(self, "r", _positive("r", self.r))


@dataclass
class RngState:
    """Seeded, counter-based random stream.

    Backed by Philox-4x64-10 keyed with ``seed + 2**64 * stream``: the same
    (seed, stream) pair gives the same draws on every platform, and distinct
    streams are statistically independent. Draws advance the state.
    """

    seed: int
    stream: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (0 <= self.seed < 2**64) or not (0 <= self.stream < 2**64):
            raise ValueError("seed and stream must be 64-bit unsigned integers")
        key = int(self.seed) + (int(self.stream) << 64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def substream(self, stream: int) -> RngState:
        return RngState(self.seed, stream)

    @property
    def generator(self) -> np.random.Generator:
        return self._gen


# ---------------------------------------------------------------------------
# densities and tails

def beta_log_pdf(params: BetaParams, x: float) -> LogReal:
    """(a-1) ln x + (b-1) ln(1-x) - ln B(a, b), with boundary limits at 0 and 1."""
    a, b = params.a, params.b
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    log_norm = log_beta(a, b)
    # at an endpoint the matching factor is 0, 1 or divergent; the other is 1
    if x in (0.0, 1.0):
        expo = a - 1.0 if x == 0.0 else b - 1.0
        if expo < 0:
            raise ValueError(f"density diverges at x={x:g}")
        return -math.inf if expo > 0 else -log_norm
    return (a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) - log_norm


def gga_log_pdf(params: GGaParams, x: float) -> LogReal:
    c, p = params.c, params.p
    x = float(x)
    if not x > 0:
        raise ValueError("x must be positive")
    return math.log(p) + (c - 1.0) * math.log(x) - x**p - log_gamma(c / p)


def gamma_log_pdf(params: GammaParams, x: float) -> LogReal:
    """Unit-scale Gamma(r) log density, the law of W = Z^p."""
    r = params.r
    x = float(x)
    if not x > 0:
        raise ValueError("x must be positive")
    return (r - 1.0) * math.log(x) - x - log_gamma(r)


def gga_log_tail(params: GGaParams, t: float) -> LogProb:
    """ln P(Z > t) = ln Q(c/p, t^p)."""
    t = float(t)
    if not t >= 0:
        raise ValueError("t must be nonnegative")
    return log_reg_gamma_upper(params.c / params.p, t**params.p)


# ---------------------------------------------------------------------------
# samplers

def _standard_gamma(r: float, n: int, gen: np.random.Generator) -> np.ndarray:
    # Marsaglia-Tsang: accept d*v, v = (1 + x/sqrt(9d))^3 with x ~ N(0, 1),
    # when ln U < x^2/2 + d - d v + d ln v. Shapes below 1 are boosted:
    # G(r) = G(r + 1) * U^(1/r).
    boost = r < 1.0
    shape = r + 1.0 if boost else r
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = max(16, int(1.1 * (n - filled)) + 8)
        x = gen.standard_normal(m)
        u = gen.random(m)
        v = 1.0 + c * x
        ok = v > 0
        v = np.where(ok, v, 1.0) ** 3
        with np.errstate(divide="ignore"):
            ok &= np.log(u) < 0.5 * x * x + d - d * v + d * np.log(v)
        acc = d * v[ok]
        take = min(acc.size, n - filled)
        out[filled:filled + take] = acc[:take]
        filled += take
    if boost:
        out *= np.exp(np.log(gen.random(n)) / r)
    return out


def _shaped(values: np.ndarray, size):
    return float(values[0]) if size is None else values.reshape(size)


def _count(size) -> int:
    return 1 if size is None else int(np.prod(size))


def sample_gamma(params: GammaParams, rng: RngState, size=None):
    return _shaped(_standard_gamma(params.r, _count(size), rng.generator), size)


def sample_beta(params: BetaParams, rng: RngState, size=None):
    """B = G_a / (G_a + G_b) from two unit-scale gamma draws."""
    n = _count(size)
    ga = _standard_gamma(params.a, n, rng.generator)
    gb = _standard_gamma(params.b, n, rng.generator)
    return _shaped(ga / (ga + gb), size)


def sample_gga(params: GGaParams, rng: RngState, size=None):
    """Z = W^(1/p) with W ~ Gamma(c/p)."""
    w = _standard_gamma(params.r, _count(size), rng.generator)
    return _shaped(w ** (1.0 / params.p), size)


def sample_gamma_overshoot(params: GammaParams, w: float, rng: RngState, size=None):
    """Exact draws of W - w given W > w, density proportional to (1 + u/w)^(r-1) e^(-u).

    Rejection from Exp(1) when r <= 1 (the weight is at most 1), and from
    Exp(1 - (r-1)/w) when 1 < r < w + 1, using (1 + u/w)^(r-1) <= e^((r-1)u/w).
    The acceptance probability of the second envelope, rate times the
    normaliser, tends to 0 as r approaches w + 1; below
    ``MIN_ENVELOPE_ACCEPTANCE`` draws come from inverting the gamma tail
    instead, which is accurate there because P(W > w) is then not small.
    """
    r = params.r
    w = float(w)
    if not w > 0:
        raise ValueError("w must be positive")
    if r >= w + 1.0:
        raise ValueError(f"overshoot envelope requires r < w + 1 (r={r}, w={w})")
    rate = 1.0 if r <= 1.0 else 1.0 - (r - 1.0) / w
    gen = rng.generator
    n = _count(size)
    if math.log(rate) + overshoot_log_norm(params, w) < math.log(MIN_ENVELOPE_ACCEPTANCE):
        # W = Qinv(r, Q(r, w) U) given W > w, U uniform on (0, 1]
        u = 1.0 - gen.random(n)
        tail = math.exp(log_reg_gamma_upper(r, w))
        x = special.gammainccinv(r, tail * u)
        return _shaped(np.maximum(x - w, 0.0), size)
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = max(16, int(1.25 * (n - filled)) + 8)
        u = gen.standard_exponential(m) / rate
        log_acc = (r - 1.0) * (np.log1p(u / w) - (0.0 if r <= 1.0 else u / w))
        ok = np.log(gen.random(m)) < log_acc
        acc = u[ok]
        take = min(acc.size, n - filled)
        out[filled:filled + take] = acc[:take]
        filled += take
    return _shaped(out, size)


def overshoot_log_norm(params: GammaParams, w: float) -> LogReal:
    """ln of the overshoot density's normalizer, the integral of (1 + u/w)^(r-1) e^(-u) over u >= 0.

    Equals ln[P(W > w) / (w^(r-1) e^(-w) / Gamma(r))].
    """
    return math.log(w) + log_gamma_upper_scaled(params.r, w)
