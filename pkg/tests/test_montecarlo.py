import math

import numpy as np
import pytest

from betagamma.exact_tail import TailQuery, log_tail_exact
from betagamma.montecarlo import McConfig, McEstimate, mc_conditional, mc_naive


def q(a, b, c, p, t):
    return TailQuery.from_values(a, b, c, p, t)


def within(est: McEstimate, target: float, k: float) -> bool:
    return abs(est.mean - target) <= k * est.stderr


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(0)
    with pytest.raises(ValueError):
        McConfig(10, seed=-1)
    with pytest.raises(ValueError):
        McConfig(10, shards=11)
    assert McConfig(10, shards=3).shard_sizes() == [4, 3, 3]


def test_naive_zero_threshold_is_exact():
    est = mc_naive(q(2, 3, 6, 2, 0.0), McConfig(1000, 1))
    assert est.log_mean == 0.0 and est.stderr_rel == 0.0 and not est.undersampled


def test_naive_identity_oracle():
    est = mc_naive(q(1, 1, 2, 1, 1.0), McConfig(100_000, 11))
    assert within(est, math.exp(-1.0), 3.0)
    assert est.log_mean <= 0.0


def test_naive_flags_deep_tail():
    est = mc_naive(q(1, 1, 2, 1, 40.0), McConfig(100_000, 12))
    assert est.undersampled
    assert est.hits == 0 and est.log_mean == -math.inf


def test_conditional_identity_oracle():
    est = mc_conditional(q(1, 1, 2, 1, 30.0), McConfig(100_000, 1))
    assert within(est, math.exp(-30.0), 3.0)
    assert est.stderr_rel <= 0.05


def test_conditional_against_quadrature():
    query = q(1, 1, 1, 1, 2.0)
    est = mc_conditional(query, McConfig(100_000, 13))
    assert within(est, math.exp(log_tail_exact(query)), 3.0)


def test_conditional_small_threshold_tends_to_one():
    means = [mc_conditional(q(1, 1, 1, 1, t), McConfig(20_000, 14)).mean for t in (1.0, 0.1, 0.01, 0.001)]
    assert means[-1] > 0.99
    assert means[0] < means[-1]


def test_conditional_rejects_zero_threshold():
    with pytest.raises(ValueError):
        mc_conditional(q(1, 1, 1, 1, 0.0), McConfig(10))


def test_conditional_propagates_envelope_precondition():
    with pytest.raises(ValueError):
        mc_conditional(q(2, 3, 6, 2, 1.0), McConfig(10))  # r = 3 >= w + 1 = 2


def test_conditional_unbiased_over_seeds():
    query = q(0.5, 1.7, 2.2, 0.5, 25.0)
    exact = math.exp(log_tail_exact(query))
    ests = [mc_conditional(query, McConfig(10_000, 1000 + s)) for s in range(50)]
    means = np.array([e.mean for e in ests])
    pooled = math.sqrt(np.mean([e.stderr**2 for e in ests]) / len(ests))
    assert abs(means.mean() - exact) <= 4.0 * pooled


def test_naive_and_conditional_agree():
    query = q(2, 3, 6, 2, 2.0)
    naive = mc_naive(query, McConfig(100_000, 15))
    cond = mc_conditional(query, McConfig(100_000, 15))
    assert naive.hits >= 100
    joint = math.hypot(naive.stderr, cond.stderr)
    assert abs(naive.mean - cond.mean) <= 4.0 * joint


def test_determinism():
    query = q(0.5, 1.7, 2.2, 0.5, 25.0)
    assert mc_conditional(query, McConfig(5000, 77)) == mc_conditional(query, McConfig(5000, 77))
    assert mc_naive(query, McConfig(5000, 77)) == mc_naive(query, McConfig(5000, 77))
    assert mc_naive(query, McConfig(5000, 77)) != mc_naive(query, McConfig(5000, 78))


def test_shard_plan_reproducible():
    query = q(1, 1, 2, 1, 5.0)
    a = mc_conditional(query, McConfig(30_000, 5, shards=4))
    b = mc_conditional(query, McConfig(30_000, 5, shards=4))
    assert a == b
    # shard 0 of a one-shard plan is the plain run
    assert mc_conditional(query, McConfig(30_000, 5)) == mc_conditional(query, McConfig(30_000, 5, shards=1))


def test_sharded_estimate_is_consistent():
    query = q(1, 1, 2, 1, 5.0)
    est = mc_conditional(query, McConfig(60_000, 6, shards=3))
    assert within(est, math.exp(-5.0), 4.0)


def test_variance_advantage():
    query = q(1, 1, 2, 1, 30.0)
    cfg = McConfig(10_000, 16)
    assert mc_conditional(query, cfg).stderr_rel <= 0.1
    assert mc_naive(query, cfg).undersampled
