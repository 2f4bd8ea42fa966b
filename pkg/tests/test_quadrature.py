import math

import numpy as np
import pytest

from betagamma.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    QuadConfig,
    integrate_log,
)
from betagamma.specfun import ConvergenceError


@pytest.mark.parametrize("k", range(0, 23))
def test_kronrod_rule_exact_to_degree_22(k):
    exact = 0.0 if k % 2 else 2.0 / (k + 1)
    assert KRONROD_WEIGHTS @ NODES**k == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize("k", range(0, 14))
def test_gauss_rule_exact_to_degree_13(k):
    exact = 0.0 if k % 2 else 2.0 / (k + 1)
    assert GAUSS_WEIGHTS @ NODES**k == pytest.approx(exact, abs=1e-14)


def test_gauss_nodes_are_legendre():
    gauss_nodes = NODES[GAUSS_WEIGHTS > 0]
    assert np.allclose(gauss_nodes, np.polynomial.legendre.leggauss(7)[0], atol=1e-15)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadConfig(rel_tol=1e-2)
    with pytest.raises(ValueError):
        QuadConfig(max_refinements=3)
    assert QuadConfig(rel_tol=1e-8).log_truncation == pytest.approx(math.log(1e-9))


def test_finite_interval_polynomial():
    value, info = integrate_log(lambda x: 3.0 * np.log(x), [0.0, 2.0], QuadConfig())
    assert value == pytest.approx(math.log(4.0), rel=1e-14)
    assert info.levels == 0


def test_deep_underflow_integral():
    # int_0^inf e^(-2000 - u) du = e^-2000, far below the double range
    value, _ = integrate_log(lambda u: -2000.0 - u, [0.0, 1.0, 8.0], QuadConfig(),
                             log_tail_bound=lambda up: -2000.0 - up)
    assert value == pytest.approx(-2000.0, rel=1e-14)


def test_domain_extension_until_tail_negligible():
    value, info = integrate_log(lambda u: -u / 50.0, [0.0, 1.0], QuadConfig(),
                                log_tail_bound=lambda up: math.log(50.0) - up / 50.0)
    assert value == pytest.approx(math.log(50.0), rel=1e-10)
    assert info.upper > 1000.0


def test_extend_to_caps_domain():
    value, info = integrate_log(lambda u: -u, [0.0, 1.0], QuadConfig(),
                                log_tail_bound=lambda up: -up, extend_to=3.0)
    assert info.upper == 3.0
    assert value == pytest.approx(math.log(-math.expm1(-3.0)), rel=1e-12)


def test_endpoint_singularity_refines():
    # int_0^1 x^(1/2) dx = 2/3, with a singular derivative at 0
    value, info = integrate_log(lambda x: 0.5 * np.log(x), [0.0, 1.0], QuadConfig(rel_tol=1e-11))
    assert value == pytest.approx(math.log(2.0 / 3.0), abs=1e-10)
    assert info.levels > 0


def test_zero_integrand():
    value, _ = integrate_log(lambda x: np.full_like(x, -np.inf), [0.0, 1.0], QuadConfig())
    assert value == -math.inf


def test_stall_raises():
    with pytest.raises(ConvergenceError):
        integrate_log(lambda x: -0.999 * np.log(x), [0.0, 1.0],
                      QuadConfig(rel_tol=1e-12, max_refinements=4))


def test_nan_integrand_rejected():
    with pytest.raises(FloatingPointError):
        integrate_log(lambda x: np.full_like(x, np.nan), [0.0, 1.0], QuadConfig())
