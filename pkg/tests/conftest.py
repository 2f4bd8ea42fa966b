"""Independent high-precision oracles shared by the test modules."""
import math

import mpmath as mp
import pytest


def mp_log_gamma_upper(s, x, dps=60):
    """ln Q(s, x) in arbitrary precision; log1p of the lower part when Q is near 1."""
    with mp.workdps(dps):
        s, x = mp.mpf(s), mp.mpf(x)
        if x < s:
            return float(mp.log1p(-mp.gammainc(s, 0, x, regularized=True)))
        return float(mp.log(mp.gammainc(s, x, mp.inf)) - mp.loggamma(s))


def mp_log_beta_upper(a, b, x, y=None, dps=80):
    """ln P(Beta(a, b) > x) from the 2F1 series of whichever side converges fast.

    ``y`` optionally gives 1 - x exactly; x is then recomputed as 1 - y.
    """
    with mp.workdps(dps):
        a, b = mp.mpf(a), mp.mpf(b)
        if y is None:
            x = mp.mpf(x)
            y = 1 - x
        else:
            y = mp.mpf(y)
            x = 1 - y
        lb = mp.log(mp.beta(a, b))
        if y < (b + 1) / (a + b + 2):
            return float(b * mp.log(y) + a * mp.log(x) - mp.log(b) - lb
                         + mp.log(mp.hyp2f1(a + b, 1, b + 1, y)))
        low = mp.exp(a * mp.log(x) + b * mp.log(y) - mp.log(a) - lb) * mp.hyp2f1(a + b, 1, a + 1, x)
        return float(mp.log1p(-low))


def rel_close(x, y, rel):
    return abs(x - y) <= rel * max(abs(x), abs(y), 1e-300)


@pytest.fixture
def oracle_gamma():
    return mp_log_gamma_upper


@pytest.fixture
def oracle_beta():
    return mp_log_beta_upper
