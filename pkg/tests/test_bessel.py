import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import jv

from kickwalk.bessel import bessel_j2, bessel_jn


def series_oracle(n, x, terms=60):
    # independent ascending series in mpmath, far more terms than needed
    mpmath.mp.dps = 40
    x = mpmath.mpf(x)
    return float(mpmath.fsum((-1) ** k / (mpmath.factorial(k) * mpmath.factorial(k + n)) * (x / 2) ** (2 * k + n)
                             for k in range(terms)))


def test_j2_zero():
    assert bessel_j2(0.0) == 0.0


@pytest.mark.parametrize("x", [5.5, 11.6, 4.5, 11.0, 12.0])
def test_j2_against_series(x):
    assert abs(bessel_j2(x) - series_oracle(2, x)) < 1e-10


@given(st.integers(-40, 40), st.floats(0, 40))
def test_jn_against_scipy(n, x):
    assert abs(bessel_jn(n, x) - jv(n, x)) < 1e-10


@given(st.integers(0, 30), st.floats(0, 30))
def test_reflection_identities(n, x):
    assert bessel_jn(-n, x) == pytest.approx((-1) ** n * bessel_jn(n, x), abs=1e-14)
    assert bessel_jn(n, -x) == pytest.approx((-1) ** n * bessel_jn(n, x), abs=1e-14)


@pytest.mark.parametrize("x", [0.3, 5.5, 11.6, 25.0])
def test_sum_rule(x):
    # sum_k J_k(x)^2 = 1
    total = math.fsum(bessel_jn(k, x) ** 2 for k in range(-80, 81))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_vectorised_callers_get_floats():
    assert isinstance(bessel_j2(np.float64(5.5)), float)
