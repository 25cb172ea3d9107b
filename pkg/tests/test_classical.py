import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kickwalk.analysis import diffusion_slope
from kickwalk.bessel import bessel_j2
from kickwalk.classical import (KAPPA_CR, ClassicalEnsemble, DiffusionTheory, d0, d_rho, d_simple,
                                evolve_classical, standard_map_step, wrap_angle)
from kickwalk.errors import BelowChaosThresholdError, InvalidInputError, UnsupportedRegimeError
from kickwalk.series import VarianceSeries
from scipy.special import jv


def test_fixed_point():
    assert standard_map_step(0.0, 0.0, 5.5) == (0.0, 0.0)


def test_substitution_and_wrap():
    th, p = standard_map_step(np.pi / 2, 0.0, 2.0)
    assert p == pytest.approx(2.0)
    assert th == pytest.approx(np.pi / 2 + 2 - 2 * np.pi)
    assert th == pytest.approx(-2.7124, abs=1e-4)


@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(0, 20))
def test_theta_stays_in_range(theta, p, kappa):
    th, _ = standard_map_step(theta, p, kappa)
    assert -np.pi <= th < np.pi


def test_wrap_edge_cases():
    assert wrap_angle(np.pi) == -np.pi
    assert -np.pi <= wrap_angle(-1e-18) < np.pi


@settings(max_examples=50)
@given(st.floats(-np.pi, np.pi), st.floats(-20, 20), st.floats(0.1, 12))
def test_area_preservation(theta, p, kappa):
    h = 1e-6

    def unwrapped(th, pp):
        p2 = pp + kappa * np.sin(th)
        return th + p2, p2

    f0 = np.array(unwrapped(theta, p))
    a = (np.array(unwrapped(theta + h, p)) - f0) / h
    b = (np.array(unwrapped(theta, p + h)) - f0) / h
    assert abs(a[0] * b[1] - a[1] * b[0] - 1.0) < 1e-6 * max(1.0, kappa)


def test_d0_values():
    assert d0(0.9716 + 1e-12) == pytest.approx(0.0, abs=1e-30)
    assert d0(2.0) == pytest.approx(0.5 * 0.6 * 1.0284 ** 3, rel=1e-12)
    assert d0(2.0) == pytest.approx(0.3263, abs=1e-4)
    j2 = jv(2, 5.5)
    assert d0(5.5) == pytest.approx(0.5 * 5.5 ** 2 * (1 - 2 * j2 + 2 * j2 ** 2), rel=1e-12)
    assert d0(5.5) == pytest.approx(19.1, abs=0.05)


def test_d0_threshold():
    with pytest.raises(BelowChaosThresholdError):
        d0(KAPPA_CR)
    with pytest.raises(BelowChaosThresholdError):
        d0(0.5)


def test_d_rho_values():
    j2 = jv(2, 5.5)
    assert d_rho(5.5, 0) == pytest.approx(0.5 * 5.5 ** 2 * (1 - 2 * j2 + j2 ** 2), rel=1e-12)
    assert d_rho(5.5, 10) - d_rho(5.5, 0) == pytest.approx(100.0, rel=1e-12)
    j2 = jv(2, 11.6)
    assert d_rho(11.6, 1) == pytest.approx(1 + 0.5 * 11.6 ** 2 * (1 - 2 * j2 + j2 ** 2), rel=1e-12)
    with pytest.raises(UnsupportedRegimeError):
        d_rho(4.4, 1)


@given(st.floats(4.5, 30))
def test_d0_vs_d_rho(kappa):
    assert d_rho(kappa, 0) <= d0(kappa)
    assert d0(kappa) - d_rho(kappa, 0) == pytest.approx(0.5 * kappa ** 2 * bessel_j2(kappa) ** 2,
                                                        rel=1e-9, abs=1e-12)


@given(st.floats(KAPPA_CR + 1e-9, 30))
def test_d0_non_negative(kappa):
    assert d0(kappa) >= 0


def test_theory_record():
    th = DiffusionTheory(5.5, 3)
    assert th.kappa_cr == 0.9716
    assert th.d_rho == d_rho(5.5, 3) and th.d0 == d0(5.5) and th.d_simple == d_simple(5.5)


def test_no_kick_constant_variance():
    ens = ClassicalEnsemble.uniform_square(200, 0.0, 1.0, seed=1)
    s = evolve_classical(ens, 20)
    assert np.allclose(s.sigma2, s.sigma2[0], rtol=1e-12)


def test_determinism():
    a = evolve_classical(ClassicalEnsemble.uniform_square(100, 5.5, seed=7), 30)
    b = evolve_classical(ClassicalEnsemble.uniform_square(100, 5.5, seed=7), 30)
    c = evolve_classical(ClassicalEnsemble.uniform_square(100, 5.5, seed=8), 30)
    assert np.array_equal(a.sigma2, b.sigma2)
    assert not np.array_equal(a.sigma2, c.sigma2)


def test_partitioning_is_bitwise_neutral():
    whole = ClassicalEnsemble.uniform_square(300, 5.5, seed=4)
    parts = [ClassicalEnsemble.uniform_square(n, 5.5, seed=4, start=s) for s, n in [(0, 120), (120, 180)]]
    assert np.array_equal(whole.theta, np.concatenate([p.theta for p in parts]))
    assert np.array_equal(whole.p, np.concatenate([p.p for p in parts]))


def test_initial_square():
    ens = ClassicalEnsemble.uniform_square(1000, 5.5, delta=0.1, seed=0)
    assert np.all(np.abs(ens.theta) <= 0.05) and np.all(np.abs(ens.p) <= 0.05)
    assert len(ens) == 1000


def test_errors():
    with pytest.raises(InvalidInputError):
        evolve_classical(ClassicalEnsemble(np.array([]), np.array([]), 5.5), 10)
    with pytest.raises(InvalidInputError):
        evolve_classical(ClassicalEnsemble.uniform_square(10, 5.5), 0)


def test_kappa_5p5_slope_near_d0():
    s = evolve_classical(ClassicalEnsemble.uniform_square(1000, 5.5, 1.0, seed=0), 100)
    assert diffusion_slope(s, 5) == pytest.approx(d0(5.5), rel=0.10)
    assert s.metadata["ensemble"] == 1000


@given(st.integers(0, 50), st.floats(-100, 100))
def test_slope_invariant_under_time_shift(shift, offset):
    t = np.arange(0, 80)
    sig = 3.0 * t + np.sin(t) + 200
    a = diffusion_slope(VarianceSeries(t, sig), 5, 60)
    b = diffusion_slope(VarianceSeries(t + shift, sig + offset + 100), 5 + shift, 60 + shift)
    assert a == pytest.approx(b, rel=1e-9)
