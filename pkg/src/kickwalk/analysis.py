"""Ensemble statistics, recentred shape histograms and the kappa scans."""
from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from .bessel import bessel_j2
from .classical import BESSEL_BRANCH, d0, d_rho
from .errors import DegenerateFitError, InsufficientSupportError, InvalidInputError, UnsupportedRegimeError
from .evolution import SystemSpec, run_ensemble
from .lattice import MOMENTUM, QuantumState
from .series import ScanRow, ShapeHistogram, VarianceSeries
from .walk import WalkSpec

SYSTEMS = {
    "kr": None,
    "kr+hadamard": "fixed_hadamard",
    "kr+disorder": "random_in_space",
    "kr+diffusive": "random_in_space_time",
}

# reference fit for the disordered walk combined with the kicked rotor
DISORDER_A = 1.85
DISORDER_B = 0.387


# -- shapes -----------------------------------------------------------------

def recentered_histogram(states: list[QuantumState]) -> ShapeHistogram:
    """Average |<m|psi>|^2 against m' = m - <m>, in unit bins centred on integers.

    <m> is generally not an integer, so each probability is split linearly
    between the two bins that straddle its m'.
    """
    if not states:
        raise InvalidInputError("need at least one state")
    shifted = []
    for s in states:
        if s.representation != MOMENTUM:
            raise InvalidInputError("states must be in the momentum representation")
        P = s.momentum_probabilities()
        m = s.lattice.m.astype(np.float64)
        mean = float(P @ m)
        x = m - mean
        lo = np.floor(x)
        shifted.append((lo.astype(np.int64), x - lo, P))
    lo_min = min(int(lo.min()) for lo, _, _ in shifted)
    hi_max = max(int(lo.max()) + 1 for lo, _, _ in shifted)
    size = hi_max - lo_min + 1
    acc = np.zeros(size)
    for lo, frac, P in shifted:
        idx = lo - lo_min
        # round-off can put two sites into the same floor bin, so accumulate with bincount
        acc += np.bincount(idx, P * (1.0 - frac), size) + np.bincount(idx + 1, P * frac, size)
    acc /= acc.sum()
    bins = np.arange(lo_min, hi_max + 1)
    nz = np.flatnonzero(acc)
    keep = slice(min(nz[0], -lo_min), max(nz[-1], -lo_min) + 1)
    return ShapeHistogram(bins[keep], acc[keep], {"states": len(states)})


def shape_model(m_prime, l_s: float):
    """(1 + 2|m'|/l_s) / (2 l_s) * exp(-2|m'|/l_s); unit mass, second moment l_s^2."""
    if not l_s > 0:
        raise InvalidInputError(f"l_s must be positive, got {l_s!r}")
    y = 2.0 * np.abs(np.asarray(m_prime, dtype=np.float64)) / l_s
    return (1.0 + y) / (2.0 * l_s) * np.exp(-y)


def sample_shape(rng: np.random.Generator, l_s: float, size: int) -> np.ndarray:
    """Draw m' from the shape model: |m'| = l_s/2 * Gamma(k), k in {1, 2} with equal odds."""
    k = 1 + (rng.random(size) < 0.5)
    mag = 0.5 * l_s * rng.gamma(k)
    sign = np.where(rng.random(size) < 0.5, -1.0, 1.0)
    return sign * mag


def fit_ls(hist: ShapeHistogram, floor: float = 1e-6, scale: str = "linear",
           min_bins: int = 10) -> tuple[float, float]:
    """One-parameter fit of the shape model; returns (l_s, rms log residual).

    Only bins above ``floor * peak`` enter. ``scale="linear"`` minimises the
    squared probability residuals, so the fit is carried by the core of the
    profile; ``scale="log"`` minimises squared log residuals and is pulled by
    the tails.
    """
    p = hist.probability
    mask = p > floor * p.max()
    if mask.sum() < min_bins:
        raise InsufficientSupportError(f"only {int(mask.sum())} bins above the floor, need {min_bins}")
    x = hist.m_prime[mask].astype(np.float64)
    y = p[mask]
    logy = np.log(y)

    if scale == "linear":
        def cost(u):
            return np.sum((y - shape_model(x, np.exp(u))) ** 2)
    elif scale == "log":
        def cost(u):
            return np.sum((logy - np.log(shape_model(x, np.exp(u)))) ** 2)
    else:
        raise InvalidInputError(f"unknown fit scale {scale!r}")

    span = max(np.abs(x).max(), 1.0)
    res = minimize_scalar(cost, bounds=(np.log(0.05), np.log(20.0 * span)), method="bounded",
                          options={"xatol": 1e-10})
    l_s = float(np.exp(res.x))
    resid = float(np.sqrt(np.mean((logy - np.log(shape_model(x, l_s))) ** 2)))
    return l_s, resid


# -- variance series --------------------------------------------------------

def _window(series: VarianceSeries, window):
    t_min, t_max = window
    sel = (series.t >= t_min) & (series.t <= t_max)
    if sel.sum() < 2:
        raise InvalidInputError(f"window {window} holds fewer than two points")
    return series.t[sel].astype(np.float64), series.sigma2[sel]


def slope_loglog(series: VarianceSeries, window: tuple[float, float]) -> float:
    t, s = _window(series, window)
    if np.any(s <= 0) or np.any(t <= 0):
        raise InvalidInputError("log-log slope needs positive t and sigma2 in the window")
    return float(np.polyfit(np.log(t), np.log(s), 1)[0])


def diffusion_slope(series: VarianceSeries, t_min: int = 5, t_max: int | None = None) -> float:
    """Ordinary least-squares slope of sigma2 against t; t < t_min is a transient and skipped."""
    t_max = series.t[-1] if t_max is None else t_max
    t, s = _window(series, (t_min, t_max))
    return float(np.polyfit(t, s, 1)[0])


def departure_time(series: VarianceSeries, D: float, fraction: float = 0.5) -> int | None:
    """First t >= 1 at which sigma2 drops below ``fraction * D * t``."""
    for t, s in zip(series.t, series.sigma2):
        if t >= 1 and s < fraction * D * t:
            return int(t)
    return None


# -- kappa scans ------------------------------------------------------------

def bessel_modulation(kappa: float) -> float:
    """1 - 2 J_2 + J_2^2, the factor in the walk-modified diffusion constant."""
    j2 = bessel_j2(kappa)
    return 1.0 - 2.0 * j2 + j2 * j2


def scan_time(kappa: float, hbar_eff: float = 1.0) -> int:
    """Sampling time 10 t_loc, with the pure kicked-rotor t_loc for every system."""
    return max(1, int(round(10.0 * d0(kappa) / hbar_eff ** 2)))


def scan_theory(system: str, kappa: float) -> float:
    k2 = 2.0 / kappa ** 2
    if system == "kr":
        return k2 * d0(kappa)
    if system == "kr+hadamard":
        return k2 * d_rho(kappa, 1)
    if system == "kr+diffusive":
        return float(np.sqrt(10.0 * k2 * d0(kappa)))
    if system == "kr+disorder":
        return DISORDER_A + DISORDER_B * bessel_modulation(kappa)
    raise InvalidInputError(f"unknown system {system!r}; expected one of {sorted(SYSTEMS)}")


def scan_system(system: str, kappa: float, N: int, seed: int = 0, hbar_eff: float = 1.0,
                m0: int = 0) -> SystemSpec:
    if system not in SYSTEMS:
        raise InvalidInputError(f"unknown system {system!r}; expected one of {sorted(SYSTEMS)}")
    policy = SYSTEMS[system]
    walk = None if policy is None else WalkSpec(rho=1, policy=policy, seed=seed)
    return SystemSpec(N=N, hbar_eff=hbar_eff, kappa=kappa, walk=walk, m0=m0, spread=True)


def kappa_scan(system: str, kappas, ensemble: int = 32, N: int = 4096, seed: int = 0,
               hbar_eff: float = 1.0, workers: int = 1) -> list[ScanRow]:
    """(2/kappa^2) * sqrt(mean sigma_p^2 at 10 t_loc) for each kappa."""
    rows = []
    for kappa in kappas:
        if kappa < BESSEL_BRANCH:
            raise UnsupportedRegimeError(f"kappa scans need kappa >= {BESSEL_BRANCH}, got {kappa}")
        spec = scan_system(system, kappa, N, seed, hbar_eff)
        T = scan_time(kappa, hbar_eff)
        res = run_ensemble(spec, T, ensemble, workers)
        value = 2.0 / kappa ** 2 * np.sqrt(res.series.sigma2[-1])
        rows.append(ScanRow(float(kappa), system, float(value), scan_theory(system, kappa)))
    return rows


def fit_scan_curve(kappas, values, model: str = "affine_bessel", return_errors: bool = False):
    """Least squares of a + b * (1 - 2 J_2(kappa) + J_2(kappa)^2); returns (a, b, rms residual)."""
    if model != "affine_bessel":
        raise InvalidInputError(f"unknown scan model {model!r}")
    kappas = np.asarray(kappas, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if kappas.size < 5:
        raise InvalidInputError("need at least 5 points")
    g = np.array([bessel_modulation(k) for k in kappas])
    A = np.column_stack([np.ones_like(g), g])
    if np.linalg.matrix_rank(A, tol=1e-10 * max(1.0, np.abs(g).max())) < 2:
        raise DegenerateFitError("design matrix is rank deficient (modulation is constant over the kappas)")
    coef, *_ = np.linalg.lstsq(A, values, rcond=None)
    resid = values - A @ coef
    rms = float(np.sqrt(np.mean(resid ** 2)))
    a, b = float(coef[0]), float(coef[1])
    if not return_errors:
        return a, b, rms
    dof = max(values.size - 2, 1)
    cov = np.linalg.inv(A.T @ A) * (resid @ resid) / dof
    return a, b, rms, float(np.sqrt(cov[0, 0])), float(np.sqrt(cov[1, 1]))
