"""Classical kicked rotor: standard map, ensemble diffusion, diffusion constants."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bessel import bessel_j2
from .errors import BelowChaosThresholdError, InvalidInputError, UnsupportedRegimeError
from .rng import derive_stream
from .series import VarianceSeries

KAPPA_CR = 0.9716
BESSEL_BRANCH = 4.5


def wrap_angle(theta):
    """Map angles into [-pi, pi)."""
    out = np.mod(np.asarray(theta, dtype=np.float64) + np.pi, 2.0 * np.pi) - np.pi
    # mod can return exactly 2*pi for tiny negative inputs
    return np.where(out >= np.pi, out - 2.0 * np.pi, out)


def standard_map_step(theta, p, kappa: float):
    """One kick followed by free rotation. Works elementwise on arrays."""
    p_new = p + kappa * np.sin(theta)
    theta_new = wrap_angle(theta + p_new)
    if np.ndim(theta_new) == 0:
        return float(theta_new), float(p_new)
    return theta_new, p_new


def d_simple(kappa: float) -> float:
    """Random-phase estimate: each kick adds kappa^2/2 to the momentum variance."""
    return 0.5 * kappa * kappa


def d0(kappa: float) -> float:
    if kappa <= KAPPA_CR:
        raise BelowChaosThresholdError(f"kappa={kappa} is not above kappa_cr={KAPPA_CR}")
    if kappa >= BESSEL_BRANCH:
        j2 = bessel_j2(kappa)
        return 0.5 * kappa * kappa * (1.0 - 2.0 * j2 + 2.0 * j2 * j2)
    return 0.5 * 0.6 * (kappa - KAPPA_CR) ** 3


def d_rho(kappa: float, rho: int) -> float:
    """Diffusion constant of the kicked rotor alternated with a rho-step walk.

    Note the J_2^2 coefficient is 1 here, against 2 in :func:`d0`.
    """
    if kappa < BESSEL_BRANCH:
        raise UnsupportedRegimeError(f"d_rho is only available for kappa >= {BESSEL_BRANCH}, got {kappa}")
    if rho < 0 or int(rho) != rho:
        raise InvalidInputError(f"rho must be a non-negative integer, got {rho!r}")
    j2 = bessel_j2(kappa)
    return rho * rho + 0.5 * kappa * kappa * (1.0 - 2.0 * j2 + j2 * j2)


@dataclass(frozen=True)
class DiffusionTheory:
    kappa: float
    rho: int = 0
    kappa_cr: float = KAPPA_CR

    @property
    def d0(self) -> float:
        return d0(self.kappa)

    @property
    def d_rho(self) -> float:
        return d_rho(self.kappa, self.rho)

    @property
    def d_simple(self) -> float:
        return d_simple(self.kappa)


@dataclass
class ClassicalEnsemble:
    theta: np.ndarray
    p: np.ndarray
    kappa: float
    seed: int = 0
    delta: float | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.theta = wrap_angle(self.theta)
        self.p = np.asarray(self.p, dtype=np.float64)
        if self.theta.shape != self.p.shape:
            raise InvalidInputError("theta and p must have the same shape")

    def __len__(self):
        return self.theta.size

    @classmethod
    def uniform_square(cls, size: int, kappa: float, delta: float = 1.0, seed: int = 0,
                       start: int = 0) -> "ClassicalEnsemble":
        """Points uniform in a delta x delta square centred on (0, 0).

        Trajectory ``i`` draws from ``derive_stream(seed, i)``, so any slice
        ``[start, start + size)`` of a larger ensemble is bit-identical to the
        same slice generated as a whole.
        """
        theta = np.empty(size)
        p = np.empty(size)
        for j in range(size):
            u = derive_stream(seed, start + j, 0).random(2)
            theta[j] = (u[0] - 0.5) * delta
            p[j] = (u[1] - 0.5) * delta
        return cls(theta, p, kappa, seed, delta)

    def step(self) -> None:
        self.theta, self.p = standard_map_step(self.theta, self.p, self.kappa)


def momentum_history(ensemble: ClassicalEnsemble, steps: int) -> np.ndarray:
    """Momenta of every trajectory, shape ``(steps + 1, len(ensemble))``."""
    theta = ensemble.theta.copy()
    p = ensemble.p.copy()
    out = np.empty((steps + 1, p.size))
    out[0] = p
    for t in range(1, steps + 1):
        theta, p = standard_map_step(theta, p, ensemble.kappa)
        out[t] = p
    return out


def variance_from_history(history: np.ndarray) -> np.ndarray:
    return np.var(history, axis=1)


def evolve_classical(ensemble: ClassicalEnsemble, steps: int) -> VarianceSeries:
    """sigma_p^2(t) = <p_t^2> - <p_t>^2 over the ensemble for t = 0..steps."""
    if len(ensemble) == 0:
        raise InvalidInputError("empty ensemble")
    if steps < 1:
        raise InvalidInputError("steps must be >= 1")
    sigma2 = variance_from_history(momentum_history(ensemble, steps))
    meta = {"kappa": ensemble.kappa, "delta": ensemble.delta, "seed": ensemble.seed,
            "ensemble": len(ensemble)}
    return VarianceSeries(np.arange(steps + 1), sigma2, meta)
