"""Quantum kicked rotor: split-operator Floquet steps and the Bessel-matrix oracle.

The kick is diagonal on the angle grid, the free rotation is diagonal in
momentum, so one Floquet period costs two FFTs. The dense matrix from
:func:`kick_matrix_element` is only used to check the spectral path.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bessel import bessel_jn
from .errors import InvalidInputError, RepresentationMismatchError
from .lattice import MOMENTUM, MomentumLattice, QuantumState, to_momentum


@dataclass(frozen=True, eq=False)
class KrParams:
    kappa: float
    lattice: MomentumLattice

    def __post_init__(self):
        if not np.isfinite(self.kappa) or self.kappa < 0:
            raise InvalidInputError(f"kappa must be finite and non-negative, got {self.kappa!r}")

    @property
    def hbar_eff(self) -> float:
        return self.lattice.hbar_eff

    @property
    def z(self) -> float:
        return self.kappa / self.lattice.hbar_eff

    @cached_property
    def half_phase(self) -> np.ndarray:
        m = self.lattice.m.astype(np.float64)
        return np.exp(-1j * self.hbar_eff * m * m / 4.0)

    @cached_property
    def kick_phase(self) -> np.ndarray:
        return np.exp(-1j * self.z * np.cos(self.lattice.theta))

    def apply_floquet(self, amps: np.ndarray) -> np.ndarray:
        """Symmetrised period on a raw ``(coin_dim, N)`` momentum array (coin rows act independently)."""
        a = amps * self.half_phase
        a = np.fft.ifft(a, axis=-1, norm="ortho")
        a *= self.kick_phase
        a = np.fft.fft(a, axis=-1, norm="ortho")
        a *= self.half_phase
        return a

    def apply_floquet_adjoint(self, amps: np.ndarray) -> np.ndarray:
        a = amps * self.half_phase.conj()
        a = np.fft.ifft(a, axis=-1, norm="ortho")
        a *= self.kick_phase.conj()
        a = np.fft.fft(a, axis=-1, norm="ortho")
        a *= self.half_phase.conj()
        return a


def _require_momentum(state: QuantumState) -> None:
    if state.representation != MOMENTUM:
        raise RepresentationMismatchError("operation needs the momentum representation")


def free_half_step(state: QuantumState, params: KrParams) -> QuantumState:
    _require_momentum(state)
    return state.replace(state.amplitudes * params.half_phase)


def free_step(state: QuantumState, params: KrParams) -> QuantumState:
    _require_momentum(state)
    return state.replace(state.amplitudes * params.half_phase ** 2)


def kick_step(state: QuantumState, params: KrParams) -> QuantumState:
    """exp(-i z cos theta) on the angle grid; the result is in momentum representation."""
    if state.representation == MOMENTUM:
        angle = np.fft.ifft(state.amplitudes, axis=-1, norm="ortho")
    else:
        angle = state.amplitudes
    out = np.fft.fft(angle * params.kick_phase, axis=-1, norm="ortho")
    return state.replace(out, MOMENTUM)


def kick_matrix_element(m: int, n: int, params: KrParams) -> complex:
    """<m|U_kick|n> = (-i)^(m-n) J_(m-n)(z)."""
    d = int(m) - int(n)
    return (-1j) ** (d % 4) * bessel_jn(d, params.z)


def dense_kick_matrix(params: KrParams) -> np.ndarray:
    """Kick operator as an N x N matrix in storage order (acts on ``amplitudes[c]``).

    The lattice is periodic, so ``m - n`` is taken as the minimal image in
    ``[-N/2, N/2)``. This drops only the aliases J_(d +- N)(z).
    """
    m = params.lattice.m
    N = m.size
    diffs = {}
    out = np.empty((N, N), dtype=np.complex128)
    for i in range(N):
        for j in range(N):
            d = (int(m[i] - m[j]) + N // 2) % N - N // 2
            if d not in diffs:
                diffs[d] = kick_matrix_element(d, 0, params)
            out[i, j] = diffs[d]
    return out


def floquet_kr_step(state: QuantumState, params: KrParams) -> QuantumState:
    """U_free^(1/2) U_kick U_free^(1/2)."""
    if state.representation != MOMENTUM:
        state = to_momentum(state)
    return state.replace(params.apply_floquet(state.amplitudes))


def floquet_kr_adjoint_step(state: QuantumState, params: KrParams) -> QuantumState:
    if state.representation != MOMENTUM:
        state = to_momentum(state)
    return state.replace(params.apply_floquet_adjoint(state.amplitudes))


def edge_indices(lattice: MomentumLattice, margin_fraction: float) -> np.ndarray:
    """Storage indices of the outer ``margin_fraction * N`` sites on each edge of the grid."""
    if not 0 < margin_fraction < 0.5:
        raise InvalidInputError("margin_fraction must lie in (0, 0.5)")
    k = int(round(margin_fraction * lattice.N))
    asc = lattice.m_ascending
    if k == 0:
        return np.empty(0, dtype=np.int64)
    edge = np.concatenate([asc[:k], asc[-k:]])
    return np.unique(edge % lattice.N)


def tail_mass(state: QuantumState, margin_fraction: float = 0.1) -> float:
    P = state.momentum_probabilities()
    return float(P[edge_indices(state.lattice, margin_fraction)].sum())


def evolve_kr(kappa: float, steps: int, ensemble: int = 32, N: int = 2048, hbar_eff: float = 1.0,
              m0: int = 0, workers: int = 1):
    """Evolve ``ensemble`` momentum eigenstates ``|m0 + k - ensemble//2>``.

    Returns an ``EnsembleResult`` (averaged series plus final states). Raises
    ``LeakageError`` if probability reaches the lattice edges.
    """
    from .evolution import SystemSpec, run_ensemble

    system = SystemSpec(N=N, hbar_eff=hbar_eff, kappa=kappa, m0=m0, spread=True)
    return run_ensemble(system, steps, ensemble, workers)
