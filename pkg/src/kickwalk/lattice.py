"""Finite periodic momentum lattice, angle/momentum transforms, momentum moments.

Storage convention
------------------
Amplitudes live in an array of shape ``(coin_dim, N)`` (coin-major). Along
the lattice axis the index ``i`` holds quantum number ``m`` with
``m = i (mod N)``, i.e. numpy's FFT frequency order. This makes the
conditional shift of the walk a plain ``np.roll`` and the angle/momentum
change of basis a single unitary FFT. Snapshot files always list records in
ascending ``m`` so they do not depend on this internal layout.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import InvalidInputError, InvalidSizeError, RepresentationMismatchError

MOMENTUM = "momentum"
ANGLE = "angle"
_REPRESENTATIONS = (MOMENTUM, ANGLE)


def momentum_grid(N: int) -> list[int]:
    """Quantum numbers of an ``N``-site lattice, ascending.

    Even ``N`` gives ``-N/2 .. N/2-1``, odd ``N`` gives ``-(N-1)/2 .. (N-1)/2``.
    """
    if int(N) != N or N < 1:
        raise InvalidSizeError(f"lattice size must be a positive integer, got {N!r}")
    N = int(N)
    lo = -(N // 2)
    return list(range(lo, lo + N))


@dataclass(frozen=True)
class MomentumLattice:
    N: int
    hbar_eff: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise InvalidSizeError(f"lattice size must be a positive integer, got {self.N!r}")
        if not self.hbar_eff > 0:
            raise InvalidInputError(f"hbar_eff must be positive, got {self.hbar_eff!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "hbar_eff", float(self.hbar_eff))

    @cached_property
    def m(self) -> np.ndarray:
        """Quantum number held at each storage index (FFT order)."""
        grid = np.asarray(momentum_grid(self.N))
        out = np.empty(self.N, dtype=np.int64)
        out[grid % self.N] = grid
        out.flags.writeable = False
        return out

    @cached_property
    def m_ascending(self) -> np.ndarray:
        out = np.asarray(momentum_grid(self.N), dtype=np.int64)
        out.flags.writeable = False
        return out

    @cached_property
    def theta(self) -> np.ndarray:
        out = 2.0 * np.pi * np.arange(self.N) / self.N
        out.flags.writeable = False
        return out

    def index_of(self, m: int) -> int:
        lo = -(self.N // 2)
        if not lo <= m < lo + self.N:
            raise InvalidInputError(f"m={m} is not on the lattice {lo}..{lo + self.N - 1}")
        return int(m) % self.N

    def contains(self, m: int) -> bool:
        lo = -(self.N // 2)
        return lo <= m < lo + self.N


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Immutable amplitude vector over the lattice, optionally with a 2-level coin."""

    lattice: MomentumLattice
    amplitudes: np.ndarray
    representation: str = MOMENTUM

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim == 1:
            amps = amps[None, :]
        if amps.ndim != 2 or amps.shape[1] != self.lattice.N or amps.shape[0] not in (1, 2):
            raise InvalidInputError(
                f"amplitudes must have shape (coin_dim, {self.lattice.N}) with coin_dim in (1, 2), got {amps.shape}")
        if self.representation not in _REPRESENTATIONS:
            raise InvalidInputError(f"unknown representation {self.representation!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def coin_dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def replace(self, amplitudes: np.ndarray, representation: str | None = None) -> "QuantumState":
        return dataclasses.replace(self, amplitudes=amplitudes,
                                   representation=representation or self.representation)

    def inner(self, other: "QuantumState") -> complex:
        """<self|other>, both taken in the same representation."""
        if other.representation != self.representation:
            raise RepresentationMismatchError("inner product needs matching representations")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def momentum_probabilities(self) -> np.ndarray:
        """P(m) summed over coin components, in storage (FFT) order."""
        s = self if self.representation == MOMENTUM else to_momentum(self)
        return np.sum(np.abs(s.amplitudes) ** 2, axis=0)

    @classmethod
    def delta(cls, lattice: MomentumLattice, m: int, coin: tuple[complex, ...] = (1.0,)) -> "QuantumState":
        """Momentum eigenstate ``|m>`` tensored with the (normalised) coin vector."""
        coin = np.asarray(coin, dtype=np.complex128)
        coin = coin / np.linalg.norm(coin)
        amps = np.zeros((coin.size, lattice.N), dtype=np.complex128)
        amps[:, lattice.index_of(m)] = coin
        return cls(lattice, amps, MOMENTUM)

    @classmethod
    def from_ascending(cls, lattice: MomentumLattice, values, representation: str = MOMENTUM) -> "QuantumState":
        """Build from amplitudes listed in ascending ``m`` (momentum) or ``k`` (angle) order."""
        vals = np.atleast_2d(np.asarray(values, dtype=np.complex128))
        if representation == MOMENTUM:
            amps = np.empty_like(vals)
            amps[:, lattice.m_ascending % lattice.N] = vals
        else:
            amps = vals
        return cls(lattice, amps, representation)

    def ascending(self) -> np.ndarray:
        if self.representation == MOMENTUM:
            return self.amplitudes[:, self.lattice.m_ascending % self.lattice.N]
        return self.amplitudes.copy()


# -- transforms -------------------------------------------------------------

def dft_direct(values: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Unitary DFT along the last axis by explicit O(N^2) summation."""
    values = np.asarray(values, dtype=np.complex128)
    N = values.shape[-1]
    k = np.arange(N)
    sign = 1.0 if inverse else -1.0
    kernel = np.exp(sign * 2j * np.pi * np.outer(k, k) / N) / np.sqrt(N)
    return values @ kernel.T


def _transform(state: QuantumState, target: str, method: str) -> QuantumState:
    if state.representation == target:
        raise RepresentationMismatchError(f"state is already in {target} representation")
    inverse = target == ANGLE
    if method == "fft":
        fn = np.fft.ifft if inverse else np.fft.fft
        out = fn(state.amplitudes, axis=-1, norm="ortho")
    elif method == "direct":
        out = dft_direct(state.amplitudes, inverse=inverse)
    else:
        raise InvalidInputError(f"unknown transform method {method!r}")
    return state.replace(out, target)


def to_angle(state: QuantumState, method: str = "fft") -> QuantumState:
    return _transform(state, ANGLE, method)


def to_momentum(state: QuantumState, method: str = "fft") -> QuantumState:
    return _transform(state, MOMENTUM, method)


# -- observables ------------------------------------------------------------

def _moments(P: np.ndarray, m: np.ndarray):
    mean = np.sum(m * P, axis=-1)
    second = np.sum(m * m * P, axis=-1)
    return mean, second - mean * mean


def mean_p(state: QuantumState) -> float:
    P = state.momentum_probabilities()
    mean, _ = _moments(P, state.lattice.m)
    return float(state.lattice.hbar_eff * mean)


def variance_p(state: QuantumState) -> float:
    P = state.momentum_probabilities()
    _, var = _moments(P, state.lattice.m)
    return float(state.lattice.hbar_eff ** 2 * var)


# -- snapshot files ---------------------------------------------------------

def write_snapshot(state: QuantumState, path) -> None:
    """One ``coin index re im`` record per amplitude, ascending index within each coin."""
    lat = state.lattice
    header = (f"# kickwalk-state N={lat.N} coin_dim={state.coin_dim} "
              f"hbar_eff={lat.hbar_eff!r} representation={state.representation}\n")
    index = lat.m_ascending if state.representation == MOMENTUM else np.arange(lat.N)
    amps = state.ascending()
    lines = [header]
    for c in range(state.coin_dim):
        for i, a in zip(index, amps[c]):
            lines.append(f"{c} {int(i)} {a.real:.17g} {a.imag:.17g}\n")
    Path(path).write_text("".join(lines))


def read_snapshot(path) -> QuantumState:
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("# kickwalk-state"):
        raise InvalidInputError(f"{path}: missing state header")
    fields = dict(tok.split("=", 1) for tok in text[0].split()[2:])
    lat = MomentumLattice(int(fields["N"]), float(fields["hbar_eff"]))
    coin_dim = int(fields["coin_dim"])
    rep = fields["representation"]
    amps = np.zeros((coin_dim, lat.N), dtype=np.complex128)
    for line in text[1:]:
        c, i, re, im = line.split()
        col = int(i) % lat.N
        amps[int(c), col] = complex(float(re), float(im))
    return QuantumState(lat, amps, rep)
