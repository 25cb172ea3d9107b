"""Coined discrete-time quantum walk on the momentum lattice.

Coin component 0 is displaced by +rho, component 1 by -rho, periodically on
the finite lattice. Four coin policies are supported:

``fixed_hadamard``        the Hadamard gate at every site and step (ballistic)
``random_in_time``        one Haar coin per step, shared by all sites
``random_in_space``       one Haar coin per site, frozen for the whole run
``random_in_space_time``  a fresh Haar coin per site and step

Random coins for member ``k`` come from ``derive_stream(seed, k, t)`` (one
stream per step) or ``derive_stream(seed, k, 0)`` for the frozen disorder.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .lattice import MOMENTUM, MomentumLattice, QuantumState, to_momentum
from .rng import derive_stream

POLICIES = ("fixed_hadamard", "random_in_time", "random_in_space", "random_in_space_time")

SYMMETRIC_COIN = (1.0 / np.sqrt(2.0), 1j / np.sqrt(2.0))


@dataclass(frozen=True)
class WalkSpec:
    rho: int = 1
    policy: str = "fixed_hadamard"
    seed: int = 0

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise InvalidInputError(f"unknown coin policy {self.policy!r}; expected one of {POLICIES}")
        if int(self.rho) != self.rho or self.rho < 0:
            raise InvalidInputError(f"rho must be a non-negative integer, got {self.rho!r}")
        object.__setattr__(self, "rho", int(self.rho))


def hadamard() -> np.ndarray:
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)


def sample_gue2(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` 2x2 GUE matrices: real diagonal of variance 1, off-diagonal parts of variance 1/2."""
    diag = rng.normal(size=(n, 2))
    off = rng.normal(scale=np.sqrt(0.5), size=(n, 2))
    h = np.empty((n, 2, 2), dtype=np.complex128)
    h[:, 0, 0] = diag[:, 0]
    h[:, 1, 1] = diag[:, 1]
    h[:, 0, 1] = off[:, 0] + 1j * off[:, 1]
    h[:, 1, 0] = off[:, 0] - 1j * off[:, 1]
    return h


def eigvecs_hermitian2(h: np.ndarray) -> np.ndarray:
    """Eigenvector matrices of stacked 2x2 Hermitian matrices, ascending eigenvalues.

    Closed form: write ``h - tr(h)/2 = r [[cos b, sin b e^{i phi}], [sin b e^{-i phi}, -cos b]]``.
    The first nonzero component of each column is made real and positive.
    """
    a = h[..., 0, 0].real
    d = h[..., 1, 1].real
    c = h[..., 0, 1]
    half_beta = 0.5 * np.arctan2(np.abs(c), 0.5 * (a - d))
    e = np.exp(-1j * np.angle(c))
    cb, sb = np.cos(half_beta), np.sin(half_beta)
    v = np.empty(h.shape, dtype=np.complex128)
    # lower eigenvalue: (sin(b/2), -cos(b/2) e^{-i phi})
    v[..., 0, 0] = sb
    v[..., 1, 0] = -cb * e
    # upper eigenvalue: (cos(b/2), sin(b/2) e^{-i phi})
    v[..., 0, 1] = cb
    v[..., 1, 1] = sb * e
    # sin(b/2) == 0 only when h is diagonal with a > d; then column 0 is (0, -e^{-i phi})
    flat = sb == 0.0
    if np.any(flat):
        v[..., 1, 0] = np.where(flat, 1.0, v[..., 1, 0])
    return v


def haar_coins(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` Haar-random U(2) coins: GUE eigenvectors times independent random phases."""
    v = eigvecs_hermitian2(sample_gue2(rng, n))
    phases = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=(n, 2)))
    return v * phases[:, None, :]


def haar_coin(rng: np.random.Generator) -> np.ndarray:
    return haar_coins(rng, 1)[0]


def build_symmetric_initial(m0: int, lattice: MomentumLattice) -> QuantumState:
    """(1, i)/sqrt(2) on the coin, momentum eigenstate |m0>."""
    return QuantumState.delta(lattice, m0, SYMMETRIC_COIN)


def apply_coins(amps: np.ndarray, coins: np.ndarray) -> np.ndarray:
    if coins.ndim == 2:
        return coins @ amps
    a0, a1 = amps[0], amps[1]
    out = np.empty_like(amps)
    out[0] = coins[:, 0, 0] * a0 + coins[:, 0, 1] * a1
    out[1] = coins[:, 1, 0] * a0 + coins[:, 1, 1] * a1
    return out


def conditional_shift(amps: np.ndarray, rho: int) -> np.ndarray:
    out = np.empty_like(amps)
    out[0] = np.roll(amps[0], rho)
    out[1] = np.roll(amps[1], -rho)
    return out


class QuantumWalk:
    """A walk spec bound to a lattice and an ensemble member.

    Frozen disorder (``random_in_space``) is drawn here, once; time-dependent
    coins are drawn on demand from the per-step stream, so ``coins_at(t)`` is
    a pure function of ``(seed, member, t)``.
    """

    def __init__(self, spec: WalkSpec, lattice: MomentumLattice, member: int = 0):
        self.spec = spec
        self.lattice = lattice
        self.member = member
        self._space_coins = None
        if spec.policy == "random_in_space":
            self._space_coins = haar_coins(derive_stream(spec.seed, member, 0), lattice.N)
        self._hadamard = hadamard()

    def coins_at(self, t: int) -> np.ndarray:
        """(2, 2) for site-independent coins, (N, 2, 2) in storage order otherwise."""
        policy = self.spec.policy
        if policy == "fixed_hadamard":
            return self._hadamard
        if policy == "random_in_space":
            return self._space_coins
        rng = derive_stream(self.spec.seed, self.member, t)
        if policy == "random_in_time":
            return haar_coins(rng, 1)[0]
        return haar_coins(rng, self.lattice.N)

    def apply(self, amps: np.ndarray, t: int) -> np.ndarray:
        return conditional_shift(apply_coins(amps, self.coins_at(t)), self.spec.rho)

    def dump_coins(self, steps: int, path) -> None:
        """Coin audit file: ``t m u00 u01 u10 u11`` per record, complex as ``re,im``.

        ``*`` in the m column marks a coin shared by all sites, ``*`` in the t
        column a coin that does not change with time.
        """
        def fmt(u):
            return " ".join(f"{z.real:.17g},{z.imag:.17g}" for z in u.reshape(-1))

        lines = [f"# kickwalk-coins policy={self.spec.policy} rho={self.spec.rho} "
                 f"seed={self.spec.seed} member={self.member} N={self.lattice.N}\n"]
        policy = self.spec.policy
        if policy == "fixed_hadamard":
            lines.append(f"* * {fmt(self._hadamard)}\n")
        elif policy == "random_in_space":
            for i in self.lattice.m_ascending % self.lattice.N:
                lines.append(f"* {int(self.lattice.m[i])} {fmt(self._space_coins[i])}\n")
        else:
            for t in range(steps):
                coins = self.coins_at(t)
                if coins.ndim == 2:
                    lines.append(f"{t} * {fmt(coins)}\n")
                else:
                    for i in self.lattice.m_ascending % self.lattice.N:
                        lines.append(f"{t} {int(self.lattice.m[i])} {fmt(coins[i])}\n")
        Path(path).write_text("".join(lines))


def read_coin_dump(path) -> list[tuple[str, str, np.ndarray]]:
    out = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            continue
        t, m, *entries = line.split()
        vals = [complex(*map(float, e.split(","))) for e in entries]
        out.append((t, m, np.array(vals).reshape(2, 2)))
    return out


def qw_step(state: QuantumState, walk: QuantumWalk | WalkSpec, t: int) -> QuantumState:
    if state.coin_dim != 2:
        raise InvalidInputError("the walk needs a state with a two-level coin")
    if isinstance(walk, WalkSpec):
        walk = QuantumWalk(walk, state.lattice)
    if state.representation != MOMENTUM:
        state = to_momentum(state)
    return state.replace(walk.apply(state.amplitudes, t))


def run_walk(spec: WalkSpec, steps: int, ensemble_size: int = 1, N: int = 2048,
             hbar_eff: float = 1.0, m0: int = 0, workers: int = 1):
    """Ensemble-averaged sigma_p^2(t) of the bare walk (``VarianceSeries``).

    Every member starts from the symmetric state at ``m0``; members differ
    only through their coin draws.
    """
    from .evolution import SystemSpec, run_ensemble

    system = SystemSpec(N=N, hbar_eff=hbar_eff, walk=spec, m0=m0, spread=False)
    return run_ensemble(system, steps, ensemble_size, workers).series
