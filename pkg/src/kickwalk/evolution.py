"""Ensemble driver shared by the pure KR, pure walk and combined systems.

A :class:`SystemSpec` is a small picklable description of one system. Each
ensemble member is evolved independently (``evolve_member``), so members can
be farmed out to worker processes; results are always assembled in member
order, which keeps the output bit-identical for any worker count.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, LeakageError
from .kicked_rotor import KrParams, edge_indices
from .lattice import MomentumLattice, QuantumState
from .series import VarianceSeries
from .walk import SYMMETRIC_COIN, QuantumWalk, WalkSpec


@dataclass(frozen=True)
class SystemSpec:
    N: int
    hbar_eff: float = 1.0
    kappa: float | None = None      # None: no kicked-rotor part
    walk: WalkSpec | None = None    # None: no walk part (and no coin)
    m0: int = 0
    spread: bool = True             # member k starts at m0 + k - ensemble // 2
    margin: float = 0.1
    leak_tol: float = 1e-8

    def __post_init__(self):
        if self.kappa is None and self.walk is None:
            raise InvalidInputError("system needs a kicked-rotor part, a walk part, or both")

    @property
    def lattice(self) -> MomentumLattice:
        return MomentumLattice(self.N, self.hbar_eff)

    @property
    def coin_dim(self) -> int:
        return 1 if self.walk is None else 2

    def start_m(self, member: int, ensemble: int) -> int:
        return self.m0 + (member - ensemble // 2 if self.spread else 0)

    def initial_state(self, member: int, ensemble: int) -> QuantumState:
        coin = (1.0,) if self.walk is None else SYMMETRIC_COIN
        return QuantumState.delta(self.lattice, self.start_m(member, ensemble), coin)

    def describe(self) -> dict:
        out = {"N": self.N, "hbar_eff": self.hbar_eff, "kappa": self.kappa, "m0": self.m0,
               "spread": self.spread}
        if self.walk is not None:
            out.update(rho=self.walk.rho, policy=self.walk.policy, seed=self.walk.seed)
        return out


class Propagator:
    """One combined period: lifted KR Floquet step (if any), then the walk step (if any)."""

    def __init__(self, spec: SystemSpec, member: int = 0):
        lattice = spec.lattice
        self.kr = None if spec.kappa is None else KrParams(spec.kappa, lattice)
        self.walk = None if spec.walk is None else QuantumWalk(spec.walk, lattice, member)

    def __call__(self, amps: np.ndarray, t: int) -> np.ndarray:
        if self.kr is not None:
            amps = self.kr.apply_floquet(amps)
        if self.walk is not None:
            amps = self.walk.apply(amps, t)
        return amps


@dataclass
class MemberResult:
    member: int
    sigma2: np.ndarray          # t = 0..steps, units of hbar_eff^2
    final: np.ndarray           # (coin_dim, N) momentum amplitudes
    norm_drift: float
    max_tail: float


def evolve_member(spec: SystemSpec, member: int, ensemble: int, steps: int) -> MemberResult:
    lattice = spec.lattice
    m = lattice.m.astype(np.float64)
    edges = edge_indices(lattice, spec.margin)
    prop = Propagator(spec, member)
    amps = spec.initial_state(member, ensemble).amplitudes.copy()
    sigma2 = np.empty(steps + 1)
    max_tail = 0.0
    for t in range(steps + 1):
        if t > 0:
            amps = prop(amps, t - 1)
        P = np.einsum("ij,ij->j", amps.real, amps.real) + np.einsum("ij,ij->j", amps.imag, amps.imag)
        mean = P @ m
        sigma2[t] = P @ (m * m) - mean * mean
        tail = float(P[edges].sum())
        max_tail = max(max_tail, tail)
        if tail > spec.leak_tol:
            raise LeakageError(
                f"tail mass {tail:.3g} > {spec.leak_tol:g} at t={t} (member {member}, N={spec.N}); "
                "increase the lattice size")
    norm = float(np.sum(np.abs(amps) ** 2))
    return MemberResult(member, spec.hbar_eff ** 2 * sigma2, amps, abs(norm - 1.0), max_tail)


def _task(args):
    return evolve_member(*args)


def map_members(spec: SystemSpec, ensemble: int, steps: int, workers: int = 1) -> list[MemberResult]:
    tasks = [(spec, k, ensemble, steps) for k in range(ensemble)]
    if workers <= 1 or ensemble == 1:
        return [_task(a) for a in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_task, tasks))


@dataclass
class EnsembleResult:
    series: VarianceSeries
    members: list[MemberResult] = field(repr=False)

    def final_states(self, lattice: MomentumLattice) -> list[QuantumState]:
        return [QuantumState(lattice, r.final) for r in self.members]

    @property
    def per_member(self) -> np.ndarray:
        return np.stack([r.sigma2 for r in self.members])


def run_ensemble(spec: SystemSpec, steps: int, ensemble: int, workers: int = 1) -> EnsembleResult:
    """Ensemble-averaged sigma_p^2(t), t = 0..steps."""
    if steps < 1:
        raise InvalidInputError("steps must be >= 1")
    if ensemble < 1:
        raise InvalidInputError("ensemble must be >= 1")
    results = map_members(spec, ensemble, steps, workers)
    mean = np.mean(np.stack([r.sigma2 for r in results]), axis=0)
    meta = spec.describe() | {"ensemble": ensemble, "steps": steps}
    return EnsembleResult(VarianceSeries(np.arange(steps + 1), mean, meta), results)
