"""Kicked rotor alternated with a quantum walk, and the localisation estimates.

One combined period is ``U_qw(t) U_free^(1/2) U_kick U_free^(1/2)`` with the
KR factors acting as the identity on the coin. It counts as one unit of time.
"""
from __future__ import annotations

from dataclasses import dataclass

from .classical import d0, d_rho
from .errors import InvalidInputError
from .evolution import SystemSpec, run_ensemble
from .kicked_rotor import KrParams, floquet_kr_step, free_half_step, free_step, kick_step
from .lattice import QuantumState
from .walk import QuantumWalk, WalkSpec, qw_step

_KR_OPS = {
    "floquet": floquet_kr_step,
    "free_half": free_half_step,
    "free": free_step,
    "kick": kick_step,
}


@dataclass(frozen=True, eq=False)
class CombinedParams:
    kr: KrParams
    walk: WalkSpec

    @property
    def lattice(self):
        return self.kr.lattice

    def system(self, m0: int = 0, spread: bool = True, margin: float = 0.1) -> SystemSpec:
        lat = self.kr.lattice
        return SystemSpec(N=lat.N, hbar_eff=lat.hbar_eff, kappa=self.kr.kappa, walk=self.walk,
                          m0=m0, spread=spread, margin=margin)


def lift_kr(state: QuantumState, params: KrParams, op: str = "floquet") -> QuantumState:
    """Apply a kicked-rotor operator as ``1_coin (x) op`` to a coined state."""
    if state.coin_dim != 2:
        raise InvalidInputError("lift_kr needs a state with a two-level coin")
    try:
        fn = _KR_OPS[op]
    except KeyError:
        raise InvalidInputError(f"unknown KR operator {op!r}; expected one of {sorted(_KR_OPS)}") from None
    return fn(state, params)


def combined_step(state: QuantumState, params: CombinedParams, t: int,
                  walk: QuantumWalk | None = None) -> QuantumState:
    """Lifted F_kr followed by the walk step for time slice ``t``.

    Pass a prebuilt ``walk`` to keep frozen disorder and the member index
    fixed across calls; otherwise member 0 of ``params.walk`` is used.
    """
    if walk is None:
        walk = QuantumWalk(params.walk, params.lattice)
    return qw_step(lift_kr(state, params.kr), walk, t)


def theory_localization(kappa: float, rho: int = 0, hbar_eff: float = 1.0) -> tuple[float, float, float]:
    """(t_loc, l_s, sigma2_loc) from the diffusion constant (d0 for rho=0, d_rho otherwise)."""
    D = d0(kappa) if rho == 0 else d_rho(kappa, rho)
    l_s = D / hbar_eff ** 2
    return l_s, l_s, D * D / hbar_eff ** 2


def run_combined(params: CombinedParams, steps: int, ensemble: int, m0: int = 0, workers: int = 1):
    return run_ensemble(params.system(m0), steps, ensemble, workers)
