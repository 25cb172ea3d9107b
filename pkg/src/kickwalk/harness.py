"""Experiment configuration, dispatch, and run manifests.

Outputs are decimal text at 17 significant digits, assembled in member
order, so the checksums in ``manifest.json`` depend only on the resolved
configuration and never on the worker count.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (SYSTEMS, departure_time, diffusion_slope, fit_ls, kappa_scan,
                       recentered_histogram, slope_loglog)
from .classical import ClassicalEnsemble, d0, d_rho, d_simple, momentum_history, variance_from_history
from .combined import theory_localization
from .errors import ConfigValidationError, KickwalkError
from .evolution import SystemSpec, run_ensemble
from .rng import GENERATOR_NAME
from .series import ShapeHistogram, VarianceSeries, write_scan
from .walk import POLICIES, QuantumWalk, WalkSpec

log = logging.getLogger(__name__)

EXPERIMENTS = ("classical-diffusion", "kr-localize", "qw-run", "combined-run", "kappa-scan", "fit-shape")
CLASSICAL_CHUNK = 250


@dataclass
class ExperimentConfig:
    experiment: str = "classical-diffusion"
    kappa: float = 5.5
    hbar_eff: float = 1.0
    rho: int = 1
    policy: str = "fixed_hadamard"
    lattice_size: int = 2048
    steps: int | None = None
    ensemble: int | None = None
    delta: float = 1.0
    m0: int = 0
    seed: int = 0
    workers: int = 1
    out: str = "out"
    kappas: str = "4.5:12.0:0.5"
    systems: str = "kr,kr+hadamard,kr+disorder,kr+diffusive"
    input: str | None = None
    fit_scale: str = "linear"
    dump_coins: bool = False

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigValidationError(f"experiment: {self.experiment!r} is not one of {EXPERIMENTS}")
        if self.policy not in POLICIES:
            raise ConfigValidationError(f"policy: {self.policy!r} is not one of {POLICIES}")
        if self.lattice_size < 1:
            raise ConfigValidationError("lattice_size: must be >= 1")
        if self.hbar_eff <= 0:
            raise ConfigValidationError("hbar_eff: must be positive")
        if self.rho < 0:
            raise ConfigValidationError("rho: must be >= 0")
        if self.steps is not None and self.steps < 1:
            raise ConfigValidationError("steps: must be >= 1")
        if self.ensemble is not None and self.ensemble < 1:
            raise ConfigValidationError("ensemble: must be >= 1")
        if self.workers < 1:
            raise ConfigValidationError("workers: must be >= 1")
        if self.delta <= 0:
            raise ConfigValidationError("delta: must be positive")
        for s in self.system_list():
            if s not in SYSTEMS:
                raise ConfigValidationError(f"systems: unknown system {s!r}")
        self.kappa_list()
        if self.experiment == "fit-shape" and not self.input:
            raise ConfigValidationError("input: fit-shape needs a histogram file")
        return self

    def kappa_list(self) -> list[float]:
        try:
            if ":" in self.kappas:
                lo, hi, step = (float(x) for x in self.kappas.split(":"))
                n = int(round((hi - lo) / step)) + 1
                return [round(lo + i * step, 12) for i in range(n)]
            return [float(x) for x in self.kappas.split(",") if x.strip()]
        except ValueError as exc:
            raise ConfigValidationError(f"kappas: cannot parse {self.kappas!r}") from exc

    def system_list(self) -> list[str]:
        return [s.strip() for s in self.systems.split(",") if s.strip()]

    def resolved(self) -> dict:
        return dataclasses.asdict(self)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def coerce(name: str, raw):
    """Convert a text value for field ``name`` to its declared type."""
    key = name.replace("-", "_")
    if key not in _FIELD_TYPES:
        raise ConfigValidationError(f"{name}: unknown configuration key")
    if not isinstance(raw, str):
        return key, raw
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if raw.lower() in ("none", "") and "None" in kind:
            return key, None
        if kind.startswith("int"):
            return key, int(raw)
        if kind.startswith("float"):
            return key, float(raw)
        if kind.startswith("bool"):
            return key, raw.lower() in ("1", "true", "yes", "on")
        return key, raw
    except ValueError as exc:
        raise ConfigValidationError(f"{name}: cannot parse {raw!r} as {kind}") from exc


def load_config_file(path) -> dict:
    """Flat ``key = value`` text, ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigValidationError(f"{path}:{n}: expected key = value")
        k, v = line.split("=", 1)
        key, val = coerce(k.strip(), v)
        out[key] = val
    return out


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Defaults, then config-file values, then command-line overrides."""
    values = {}
    for src in (file_values or {}, overrides or {}):
        for k, v in src.items():
            if v is not None:
                key, val = coerce(k, v)
                values[key] = val
    return ExperimentConfig(**values).validate()


@dataclass
class RunManifest:
    config: dict
    version: str
    generator: str
    wall_time: float
    checksums: dict[str, str]
    results: dict = field(default_factory=dict)

    def write(self, path) -> None:
        Path(path).write_text(json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text()))


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# -- experiment pipelines ----------------------------------------------------

def _classical_chunk(args):
    seed, start, size, kappa, delta, steps = args
    ens = ClassicalEnsemble.uniform_square(size, kappa, delta, seed, start=start)
    return momentum_history(ens, steps)


def _classical(cfg: ExperimentConfig, out: Path) -> dict:
    size = cfg.ensemble or 1000
    steps = cfg.steps or 100
    chunks = [(cfg.seed, s, min(CLASSICAL_CHUNK, size - s), cfg.kappa, cfg.delta, steps)
              for s in range(0, size, CLASSICAL_CHUNK)]
    if cfg.workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_classical_chunk, chunks))
    else:
        parts = [_classical_chunk(c) for c in chunks]
    sigma2 = variance_from_history(np.concatenate(parts, axis=1))
    series = VarianceSeries(np.arange(steps + 1), sigma2,
                            {"kappa": cfg.kappa, "delta": cfg.delta, "seed": cfg.seed, "ensemble": size})
    series.write(out / "variance.txt")
    res = {"slope": diffusion_slope(series, 5), "d_simple": d_simple(cfg.kappa)}
    try:
        res["d0"] = d0(cfg.kappa)
    except KickwalkError:
        res["d0"] = None
    return res, ["variance.txt"]


def _kr_localize(cfg: ExperimentConfig, out: Path) -> dict:
    t_loc, l_s_theory, s2_loc = theory_localization(cfg.kappa, 0, cfg.hbar_eff)
    steps = cfg.steps or max(1, int(round(10 * t_loc)))
    ensemble = cfg.ensemble or 32
    spec = SystemSpec(N=cfg.lattice_size, hbar_eff=cfg.hbar_eff, kappa=cfg.kappa, m0=cfg.m0, spread=True)
    res = run_ensemble(spec, steps, ensemble, cfg.workers)
    res.series.write(out / "variance.txt")
    hist = recentered_histogram(res.final_states(spec.lattice))
    hist.metadata.update(kappa=cfg.kappa, hbar_eff=cfg.hbar_eff, t=steps, ensemble=ensemble)
    hist.write(out / "histogram.txt")
    l_s, resid = fit_ls(hist, scale=cfg.fit_scale)
    return {"t_loc": t_loc, "l_s_theory": l_s_theory, "sigma2_loc": s2_loc, "steps": steps,
            "l_s_fit": l_s, "fit_rms_log_residual": resid, "sigma2_final": float(res.series.sigma2[-1]),
            "departure_time": departure_time(res.series, d0(cfg.kappa))}, ["variance.txt", "histogram.txt"]


def _qw_run(cfg: ExperimentConfig, out: Path) -> dict:
    steps = cfg.steps or 500
    ensemble = cfg.ensemble or (1 if cfg.policy == "fixed_hadamard" else 50)
    walk = WalkSpec(cfg.rho, cfg.policy, cfg.seed)
    spec = SystemSpec(N=cfg.lattice_size, hbar_eff=cfg.hbar_eff, walk=walk, m0=cfg.m0, spread=False)
    res = run_ensemble(spec, steps, ensemble, cfg.workers)
    res.series.write(out / "variance.txt")
    files = ["variance.txt"]
    if cfg.dump_coins:
        QuantumWalk(walk, spec.lattice, 0).dump_coins(steps, out / "coins.txt")
        files.append("coins.txt")
    lo = max(1, steps // 10)
    return {"steps": steps, "loglog_slope": slope_loglog(res.series, (lo, steps)),
            "sigma2_final": float(res.series.sigma2[-1])}, files


def _combined_run(cfg: ExperimentConfig, out: Path) -> dict:
    t_loc, _, s2_loc = theory_localization(cfg.kappa, cfg.rho, cfg.hbar_eff)
    steps = cfg.steps or max(1, int(round(10 * t_loc)))
    ensemble = cfg.ensemble or 8
    walk = WalkSpec(cfg.rho, cfg.policy, cfg.seed)
    spec = SystemSpec(N=cfg.lattice_size, hbar_eff=cfg.hbar_eff, kappa=cfg.kappa, walk=walk,
                      m0=cfg.m0, spread=True)
    res = run_ensemble(spec, steps, ensemble, cfg.workers)
    res.series.write(out / "variance.txt")
    return {"t_loc": t_loc, "sigma2_loc": s2_loc, "d_rho": d_rho(cfg.kappa, cfg.rho), "steps": steps,
            "sigma2_final": float(res.series.sigma2[-1])}, ["variance.txt"]


def _kappa_scan(cfg: ExperimentConfig, out: Path) -> dict:
    rows = []
    for system in cfg.system_list():
        rows += kappa_scan(system, cfg.kappa_list(), cfg.ensemble or 16, cfg.lattice_size,
                           cfg.seed, cfg.hbar_eff, cfg.workers)
    write_scan(rows, out / "scan.txt", {"ensemble": cfg.ensemble or 16, "N": cfg.lattice_size,
                                        "seed": cfg.seed})
    return {"points": len(rows)}, ["scan.txt"]


def _fit_shape(cfg: ExperimentConfig, out: Path) -> dict:
    hist = ShapeHistogram.read(cfg.input)
    l_s, resid = fit_ls(hist, scale=cfg.fit_scale)
    (out / "fit.txt").write_text(f"# columns: l_s rms_log_residual\n{l_s:.17g} {resid:.17g}\n")
    return {"l_s_fit": l_s, "fit_rms_log_residual": resid}, ["fit.txt"]


_PIPELINES = {
    "classical-diffusion": _classical,
    "kr-localize": _kr_localize,
    "qw-run": _qw_run,
    "combined-run": _combined_run,
    "kappa-scan": _kappa_scan,
    "fit-shape": _fit_shape,
}


def run(config: ExperimentConfig) -> RunManifest:
    config.validate()
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    log.info("running %s", config.experiment)
    try:
        results, files = _PIPELINES[config.experiment](config, out)
    except KickwalkError as exc:
        raise type(exc)(f"{config.experiment} (kappa={config.kappa}, rho={config.rho}, "
                        f"N={config.lattice_size}): {exc}") from exc
    wall = time.perf_counter() - t0
    checksums = {name: sha256(out / name) for name in files}
    manifest = RunManifest(config.resolved(), __version__, GENERATOR_NAME, wall, checksums, results)
    manifest.write(out / "manifest.json")
    return manifest
