"""Result containers and their decimal-text file formats."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidInputError


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _header(meta: dict) -> str:
    return "".join(f"# {k} = {v}\n" for k, v in meta.items())


def _parse_header(lines: list[str]) -> tuple[dict, list[str]]:
    meta, body = {}, []
    for line in lines:
        if line.startswith("#"):
            if "=" in line:
                k, v = line[1:].split("=", 1)
                meta[k.strip()] = v.strip()
        elif line.strip():
            body.append(line)
    return meta, body


@dataclass
class VarianceSeries:
    """Ensemble-averaged momentum variance at integer times."""

    t: np.ndarray
    sigma2: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=np.int64)
        self.sigma2 = np.asarray(self.sigma2, dtype=np.float64)
        if self.t.shape != self.sigma2.shape:
            raise InvalidInputError("t and sigma2 must have the same length")
        if np.any(np.diff(self.t) <= 0):
            raise InvalidInputError("t must be strictly increasing")
        # round-off can push a zero variance a hair below zero
        self.sigma2 = np.where((self.sigma2 < 0) & (self.sigma2 > -1e-9), 0.0, self.sigma2)
        if np.any(self.sigma2 < 0):
            raise InvalidInputError("sigma2 must be non-negative")

    def at(self, t: int) -> float:
        idx = np.searchsorted(self.t, t)
        if idx >= self.t.size or self.t[idx] != t:
            raise InvalidInputError(f"t={t} not in series")
        return float(self.sigma2[idx])

    def to_text(self) -> str:
        rows = "".join(f"{int(t)} {_fmt(s)}\n" for t, s in zip(self.t, self.sigma2))
        return _header(self.metadata) + "# columns: t sigma2_p\n" + rows

    def write(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def read(cls, path) -> "VarianceSeries":
        meta, body = _parse_header(Path(path).read_text().splitlines())
        meta.pop("columns", None)
        t, s = [], []
        for line in body:
            a, b = line.split()
            t.append(int(a))
            s.append(float(b))
        return cls(np.array(t), np.array(s), meta)


@dataclass
class ShapeHistogram:
    """Recentred momentum profile with unit-width bins centred on integers."""

    m_prime: np.ndarray
    probability: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.m_prime = np.asarray(self.m_prime, dtype=np.int64)
        self.probability = np.asarray(self.probability, dtype=np.float64)
        if self.m_prime.shape != self.probability.shape:
            raise InvalidInputError("bins and probabilities must have the same length")
        if np.any(np.diff(self.m_prime) != 1):
            raise InvalidInputError("bins must be consecutive integers")

    def to_text(self) -> str:
        rows = "".join(f"{int(m)} {_fmt(p)}\n" for m, p in zip(self.m_prime, self.probability))
        return _header(self.metadata) + "# columns: m_prime_bin probability\n" + rows

    def write(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def read(cls, path) -> "ShapeHistogram":
        meta, body = _parse_header(Path(path).read_text().splitlines())
        meta.pop("columns", None)
        m, p = [], []
        for line in body:
            a, b = line.split()
            m.append(int(a))
            p.append(float(b))
        return cls(np.array(m), np.array(p), meta)


@dataclass
class ScanRow:
    kappa: float
    system: str
    scaled_sigma: float
    theory_value: float


def write_scan(rows: list[ScanRow], path, metadata: dict | None = None) -> None:
    body = "".join(f"{_fmt(r.kappa)} {r.system} {_fmt(r.scaled_sigma)} {_fmt(r.theory_value)}\n"
                   for r in rows)
    Path(path).write_text(_header(metadata or {}) + "# columns: kappa system scaled_sigma theory_value\n" + body)


def read_scan(path) -> tuple[list[ScanRow], dict]:
    meta, body = _parse_header(Path(path).read_text().splitlines())
    meta.pop("columns", None)
    rows = []
    for line in body:
        k, sysname, s, th = line.split()
        rows.append(ScanRow(float(k), sysname, float(s), float(th)))
    return rows, meta
