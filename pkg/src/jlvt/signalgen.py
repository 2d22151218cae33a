"""Training and test datasets.

Training rows are uniform draws over each input interval. Test sequences
drive V_C and V_D with a chirp, sinusoid or triangle wave, while the four
geometric inputs step through a small full-factorial grid, one grid point
per equal-length segment of the sequence.
"""
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Optional, Tuple

import numpy as np

from .dataset import Dataset
from .device_oracle import INPUT_NAMES, OracleParams, threshold_voltage
from .errors import ConfigError, JlvtError

GEOMETRY = ("L", "Ld", "tsi", "tox")
KINDS = ("chirp", "sinusoidal", "q_triangular")


@dataclass(frozen=True)
class ParameterRanges:
    L: Tuple[float, float] = (20.0, 40.0)
    Ld: Tuple[float, float] = (0.0, 20.0)
    tsi: Tuple[float, float] = (5.0, 15.0)
    tox: Tuple[float, float] = (1.0, 4.0)
    VC: Tuple[float, float] = (0.0, 1.0)
    VD: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        for name in INPUT_NAMES:
            iv = getattr(self, name)
            if iv is None or len(iv) != 2:
                raise ConfigError(f"range for {name} must be a [lo, hi] pair")
            lo, hi = float(iv[0]), float(iv[1])
            object.__setattr__(self, name, (lo, hi))
            if not np.isfinite([lo, hi]).all() or lo > hi:
                raise ConfigError(f"range for {name} is not a valid interval: {iv}")
            if name in ("L", "tsi", "tox") and not lo > 0:
                raise ConfigError(f"{name} lower bound must be > 0")
            if name == "Ld" and lo < 0:
                raise ConfigError("Ld lower bound must be >= 0")
        if self.Ld[1] > self.L[0]:
            # Ld <= L must hold for every draw
            raise ConfigError("Ld upper bound exceeds L lower bound")

    def bounds(self):
        return [getattr(self, n) for n in INPUT_NAMES]

    def to_dict(self) -> Dict[str, list]:
        return {n: list(getattr(self, n)) for n in INPUT_NAMES}


def _rng(seed) -> np.random.Generator:
    # PCG64 output is specified bit-for-bit, independent of platform
    return np.random.Generator(np.random.PCG64(seed))


def random_training_set(ranges: ParameterRanges, n: int, seed: int) -> Dataset:
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    lo, hi = np.array(ranges.bounds()).T
    X = _rng(seed).uniform(lo, hi, size=(n, len(INPUT_NAMES)))
    return Dataset(np.clip(X, lo, hi), provenance="random-train")


@dataclass(frozen=True)
class WaveformConfig:
    """Waveform shape. Frequencies are in cycles per sequence; the period is in samples."""

    f0: float = 1.0
    f1: float = 20.0
    frequency: float = 5.0
    phase: float = 0.0
    period: float = 400.0
    sweep_points: int = 3


def waveform(kind: str, n: int, cfg: WaveformConfig) -> np.ndarray:
    """Unit-amplitude waveform sampled at k = 0..n-1, values in [-1, 1]."""
    if kind not in KINDS:
        raise ConfigError(f"unknown signal kind {kind!r}; expected one of {KINDS}")
    if n < 2:
        raise ConfigError(f"test sequences need n >= 2, got {n}")
    k = np.arange(n, dtype=float)
    if kind == "chirp":
        if min(cfg.f0, cfg.f1) < 0 or max(cfg.f0, cfg.f1) > n / 2:
            raise ConfigError(f"chirp frequencies must lie in [0, n/2], got {cfg.f0}, {cfg.f1}")
        return np.sin(2 * np.pi * (cfg.f0 * k + (cfg.f1 - cfg.f0) * k**2 / (2 * n)) / n)
    if kind == "sinusoidal":
        if not 1 <= cfg.frequency <= n / 2:
            raise ConfigError(f"sinusoid needs 1 <= frequency <= n/2 so one full cycle fits, got {cfg.frequency}")
        return np.sin(2 * np.pi * (cfg.frequency * k) / n + cfg.phase)
    if not 2 <= cfg.period <= n:
        raise ConfigError(f"triangle period must lie in [2, n={n}], got {cfg.period}")
    x = np.mod(k, cfg.period) / cfg.period
    return 1.0 - 4.0 * np.abs(x - 0.5)


def _rescale(w, interval):
    lo, hi = interval
    return np.clip(lo + (w + 1.0) * 0.5 * (hi - lo), lo, hi)


def sweep_grid(ranges: ParameterRanges, points: int) -> np.ndarray:
    """Full-factorial grid over the geometric inputs, L varying slowest."""
    if points < 1:
        raise ConfigError(f"sweep_points must be >= 1, got {points}")
    axes = []
    for name in GEOMETRY:
        lo, hi = getattr(ranges, name)
        axes.append([0.5 * (lo + hi)] if points == 1 else np.linspace(lo, hi, points))
    return np.array(list(product(*axes)))


def test_sequence(kind: str, n: int, ranges: ParameterRanges,
                  cfg: Optional[WaveformConfig] = None) -> Dataset:
    cfg = cfg or WaveformConfig()
    w = waveform(kind, n, cfg)
    grid = sweep_grid(ranges, cfg.sweep_points)
    if n < len(grid):
        raise ConfigError(f"n={n} is shorter than the {len(grid)}-point sweep grid")
    segment = np.arange(n) * len(grid) // n
    X = np.empty((n, len(INPUT_NAMES)))
    X[:, :4] = grid[segment]
    X[:, 4] = _rescale(w, ranges.VC)
    X[:, 5] = _rescale(w, ranges.VD)
    return Dataset(X, provenance=f"{kind}-test")


test_sequence.__test__ = False  # keep pytest from collecting the name


def label_with_oracle(dataset: Dataset, params: OracleParams) -> Dataset:
    """Return a copy of ``dataset`` with outputs from the analytical model."""
    out = np.empty(len(dataset))
    for k, row in enumerate(dataset.rows()):
        try:
            out[k] = threshold_voltage(params, row)
        except JlvtError as e:
            e.row = k
            raise
    return dataset.with_outputs(out)
