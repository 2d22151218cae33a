"""Batch runtime measurement for the oracle and the surrogate."""
from dataclasses import dataclass
import hashlib
import statistics
import time
from typing import List, Sequence, Tuple

import numpy as np

from .dataset import Dataset
from .device_oracle import OracleParams, threshold_voltage
from .errors import ConfigError, JlvtError, MeasurementError
from .metrics import AGGREGATIONS, TimingReport, mean_sur, speedup_ratio
from .surrogate import SurrogateModel

_clock_info = time.get_clock_info("perf_counter")
if not _clock_info.monotonic:
    raise ImportError("perf_counter is not monotonic on this platform")
CLOCK_RESOLUTION = _clock_info.resolution


@dataclass(frozen=True)
class BenchConfig:
    warmup_runs: int = 3
    measured_runs: int = 11
    aggregation: str = "median"
    n: int = 10000

    def __post_init__(self):
        if self.warmup_runs < 0:
            raise ConfigError("warmup_runs must be >= 0")
        if self.measured_runs < 1:
            raise ConfigError("measured_runs must be >= 1")
        if self.n < 1:
            raise ConfigError("bench n must be >= 1")
        if self.aggregation not in AGGREGATIONS:
            raise ConfigError(f"aggregation must be one of {AGGREGATIONS}")


class OracleEvaluator:
    name = "oracle"

    def __init__(self, params: OracleParams):
        self.params = params

    def prepare(self, dataset: Dataset):
        return list(dataset.rows())

    def run(self, rows) -> np.ndarray:
        out = np.empty(len(rows))
        params = self.params
        for k, row in enumerate(rows):
            try:
                out[k] = threshold_voltage(params, row)
            except JlvtError as e:
                e.row = k
                raise
        return out


class SurrogateEvaluator:
    name = "surrogate"

    def __init__(self, model: SurrogateModel):
        self.model = model

    def prepare(self, dataset: Dataset):
        return np.ascontiguousarray(dataset.inputs)

    def run(self, X) -> np.ndarray:
        return self.model.predict(X)


@dataclass
class BenchResult:
    runtime: float
    samples: List[float]
    checksums: List[str]
    aggregation: str
    warmups: int
    unreliable: bool = False

    @property
    def consistent(self) -> bool:
        return len(set(self.checksums)) == 1


def _aggregate(samples, how):
    if how == "median":
        return statistics.median(samples)
    if how == "min":
        return min(samples)
    return statistics.fmean(samples)


def time_batch(evaluator, dataset: Dataset, config: BenchConfig = BenchConfig()) -> BenchResult:
    """Time whole-batch evaluation: warmups untimed, then ``measured_runs`` timed runs.

    A digest of every run's outputs is kept; differing digests mean the
    evaluator is not deterministic and the run is reported as such.
    """
    prepared = evaluator.prepare(dataset)
    for _ in range(config.warmup_runs):
        evaluator.run(prepared)
    samples, sums = [], []
    for _ in range(config.measured_runs):
        t0 = time.perf_counter()
        out = evaluator.run(prepared)
        samples.append(time.perf_counter() - t0)
        sums.append(hashlib.sha256(np.ascontiguousarray(out, dtype=np.float64).tobytes()).hexdigest())
    runtime = _aggregate(samples, config.aggregation)
    unreliable = min(samples) <= 0 or runtime < 100 * CLOCK_RESOLUTION
    return BenchResult(runtime, samples, sums, config.aggregation, config.warmup_runs, unreliable)


def resize(dataset: Dataset, n: int) -> Dataset:
    """Cycle or truncate rows so the batch has exactly n rows."""
    idx = np.arange(n) % len(dataset)
    out = None if dataset.outputs is None else dataset.outputs[idx]
    return Dataset(dataset.inputs[idx], out, dataset.provenance)


def compare(params: OracleParams, model: SurrogateModel, dataset: Dataset,
            config: BenchConfig = BenchConfig()) -> Tuple[TimingReport, BenchResult, BenchResult]:
    ref = time_batch(OracleEvaluator(params), dataset, config)
    pred = time_batch(SurrogateEvaluator(model), dataset, config)
    if not (ref.consistent and pred.consistent):
        raise MeasurementError("evaluator outputs changed between runs")
    report = speedup_ratio(ref.runtime, pred.runtime, config.measured_runs,
                           config.warmup_runs, config.aggregation)
    return report, ref, pred


def format_table(rows: Sequence[Tuple[str, float, TimingReport]]) -> str:
    """Plain-text summary: one row per signal plus a Mean row.

    The Mean SUR is the mean of the per-signal SURs.
    """
    if not rows:
        raise ConfigError("no benchmark rows")
    head = f"{'Signal':<14}{'NMSE%':>12}{'RT_P (s)':>14}{'RT_ref (s)':>14}{'SUR':>14}"
    lines = [head, "-" * len(head)]

    def line(name, nmse, rt_p, rt_r, sur):
        return f"{name:<14}{nmse:>12.6g}{rt_p:>14.6g}{rt_r:>14.6g}{sur:>14.12g}"

    for name, nmse, t in rows:
        lines.append(line(name, nmse, t.rt_pred, t.rt_ref, t.sur))
    lines.append(line("Mean",
                      float(np.mean([r[1] for r in rows])),
                      float(np.mean([r[2].rt_pred for r in rows])),
                      float(np.mean([r[2].rt_ref for r in rows])),
                      mean_sur([r[2] for r in rows])))
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> List[Tuple[str, float, float, float, float]]:
    """Inverse of :func:`format_table` (name, NMSE%, RT_P, RT_ref, SUR)."""
    out = []
    for ln in text.splitlines()[2:]:
        parts = ln.split()
        if len(parts) == 5:
            out.append((parts[0],) + tuple(float(p) for p in parts[1:]))
    return out
