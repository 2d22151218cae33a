"""Experiment configuration: a JSON file, fully validated, unknown keys rejected."""
from dataclasses import asdict, dataclass, field, fields
import json
from pathlib import Path
from typing import List, Optional

from .bench import BenchConfig
from .device_oracle import EPS_OX_SIO2, Q_ELEMENTARY, BarrierSpec, OracleParams, StandInBarrier
from .errors import ConfigError, JlvtError
from .metrics import NORMALIZATIONS
from .ols_solver import MODES
from .regressors import InputScaler
from .signalgen import KINDS, ParameterRanges, WaveformConfig, sweep_grid, waveform


@dataclass
class BarrierConfig:
    alpha: List[float] = field(default_factory=lambda: list(StandInBarrier.alpha))
    beta: List[float] = field(default_factory=lambda: list(StandInBarrier.beta))
    gamma: List[float] = field(default_factory=lambda: list(StandInBarrier.gamma))
    tol: float = 1e-9
    max_iter: int = 200


@dataclass
class OracleConfig:
    q: float = Q_ELEMENTARY
    N_sub: float = 1e19
    N_f: float = 1e12
    V_FB0: float = 1.0
    eps_ox: float = EPS_OX_SIO2
    barrier: BarrierConfig = field(default_factory=BarrierConfig)

    def params(self) -> OracleParams:
        b = self.barrier
        spec = BarrierSpec(StandInBarrier(tuple(b.alpha), tuple(b.beta), tuple(b.gamma)),
                           tol=b.tol, max_iter=b.max_iter)
        return OracleParams(self.q, self.N_sub, self.N_f, self.V_FB0, self.eps_ox, spec)


@dataclass
class TrainConfig:
    n: int = 5000
    seed: int = 0


@dataclass
class SignalConfig:
    name: str
    kind: str
    n: int = 2000
    waveform: WaveformConfig = field(default_factory=WaveformConfig)


@dataclass
class SolverConfig:
    mode: str = "modified"
    include_bias: bool = True
    scale_inputs: bool = True


@dataclass
class MetricsConfig:
    normalization: str = "energy"
    bins: int = 30


@dataclass
class OutputConfig:
    dir: str = "out"


def default_signals() -> List[SignalConfig]:
    return [
        SignalConfig("chirp", "chirp", 2000, WaveformConfig(f0=1.0, f1=20.0)),
        SignalConfig("sinusoidal", "sinusoidal", 2000, WaveformConfig(frequency=5.0)),
        SignalConfig("q_triangular", "q_triangular", 2000, WaveformConfig(period=400.0)),
    ]


@dataclass
class ExperimentConfig:
    oracle: OracleConfig = field(default_factory=OracleConfig)
    ranges: ParameterRanges = field(default_factory=ParameterRanges)
    train: TrainConfig = field(default_factory=TrainConfig)
    signals: List[SignalConfig] = field(default_factory=default_signals)
    solver: SolverConfig = field(default_factory=SolverConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)
    bench: BenchConfig = field(default_factory=BenchConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def validate(self) -> "ExperimentConfig":
        try:
            self.oracle.params()
        except JlvtError as e:
            raise ConfigError(f"oracle: {e}") from None
        if self.train.n < 1:
            raise ConfigError("train.n must be >= 1")
        if self.train.seed < 0:
            raise ConfigError("train.seed must be >= 0")
        names = [s.name for s in self.signals]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate signal names {names}")
        for s in self.signals:
            if s.kind not in KINDS:
                raise ConfigError(f"signal {s.name!r}: unknown kind {s.kind!r}")
            if not s.name or not s.name.replace("_", "").replace("-", "").isalnum():
                raise ConfigError(f"signal name {s.name!r} must be alphanumeric (plus _ and -)")
            try:
                waveform(s.kind, s.n, s.waveform)
                if s.n < len(sweep_grid(self.ranges, s.waveform.sweep_points)):
                    raise ConfigError(f"n={s.n} is shorter than the sweep grid")
            except (ConfigError, TypeError) as e:
                raise ConfigError(f"signal {s.name!r}: {e}") from None
        if self.solver.mode not in MODES:
            raise ConfigError(f"solver.mode must be one of {MODES}")
        if self.metrics.normalization not in NORMALIZATIONS:
            raise ConfigError(f"metrics.normalization must be one of {NORMALIZATIONS}")
        if self.metrics.bins < 1:
            raise ConfigError("metrics.bins must be >= 1")
        return self

    def scaler(self) -> Optional[InputScaler]:
        return InputScaler.from_bounds(self.ranges.bounds()) if self.solver.scale_inputs else None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ranges"] = self.ranges.to_dict()
        return d


def _build(cls, data, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(f"{where}: unknown keys {unknown}")
    kwargs = {}
    for name, value in data.items():
        sub = _NESTED.get((cls, name))
        path = f"{where}.{name}"
        if sub is list:
            if not isinstance(value, list):
                raise ConfigError(f"{path}: expected a list")
            value = [_build(SignalConfig, v, f"{path}[{i}]") for i, v in enumerate(value)]
        elif sub is not None:
            value = _build(sub, value, path)
        kwargs[name] = value
    try:
        return cls(**kwargs)
    except (JlvtError, TypeError) as e:
        raise ConfigError(f"{where}: {e}") from None


_NESTED = {
    (ExperimentConfig, "oracle"): OracleConfig,
    (OracleConfig, "barrier"): BarrierConfig,
    (ExperimentConfig, "ranges"): ParameterRanges,
    (ExperimentConfig, "train"): TrainConfig,
    (ExperimentConfig, "signals"): list,
    (SignalConfig, "waveform"): WaveformConfig,
    (ExperimentConfig, "solver"): SolverConfig,
    (ExperimentConfig, "metrics"): MetricsConfig,
    (ExperimentConfig, "bench"): BenchConfig,
    (ExperimentConfig, "output"): OutputConfig,
}


def from_dict(data: dict) -> ExperimentConfig:
    return _build(ExperimentConfig, data, "config").validate()


def load(path) -> ExperimentConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON: {e}") from None
    return from_dict(data)


def default_config_json() -> str:
    return json.dumps(ExperimentConfig().to_dict(), indent=2) + "\n"
