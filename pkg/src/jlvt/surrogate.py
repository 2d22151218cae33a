"""The fitted surrogate and its JSON model file."""
from dataclasses import asdict, dataclass, field
import json
import math
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import DataError
from .regressors import InputScaler, MonomialBasis, build_regressor_matrix, eval_expansion, monomial_basis

FORMAT_VERSION = 1


@dataclass
class FitReport:
    residual_norm: float = float("nan")
    condition_indicator: float = float("nan")
    solver: str = ""
    provenance: str = ""
    n_train: int = 0


@dataclass
class SurrogateModel:
    theta: np.ndarray
    basis: MonomialBasis
    scaler: Optional[InputScaler] = None
    fit_report: FitReport = field(default_factory=FitReport)

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=np.float64)
        if self.theta.shape != (self.basis.n_columns,):
            raise DataError(f"theta has shape {self.theta.shape}, basis needs ({self.basis.n_columns},)")
        if not np.all(np.isfinite(self.theta)):
            raise DataError("theta has non-finite entries")
        if self.scaler is not None and self.scaler.m != self.basis.m:
            raise DataError("scaler arity does not match basis")

    def predict(self, X) -> np.ndarray:
        """Batch prediction.

        Accumulates theta_j * column_j in column order so each entry matches
        :meth:`predict_one` exactly.
        """
        P = build_regressor_matrix(X, self.basis, self.scaler)
        acc = np.zeros(P.shape[0])
        for j, t in enumerate(self.theta):
            acc += t * P[:, j]
        return acc

    def predict_one(self, row) -> float:
        return eval_expansion(row, self.basis, self.theta, self.scaler)

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "m": self.basis.m,
            "include_bias": self.basis.include_bias,
            "terms": list(self.basis.terms),
            "theta": [float(t) for t in self.theta],
            "scaler": None if self.scaler is None else {
                "offset": list(self.scaler.offset), "gain": list(self.scaler.gain)},
            "fit_report": _clean(asdict(self.fit_report)),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SurrogateModel":
        if d.get("format_version") != FORMAT_VERSION:
            raise DataError(f"unsupported model format_version {d.get('format_version')!r}")
        try:
            basis = monomial_basis(d["m"], d["include_bias"])
            if list(basis.terms) != list(d["terms"]):
                raise DataError("model terms do not match the canonical basis")
            sc = d.get("scaler")
            scaler = None if sc is None else InputScaler(tuple(sc["offset"]), tuple(sc["gain"]))
            report = FitReport(**{k: (float("nan") if v is None else v)
                                  for k, v in d.get("fit_report", {}).items()})
            return cls(np.array(d["theta"], dtype=np.float64), basis, scaler, report)
        except (KeyError, TypeError) as e:
            raise DataError(f"malformed model file: {e}") from None

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "SurrogateModel":
        try:
            d = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise DataError(f"{path}: not valid JSON: {e}") from None
        return cls.from_dict(d)


def _clean(d):
    # JSON has no NaN
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in d.items()}
