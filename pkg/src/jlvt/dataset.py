"""Dataset container and its CSV form.

CSV header is ``L,Ld,tsi,tox,VC,VD`` with an optional trailing ``VT``.
Columns are bound by header name, so any column order reads back the same.
Floats are written with ``repr`` which round-trips exactly.
"""
import csv
from dataclasses import dataclass, field
import io
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from .device_oracle import INPUT_NAMES, DeviceInputs
from .errors import DataError

OUTPUT_NAME = "VT"


@dataclass
class Dataset:
    """N rows of device inputs, columns in ``INPUT_NAMES`` order, plus optional V_T labels."""

    inputs: np.ndarray
    outputs: Optional[np.ndarray] = None
    provenance: str = ""

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=float)
        if self.inputs.ndim != 2 or self.inputs.shape[1] != len(INPUT_NAMES):
            raise DataError(f"inputs must have shape (N, {len(INPUT_NAMES)}), got {self.inputs.shape}")
        if len(self.inputs) < 1:
            raise DataError("dataset must have at least one row")
        if self.outputs is not None:
            self.outputs = np.asarray(self.outputs, dtype=float)
            if self.outputs.shape != (len(self.inputs),):
                raise DataError(
                    f"{self.outputs.shape[0] if self.outputs.ndim else 0} outputs for {len(self.inputs)} rows")

    def __len__(self):
        return len(self.inputs)

    def rows(self) -> Iterator[DeviceInputs]:
        for k, r in enumerate(self.inputs):
            try:
                yield DeviceInputs(*(float(v) for v in r))
            except DataError as e:
                e.row = k
                raise

    def validate(self) -> "Dataset":
        """Check every row against the DeviceInputs invariants."""
        for _ in self.rows():
            pass
        return self

    def with_outputs(self, outputs, provenance=None) -> "Dataset":
        return Dataset(self.inputs.copy(), outputs, self.provenance if provenance is None else provenance)


def to_csv_text(ds: Dataset) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = list(INPUT_NAMES) + ([OUTPUT_NAME] if ds.outputs is not None else [])
    w.writerow(header)
    for k, row in enumerate(ds.inputs):
        vals = [repr(float(v)) for v in row]
        if ds.outputs is not None:
            vals.append(repr(float(ds.outputs[k])))
        w.writerow(vals)
    return buf.getvalue()


def write_csv(ds: Dataset, path) -> None:
    Path(path).write_text(to_csv_text(ds), encoding="utf-8", newline="")


def read_csv(path, provenance: Optional[str] = None, require_outputs: bool = False) -> Dataset:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        missing = [n for n in INPUT_NAMES if n not in header]
        if missing:
            raise DataError(f"{path}: missing columns {missing}")
        unknown = [h for h in header if h not in INPUT_NAMES and h != OUTPUT_NAME]
        if unknown or len(set(header)) != len(header):
            raise DataError(f"{path}: unexpected or duplicate columns in header {header}")
        idx = [header.index(n) for n in INPUT_NAMES]
        out_idx = header.index(OUTPUT_NAME) if OUTPUT_NAME in header else None
        if require_outputs and out_idx is None:
            raise DataError(f"{path}: no {OUTPUT_NAME} column")
        X, z = [], []
        for line, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(header):
                raise DataError(f"{path}:{line}: expected {len(header)} fields, got {len(rec)}")
            try:
                X.append([float(rec[i]) for i in idx])
                if out_idx is not None:
                    z.append(float(rec[out_idx]))
            except ValueError as e:
                raise DataError(f"{path}:{line}: {e}") from None
    if not X:
        raise DataError(f"{path}: no data rows")
    return Dataset(np.array(X), np.array(z) if out_idx is not None else None,
                   provenance if provenance is not None else path.stem)
