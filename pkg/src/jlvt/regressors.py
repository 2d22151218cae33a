"""Multilinear monomial basis and the regressor matrix P.

Columns follow the canonical order: all single inputs, then pairs in
lexicographic order, and so on up to the product of all m inputs. An
optional leading all-ones column carries the intercept.

A term is a bitmask over the inputs (bit i set means input i+1 appears).
Every term of size k >= 2 is evaluated as (term minus its highest input)
times that input, so each column costs one multiply given the earlier ones.
Matrix and single-row paths use the identical recurrence and therefore
agree bit for bit.
"""
from dataclasses import dataclass
from itertools import combinations
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, DataError

MAX_INPUTS = 20


@dataclass(frozen=True)
class MonomialBasis:
    m: int
    include_bias: bool
    terms: Tuple[int, ...]

    def __post_init__(self):
        if len(set(self.terms)) != len(self.terms):
            raise ConfigError("duplicate basis terms")
        full = (1 << self.m) - 1
        if any(t <= 0 or t & ~full for t in self.terms):
            raise ConfigError("basis terms must be non-empty subsets of the inputs")
        if self.terms != canonical_terms(self.m):
            raise ConfigError("basis terms are not in canonical order")

    @property
    def n_columns(self) -> int:
        """M_total: product terms plus the bias column if present."""
        return len(self.terms) + int(self.include_bias)

    def plan(self):
        """(parent column, input index) per product term; parent -1 means the term is a single input."""
        return _plan(self.m, self.include_bias)

    def term_indices(self, j: int) -> Tuple[int, ...]:
        """Zero-based input indices of product term j (bias excluded)."""
        t = self.terms[j]
        return tuple(i for i in range(self.m) if t >> i & 1)


def canonical_terms(m: int) -> Tuple[int, ...]:
    out = []
    for k in range(1, m + 1):
        for combo in combinations(range(m), k):
            out.append(sum(1 << i for i in combo))
    return tuple(out)


def monomial_basis(m: int, include_bias: bool = True) -> MonomialBasis:
    if not isinstance(m, (int, np.integer)) or not 1 <= m <= MAX_INPUTS:
        raise ConfigError(f"input count must be in [1, {MAX_INPUTS}], got {m}")
    return MonomialBasis(int(m), bool(include_bias), canonical_terms(int(m)))


_PLAN_CACHE = {}


def _plan(m, include_bias):
    key = (m, include_bias)
    if key not in _PLAN_CACHE:
        terms = canonical_terms(m)
        offset = int(include_bias)
        column = {t: offset + j for j, t in enumerate(terms)}
        steps = []
        for t in terms:
            top = t.bit_length() - 1
            rest = t & ~(1 << top)
            steps.append((column[rest] if rest else -1, top))
        _PLAN_CACHE[key] = tuple(steps)
    return _PLAN_CACHE[key]


@dataclass(frozen=True)
class InputScaler:
    """Per-input affine map u -> (u - offset) * gain."""

    offset: Tuple[float, ...]
    gain: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "offset", tuple(float(v) for v in self.offset))
        object.__setattr__(self, "gain", tuple(float(v) for v in self.gain))
        if len(self.offset) != len(self.gain):
            raise ConfigError("scaler offset and gain lengths differ")
        vals = self.offset + self.gain
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError("scaler entries must be finite")
        if any(g == 0 for g in self.gain):
            raise ConfigError("scaler gain must be nonzero")

    @classmethod
    def from_bounds(cls, bounds: Sequence[Tuple[float, float]]) -> "InputScaler":
        """Map each [lo, hi] onto [-1, 1]; a zero-width interval gets unit gain."""
        offset, gain = [], []
        for lo, hi in bounds:
            offset.append(0.5 * (lo + hi))
            gain.append(2.0 / (hi - lo) if hi > lo else 1.0)
        return cls(tuple(offset), tuple(gain))

    @property
    def m(self) -> int:
        return len(self.offset)

    def apply(self, X: np.ndarray) -> np.ndarray:
        return (X - np.asarray(self.offset)) * np.asarray(self.gain)

    def invert(self, U: np.ndarray) -> np.ndarray:
        return np.asarray(U) / np.asarray(self.gain) + np.asarray(self.offset)


def _as_matrix(data) -> np.ndarray:
    X = getattr(data, "inputs", data)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[0] == 0:
        raise DataError(f"expected a non-empty 2-D input array, got shape {X.shape}")
    return X


def build_regressor_matrix(data, basis: MonomialBasis,
                           scaler: Optional[InputScaler] = None) -> np.ndarray:
    """Dense N x M_total regressor matrix for a dataset or an (N, m) array."""
    X = _as_matrix(data)
    if X.shape[1] != basis.m:
        raise DataError(f"dataset has {X.shape[1]} inputs, basis expects {basis.m}")
    if not np.all(np.isfinite(X)):
        raise DataError("non-finite input value")
    if scaler is not None:
        if scaler.m != basis.m:
            raise DataError("scaler arity does not match basis")
        X = scaler.apply(X)
    # column-major fill: each new column reads one earlier column
    P = np.empty((basis.n_columns, X.shape[0]))
    if basis.include_bias:
        P[0] = 1.0
    col = int(basis.include_bias)
    for parent, i in basis.plan():
        if parent < 0:
            P[col] = X[:, i]
        else:
            np.multiply(P[parent], X[:, i], out=P[col])
        col += 1
    return P.T


def expand_row(row, basis: MonomialBasis, scaler: Optional[InputScaler] = None):
    """Monomial values of one row as a list of Python floats (bias first if present)."""
    u = [float(v) for v in getattr(row, "as_tuple", lambda: row)()]
    if len(u) != basis.m:
        raise DataError(f"row has {len(u)} inputs, basis expects {basis.m}")
    if scaler is not None:
        u = [(v - o) * g for v, o, g in zip(u, scaler.offset, scaler.gain)]
    vals = [1.0] if basis.include_bias else []
    for parent, i in basis.plan():
        vals.append(u[i] if parent < 0 else vals[parent] * u[i])
    return vals


def eval_expansion(row, basis: MonomialBasis, theta, scaler: Optional[InputScaler] = None) -> float:
    """theta_0 + sum_j theta_j * monomial_j(row), accumulated in column order."""
    theta = [float(t) for t in theta]
    if len(theta) != basis.n_columns:
        raise DataError(f"theta has length {len(theta)}, basis needs {basis.n_columns}")
    acc = 0.0
    for t, v in zip(theta, expand_row(row, basis, scaler)):
        acc += t * v
    return acc
