"""Least squares by Gram-Schmidt orthogonal decomposition, with a normal-equation baseline.

P = W A where W has mutually orthogonal columns and A is unit upper
triangular. With D = diag(W^T W), the projections g = D^-1 W^T z satisfy
A theta = g, which is solved by back substitution; no general inverse is
ever formed.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DataError, SingularityError
from .regressors import InputScaler, MonomialBasis, build_regressor_matrix
from .surrogate import FitReport, SurrogateModel

DEGENERACY_RATIO = 1e-12
MODES = ("classical", "modified")


@dataclass
class OrthoDecomposition:
    W: np.ndarray
    A: np.ndarray
    D: np.ndarray
    column_norms2: Optional[np.ndarray] = None  # <p_r, p_r>, for the degeneracy test

    def reconstruction_error(self, P) -> float:
        """||P - WA||_F / ||P||_F."""
        P = np.asarray(P)
        return float(np.linalg.norm(P - self.W @ self.A) / np.linalg.norm(P))

    def orthogonality_error(self) -> float:
        """Largest |<w_i, w_j>| / (||w_i|| ||w_j||) over i != j."""
        G = self.W.T @ self.W
        s = np.sqrt(np.diag(G))
        C = np.abs(G) / np.outer(s, s)
        np.fill_diagonal(C, 0.0)
        return float(C.max()) if C.size else 0.0

    @property
    def condition_indicator(self) -> float:
        return float(self.D.min() / self.D.max())


def _degenerate(d, pn2):
    return not d > DEGENERACY_RATIO * pn2 or not np.isfinite(d)


def gram_schmidt_decompose(P, mode: str = "modified") -> OrthoDecomposition:
    """Orthogonalize the columns of P in order.

    ``classical`` projects each original column p_r against all earlier
    w_i at once, exactly as the textbook recursion reads. ``modified``
    removes each w_i from the remaining columns as soon as it is formed,
    which keeps orthogonality far better in floating point. Both give
    P = WA with A unit upper triangular.
    """
    if mode not in MODES:
        raise DataError(f"unknown Gram-Schmidt mode {mode!r}; expected one of {MODES}")
    P = np.asarray(P, dtype=np.float64)
    if P.ndim != 2:
        raise DataError(f"P must be 2-D, got shape {P.shape}")
    n, m = P.shape
    if n < m:
        raise DataError(f"need at least as many rows as columns, got {n} x {m}")
    if not np.all(np.isfinite(P)):
        raise DataError("P has non-finite entries")
    pn2 = np.einsum("ij,ij->j", P, P)
    W = np.array(P, order="F", copy=True)
    A = np.eye(m)
    D = np.empty(m)

    if mode == "classical":
        for r in range(m):
            if r:
                sig = (W[:, :r].T @ P[:, r]) / D[:r]
                A[:r, r] = sig
                W[:, r] = P[:, r] - W[:, :r] @ sig
            D[r] = W[:, r] @ W[:, r]
            if _degenerate(D[r], pn2[r]):
                raise SingularityError(f"column {r} is numerically dependent on earlier columns", column=r)
    else:
        for i in range(m):
            w = W[:, i]
            D[i] = w @ w
            if _degenerate(D[i], pn2[i]):
                raise SingularityError(f"column {i} is numerically dependent on earlier columns", column=i)
            if i + 1 < m:
                sig = (w @ W[:, i + 1:]) / D[i]
                A[i, i + 1:] = sig
                W[:, i + 1:] -= np.outer(w, sig)
    return OrthoDecomposition(W, A, D, pn2)


def project_output(decomp: OrthoDecomposition, z) -> np.ndarray:
    """g_i = <w_i, z> / <w_i, w_i>."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (decomp.W.shape[0],):
        raise DataError(f"output vector has shape {z.shape}, expected ({decomp.W.shape[0]},)")
    D = decomp.D
    ref = decomp.column_norms2 if decomp.column_norms2 is not None else np.zeros_like(D)
    for i, (d, p) in enumerate(zip(D, ref)):
        if _degenerate(d, p):
            raise SingularityError(f"orthogonal column {i} is degenerate", column=i)
    return (decomp.W.T @ z) / D


def back_substitute(A, g) -> np.ndarray:
    """Solve A theta = g for unit upper-triangular A, last unknown first."""
    A = np.asarray(A, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    m = g.shape[0]
    if g.ndim != 1 or A.shape != (m, m):
        raise DataError(f"A has shape {A.shape}, g has shape {g.shape}")
    if np.any(np.tril(A, -1)) or np.any(np.diag(A) != 1.0):
        raise DataError("A must be unit upper-triangular")
    theta = np.empty(m)
    for i in range(m - 1, -1, -1):
        theta[i] = g[i] - A[i, i + 1:] @ theta[i + 1:]
    return theta


def normal_equation_solve(P, z) -> np.ndarray:
    """Baseline theta = (P^T P)^-1 P^T z via a dense solve of the normal equations."""
    P = np.asarray(P, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if P.ndim != 2 or z.shape != (P.shape[0],):
        raise DataError(f"P has shape {P.shape}, z has shape {z.shape}")
    G = P.T @ P
    if not np.linalg.cond(G) < 1.0 / np.finfo(float).eps:
        raise SingularityError("P^T P is numerically singular")
    try:
        return np.linalg.solve(G, P.T @ z)
    except np.linalg.LinAlgError as e:
        raise SingularityError(f"P^T P is singular: {e}") from None


def solve(P, z, mode: str = "modified"):
    """Gram-Schmidt least-squares solution; returns (theta, decomposition)."""
    dec = gram_schmidt_decompose(P, mode)
    return back_substitute(dec.A, project_output(dec, z)), dec


def fit(train, basis: MonomialBasis, scaler: Optional[InputScaler] = None,
        mode: str = "modified") -> SurrogateModel:
    """Fit the multilinear surrogate to a labeled dataset."""
    if train.outputs is None:
        raise DataError("training dataset has no outputs")
    P = build_regressor_matrix(train, basis, scaler)
    theta, dec = solve(P, train.outputs, mode)
    if not np.all(np.isfinite(theta)):
        raise SingularityError("fitted coefficients are not finite")
    model = SurrogateModel(theta, basis, scaler)
    resid = train.outputs - model.predict(train.inputs)
    model.fit_report = FitReport(
        residual_norm=float(np.linalg.norm(resid)),
        condition_indicator=dec.condition_indicator,
        solver=f"gram_schmidt:{mode}",
        provenance=getattr(train, "provenance", ""),
        n_train=len(train.outputs),
    )
    return model
