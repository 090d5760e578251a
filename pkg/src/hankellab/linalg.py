"""Dense symmetric eigendecomposition, singular values, and the operator /
Hilbert-Schmidt / nuclear norms.

Singular values are computed from the Gram matrix M^T M, accepting the
squared-condition accuracy loss: values below 1e-9 * sigma_1 sit at or below
the resulting noise floor and are reported but flagged unreliable (decay
diagnostics only use values above the floor).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EigenSolverError
from .quadrature import OperatorMatrix

__all__ = [
    "EigenDecomposition",
    "sym_eigen",
    "singular_values",
    "reliability_floor",
    "op_norm",
    "frobenius_norm",
    "nuclear_norm",
]

RELIABLE_FLOOR_FACTOR = 1e-9


def _as_array(M) -> np.ndarray:
    if isinstance(M, OperatorMatrix):
        return M.entries
    return np.asarray(M, dtype=float)


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: Optional[np.ndarray]  # orthonormal columns, or None
    residual_bound: float


def sym_eigen(M, want_vectors: bool = False) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending.

    The input must be symmetric to 1e-12 relative; it is symmetrised exactly
    before the solve so eigenvalues are real by construction.
    """
    A = _as_array(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise EigenSolverError(f"expected a square matrix, got shape {A.shape}")
    scale = np.abs(A).max(initial=0.0)
    asym = np.abs(A - A.T).max(initial=0.0)
    if asym > 1e-12 * max(scale, 1e-300):
        raise EigenSolverError(f"matrix not symmetric: max|M - M^T| = {asym:.3e}")
    S = 0.5 * (A + A.T)
    try:
        if want_vectors:
            vals, vecs = np.linalg.eigh(S)
        else:
            vals = np.linalg.eigvalsh(S)
            vecs = None
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigensolver failed to converge: {exc}") from exc
    residual = 0.0
    if vecs is not None:
        fro = float(np.linalg.norm(S, "fro"))
        if fro > 0.0:
            res = S @ vecs - vecs * vals[np.newaxis, :]
            residual = float(np.linalg.norm(res, axis=0).max() / fro)
    return EigenDecomposition(eigenvalues=vals, eigenvectors=vecs, residual_bound=residual)


def singular_values(M) -> np.ndarray:
    """Descending singular values via the eigenvalues of M^T M."""
    A = _as_array(M)
    if A.ndim != 2:
        raise EigenSolverError(f"expected a matrix, got ndim={A.ndim}")
    if A.shape[0] < A.shape[1]:
        A = A.T
    gram = A.T @ A
    try:
        vals = np.linalg.eigvalsh(0.5 * (gram + gram.T))
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"Gram eigensolver failed: {exc}") from exc
    return np.sqrt(np.clip(vals[::-1], 0.0, None))


def reliability_floor(sigma: np.ndarray) -> float:
    """Threshold below which Gram-based singular values are noise."""
    sigma = np.asarray(sigma, dtype=float)
    return RELIABLE_FLOOR_FACTOR * (sigma[0] if sigma.size else 0.0)


def op_norm(M) -> float:
    """Largest singular value."""
    sv = singular_values(M)
    return float(sv[0]) if sv.size else 0.0


def frobenius_norm(M) -> float:
    """Hilbert-Schmidt norm; the entrywise and singular-value formulas are
    both evaluated and must agree to 1e-10 relative."""
    A = _as_array(M)
    direct = float(np.sqrt((A * A).sum()))
    via_sv = float(np.sqrt((singular_values(A) ** 2).sum()))
    if abs(direct - via_sv) > 1e-10 * max(direct, 1e-300) + 1e-300:
        raise EigenSolverError(
            f"Frobenius norm routes disagree: {direct!r} vs {via_sv!r}"
        )
    return direct


def nuclear_norm(M) -> float:
    """Sum of singular values."""
    return float(singular_values(M).sum())
