"""Assembly of every operator expression used by the verification suite:
the model operators, weighted Hankel operators, half-line projections, block
compositions, the inversion symmetry, and the log-variable pushforwards.

Compositions of operators (squares, products through a projection, and
Hilbert-Schmidt norms of u L) discretise the inner integration variable on a
widened grid (double log-width, same step): a product over the truncated grid
only represents the composition restricted to the truncation window, whose
deviation from the full-line composition does not vanish under refinement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import GridError
from .kernels import KernelSpec, WeightSpec, kernel_A, kernel_L, weighted_hankel_kernel
from .quadrature import Grid, OperatorMatrix, make_grid, nystrom, nystrom_rect
from .specfun import check_alpha, ln_gamma, phi0, phi_inf, psi_minus, psi_plus

__all__ = [
    "ProjectionMask",
    "projection_mask",
    "assemble_A",
    "assemble_L",
    "assemble_wHa",
    "project",
    "inversion_conjugate",
    "widened_grid",
    "assemble_L_rect",
    "operator_square",
    "composed_block",
    "assemble_uL",
    "assemble_model_hankel",
    "log_pushforward_hankel",
    "change_of_variables_diagonal",
]

WIDE_FACTOR = 2


@dataclass(frozen=True)
class ProjectionMask:
    """Node indices on one side of t = 1 (the grid has no node at 1)."""

    grid: Grid
    side: str  # "zero" or "infinity"
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        idx.flags.writeable = False
        object.__setattr__(self, "indices", idx)

    def diagonal(self) -> np.ndarray:
        d = np.zeros(self.grid.N)
        d[self.indices] = 1.0
        return d


def projection_mask(grid: Grid, side: str) -> ProjectionMask:
    if side == "zero":
        idx = np.nonzero(grid.nodes < 1.0)[0]
    elif side == "infinity":
        idx = np.nonzero(grid.nodes > 1.0)[0]
    else:
        raise GridError(f"side must be 'zero' or 'infinity', got {side!r}")
    return ProjectionMask(grid=grid, side=side, indices=idx)


def assemble_A(alpha, grid: Grid) -> OperatorMatrix:
    """Nystrom matrix of the model kernel s^a t^a (s+t)^(-1-2a)."""
    a = check_alpha(alpha)
    return nystrom(kernel_A(a), grid, provenance=f"A(alpha={a})")


def assemble_L(alpha, grid: Grid) -> OperatorMatrix:
    """Nystrom matrix of the factor kernel t^a s^a e^(-st)/sqrt(Gamma(1+2a))."""
    a = check_alpha(alpha)
    return nystrom(kernel_L(a), grid, provenance=f"L(alpha={a})")


def assemble_wHa(a: KernelSpec, w: WeightSpec, grid: Grid) -> OperatorMatrix:
    """Nystrom matrix of the weighted Hankel kernel w(t) a(t+s) w(s)."""
    K = weighted_hankel_kernel(a, w)
    return nystrom(K, grid, provenance=f"wHa(alpha={a.alpha})")


def project(M: OperatorMatrix, left: ProjectionMask, right: ProjectionMask) -> OperatorMatrix:
    """Sub-matrix on rows(left) x cols(right); no zero padding."""
    if left.grid is not M.grid and left.grid.N != M.entries.shape[0]:
        raise GridError("left mask does not match the matrix grid")
    right_n = M.entries.shape[1]
    right_grid = M.col_grid or M.grid
    if right.grid is not right_grid and right.grid.N != right_n:
        raise GridError("right mask does not match the matrix grid")
    entries = M.entries[np.ix_(left.indices, right.indices)]
    return OperatorMatrix(
        grid=M.grid,
        entries=entries,
        provenance=f"{M.provenance}[{left.side},{right.side}]",
        col_grid=M.col_grid,
        row_indices=left.indices,
        col_indices=right.indices,
    )


def inversion_conjugate(M: OperatorMatrix) -> OperatorMatrix:
    """Conjugation by the inversion t -> 1/t: reversal of both indices.

    On the reciprocal-symmetric grid this is the discrete shadow of the
    unitary (Uf)(t) = (1/t) f(1/t); the model matrix is a fixed point, the
    factor matrix is not.
    """
    if not M.is_square():
        raise GridError("inversion conjugation needs a square matrix")
    return OperatorMatrix(
        grid=M.grid,
        entries=M.entries[::-1, ::-1].copy(),
        provenance=f"U*{M.provenance}*U",
        col_grid=M.col_grid,
    )


def widened_grid(grid: Grid, factor: int = WIDE_FACTOR) -> Grid:
    """Grid with ``factor`` times the log-width at the same step."""
    return make_grid(factor * grid.R, factor * grid.N)


def assemble_L_rect(alpha, grid: Grid, wide: Optional[Grid] = None) -> OperatorMatrix:
    """Rectangular factor matrix: rows on ``grid``, columns on the wide grid."""
    a = check_alpha(alpha)
    wide = wide or widened_grid(grid)
    return nystrom_rect(kernel_L(a), grid, wide, provenance=f"L_rect(alpha={a})")


def operator_square(alpha, grid: Grid, wide: Optional[Grid] = None) -> OperatorMatrix:
    """Quadrature approximation of the operator square of the factor operator.

    The inner integral runs over the widened grid, so the result converges to
    the model matrix under refinement.
    """
    Lr = assemble_L_rect(alpha, grid, wide)
    prod = Lr.entries @ Lr.entries.T
    entries = np.triu(prod) + np.triu(prod, 1).T
    return OperatorMatrix(grid=grid, entries=entries, provenance=f"L^2(alpha={alpha})")


def composed_block(alpha, grid: Grid, inner_side: str, wide: Optional[Grid] = None) -> OperatorMatrix:
    """L * (indicator of one side of 1) * L with the inner variable on the
    widened grid; full-size matrix on ``grid``."""
    wide = wide or widened_grid(grid)
    Lr = assemble_L_rect(alpha, grid, wide)
    mask = projection_mask(wide, inner_side).diagonal()
    prod = (Lr.entries * mask[np.newaxis, :]) @ Lr.entries.T
    entries = np.triu(prod) + np.triu(prod, 1).T
    return OperatorMatrix(
        grid=grid,
        entries=entries,
        provenance=f"L*1_{inner_side}*L(alpha={alpha})",
    )


def assemble_uL(u: Callable, alpha, grid: Grid, wide: Optional[Grid] = None) -> OperatorMatrix:
    """Rectangular discretisation of the operator u L (u a multiplication
    operator given as a function of t); used for Hilbert-Schmidt diagnostics."""
    Lr = assemble_L_rect(alpha, grid, wide)
    uvals = np.asarray(u(grid.nodes), dtype=float)
    entries = uvals[:, np.newaxis] * Lr.entries
    return OperatorMatrix(
        grid=grid, entries=entries, provenance=f"uL(alpha={alpha})", col_grid=Lr.col_grid
    )


def assemble_model_hankel(which: str, alpha, grid: Grid) -> OperatorMatrix:
    """Nystrom matrix of t^a phi(t+s) s^a for phi in {phi0, phi_inf}.

    The two assemblies sum to the model matrix entrywise (the kernels split
    t^(-1-2a) exactly), and the phi0 one is the widened composition
    L * 1_infinity * L in the continuum limit.
    """
    a = check_alpha(alpha)
    if which == "phi0":
        phi = lambda u: phi0(a, u)
    elif which == "phi_inf":
        phi = lambda u: phi_inf(a, u)
    else:
        raise GridError(f"which must be 'phi0' or 'phi_inf', got {which!r}")

    def K(s, t):
        return s**a * t**a * phi(s + t)

    return nystrom(K, grid, provenance=f"H({which},alpha={a})")


def log_pushforward_hankel(side: str, alpha, grid: Grid) -> OperatorMatrix:
    """Hankel matrix of the pushforward of a diagonal block to the log scale.

    The nodes t_i on the chosen side of 1 map to a uniform midpoint grid
    x in (0, R); the kernel is psi_+(x+y) (side 'infinity') or psi_-(x+y)
    (side 'zero'), scaled by 1/sqrt(Gamma(1+2 alpha)) to match the factor
    operator's normalisation, with uniform weights h.
    """
    a = check_alpha(alpha)
    mask = projection_mask(grid, side)
    if side == "infinity":
        xs = grid.log_nodes[mask.indices]
        psi = lambda u: psi_plus(a, u)
    else:
        xs = -grid.log_nodes[mask.indices][::-1]  # ascending in x = -ln t
        psi = lambda u: psi_minus(a, u)
    c = np.exp(-0.5 * ln_gamma(1.0 + 2.0 * a))
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    vals = grid.step * c * psi(X + Y)
    entries = np.triu(vals) + np.triu(vals, 1).T
    return OperatorMatrix(grid=grid, entries=entries, provenance=f"H(psi,{side},alpha={a})")


def change_of_variables_diagonal(grid: Grid, side: str) -> np.ndarray:
    """Explicit diagonal of the log-scale change of variables combined with
    the Nystrom sqrt-weights: d_i = sqrt(h) e^{x_i/2} / sqrt(w_i) with the
    signed log node x_i (both pushforward unitaries carry the factor
    e^{x_i/2} = sqrt(t_i)), in the ascending order of the pushforward
    variable used by :func:`log_pushforward_hankel`.

    On the midpoint log grid this evaluates to 1 up to rounding; it is
    constructed from grid data (never assumed) so the suite can compare
    "transform then discretise" against "discretise then transform".
    """
    mask = projection_mask(grid, side)
    w = grid.weights[mask.indices]
    x = grid.log_nodes[mask.indices]
    d = np.sqrt(grid.step) * np.exp(x / 2.0) / np.sqrt(w)
    if side == "zero":
        d = d[::-1]
    return d
