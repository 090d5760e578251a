"""Verification suite: every exact identity and spectral prediction of the
operator family, run across a refinement ladder and consolidated into one
deterministic report.

Check table (names match the report):

  C1  factorisation        A = L^2 through the widened composition quadrature
  C2  block similarity     inversion symmetry makes the two diagonal blocks
                           of A exactly isospectral
  C3  kernel split         H(phi0) + H(phi_inf) = A entrywise, and H(phi0)
                           approximates L * 1_inf * L under refinement
  C4  hs identity          |u L|_HS^2 = 2^(-1-2a) int |u|^2 dt/t, plus the
                           divergence witness u = 1
  C5  log pushforward      diagonal blocks of L are unitarily equivalent to
                           Hankel matrices with kernels psi+/psi-
  C6  schatten decay       diagonal blocks of L and the cross block of A
                           decay faster than any polynomial; cross-block
                           nuclear norm bounded along the ladder
  C7  residual trace norm  the two-block decomposition of the weighted
                           operator leaves a residual of bounded nuclear norm
  C8  spectral prediction  eigenvalue clouds against the predicted interval
                           unions (model operator, diagonal-block operators,
                           weighted blocks, weighted Hankel operator)

Exact identities (C2, the split in C3, C5) are held to tight absolute
thresholds; quadrature checks (C1, C3 composition, C4, C6, C7) are held to
decreasing/bounded ladder rules with calibrated caps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import discretize as dz
from .errors import DomainError
from .kernels import rational_test_family
from .linalg import nuclear_norm, op_norm, reliability_floor, singular_values, sym_eigen
from .quadrature import Grid, make_grid, quad_integral
from .spectra import analyze, predict, schatten_diagnostic
from .specfun import check_alpha, pi_alpha

__all__ = ["CheckResult", "VerificationReport", "run_suite", "CHECK_NAMES"]

CHECK_NAMES = ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8")

EXACT_TOL = 1e-11
BLOCK_EIG_TOL = 1e-10
PUSHFORWARD_TOL = 1e-8
COMPOSITION_CAP = 1e-2
HS_REL_TOL = 2e-2
HS_WITNESS_RATIO = 1.3
NUCLEAR_GROWTH_CAP = 1.10


@dataclass(frozen=True)
class CheckResult:
    name: str
    anchor: str
    grids: Tuple[Tuple[float, int], ...]
    metrics: Tuple[dict, ...]
    verdict: str  # "pass" | "fail"
    rule: str

    def as_dict(self):
        return {
            "name": self.name,
            "anchor": self.anchor,
            "grids": [list(g) for g in self.grids],
            "metrics": list(self.metrics),
            "verdict": self.verdict,
            "rule": self.rule,
        }


@dataclass(frozen=True)
class VerificationReport:
    checks: Tuple[CheckResult, ...]
    verdict: str

    def as_dict(self):
        return {"checks": [c.as_dict() for c in self.checks], "verdict": self.verdict}


def _eigs(M) -> np.ndarray:
    return sym_eigen(M).eigenvalues


def _strictly_decreasing(xs: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(xs, xs[1:]))


def _growth_ok(xs: Sequence[float], cap: float = NUCLEAR_GROWTH_CAP) -> bool:
    return all(b <= cap * a + 1e-300 for a, b in zip(xs, xs[1:]))


def _check_c1(alpha: float, grids: Sequence[Grid]) -> CheckResult:
    wide_resids, window_resids, metrics = [], [], []
    for g in grids:
        A = dz.assemble_A(alpha, g)
        a_norm = op_norm(A)
        sq = dz.operator_square(alpha, g)
        wide = op_norm(sq.entries - A.entries) / a_norm
        L = dz.assemble_L(alpha, g)
        window = op_norm(L.entries @ L.entries - A.entries) / a_norm
        wide_resids.append(wide)
        window_resids.append(window)
        metrics.append(
            {"residual": wide, "window_leakage": window, "model_norm": a_norm}
        )
    ok = all(r <= COMPOSITION_CAP for r in wide_resids)
    if len(wide_resids) > 1:
        ok = ok and _strictly_decreasing(wide_resids)
    return CheckResult(
        name="C1",
        anchor="A = L^2 factorisation",
        grids=tuple((g.R, g.N) for g in grids),
        metrics=tuple(metrics),
        verdict="pass" if ok else "fail",
        rule=f"composition residual <= {COMPOSITION_CAP} and strictly decreasing",
    )


def _check_c2(alpha: float, grids: Sequence[Grid]) -> CheckResult:
    metrics, ok = [], True
    for g in grids:
        A = dz.assemble_A(alpha, g)
        m0 = dz.projection_mask(g, "zero")
        mi = dz.projection_mask(g, "infinity")
        e0 = _eigs(dz.project(A, m0, m0))
        ei = _eigs(dz.project(A, mi, mi))
        diff = float(np.abs(e0 - ei).max())
        a_norm = float(np.abs(np.concatenate([e0, ei])).max())
        persym = float(np.abs(A.entries - A.entries[::-1, ::-1]).max())
        metrics.append({"eig_diff": diff, "persymmetry_defect": persym})
        ok = ok and diff <= BLOCK_EIG_TOL * max(a_norm, 1e-300)
    return CheckResult(
        name="C2",
        anchor="inversion symmetry: diagonal blocks isospectral",
        grids=tuple((g.R, g.N) for g in grids),
        metrics=tuple(metrics),
        verdict="pass" if ok else "fail",
        rule=f"block eigenvalue lists agree to {BLOCK_EIG_TOL} * |A|",
    )


def _check_c3(alpha: float, grids: Sequence[Grid]) -> CheckResult:
    split_errs, comp_resids, metrics = [], [], []
    for g in grids:
        A = dz.assemble_A(alpha, g)
        H0 = dz.assemble_model_hankel("phi0", alpha, g)
        Hi = dz.assemble_model_hankel("phi_inf", alpha, g)
        a_max = float(np.abs(A.entries).max())
        split = float(np.abs(H0.entries + Hi.entries - A.entries).max()) / a_max
        comp = op_norm(H0.entries - dz.composed_block(alpha, g, "infinity").entries)
        split_errs.append(split)
        comp_resids.append(comp)
        metrics.append({"split_error": split, "composition_residual": comp})
    ok = all(e <= EXACT_TOL for e in split_errs)
    if len(comp_resids) > 1:
        ok = ok and _strictly_decreasing(comp_resids)
    return CheckResult(
        name="C3",
        anchor="kernel split phi0 + phi_inf and composition identity",
        grids=tuple((g.R, g.N) for g in grids),
        metrics=tuple(metrics),
        verdict="pass" if ok else "fail",
        rule=f"entrywise split <= {EXACT_TOL} * max|A|; composition residual decreasing",
    )


def _hs_battery(alpha: float):
    return (
        ("indicator[1,e]", lambda t: ((t >= 1.0) & (t <= math.e)).astype(float)),
        ("gauss_log_bump", lambda t: np.exp(-np.log(t) ** 2)),
        ("t_exp(-t)", lambda t: t * np.exp(-t)),
    )


def _check_c4(alpha: float, grids: Sequence[Grid]) -> CheckResult:
    # the identity battery is calibrated at (8, 600); the divergence witness
    # doubles the truncation width at fixed step
    g_id = make_grid(8.0, 600)
    scale = 2.0 ** (-1.0 - 2.0 * alpha)
    metrics, ok = [], True
    for label, u in _hs_battery(alpha):
        uL = dz.assemble_uL(u, alpha, g_id)
        lhs = float((uL.entries**2).sum())
        rhs = scale * quad_integral(lambda t: u(t) ** 2 / t, g_id)
        rel = abs(lhs - rhs) / abs(rhs)
        metrics.append({"u": label, "hs_sq": lhs, "integral": rhs, "rel_err": rel})
        ok = ok and rel <= HS_REL_TOL
    fr = []
    for R, N in ((4.0, 600), (8.0, 1200)):
        uL = dz.assemble_uL(lambda t: np.ones_like(t), alpha, make_grid(R, N))
        fr.append(float(np.sqrt((uL.entries**2).sum())))
    ratio = fr[1] / fr[0]
    metrics.append({"u": "constant_1", "hs_R4": fr[0], "hs_R8": fr[1], "ratio": ratio})
    ok = ok and ratio >= HS_WITNESS_RATIO
    return CheckResult(
        name="C4",
        anchor="Hilbert-Schmidt norm identity for uL",
        grids=((8.0, 600), (4.0, 600), (8.0, 1200)),
        metrics=tuple(metrics),
        verdict="pass" if ok else "fail",
        rule=f"battery relative error <= {HS_REL_TOL}; witness ratio >= {HS_WITNESS_RATIO}",
    )


def _check_c5(alpha: float, grids: Sequence[Grid]) -> CheckResult:
    metrics, ok = [], True
    for g in grids:
        L = dz.assemble_L(alpha, g)
        row = {}
        for side in ("zero", "infinity"):
            mask = dz.projection_mask(g, side)
            block = dz.project(L, mask, mask).entries
            if side == "zero":
                block = block[::-1, ::-1]  # ascending in x = -ln t
            d = dz.change_of_variables_diagonal(g, side)
            pushed = d[:, np.newaxis] * block * d[np.newaxis, :]
            pushed = 0.5 * (pushed + pushed.T)
            H = dz.log_pushforward_hankel(side, alpha, g).entries
            diff = float(np.abs(_eigs(pushed) - _eigs(H)).max())
            row[f"eig_diff_{side}"] = diff
            ok = ok and diff <= PUSHFORWARD_TOL
        metrics.append(row)
    return CheckResult(
        name="C5",
        anchor="log-variable Hankel equivalence of diagonal blocks",
        grids=tuple((g.R, g.N) for g in grids),
        metrics=tuple(metrics),
        verdict="pass" if ok else "fail",
        rule=f"pushforward eigenvalue agreement <= {PUSHFORWARD_TOL}",
    )


def _check_c6(alpha: float, grids: Sequence[Grid]) -> CheckResult:
    metrics, ok = [], True
    cross_nucs = []
    for g in grids:
        L = dz.assemble_L(alpha, g)
        A = dz.assemble_A(alpha, g)
        m0 = dz.projection_mask(g, "zero")
        mi = dz.projection_mask(g, "infinity")
        row = {}
        for label, block in (
            ("L_00", dz.project(L, m0, m0)),
            ("L_ii", dz.project(L, mi, mi)),
            ("A_0i", dz.project(A, m0, mi)),
        ):
            sv = singular_values(block)
            # Gram-route singular values carry a sqrt(eps)*sigma_1 noise
            # plateau that mimics slow decay; the verdict must not see it
            floor = max(reliability_floor(sv), math.sqrt(np.finfo(float).eps) * sv[0])
            diag = schatten_diagnostic(sv, floor)
            row[label] = {
                "verdict": diag.verdict,
                "p_fit": diag.p_fit,
                "sigma_ratio_10_1": float(sv[9] / sv[0]) if sv.size >= 10 else 0.0,
            }
            ok = ok and diag.verdict == "super_polynomial"
            if label == "A_0i":
                nuc = float(sv.sum())
                row[label]["nuclear"] = nuc
                cross_nucs.append(nuc)
        metrics.append(row)
    ok = ok and _growth_ok(cross_nucs)
    return CheckResult(
        name="C6",
        anchor="Schatten decay of diagonal L blocks and the A cross block",
        grids=tuple((g.R, g.N) for g in grids),
        metrics=tuple(metrics),
        verdict="pass" if ok else "fail",
        rule=f"super-polynomial decay; cross nuclear growth <= {NUCLEAR_GROWTH_CAP}/step",
    )


def _residual_matrix(alpha: float, family, g: Grid) -> np.ndarray:
    """Residual of the two-block decomposition of the weighted operator,
    assembled from already-verified pieces."""
    a0, a_inf, b0, b_inf = family
    spec_a, spec_w = rational_test_family(alpha, a0, a_inf, b0, b_inf)
    WHA = dz.assemble_wHa(spec_a, spec_w, g).entries
    wide = dz.widened_grid(g)
    block_inf = dz.composed_block(alpha, g, "infinity", wide).entries  # L 1_inf L
    block_0 = dz.composed_block(alpha, g, "zero", wide).entries  # L 1_0 L
    v = spec_w.eval(g.nodes) * g.nodes ** (-alpha)
    p0 = dz.projection_mask(g, "zero").diagonal()
    pi_ = dz.projection_mask(g, "infinity").diagonal()
    v0 = v * p0
    vi = v * pi_
    term0 = v0[:, np.newaxis] * block_inf * v0[np.newaxis, :]
    term_inf = vi[:, np.newaxis] * block_0 * vi[np.newaxis, :]
    return WHA - a0 * term0 - a_inf * term_inf


def _check_c7(alpha: float, grids: Sequence[Grid], family) -> CheckResult:
    metrics, nucs = [], []
    for g in grids:
        T = _residual_matrix(alpha, family, g)
        nuc = nuclear_norm(T)
        nucs.append(nuc)
        metrics.append({"nuclear": nuc, "op": op_norm(T)})
    ok = _growth_ok(nucs)
    return CheckResult(
        name="C7",
        anchor="trace-class residual of the two-block decomposition",
        grids=tuple((g.R, g.N) for g in grids),
        metrics=tuple(metrics),
        verdict="pass" if ok else "fail",
        rule=f"residual nuclear norm growth <= {NUCLEAR_GROWTH_CAP} per ladder step",
    )


def _c8_items(alpha: float, family, g: Grid):
    a0, a_inf, b0, b_inf = family
    spec_a, spec_w = rational_test_family(alpha, a0, a_inf, b0, b_inf)
    pa = pi_alpha(alpha)
    wide = dz.widened_grid(g)
    m0 = dz.projection_mask(g, "zero")
    mi = dz.projection_mask(g, "infinity")
    A = dz.assemble_A(alpha, g)
    comp_inf = dz.composed_block(alpha, g, "infinity", wide)  # L 1_inf L
    comp_0 = dz.composed_block(alpha, g, "zero", wide)  # L 1_0 L
    b3_zero = dz.project(comp_inf, m0, m0)
    b3_inf = dz.project(comp_0, mi, mi)
    v = spec_w.eval(g.nodes) * g.nodes ** (-alpha)
    v0 = (v * m0.diagonal())[m0.indices]
    vi = (v * mi.diagonal())[mi.indices]
    wb_zero = v0[:, np.newaxis] * b3_zero.entries * v0[np.newaxis, :]
    wb_inf = vi[:, np.newaxis] * b3_inf.entries * vi[np.newaxis, :]
    WHA = dz.assemble_wHa(spec_a, spec_w, g)
    single = lambda c: predict(alpha, c / pa, 0.0, 1.0, 1.0)
    return (
        ("model", A.entries, predict(alpha, 1.0, 1.0, 1.0, 1.0)),
        ("block_zero", b3_zero.entries, single(pa)),
        ("block_infinity", b3_inf.entries, single(pa)),
        ("weighted_block_zero", 0.5 * (wb_zero + wb_zero.T), single(pa * b0**2)),
        ("weighted_block_infinity", 0.5 * (wb_inf + wb_inf.T), single(pa * b_inf**2)),
        ("weighted_hankel", WHA.entries, predict(alpha, a0, a_inf, b0, b_inf)),
    )


def _check_c8(alpha: float, grids: Sequence[Grid], family) -> CheckResult:
    per_item_gaps: Dict[str, List[float]] = {}
    per_item_outliers: Dict[str, List[int]] = {}
    metrics = []
    for g in grids:
        row = {}
        for label, entries, predicted in _c8_items(alpha, family, g):
            if not predicted.intervals:
                continue
            rep = analyze(_eigs(entries), predicted)
            row[label] = {
                "outliers": len(rep.outliers),
                "max_gap": rep.fill_max_gap,
                "hausdorff": rep.hausdorff,
                "top": float(rep.eigenvalues[-1]),
            }
            per_item_gaps.setdefault(label, []).append(rep.fill_max_gap)
            per_item_outliers.setdefault(label, []).append(len(rep.outliers))
        metrics.append(row)
    ok = True
    for label, counts in per_item_outliers.items():
        if label.startswith("weighted_block"):
            # isolated eigenvalues above the essential spectrum are allowed
            # but must not proliferate under refinement
            ok = ok and counts[-1] <= max(counts[0], 4)
        else:
            ok = ok and all(c == 0 for c in counts)
    if len(grids) > 1:
        ok = ok and _strictly_decreasing(per_item_gaps["model"])
        for label, gaps in per_item_gaps.items():
            # block fills are pre-asymptotic at coarse grids; they may wiggle
            # but must not grow materially under refinement
            ok = ok and gaps[-1] <= 1.10 * gaps[0] + 1e-12
    return CheckResult(
        name="C8",
        anchor="predicted a.c. interval fill and outlier counts",
        grids=tuple((g.R, g.N) for g in grids),
        metrics=tuple(metrics),
        verdict="pass" if ok else "fail",
        rule=(
            "zero outliers (bounded for weighted blocks); model fill strictly "
            "decreasing; block fill within 10% of the coarsest step"
        ),
    )


def run_suite(
    alpha,
    ladder: Sequence[Tuple[float, int]],
    checks: Optional[Sequence[str]] = None,
    family: Tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0),
) -> VerificationReport:
    """Run the selected checks (all eight by default) over the ladder.

    The ladder must be non-empty and increasing in (R, N); individual check
    failures are recorded and the suite continues.  Reports are deterministic:
    rerunning with identical inputs gives identical output.
    """
    a = check_alpha(alpha)
    ladder = [(float(R), int(N)) for R, N in ladder]
    if not ladder:
        raise DomainError("ladder must be non-empty")
    if any(ladder[i] >= ladder[i + 1] for i in range(len(ladder) - 1)):
        raise DomainError("ladder must be increasing in (R, N)")
    grids = [make_grid(R, N) for R, N in ladder]
    selected = tuple(checks) if checks else CHECK_NAMES
    bad = [c for c in selected if c.upper() not in CHECK_NAMES]
    if bad:
        raise DomainError(f"unknown checks: {bad}; valid names are {CHECK_NAMES}")
    selected = tuple(c.upper() for c in selected)

    runners: Dict[str, Callable[[], CheckResult]] = {
        "C1": lambda: _check_c1(a, grids),
        "C2": lambda: _check_c2(a, grids),
        "C3": lambda: _check_c3(a, grids),
        "C4": lambda: _check_c4(a, grids),
        "C5": lambda: _check_c5(a, grids),
        "C6": lambda: _check_c6(a, grids),
        "C7": lambda: _check_c7(a, grids, family),
        "C8": lambda: _check_c8(a, grids, family),
    }
    results = []
    for name in CHECK_NAMES:
        if name not in selected:
            continue
        try:
            results.append(runners[name]())
        except Exception as exc:  # individual failures recorded, suite continues
            results.append(
                CheckResult(
                    name=name,
                    anchor="(check aborted)",
                    grids=tuple((g.R, g.N) for g in grids),
                    metrics=({"error": f"{type(exc).__name__}: {exc}"},),
                    verdict="fail",
                    rule="check must run to completion",
                )
            )
    verdict = "pass" if all(r.verdict == "pass" for r in results) else "fail"
    return VerificationReport(checks=tuple(results), verdict=verdict)
