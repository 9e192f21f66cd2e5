"""Verification routines for surfaces produced by the representation.

Every check returns a :class:`VerificationReport` whose ``passed`` flag is
``max_residual < tolerance`` over the unexcluded samples.  Residuals are
measured along two independent routes wherever possible: analytic jets
carried by the surface grid, and finite differences of the sampled fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from .catalog import ConformalSolution, SurfaceClass, weierstrass_data
from .errors import Degenerate, ParamRange
from .nullgeom import AngleFunction, decompose, measure_kappa
from .wrep import DataParts, SurfaceGrid, WeierstrassData, integrate, minkowski_dot

__all__ = [
    "VerificationReport",
    "planar_curvature_lines",
    "gauss_equation",
    "gaussian_curvature",
    "gaussian_curvature_from_jets",
    "quasi_umbilic_mask",
    "hopf_constancy",
    "kappa_constancy",
    "affine_minimal_residual",
    "thomsen_membership",
    "perturb_data",
]


@dataclass
class VerificationReport:
    """Outcome of one verification pass over a sample set."""

    name: str
    max_residual: float
    tolerance: float
    passed: bool
    samples: int
    excluded: int
    details: dict = field(default_factory=dict)

    def __str__(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} {self.name}: max residual {self.max_residual:.3e} "
                f"(tol {self.tolerance:.1e}, {self.samples} samples, "
                f"{self.excluded} excluded)")


def _report(name: str, residuals: np.ndarray, mask: np.ndarray, tol: float,
            **details) -> VerificationReport:
    total = int(mask.size)
    kept = int(np.count_nonzero(mask))
    max_res = float(np.max(np.abs(residuals[mask]))) if kept else float("inf")
    return VerificationReport(
        name=name, max_residual=max_res, tolerance=tol,
        passed=bool(kept and max_res < tol), samples=kept,
        excluded=total - kept, details=details)


# ---------------------------------------------------------------------------
# finite-difference stencils on grid fields (second, independent route)
# ---------------------------------------------------------------------------

_D1 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
_D2 = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0


def _stencil(A: np.ndarray, coeffs: np.ndarray, axis: int, h: float,
             order: int) -> np.ndarray:
    """Apply a 7-point stencil along ``axis``; boundary rows become NaN."""
    B = np.moveaxis(np.asarray(A, dtype=float), axis, 0)
    out = np.full_like(B, np.nan)
    if B.shape[0] >= 7:
        core = np.zeros_like(B[3:-3])
        for k, ck in enumerate(coeffs):
            if ck != 0.0:
                core += ck * B[k: B.shape[0] - 6 + k]
        out[3:-3] = core / h ** order
    return np.moveaxis(out, 0, axis)


def _grid_steps(grid: SurfaceGrid) -> Tuple[float, float]:
    return float(grid.xs[1] - grid.xs[0]), float(grid.ys[1] - grid.ys[0])


def _null_coords(grid: SurfaceGrid) -> Tuple[np.ndarray, np.ndarray]:
    U = grid.xs[:, None] + grid.ys[None, :]
    V = grid.xs[:, None] - grid.ys[None, :]
    return U, V


def _hopf_components(data: WeierstrassData, U: np.ndarray,
                     V: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Null components of the quadratic differential: (q+, q-)."""
    p = data.parts
    return -p.hp1(U) * p.ep(U), -p.hm1(V) * p.em(V)


# ---------------------------------------------------------------------------
# planarity of the curvature-line net
# ---------------------------------------------------------------------------

def planar_curvature_lines(grid: SurfaceGrid, tol: float = 1e-4,
                           band: float = 1e-3) -> VerificationReport:
    """Coplanarity of each curvature line's first three derivative vectors.

    Both parameter directions are tested with the grid's analytic jets via
    the scaled determinant |det(d1, d2, d3)| / (|d1||d2||d3|); the
    finite-difference mixed derivative of the conformal factor, which
    vanishes exactly in the planar case, is reported alongside as an
    independent route.
    """
    def scaled_det(a, b, c):
        M = np.stack([a, b, c], axis=-2)
        det = np.abs(np.linalg.det(M))
        # a derivative vector that vanishes (to roundoff) is trivially
        # coplanar; flooring every norm at a small fraction of the largest
        # norm among the three fields keeps the ratio meaningful there
        norms = [np.linalg.norm(vec, axis=-1) for vec in (a, b, c)]
        scale = max(float(np.max(nv)) for nv in norms)
        denom = np.ones_like(norms[0])
        for nv in norms:
            denom = denom * np.maximum(nv, 1e-9 * scale)
        return det / np.maximum(denom, 1e-300)

    res_x = scaled_det(grid.Fx, grid.Fxx, grid.Fxxx)
    res_y = scaled_det(grid.Fy, grid.Fxx, grid.Fxxy)
    mask = grid.nonsingular_mask(band)
    residual = np.maximum(res_x, res_y)

    dx, dy = _grid_steps(grid)
    rho_xy = _stencil(_stencil(grid.rho, _D1, 1, dy, 1), _D1, 0, dx, 1)
    fd_mask = np.isfinite(rho_xy) & mask
    rho_xy_max = (float(np.max(np.abs(rho_xy[fd_mask])))
                  if np.any(fd_mask) else float("nan"))

    rep = _report("planar-curvature-lines", residual, mask, tol,
                  det_x=float(np.max(res_x[mask])) if np.any(mask) else None,
                  det_y=float(np.max(res_y[mask])) if np.any(mask) else None,
                  rho_xy_max=rho_xy_max)
    if np.isfinite(rho_xy_max):
        rep.passed = bool(rep.passed and rho_xy_max < tol)
        rep.max_residual = max(rep.max_residual, rho_xy_max)
    return rep


# ---------------------------------------------------------------------------
# Gauss equation
# ---------------------------------------------------------------------------

def gauss_equation(grid: Optional[SurfaceGrid] = None,
                   sol: Optional[ConformalSolution] = None,
                   tol: float = 1e-6, band: float = 1e-3,
                   n: int = 50, window: Tuple[float, float] = (-0.7, 0.7),
                   rho_override: Optional[np.ndarray] = None) -> VerificationReport:
    """Residual of ``rho (rho_xx - rho_yy) - (rho_x^2 - rho_y^2) = |Q|``.

    With a profile solution the derivatives are analytic (the profile pair
    satisfies second-order equations, so everything reduces to the profiles
    and their first derivatives) and the right side is 1.  With a surface
    grid the derivatives come from finite differences of the sampled
    conformal factor and the right side is four times the squared norm of
    the quadratic differential computed from the generating data.
    """
    if sol is not None:
        xs = np.asarray(grid.xs if grid is not None else
                        np.linspace(window[0], window[1], n))
        ys = np.asarray(grid.ys if grid is not None else
                        np.linspace(window[0], window[1], n))
        return _gauss_solution(sol, xs, ys, tol, band)
    if grid is None:
        raise ParamRange("gauss_equation needs a grid or a profile solution")

    dx, dy = _grid_steps(grid)
    rho = grid.rho if rho_override is None else np.asarray(rho_override)
    rho_x = _stencil(rho, _D1, 0, dx, 1)
    rho_y = _stencil(rho, _D1, 1, dy, 1)
    rho_xx = _stencil(rho, _D2, 0, dx, 2)
    rho_yy = _stencil(rho, _D2, 1, dy, 2)

    U, V = _null_coords(grid)
    qp, qm = _hopf_components(grid.data, U, V)
    target = 4.0 * qp * qm

    residual = rho * (rho_xx - rho_yy) - (rho_x ** 2 - rho_y ** 2) - target
    mask = (np.isfinite(residual) & grid.nonsingular_mask(band))
    residual = np.where(np.isfinite(residual), residual, 0.0)
    return _report("gauss-equation", residual, mask, tol, route="grid-fd")


def _gauss_solution(sol: ConformalSolution, xs: np.ndarray, ys: np.ndarray,
                    tol: float, band: float) -> VerificationReport:
    if sol.case == "2":
        fx = float(np.asarray(sol.f(0.0)))
        gy = float(np.asarray(sol.g(0.0)))
        residual = np.full((len(xs), len(ys)),
                           0.0 - (fx ** 2 - gy ** 2) - 1.0)
        mask = np.ones_like(residual, dtype=bool)
        return _report("gauss-equation", residual, mask, tol, route="profile")

    sigma = sol.sigma
    f = np.asarray(sol.f(xs), dtype=float)[:, None]
    f1 = np.asarray(sol.f1(xs), dtype=float)[:, None]
    g = np.asarray(sol.g(ys), dtype=float)[None, :]
    g1 = np.asarray(sol.g1(ys), dtype=float)[None, :]

    # the profile chart degenerates where f' = g' (rho is a removable 0/0
    # there); exclude a relative band around that line like the rho = 0 band
    D = f1 - g1
    mask = np.abs(D) > band * float(np.max(np.abs(D)))
    Dsafe = np.where(mask, D, 1.0)
    rho = (f ** 2 - g ** 2 + 1.0) / Dsafe
    rho_x = (2.0 * f * f1 - rho * sigma * f) / Dsafe
    rho_y = (-2.0 * g * g1 + rho * sigma * g) / Dsafe
    rho_xx = (2.0 * f1 ** 2 + 2.0 * sigma * f ** 2
              - 2.0 * rho_x * sigma * f - rho * sigma * f1) / Dsafe
    rho_yy = (-2.0 * g1 ** 2 - 2.0 * sigma * g ** 2
              + 2.0 * rho_y * sigma * g + rho * sigma * g1) / Dsafe
    residual = rho * (rho_xx - rho_yy) - (rho_x ** 2 - rho_y ** 2) - 1.0
    return _report("gauss-equation", residual, mask, tol, route="profile")


# ---------------------------------------------------------------------------
# Gaussian curvature and flat-direction diagnostics
# ---------------------------------------------------------------------------

def gaussian_curvature(grid: SurfaceGrid,
                       band: float = 1e-3) -> Tuple[np.ndarray, np.ndarray]:
    """Curvature ``K = -4 |Q| / rho^4`` from the generating data.

    Returns ``(K, mask)`` with NaN outside the nonsingular mask.  Negative
    definite for the normalized catalog; flips sign under conjugation.
    """
    U, V = _null_coords(grid)
    qp, qm = _hopf_components(grid.data, U, V)
    mask = grid.nonsingular_mask(band)
    K = np.full(grid.rho.shape, np.nan)
    K[mask] = -4.0 * (qp * qm)[mask] / grid.rho[mask] ** 4
    return K, mask


def gaussian_curvature_from_jets(grid: SurfaceGrid,
                                 band: float = 1e-3) -> Tuple[np.ndarray, np.ndarray]:
    """Independent curvature route: shape operator from jets and the normal.

    ``K = (det II)/(det I)`` with II assembled from the unit normal and the
    second-derivative jets, and ``det I = -rho^4``.
    """
    U, V = _null_coords(grid)
    p = grid.data.parts
    hp, hm = p.hp(U), p.hm(V)
    s = hp * hm
    denom = 1.0 + s
    mask = grid.nonsingular_mask(band) & (np.abs(denom) > 1e-12)
    N = np.stack([(s - 1.0) / np.where(mask, denom, 1.0),
                  (hp + hm) / np.where(mask, denom, 1.0),
                  (hp - hm) / np.where(mask, denom, 1.0)], axis=-1)
    e = minkowski_dot(N, grid.Fxx)
    m = minkowski_dot(N, grid.Fxy)
    K = np.full(grid.rho.shape, np.nan)
    K[mask] = (e ** 2 - m ** 2)[mask] / (-grid.rho[mask] ** 4)
    return K, mask


def quasi_umbilic_mask(grid: SurfaceGrid, tol: float = 1e-10) -> np.ndarray:
    """Samples where the quadratic differential is nonzero but null.

    These are the flat (K = 0) points where exactly one curvature direction
    degenerates; the normalized catalog has none.
    """
    U, V = _null_coords(grid)
    qp, qm = _hopf_components(grid.data, U, V)
    return (np.abs(qp * qm) < tol) & (np.abs(qp) + np.abs(qm) > tol)


# ---------------------------------------------------------------------------
# normalization and constancy diagnostics
# ---------------------------------------------------------------------------

def hopf_constancy(data: WeierstrassData, expect: float = -0.5,
                   tol: float = 1e-8, n: int = 41) -> VerificationReport:
    """Deviation of both null components of the differential from a constant."""
    x0, x1, y0, y1 = data.domain
    us = np.linspace(x0 + y0, x1 + y1, n) * 0.999
    vs = np.linspace(x0 - y1, x1 - y0, n) * 0.999
    p = data.parts
    res_p = -p.hp1(us) * p.ep(us) - expect
    res_m = -p.hm1(vs) * p.em(vs) - expect
    residual = np.concatenate([res_p, res_m])
    mask = np.ones_like(residual, dtype=bool)
    return _report("hopf-constancy", residual, mask, tol, expect=expect)


def kappa_constancy(grid: SurfaceGrid, expected: Optional[float] = None,
                    tol: float = 1e-4) -> VerificationReport:
    """Constancy (and agreement) of the lightlike curvatures of both generators."""
    alpha, beta = decompose(grid)
    ka, spread_a = measure_kappa(alpha)
    kb, spread_b = measure_kappa(beta)
    residual = max(spread_a, spread_b, abs(ka - kb))
    if expected is not None:
        residual = max(residual, abs(ka - expected), abs(kb - expected))
    n = len(alpha.ts) + len(beta.ts)
    return VerificationReport(
        name="kappa-constancy", max_residual=float(residual), tolerance=tol,
        passed=bool(residual < tol), samples=n, excluded=0,
        details={"kappa_alpha": ka, "kappa_beta": kb,
                 "spread_alpha": spread_a, "spread_beta": spread_b})


# ---------------------------------------------------------------------------
# the affine-minimal equation for the turning rate
# ---------------------------------------------------------------------------

def affine_minimal_residual(angle: AngleFunction, k: Optional[float] = None,
                            tol: float = 1e-5) -> VerificationReport:
    """Residual of ``2 w^4 + 2 w w'' - (7/2) w'^2 = k w^3`` for ``w = theta'``.

    When ``k`` is omitted it is fitted by least squares; the fitted value
    equals twice the lightlike curvature when the curve satisfies the
    equation.  The reported residual is scaled by ``max(1, max w^4)``.
    """
    w, w1, w2 = angle.omega, angle.omega1, angle.omega2
    L = 2.0 * w ** 4 + 2.0 * w * w2 - 3.5 * w1 ** 2
    if k is None:
        denom = float(np.sum(w ** 6))
        if denom == 0.0:
            raise Degenerate("turning rate is identically zero")
        k = float(np.sum(L * w ** 3) / denom)
    residual = L - k * w ** 3
    scale = max(1.0, float(np.max(w ** 4)))
    mask = np.ones_like(residual, dtype=bool)
    return _report("affine-minimal", residual / scale, mask, tol,
                   k=float(k), scale=scale)


# ---------------------------------------------------------------------------
# membership of the two planarity families
# ---------------------------------------------------------------------------

def thomsen_membership(target: Union[SurfaceClass, WeierstrassData],
                       tol: float = 1e-4, n: int = 31) -> str:
    """Which of the two planarity families a surface belongs to.

    Runs the planarity check on the surface and on its conjugate; returns
    ``"B"``, ``"B*"``, ``"both"`` (plane) or ``"neither"``.
    """
    from .wrep import conjugate

    data = weierstrass_data(target) if isinstance(target, SurfaceClass) else target
    direct = planar_curvature_lines(integrate(data, n, n), tol=tol)
    dual = planar_curvature_lines(integrate(conjugate(data), n, n), tol=tol)
    if direct.passed and dual.passed:
        return "both"
    if direct.passed:
        return "B"
    if dual.passed:
        return "B*"
    return "neither"


# ---------------------------------------------------------------------------
# negative-control helper
# ---------------------------------------------------------------------------

def perturb_data(data: WeierstrassData, eps: float = 0.01) -> WeierstrassData:
    """Add ``eps z^2`` to the first data component (stays integrable).

    The perturbed surface is still timelike minimal but loses the
    normalization, so planarity, constancy and normalization checks must
    fail by a wide margin; used as a negative control.
    """
    p = data.parts
    parts = DataParts(
        hp=lambda u: p.hp(u) + eps * np.asarray(u) ** 2,
        hm=lambda v: p.hm(v) + eps * np.asarray(v) ** 2,
        ep=p.ep, em=p.em,
        hp1=lambda u: p.hp1(u) + 2.0 * eps * np.asarray(u),
        hm1=lambda v: p.hm1(v) + 2.0 * eps * np.asarray(v),
        ep1=p.ep1, em1=p.em1,
        hp2=lambda u: p.hp2(u) + 2.0 * eps,
        hm2=lambda v: p.hm2(v) + 2.0 * eps,
        ep2=p.ep2, em2=p.em2,
    )
    h0 = data.h
    return WeierstrassData(
        h=(lambda z: h0(z) + (z * z) * eps) if h0 is not None else None,
        eta=data.eta, domain=data.domain, basepoint=data.basepoint,
        parts=parts, name=f"{data.name}+perturbation")
