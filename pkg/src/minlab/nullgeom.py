"""Null-curve machinery for timelike minimal surfaces.

A surface produced by the representation splits as ``F = (alpha + beta)/2``
into two null curves depending only on ``u = x + y`` and ``v = x - y``.
This module extracts those curves with analytic derivative samples, renders
curves in pseudo-arclength (``<gamma'', gamma''> = 1``), builds the null
Frenet frame, measures the lightlike curvature ``kappa = <gamma''', gamma'''>``,
and implements the parameter-scaling law ``kappa_{mu gamma} = kappa_gamma/mu``
used to balance a pair of generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import Degenerate, FrameAmbiguous, GridShape, ParamRange, SignMismatch
from .wrep import SurfaceGrid, minkowski_dot

__all__ = [
    "NullCurve",
    "NullFrame",
    "AngleFunction",
    "decompose",
    "pseudo_arclength",
    "frame_and_curvature",
    "measure_kappa",
    "angle_from_curve",
    "angle_from_theta",
    "curvature_from_angle",
    "scale_curve",
    "scale_curves",
    "balance",
    "helix",
]

JetFn = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]


@dataclass
class NullCurve:
    """A sampled null curve with optional analytic jets.

    ``ts`` are uniformly spaced parameter values; ``gamma`` has shape (n, 3)
    in component order (x1, x2, x0).  ``d1``–``d3`` hold derivative samples
    with respect to ``ts``.  ``jets``, when present, evaluates
    ``(gamma, d1, d2, d3)`` at arbitrary parameter arrays and is what the
    high-accuracy reparametrization path consumes.
    """

    ts: np.ndarray
    gamma: np.ndarray
    d1: Optional[np.ndarray] = None
    d2: Optional[np.ndarray] = None
    d3: Optional[np.ndarray] = None
    jets: Optional[JetFn] = field(default=None, repr=False)
    parametrization: str = "raw"
    name: str = "curve"

    def null_residual(self) -> float:
        d1 = self._require_d1()
        return float(np.max(np.abs(minkowski_dot(d1, d1))))

    def _require_d1(self) -> np.ndarray:
        if self.d1 is None:
            self._fill_fd_jets()
        return self.d1

    def ensure_jets_callable(self) -> JetFn:
        """Analytic jets if present, else a quintic-spline surrogate."""
        if self.jets is not None:
            return self.jets
        from scipy.interpolate import make_interp_spline

        spline = make_interp_spline(self.ts, self.gamma, k=5, axis=0)
        der = [spline.derivative(k) for k in (1, 2, 3)]

        def jets(t):
            t = np.asarray(t, dtype=float)
            return spline(t), der[0](t), der[1](t), der[2](t)

        return jets

    def _fill_fd_jets(self) -> None:
        jets = self.ensure_jets_callable()
        _, self.d1, self.d2, self.d3 = jets(self.ts)


@dataclass
class NullFrame:
    """Per-sample null Frenet data along a pseudo-arclength curve."""

    ts: np.ndarray
    sigma: np.ndarray
    e: np.ndarray
    n: np.ndarray
    kappa: np.ndarray
    # residuals of the structure equations dn/ds = -kappa e and
    # de/ds = -(kappa/2) sigma + n/2, measured by finite differences
    ndot_residual: float
    edot_residual: float


# ---------------------------------------------------------------------------
# decomposition of a representation grid into its generating null curves
# ---------------------------------------------------------------------------

def decompose(grid: SurfaceGrid, n: Optional[int] = None) -> Tuple[NullCurve, NullCurve]:
    """Generating null curves of a surface grid.

    Requires equal grid spacing in x and y so the null coordinates
    ``u = x + y``, ``v = x - y`` are sampled on uniform ranges.  The curves
    are pinned so that ``alpha(u_c) = beta(v_c) = F(center)`` and carry
    analytic derivative samples taken from the representation integrand.
    """
    from .wrep import _antiderivative_table  # shared quadrature core

    xs, ys = grid.xs, grid.ys
    dx = xs[1] - xs[0] if len(xs) > 1 else 0.0
    dy = ys[1] - ys[0] if len(ys) > 1 else 0.0
    if len(xs) < 2 or len(ys) < 2 or abs(dx - dy) > 1e-12 * max(abs(dx), abs(dy)):
        raise GridShape("decomposition needs equal x and y spacing")

    data = grid.data
    xc, yc = xs[len(xs) // 2], ys[len(ys) // 2]
    uc, vc = xc + yc, xc - yc
    u_lo, u_hi = xs[0] + ys[0], xs[-1] + ys[-1]
    v_lo, v_hi = xs[0] - ys[-1], xs[-1] - ys[0]
    n_u = n if n is not None else len(xs) + len(ys) - 1
    us = np.linspace(u_lo, u_hi, n_u)
    vs = np.linspace(v_lo, v_hi, n_u)

    # alpha(u) = 2F - F(center) along v = v_c; the plus-component
    # antiderivative gives 2F(u, v_c) = A+(u) + A-(v_c) up to pinning
    Au = _antiderivative_table(data.integrand_plus, us, uc, 1e-12)
    Av = _antiderivative_table(data.integrand_minus, vs, vc, 1e-12)
    Fc = _point_value(data, 0.5 * (uc + vc), 0.5 * (uc - vc))
    alpha_gamma = Au + Fc
    beta_gamma = Av + Fc

    def make_jets(plus: bool, pin_coord: float, pin_vec: np.ndarray) -> JetFn:
        w0 = data.integrand_plus if plus else data.integrand_minus
        w1 = data.integrand_plus_d1 if plus else data.integrand_minus_d1
        w2 = data.integrand_plus_d2 if plus else data.integrand_minus_d2

        def jets(t):
            t = np.asarray(t, dtype=float)
            g = _antiderivative_table(w0, t, pin_coord, 1e-12) + pin_vec
            return g, w0(t), w1(t), w2(t)

        return jets

    alpha = NullCurve(
        ts=us, gamma=alpha_gamma,
        d1=data.integrand_plus(us),
        d2=data.integrand_plus_d1(us),
        d3=data.integrand_plus_d2(us),
        jets=make_jets(True, uc, Fc),
        parametrization="raw", name=f"{data.name}:alpha",
    )
    beta = NullCurve(
        ts=vs, gamma=beta_gamma,
        d1=data.integrand_minus(vs),
        d2=data.integrand_minus_d1(vs),
        d3=data.integrand_minus_d2(vs),
        jets=make_jets(False, vc, Fc),
        parametrization="raw", name=f"{data.name}:beta",
    )
    return alpha, beta


def _point_value(data, x: float, y: float) -> np.ndarray:
    from .wrep import evaluate_points

    return evaluate_points(data, [(x, y)])[0]


# ---------------------------------------------------------------------------
# pseudo-arclength reparametrization
# ---------------------------------------------------------------------------

_GL16 = np.polynomial.legendre.leggauss(16)


def _accel_norm(jets: JetFn, t: np.ndarray) -> np.ndarray:
    _, _, d2, _ = jets(np.asarray(t, dtype=float))
    return minkowski_dot(d2, d2)


def _speed(jets: JetFn, t: np.ndarray) -> np.ndarray:
    return _accel_norm(jets, t) ** 0.25


def _cumulative_scalar(fn, knots: np.ndarray) -> np.ndarray:
    nodes, weights = _GL16
    lo, hi = knots[:-1], knots[1:]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    pts = mid[:, None] + half[:, None] * nodes[None, :]
    vals = fn(pts.ravel()).reshape(pts.shape)
    panel = (weights[None, :] * vals).sum(axis=1) * half
    out = np.zeros(len(knots))
    out[1:] = np.cumsum(panel)
    return out


def pseudo_arclength(curve: NullCurve, n: Optional[int] = None) -> NullCurve:
    """Reparametrize so that ``<gamma'', gamma''> = 1``.

    Uses ``ds/dt = <gamma''(t), gamma''(t)>^{1/4}``; raises
    :class:`Degenerate` when the acceleration norm is not strictly positive
    somewhere on the sampled interval.
    """
    jets = curve.ensure_jets_callable()
    t0, t1 = float(curve.ts[0]), float(curve.ts[-1])
    n_out = n if n is not None else len(curve.ts)

    dense = np.linspace(t0, t1, 8 * max(n_out, 64) + 1)
    a_dense = _accel_norm(jets, dense)
    if np.min(a_dense) <= 0.0:
        raise Degenerate(
            f"acceleration norm reaches {float(np.min(a_dense)):.3g} <= 0; "
            "pseudo-arclength undefined")

    s_dense = _cumulative_scalar(lambda t: _speed(jets, t), dense)
    s_targets = np.linspace(0.0, s_dense[-1], n_out)
    t_of_s = np.interp(s_targets, s_dense, dense)

    # Newton polish: correct the interpolated parameter using one quadrature
    # panel from the nearest dense knot
    for _ in range(3):
        idx = np.clip(np.searchsorted(dense, t_of_s) - 1, 0, len(dense) - 2)
        base_t, base_s = dense[idx], s_dense[idx]
        mid = 0.5 * (base_t + t_of_s)
        half = 0.5 * (t_of_s - base_t)
        nodes, weights = _GL16
        pts = mid[:, None] + half[:, None] * nodes[None, :]
        vals = _speed(jets, pts.ravel()).reshape(pts.shape)
        s_here = base_s + (weights[None, :] * vals).sum(axis=1) * half
        t_of_s = t_of_s - (s_here - s_targets) / _speed(jets, t_of_s)

    g, d1, d2, d3 = jets(t_of_s)
    a = minkowski_dot(d2, d2)
    adot = 2.0 * minkowski_dot(d3, d2)
    addot = _fd_along(lambda t: 2.0 * minkowski_dot(jets(t)[3], jets(t)[2]), t_of_s)

    tp = a ** -0.25
    tpp = -0.25 * adot * a ** -1.5
    tppp = -0.25 * addot * a ** -1.75 + 0.375 * adot ** 2 * a ** -2.75

    new_d1 = d1 * tp[:, None]
    new_d2 = d2 * (tp ** 2)[:, None] + d1 * tpp[:, None]
    new_d3 = (d3 * (tp ** 3)[:, None] + 3.0 * d2 * (tp * tpp)[:, None]
              + d1 * tppp[:, None])

    return NullCurve(
        ts=s_targets, gamma=g, d1=new_d1, d2=new_d2, d3=new_d3,
        jets=None, parametrization="pseudo-arclength", name=curve.name,
    )


def _fd_along(fn, t: np.ndarray, step: float = 1e-3) -> np.ndarray:
    """Five-point first derivative of a scalar function along sample points."""
    t = np.asarray(t, dtype=float)
    return (fn(t - 2 * step) - 8 * fn(t - step) + 8 * fn(t + step)
            - fn(t + 2 * step)) / (12 * step)


# ---------------------------------------------------------------------------
# Frenet frame and lightlike curvature
# ---------------------------------------------------------------------------

def frame_and_curvature(curve: NullCurve) -> NullFrame:
    """Null frame (sigma, e, n) and curvature along a pseudo-arclength curve.

    ``n`` solves ``<n, sigma> = -2``, ``<n, e> = 0``, ``<n, n> = 0``: a
    minimum-norm solution of the two linear constraints is shifted along
    ``sigma`` to kill its squared norm.  Raises :class:`FrameAmbiguous`
    where the linear constraints are rank deficient.
    """
    if curve.parametrization != "pseudo-arclength":
        raise Degenerate("frame_and_curvature requires pseudo-arclength input")
    curve._require_d1()
    sigma, e, d3 = curve.d1, curve.d2, curve.d3

    # rows of the constraint matrix absorb the metric signature so the
    # system is Euclidean: row . n = <vec, n>
    r1 = sigma * np.array([1.0, 1.0, -1.0])
    r2 = e * np.array([1.0, 1.0, -1.0])
    g11 = np.einsum("ij,ij->i", r1, r1)
    g12 = np.einsum("ij,ij->i", r1, r2)
    g22 = np.einsum("ij,ij->i", r2, r2)
    det = g11 * g22 - g12 * g12
    scale = np.maximum(g11 * g22, 1e-30)
    if np.any(det <= 1e-12 * scale):
        raise FrameAmbiguous("sigma and e do not span a nondegenerate 2-frame")
    # minimum-norm solution of [r1; r2] n = (-2, 0)
    lam1 = (-2.0 * g22) / det
    lam2 = (2.0 * g12) / det
    n0 = lam1[:, None] * r1 + lam2[:, None] * r2
    n = n0 + (minkowski_dot(n0, n0) / 4.0)[:, None] * sigma

    kappa = minkowski_dot(d3, d3)

    h = curve.ts[1] - curve.ts[0]
    ndot = _fd_matrix(n, h)
    edot = _fd_matrix(e, h)
    interior = slice(3, -3)
    ndot_res = float(np.max(np.abs(
        ndot[interior] + kappa[interior, None] * e[interior])))
    edot_res = float(np.max(np.abs(
        edot[interior] + 0.5 * kappa[interior, None] * sigma[interior]
        - 0.5 * n[interior])))

    return NullFrame(ts=curve.ts, sigma=sigma, e=e, n=n, kappa=kappa,
                     ndot_residual=ndot_res, edot_residual=edot_res)


def _fd_matrix(A: np.ndarray, h: float) -> np.ndarray:
    """Seventh-point first derivative down axis 0 (interior rows only valid)."""
    out = np.zeros_like(A)
    c = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
    for k, ck in enumerate(c):
        if ck == 0.0:
            continue
        shift = k - 3
        out[3:-3] += ck * A[3 + shift: A.shape[0] - 3 + shift]
    return out / h


def measure_kappa(curve: NullCurve) -> Tuple[float, float]:
    """Mean lightlike curvature and its spread for a raw or arclength curve."""
    if curve.parametrization != "pseudo-arclength":
        curve = pseudo_arclength(curve)
    frame = frame_and_curvature(curve)
    kappa = frame.kappa
    return float(np.mean(kappa)), float(np.max(np.abs(kappa - np.mean(kappa))))


# ---------------------------------------------------------------------------
# the Weierstrass angle of a null curve
# ---------------------------------------------------------------------------

@dataclass
class AngleFunction:
    """Samples of the turning rate of a null curve in the frame (cos, sin, 1).

    ``omega = theta'`` and its two derivatives are taken with respect to the
    parameter in which the curve's tangent has unit last component.
    """

    us: np.ndarray
    omega: np.ndarray
    omega1: np.ndarray
    omega2: np.ndarray
    theta: Optional[np.ndarray] = None


def angle_from_curve(curve: NullCurve) -> AngleFunction:
    """Extract the angle data of a null curve from its analytic samples.

    The tangent is rescaled to ``(cos theta, sin theta, 1)``; the turning
    rate is converted to the rescaled parameter via the chain rule.  The
    overall sign of theta is normalized to make the turning rate positive;
    raises :class:`Degenerate` if it changes sign or vanishes.
    """
    curve._require_d1()
    a, ap = curve.d1, curve.d2
    a0 = a[:, 2]
    if np.min(np.abs(a0)) < 1e-12:
        raise Degenerate("tangent has vanishing last component; no angle form")
    b1, b2 = a[:, 0] / a0, a[:, 1] / a0
    b1p = (ap[:, 0] * a0 - a[:, 0] * ap[:, 2]) / a0 ** 2
    b2p = (ap[:, 1] * a0 - a[:, 1] * ap[:, 2]) / a0 ** 2
    theta_u = b1 * b2p - b2 * b1p
    omega = theta_u / a0

    h = curve.ts[1] - curve.ts[0]
    omega_u = _fd_vector(omega, h)
    omega1 = omega_u / a0
    omega1_u = _fd_vector(omega1, h)
    omega2 = omega1_u / a0

    sl = slice(6, -6) if len(omega) > 12 else slice(None)
    us, omega, omega1, omega2 = curve.ts[sl], omega[sl], omega1[sl], omega2[sl]
    theta = np.unwrap(np.arctan2(b2, b1))[sl]

    if np.median(omega) < 0:
        omega, omega1, omega2, theta = -omega, -omega1, -omega2, -theta
    if np.min(omega) <= 0:
        raise Degenerate("turning rate is not strictly positive")
    return AngleFunction(us=us, omega=omega, omega1=omega1, omega2=omega2,
                         theta=theta)


def _fd_vector(y: np.ndarray, h: float) -> np.ndarray:
    """Seventh-point first derivative with one-sided fill at the ends."""
    out = np.gradient(y, h)
    c = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
    if len(y) > 6:
        acc = np.zeros(len(y) - 6)
        for k, ck in enumerate(c):
            if ck == 0.0:
                continue
            acc += ck * y[k: len(y) - 6 + k]
        out[3:-3] = acc / h
    return out


def angle_from_theta(theta: Callable, interval: Tuple[float, float],
                     n: int = 801,
                     d1: Optional[Callable] = None,
                     d2: Optional[Callable] = None,
                     d3: Optional[Callable] = None) -> AngleFunction:
    """Angle data from an explicit ``theta(u)`` with optional derivatives."""
    us = np.linspace(interval[0], interval[1], n)
    h = us[1] - us[0]
    th = np.array([theta(u) for u in us], dtype=float)
    omega = np.array([d1(u) for u in us]) if d1 else _fd_vector(th, h)
    omega1 = np.array([d2(u) for u in us]) if d2 else _fd_vector(omega, h)
    omega2 = np.array([d3(u) for u in us]) if d3 else _fd_vector(omega1, h)
    sl = slice(6, -6) if d1 is None and len(us) > 12 else slice(None)
    return AngleFunction(us=us[sl], omega=omega[sl], omega1=omega1[sl],
                         omega2=omega2[sl], theta=th[sl])


def curvature_from_angle(angle: AngleFunction) -> np.ndarray:
    """Lightlike curvature from the turning rate.

    ``kappa = (2 w^4 - (7/2) w'^2 + 2 w w'') / (2 w^3)`` with ``w = theta'``.
    """
    w, w1, w2 = angle.omega, angle.omega1, angle.omega2
    if np.min(w) <= 0:
        raise Degenerate("curvature_from_angle requires theta' > 0")
    return (2.0 * w ** 4 - 3.5 * w1 ** 2 + 2.0 * w * w2) / (2.0 * w ** 3)


# ---------------------------------------------------------------------------
# scaling, balancing, helices
# ---------------------------------------------------------------------------

def scale_curve(curve: NullCurve, mu: float) -> NullCurve:
    """The curve ``mu * gamma`` (raw parametrization; jets scale linearly)."""
    base = curve.ensure_jets_callable()

    def jets(t):
        g, d1, d2, d3 = base(t)
        return mu * g, mu * d1, mu * d2, mu * d3

    return NullCurve(
        ts=curve.ts.copy(), gamma=mu * curve.gamma,
        d1=None if curve.d1 is None else mu * curve.d1,
        d2=None if curve.d2 is None else mu * curve.d2,
        d3=None if curve.d3 is None else mu * curve.d3,
        jets=jets, parametrization="raw", name=f"{mu:g}*{curve.name}",
    )


def scale_curves(alpha: NullCurve, beta: NullCurve, mu: float) -> Tuple[NullCurve, NullCurve]:
    """Associated-family scaling ``(alpha, beta) -> (mu alpha, beta/mu)``."""
    if not mu > 0:
        raise ParamRange("scaling factor must be positive")
    return scale_curve(alpha, mu), scale_curve(beta, 1.0 / mu)


def balance(alpha: NullCurve, beta: NullCurve) -> Tuple[float, NullCurve, NullCurve]:
    """Scale a generator pair so both lightlike curvatures coincide.

    Returns ``(mu, mu alpha, beta/mu)`` with ``mu = sqrt(kappa_alpha /
    kappa_beta)``; raises :class:`SignMismatch` when the curvatures differ
    in sign or either vanishes (no positive scaling can equalize them).
    """
    ka, _ = measure_kappa(alpha)
    kb, _ = measure_kappa(beta)
    if ka == 0.0 or kb == 0.0 or (ka > 0) != (kb > 0):
        raise SignMismatch(
            f"cannot balance curvatures {ka:.6g} and {kb:.6g}")
    mu = math.sqrt(ka / kb)
    sa, sb = scale_curves(alpha, beta, mu)
    return mu, sa, sb


def helix(kind: str, c: float = 1.0, interval: Tuple[float, float] = (-2.0, 2.0),
          n: int = 401) -> NullCurve:
    """Model null helices in pseudo-arclength.

    ``kind`` selects the sign of the constant lightlike curvature:
    ``positive`` gives ``kappa = c^2``, ``zero`` gives ``kappa = 0`` (a null
    cubic), ``negative`` gives ``kappa = -c^2``; ``c > 0`` required where
    it enters.
    """
    if kind in ("positive", "negative") and not c > 0:
        raise ParamRange("helix needs c > 0")

    if kind == "positive":
        def jets(t):
            t = np.asarray(t, dtype=float)
            ct, st = np.cos(c * t), np.sin(c * t)
            g = np.stack([ct / c ** 2, st / c ** 2, t / c], axis=-1)
            d1 = np.stack([-st / c, ct / c, np.ones_like(t) / c], axis=-1)
            d2 = np.stack([-ct, -st, np.zeros_like(t)], axis=-1)
            d3 = np.stack([c * st, -c * ct, np.zeros_like(t)], axis=-1)
            return g, d1, d2, d3
    elif kind == "zero":
        def jets(t):
            t = np.asarray(t, dtype=float)
            g = np.stack([t ** 2 / 2, -t ** 3 / 6 + t / 2, t ** 3 / 6 + t / 2], axis=-1)
            d1 = np.stack([t, (1 - t ** 2) / 2, (1 + t ** 2) / 2], axis=-1)
            d2 = np.stack([np.ones_like(t), -t, t], axis=-1)
            d3 = np.stack([np.zeros_like(t), -np.ones_like(t), np.ones_like(t)], axis=-1)
            return g, d1, d2, d3
    elif kind == "negative":
        def jets(t):
            t = np.asarray(t, dtype=float)
            ch, sh = np.cosh(c * t), np.sinh(c * t)
            g = np.stack([-t / c, -ch / c ** 2, -sh / c ** 2], axis=-1)
            d1 = np.stack([-np.ones_like(t) / c, -sh / c, -ch / c], axis=-1)
            d2 = np.stack([np.zeros_like(t), -ch, -sh], axis=-1)
            d3 = np.stack([np.zeros_like(t), -c * sh, -c * ch], axis=-1)
            return g, d1, d2, d3
    else:
        raise ParamRange(f"unknown helix kind {kind!r}")

    ts = np.linspace(interval[0], interval[1], n)
    g, d1, d2, d3 = jets(ts)
    return NullCurve(ts=ts, gamma=g, d1=d1, d2=d2, d3=d3, jets=jets,
                     parametrization="pseudo-arclength", name=f"helix:{kind}")
