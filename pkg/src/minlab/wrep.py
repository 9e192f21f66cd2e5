"""Weierstrass-type representation for timelike minimal surfaces.

A surface is produced from a pair ``(h, eta)`` of paraholomorphic functions
("data") by integrating the null-valued integrand

    W = (2 h eta, (1 - h^2) eta, -j (1 + h^2) eta)

and taking the real part along a path from the basepoint.  Because the data
are paraholomorphic, the path integral splits into two independent real
antiderivatives along the null coordinates ``u = x + y`` and ``v = x - y``;
the implementation integrates those two 1-D component functions, which is
numerically identical to the two-leg path basepoint → (x, y0) → (x, y) and
manifestly path independent.

All array layouts index grids as ``[i, j] ↔ (xs[i], ys[j])``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import QuadratureFailure, SingularPoint
from .paracomplex import J, ParaComplex, wirtinger_dz

__all__ = [
    "Vec21",
    "minkowski_dot",
    "DataParts",
    "WeierstrassData",
    "SurfaceGrid",
    "integrate",
    "evaluate_points",
    "normal",
    "hopf",
    "conjugate",
    "associate",
]


# ---------------------------------------------------------------------------
# Minkowski vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Vec21:
    """A vector in Minkowski 3-space, component order ``(x1, x2, x0)``.

    The inner product is ``x1*y1 + x2*y2 - x0*y0`` (signature ``++-`` with
    the timelike direction stored last).
    """

    x1: float
    x2: float
    x0: float

    def dot(self, other: "Vec21") -> float:
        return self.x1 * other.x1 + self.x2 * other.x2 - self.x0 * other.x0

    def __add__(self, other: "Vec21") -> "Vec21":
        return Vec21(self.x1 + other.x1, self.x2 + other.x2, self.x0 + other.x0)

    def __sub__(self, other: "Vec21") -> "Vec21":
        return Vec21(self.x1 - other.x1, self.x2 - other.x2, self.x0 - other.x0)

    def __mul__(self, s: float) -> "Vec21":
        return Vec21(self.x1 * s, self.x2 * s, self.x0 * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec21":
        return Vec21(-self.x1, -self.x2, -self.x0)

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x0], dtype=float)

    @classmethod
    def from_array(cls, a) -> "Vec21":
        return cls(float(a[0]), float(a[1]), float(a[2]))


def minkowski_dot(a, b) -> np.ndarray:
    """Vectorized inner product on arrays whose trailing axis has length 3."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2]


# ---------------------------------------------------------------------------
# data: scalar callables + vectorized null-component evaluators
# ---------------------------------------------------------------------------

RealFn = Callable[[np.ndarray], np.ndarray]


@dataclass
class DataParts:
    """Vectorized null-component evaluators of a paraholomorphic pair.

    ``hp(t)`` is the ``e+`` component of ``h`` as a function of ``u`` and
    ``hm(t)`` the ``e-`` component as a function of ``v`` (likewise ``ep``,
    ``em`` for ``eta``); the suffixed fields are their first and second
    derivatives.  Derivatives left as ``None`` are synthesized by central
    finite differences.
    """

    hp: RealFn
    hm: RealFn
    ep: RealFn
    em: RealFn
    hp1: Optional[RealFn] = None
    hm1: Optional[RealFn] = None
    ep1: Optional[RealFn] = None
    em1: Optional[RealFn] = None
    hp2: Optional[RealFn] = None
    hm2: Optional[RealFn] = None
    ep2: Optional[RealFn] = None
    em2: Optional[RealFn] = None

    def __post_init__(self):
        for base, d1, d2 in (("hp", "hp1", "hp2"), ("hm", "hm1", "hm2"),
                             ("ep", "ep1", "ep2"), ("em", "em1", "em2")):
            f = getattr(self, base)
            if getattr(self, d1) is None:
                setattr(self, d1, _fd1(f))
            if getattr(self, d2) is None:
                setattr(self, d2, _fd2(f))


def _fd1(f: RealFn, step: float = 1e-5) -> RealFn:
    def d(t):
        t = np.asarray(t, dtype=float)
        return (f(t + step) - f(t - step)) / (2.0 * step)
    return d


def _fd2(f: RealFn, step: float = 1e-4) -> RealFn:
    def d(t):
        t = np.asarray(t, dtype=float)
        return (f(t + step) - 2.0 * f(t) + f(t - step)) / (step * step)
    return d


def _parts_from_scalar(h, eta) -> DataParts:
    """Null components of scalar callables, sampled along the real axis.

    On real arguments the value's null coordinates are exactly the two
    component functions, so one scalar evaluation feeds both sides.
    """

    def comp(fn, which):
        def g(t):
            t = np.asarray(t, dtype=float)
            flat = [fn(ParaComplex(float(s), 0.0)).null[which] for s in t.ravel()]
            return np.array(flat, dtype=float).reshape(t.shape)
        return g

    def comp_d1(fn, which):
        def g(t):
            t = np.asarray(t, dtype=float)
            flat = [wirtinger_dz(fn, ParaComplex(float(s), 0.0)).null[which]
                    for s in t.ravel()]
            return np.array(flat, dtype=float).reshape(t.shape)
        return g

    def comp_d2(fn, which):
        def g(t):
            t = np.asarray(t, dtype=float)
            step = 1e-4
            flat = []
            for s in t.ravel():
                d = wirtinger_dz(
                    lambda w: wirtinger_dz(fn, w, step), ParaComplex(float(s), 0.0), step
                )
                flat.append(d.null[which])
            return np.array(flat, dtype=float).reshape(t.shape)
        return g

    return DataParts(
        hp=comp(h, 0), hm=comp(h, 1), ep=comp(eta, 0), em=comp(eta, 1),
        hp1=comp_d1(h, 0), hm1=comp_d1(h, 1), ep1=comp_d1(eta, 0), em1=comp_d1(eta, 1),
        hp2=comp_d2(h, 0), hm2=comp_d2(h, 1), ep2=comp_d2(eta, 0), em2=comp_d2(eta, 1),
    )


class WeierstrassData:
    """Paraholomorphic surface data ``(h, eta)`` on a rectangular domain.

    Parameters
    ----------
    h, eta:
        Scalar callables ``ParaComplex -> ParaComplex``.
    domain:
        Rectangle ``(x0, x1, y0, y1)`` on which the data are regular.
    basepoint:
        Point pinned to the ambient origin by :func:`integrate`.
    parts:
        Optional vectorized component evaluators; synthesized from the
        scalar callables when omitted.
    name:
        Optional label used in reports and exports.
    """

    def __init__(self, h, eta, domain, basepoint=None, *, parts: DataParts | None = None,
                 name: str = "custom"):
        self.h = h
        self.eta = eta
        self.domain = tuple(float(t) for t in domain)
        if basepoint is None:
            basepoint = (self.domain[0], self.domain[2])
        self.basepoint = (float(basepoint[0]), float(basepoint[1]))
        self._parts = parts
        self.name = name

    @property
    def parts(self) -> DataParts:
        if self._parts is None:
            self._parts = _parts_from_scalar(self.h, self.eta)
        return self._parts

    # -- integrand components ------------------------------------------------

    def integrand_plus(self, u: np.ndarray) -> np.ndarray:
        """``e+`` components of W as an ``(..., 3)`` array of functions of u."""
        p = self.parts
        h, e = p.hp(u), p.ep(u)
        return np.stack([2.0 * h * e, (1.0 - h * h) * e, -(1.0 + h * h) * e], axis=-1)

    def integrand_minus(self, v: np.ndarray) -> np.ndarray:
        p = self.parts
        h, e = p.hm(v), p.em(v)
        return np.stack([2.0 * h * e, (1.0 - h * h) * e, +(1.0 + h * h) * e], axis=-1)

    def integrand_plus_d1(self, u: np.ndarray) -> np.ndarray:
        p = self.parts
        h, e, h1, e1 = p.hp(u), p.ep(u), p.hp1(u), p.ep1(u)
        return np.stack([
            2.0 * (h1 * e + h * e1),
            -2.0 * h * h1 * e + (1.0 - h * h) * e1,
            -(2.0 * h * h1 * e + (1.0 + h * h) * e1),
        ], axis=-1)

    def integrand_minus_d1(self, v: np.ndarray) -> np.ndarray:
        p = self.parts
        h, e, h1, e1 = p.hm(v), p.em(v), p.hm1(v), p.em1(v)
        return np.stack([
            2.0 * (h1 * e + h * e1),
            -2.0 * h * h1 * e + (1.0 - h * h) * e1,
            +(2.0 * h * h1 * e + (1.0 + h * h) * e1),
        ], axis=-1)

    def integrand_plus_d2(self, u: np.ndarray) -> np.ndarray:
        p = self.parts
        h, e = p.hp(u), p.ep(u)
        h1, e1 = p.hp1(u), p.ep1(u)
        h2, e2 = p.hp2(u), p.ep2(u)
        a = h1 * h1 + h * h2
        return np.stack([
            2.0 * (h2 * e + 2.0 * h1 * e1 + h * e2),
            -2.0 * a * e - 4.0 * h * h1 * e1 + (1.0 - h * h) * e2,
            -(2.0 * a * e + 4.0 * h * h1 * e1 + (1.0 + h * h) * e2),
        ], axis=-1)

    def integrand_minus_d2(self, v: np.ndarray) -> np.ndarray:
        p = self.parts
        h, e = p.hm(v), p.em(v)
        h1, e1 = p.hm1(v), p.em1(v)
        h2, e2 = p.hm2(v), p.em2(v)
        a = h1 * h1 + h * h2
        return np.stack([
            2.0 * (h2 * e + 2.0 * h1 * e1 + h * e2),
            -2.0 * a * e - 4.0 * h * h1 * e1 + (1.0 - h * h) * e2,
            +(2.0 * a * e + 4.0 * h * h1 * e1 + (1.0 + h * h) * e2),
        ], axis=-1)

    def rho(self, U, V) -> np.ndarray:
        """Signed conformal factor ``(1 + |h|^2) |eta|`` on component arrays."""
        p = self.parts
        sq = p.ep(U) * p.em(V)
        return (1.0 + p.hp(U) * p.hm(V)) * np.sqrt(np.abs(sq))


# ---------------------------------------------------------------------------
# cumulative 1-D panel quadrature (Gauss-Legendre 16 with embedded 8)
# ---------------------------------------------------------------------------

_GL16 = np.polynomial.legendre.leggauss(16)
_GL8 = np.polynomial.legendre.leggauss(8)


def _panel_integrals(fn, lo: np.ndarray, hi: np.ndarray):
    """Integrals of vector-valued fn over panels [lo_k, hi_k]; returns (vals, errs)."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)

    def rule(nodes, weights):
        pts = mid[:, None] + half[:, None] * nodes[None, :]
        vals = fn(pts.ravel())
        vals = vals.reshape(pts.shape + (3,))
        return np.einsum("kn,kni->ki", weights[None, :] * half[:, None], vals)

    i16 = rule(*_GL16)
    i8 = rule(*_GL8)
    err = np.max(np.abs(i16 - i8), axis=-1)
    return i16, err


def _cumulative(fn, knots: np.ndarray, base_index: int, tol: float) -> np.ndarray:
    """Antiderivative of fn at each knot, zero at ``knots[base_index]``."""
    n = len(knots)
    out = np.zeros((n, 3))
    if n == 1:
        return out
    lo, hi = knots[:-1], knots[1:]
    vals, errs = _panel_integrals(fn, lo, hi)
    finite = np.all(np.isfinite(vals), axis=-1) & np.isfinite(errs)
    errs = np.where(finite, errs, np.inf)
    bad = errs > tol
    if np.any(bad):
        for k in np.nonzero(bad)[0]:
            m = 0.5 * (lo[k] + hi[k])
            sub_lo = np.array([lo[k], m])
            sub_hi = np.array([m, hi[k]])
            sub_vals, sub_errs = _panel_integrals(fn, sub_lo, sub_hi)
            if not np.all(np.isfinite(sub_vals)) or np.any(sub_errs > 0.5 * tol):
                raise QuadratureFailure(
                    f"panel [{lo[k]:.6g}, {hi[k]:.6g}] error "
                    f"{float(np.max(sub_errs)):.3g} exceeds tolerance {tol:.3g}"
                )
            vals[k] = sub_vals.sum(axis=0)
    cum = np.zeros((n, 3))
    cum[1:] = np.cumsum(vals, axis=0)
    return cum - cum[base_index]


@dataclass
class SurfaceGrid:
    """Sampled surface with exact jets from the representation integrand.

    Second derivatives satisfy the wave-equation relations of the
    representation (``F_xx = F_yy``), and the stored third-order arrays
    ``Fxxx = F_xyy`` and ``Fxxy = F_yyy`` follow the same pattern one order
    up, so five arrays carry the full 3-jet.
    """

    nx: int
    ny: int
    xs: np.ndarray
    ys: np.ndarray
    F: np.ndarray
    Fx: np.ndarray
    Fy: np.ndarray
    Fxx: np.ndarray
    Fxy: np.ndarray
    Fyy: np.ndarray
    Fxxx: np.ndarray
    Fxxy: np.ndarray
    rho: np.ndarray
    data: WeierstrassData = field(repr=False)

    def nonsingular_mask(self, band: float = 1e-3) -> np.ndarray:
        """Nodes safely away from the singular set: ``|rho| >= band * max|rho|``."""
        scale = float(np.max(np.abs(self.rho))) or 1.0
        return np.abs(self.rho) >= band * scale


def _grid_axes(data: WeierstrassData, nx: int, ny: int, domain=None):
    x0, x1, y0, y1 = data.domain if domain is None else domain
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    return xs, ys


def integrate(data: WeierstrassData, nx: int = 50, ny: int = 50, *,
              domain=None, tol: float = 1e-10) -> SurfaceGrid:
    """Integrate the representation over a grid, pinning F(basepoint) = 0.

    The two null-component antiderivatives are accumulated once over the
    sorted set of needed coordinates, which makes repeated column/row values
    reuse the same panels (componentwise idempotent) and keeps the result
    independent of the path joining basepoint and sample.
    """
    xs, ys = _grid_axes(data, nx, ny, domain)
    xb, yb = data.basepoint

    U = xs[:, None] + ys[None, :]
    V = xs[:, None] - ys[None, :]

    Au = _antiderivative_table(data.integrand_plus, U, xb + yb, tol)
    Av = _antiderivative_table(data.integrand_minus, V, xb - yb, tol)

    F = 0.5 * (Au + Av)

    Wp, Wm = data.integrand_plus(U), data.integrand_minus(V)
    W1p, W1m = data.integrand_plus_d1(U), data.integrand_minus_d1(V)
    W2p, W2m = data.integrand_plus_d2(U), data.integrand_minus_d2(V)

    Fx = 0.5 * (Wp + Wm)
    Fy = 0.5 * (Wp - Wm)
    Fxx = 0.5 * (W1p + W1m)
    Fxy = 0.5 * (W1p - W1m)
    Fxxx = 0.5 * (W2p + W2m)
    Fxxy = 0.5 * (W2p - W2m)

    rho = data.rho(U, V)

    return SurfaceGrid(
        nx=len(xs), ny=len(ys), xs=xs, ys=ys, F=F,
        Fx=Fx, Fy=Fy, Fxx=Fxx, Fxy=Fxy, Fyy=Fxx.copy(),
        Fxxx=Fxxx, Fxxy=Fxxy, rho=rho, data=data,
    )


def _antiderivative_table(fn, coords: np.ndarray, base: float, tol: float) -> np.ndarray:
    """Antiderivative of fn at every entry of ``coords`` (pinned at ``base``)."""
    flat = coords.ravel()
    knots, inverse = np.unique(flat, return_inverse=True)
    idx = np.searchsorted(knots, base)
    if idx == len(knots) or knots[idx] != base:
        knots = np.insert(knots, idx, base)
        inverse = np.where(inverse >= idx, inverse + 1, inverse)
    table = _cumulative(fn, knots, idx, tol)
    return table[inverse].reshape(coords.shape + (3,))


def evaluate_points(data: WeierstrassData, points: Sequence[tuple[float, float]],
                    tol: float = 1e-10) -> np.ndarray:
    """Pinned surface values at arbitrary ``(x, y)`` points, shape (n, 3)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    xb, yb = data.basepoint
    u = pts[:, 0] + pts[:, 1]
    v = pts[:, 0] - pts[:, 1]
    Au = _antiderivative_table(data.integrand_plus, u, xb + yb, tol)
    Av = _antiderivative_table(data.integrand_minus, v, xb - yb, tol)
    return 0.5 * (Au + Av)


# ---------------------------------------------------------------------------
# pointwise geometry from the data
# ---------------------------------------------------------------------------

def _h_at(data: WeierstrassData, z: ParaComplex) -> ParaComplex:
    u, v = z.null
    p = data.parts
    return ParaComplex.from_null(float(p.hp(np.asarray(u))), float(p.hm(np.asarray(v))))


def normal(data: WeierstrassData, z: ParaComplex) -> Vec21:
    """Unit (spacelike) normal from the stereographic value of ``h``.

    Raises :class:`SingularPoint` where ``|h|^2 = -1`` (the conformal factor
    vanishes and the normal direction degenerates to a lightlike one).
    """
    h = _h_at(data, z)
    s = h.sq_norm()
    denom = 1.0 + s
    if abs(denom) < 1e-12:
        raise SingularPoint(f"normal undefined at {z!r}: |h|^2 = -1")
    return Vec21((s - 1.0) / denom, 2.0 * h.re / denom, 2.0 * h.im / denom)


def hopf(data: WeierstrassData, z: ParaComplex) -> ParaComplex:
    """Hopf-differential coefficient ``q = -h_z eta`` at ``z``."""
    u, v = z.null
    p = data.parts
    hz = ParaComplex.from_null(float(p.hp1(np.asarray(u))), float(p.hm1(np.asarray(v))))
    eta = ParaComplex.from_null(float(p.ep(np.asarray(u))), float(p.em(np.asarray(v))))
    return -(hz * eta)


def conjugate(data: WeierstrassData) -> WeierstrassData:
    """Conjugate surface data: ``eta -> j eta`` (flips the minus component)."""
    p = data.parts
    new_parts = DataParts(
        hp=p.hp, hm=p.hm,
        ep=p.ep, em=lambda t: -p.em(t),
        hp1=p.hp1, hm1=p.hm1,
        ep1=p.ep1, em1=lambda t: -p.em1(t),
        hp2=p.hp2, hm2=p.hm2,
        ep2=p.ep2, em2=lambda t: -p.em2(t),
    )
    return WeierstrassData(
        data.h, lambda z: J * data.eta(z), data.domain, data.basepoint,
        parts=new_parts, name=f"{data.name}*",
    )


def associate(data: WeierstrassData, phi: float) -> WeierstrassData:
    """Associate family member: ``eta -> e^{j phi} eta``."""
    p = data.parts
    cp, cm = math.exp(phi), math.exp(-phi)
    new_parts = DataParts(
        hp=p.hp, hm=p.hm,
        ep=lambda t: cp * p.ep(t), em=lambda t: cm * p.em(t),
        hp1=p.hp1, hm1=p.hm1,
        ep1=lambda t: cp * p.ep1(t), em1=lambda t: cm * p.em1(t),
        hp2=p.hp2, hm2=p.hm2,
        ep2=lambda t: cp * p.ep2(t), em2=lambda t: cm * p.em2(t),
    )
    factor = ParaComplex(math.cosh(phi), math.sinh(phi))
    return WeierstrassData(
        data.h, lambda z: factor * data.eta(z), data.domain, data.basepoint,
        parts=new_parts, name=f"{data.name}@{phi:g}",
    )
