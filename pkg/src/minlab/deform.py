"""One-parameter deformation families joining the catalog surfaces.

Five branches cover the deformation space: a branch through the plane
("P"), two catenoid branches ("S2", "S4"), a branch ending at the
lightlike-data surface ("CL"), and a branch joining the exponential
families ("BL2").  Each branch yields paraholomorphic data for every
parameter value; parameter values where the generic formula degenerates
carry stored closed forms instead of runtime limits.

The "P" branch additionally owns the family of unit-speed null curves
whose midpoint construction recovers the branch surfaces; their lightcone
curvature is ``-4 cos(2 theta)`` exactly.
"""

from __future__ import annotations

import json
import math
import os
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .catalog import surface_class, weierstrass_data
from .entire import ec, es, ev, ew3
from .errors import ParamRange
from .nullgeom import NullCurve
from .wrep import DataParts, SurfaceGrid, WeierstrassData, evaluate_points, integrate

__all__ = [
    "BRANCHES",
    "theta_range",
    "family_data",
    "family_surface",
    "family_points",
    "surface_scale",
    "rho_field",
    "null_curve_family",
    "continuity_scan",
    "export_frames",
]

_Q = 2.0 ** 0.25          # 2^{1/4}
_LAM = 2.0 ** -0.75       # 2^{-3/4}

BRANCHES = ("P", "S2", "CL", "S4", "BL2")

_RANGES: Dict[str, Tuple[float, float]] = {
    "P": (-math.pi / 4.0, 3.0 * math.pi / 4.0),
    "S2": (-math.pi / 2.0, math.pi / 4.0),
    "CL": (0.0, 1.0),
    "S4": (0.0, 2.0),
    "BL2": (0.0, 1.0),
}

_DOMAINS: Dict[str, float] = {"P": 0.6, "S2": 0.6, "CL": 0.45,
                              "S4": 0.6, "BL2": 0.6}


def theta_range(name: str) -> Tuple[float, float]:
    if name not in _RANGES:
        raise ParamRange(f"unknown branch {name!r}; one of {BRANCHES}")
    return _RANGES[name]


def _check_theta(name: str, theta: float) -> float:
    lo, hi = theta_range(name)
    theta = float(theta)
    if not (lo - 1e-12 <= theta <= hi + 1e-12):
        raise ParamRange(f"branch {name}: parameter {theta} outside "
                         f"[{lo:.6g}, {hi:.6g}]")
    return min(max(theta, lo), hi)


def _p_is_endpoint(theta: float) -> bool:
    lo, hi = _RANGES["P"]
    return abs(theta - lo) < 1e-12 or abs(theta - hi) < 1e-12


def surface_scale(name: str, theta: float) -> float:
    """Scale factor applied to the integrated surface (1 except on "P").

    On the plane branch the factor ``(1 - sin(theta + pi/4)) |cos 2 theta|
    + sin(theta + pi/4)`` keeps the family bounded: it equals 1 at the
    self-conjugate parameter and cancels the blow-up of the data toward
    the endpoint planes.  At the endpoints themselves the stored data
    already absorb the (vanishing) factor, so no scale is applied.
    """
    theta = _check_theta(name, theta)
    if name != "P" or _p_is_endpoint(theta):
        return 1.0
    w = math.sin(theta + math.pi / 4.0)
    return (1.0 - w) * abs(math.cos(2.0 * theta)) + w


# ---------------------------------------------------------------------------
# branch data
# ---------------------------------------------------------------------------

def _const(value: float) -> Callable[[np.ndarray], np.ndarray]:
    def fn(t):
        t = np.asarray(t, dtype=float)
        return np.full_like(t, value)
    return fn


def _p_parts(theta: float) -> DataParts:
    sg = math.cos(2.0 * theta)
    s1 = math.cos(theta) + math.sin(theta)
    lam = _LAM
    k_eta = 1.0 / (_Q * s1)

    def h(t):
        t = np.asarray(t, dtype=float)
        return s1 * es(sg, lam * t) / ec(sg, lam * t)

    def h1(t):
        t = np.asarray(t, dtype=float)
        return s1 * lam / ec(sg, lam * t) ** 2

    def h2(t):
        t = np.asarray(t, dtype=float)
        return -2.0 * s1 * lam * lam * sg * es(sg, lam * t) / ec(sg, lam * t) ** 3

    def e(t):
        t = np.asarray(t, dtype=float)
        return k_eta * ec(sg, lam * t) ** 2

    def e1(t):
        t = np.asarray(t, dtype=float)
        return 2.0 * k_eta * lam * sg * es(sg, lam * t) * ec(sg, lam * t)

    def e2(t):
        t = np.asarray(t, dtype=float)
        c, s = ec(sg, lam * t), es(sg, lam * t)
        return 2.0 * k_eta * lam * lam * sg * (c * c + sg * s * s)

    return DataParts(hp=h, hm=h, ep=e, em=e,
                     hp1=h1, hm1=h1, ep1=e1, em1=e1,
                     hp2=h2, hm2=h2, ep2=e2, em2=e2)


def _p_limit_parts() -> DataParts:
    # stored endpoint: the scale factor has been absorbed, leaving a plane
    zero = _const(0.0)
    eta = _const(3.0 * _LAM)
    return DataParts(hp=zero, hm=zero, ep=eta, em=eta,
                     hp1=zero, hm1=zero, ep1=zero, em1=zero,
                     hp2=zero, hm2=zero, ep2=zero, em2=zero)


def _s2_parts(theta: float) -> DataParts:
    # snap the roundoff of cos at the quarter-turn endpoint so the junction
    # with the "S4" branch is exact
    c = math.cos(theta)
    a1 = math.sqrt(c - math.sin(theta))
    a0 = math.sqrt(c) if abs(c) > 1e-14 else 0.0
    k_eta = 1.0 / (2.0 * (a1 + a0))

    def hp(t):
        t = np.asarray(t, dtype=float)
        return a0 * np.expm1(a1 * t) / a1 + np.exp(a1 * t)

    def hm(t):
        t = np.asarray(t, dtype=float)
        return -a0 * np.expm1(-a1 * t) / a1 - np.exp(-a1 * t)

    def hp1(t):
        t = np.asarray(t, dtype=float)
        return (a0 + a1) * np.exp(a1 * t)

    def hm1(t):
        t = np.asarray(t, dtype=float)
        return (a0 + a1) * np.exp(-a1 * t)

    def hp2(t):
        t = np.asarray(t, dtype=float)
        return a1 * (a0 + a1) * np.exp(a1 * t)

    def hm2(t):
        t = np.asarray(t, dtype=float)
        return -a1 * (a0 + a1) * np.exp(-a1 * t)

    def ep(t):
        t = np.asarray(t, dtype=float)
        return k_eta * np.exp(-a1 * t)

    def em(t):
        t = np.asarray(t, dtype=float)
        return k_eta * np.exp(a1 * t)

    def ep1(t):
        t = np.asarray(t, dtype=float)
        return -a1 * k_eta * np.exp(-a1 * t)

    def em1(t):
        t = np.asarray(t, dtype=float)
        return a1 * k_eta * np.exp(a1 * t)

    def ep2(t):
        t = np.asarray(t, dtype=float)
        return a1 * a1 * k_eta * np.exp(-a1 * t)

    def em2(t):
        t = np.asarray(t, dtype=float)
        return a1 * a1 * k_eta * np.exp(a1 * t)

    return DataParts(hp=hp, hm=hm, ep=ep, em=em,
                     hp1=hp1, hm1=hm1, ep1=ep1, em1=em1,
                     hp2=hp2, hm2=hm2, ep2=ep2, em2=em2)


def _s2_limit_parts() -> DataParts:
    # stored value at the junction with the plane branch: h = 2^{-1/4} z + j
    def hp(t):
        t = np.asarray(t, dtype=float)
        return _Q ** -1 * t + 1.0

    def hm(t):
        t = np.asarray(t, dtype=float)
        return _Q ** -1 * t - 1.0

    return DataParts(hp=hp, hm=hm, ep=_const(_LAM), em=_const(_LAM),
                     hp1=_const(1.0 / _Q), hm1=_const(1.0 / _Q),
                     ep1=_const(0.0), em1=_const(0.0),
                     hp2=_const(0.0), hm2=_const(0.0),
                     ep2=_const(0.0), em2=_const(0.0))


def _cl_side(c: float, sign: float):
    """Shared exponential-rational pieces on one null component."""
    def pieces(t):
        t = np.asarray(t, dtype=float)
        w = np.exp(sign * c * t)
        w1 = sign * c * w
        Nc = np.expm1(sign * c * t) / c + w
        Dc = w - np.expm1(sign * c * t) / c
        Nc1 = sign * (c + 1.0) * w
        Dc1 = sign * (c - 1.0) * w
        Nc2 = c * (c + 1.0) * w
        Dc2 = c * (c - 1.0) * w
        return w, w1, Nc, Dc, Nc1, Dc1, Nc2, Dc2
    return pieces


def _cl_parts(theta: float) -> DataParts:
    c = theta
    plus = _cl_side(c, +1.0)
    minus = _cl_side(c, -1.0)

    def make_h(pieces, hsign):
        def h(t):
            _, _, Nc, Dc, _, _, _, _ = pieces(t)
            return hsign * Nc / Dc

        def h1(t):
            _, _, Nc, Dc, Nc1, Dc1, _, _ = pieces(t)
            return hsign * (Nc1 * Dc - Nc * Dc1) / Dc ** 2

        def h2(t):
            _, _, Nc, Dc, Nc1, Dc1, Nc2, Dc2 = pieces(t)
            return hsign * (Nc2 * Dc ** 2 - Nc * Dc2 * Dc
                            - 2.0 * Nc1 * Dc1 * Dc + 2.0 * Nc * Dc1 ** 2) / Dc ** 3
        return h, h1, h2

    def make_e(pieces):
        def e(t):
            w, _, _, Dc, _, _, _, _ = pieces(t)
            return Dc ** 2 / (4.0 * w)

        def e1(t):
            w, w1, _, Dc, _, Dc1, _, _ = pieces(t)
            return (2.0 * Dc * Dc1 * w - Dc ** 2 * w1) / (4.0 * w ** 2)

        def e2(t):
            w, w1, _, Dc, _, Dc1, _, Dc2 = pieces(t)
            num = ((2.0 * Dc1 ** 2 + 2.0 * Dc * Dc2) * w ** 2
                   - 4.0 * Dc * Dc1 * w1 * w
                   + 2.0 * Dc ** 2 * w1 ** 2 - Dc ** 2 * w * (c * c * w))
            return num / (4.0 * w ** 3)
        return e, e1, e2

    hp, hp1, hp2 = make_h(plus, +1.0)
    hm, hm1, hm2 = make_h(minus, -1.0)
    ep, ep1, ep2 = make_e(plus)
    em, em1, em2 = make_e(minus)
    return DataParts(hp=hp, hm=hm, ep=ep, em=em,
                     hp1=hp1, hm1=hm1, ep1=ep1, em1=em1,
                     hp2=hp2, hm2=hm2, ep2=ep2, em2=em2)


def _s4_parts(c4: float) -> DataParts:
    def hp(t):
        return np.exp(np.asarray(t, dtype=float)) + c4

    def hm(t):
        return c4 - np.exp(-np.asarray(t, dtype=float))

    return DataParts(
        hp=hp, hm=hm,
        ep=lambda t: 0.5 * np.exp(-np.asarray(t, dtype=float)),
        em=lambda t: 0.5 * np.exp(np.asarray(t, dtype=float)),
        hp1=lambda t: np.exp(np.asarray(t, dtype=float)),
        hm1=lambda t: np.exp(-np.asarray(t, dtype=float)),
        ep1=lambda t: -0.5 * np.exp(-np.asarray(t, dtype=float)),
        em1=lambda t: 0.5 * np.exp(np.asarray(t, dtype=float)),
        hp2=lambda t: np.exp(np.asarray(t, dtype=float)),
        hm2=lambda t: -np.exp(-np.asarray(t, dtype=float)),
        ep2=lambda t: 0.5 * np.exp(-np.asarray(t, dtype=float)),
        em2=lambda t: 0.5 * np.exp(np.asarray(t, dtype=float)))


def _bl2_parts(c5: float) -> DataParts:
    lam = _Q
    k = 2.0 ** -1.25

    def mk_h(sign):
        def h(t):
            return np.exp(lam * np.asarray(t, dtype=float)) + sign * c5
        return h

    def mk_hd(power):
        def hd(t):
            return lam ** power * np.exp(lam * np.asarray(t, dtype=float))
        return hd

    def mk_e(power):
        def e(t):
            return k * (-lam) ** power * np.exp(-lam * np.asarray(t, dtype=float))
        return e

    return DataParts(hp=mk_h(+1.0), hm=mk_h(-1.0), ep=mk_e(0), em=mk_e(0),
                     hp1=mk_hd(1), hm1=mk_hd(1), ep1=mk_e(1), em1=mk_e(1),
                     hp2=mk_hd(2), hm2=mk_hd(2), ep2=mk_e(2), em2=mk_e(2))


def _scalar_from_parts(parts: DataParts):
    from .paracomplex import ParaComplex

    def h(z: "ParaComplex") -> "ParaComplex":
        u, v = z.null
        return ParaComplex.from_null(float(parts.hp(np.asarray(u))),
                                     float(parts.hm(np.asarray(v))))

    def eta(z: "ParaComplex") -> "ParaComplex":
        u, v = z.null
        return ParaComplex.from_null(float(parts.ep(np.asarray(u))),
                                     float(parts.em(np.asarray(v))))
    return h, eta


def family_data(name: str, theta: float) -> WeierstrassData:
    """Weierstrass data of one family member, pinned at the origin.

    Parameter values where the generic formula degenerates return stored
    closed forms: both ends of the plane branch (where the vanishing
    surface scale has been absorbed into the data), the linear-data end of
    the "S2" branch, and the lightlike-data end of the "CL" branch.
    """
    theta = _check_theta(name, theta)
    lo, hi = _RANGES[name]
    half = _DOMAINS[name]
    domain = (-half, half, -half, half)

    if name == "P":
        if abs(theta - lo) < 1e-12 or abs(theta - hi) < 1e-12:
            parts = _p_limit_parts()
        else:
            parts = _p_parts(theta)
    elif name == "S2":
        if abs(theta - math.pi / 4.0) < 1e-12:
            parts = _s2_limit_parts()
        else:
            parts = _s2_parts(theta)
    elif name == "CL":
        if abs(theta) < 1e-12:
            cat = weierstrass_data(surface_class("C_L"))
            parts = cat.parts
        else:
            parts = _cl_parts(theta)
    elif name == "S4":
        parts = _s4_parts(theta)
    else:
        parts = _bl2_parts(theta)

    h, eta = _scalar_from_parts(parts)
    return WeierstrassData(h=h, eta=eta, domain=domain, basepoint=(0.0, 0.0),
                           parts=parts, name=f"{name}@{theta:.6g}")


# ---------------------------------------------------------------------------
# surfaces, probes, scans
# ---------------------------------------------------------------------------

_BL2_ROT = np.array([[0.0, 1.0, 0.0],    # (F1, F2, F0) -> (-F2, F1, F0)
                     [-1.0, 0.0, 0.0],
                     [0.0, 0.0, 1.0]])


def _transform(name: str, theta: float, vecs: np.ndarray) -> np.ndarray:
    if name == "P":
        return surface_scale(name, theta) * vecs
    if name == "BL2":
        return vecs @ _BL2_ROT
    return vecs


def family_surface(name: str, theta: float, nx: int = 33, ny: int = 33, *,
                   domain: Optional[Sequence[float]] = None,
                   tol: float = 1e-10) -> SurfaceGrid:
    """Integrated family member with the branch transform applied."""
    data = family_data(name, theta)
    grid = integrate(data, nx, ny, domain=domain, tol=tol)
    scale = surface_scale(name, theta)
    for attr in ("F", "Fx", "Fy", "Fxx", "Fxy", "Fyy", "Fxxx", "Fxxy"):
        setattr(grid, attr, _transform(name, theta, getattr(grid, attr)))
    grid.rho = scale * grid.rho
    return grid


def family_points(name: str, theta: float, points: Sequence[Tuple[float, float]],
                  tol: float = 1e-10) -> np.ndarray:
    """Surface values at probe points, with the branch transform applied."""
    vals = evaluate_points(family_data(name, theta), points, tol)
    return _transform(name, theta, vals)


def rho_field(name: str, theta: float, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Conformal factor ``(1 + h+ h-) sqrt|e+ e-|`` of a family member.

    Computed directly from the data parts (the branch transform is an
    isometry or a global scale; the scale is applied on the "P" branch)."""
    data = family_data(name, theta)
    X, Y = np.asarray(X, dtype=float), np.asarray(Y, dtype=float)
    u, v = X + Y, X - Y
    p = data.parts
    rho = (1.0 + p.hp(u) * p.hm(v)) * np.sqrt(np.abs(p.ep(u) * p.em(v)))
    return surface_scale(name, theta) * rho


def default_probes(name: str, k: int = 5, frac: float = 0.66) -> List[Tuple[float, float]]:
    """A k x k probe lattice inside the branch domain."""
    half = _DOMAINS[name] * frac
    axis = np.linspace(-half, half, k)
    return [(float(x), float(y)) for x in axis for y in axis]


def continuity_scan(name: str, n_steps: int = 200,
                    probes: Optional[Sequence[Tuple[float, float]]] = None,
                    thetas: Optional[Sequence[float]] = None) -> Dict[str, object]:
    """Largest probe-value jump between consecutive parameter frames."""
    if thetas is None:
        lo, hi = theta_range(name)
        thetas = np.linspace(lo, hi, n_steps + 1)
    else:
        thetas = np.asarray(thetas, dtype=float)
    if probes is None:
        probes = default_probes(name)
    prev = None
    max_jump = 0.0
    argmax = None
    for theta in thetas:
        vals = family_points(name, float(theta), probes)
        if prev is not None:
            jump = float(np.max(np.linalg.norm(vals - prev, axis=-1)))
            if jump > max_jump:
                max_jump, argmax = jump, float(theta)
        prev = vals
    return {"branch": name, "max_jump": max_jump, "at_theta": argmax,
            "n_steps": len(thetas) - 1, "n_probes": len(probes)}


# ---------------------------------------------------------------------------
# the null-curve family of the plane branch
# ---------------------------------------------------------------------------

def null_curve_family(theta: float, interval: Tuple[float, float] = (-2.0, 2.0),
                      n: int = 401) -> Tuple[NullCurve, NullCurve]:
    """Unit-speed null curve pair generating the plane-branch surfaces.

    Defined on the open parameter interval (the endpoint planes have no
    null-curve decomposition).  Both curves carry closed-form jets; their
    lightcone curvature is ``-4 cos(2 theta)`` exactly, and the second
    curve is the reflection of the first across the timelike coordinate.
    """
    lo, hi = _RANGES["P"]
    if not (lo + 1e-12 < theta < hi - 1e-12):
        raise ParamRange(f"null curve family needs parameter inside "
                         f"({lo:.6g}, {hi:.6g}); got {theta}")
    sg4 = 4.0 * math.cos(2.0 * theta)
    s1 = math.cos(theta) + math.sin(theta)
    sn, cs = math.sin(theta), math.cos(theta)

    def jets(ts: np.ndarray, flip: float):
        ts = np.asarray(ts, dtype=float)
        v_, w_ = ev(sg4, ts), ew3(sg4, ts)
        c_, s_ = ec(sg4, ts), es(sg4, ts)
        gamma = np.stack([v_, ts / (2.0 * s1) - 2.0 * sn * w_,
                          flip * (-ts / (2.0 * s1) - 2.0 * cs * w_)], axis=-1)
        d1 = np.stack([s_, 1.0 / (2.0 * s1) - 2.0 * sn * v_,
                       flip * (-1.0 / (2.0 * s1) - 2.0 * cs * v_)], axis=-1)
        d2 = np.stack([c_, -2.0 * sn * s_, flip * (-2.0 * cs * s_)], axis=-1)
        d3 = np.stack([sg4 * s_, -2.0 * sn * c_, flip * (-2.0 * cs * c_)], axis=-1)
        return gamma, d1, d2, d3

    ts = np.linspace(interval[0], interval[1], n)

    def build(flip: float, label: str) -> NullCurve:
        gamma, d1, d2, d3 = jets(ts, flip)
        return NullCurve(ts=ts, gamma=gamma, d1=d1, d2=d2, d3=d3,
                         jets=lambda t, f=flip: jets(t, f),
                         parametrization="pseudo-arclength",
                         name=f"deform-null@{theta:.6g}{label}")

    return build(1.0, ""), build(-1.0, "*")


# ---------------------------------------------------------------------------
# frame export
# ---------------------------------------------------------------------------

def export_frames(name: str, thetas: Sequence[float], outdir: str,
                  nx: int = 33, ny: int = 33) -> str:
    """Write an indexed directory of OBJ/CSV frames plus a manifest JSON."""
    from .meshout import write_csv, write_obj

    os.makedirs(outdir, exist_ok=True)
    frames = []
    for k, theta in enumerate(thetas):
        grid = family_surface(name, float(theta), nx, ny)
        obj_name = f"frame_{k:04d}.obj"
        csv_name = f"frame_{k:04d}.csv"
        write_obj(os.path.join(outdir, obj_name), grid)
        write_csv(os.path.join(outdir, csv_name), grid)
        frames.append({"theta": float(theta),
                       "files": {"obj": obj_name, "csv": csv_name}})
    manifest = os.path.join(outdir, "manifest.json")
    with open(manifest, "w") as fh:
        json.dump({"branch": name, "frames": frames}, fh, indent=1)
        fh.write("\n")
    return manifest
