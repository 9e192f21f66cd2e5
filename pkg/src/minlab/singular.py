"""Singular sets of the represented surfaces and their classification.

The singular set is the level set ``sq_norm(h) = -1`` (equivalently
``rho = 0``).  Points on it are classified through the paracomplex invariant
``psi = h_z / (h^2 eta)`` and the follow-up quantity
``Psi = (h / h_z) psi_z``: a point is a cuspidal edge iff both parts of
``psi`` are nonzero, and a swallowtail iff ``psi`` is real nonzero with
``Re Psi != 0``.  Strict inequalities are resolved with an honest tolerance
band: magnitudes inside ``[eps, 10 eps]`` report as "unresolved".
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .catalog import SurfaceClass, surface_class, weierstrass_data
from .errors import CriterionUndefined, ParamRange
from .paracomplex import ParaComplex
from .wrep import WeierstrassData, evaluate_points

__all__ = [
    "SingularPointClass",
    "SingularCurve",
    "singular_set",
    "classify",
    "classify_curve",
    "swallowtail_table",
    "expected_swallowtails",
    "export_singular_csv",
    "export_swallowtails_json",
    "lightlike_line_probe",
]

_TABLE_FAMILIES = ("B_Tper", "B_T1", "B_L1", "B_S", "B_T2", "B_L2")


@dataclass
class SingularPointClass:
    """Classification record for one singular point."""

    location: Tuple[float, float]
    kind: str                      # cuspidal_edge | swallowtail | unresolved
    psi: ParaComplex
    Psi_re: float


@dataclass
class SingularCurve:
    """A refined polyline on the singular set, with marked swallowtails."""

    points: np.ndarray                                   # (n, 2) of (x, y)
    swallowtails: List[SingularPointClass] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)


# ---------------------------------------------------------------------------
# level-set quantities from the data parts
# ---------------------------------------------------------------------------

def _level(data: WeierstrassData, xs, ys):
    """g = sq_norm(h) + 1 and its gradient at (xs, ys)."""
    p = data.parts
    u, v = xs + ys, xs - ys
    hp, hm = p.hp(u), p.hm(v)
    hp1, hm1 = p.hp1(u), p.hm1(v)
    g = 1.0 + hp * hm
    gu, gv = hp1 * hm, hp * hm1
    return g, gu + gv, gu - gv


def _psi_fields(data: WeierstrassData, u, v):
    """Null components of psi and of its paraholomorphic derivative."""
    p = data.parts
    hp, hm = p.hp(u), p.hm(v)
    hp1, hm1 = p.hp1(u), p.hm1(v)
    hp2, hm2 = p.hp2(u), p.hm2(v)
    ep, em = p.ep(u), p.em(v)
    ep1, em1 = p.ep1(u), p.em1(v)
    Ap = hp ** 2 * ep
    Am = hm ** 2 * em
    with np.errstate(divide="ignore", invalid="ignore"):
        psi_p = hp1 / Ap
        psi_m = hm1 / Am
        Ap1 = 2.0 * hp * hp1 * ep + hp ** 2 * ep1
        Am1 = 2.0 * hm * hm1 * em + hm ** 2 * em1
        psi_p1 = (hp2 * Ap - hp1 * Ap1) / Ap ** 2
        psi_m1 = (hm2 * Am - hm1 * Am1) / Am ** 2
    return psi_p, psi_m, psi_p1, psi_m1


# ---------------------------------------------------------------------------
# singular set extraction
# ---------------------------------------------------------------------------

def singular_set(data: WeierstrassData, domain: Optional[Sequence[float]] = None,
                 n: int = 401, refine_tol: float = 1e-8) -> List[SingularCurve]:
    """Polylines of the level set ``sq_norm(h) = -1`` inside a rectangle.

    Marching squares proposes cells, then each vertex is Newton-refined
    along the level-set gradient until ``|sq_norm(h) + 1| < refine_tol``;
    vertices that fail to converge (e.g. spurious crossings at poles of the
    data) are dropped and the polyline is split there.
    """
    from skimage.measure import find_contours

    x0, x1, y0, y1 = data.domain if domain is None else tuple(map(float, domain))
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    G, _, _ = _level(data, xs[:, None], ys[None, :])
    G = np.where(np.isfinite(G), G, np.nan)
    cell = max((x1 - x0), (y1 - y0)) / (n - 1)

    curves: List[SingularCurve] = []
    for contour in find_contours(G, 0.0):
        cx = x0 + contour[:, 0] * (x1 - x0) / (n - 1)
        cy = y0 + contour[:, 1] * (y1 - y0) / (n - 1)
        cx, cy, ok = _refine_on_set(data, cx, cy, refine_tol)
        curves.extend(_split_runs(cx, cy, ok, cell))
    return curves


def _refine_on_set(data: WeierstrassData, xs: np.ndarray, ys: np.ndarray,
                   tol: float, iters: int = 12):
    xs, ys = xs.copy(), ys.copy()
    for _ in range(iters):
        g, gx, gy = _level(data, xs, ys)
        n2 = gx ** 2 + gy ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            step = g / n2
        step = np.where(np.isfinite(step), step, 0.0)
        xs = xs - step * gx
        ys = ys - step * gy
    g, _, _ = _level(data, xs, ys)
    ok = np.isfinite(g) & (np.abs(g) < tol)
    return xs, ys, ok


def _split_runs(xs: np.ndarray, ys: np.ndarray, ok: np.ndarray,
                cell: float) -> List[SingularCurve]:
    """Split a refined contour into convergent runs without large gaps."""
    curves: List[SingularCurve] = []
    run: List[Tuple[float, float]] = []
    prev = None
    for x, y, good in zip(xs, ys, ok):
        jump = prev is not None and math.hypot(x - prev[0], y - prev[1]) > 4.0 * cell
        if not good or jump:
            if len(run) >= 2:
                curves.append(SingularCurve(points=np.array(run)))
            run = [] if not good else [(x, y)]
            prev = None if not good else (x, y)
            continue
        run.append((x, y))
        prev = (x, y)
    if len(run) >= 2:
        curves.append(SingularCurve(points=np.array(run)))
    return curves


# ---------------------------------------------------------------------------
# pointwise classification
# ---------------------------------------------------------------------------

def classify(data: WeierstrassData, point: Tuple[float, float],
             eps: float = 1e-6) -> SingularPointClass:
    """Classify one singular point by the cuspidal-edge/swallowtail criteria."""
    x, y = float(point[0]), float(point[1])
    u, v = np.asarray(x + y), np.asarray(x - y)
    p = data.parts
    hp, hm = float(p.hp(u)), float(p.hm(v))
    hp1, hm1 = float(p.hp1(u)), float(p.hm1(v))
    ep, em = float(p.ep(u)), float(p.em(v))
    scale = max(abs(hp), abs(hm), 1.0) ** 2 * max(abs(ep), abs(em), 1.0)
    if abs(hp ** 2 * ep) < 1e-14 * scale or abs(hm ** 2 * em) < 1e-14 * scale:
        raise CriterionUndefined("h^2 eta vanishes; psi undefined")
    if abs(hp1) < 1e-14 or abs(hm1) < 1e-14:
        raise CriterionUndefined("h_z vanishes; criteria undefined")

    psi_p, psi_m, psi_p1, psi_m1 = (float(t) for t in _psi_fields(data, u, v))
    psi = ParaComplex.from_null(psi_p, psi_m)
    re_psi, im_psi = 0.5 * (psi_p + psi_m), 0.5 * (psi_p - psi_m)
    Psi_re = 0.5 * (hp / hp1 * psi_p1 + hm / hm1 * psi_m1)

    if abs(im_psi) < eps:
        # swallowtail branch: psi must be real nonzero with Re Psi nonzero
        if abs(re_psi) > eps and abs(Psi_re) > eps:
            kind = "swallowtail"
        else:
            kind = "unresolved"
    elif abs(im_psi) < 10.0 * eps or abs(re_psi) < 10.0 * eps:
        kind = "unresolved"
    else:
        kind = "cuspidal_edge"
    return SingularPointClass(location=(x, y), kind=kind, psi=psi,
                              Psi_re=Psi_re)


def classify_curve(data: WeierstrassData, curve: SingularCurve,
                   eps: float = 1e-6) -> List[SingularPointClass]:
    """Classify every polyline vertex of a singular curve."""
    return [classify(data, (x, y), eps) for x, y in curve.points]


# ---------------------------------------------------------------------------
# swallowtail detection and the closed-form table
# ---------------------------------------------------------------------------

_DEFAULT_WINDOWS: Dict[str, Tuple[float, float, float, float]] = {
    "B_Tper": (-math.pi / 4.0, 3.0 * math.pi / 4.0, -1.45, 1.45),
}


def swallowtail_table(tag: str, params: Optional[Dict[str, float]] = None, *,
                      window: Optional[Sequence[float]] = None, n: int = 601,
                      eps: float = 1e-6) -> List[Tuple[float, float]]:
    """All swallowtail points detected on a family's singular set.

    Scans the refined singular curves, classifies each vertex, and pins
    every swallowtail candidate with a two-dimensional Newton iteration on
    ``(sq_norm(h) + 1, Im psi) = 0``.  Only the six families with singular
    sets in the classification table are accepted.
    """
    if tag not in _TABLE_FAMILIES:
        raise ParamRange(f"{tag!r} is not one of the singular families "
                         f"{_TABLE_FAMILIES}")
    cls = surface_class(tag, **(params or {}))
    data = weierstrass_data(cls)
    win = window if window is not None else _DEFAULT_WINDOWS.get(tag, data.domain)
    return mark_swallowtails(data, singular_set(data, win, n=n), eps,
                             window=win)


def mark_swallowtails(data: WeierstrassData, curves: List[SingularCurve],
                      eps: float = 1e-6,
                      window: Optional[Sequence[float]] = None
                      ) -> List[Tuple[float, float]]:
    """Detect swallowtails on refined singular curves and mark them.

    Every polyline vertex whose ``Im psi`` is inside the detection band is
    pinned with a two-dimensional Newton iteration on
    ``(sq_norm(h) + 1, Im psi) = 0`` and re-classified there; confirmed
    swallowtails are stored on their curve and returned deduplicated.
    """
    found: List[Tuple[float, float]] = []
    for curve in curves:
        hits: List[SingularPointClass] = []
        for x, y in curve.points:
            try:
                rec = classify(data, (x, y), eps)
            except CriterionUndefined:
                continue
            psi_p, psi_m = rec.psi.null
            # coarse gate: only vertices already near the real-psi locus
            gate = 10.0 * eps + 0.2 * (abs(psi_p) + abs(psi_m))
            if abs(0.5 * (psi_p - psi_m)) >= gate:
                continue
            pin = _pin_swallowtail(data, x, y)
            if pin is None:
                continue
            px, py = pin
            if window is not None:
                wx0, wx1, wy0, wy1 = window
                pad = 1e-9 * (1.0 + abs(wx1 - wx0) + abs(wy1 - wy0))
                if not (wx0 - pad <= px <= wx1 + pad
                        and wy0 - pad <= py <= wy1 + pad):
                    continue
            rec2 = classify(data, (px, py), eps)
            if rec2.kind == "swallowtail":
                hits.append(rec2)
                found.append((px, py))
        curve.swallowtails = _dedup_records(hits)
    return _dedup_points(found)


def _pin_swallowtail(data: WeierstrassData, x: float, y: float,
                     iters: int = 20) -> Optional[Tuple[float, float]]:
    for _ in range(iters):
        g, gx, gy = (float(t) for t in _level(data, np.asarray(x), np.asarray(y)))
        u, v = np.asarray(x + y), np.asarray(x - y)
        psi_p, psi_m, psi_p1, psi_m1 = (float(t) for t in _psi_fields(data, u, v))
        im = 0.5 * (psi_p - psi_m)
        ix = 0.5 * (psi_p1 - psi_m1)
        iy = 0.5 * (psi_p1 + psi_m1)
        det = gx * iy - gy * ix
        if not np.isfinite(det) or abs(det) < 1e-14:
            return None
        x -= (g * iy - im * gy) / det
        y -= (gx * im - g * ix) / det
        if abs(g) < 1e-12 and abs(im) < 1e-12:
            return (x, y)
    g, _, _ = _level(data, np.asarray(x), np.asarray(y))
    psi_p, psi_m, _, _ = _psi_fields(data, np.asarray(x + y), np.asarray(x - y))
    if abs(float(g)) < 1e-10 and abs(0.5 * float(psi_p - psi_m)) < 1e-10:
        return (x, y)
    return None


def _dedup_points(points: List[Tuple[float, float]],
                  tol: float = 1e-5) -> List[Tuple[float, float]]:
    out: List[Tuple[float, float]] = []
    for p in sorted(points):
        if all(math.hypot(p[0] - q[0], p[1] - q[1]) > tol for q in out):
            out.append(p)
    return out


def _dedup_records(recs: List[SingularPointClass],
                   tol: float = 1e-5) -> List[SingularPointClass]:
    out: List[SingularPointClass] = []
    for r in sorted(recs, key=lambda r: r.location):
        if all(math.hypot(r.location[0] - q.location[0],
                          r.location[1] - q.location[1]) > tol for q in out):
            out.append(r)
    return out


def expected_swallowtails(tag: str, params: Optional[Dict[str, float]] = None, *,
                          window: Optional[Sequence[float]] = None
                          ) -> List[Tuple[float, float]]:
    """Closed-form swallowtail locations for the six table families.

    The trigonometric family has the four points ``(0, +-atan(1/c)),
    (pi/2, +-atan(c))`` inside one fundamental window; the exponential
    families have ``(0, log(c2 + 1))`` and, when real, ``(0, log(c2 - 1))``;
    the remaining two families have none.
    """
    if tag not in _TABLE_FAMILIES:
        raise ParamRange(f"{tag!r} is not one of the singular families")
    cls = surface_class(tag, **(params or {}))
    pts: List[Tuple[float, float]] = []
    if tag == "B_Tper":
        c = cls.param("c1t")
        pts = [(0.0, math.atan(1.0 / c)), (0.0, -math.atan(1.0 / c)),
               (math.pi / 2.0, math.atan(c)), (math.pi / 2.0, -math.atan(c))]
    elif tag in ("B_T1", "B_L1", "B_S"):
        c2 = 1.0 if tag == "B_L1" else cls.param("c2")
        pts = [(0.0, math.log(c2 + 1.0))]
        if c2 > 1.0:
            pts.append((0.0, math.log(c2 - 1.0)))
    win = window if window is not None else _DEFAULT_WINDOWS.get(
        tag, weierstrass_data(cls).domain)
    x0, x1, y0, y1 = win
    return sorted((x, y) for x, y in pts if x0 <= x <= x1 and y0 <= y <= y1)


# ---------------------------------------------------------------------------
# exports and the lightlike-line probe
# ---------------------------------------------------------------------------

def export_singular_csv(curves: List[SingularCurve], path: str) -> None:
    """CSV polylines, one row per vertex: curve index, x, y."""
    with open(path, "w") as fh:
        fh.write("curve,x,y\n")
        for k, curve in enumerate(curves):
            for x, y in curve.points:
                fh.write(f"{k},{x:.17g},{y:.17g}\n")


def export_swallowtails_json(points: List[Tuple[float, float]], path: str) -> None:
    with open(path, "w") as fh:
        json.dump([{"x": float(x), "y": float(y)} for x, y in points],
                  fh, indent=1)
        fh.write("\n")


def lightlike_line_probe(ytilde: float, xs: Sequence[float],
                         tol: float = 1e-10) -> Tuple[np.ndarray, np.ndarray]:
    """Limit probe for the lightlike-line extension of the B_L2 end.

    Follows the path ``y(x) = asinh(e^x (-x - ytilde))`` on the B_L2
    surface toward ``x -> -infinity``; the surface values converge to the
    lightlike line ``(-ytilde, 0, ytilde)``.  Returns the surface points at
    the requested ``xs`` (aligned to the closed form, which sends the
    origin of coordinates to ``(0, -1/2, 0)``) and the limit vector.
    """
    data = weierstrass_data(surface_class("B_L2"))
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    # densify the quadrature knots so panels stay narrow as e^{-x} grows
    anchors = np.arange(0.0, float(np.min(xs)) - 0.5, -0.5)
    all_x = np.unique(np.concatenate([xs, anchors]))
    all_y = np.arcsinh(np.exp(all_x) * (-all_x - ytilde))
    vals = evaluate_points(data, np.stack([all_x, all_y], axis=-1), tol)
    vals = vals + np.array([0.0, -0.5, 0.0])
    idx = np.searchsorted(all_x, xs)
    return vals[idx], np.array([-ytilde, 0.0, ytilde])
