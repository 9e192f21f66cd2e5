"""Closed-form library of the classified timelike minimal surfaces.

Each catalog class carries four synchronized descriptions:

* generating data ``(h, eta)`` with analytic null-component derivatives,
* the exact conformal factor ``rho(x, y)`` and its partial derivatives,
* the conformal-solution record (case id plus the constants ``c, d`` or the
  boost angle ``phi``) whose profile functions ``f, g`` reproduce ``rho``,
* the coordinate shift aligning the data chart with the solution chart.

The profile functions are built from the entire kernels in
:mod:`minlab.entire`, so oscillatory (``c < d``) and hyperbolic (``c > d``)
regimes share one real-analytic formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .entire import ec, es
from .errors import Degenerate, NotApplicable, ParamRange, SingularPoint
from .paracomplex import J, ONE, ParaComplex, pexp
from .wrep import DataParts, SurfaceGrid, Vec21, WeierstrassData, minkowski_dot

__all__ = [
    "CLASS_TAGS",
    "SurfaceClass",
    "surface_class",
    "parse_class",
    "ConformalSolution",
    "conformal_solution",
    "weierstrass_data",
    "RhoForms",
    "rho_forms",
    "rho_from_data",
    "solution_record",
    "chart_shift",
    "kappa_expected",
    "axial_directions",
    "axial_direction_fields",
]


CLASS_TAGS = (
    "P", "C_T", "B_Tper", "E", "B_T1", "C_S1", "B_L1",
    "B_S", "C_S2", "B_L2", "B_T2", "C_L", "C_L_assoc",
)

_DEFAULT_PARAMS: Dict[str, Dict[str, float]] = {
    "B_Tper": {"c1t": 2.0},
    "B_T1": {"c2": 2.0},
    "B_S": {"c2": 0.5},
    "B_T2": {"c4": 1.0},
    "C_L_assoc": {"phi": 0.5},
}


@dataclass(frozen=True)
class SurfaceClass:
    """A catalog tag plus its validated real parameters."""

    tag: str
    params: Tuple[Tuple[str, float], ...] = ()

    def param(self, name: str) -> float:
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(name)

    def label(self) -> str:
        if not self.params:
            return self.tag
        inner = ",".join(f"{k}={v:g}" for k, v in self.params)
        return f"{self.tag}{{{inner}}}"


def surface_class(tag: str, **params: float) -> SurfaceClass:
    """Construct and validate a catalog class; missing params use defaults."""
    if tag not in CLASS_TAGS:
        raise ParamRange(f"unknown class tag {tag!r}; expected one of {CLASS_TAGS}")
    merged = dict(_DEFAULT_PARAMS.get(tag, {}))
    for key, value in params.items():
        if key not in merged:
            raise ParamRange(f"class {tag} takes no parameter {key!r}")
        merged[key] = float(value)
    _validate(tag, merged)
    return SurfaceClass(tag, tuple(sorted(merged.items())))


def parse_class(text: str) -> SurfaceClass:
    """Parse a CLI-style label such as ``B_T1{c2=2}`` or plain ``C_T``."""
    text = text.strip()
    if "{" in text:
        if not text.endswith("}"):
            raise ParamRange(f"malformed class label {text!r}")
        tag, inner = text[:-1].split("{", 1)
        params = {}
        for item in inner.split(","):
            if not item:
                continue
            if "=" not in item:
                raise ParamRange(f"malformed parameter {item!r} in {text!r}")
            key, value = item.split("=", 1)
            params[key.strip()] = float(value)
        return surface_class(tag.strip(), **params)
    return surface_class(text)


def _validate(tag: str, p: Dict[str, float]) -> None:
    if tag == "B_Tper" and not p["c1t"] > 1.0:
        raise ParamRange("B_Tper requires c1t > 1")
    if tag == "B_T1" and not p["c2"] > 1.0:
        raise ParamRange("B_T1 requires c2 > 1")
    if tag == "B_S" and not 0.0 < p["c2"] < 1.0:
        raise ParamRange("B_S requires 0 < c2 < 1")
    if tag == "B_T2" and not p["c4"] > 0.0:
        raise ParamRange("B_T2 requires c4 > 0")
    if tag == "C_L_assoc" and not math.isfinite(p["phi"]):
        raise ParamRange("C_L_assoc requires finite phi")


# ---------------------------------------------------------------------------
# conformal solutions: profile functions f, g and the factor rho
# ---------------------------------------------------------------------------

@dataclass
class ConformalSolution:
    """Profiles ``f(x), g(y)`` solving the reduction ODEs, and their rho.

    ``rho = (f^2 - g^2 + 1)/(f' - g')`` for the four generic cases;
    the boost case stores constants and ``rho = sinh(phi) x - cosh(phi) y``.
    """

    case: str
    c: float
    d: float
    phi: Optional[float]
    f: Callable
    f1: Callable
    g: Callable
    g1: Callable

    @property
    def sigma(self) -> float:
        return self.c - self.d

    def rho(self, x, y):
        if self.case == "2":
            return math.sinh(self.phi) * np.asarray(x) - math.cosh(self.phi) * np.asarray(y)
        return (self.f(x) ** 2 - self.g(y) ** 2 + 1.0) / (self.f1(x) - self.g1(y))


def conformal_solution(case: str, params: Dict[str, float]) -> ConformalSolution:
    """Closed-form solution of the profile ODE system for one case id."""
    if case == "2":
        phi = float(params["phi"])
        if not math.isfinite(phi):
            raise ParamRange("case 2 requires finite phi")
        sh, ch = math.sinh(phi), math.cosh(phi)
        return ConformalSolution(
            case, 0.0, 0.0, phi,
            f=lambda x: np.full_like(np.asarray(x, dtype=float), sh),
            f1=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
            g=lambda y: np.full_like(np.asarray(y, dtype=float), -ch),
            g1=lambda y: np.zeros_like(np.asarray(y, dtype=float)),
        )

    c, d = float(params["c"]), float(params["d"])
    s = c - d
    if case == "1a":
        if c < 0 or d < 0 or (c == 0 and d == 0):
            raise ParamRange("case 1a requires c, d >= 0 with c^2 + d^2 != 0")
        rc, rd = math.sqrt(c), math.sqrt(d)
        return ConformalSolution(
            case, c, d, None,
            f=lambda x: rc * es(s, x), f1=lambda x: rc * ec(s, x),
            g=lambda y: -rd * es(s, y), g1=lambda y: -rd * ec(s, y),
        )
    if case == "1b":
        if c < 0 or (c == 0 and d == 0):
            raise ParamRange("case 1b requires c >= 0 with c^2 + d^2 != 0")
        rc = math.sqrt(c)
        return ConformalSolution(
            case, c, d, None,
            f=lambda x: rc * es(s, x), f1=lambda x: rc * ec(s, x),
            g=lambda y: -ec(s, y) - rc * es(s, y),
            g1=lambda y: -s * es(s, y) - rc * ec(s, y),
        )
    if case == "1c":
        if c < 0 or not d < 2 * c:
            raise ParamRange("case 1c requires c >= 0 and d < 2c")
        rc, r2 = math.sqrt(c), math.sqrt(2 * c - d)
        return ConformalSolution(
            case, c, d, None,
            f=lambda x: ec(s, x) + r2 * es(s, x),
            f1=lambda x: s * es(s, x) + r2 * ec(s, x),
            g=lambda y: -ec(s, y) - rc * es(s, y),
            g1=lambda y: -s * es(s, y) - rc * ec(s, y),
        )
    if case == "1d":
        if not d < c < 0:
            raise ParamRange("case 1d requires d < c < 0")
        a = math.sqrt(c / (d - c))
        b = math.sqrt(d / (d - c))
        return ConformalSolution(
            case, c, d, None,
            f=lambda x: a * ec(s, x), f1=lambda x: a * s * es(s, x),
            g=lambda y: -b * ec(s, y), g1=lambda y: -b * s * es(s, y),
        )
    raise ParamRange(f"unknown case id {case!r}")


# ---------------------------------------------------------------------------
# exact conformal factors per class
# ---------------------------------------------------------------------------

@dataclass
class RhoForms:
    """Exact conformal factor of a catalog class with partial derivatives."""

    rho: Callable
    rho_x: Callable
    rho_y: Callable
    rho_xx: Callable
    rho_yy: Callable


def _rho_forms_tan(scale: float) -> RhoForms:
    # rho = (cosh L cos 2y - sinh L cos 2x)/2 with L = ln(scale)
    L = math.log(scale)
    ch, sh = math.cosh(L), math.sinh(L)
    return RhoForms(
        rho=lambda x, y: 0.5 * (ch * np.cos(2 * np.asarray(y)) - sh * np.cos(2 * np.asarray(x))),
        rho_x=lambda x, y: sh * np.sin(2 * np.asarray(x)) * np.ones_like(np.asarray(y, dtype=float)),
        rho_y=lambda x, y: -ch * np.sin(2 * np.asarray(y)) * np.ones_like(np.asarray(x, dtype=float)),
        rho_xx=lambda x, y: 2 * sh * np.cos(2 * np.asarray(x)) * np.ones_like(np.asarray(y, dtype=float)),
        rho_yy=lambda x, y: -2 * ch * np.cos(2 * np.asarray(y)) * np.ones_like(np.asarray(x, dtype=float)),
    )


def _rho_forms_exp_family(a: float, b: float) -> RhoForms:
    # rho = a e^{-y} + b sinh x - e^{y}/2   (wData-type families)
    return RhoForms(
        rho=lambda x, y: a * np.exp(-np.asarray(y)) + b * np.sinh(np.asarray(x)) - 0.5 * np.exp(np.asarray(y)),
        rho_x=lambda x, y: b * np.cosh(np.asarray(x)) * np.ones_like(np.asarray(y, dtype=float)),
        rho_y=lambda x, y: -a * np.exp(-np.asarray(y)) - 0.5 * np.exp(np.asarray(y)) * np.ones_like(np.asarray(x, dtype=float)),
        rho_xx=lambda x, y: b * np.sinh(np.asarray(x)) * np.ones_like(np.asarray(y, dtype=float)),
        rho_yy=lambda x, y: a * np.exp(-np.asarray(y)) - 0.5 * np.exp(np.asarray(y)) * np.ones_like(np.asarray(x, dtype=float)),
    )


def _rho_forms_wdata(c2: float) -> RhoForms:
    # rho = (1-c2^2)/2 e^{-y} + c2 cosh x - e^y / 2
    a = 0.5 * (1.0 - c2 * c2)
    return RhoForms(
        rho=lambda x, y: a * np.exp(-np.asarray(y)) + c2 * np.cosh(np.asarray(x)) - 0.5 * np.exp(np.asarray(y)),
        rho_x=lambda x, y: c2 * np.sinh(np.asarray(x)) * np.ones_like(np.asarray(y, dtype=float)),
        rho_y=lambda x, y: -a * np.exp(-np.asarray(y)) - 0.5 * np.exp(np.asarray(y)) * np.ones_like(np.asarray(x, dtype=float)),
        rho_xx=lambda x, y: c2 * np.cosh(np.asarray(x)) * np.ones_like(np.asarray(y, dtype=float)),
        rho_yy=lambda x, y: a * np.exp(-np.asarray(y)) - 0.5 * np.exp(np.asarray(y)) * np.ones_like(np.asarray(x, dtype=float)),
    )


def _const_forms(fx, fy) -> RhoForms:
    # affine rho = fx * x + fy * y
    return RhoForms(
        rho=lambda x, y: fx * np.asarray(x, dtype=float) + fy * np.asarray(y, dtype=float),
        rho_x=lambda x, y: np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, fx),
        rho_y=lambda x, y: np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, fy),
        rho_xx=lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape),
        rho_yy=lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape),
    )


# ---------------------------------------------------------------------------
# generating data per class (analytic null-component parts throughout)
# ---------------------------------------------------------------------------

def _tan_reduced(z: ParaComplex) -> ParaComplex:
    """Componentwise tangent without the principal-strip restriction.

    The public strip-checked tangent serves callers who need the honest
    domain; catalog evaluation extends periodically because the closed
    forms do.
    """
    u, v = z.null
    return ParaComplex.from_null(math.tan(u), math.tan(v))


def _tan_parts(scale: float, eta_scale: float) -> DataParts:
    s, es_ = scale, eta_scale
    sec2 = lambda t: 1.0 / np.cos(t) ** 2
    return DataParts(
        hp=lambda t: s * np.tan(t), hm=lambda t: s * np.tan(t),
        ep=lambda t: es_ * np.cos(t) ** 2, em=lambda t: es_ * np.cos(t) ** 2,
        hp1=lambda t: s * sec2(t), hm1=lambda t: s * sec2(t),
        ep1=lambda t: -es_ * np.sin(2 * t), em1=lambda t: -es_ * np.sin(2 * t),
        hp2=lambda t: 2 * s * sec2(t) * np.tan(t), hm2=lambda t: 2 * s * sec2(t) * np.tan(t),
        ep2=lambda t: -2 * es_ * np.cos(2 * t), em2=lambda t: -2 * es_ * np.cos(2 * t),
    )


def _wdata_parts(c2: float) -> DataParts:
    # h = j(e^{jz} - c2), eta = e^{-jz}/2
    return DataParts(
        hp=lambda t: np.exp(t) - c2, hm=lambda t: c2 - np.exp(-t),
        ep=lambda t: 0.5 * np.exp(-t), em=lambda t: 0.5 * np.exp(t),
        hp1=np.exp, hm1=lambda t: np.exp(-t),
        ep1=lambda t: -0.5 * np.exp(-t), em1=lambda t: 0.5 * np.exp(t),
        hp2=np.exp, hm2=lambda t: -np.exp(-t),
        ep2=lambda t: 0.5 * np.exp(-t), em2=lambda t: 0.5 * np.exp(t),
    )


def _bt2_parts(c4: float) -> DataParts:
    # h = j e^{jz} + c4, eta = e^{-jz}/2
    return DataParts(
        hp=lambda t: np.exp(t) + c4, hm=lambda t: c4 - np.exp(-t),
        ep=lambda t: 0.5 * np.exp(-t), em=lambda t: 0.5 * np.exp(t),
        hp1=np.exp, hm1=lambda t: np.exp(-t),
        ep1=lambda t: -0.5 * np.exp(-t), em1=lambda t: 0.5 * np.exp(t),
        hp2=np.exp, hm2=lambda t: -np.exp(-t),
        ep2=lambda t: 0.5 * np.exp(-t), em2=lambda t: 0.5 * np.exp(t),
    )


def _exp_parts(shift: float) -> DataParts:
    # h = e^z + j*shift ... only shift in {0, 1} is used (C_S1, B_L2)
    return DataParts(
        hp=lambda t: np.exp(t) + shift, hm=lambda t: np.exp(t) - shift,
        ep=lambda t: 0.5 * np.exp(-t), em=lambda t: 0.5 * np.exp(-t),
        hp1=np.exp, hm1=np.exp,
        ep1=lambda t: -0.5 * np.exp(-t), em1=lambda t: -0.5 * np.exp(-t),
        hp2=np.exp, hm2=np.exp,
        ep2=lambda t: 0.5 * np.exp(-t), em2=lambda t: 0.5 * np.exp(-t),
    )


def _cl_parts() -> DataParts:
    # h = (z+j)/(1-jz): components (u+1)/(1-u), (v-1)/(1+v)
    # eta = (jz-1)^2/4: components (u-1)^2/4, (v+1)^2/4
    return DataParts(
        hp=lambda t: (t + 1.0) / (1.0 - t), hm=lambda t: (t - 1.0) / (1.0 + t),
        ep=lambda t: 0.25 * (t - 1.0) ** 2, em=lambda t: 0.25 * (t + 1.0) ** 2,
        hp1=lambda t: 2.0 / (1.0 - t) ** 2, hm1=lambda t: 2.0 / (1.0 + t) ** 2,
        ep1=lambda t: 0.5 * (t - 1.0), em1=lambda t: 0.5 * (t + 1.0),
        hp2=lambda t: 4.0 / (1.0 - t) ** 3, hm2=lambda t: -4.0 / (1.0 + t) ** 3,
        ep2=lambda t: np.full_like(np.asarray(t, dtype=float), 0.5),
        em2=lambda t: np.full_like(np.asarray(t, dtype=float), 0.5),
    )


def _cl_assoc_parts(phi: float) -> DataParts:
    """Boost-reparametrized lightlike-axis data.

    The associate member ``(h, e^{2j phi} eta)`` is pulled back along
    ``z -> e^{-j phi} z``, which restores the ``q = -1/2`` normalization:
    the plus components contract by ``e^{-phi}``, the minus components
    expand by ``e^{phi}``, and ``eta`` picks up the Jacobian factor.
    """
    base = _cl_parts()
    em_, ep_ = math.exp(-phi), math.exp(phi)

    def scale_arg(fn, s, pre=1.0):
        return lambda t: pre * fn(s * np.asarray(t, dtype=float))

    return DataParts(
        hp=scale_arg(base.hp, em_),
        hm=scale_arg(base.hm, ep_),
        ep=scale_arg(base.ep, em_, pre=ep_),
        em=scale_arg(base.em, ep_, pre=em_),
        hp1=scale_arg(base.hp1, em_, pre=em_),
        hm1=scale_arg(base.hm1, ep_, pre=ep_),
        ep1=scale_arg(base.ep1, em_),
        em1=scale_arg(base.em1, ep_),
        hp2=scale_arg(base.hp2, em_, pre=em_ * em_),
        hm2=scale_arg(base.hm2, ep_, pre=ep_ * ep_),
        ep2=scale_arg(base.ep2, em_, pre=em_),
        em2=scale_arg(base.em2, ep_, pre=ep_),
    )


def _scalar_wdata(c2: float):
    h = lambda z: J * (pexp(J * z) - c2)
    eta = lambda z: pexp(-1.0 * (J * z)) * 0.5
    return h, eta


def _scalar_cl():
    h = lambda z: (z + J) / (1.0 - J * z)
    eta = lambda z: (J * z - 1.0) * (J * z - 1.0) * 0.25
    return h, eta


def _scalar_cl_assoc(phi: float):
    h5, eta5 = _scalar_cl()
    boost = ParaComplex(math.cosh(phi), -math.sinh(phi))   # e^{-j phi}
    unboost = ParaComplex(math.cosh(phi), math.sinh(phi))  # e^{+j phi}
    h = lambda z: h5(boost * z)
    eta = lambda z: unboost * eta5(boost * z)
    return h, eta


# ---------------------------------------------------------------------------
# the registry
# ---------------------------------------------------------------------------

@dataclass
class _ClassRecord:
    build: Callable[[Dict[str, float]], WeierstrassData]
    forms: Callable[[Dict[str, float]], RhoForms]
    solution: Callable[[Dict[str, float]], Tuple[str, Dict[str, float]]]
    shift: Callable[[Dict[str, float]], Tuple[float, float]]
    has_v1: Callable[[Dict[str, float]], bool]
    has_v2: Callable[[Dict[str, float]], bool]


def _square_domain(half: float):
    return (-half, half, -half, half)


def _make_registry() -> Dict[str, _ClassRecord]:
    reg: Dict[str, _ClassRecord] = {}

    reg["P"] = _ClassRecord(
        build=lambda p: WeierstrassData(
            h=lambda z: ParaComplex(0.0, 0.0), eta=lambda z: ONE,
            domain=_square_domain(1.0), basepoint=(0.0, 0.0),
            parts=DataParts(
                hp=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                hm=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                ep=lambda t: np.ones_like(np.asarray(t, dtype=float)),
                em=lambda t: np.ones_like(np.asarray(t, dtype=float)),
                hp1=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                hm1=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                ep1=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                em1=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                hp2=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                hm2=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                ep2=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                em2=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            ),
            name="P",
        ),
        forms=lambda p: RhoForms(
            rho=lambda x, y: np.ones(np.broadcast(np.asarray(x), np.asarray(y)).shape),
            rho_x=lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape),
            rho_y=lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape),
            rho_xx=lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape),
            rho_yy=lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape),
        ),
        solution=lambda p: ("none", {}),
        shift=lambda p: (0.0, 0.0),
        has_v1=lambda p: False, has_v2=lambda p: False,
    )

    def tan_data(p, scale):
        s = scale
        eta_s = 0.5 / s

        def h(z):
            return _tan_reduced(z) * s

        def eta(z):
            u, v = z.null
            return ParaComplex.from_null(eta_s * math.cos(u) ** 2, eta_s * math.cos(v) ** 2)

        return WeierstrassData(
            h=h, eta=eta, domain=_square_domain(0.6), basepoint=(0.0, 0.0),
            parts=_tan_parts(s, eta_s),
            name="C_T" if s == 1.0 else f"B_Tper{{c1t={s:g}}}",
        )

    reg["C_T"] = _ClassRecord(
        build=lambda p: tan_data(p, 1.0),
        forms=lambda p: _rho_forms_tan(1.0),
        solution=lambda p: ("1a", {"c": 0.0, "d": 4.0}),
        shift=lambda p: (0.0, 0.0),
        has_v1=lambda p: False, has_v2=lambda p: True,
    )

    reg["B_Tper"] = _ClassRecord(
        build=lambda p: tan_data(p, p["c1t"]),
        forms=lambda p: _rho_forms_tan(p["c1t"]),
        solution=lambda p: ("1a", {
            "c": 4.0 * math.sinh(math.log(p["c1t"])) ** 2,
            "d": 4.0 * math.cosh(math.log(p["c1t"])) ** 2,
        }),
        shift=lambda p: (0.0, 0.0),
        has_v1=lambda p: True, has_v2=lambda p: True,
    )

    r2 = math.sqrt(2.0)
    reg["E"] = _ClassRecord(
        build=lambda p: WeierstrassData(
            h=lambda z: z * r2, eta=lambda z: ParaComplex(1.0 / (2.0 * r2), 0.0),
            domain=_square_domain(1.0), basepoint=(0.0, 0.0),
            parts=DataParts(
                hp=lambda t: r2 * np.asarray(t, dtype=float),
                hm=lambda t: r2 * np.asarray(t, dtype=float),
                ep=lambda t: np.full_like(np.asarray(t, dtype=float), 1.0 / (2.0 * r2)),
                em=lambda t: np.full_like(np.asarray(t, dtype=float), 1.0 / (2.0 * r2)),
                hp1=lambda t: np.full_like(np.asarray(t, dtype=float), r2),
                hm1=lambda t: np.full_like(np.asarray(t, dtype=float), r2),
                ep1=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                em1=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                hp2=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                hm2=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                ep2=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                em2=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            ),
            name="E",
        ),
        forms=lambda p: RhoForms(
            rho=lambda x, y: (1.0 + 2.0 * (np.asarray(x) ** 2 - np.asarray(y) ** 2)) / (2.0 * r2),
            rho_x=lambda x, y: r2 * np.asarray(x, dtype=float) * np.ones_like(np.asarray(y, dtype=float)),
            rho_y=lambda x, y: -r2 * np.asarray(y, dtype=float) * np.ones_like(np.asarray(x, dtype=float)),
            rho_xx=lambda x, y: np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, r2),
            rho_yy=lambda x, y: np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, -r2),
        ),
        solution=lambda p: ("1a", {"c": 2.0, "d": 2.0}),
        shift=lambda p: (0.0, 0.0),
        has_v1=lambda p: True, has_v2=lambda p: True,
    )

    def wdata_build(c2_of, halfdom=1.3):
        def build(p):
            c2 = c2_of(p)
            h, eta = _scalar_wdata(c2)
            return WeierstrassData(
                h=h, eta=eta, domain=_square_domain(halfdom), basepoint=(0.0, 0.0),
                parts=_wdata_parts(c2), name=f"wdata(c2={c2:g})",
            )
        return build

    def wdata_record(c2_of) -> _ClassRecord:
        return _ClassRecord(
            build=wdata_build(c2_of),
            forms=lambda p: _rho_forms_wdata(c2_of(p)),
            solution=lambda p: ("1b", {"c": c2_of(p) ** 2, "d": c2_of(p) ** 2 - 1.0}),
            shift=lambda p: (0.0, -math.log(1.0 + c2_of(p))),
            has_v1=lambda p: c2_of(p) != 0.0, has_v2=lambda p: True,
        )

    reg["B_T1"] = wdata_record(lambda p: p["c2"])
    reg["B_L1"] = wdata_record(lambda p: 1.0)
    reg["B_S"] = wdata_record(lambda p: p["c2"])
    reg["C_S2"] = wdata_record(lambda p: 0.0)

    reg["C_S1"] = _ClassRecord(
        build=lambda p: WeierstrassData(
            h=lambda z: pexp(z), eta=lambda z: pexp(-1.0 * z) * 0.5,
            domain=_square_domain(1.3), basepoint=(0.0, 0.0),
            parts=_exp_parts(0.0), name="C_S1",
        ),
        forms=lambda p: RhoForms(
            rho=lambda x, y: np.cosh(np.asarray(x)) * np.ones_like(np.asarray(y, dtype=float)),
            rho_x=lambda x, y: np.sinh(np.asarray(x)) * np.ones_like(np.asarray(y, dtype=float)),
            rho_y=lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape),
            rho_xx=lambda x, y: np.cosh(np.asarray(x)) * np.ones_like(np.asarray(y, dtype=float)),
            rho_yy=lambda x, y: np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape),
        ),
        solution=lambda p: ("1a", {"c": 1.0, "d": 0.0}),
        shift=lambda p: (0.0, 0.0),
        has_v1=lambda p: True, has_v2=lambda p: False,
    )

    reg["B_L2"] = _ClassRecord(
        build=lambda p: WeierstrassData(
            h=lambda z: pexp(z) + J, eta=lambda z: pexp(-1.0 * z) * 0.5,
            domain=_square_domain(1.3), basepoint=(0.0, 0.0),
            parts=_exp_parts(1.0), name="B_L2",
        ),
        forms=lambda p: RhoForms(
            rho=lambda x, y: 0.5 * np.exp(np.asarray(x)) - np.sinh(np.asarray(y)),
            rho_x=lambda x, y: 0.5 * np.exp(np.asarray(x)) * np.ones_like(np.asarray(y, dtype=float)),
            rho_y=lambda x, y: -np.cosh(np.asarray(y)) * np.ones_like(np.asarray(x, dtype=float)),
            rho_xx=lambda x, y: 0.5 * np.exp(np.asarray(x)) * np.ones_like(np.asarray(y, dtype=float)),
            rho_yy=lambda x, y: -np.sinh(np.asarray(y)) * np.ones_like(np.asarray(x, dtype=float)),
        ),
        solution=lambda p: ("1c", {"c": 0.0, "d": -1.0}),
        shift=lambda p: (-math.log(2.0), 0.0),
        has_v1=lambda p: True, has_v2=lambda p: True,
    )

    reg["B_T2"] = _ClassRecord(
        build=lambda p: WeierstrassData(
            h=lambda z: J * pexp(J * z) + p["c4"],
            eta=lambda z: pexp(-1.0 * (J * z)) * 0.5,
            domain=_square_domain(1.3), basepoint=(0.0, 0.0),
            parts=_bt2_parts(p["c4"]), name=f"B_T2{{c4={p['c4']:g}}}",
        ),
        forms=lambda p: _rho_forms_exp_family(0.5 * (1.0 + p["c4"] ** 2), p["c4"]),
        solution=lambda p: ("1d", {"c": -p["c4"] ** 2, "d": -p["c4"] ** 2 - 1.0}),
        shift=lambda p: (0.0, -0.5 * math.log(1.0 + p["c4"] ** 2)),
        has_v1=lambda p: True, has_v2=lambda p: True,
    )

    def cl_build(p):
        h, eta = _scalar_cl()
        return WeierstrassData(
            h=h, eta=eta, domain=_square_domain(0.45), basepoint=(0.0, 0.0),
            parts=_cl_parts(), name="C_L",
        )

    reg["C_L"] = _ClassRecord(
        build=cl_build,
        forms=lambda p: _const_forms(0.0, -1.0),
        solution=lambda p: ("2", {"phi": 0.0}),
        shift=lambda p: (0.0, 0.0),
        has_v1=lambda p: False, has_v2=lambda p: True,
    )

    def cl_assoc_build(p):
        phi = p["phi"]
        h, eta = _scalar_cl_assoc(phi)
        half = 0.45 * math.exp(-abs(phi))
        return WeierstrassData(
            h=h, eta=eta, domain=_square_domain(half), basepoint=(0.0, 0.0),
            parts=_cl_assoc_parts(phi), name=f"C_L_assoc{{phi={phi:g}}}",
        )

    reg["C_L_assoc"] = _ClassRecord(
        build=cl_assoc_build,
        forms=lambda p: _const_forms(math.sinh(p["phi"]), -math.cosh(p["phi"])),
        solution=lambda p: ("2", {"phi": p["phi"]}),
        shift=lambda p: (0.0, 0.0),
        has_v1=lambda p: p["phi"] != 0.0, has_v2=lambda p: True,
    )

    return reg


_REGISTRY = _make_registry()


def _record(cls: SurfaceClass) -> Tuple[_ClassRecord, Dict[str, float]]:
    rec = _REGISTRY[cls.tag]
    return rec, dict(cls.params)


def weierstrass_data(cls: SurfaceClass) -> WeierstrassData:
    """Generating data of a catalog class with analytic derivative parts."""
    rec, p = _record(cls)
    data = rec.build(p)
    data.name = cls.label()
    return data


def rho_forms(cls: SurfaceClass) -> RhoForms:
    """Exact conformal factor and partial derivatives in the data chart."""
    rec, p = _record(cls)
    return rec.forms(p)


def rho_from_data(cls: SurfaceClass, z: ParaComplex) -> float:
    """Signed conformal factor ``(1 + |h|^2)|eta|`` evaluated from the data."""
    data = weierstrass_data(cls)
    u, v = z.null
    return float(data.rho(np.asarray(u, dtype=float), np.asarray(v, dtype=float)))


def solution_record(cls: SurfaceClass) -> Tuple[str, Dict[str, float]]:
    """Conformal-solution case id and constants for a class.

    Cases "1a"–"1d" carry ``{"c", "d"}``; case "2" carries ``{"phi"}``;
    the plane reports case "none" (no nondegenerate profile system).
    """
    rec, p = _record(cls)
    return rec.solution(p)


def chart_shift(cls: SurfaceClass) -> Tuple[float, float]:
    """Shift with ``rho_data(x, y) = rho_solution(x + dx, y + dy)``."""
    rec, p = _record(cls)
    return rec.shift(p)


def kappa_expected(cls: SurfaceClass) -> float:
    """Lightlike curvature d - c of the generating null curves."""
    case, sol = solution_record(cls)
    if case == "none":
        raise Degenerate("the plane has no nondegenerate generating pair")
    if case == "2":
        return 0.0
    return sol["d"] - sol["c"]


def class_solution(cls: SurfaceClass) -> ConformalSolution:
    """The conformal solution whose rho matches the class after chart_shift."""
    case, sol = solution_record(cls)
    if case == "none":
        raise Degenerate("the plane is not generated by a profile pair")
    return conformal_solution(case, sol)


# ---------------------------------------------------------------------------
# axial directions
# ---------------------------------------------------------------------------

def axial_direction_fields(grid: SurfaceGrid, cls: SurfaceClass,
                           band: float = 1e-3):
    """Per-sample axial direction candidates ``(V1, V2, mask)``.

    Both arrays have shape (nx, ny, 3); entries are meaningful only where
    ``mask`` is true (away from the singular set).
    """
    forms = rho_forms(cls)
    X = grid.xs[:, None] * np.ones_like(grid.ys)[None, :]
    Y = np.ones_like(grid.xs)[:, None] * grid.ys[None, :]
    rho = forms.rho(X, Y)
    rx, ry = forms.rho_x(X, Y), forms.rho_y(X, Y)
    rxx, ryy = forms.rho_xx(X, Y), forms.rho_yy(X, Y)

    p = grid.data.parts
    U, V = X + Y, X - Y
    hp, hm = p.hp(U), p.hm(V)
    s = hp * hm
    denom = 1.0 + s
    scale = float(np.max(np.abs(rho))) or 1.0
    mask = (np.abs(rho) >= band * scale) & (np.abs(denom) >= 1e-12)
    safe = np.where(mask, denom, 1.0)
    N = np.stack([(s - 1.0) / safe, 2.0 * 0.5 * (hp + hm) / safe,
                  2.0 * 0.5 * (hp - hm) / safe], axis=-1)

    r = np.where(mask, rho, 1.0)
    V1 = (-(rx / r)[..., None] * N
          - ((rxx * r - rx * rx) / (r * r))[..., None] * grid.Fx
          + ((rx * ry) / (r * r))[..., None] * grid.Fy)
    V2 = ((ry / r)[..., None] * N
          - ((rx * ry) / (r * r))[..., None] * grid.Fx
          + ((ryy * r - ry * ry) / (r * r))[..., None] * grid.Fy)
    return V1, V2, mask


def axial_directions(grid: SurfaceGrid, cls: SurfaceClass,
                     band: float = 1e-3) -> Tuple[Optional[Vec21], Optional[Vec21]]:
    """Constant axial vectors ``(v1, v2)`` of a catalog class.

    Entries are ``None`` where the corresponding profile function vanishes
    identically (the direction does not exist); raises
    :class:`NotApplicable` if neither exists (the plane).
    """
    rec, p = _record(cls)
    want1, want2 = rec.has_v1(p), rec.has_v2(p)
    if not (want1 or want2):
        raise NotApplicable(f"{cls.label()} has no axial directions")
    V1, V2, mask = axial_direction_fields(grid, cls, band)
    if not np.any(mask):
        raise SingularPoint("no nonsingular samples on the grid")

    def average(Vfield):
        vals = Vfield[mask]
        return Vec21.from_array(vals.mean(axis=0))

    return (average(V1) if want1 else None, average(V2) if want2 else None)
