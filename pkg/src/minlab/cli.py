"""Command-line front end.

Four subcommands cover the package's artifact pipeline:

- ``generate``  — sample a surface and write an OBJ mesh plus a CSV table;
- ``verify``    — run the verification suite and report JSON, exit 0 iff
  every check passes (with ``--conjugate``, iff the conjugate shows the
  predicted pattern: planarity fails while affine-minimality holds);
- ``singular``  — trace the singular set, export polylines and the
  swallowtail list;
- ``deform``    — sweep a deformation branch into an indexed frame
  directory with a manifest.

Exit codes: 0 success, 1 verification failure, 2 usage/config error.
Numeric output is formatted deterministically (17 significant digits in
CSV/OBJ, shortest round-trip decimals in JSON), so identical configs give
byte-identical artifacts.  ``MINLAB_THREADS`` (or ``--threads``) caps the
numeric library thread pools.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2

_TOL_KEYS = ("gauss", "planarity", "hopf", "kappa", "affine")

__all__ = ["JobConfig", "main", "run",
           "cmd_generate", "cmd_verify", "cmd_singular", "cmd_deform"]


# ---------------------------------------------------------------------------
# job configuration
# ---------------------------------------------------------------------------

@dataclass
class JobConfig:
    """One CLI invocation, JSON-serializable without loss."""

    command: str
    surface_class: Optional[str] = None
    params: Dict[str, float] = field(default_factory=dict)
    family: Optional[str] = None
    theta: Optional[float] = None
    nx: int = 50
    ny: int = 50
    domain: Optional[List[float]] = None
    tolerances: Dict[str, float] = field(default_factory=dict)
    perturb: float = 0.0
    conjugate: bool = False
    band: float = 1e-3
    scan_points: int = 401
    window: Optional[List[float]] = None
    branch: Optional[str] = None
    steps: int = 50
    out: Optional[str] = None
    threads: Optional[int] = None

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "JobConfig":
        raw = json.loads(text)
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)

    def tol(self, key: str, default: float) -> float:
        return float(self.tolerances.get(key, default))


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def _parse_params(text: str) -> Dict[str, float]:
    out: Dict[str, float] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = float(value)
    return out


def _parse_rect(text: str) -> List[float]:
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 4:
        raise ValueError(f"expected x0,x1,y0,y1, got {text!r}")
    return vals


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minlab",
        description="Generate, verify, and export timelike minimal surfaces "
                    "with planar curvature lines.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file; explicit flags override")
        p.add_argument("--class", dest="surface_class", metavar="LABEL",
                       help="catalog class label, e.g. E or B_T1{c2=2}")
        p.add_argument("--params", type=_parse_params, metavar="K=V[,K=V]",
                       help="class parameters, e.g. c2=0.5")
        p.add_argument("--family", metavar="NAME",
                       help="deformation branch name (P, S2, CL, S4, BL2)")
        p.add_argument("--theta", type=float, help="deformation parameter")
        p.add_argument("--nx", type=int, help="grid points along x (default 50)")
        p.add_argument("--ny", type=int, help="grid points along y (default 50)")
        p.add_argument("--domain", type=_parse_rect, metavar="X0,X1,Y0,Y1",
                       help="parameter rectangle (default: the data's own)")
        p.add_argument("--out", help="output path or prefix")
        p.add_argument("--threads", type=int,
                       help="cap numeric thread pools (overrides MINLAB_THREADS)")

    g = sub.add_parser("generate", help="write an OBJ mesh and a CSV table")
    common(g)
    g.add_argument("--band", type=float,
                   help="singular-cell exclusion band for faces (default 1e-3)")

    v = sub.add_parser("verify", help="run the verification suite")
    common(v)
    v.add_argument("--perturb", type=float, metavar="EPS",
                   help="negative control: perturb the data by EPS before checks")
    v.add_argument("--conjugate", action="store_const", const=True,
                   help="check the conjugate surface: planarity must fail, "
                        "affine-minimality must hold")
    v.add_argument("--tol", action="append", type=_parse_params, metavar="NAME=TOL",
                   help=f"override a tolerance; names: {', '.join(_TOL_KEYS)}")

    s = sub.add_parser("singular", help="trace singular curves and swallowtails")
    common(s)
    s.add_argument("--window", type=_parse_rect, metavar="X0,X1,Y0,Y1",
                   help="scan window (default: family table window or domain)")
    s.add_argument("--scan-points", dest="scan_points", type=int,
                   help="marching-squares resolution per axis (default 401)")

    d = sub.add_parser("deform", help="export a deformation frame directory")
    common(d)
    d.add_argument("--branch", help="branch to sweep (P, S2, CL, S4, BL2)")
    d.add_argument("--steps", type=int, help="number of frames (default 50)")

    return parser


def _config_from_args(args: argparse.Namespace) -> JobConfig:
    base: Dict[str, object] = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            raw = json.load(fh)
        names = {f.name for f in dataclasses.fields(JobConfig)}
        unknown = set(raw) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        base.update(raw)
    base["command"] = args.command

    tols = dict(base.get("tolerances") or {})
    for chunk in getattr(args, "tol", None) or []:
        for key, val in chunk.items():
            if key not in _TOL_KEYS:
                raise ValueError(f"unknown tolerance {key!r}; "
                                 f"expected one of {_TOL_KEYS}")
            tols[key] = val
    if tols:
        base["tolerances"] = tols

    for f in dataclasses.fields(JobConfig):
        if f.name in ("command", "tolerances"):
            continue
        val = getattr(args, f.name, None)
        if val is not None:
            base[f.name] = val
    return JobConfig(**base)  # type: ignore[arg-type]


def _apply_thread_cap(cfg: JobConfig) -> None:
    n = cfg.threads
    if n is None:
        env = os.environ.get("MINLAB_THREADS")
        if env:
            try:
                n = int(env)
            except ValueError:
                raise ValueError(f"MINLAB_THREADS must be an integer, got {env!r}")
    if n is None:
        return
    if n < 1:
        raise ValueError("thread cap must be a positive integer")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        os.environ.setdefault(var, str(n))
    try:
        import threadpoolctl
        threadpoolctl.threadpool_limits(limits=n)
    except ImportError:
        pass


# ---------------------------------------------------------------------------
# surface resolution
# ---------------------------------------------------------------------------

def _resolve(cfg: JobConfig):
    """Return (label, class-or-None, data, grid_factory) for the config."""
    from .catalog import parse_class, surface_class, weierstrass_data
    from .deform import family_data, family_surface
    from .wrep import integrate

    if (cfg.surface_class is None) == (cfg.family is None):
        raise ValueError("exactly one of --class or --family is required")

    if cfg.surface_class is not None:
        if cfg.params:
            cls = surface_class(parse_class(cfg.surface_class).tag, **cfg.params)
        else:
            cls = parse_class(cfg.surface_class)
        data = weierstrass_data(cls)

        def build(d, nx, ny):
            return integrate(d, nx, ny, domain=tuple(cfg.domain) if cfg.domain else None)

        return cls.label(), cls, data, build

    if cfg.theta is None:
        raise ValueError("--family requires --theta")
    name = cfg.family
    data = family_data(name, cfg.theta)

    def build(d, nx, ny):
        if d is data:
            return family_surface(name, cfg.theta, nx, ny,
                                  domain=tuple(cfg.domain) if cfg.domain else None)
        return integrate(d, nx, ny, domain=tuple(cfg.domain) if cfg.domain else None)

    return f"{name}@{cfg.theta:.6g}", None, data, build


def _safe_label(label: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "._-@" else "_" for ch in label)


def _canon(obj):
    """Round floats through their 17-digit form so JSON output is canonical."""
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    if isinstance(obj, dict):
        return {k: _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    return obj


def _emit(payload: dict, out: Optional[str] = None) -> None:
    text = json.dumps(_canon(payload), indent=1) + "\n"
    sys.stdout.write(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_generate(cfg: JobConfig) -> int:
    from .meshout import write_csv, write_obj

    label, _, data, build = _resolve(cfg)
    grid = build(data, cfg.nx, cfg.ny)
    prefix = cfg.out or _safe_label(label)
    obj_path, csv_path = prefix + ".obj", prefix + ".csv"
    write_obj(obj_path, grid, band=cfg.band)
    write_csv(csv_path, grid)
    _emit({"surface": label, "nx": grid.nx, "ny": grid.ny,
           "files": {"obj": obj_path, "csv": csv_path}})
    return EXIT_OK


def _report_dict(rep, expected: Optional[str] = None) -> dict:
    d = dataclasses.asdict(rep)
    if expected is not None:
        d["expected"] = expected
        d["as_expected"] = rep.passed == (expected == "pass")
    return d


def cmd_verify(cfg: JobConfig) -> int:
    from . import checks, nullgeom
    from .catalog import kappa_expected
    from .errors import MinlabError
    from .wrep import conjugate, integrate

    label, cls, data, build = _resolve(cfg)
    entries: List[dict] = []

    if cfg.conjugate:
        cdata = conjugate(data)
        cgrid = integrate(cdata, cfg.nx, cfg.ny,
                          domain=tuple(cfg.domain) if cfg.domain else None)
        planar = checks.planar_curvature_lines(
            cgrid, tol=cfg.tol("planarity", 1e-4))
        entries.append(_report_dict(planar, expected="fail"))
        alpha, beta = nullgeom.decompose(cgrid, n=801)
        for side, curve in (("alpha", alpha), ("beta", beta)):
            ang = nullgeom.angle_from_curve(curve)
            rep = checks.affine_minimal_residual(ang, tol=cfg.tol("affine", 1e-5))
            entry = _report_dict(rep, expected="pass")
            entry["generator"] = side
            entries.append(entry)
        ok = all(e["as_expected"] for e in entries)
    else:
        if cfg.perturb:
            data = checks.perturb_data(data, cfg.perturb)
        grid = build(data, cfg.nx, cfg.ny)
        expected_kappa = None
        if cls is not None and not cfg.perturb:
            try:
                expected_kappa = kappa_expected(cls)
            except MinlabError:
                expected_kappa = None
        entries.append(_report_dict(checks.gauss_equation(
            grid, tol=cfg.tol("gauss", 1e-6))))
        entries.append(_report_dict(checks.planar_curvature_lines(
            grid, tol=cfg.tol("planarity", 1e-4))))
        entries.append(_report_dict(checks.hopf_constancy(
            data, tol=cfg.tol("hopf", 1e-8))))
        entries.append(_report_dict(checks.kappa_constancy(
            grid, expected=expected_kappa, tol=cfg.tol("kappa", 1e-4))))
        ok = all(e["passed"] for e in entries)

    _emit({"surface": label, "conjugate": bool(cfg.conjugate),
           "perturb": cfg.perturb, "checks": entries, "passed": ok}, cfg.out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_singular(cfg: JobConfig) -> int:
    from .singular import (_DEFAULT_WINDOWS, classify_curve,
                           export_singular_csv, export_swallowtails_json,
                           mark_swallowtails, singular_set)

    label, cls, data, _ = _resolve(cfg)
    if cfg.window is not None:
        window: Sequence[float] = cfg.window
    elif cls is not None and cls.tag in _DEFAULT_WINDOWS:
        window = _DEFAULT_WINDOWS[cls.tag]
    else:
        window = data.domain
    curves = singular_set(data, window, n=cfg.scan_points)
    tails = mark_swallowtails(data, curves, window=window)

    kinds: Dict[str, int] = {}
    for curve in curves:
        for rec in classify_curve(data, curve):
            kinds[rec.kind] = kinds.get(rec.kind, 0) + 1

    prefix = cfg.out or _safe_label(label)
    csv_path = prefix + "_curves.csv"
    json_path = prefix + "_swallowtails.json"
    export_singular_csv(curves, csv_path)
    export_swallowtails_json(tails, json_path)
    _emit({"surface": label, "window": list(window),
           "curves": [len(c) for c in curves],
           "swallowtails": [{"x": x, "y": y} for x, y in tails],
           "classification_counts": kinds,
           "files": {"curves_csv": csv_path, "swallowtails_json": json_path}})
    return EXIT_OK


def cmd_deform(cfg: JobConfig) -> int:
    import numpy as np

    from .deform import export_frames, theta_range

    if not cfg.branch:
        raise ValueError("deform requires --branch")
    if cfg.steps < 1:
        raise ValueError("--steps must be at least 1")
    lo, hi = theta_range(cfg.branch)
    if cfg.steps == 1:
        thetas = [0.5 * (lo + hi)]
    else:
        thetas = [float(t) for t in np.linspace(lo, hi, cfg.steps)]
    outdir = cfg.out or f"deform_{cfg.branch}"
    manifest = export_frames(cfg.branch, thetas, outdir, nx=cfg.nx, ny=cfg.ny)
    _emit({"branch": cfg.branch, "frames": len(thetas), "manifest": manifest})
    return EXIT_OK


_COMMANDS = {"generate": cmd_generate, "verify": cmd_verify,
             "singular": cmd_singular, "deform": cmd_deform}


def run(cfg: JobConfig) -> int:
    """Execute a parsed job; returns the process exit code."""
    _apply_thread_cap(cfg)
    if cfg.command not in _COMMANDS:
        raise ValueError(f"unknown command {cfg.command!r}")
    return _COMMANDS[cfg.command](cfg)


_RECT_FLAGS = ("--domain", "--window")


def _join_rect_flags(argv: Sequence[str]) -> List[str]:
    """Glue rectangle flags to their values so ``-1,1,-1,1`` parses."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        if argv[i] in _RECT_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_join_rect_flags(list(argv)))
    try:
        cfg = _config_from_args(args)
        return run(cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # package-level domain errors
        from .errors import MinlabError
        if isinstance(exc, MinlabError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        raise


if __name__ == "__main__":
    sys.exit(main())
