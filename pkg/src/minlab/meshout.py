"""Deterministic mesh and table writers for sampled surfaces.

OBJ files carry the ambient signature as a comment header, list vertices as
``v F1 F2 F0`` (the timelike component last), and triangulate the parameter
grid, omitting cells that touch the singular set.  CSV files tabulate
``x,y,F1,F2,F0,rho`` row-major over the grid.  All floats are written with
17 significant digits so outputs are bit-reproducible.
"""

from __future__ import annotations

from typing import List

import numpy as np

from .wrep import SurfaceGrid

__all__ = ["write_obj", "write_csv", "fmt"]


def fmt(value: float) -> str:
    """Shortest decimal that round-trips a double (17 significant digits)."""
    return f"{float(value):.17g}"


def write_obj(path: str, grid: SurfaceGrid, band: float = 1e-3) -> None:
    keep = grid.nonsingular_mask(band) & np.isfinite(grid.rho)
    sign = np.sign(grid.rho)
    nx, ny = grid.nx, grid.ny
    lines: List[str] = ["# signature ++-",
                        f"# grid {nx} x {ny}"]
    for i in range(nx):
        for j in range(ny):
            F = grid.F[i, j]
            lines.append(f"v {fmt(F[0])} {fmt(F[1])} {fmt(F[2])}")

    def vid(i: int, j: int) -> int:
        return i * ny + j + 1

    for i in range(nx - 1):
        for j in range(ny - 1):
            corners_keep = keep[i:i + 2, j:j + 2]
            corners_sign = sign[i:i + 2, j:j + 2]
            # a cell is singular when a corner sits in the vanishing band of
            # the conformal factor or the factor changes sign across the cell
            # (the singular curve then passes through its interior)
            if not corners_keep.all() or corners_sign.min() != corners_sign.max():
                continue
            lines.append(f"f {vid(i, j)} {vid(i + 1, j)} {vid(i + 1, j + 1)}")
            lines.append(f"f {vid(i, j)} {vid(i + 1, j + 1)} {vid(i, j + 1)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_csv(path: str, grid: SurfaceGrid) -> None:
    lines = ["x,y,F1,F2,F0,rho"]
    for i in range(grid.nx):
        for j in range(grid.ny):
            F = grid.F[i, j]
            lines.append(",".join([fmt(grid.xs[i]), fmt(grid.ys[j]),
                                   fmt(F[0]), fmt(F[1]), fmt(F[2]),
                                   fmt(grid.rho[i, j])]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
