"""minlab: paracomplex Weierstrass toolkit for timelike minimal surfaces.

Subpackages are organized bottom-up:

- :mod:`minlab.paracomplex` — split-complex scalar arithmetic,
- :mod:`minlab.entire` — entire kernels of ``w'' = sigma w``,
- :mod:`minlab.wrep` — Weierstrass-type representation and surface grids,
- :mod:`minlab.catalog` — the classified surfaces and conformal factors,
- :mod:`minlab.nullgeom` — null curves, frames, lightlike curvature,
- :mod:`minlab.checks` — verification suites (reports),
- :mod:`minlab.singular` — singular sets and wavefront classification,
- :mod:`minlab.deform` — the one-parameter deformation branches,
- :mod:`minlab.cli` — command-line front end.
"""

from .paracomplex import ParaComplex, J, ONE, ZERO

__all__ = ["ParaComplex", "J", "ONE", "ZERO"]

__version__ = "0.1.0"
