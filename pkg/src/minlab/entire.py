"""Entire one-parameter solution kernels of ``w'' = sigma * w``.

These four functions are real-analytic in both arguments and interpolate
between hyperbolic (``sigma > 0``) and trigonometric (``sigma < 0``)
profiles, which lets closed-form surface data cross parameter values where
a naive ``sqrt(sigma)`` would branch:

========  =======================================  ==============
name      value                                    at ``sigma=0``
========  =======================================  ==============
``ec``    ``cosh(sqrt(sigma) t)``                  ``1``
``es``    ``sinh(sqrt(sigma) t)/sqrt(sigma)``      ``t``
``ev``    ``(ec(sigma,t) - 1)/sigma``              ``t**2/2``
``ew3``   ``(es(sigma,t) - t)/sigma``              ``t**3/6``
========  =======================================  ==============

Derivative ladder (d/dt): ``ec' = sigma*es``, ``es' = ec``, ``ev' = es``,
``ew3' = ev``; and the Wronskian identity ``ec**2 - sigma*es**2 = 1``.
"""

from __future__ import annotations

import numpy as np

# Below this value of |sigma * t**2| the closed forms suffer cancellation
# (ev, ew3) or lose nothing by series summation (ec, es).
_SERIES_CUT = 1e-3


def _split(sigma, t):
    sigma = np.asarray(sigma, dtype=float)
    t = np.asarray(t, dtype=float)
    sigma, t = np.broadcast_arrays(sigma, t)
    x = sigma * t * t
    small = np.abs(x) < _SERIES_CUT
    return sigma, t, x, small


def _branches(sigma, t):
    """sqrt arguments for the two sign branches, computed without warnings."""
    r = np.sqrt(np.abs(sigma))
    return r * t


def ec(sigma, t):
    """``cosh(sqrt(sigma) t)`` continued analytically through ``sigma <= 0``."""
    sigma, t, x, small = _split(sigma, t)
    rt = _branches(sigma, t)
    out = np.where(sigma >= 0.0, np.cosh(rt), np.cos(rt))
    series = 1.0 + x / 2.0 * (1.0 + x / 12.0 * (1.0 + x / 30.0 * (1.0 + x / 56.0)))
    out = np.where(small, series, out)
    return out if out.ndim else float(out)


def es(sigma, t):
    """``sinh(sqrt(sigma) t)/sqrt(sigma)`` continued through ``sigma <= 0``."""
    sigma, t, x, small = _split(sigma, t)
    rt = _branches(sigma, t)
    r = np.sqrt(np.abs(sigma))
    safe_r = np.where(small, 1.0, r)  # series branch never divides by r
    out = np.where(sigma >= 0.0, np.sinh(rt) / safe_r, np.sin(rt) / safe_r)
    series = t * (1.0 + x / 6.0 * (1.0 + x / 20.0 * (1.0 + x / 42.0 * (1.0 + x / 72.0))))
    out = np.where(small, series, out)
    return out if out.ndim else float(out)


def ev(sigma, t):
    """``(cosh(sqrt(sigma) t) - 1)/sigma`` continued through ``sigma <= 0``."""
    sigma, t, x, small = _split(sigma, t)
    safe_sigma = np.where(small, 1.0, sigma)
    out = (ec(np.where(small, 1.0, sigma), t) - 1.0) / safe_sigma
    tt = t * t
    series = tt / 2.0 * (1.0 + x / 12.0 * (1.0 + x / 30.0 * (1.0 + x / 56.0)))
    out = np.where(small, series, out)
    return out if out.ndim else float(out)


def ew3(sigma, t):
    """``(es(sigma, t) - t)/sigma`` continued through ``sigma <= 0``."""
    sigma, t, x, small = _split(sigma, t)
    safe_sigma = np.where(small, 1.0, sigma)
    out = (es(np.where(small, 1.0, sigma), t) - t) / safe_sigma
    series = t * t * t / 6.0 * (1.0 + x / 20.0 * (1.0 + x / 42.0 * (1.0 + x / 72.0)))
    out = np.where(small, series, out)
    return out if out.ndim else float(out)
