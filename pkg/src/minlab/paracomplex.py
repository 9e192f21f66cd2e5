"""Scalar paracomplex (split-complex) arithmetic.

A paracomplex number is ``x + j y`` with ``j**2 = +1``.  The algebra carries
the indefinite squared norm ``x**2 - y**2`` and has zero divisors on the
lines ``x = ±y``.  In the idempotent basis ``e± = (1 ± j)/2`` every number
splits into two independent real components ``(u, v) = (x + y, x - y)``
("null coordinates"), and every elementary function acts componentwise:
``f(z) = f(u) e+ + f(v) e-``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, ZeroDivisor

_HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class ParaComplex:
    """An immutable paracomplex scalar ``re + j im``."""

    re: float
    im: float

    # -- constructors -------------------------------------------------

    @classmethod
    def from_null(cls, u: float, v: float) -> "ParaComplex":
        """Build from null coordinates ``u = re + im``, ``v = re - im``."""
        return cls((u + v) / 2.0, (u - v) / 2.0)

    # -- views ---------------------------------------------------------

    @property
    def null(self) -> tuple[float, float]:
        """Null coordinates ``(u, v)``; exact inverse of :meth:`from_null`."""
        return (self.re + self.im, self.re - self.im)

    def conj(self) -> "ParaComplex":
        """Paracomplex conjugate ``re - j im`` (swaps the null components)."""
        return ParaComplex(self.re, -self.im)

    def sq_norm(self) -> float:
        """Indefinite squared norm ``re**2 - im**2`` (may be negative)."""
        return self.re * self.re - self.im * self.im

    def isclose(self, other: "ParaComplex", tol: float = 1e-12) -> bool:
        return abs(self.re - other.re) <= tol and abs(self.im - other.im) <= tol

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        other = as_para(other)
        return ParaComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_para(other)
        return ParaComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_para(other).__sub__(self)

    def __mul__(self, other):
        other = as_para(other)
        return ParaComplex(
            self.re * other.re + self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return ParaComplex(-self.re, -self.im)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return ParaComplex(self.re / other, self.im / other)
        other = as_para(other)
        n = other.sq_norm()
        if n == 0.0:
            raise ZeroDivisor(f"division by zero divisor {other!r}")
        num = self * other.conj()
        return ParaComplex(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return as_para(other).__truediv__(self)

    def __abs__(self) -> float:
        """Modulus ``sqrt(|sq_norm|)`` (magnitude only; sign discarded)."""
        return math.sqrt(abs(self.sq_norm()))

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"ParaComplex({self.re!r}, {self.im!r})"


@dataclass(frozen=True)
class NullPair:
    """Null-coordinate view ``(u, v)`` of a paracomplex number.

    Storing ``u`` and ``v`` directly makes the pair itself the exact
    representation; conversion through ``re/im`` floats is exact whenever
    ``(u+v)/2`` and ``(u-v)/2`` are representable (dyadic inputs), and is
    within one ulp otherwise.
    """

    u: float
    v: float

    @classmethod
    def of(cls, z: "ParaComplex") -> "NullPair":
        return cls(*z.null)

    def to_para(self) -> ParaComplex:
        return ParaComplex.from_null(self.u, self.v)


ZERO = ParaComplex(0.0, 0.0)
ONE = ParaComplex(1.0, 0.0)
J = ParaComplex(0.0, 1.0)
EPLUS = ParaComplex(0.5, 0.5)
EMINUS = ParaComplex(0.5, -0.5)


def as_para(value) -> ParaComplex:
    """Coerce a real scalar to :class:`ParaComplex` (identity on instances)."""
    if isinstance(value, ParaComplex):
        return value
    if isinstance(value, (int, float)):
        return ParaComplex(float(value), 0.0)
    raise TypeError(f"cannot interpret {type(value).__name__} as ParaComplex")


def apply_split(fn: Callable[[float], float], z: ParaComplex) -> ParaComplex:
    """Apply a real elementary function on each idempotent component."""
    u, v = as_para(z).null
    return ParaComplex.from_null(fn(u), fn(v))


def pexp(z: ParaComplex) -> ParaComplex:
    return apply_split(math.exp, z)


def pcosh(z: ParaComplex) -> ParaComplex:
    return apply_split(math.cosh, z)


def psinh(z: ParaComplex) -> ParaComplex:
    return apply_split(math.sinh, z)


def ptanh(z: ParaComplex) -> ParaComplex:
    return apply_split(math.tanh, z)


def pcos(z: ParaComplex) -> ParaComplex:
    return apply_split(math.cos, z)


def psin(z: ParaComplex) -> ParaComplex:
    return apply_split(math.sin, z)


def ptan(z: ParaComplex) -> ParaComplex:
    """Paracomplex tangent on the strip ``|re ± im| < pi/2``.

    The strip is exactly where both null components stay inside the
    principal branch of the real tangent; outside it the function is not
    defined by this operation and :class:`~minlab.errors.DomainError` is
    raised.
    """
    u, v = as_para(z).null
    if not (abs(u) < _HALF_PI and abs(v) < _HALF_PI):
        raise DomainError(f"tan argument {z!r} outside strip |re ± im| < pi/2")
    return ParaComplex.from_null(math.tan(u), math.tan(v))


def wirtinger_dz(
    fn: Callable[[ParaComplex], ParaComplex],
    z: ParaComplex,
    step: float = 1e-5,
) -> ParaComplex:
    """Numerical Wirtinger derivative ``(1/2)(d/dx + j d/dy) fn`` at ``z``.

    Central differences with the given step; for a paraholomorphic ``fn``
    this approximates the paracomplex derivative ``fn'(z)``.
    """
    z = as_para(z)
    fx = (fn(z + step) - fn(z - step)) / (2.0 * step)
    fy = (fn(z + J * step) - fn(z - J * step)) / (2.0 * step)
    return (fx + J * fy) / 2.0
