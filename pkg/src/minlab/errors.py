"""Exception types shared across the package.

Every error raised by the numerical kernels derives from :class:`MinlabError`
so callers can distinguish domain failures from programming errors.
"""

from __future__ import annotations


class MinlabError(Exception):
    """Base class for all package-specific errors."""


class ZeroDivisor(MinlabError):
    """Division by a paracomplex zero divisor (squared norm vanishes)."""


class DomainError(MinlabError):
    """Argument outside the domain of a paracomplex elementary function."""


class QuadratureFailure(MinlabError):
    """Path integration could not reach the requested tolerance."""


class SingularPoint(MinlabError):
    """Surface evaluation requested at a point of the singular set."""


class ParamRange(MinlabError):
    """Parameter outside the admissible range of a family or class."""


class NotApplicable(MinlabError):
    """Requested quantity does not exist for this surface class."""


class GridShape(MinlabError):
    """Grid geometry incompatible with the requested operation."""


class Degenerate(MinlabError):
    """Null curve degenerates (second derivative not spacelike)."""


class FrameAmbiguous(MinlabError):
    """Null frame is not uniquely determined at a point."""


class SignMismatch(MinlabError):
    """Curvature signs prevent balancing the pair of generating curves."""


class CriterionUndefined(MinlabError):
    """Singularity classification criterion is undefined at this point."""
