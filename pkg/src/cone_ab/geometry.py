"""Cone metric ds^2 = dr^2 + alpha^2 r^2 dtheta^2: curvatures and geometric potential.

Two conventions appear for the delta-function part of the geometric potential.
The surface potential carries an overall 1/(2M); the reduced radial operator
``h = h0 + c_delta * delta(r)/r`` (with k^2 = 2ME) has it absorbed.  The
coefficients returned here are labelled by the convention they belong to.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AntiConeError, DomainError


@dataclass(frozen=True)
class ConeGeometry:
    """Cone with deficit parameter ``alpha`` in (0, 1] and particle ``mass``.

    Units are natural (hbar = c = 1).  ``alpha == 1`` is flat space.
    """

    alpha: float
    mass: float = 1.0

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a) or a <= 0.0:
            raise DomainError(f"alpha must be in (0, 1], got {self.alpha!r}")
        if a > 1.0:
            raise AntiConeError(f"anti-cone alpha={a} > 1 is not supported")
        m = float(self.mass)
        if not math.isfinite(m) or m <= 0.0:
            raise DomainError(f"mass must be positive, got {self.mass!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "mass", m)


def gaussian_curvature_coefficient(geom: ConeGeometry) -> float:
    """Coefficient (1 - alpha)/alpha of delta(r)/r in the Gaussian curvature."""
    return (1.0 - geom.alpha) / geom.alpha


def mean_curvature(geom: ConeGeometry, r: float) -> float:
    """Mean curvature sqrt(1 - alpha^2) / (2 alpha r) at radius ``r > 0``."""
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r!r}")
    a = geom.alpha
    return math.sqrt(1.0 - a * a) / (2.0 * a * r)


def geometric_potential_regular_coefficient(geom: ConeGeometry) -> float:
    """Coefficient c of the regular part c/r^2 of the surface potential V_s.

    Includes the 1/(2M) prefactor: c = -(1 - alpha^2) / (8 M alpha^2).
    """
    a = geom.alpha
    return -(1.0 - a * a) / (8.0 * geom.mass * a * a)


def geometric_potential_delta_coefficient(geom: ConeGeometry) -> float:
    """Strength (1 - alpha)/alpha of delta(r)/r in the reduced operator h.

    This is the k^2 = 2ME convention; multiply by 1/(2M) to get the
    coefficient inside V_s itself.
    """
    return (1.0 - geom.alpha) / geom.alpha
