"""Real-order Bessel functions J, Y and the real Gamma function.

Values come from ``scipy.special`` (AMOS / Cephes).  Each call returns a
:class:`SpecFunResult` whose ``est_abs_error`` is a heuristic bound built from
machine epsilon and the local envelope of the function, so callers can carry
an uncertainty forward.  Non-finite results are never returned as values.
"""
from __future__ import annotations

import math
from typing import NamedTuple

from scipy import special as _sp

from .errors import DomainError, RangeError

EPS = 2.220446049250313e-16


class SpecFunResult(NamedTuple):
    value: float
    est_abs_error: float


def _check_bessel_args(nu, x):
    if not (math.isfinite(nu) and nu >= 0.0):
        raise DomainError(f"Bessel order must be a finite value >= 0, got {nu!r}")
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"Bessel argument must be a finite value > 0, got {x!r}")


def _envelope(nu, x):
    # Modulus sqrt(J^2 + Y^2): the natural scale for absolute errors.
    j = float(_sp.jv(nu, x))
    y = float(_sp.yv(nu, x))
    return math.hypot(j, y) if math.isfinite(y) else math.inf


def bessel_j(nu: float, x: float) -> SpecFunResult:
    """Bessel function of the first kind J_nu(x), nu >= 0, x > 0."""
    _check_bessel_args(nu, x)
    v = float(_sp.jv(nu, x))
    if not math.isfinite(v):
        raise RangeError(f"J_{nu}({x}) is not representable")
    env = _envelope(nu, x)
    # Deep in the evanescent region J << Y; only J's own size matters there.
    scale = abs(v) if not math.isfinite(env) or env > 1e3 * max(abs(v), 1e-300) else env
    return SpecFunResult(v, 16.0 * EPS * (1.0 + nu) * max(scale, abs(v)))


def bessel_y(nu: float, x: float) -> SpecFunResult:
    """Bessel function of the second kind Y_nu(x), nu >= 0, x > 0."""
    _check_bessel_args(nu, x)
    v = float(_sp.yv(nu, x))
    if not math.isfinite(v):
        raise RangeError(f"Y_{nu}({x}) overflows")
    env = math.hypot(float(_sp.jv(nu, x)), v)
    return SpecFunResult(v, 16.0 * EPS * (1.0 + nu) * env)


def gamma(x: float) -> SpecFunResult:
    """Gamma function for real x that is not a nonpositive integer."""
    if not math.isfinite(x):
        raise DomainError(f"gamma argument must be finite, got {x!r}")
    if x <= 0.0 and x == math.floor(x):
        raise DomainError(f"gamma has a pole at {x!r}")
    v = float(_sp.gamma(x))
    if not math.isfinite(v):
        raise RangeError(f"gamma({x}) overflows")
    # Relative error grows like |x| through the exponential factor.
    return SpecFunResult(v, 8.0 * EPS * (1.0 + abs(x)) * abs(v))


def bessel_j_prime(nu: float, x: float) -> float:
    """dJ_nu/dx via (nu/x) J_nu - J_{nu+1}."""
    return nu / x * bessel_j(nu, x).value - bessel_j(nu + 1.0, x).value


def bessel_y_prime(nu: float, x: float) -> float:
    """dY_nu/dx via (nu/x) Y_nu - Y_{nu+1}."""
    return nu / x * bessel_y(nu, x).value - bessel_y(nu + 1.0, x).value
