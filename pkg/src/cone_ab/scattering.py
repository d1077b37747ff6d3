"""Phase shifts, S-matrix, regularized amplitude and bound-state poles.

Conventions
-----------
For a channel with 0 < |J| < 1 the radial solution is a J_{|J|} + b Y_{|J|}
with the self-adjoint extension fixing b/a.  Writing ``nu = |J|`` and

    D = 4^nu Gamma(1 + nu),      N = rho k^(2 nu) Gamma(1 - nu),

the extension phase is the argument of ``D + N exp(i pi nu)`` and

    S = exp(2i Delta) (D + N e^{i pi nu}) / (D + N e^{-i pi nu}),
    Delta = (pi/2)(|m| - nu).

Only S is branch-free; phase shifts are reported modulo pi.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .channels import Channel, ChannelClass
from .errors import (
    ConvergenceError,
    DomainError,
    ForwardDirectionError,
    PoleError,
    UnsupportedChannelError,
)
from .geometry import ConeGeometry
from .specfun import gamma

log = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class ExtensionSpec:
    """Self-adjoint extension parameter rho (units length^(2|J|)).

    ``rho == 0`` is the regular (Dirichlet-type) extension and ``math.inf``
    stands for the rho -> infinity limit, which every operation treats
    through its closed form rather than as a large number.
    """

    rho: float = 0.0

    def __post_init__(self):
        r = float(self.rho)
        if math.isnan(r):
            raise DomainError("rho must not be NaN")
        object.__setattr__(self, "rho", math.inf if math.isinf(r) else r)

    @classmethod
    def zero(cls) -> "ExtensionSpec":
        return cls(0.0)

    @classmethod
    def infinite(cls) -> "ExtensionSpec":
        return cls(math.inf)

    @classmethod
    def parse(cls, text) -> "ExtensionSpec":
        if isinstance(text, ExtensionSpec):
            return text
        if isinstance(text, (int, float)):
            return cls(float(text))
        t = str(text).strip().lower()
        if t in ("zero", "0"):
            return cls.zero()
        if t in ("inf", "infinite", "infinity", "+inf"):
            return cls.infinite()
        try:
            return cls(float(t))
        except ValueError:
            raise DomainError(f"rho must be a number, 'zero' or 'inf', got {text!r}") from None

    @property
    def is_zero(self) -> bool:
        return self.rho == 0.0

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.rho)

    def __str__(self):
        if self.is_zero:
            return "zero"
        if self.is_infinite:
            return "inf"
        return repr(self.rho)


ZERO = ExtensionSpec.zero()
INFINITE = ExtensionSpec.infinite()


@dataclass(frozen=True)
class ExtensionProfile:
    """rho_m for every channel: a uniform default plus per-m overrides."""

    default: ExtensionSpec = ZERO
    overrides: Mapping[int, ExtensionSpec] = field(default_factory=dict)

    def for_m(self, m: int) -> ExtensionSpec:
        return self.overrides.get(m, self.default)

    def is_m_symmetric(self) -> bool:
        return all(self.for_m(-m) == spec for m, spec in self.overrides.items())


def as_profile(rho) -> ExtensionProfile:
    if isinstance(rho, ExtensionProfile):
        return rho
    return ExtensionProfile(ExtensionSpec.parse(rho))


@dataclass(frozen=True)
class PhaseShift:
    delta_ab: float
    theta_rho: float
    total: float


@dataclass(frozen=True)
class SMatrixElement:
    value: complex
    channel: Channel
    k: float


@dataclass(frozen=True)
class RegularizationConfig:
    """Abel damping exp(-eta |m|) with polynomial extrapolation eta -> 0.

    ``m_max`` is a floor on the truncation order; the order actually used
    also guarantees exp(-eta_min * m_max) < ``tail_tol``.
    """

    eta_schedule: tuple[float, ...] = (0.02, 0.01, 0.005)
    tail_tol: float = 1e-10
    spread_tol: float = 1e-3
    m_max: int = 0

    def __post_init__(self):
        etas = tuple(float(e) for e in self.eta_schedule)
        if len(etas) < 2:
            raise DomainError("eta schedule needs at least two values")
        if any(not (e > 0.0 and math.isfinite(e)) for e in etas) or len(set(etas)) != len(etas):
            raise DomainError(f"eta schedule must hold distinct positive values, got {etas}")
        if not 0.0 < self.tail_tol < 1.0:
            raise DomainError("tail_tol must lie in (0, 1)")
        if self.m_max < 0:
            raise DomainError("m_max must be nonnegative")
        object.__setattr__(self, "eta_schedule", etas)

    def truncation_order(self) -> int:
        need = math.ceil(-math.log(self.tail_tol) / min(self.eta_schedule))
        return max(int(self.m_max), need)


@dataclass(frozen=True)
class AmplitudeResult:
    value: complex
    theta: float
    k: float
    m_max: int
    eta_sequence: tuple[float, ...]
    extrapolation_spread: float
    damped_sums: tuple[complex, ...] = ()
    skipped_channels: tuple[int, ...] = ()

    @property
    def converged_within(self):
        return self.extrapolation_spread


@dataclass(frozen=True)
class BoundState:
    channel: Channel
    rho: ExtensionSpec
    kappa: float
    energy: float
    oracle_confirmed: bool | None = None


# -- per-channel analytics -----------------------------------------------


def _eligible_nu(channel: Channel) -> float | None:
    """|J| when the extension parameter acts on this channel, else None."""
    cls = channel.channel_class
    if cls is ChannelClass.UNSUPPORTED:
        raise UnsupportedChannelError(
            f"channel m={channel.m} has J^2={channel.j_squared:.6g} < 0"
        )
    if cls is ChannelClass.EXTENSION_ELIGIBLE:
        return channel.j_abs
    return None


def _check_k(k):
    if not (math.isfinite(k) and k > 0.0):
        raise DomainError(f"wave number must be positive, got {k!r}")


def _d_and_n(nu, rho, k):
    d = 4.0**nu * gamma(1.0 + nu).value
    n = rho * k ** (2.0 * nu) * gamma(1.0 - nu).value
    return d, n


def ab_phase(channel: Channel) -> float:
    """Geometric/AB part (pi/2)(|m| - |J|)."""
    j = channel.j_abs
    if j is None:
        raise UnsupportedChannelError(f"channel m={channel.m} has J^2 < 0")
    return HALF_PI * (abs(channel.m) - j)


def coefficient_ratio(channel: Channel, rho, k: float) -> float:
    """b/a for the solution a J_{|J|}(kr) + b Y_{|J|}(kr) selected by rho.

    Zero for regular-only, log-degenerate and rho = 0 channels.  Raises
    :class:`PoleError` where the denominator vanishes (including rho = inf
    at |J| = 1/2).
    """
    rho = ExtensionSpec.parse(rho)
    _check_k(k)
    nu = _eligible_nu(channel)
    if nu is None or rho.is_zero:
        return 0.0
    s, c = math.sin(nu * math.pi), math.cos(nu * math.pi)
    if rho.is_infinite:
        if abs(c) < 1e-15:
            raise PoleError(f"coefficient ratio has a pole at rho=inf, |J|={nu}")
        return -s / c
    d, n = _d_and_n(nu, rho.rho, k)
    den = d + n * c
    if abs(den) <= 1e-15 * (abs(d) + abs(n)):
        raise PoleError(f"coefficient ratio denominator vanishes (|J|={nu}, rho={rho.rho}, k={k})")
    return -n * s / den


def _wrap_half_pi(x):
    """Map an angle onto (-pi/2, pi/2] modulo pi."""
    y = math.fmod(x, math.pi)
    if y > HALF_PI:
        y -= math.pi
    elif y <= -HALF_PI:
        y += math.pi
    return y


def extension_phase(channel: Channel, rho, k: float) -> float:
    """Theta_rho in (-pi/2, pi/2]; zero unless 0 < |J| < 1 and rho != 0."""
    rho = ExtensionSpec.parse(rho)
    _check_k(k)
    nu = _eligible_nu(channel)
    if nu is None or rho.is_zero:
        return 0.0
    if rho.is_infinite:
        return _wrap_half_pi(math.pi * nu)
    d, n = _d_and_n(nu, rho.rho, k)
    return _wrap_half_pi(math.atan2(n * math.sin(nu * math.pi), d + n * math.cos(nu * math.pi)))


def phase_shift(channel: Channel, rho, k: float) -> PhaseShift:
    delta = ab_phase(channel)
    theta = extension_phase(channel, rho, k)
    return PhaseShift(delta, theta, delta + theta)


def s_matrix_value(channel: Channel, rho, k: float) -> complex:
    rho = ExtensionSpec.parse(rho)
    _check_k(k)
    nu = _eligible_nu(channel)
    base = cmath.exp(2j * ab_phase(channel))
    if nu is None or rho.is_zero:
        return base
    if rho.is_infinite:
        return base * cmath.exp(2j * math.pi * nu)
    d, n = _d_and_n(nu, rho.rho, k)
    z = d + n * cmath.exp(1j * math.pi * nu)
    if z == 0:
        raise PoleError("S-matrix numerator and denominator both vanish")
    # z / conj(z), normalized so |S| = 1 is not left to rounding in the division.
    w = z / abs(z)
    return base * (w * w)


def s_matrix_element(channel: Channel, rho, k: float) -> SMatrixElement:
    return SMatrixElement(s_matrix_value(channel, rho, k), channel, k)


# -- bound states ---------------------------------------------------------


def pole_denominator(channel: Channel, rho, kappa: float) -> float:
    """S-matrix denominator at k = i kappa in real form: D + rho kappa^(2nu) Gamma(1-nu)."""
    rho = ExtensionSpec.parse(rho)
    nu = channel.j_abs
    if channel.channel_class is not ChannelClass.EXTENSION_ELIGIBLE or rho.is_infinite:
        raise DomainError("pole denominator defined only for eligible channels and finite rho")
    d, n = _d_and_n(nu, rho.rho, kappa)
    return d + n


def find_bound_states(channel: Channel, rho, geom: ConeGeometry) -> list[BoundState]:
    """Poles of S at imaginary wave number k = i kappa.

    At most one exists per channel, and only for rho < 0.  Results are
    unconfirmed (``oracle_confirmed is None``) until checked by
    :func:`cone_ab.oracle.confirm_bound_state`.
    """
    rho = ExtensionSpec.parse(rho)
    cls = channel.channel_class
    if cls is not ChannelClass.EXTENSION_ELIGIBLE:
        log.warning("channel m=%d is %s; no extension-induced bound state", channel.m, cls.value)
        return []
    if rho.is_infinite or rho.rho >= 0.0:
        return []
    nu = channel.j_abs
    d = 4.0**nu * gamma(1.0 + nu).value
    g = gamma(1.0 - nu).value
    kappa = (-d / (rho.rho * g)) ** (1.0 / (2.0 * nu))
    return [BoundState(channel, rho, kappa, -kappa * kappa / (2.0 * geom.mass))]


# -- amplitude ------------------------------------------------------------


def _channel_order(m_max):
    ms = np.empty(2 * m_max + 1, dtype=np.int64)
    ms[0] = 0
    ms[1::2] = np.arange(1, m_max + 1)
    ms[2::2] = -np.arange(1, m_max + 1)
    return ms


def s_matrix_table(geom: ConeGeometry, flux: float, rho, k: float, m_max: int):
    """S_m for m = 0, 1, -1, ..., m_max, -m_max.

    Returns ``(ms, S, skipped)``; unsupported channels get S = 1 (no
    scattering contribution) and are listed in ``skipped``.
    """
    profile = as_profile(rho)
    _check_k(k)
    alpha = geom.alpha
    ms = _channel_order(m_max)
    s = ms + flux
    j2 = (4.0 * s * s - (1.0 - alpha * alpha)) / (4.0 * alpha * alpha)
    supported = j2 >= 0.0
    nu = np.sqrt(np.where(supported, j2, 0.0))
    S = np.exp(1j * math.pi * (np.abs(ms) - nu))
    S[~supported] = 1.0
    eligible = np.flatnonzero(supported & (j2 > 0.0) & (j2 < 1.0))
    for i in eligible:
        m = int(ms[i])
        spec = profile.for_m(m)
        if not spec.is_zero:
            S[i] = s_matrix_value(Channel(m, flux, alpha), spec, k)
    skipped = tuple(int(m) for m in ms[~supported])
    return ms, S, skipped


def _neville_at_zero(xs, ys):
    """Values of the interpolating polynomials at 0.

    Returns (full, lower): the extrapolant through all points and the one
    through all but the first (largest-eta) point.
    """
    n = len(xs)
    p = list(ys)
    lower = None
    for level in range(1, n):
        for i in range(n - level):
            j = i + level
            p[i] = (xs[j] * p[i] - xs[i] * p[i + 1]) / (xs[j] - xs[i])
        if level == n - 2:
            lower = p[1]
    return p[0], lower


def _check_theta(theta):
    if not math.isfinite(theta) or not (-math.pi < theta <= math.pi):
        raise DomainError(f"theta must lie in (-pi, pi], got {theta!r}")
    if theta == 0.0:
        raise ForwardDirectionError("scattering amplitude is singular at theta = 0")


def amplitudes_from_table(ms, S, k, thetas: Sequence[float], reg: RegularizationConfig,
                          skipped=()) -> list[AmplitudeResult]:
    etas = sorted(reg.eta_schedule, reverse=True)
    m_max = int(np.max(np.abs(ms)))
    absm = np.abs(ms).astype(float)
    terms = S - 1.0
    damp = [np.exp(-eta * absm) for eta in etas]
    pref = cmath.exp(-0.25j * math.pi) / math.sqrt(2.0 * math.pi * k)
    out = []
    for theta in thetas:
        _check_theta(theta)
        phased = terms * np.exp(1j * ms * theta)
        sums = [complex(pref * np.sum(phased * d)) for d in damp]
        full, lower = _neville_at_zero(etas, sums)
        spread = abs(full - lower)
        out.append(AmplitudeResult(full, float(theta), float(k), m_max, tuple(etas), spread,
                                   tuple(sums), tuple(skipped)))
    return out


def scattering_amplitudes(geom: ConeGeometry, flux: float, rho, k: float,
                          thetas: Sequence[float], reg: RegularizationConfig | None = None,
                          *, strict: bool = True) -> list[AmplitudeResult]:
    """Abel-regularized f(k, theta) = (2 pi i k)^(-1/2) sum_m (S_m - 1) e^{i m theta}.

    With ``strict`` a :class:`ConvergenceError` is raised for the first angle
    whose extrapolation spread exceeds ``reg.spread_tol``.
    """
    reg = reg or RegularizationConfig()
    for theta in thetas:
        _check_theta(theta)
    ms, S, skipped = s_matrix_table(geom, flux, rho, k, reg.truncation_order())
    if skipped:
        log.warning("skipping %d unsupported channel(s) %s", len(skipped), list(skipped))
    results = amplitudes_from_table(ms, S, k, thetas, reg, skipped)
    if strict:
        for res in results:
            if res.extrapolation_spread > reg.spread_tol:
                raise ConvergenceError(
                    f"amplitude at theta={res.theta} not converged: "
                    f"spread {res.extrapolation_spread:.3g} > {reg.spread_tol:.3g}",
                    partial=res,
                )
    return results


def scattering_amplitude(geom: ConeGeometry, flux: float, rho, k: float, theta: float,
                         reg: RegularizationConfig | None = None, *,
                         strict: bool = True) -> AmplitudeResult:
    return scattering_amplitudes(geom, flux, rho, k, [theta], reg, strict=strict)[0]


def differential_cross_section(amp) -> float:
    """dsigma/dtheta = |f|^2 (two dimensions)."""
    value = amp.value if isinstance(amp, AmplitudeResult) else amp
    return abs(value) ** 2
