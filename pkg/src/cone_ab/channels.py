"""Partial-wave channels and their regularity classes."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import AntiConeError, DomainError


class ChannelClass(enum.Enum):
    EXTENSION_ELIGIBLE = "extension_eligible"  # 0 < |J| < 1
    REGULAR_ONLY = "regular_only"  # |J| >= 1
    LOG_DEGENERATE = "log_degenerate"  # |J| == 0
    UNSUPPORTED = "unsupported"  # J^2 < 0


def _check_alpha(alpha):
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise DomainError(f"alpha must be in (0, 1], got {alpha!r}")
    if alpha > 1.0:
        raise AntiConeError(f"anti-cone alpha={alpha} > 1 is not supported")


def effective_j_squared(m: int, flux: float, alpha: float) -> float:
    """Squared effective angular momentum [4(m+flux)^2 - (1-alpha^2)] / (4 alpha^2).

    Negative for channels with (m + flux)^2 < (1 - alpha^2)/4.
    """
    _check_alpha(alpha)
    s = m + flux
    return (4.0 * s * s - (1.0 - alpha * alpha)) / (4.0 * alpha * alpha)


def classify_j_squared(j_squared: float) -> ChannelClass:
    if j_squared < 0.0:
        return ChannelClass.UNSUPPORTED
    if j_squared == 0.0:
        return ChannelClass.LOG_DEGENERATE
    if j_squared < 1.0:
        return ChannelClass.EXTENSION_ELIGIBLE
    return ChannelClass.REGULAR_ONLY


@dataclass(frozen=True)
class Channel:
    """Angular channel ``m`` at flux ``flux`` (in flux quanta) on a cone ``alpha``."""

    m: int
    flux: float
    alpha: float

    def __post_init__(self):
        if int(self.m) != self.m:
            raise DomainError(f"m must be an integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "flux", float(self.flux))
        object.__setattr__(self, "alpha", float(self.alpha))
        _check_alpha(self.alpha)
        if not math.isfinite(self.flux):
            raise DomainError(f"flux must be finite, got {self.flux!r}")

    @property
    def j_squared(self) -> float:
        return effective_j_squared(self.m, self.flux, self.alpha)

    @property
    def j_abs(self) -> float | None:
        """|J|, or None when J^2 < 0."""
        j2 = self.j_squared
        return math.sqrt(j2) if j2 >= 0.0 else None

    @property
    def channel_class(self) -> ChannelClass:
        return classify_j_squared(self.j_squared)


def classify(channel: Channel) -> ChannelClass:
    return channel.channel_class


def channel_range(m_max: int, flux: float, alpha: float) -> list[Channel]:
    """Channels ordered m = 0, 1, -1, 2, -2, ..., m_max, -m_max."""
    out = [Channel(0, flux, alpha)]
    for m in range(1, m_max + 1):
        out.append(Channel(m, flux, alpha))
        out.append(Channel(-m, flux, alpha))
    return out
