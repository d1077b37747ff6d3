"""Independent check of the analytic results by direct radial integration.

The radial equation

    f'' + f'/r + (s - nu^2 / r^2) f = 0,      s = k^2  (or -kappa^2),

is integrated outward from ``r_inner > 0``.  The singular origin is never
touched: initial data come from the two Frobenius solutions

    phi_plus  = r^{+nu} (1 + ...),      phi_minus = r^{-nu} (1 + ...),

and the self-adjoint extension enters only through the boundary condition
on their coefficients, ``f0 = rho * f1`` where ``f = f1 phi_plus + f0 phi_minus``.
Nothing here uses the closed-form ratio, phase or S-matrix expressions.

Near the origin the equation is integrated in t = ln r, where it reads
f_tt = (nu^2 - s e^{2t}) f; beyond r = 1/sqrt|s| it is integrated in r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import Channel, ChannelClass
from .errors import DomainError, IntegrationError, PhaseFitError, UnsupportedChannelError
from .scattering import ExtensionSpec
from .specfun import gamma

# Resolution of the default grid: steps per unit of t near the origin and
# per unit of k*r further out.
DEFAULT_STEP = 0.01
FIT_FRACTION = 0.2


@dataclass(frozen=True)
class RadialSolution:
    grid: np.ndarray
    values: np.ndarray
    k: float
    channel: Channel
    mix: tuple[float, float]
    derivs: np.ndarray | None = None
    error_estimate: float = 0.0
    energy_sign: int = 1  # +1 scattering (k^2), -1 bound (-kappa^2)


@dataclass(frozen=True)
class PhaseFit:
    delta: float
    amplitude_scale: float
    residual: float


def _nu(channel: Channel) -> float:
    if channel.channel_class is ChannelClass.UNSUPPORTED:
        raise UnsupportedChannelError(f"channel m={channel.m} has J^2 < 0")
    return channel.j_abs


def frobenius(r: float, nu: float, s: float, sign: int, tol: float = 1e-17):
    """phi_{+/-}(r) and its r-derivative, summed to convergence."""
    lam = sign * nu
    x = s * r * r
    c = 1.0
    val = 1.0
    dval = lam
    for j in range(1, 200):
        den = 4.0 * j * (j + lam)
        if den == 0.0:
            raise DomainError(f"Frobenius series breaks down for integer order {nu}")
        c *= -x / den
        val += c
        dval += (lam + 2 * j) * c
        if abs(c) < tol * abs(val):
            break
    else:
        raise IntegrationError("Frobenius series did not converge; lower r_inner")
    rl = r**lam
    return rl * val, rl * dval / r


def mix_from_extension(channel: Channel, rho, k: float) -> tuple[float, float]:
    """(a, b) with f = a J_nu(kr) + b J_{-nu}(kr) obeying f0 = rho f1."""
    rho = ExtensionSpec.parse(rho)
    nu = _nu(channel)
    if channel.channel_class is not ChannelClass.EXTENSION_ELIGIBLE or rho.is_zero:
        return (1.0, 0.0)
    if rho.is_infinite:
        return (0.0, 1.0)
    # f1 = a (k/2)^nu / G(1+nu), f0 = b (k/2)^-nu / G(1-nu)
    b = rho.rho * (0.5 * k) ** (2.0 * nu) * gamma(1.0 - nu).value / gamma(1.0 + nu).value
    return (1.0, b)


def mix_from_ratio(ratio: float, nu: float) -> tuple[float, float]:
    """Convert b/a in the {J_nu, Y_nu} basis to (a, b) in the {J_nu, J_-nu} basis."""
    s, c = math.sin(nu * math.pi), math.cos(nu * math.pi)
    return (1.0 + ratio * c / s, -ratio / s)


def _inner_coefficients(nu, k, mix, cls):
    a, b = mix
    if b != 0.0 and cls is not ChannelClass.EXTENSION_ELIGIBLE:
        raise DomainError("irregular component requires 0 < |J| < 1")
    c_plus = a * (0.5 * k) ** nu / gamma(1.0 + nu).value
    c_minus = b * (0.5 * k) ** (-nu) / gamma(1.0 - nu).value if b != 0.0 else 0.0
    return c_plus, c_minus


def _rk4_log(t0, f, g, h, n, nu2, s):
    # y = (f, df/dt); f_tt = (nu^2 - s e^{2t}) f
    ts = np.empty(n + 1)
    fs = np.empty(n + 1)
    gs = np.empty(n + 1)
    ts[0], fs[0], gs[0] = t0, f, g
    exp = math.exp
    t = t0
    for i in range(1, n + 1):
        q0 = nu2 - s * exp(2.0 * t)
        qm = nu2 - s * exp(2.0 * (t + 0.5 * h))
        q1 = nu2 - s * exp(2.0 * (t + h))
        k1f, k1g = g, q0 * f
        k2f, k2g = g + 0.5 * h * k1g, qm * (f + 0.5 * h * k1f)
        k3f, k3g = g + 0.5 * h * k2g, qm * (f + 0.5 * h * k2f)
        k4f, k4g = g + h * k3g, q1 * (f + h * k3f)
        f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
        g += h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g)
        t = t0 + i * h
        ts[i], fs[i], gs[i] = t, f, g
    return ts, fs, gs


def _rk4_lin(r0, f, d, h, n, nu2, s):
    # y = (f, f'); f'' = -f'/r + (nu^2/r^2 - s) f
    rs = np.empty(n + 1)
    fs = np.empty(n + 1)
    ds = np.empty(n + 1)
    rs[0], fs[0], ds[0] = r0, f, d
    r = r0
    for i in range(1, n + 1):
        rm = r + 0.5 * h
        r1 = r + h
        k1f, k1d = d, -d / r + (nu2 / (r * r) - s) * f
        f2, d2 = f + 0.5 * h * k1f, d + 0.5 * h * k1d
        k2f, k2d = d2, -d2 / rm + (nu2 / (rm * rm) - s) * f2
        f3, d3 = f + 0.5 * h * k2f, d + 0.5 * h * k2d
        k3f, k3d = d3, -d3 / rm + (nu2 / (rm * rm) - s) * f3
        f4, d4 = f + h * k3f, d + h * k3d
        k4f, k4d = d4, -d4 / r1 + (nu2 / (r1 * r1) - s) * f4
        f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
        d += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
        r = r0 + i * h
        rs[i], fs[i], ds[i] = r, f, d
    return rs, fs, ds


def _integrate_once(nu, s, c_plus, c_minus, r_inner, r_outer, step):
    scale = math.sqrt(abs(s))
    r_switch = min(max(1.0 / scale, r_inner), r_outer)
    pp, dpp = frobenius(r_inner, nu, s, +1)
    if c_minus != 0.0:
        pm, dpm = frobenius(r_inner, nu, s, -1)
    else:
        pm = dpm = 0.0
    f = c_plus * pp + c_minus * pm
    d = c_plus * dpp + c_minus * dpm
    t0, t1 = math.log(r_inner), math.log(r_switch)
    n_log = max(1, math.ceil((t1 - t0) / step)) if t1 > t0 else 0
    pieces_r, pieces_f, pieces_d = [], [], []
    if n_log:
        h = (t1 - t0) / n_log
        ts, fs, gs = _rk4_log(t0, f, r_inner * d, h, n_log, nu * nu, s)
        rs = np.exp(ts)
        rs[-1] = r_switch
        pieces_r.append(rs)
        pieces_f.append(fs)
        pieces_d.append(gs / rs)
        f, d = fs[-1], gs[-1] / r_switch
    if r_outer > r_switch:
        n_lin = max(1, math.ceil((r_outer - r_switch) * scale / step))
        h = (r_outer - r_switch) / n_lin
        rs, fs, ds = _rk4_lin(r_switch, f, d, h, n_lin, nu * nu, s)
        rs[-1] = r_outer
        sl = slice(1, None) if pieces_r else slice(None)
        pieces_r.append(rs[sl])
        pieces_f.append(fs[sl])
        pieces_d.append(ds[sl])
    grid = np.concatenate(pieces_r)
    vals = np.concatenate(pieces_f)
    ders = np.concatenate(pieces_d)
    if not np.all(np.isfinite(vals)):
        raise IntegrationError("radial solution overflowed; refine r_inner")
    return grid, vals, ders


def _integrate_controlled(nu, s, c_plus, c_minus, r_inner, r_outer, step, rtol, max_halvings):
    grid, vals, ders = _integrate_once(nu, s, c_plus, c_minus, r_inner, r_outer, step)
    err = math.inf
    for _ in range(max_halvings):
        step *= 0.5
        g2, v2, d2 = _integrate_once(nu, s, c_plus, c_minus, r_inner, r_outer, step)
        # Every coarse grid point is also a fine grid point.
        coarse = np.interp(grid, g2, v2)
        scale = np.max(np.abs(v2))
        err = float(np.max(np.abs(coarse - vals)) / scale) / 15.0
        grid, vals, ders = g2, v2, d2
        if err < rtol:
            return grid, vals, ders, err
    raise IntegrationError(f"step halving did not reach rtol={rtol:g} (estimate {err:.3g})")


def default_r_outer(nu: float, k: float) -> float:
    return (50.0 + 10.0 * nu) / k


def integrate_radial(channel: Channel, k: float, mix=(1.0, 0.0), r_inner: float | None = None,
                     r_outer: float | None = None, steps: float = DEFAULT_STEP,
                     rtol: float = 1e-9, max_halvings: int = 4) -> RadialSolution:
    """Integrate the radial equation with f ~ a J_nu(kr) + b J_{-nu}(kr) at ``r_inner``.

    ``steps`` is the step length in t = ln r near the origin and in k r
    beyond r = 1/k; it is halved until two successive solutions agree to
    ``rtol`` (relative to max |f|, Richardson-scaled).
    """
    if not (math.isfinite(k) and k > 0.0):
        raise DomainError(f"wave number must be positive, got {k!r}")
    nu = _nu(channel)
    r_inner = 1e-3 / k if r_inner is None else r_inner
    r_outer = default_r_outer(nu, k) if r_outer is None else r_outer
    if not 0.0 < r_inner < r_outer:
        raise DomainError("need 0 < r_inner < r_outer")
    c_plus, c_minus = _inner_coefficients(nu, k, mix, channel.channel_class)
    grid, vals, ders, err = _integrate_controlled(nu, k * k, c_plus, c_minus, r_inner, r_outer,
                                                  steps, rtol, max_halvings)
    return RadialSolution(grid, vals, k, channel, (float(mix[0]), float(mix[1])), ders, err, 1)


def hankel_pq(nu: float, x):
    """Asymptotic series P(nu, x), Q(nu, x) of J, Y at large x.

    J_nu = sqrt(2/(pi x)) (P cos w - Q sin w), w = x - nu pi/2 - pi/4.
    Summed until terms drop below 1e-17 or start to grow.
    """
    x = np.asarray(x, dtype=float)
    mu = 4.0 * nu * nu
    P = np.ones_like(x)
    Q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.inf
    for j in range(1, 60):
        term = term * (mu - (2 * j - 1) ** 2) / (j * 8.0 * x)
        size = float(np.max(np.abs(term)))
        if size > prev:
            break
        # a_j / x^j enters P for even j, Q for odd j, with alternating signs
        if j % 2:
            Q += (-1) ** ((j - 1) // 2) * term
        else:
            P += (-1) ** (j // 2) * term
        prev = size
        if size < 1e-17:
            break
    return P, Q


def _wrap_pi(x):
    y = math.remainder(x, 2.0 * math.pi)
    return math.pi if y == -math.pi else y


def extract_phase_shift(sol: RadialSolution, fraction: float = FIT_FRACTION,
                        max_residual: float = 1e-4) -> PhaseFit:
    """Fit the outer ``fraction`` of the grid to the free asymptotic form.

    The model is sqrt(2/(pi k r)) A [P cos(w) - Q sin(w)] with
    w = kr - |m| pi/2 - pi/4 + delta, which is the cos form
    A cos(w) / sqrt(r) plus its inverse-power corrections for the
    nu^2 / r^2 tail.  The fit is linear in (A cos delta, A sin delta).
    """
    if sol.energy_sign != 1:
        raise DomainError("phase extraction needs a scattering (k^2 > 0) solution")
    r0, r1 = sol.grid[0], sol.grid[-1]
    mask = sol.grid >= r1 - fraction * (r1 - r0)
    r = sol.grid[mask]
    x = sol.k * r
    nu = _nu(sol.channel)
    w0 = x - abs(sol.channel.m) * 0.5 * math.pi - 0.25 * math.pi
    P, Q = hankel_pq(nu, x)
    u = P * np.cos(w0) - Q * np.sin(w0)
    v = P * np.sin(w0) + Q * np.cos(w0)
    y = sol.values[mask] * np.sqrt(0.5 * math.pi * x)
    design = np.column_stack([u, -v])
    (c1, c2), *_ = np.linalg.lstsq(design, y, rcond=None)
    amp = math.hypot(c1, c2)
    resid = float(np.sqrt(np.mean((design @ np.array([c1, c2]) - y) ** 2)))
    if not resid < max_residual * amp:
        raise PhaseFitError(f"fit residual {resid:.3g} exceeds {max_residual:g} x amplitude {amp:.3g}")
    return PhaseFit(_wrap_pi(math.atan2(c2, c1)), amp, resid)


def oracle_phase_shift(channel: Channel, rho, k: float, **kwargs) -> PhaseFit:
    """Phase shift from integration with boundary data dictated by ``rho``."""
    sol = integrate_radial(channel, k, mix_from_extension(channel, rho, k), **kwargs)
    return extract_phase_shift(sol)


@dataclass(frozen=True)
class BoundStateCheck:
    confirmed: bool
    decay_ratio: float
    solution: RadialSolution


def confirm_bound_state(channel: Channel, rho, kappa: float, geom=None, *,
                        r_inner: float | None = None, r_outer: float | None = None,
                        steps: float = 0.005, threshold: float = 1e-6) -> BoundStateCheck:
    """Is the rho-dictated solution at energy -kappa^2/(2M) normalizable?

    Integrates with k^2 -> -kappa^2 from Frobenius data obeying
    ``f0 = rho f1`` and reports whether |f(r_outer)| < threshold * max |f|.
    ``geom`` is accepted for symmetry with the pole finder; the radial
    equation in kappa does not depend on the mass.
    """
    if not (math.isfinite(kappa) and kappa > 0.0):
        raise DomainError(f"kappa must be positive, got {kappa!r}")
    rho = ExtensionSpec.parse(rho)
    nu = _nu(channel)
    r_inner = 1e-3 / kappa if r_inner is None else r_inner
    r_outer = 12.0 / kappa if r_outer is None else r_outer
    if channel.channel_class is not ChannelClass.EXTENSION_ELIGIBLE or rho.is_zero:
        f1, f0 = 1.0, 0.0
    elif rho.is_infinite:
        f1, f0 = 0.0, 1.0
    else:
        f1, f0 = 1.0, rho.rho
    s = -kappa * kappa
    grid, vals, ders, err = _integrate_controlled(nu, s, f1, f0, r_inner, r_outer, steps, 1e-9, 4)
    ratio = float(abs(vals[-1]) / np.max(np.abs(vals)))
    sol = RadialSolution(grid, vals, kappa, channel, (f1, f0), ders, err, -1)
    return BoundStateCheck(ratio < threshold, ratio, sol)
