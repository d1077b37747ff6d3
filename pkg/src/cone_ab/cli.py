"""Command-line front end: parameter sweeps with CSV or JSON output.

Examples::

    cone-ab phase-shifts --alpha 0.8 --flux 0.25 --m-max 3
    cone-ab smatrix --alpha 1 --flux 0.5 --m 0 --format json
    cone-ab amplitude --alpha 0.8 --flux 0.25 --k 1 4 --theta 90 --degrees
    cone-ab bound-states --alpha 1 --flux 0.5 --rho -1 --m 0
    cone-ab verify

Exit codes: 0 success, 1 validation error, 2 computation error
(non-convergence), 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .channels import Channel, ChannelClass
from .errors import ConeABError, ConvergenceError
from .geometry import ConeGeometry
from .oracle import confirm_bound_state, oracle_phase_shift
from .scattering import (
    ExtensionProfile,
    ExtensionSpec,
    RegularizationConfig,
    differential_cross_section,
    find_bound_states,
    phase_shift,
    s_matrix_value,
    scattering_amplitudes,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTATION, EXIT_VERIFY = 0, 1, 2, 3

COMMANDS = ("phase-shifts", "smatrix", "amplitude", "bound-states", "verify")

DEFAULTS = {
    "alpha": [1.0],
    "flux": [0.0],
    "k": [1.0],
    "rho": "zero",
    "rho_m": {},
    "m_max": 5,
    "m": None,
    "theta": [math.pi / 2],
    "degrees": False,
    "eta_schedule": [0.02, 0.01, 0.005],
    "tail_tol": 1e-10,
    "spread_tol": 1e-3,
    "mass": 1.0,
    "tolerance": 2e-4,
    "format": "csv",
    "output": None,
}

VERIFY_DEFAULTS = {
    "alpha": [0.6, 0.8, 0.95],
    "flux": [0.1, 0.25, 0.4],
    "k": [0.5, 1.0, 2.0],
    "m": [0, 1, -1],
    "rho": 1.0,
}


class ConfigError(ConeABError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    alpha: tuple[float, ...]
    flux: tuple[float, ...]
    k: tuple[float, ...]
    rho: ExtensionSpec
    rho_m: dict = field(default_factory=dict)
    m_max: int = 5
    m: tuple[int, ...] | None = None
    theta: tuple[float, ...] = (math.pi / 2,)
    eta_schedule: tuple[float, ...] = (0.02, 0.01, 0.005)
    tail_tol: float = 1e-10
    spread_tol: float = 1e-3
    mass: float = 1.0
    tolerance: float = 2e-4
    degrees: bool = False
    format: str = "csv"
    output: str | None = None

    @property
    def profile(self) -> ExtensionProfile:
        return ExtensionProfile(self.rho, dict(self.rho_m))

    @property
    def regularization(self) -> RegularizationConfig:
        return RegularizationConfig(self.eta_schedule, self.tail_tol, self.spread_tol, self.m_max)

    def m_values(self) -> tuple[int, ...]:
        if self.m is not None:
            return self.m
        return tuple(range(-self.m_max, self.m_max + 1))

    def echo(self) -> dict:
        d = asdict(self)
        d["rho"] = str(self.rho)
        d["rho_m"] = {str(m): str(v) for m, v in sorted(self.rho_m.items())}
        return d


def _as_list(name, value, conv):
    items = value if isinstance(value, (list, tuple)) else [value]
    if not items:
        raise ConfigError(f"field '{name}': list must not be empty")
    out = []
    for item in items:
        try:
            out.append(conv(item))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"field '{name}': bad value {item!r} ({exc})") from None
    return tuple(out)


def _int(v):
    if isinstance(v, float) and not v.is_integer():
        raise ValueError("not an integer")
    return int(v)


def build_config(raw: dict) -> SweepConfig:
    """Validate a merged key/value mapping into a :class:`SweepConfig`."""
    unknown = set(raw) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(sorted(unknown))}")
    c = {**DEFAULTS, **{k: v for k, v in raw.items() if v is not None}}
    alpha = _as_list("alpha", c["alpha"], float)
    for a in alpha:
        if not 0.0 < a <= 1.0:
            raise ConfigError(f"field 'alpha': {a} outside (0, 1]")
    flux = _as_list("flux", c["flux"], float)
    k = _as_list("k", c["k"], float)
    if any(not (x > 0.0 and math.isfinite(x)) for x in k):
        raise ConfigError("field 'k': wave numbers must be positive")
    try:
        rho = ExtensionSpec.parse(c["rho"])
        rho_m = {_int(m): ExtensionSpec.parse(v) for m, v in dict(c["rho_m"]).items()}
    except (ConeABError, ValueError) as exc:
        raise ConfigError(f"field 'rho': {exc}") from None
    try:
        m_max = _int(c["m_max"])
    except (TypeError, ValueError):
        raise ConfigError(f"field 'm_max': bad value {c['m_max']!r}") from None
    if m_max < 1:
        raise ConfigError("field 'm_max': must be >= 1")
    m = None if c["m"] is None else _as_list("m", c["m"], _int)
    degrees = bool(c["degrees"])
    theta = _as_list("theta", c["theta"], float)
    if degrees and raw.get("theta") is not None:
        theta = tuple(math.radians(t) for t in theta)
    for t in theta:
        if t == 0.0:
            raise ConfigError("field 'theta': forward direction 0 is excluded")
        if not -math.pi < t <= math.pi:
            raise ConfigError(f"field 'theta': {t} rad outside (-pi, pi]")
    fmt = str(c["format"]).lower()
    if fmt not in ("csv", "json"):
        raise ConfigError(f"field 'format': expected csv or json, got {fmt!r}")
    try:
        cfg = SweepConfig(
            alpha=alpha, flux=flux, k=k, rho=rho, rho_m=rho_m, m_max=m_max, m=m, theta=theta,
            eta_schedule=_as_list("eta_schedule", c["eta_schedule"], float),
            tail_tol=float(c["tail_tol"]), spread_tol=float(c["spread_tol"]),
            mass=float(c["mass"]), tolerance=float(c["tolerance"]), degrees=degrees,
            format=fmt, output=c["output"],
        )
        cfg.regularization
        ConeGeometry(1.0, cfg.mass)
    except (ConeABError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg


# -- per-point workers (top level so a process pool can pickle them) ---------


def _warn(kind, **ctx):
    return {"kind": kind, **ctx}


def _phase_rows(cfg: SweepConfig, alpha, flux, k):
    rows, diags = [], []
    for m in cfg.m_values():
        ch = Channel(m, flux, alpha)
        spec = cfg.profile.for_m(m)
        row = {"alpha": alpha, "flux": flux, "k": k, "m": m, "rho": str(spec),
               "j_squared": ch.j_squared, "j_abs": ch.j_abs, "class": ch.channel_class.value}
        if ch.channel_class is ChannelClass.UNSUPPORTED:
            row.update(delta_ab=None, theta_rho=None, delta_total=None, status="unsupported")
            diags.append(_warn("unsupported_channel", alpha=alpha, flux=flux, m=m))
        else:
            ps = phase_shift(ch, spec, k)
            row.update(delta_ab=ps.delta_ab, theta_rho=ps.theta_rho, delta_total=ps.total,
                       status="ok")
        rows.append(row)
    return rows, diags


def _smatrix_rows(cfg: SweepConfig, alpha, flux, k):
    rows, diags = [], []
    for m in cfg.m_values():
        ch = Channel(m, flux, alpha)
        spec = cfg.profile.for_m(m)
        row = {"alpha": alpha, "flux": flux, "k": k, "m": m, "rho": str(spec), "j_abs": ch.j_abs}
        if ch.channel_class is ChannelClass.UNSUPPORTED:
            row.update(re=None, im=None, abs=None, arg=None, status="unsupported")
            diags.append(_warn("unsupported_channel", alpha=alpha, flux=flux, m=m))
        else:
            s = s_matrix_value(ch, spec, k)
            row.update(re=s.real, im=s.imag, abs=abs(s), arg=math.atan2(s.imag, s.real),
                       status="ok")
        rows.append(row)
    return rows, diags


def _amplitude_rows(cfg: SweepConfig, alpha, flux, k):
    rows, diags = [], []
    geom = ConeGeometry(alpha, cfg.mass)
    reg = cfg.regularization
    results = scattering_amplitudes(geom, flux, cfg.profile, k, cfg.theta, reg, strict=False)
    if results and results[0].skipped_channels:
        diags.append(_warn("unsupported_channel", alpha=alpha, flux=flux,
                           m=list(results[0].skipped_channels)))
    for res in results:
        ok = res.extrapolation_spread <= reg.spread_tol
        theta_out = math.degrees(res.theta) if cfg.degrees else res.theta
        rows.append({"alpha": alpha, "flux": flux, "k": k, "theta": theta_out,
                     "re": res.value.real, "im": res.value.imag, "abs": abs(res.value),
                     "dsigma_dtheta": differential_cross_section(res),
                     "spread": res.extrapolation_spread, "m_max": res.m_max,
                     "skipped_channels": len(res.skipped_channels),
                     "status": "ok" if ok else "not_converged"})
        if not ok:
            diags.append(_warn("not_converged", alpha=alpha, flux=flux, k=k, theta=theta_out,
                               spread=res.extrapolation_spread))
    return rows, diags


def _bound_rows(cfg: SweepConfig, alpha, flux):
    rows, diags = [], []
    geom = ConeGeometry(alpha, cfg.mass)
    for m in cfg.m_values():
        ch = Channel(m, flux, alpha)
        cls = ch.channel_class
        if cls is ChannelClass.UNSUPPORTED:
            diags.append(_warn("unsupported_channel", alpha=alpha, flux=flux, m=m))
            continue
        if cls is not ChannelClass.EXTENSION_ELIGIBLE:
            continue
        spec = cfg.profile.for_m(m)
        for state in find_bound_states(ch, spec, geom):
            check = confirm_bound_state(ch, spec, state.kappa, geom)
            rows.append({"alpha": alpha, "flux": flux, "m": m, "j_abs": ch.j_abs,
                         "rho": str(spec), "kappa": state.kappa, "energy": state.energy,
                         "oracle_confirmed": check.confirmed, "decay_ratio": check.decay_ratio})
            if not check.confirmed:
                diags.append(_warn("unconfirmed_bound_state", alpha=alpha, flux=flux, m=m,
                                   kappa=state.kappa))
    return rows, diags


def _verify_rows(cfg: SweepConfig, alpha, flux, k):
    rows, diags = [], []
    for m in cfg.m_values():
        ch = Channel(m, flux, alpha)
        cls = ch.channel_class
        if cls is ChannelClass.UNSUPPORTED:
            diags.append(_warn("unsupported_channel", alpha=alpha, flux=flux, k=k, m=m))
            continue
        specs = [ExtensionSpec.zero()]
        extra = cfg.profile.for_m(m)
        if cls is ChannelClass.EXTENSION_ELIGIBLE and not extra.is_zero:
            specs.append(extra)
        for spec in specs:
            row = {"alpha": alpha, "flux": flux, "k": k, "m": m, "rho": str(spec),
                   "j_abs": ch.j_abs, "class": cls.value}
            try:
                fit = oracle_phase_shift(ch, spec, k)
                analytic = phase_shift(ch, spec, k).total
                diff = abs(math.remainder(fit.delta - analytic, math.pi))
                row.update(delta_oracle=fit.delta, delta_analytic=analytic, diff_mod_pi=diff,
                           residual=fit.residual, passed=diff <= cfg.tolerance, error=None)
            except ConeABError as exc:
                row.update(delta_oracle=None, delta_analytic=None, diff_mod_pi=None,
                           residual=None, passed=False, error=str(exc))
            if not row["passed"]:
                diags.append(_warn("verification_failed", alpha=alpha, flux=flux, k=k, m=m,
                                   rho=str(spec), diff=row["diff_mod_pi"], error=row["error"]))
            rows.append(row)
    return rows, diags


def _call(job):
    fn, args = job
    return fn(*args)


def _workers():
    env = os.environ.get("CONE_AB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"CONE_AB_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def run_jobs(jobs):
    """Run (fn, args) jobs; results come back in submission order."""
    workers = min(_workers(), len(jobs))
    if workers <= 1:
        return [_call(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_call, jobs))


def plan(command: str, cfg: SweepConfig):
    if command == "bound-states":
        return [(_bound_rows, (cfg, a, f)) for a in cfg.alpha for f in cfg.flux]
    fn = {"phase-shifts": _phase_rows, "smatrix": _smatrix_rows,
          "amplitude": _amplitude_rows, "verify": _verify_rows}[command]
    return [(fn, (cfg, a, f, k)) for a in cfg.alpha for f in cfg.flux for k in cfg.k]


def run(command: str, cfg: SweepConfig):
    """Return (rows, diagnostics, exit_code) for a validated config."""
    rows, diags = [], []
    for r, d in run_jobs(plan(command, cfg)):
        rows.extend(r)
        diags.extend(d)
    code = EXIT_OK
    if command == "amplitude" and any(r["status"] == "not_converged" for r in rows):
        code = EXIT_COMPUTATION
    if command == "verify" and not all(r["passed"] for r in rows):
        code = EXIT_VERIFY
    return rows, diags, code


# -- output -----------------------------------------------------------------


def fmt_float(x: float) -> str:
    return format(x, ".17g")


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v) if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    s = str(v)
    if any(ch in s for ch in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def to_csv(rows) -> str:
    if not rows:
        return ""
    header = list(rows[0])
    lines = [",".join(header)]
    lines += [",".join(_csv_cell(r.get(h)) for h in header) for r in rows]
    return "\n".join(lines) + "\n"


def to_json(obj, indent=0) -> str:
    """JSON with floats printed to 17 significant digits (non-finite -> null)."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(str(obj))


def render(command, cfg, rows, diags) -> str:
    if cfg.format == "json":
        doc = {"meta": {"version": __version__, "command": command, "config": cfg.echo(),
                        "warnings": len(diags), "diagnostics": diags},
               "rows": rows}
        return to_json(doc) + "\n"
    return to_csv(rows)


# -- argument handling ---------------------------------------------------------


def _rho_m_pair(text):
    try:
        m, v = text.split("=", 1)
        return int(m), v
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected M=VALUE, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("sweep")
    g.add_argument("--config", help="TOML file with any of the options below")
    g.add_argument("--alpha", nargs="+", type=float, help="cone parameter(s) in (0, 1]")
    g.add_argument("--flux", nargs="+", type=float, help="flux parameter(s) in flux quanta")
    g.add_argument("--k", nargs="+", type=float, help="wave number(s)")
    g.add_argument("--rho", help="extension parameter: number, 'zero' or 'inf'")
    g.add_argument("--rho-m", action="append", type=_rho_m_pair, metavar="M=VALUE",
                   help="per-channel override, e.g. --rho-m=-1=0.5 (repeatable)")
    g.add_argument("--m-max", dest="m_max", type=int, help="channels -m_max..m_max")
    g.add_argument("--m", nargs="+", type=int, help="explicit channel list")
    g.add_argument("--theta", nargs="+", type=float, help="scattering angles (radians)")
    g.add_argument("--degrees", action="store_true", default=None,
                   help="read and write angles in degrees")
    g.add_argument("--eta-schedule", dest="eta_schedule", nargs="+", type=float,
                   help="Abel damping parameters")
    g.add_argument("--tail-tol", dest="tail_tol", type=float)
    g.add_argument("--spread-tol", dest="spread_tol", type=float)
    g.add_argument("--mass", type=float)
    g.add_argument("--tolerance", type=float, help="verify: max |delta difference| (rad)")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--output", help="output file (default stdout)")

    ap = argparse.ArgumentParser(prog="cone-ab", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "phase-shifts": "per-channel phase shifts",
        "smatrix": "per-channel S-matrix elements",
        "amplitude": "regularized scattering amplitude and cross section",
        "bound-states": "bound states from S-matrix poles, oracle-confirmed",
        "verify": "compare analytic phase shifts with radial integration",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return ap


def load_config_file(path) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return {k.replace("-", "_"): v for k, v in data.items()}


def resolve_config(command, args) -> SweepConfig:
    raw = {}
    if command == "verify":
        raw.update(VERIFY_DEFAULTS)
    if args.config:
        raw.update(load_config_file(args.config))
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "command", "rho_m")}
    raw.update({k: v for k, v in flags.items() if v is not None})
    if args.rho_m:
        table = dict(raw.get("rho_m") or {})
        table.update({m: v for m, v in args.rho_m})
        raw["rho_m"] = table
    return build_config(raw)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command
    try:
        cfg = resolve_config(command, args)
        rows, diags, code = run(command, cfg)
    except ConfigError as exc:
        print(f"cone-ab: config error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        print(f"cone-ab: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    except ConeABError as exc:
        print(f"cone-ab: error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    text = render(command, cfg, rows, diags)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if diags and cfg.format == "csv":
        print("diagnostics:", file=sys.stderr)
        for d in diags:
            print("  " + json.dumps(d, sort_keys=True), file=sys.stderr)
    print(f"summary: command={command} rows={len(rows)} warnings={len(diags)} exit={code}",
          file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
