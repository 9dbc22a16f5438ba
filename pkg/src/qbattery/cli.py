"""Command-line front end: ``qbattery {trace,optimal,constants,verify}``.

CSV goes to stdout or ``--output``; a ``#``-prefixed header records the run
parameters. Output carries no timestamps, so identical flags give
byte-identical files.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 regime error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import io
import math
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, analytic, entangle, optimize, oracle, thermo, verify
from .errors import RegimeError
from .model import BlochState, JointState, SystemParams

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_REGIME, EXIT_IO = 0, 1, 2, 3, 4
ABSDIFF_LIMIT = 1e-6

QUANTITIES = (
    "energy",
    "power",
    "variance",
    "ergotropy",
    "antiergotropy",
    "capacity",
    "passive_energy",
    "inversion",
    "coherence",
    "concurrence",
)
_ENERGY_LIKE = {"energy", "ergotropy", "antiergotropy", "capacity", "passive_energy"}

_ANGLE_TOKEN = re.compile(r"^\s*(?:(\d*\.?\d*)\s*\*?\s*)?pi(?:\s*/\s*(\d*\.?\d+))?\s*$")


class InputError(ValueError):
    pass


def parse_angle(text: str) -> float:
    """Decimal radians or a multiple/fraction of pi (``pi``, ``pi/2``, ``3pi/4``)."""
    m = _ANGLE_TOKEN.match(text)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        if den == 0.0:
            raise InputError(f"bad angle {text!r}")
        # num * pi / den keeps pi/2, pi/4 and 3pi/4 bit-exact
        return num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise InputError(f"bad angle {text!r}") from None


def parse_theta_grid(text: str) -> list[float]:
    """A single angle or ``start:stop:count`` (count points, both ends included)."""
    parts = text.split(":")
    if len(parts) == 1:
        return [parse_angle(parts[0])]
    if len(parts) != 3:
        raise InputError(f"theta grid must be 'start:stop:count', got {text!r}")
    start, stop = parse_angle(parts[0]), parse_angle(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise InputError(f"grid count must be an integer, got {parts[2]!r}") from None
    if count < 1:
        raise InputError("grid count must be at least 1")
    if count == 1:
        return [start]
    return [float(x) for x in np.linspace(start, stop, count)]


def fmt(x) -> str:
    """Shortest round-trip decimal."""
    return repr(float(x))


@dataclass(frozen=True)
class RunConfig:
    thetas: tuple[float, ...]
    phi: float
    params: SystemParams
    t_max: float
    samples: int
    quantities: tuple[str, ...]
    route: str
    dimensionless: bool

    def __post_init__(self):
        if self.samples < 2:
            raise InputError("samples must be at least 2")
        if not self.quantities:
            raise InputError("at least one quantity is required")
        unknown = [q for q in self.quantities if q not in QUANTITIES]
        if unknown:
            raise InputError(f"unknown quantities: {', '.join(unknown)}")
        if not self.t_max > 0:
            raise InputError("t-max must be positive")
        for th in self.thetas:
            if not 0.0 <= th <= math.pi:
                raise InputError(f"theta {th!r} outside [0, pi]")

    def times(self) -> np.ndarray:
        # k * t_max / samples keeps simple fractions of t_max exact
        return np.arange(self.samples + 1) * self.t_max / self.samples

    def scale(self, quantity: str) -> float:
        if not self.dimensionless:
            return 1.0
        p = self.params
        if quantity in _ENERGY_LIKE:
            return 1.0 / p.omega_b
        if quantity == "power":
            return 1.0 / (p.omega_b * p.J)
        if quantity == "variance":
            return 1.0 / p.omega_b**2
        return 1.0


def analytic_columns(b: BlochState, p: SystemParams, t: np.ndarray, quantities) -> dict[str, np.ndarray]:
    inv, coh = analytic.inversion_coherence(b, p, t)
    table = {
        "energy": lambda: analytic.energy(b, p, t),
        "power": lambda: analytic.power(b, p, t),
        "variance": lambda: analytic.variance(b, p, t),
        "ergotropy": lambda: analytic.ergotropy_closed(b, p, t),
        "antiergotropy": lambda: analytic.antiergotropy_closed(b, p, t),
        "capacity": lambda: analytic.capacity_closed(b, p, t),
        "passive_energy": lambda: analytic.passive_energy_closed(b, p, t),
        "inversion": lambda: inv,
        "coherence": lambda: coh,
        "concurrence": lambda: _analytic_concurrence(b, p, t),
    }
    return {q: np.broadcast_to(np.asarray(table[q](), dtype=float), t.shape) for q in quantities}


def _analytic_concurrence(b, p, t):
    if p.gamma == 0.0:
        return analytic.concurrence_formula(b, p, t)
    # no closed form with decay: Wootters on the closed-form density matrix
    return np.array(
        [entangle.concurrence_spectral(JointState(analytic.joint_state_matrix(b, p, tk))).value for tk in t]
    )


def oracle_columns(b: BlochState, p: SystemParams, t: np.ndarray, quantities) -> dict[str, np.ndarray]:
    traj = oracle.integrate_liouvillian(b, p, float(t[-1]), len(t))
    cols = {q: np.empty(len(t)) for q in quantities}
    for k, rho in enumerate(traj.states):
        rep = thermo.report(oracle.reduced_battery_state(rho), p.omega_b)
        values = {
            "energy": rep.energy,
            "power": rep.energy / t[k] if t[k] > 0 else 0.0,
            "variance": rep.variance,
            "ergotropy": rep.ergotropy,
            "antiergotropy": rep.antiergotropy,
            "capacity": rep.capacity,
            "passive_energy": rep.passive_energy,
            "inversion": rep.inversion,
            "coherence": rep.coherence,
        }
        if "concurrence" in quantities:
            values["concurrence"] = entangle.concurrence_spectral(JointState(rho)).value
        for q in quantities:
            cols[q][k] = values[q]
    return cols


def _header(out, title: str, items: dict) -> None:
    out.write(f"# qbattery {__version__} {title}\n")
    for k, v in items.items():
        out.write(f"# {k}={v}\n")


def cmd_trace(cfg: RunConfig, out) -> int:
    """Write one CSV row per (theta, t); returns the exit status."""
    p = cfg.params
    t = cfg.times()
    routes = ["analytic", "oracle"] if cfg.route == "both" else [cfg.route]
    _header(
        out,
        "trace",
        {
            "phi": fmt(cfg.phi),
            "omega_b": fmt(p.omega_b),
            "J": fmt(p.J),
            "gamma": fmt(p.gamma),
            "t_max": fmt(cfg.t_max),
            "samples": cfg.samples,
            "route": cfg.route,
            "units": "t*J, E/omega_b, P/(omega_b*J), var/omega_b^2" if cfg.dimensionless else "native",
        },
    )
    cols = ["theta", "t"]
    for q in cfg.quantities:
        cols += [f"{q}_{r}" for r in routes]
        if cfg.route == "both":
            cols.append(f"{q}_absdiff")
    out.write(",".join(cols) + "\n")
    status = EXIT_OK
    t_scale = p.J if cfg.dimensionless else 1.0
    for th in cfg.thetas:
        b = BlochState(th, cfg.phi)
        data = {}
        if "analytic" in routes:
            data["analytic"] = analytic_columns(b, p, t, cfg.quantities)
        if "oracle" in routes:
            data["oracle"] = oracle_columns(b, p, t, cfg.quantities)
        for k in range(len(t)):
            row = [fmt(th), fmt(t[k] * t_scale)]
            for q in cfg.quantities:
                s = cfg.scale(q)
                vals = [data[r][q][k] for r in routes]
                row += [fmt(v * s) for v in vals]
                if cfg.route == "both":
                    diff = abs(vals[0] - vals[1])
                    if diff > ABSDIFF_LIMIT:
                        status = EXIT_VERIFY
                    row.append(fmt(diff * s))
            out.write(",".join(row) + "\n")
    return status


def cmd_optimal(objective: str, thetas, p: SystemParams, dimensionless: bool, out) -> int:
    objective = optimize.Objective(objective)
    _header(
        out,
        "optimal",
        {
            "objective": objective.value,
            "omega_b": fmt(p.omega_b),
            "J": fmt(p.J),
            "gamma": fmt(p.gamma),
            "theta0": "theta -> 0+ limit: limiting t_star, value 0",
            "units": "t*J, objective/(omega_b or omega_b*J)" if dimensionless else "native",
        },
    )
    out.write("theta,t_star,value,approx_t,approx_value\n")
    p.require_strong_coupling()
    per_time = objective in (optimize.Objective.POWER, optimize.Objective.ERGOTROPIC_POWER)
    v_unit = p.omega_b * (p.J if per_time else 1.0)
    for th in thetas:
        if th == 0.0:
            opt = optimize.optimal_theta_zero_limit(objective, p)
        else:
            opt = optimize.optimal(objective, BlochState(th), p)
        t_star, value = opt.t_star, opt.value
        if dimensionless:
            t_star, value = t_star * p.J, value / v_unit
        approx_t = approx_v = ""
        if objective is optimize.Objective.ERGOTROPIC_POWER:
            at = optimize.approx_t_ergotropic_power(th)
            av = optimize.approx_peak_ergotropic_power(th)
            approx_t = fmt(at if dimensionless else at / p.J)
            approx_v = fmt(av if dimensionless else av * v_unit)
        out.write(",".join([fmt(th), fmt(t_star), fmt(value), approx_t, approx_v]) + "\n")
    return EXIT_OK


def cmd_constants(out) -> int:
    c = optimize.solve_constants()
    res = c.residuals()
    rows = [
        ("A", c.A, "tan(A) = 2A", f"{res['A']:.3e}"),
        ("B", c.B, "sin^2(A)/A", ""),
        ("C", c.C, "1 + 2C tan(2C) = 0", f"{res['C']:.3e}"),
        ("D", c.D, "-cos(2C)/C", ""),
        ("K", c.K, "-A tan(2A)/4", ""),
        ("L", c.L, "K/A", ""),
    ]
    out.write(f"{'name':<5}{'value':<18}{'definition':<22}residual\n")
    for name, val, defn, r in rows:
        out.write(f"{name:<5}{val:<#18.12g}{defn:<22}{r}\n")
    return EXIT_OK


def cmd_verify(level: str, tamper: str, out) -> int:
    results = verify.run(level, tamper)
    out.write(f"# qbattery {__version__} verify level={level} tamper={tamper}\n")
    for r in results:
        out.write(r.line() + "\n")
    failed = [r for r in results if not r.passed]
    out.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    return EXIT_VERIFY if failed else EXIT_OK


def _add_params(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--omega-b", type=float, default=1.0, help="battery transition frequency")
    sp.add_argument("--j", type=float, default=1.0, help="charger-battery coupling J")
    sp.add_argument("--gamma", type=float, default=0.0, help="charger decay rate")
    sp.add_argument(
        "--dimensionless",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="report t*J, E/omega_b, P/(omega_b J) (default: on)",
    )
    sp.add_argument("--output", "-o", help="write to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qbattery", description="Two-qubit quantum battery toolkit")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("trace", help="time traces of battery quantities as CSV")
    tr.add_argument("--theta", default="pi", help="angle, token (pi, pi/2, 3pi/4) or start:stop:count")
    tr.add_argument("--phi", default="0", help="azimuthal angle of the charger")
    tr.add_argument("--t-max", type=float, default=2 * math.pi, help="end time (native units)")
    tr.add_argument("--samples", type=int, default=200, help="number of time intervals")
    tr.add_argument("--quantities", default=",".join(QUANTITIES), help="comma-separated list")
    tr.add_argument("--route", choices=("analytic", "oracle", "both"), default="analytic")
    _add_params(tr)

    op = sub.add_parser("optimal", help="optimal charging time and peak value versus theta")
    op.add_argument("--objective", choices=[o.value for o in optimize.Objective], default="energy")
    op.add_argument("--theta", default="0:pi:33", help="angle or start:stop:count")
    _add_params(op)

    co = sub.add_parser("constants", help="table of the transcendental constants")
    co.add_argument("--output", "-o")

    ve = sub.add_parser("verify", help="run the cross-validation suite")
    ve.add_argument("--level", choices=("quick", "full"), default="quick")
    ve.add_argument("--tamper", choices=verify.TAMPER_MODES, default="none")
    ve.add_argument("--output", "-o")
    return ap


def _params(args) -> SystemParams:
    try:
        return SystemParams(args.omega_b, args.j, args.gamma)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _dispatch(args, out) -> int:
    if args.command == "constants":
        return cmd_constants(out)
    if args.command == "verify":
        return cmd_verify(args.level, args.tamper, out)
    p = _params(args)
    thetas = parse_theta_grid(args.theta)
    if args.command == "optimal":
        for th in thetas:
            if not 0.0 <= th <= math.pi:
                raise InputError(f"theta {th!r} outside [0, pi]")
        return cmd_optimal(args.objective, thetas, p, args.dimensionless, out)
    quantities = tuple(q.strip() for q in args.quantities.split(",") if q.strip())
    cfg = RunConfig(
        thetas=tuple(thetas),
        phi=parse_angle(args.phi),
        params=p,
        t_max=args.t_max,
        samples=args.samples,
        quantities=quantities,
        route=args.route,
        dimensionless=args.dimensionless,
    )
    p.require_strong_coupling()
    return cmd_trace(cfg, out)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    buf = io.StringIO()
    try:
        status = _dispatch(args, buf)
    except InputError as exc:
        print(f"qbattery: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RegimeError as exc:
        print(f"qbattery: regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    try:
        if args.output:
            with open(args.output, "w", newline="") as fh:
                fh.write(buf.getvalue())
        else:
            sys.stdout.write(buf.getvalue())
            sys.stdout.flush()
    except OSError as exc:
        print(f"qbattery: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return status


if __name__ == "__main__":
    sys.exit(main())
