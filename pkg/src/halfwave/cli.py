"""``halfwave`` command line: spectra, eigenfunctions, transforms, verification.

Every command writes a table either as CSV (metadata in ``# key=value``
comment lines) or as JSON (metadata under ``"meta"``).  Floats are written
with ``repr``, the shortest string that parses back to the same binary64
value, so both formats carry identical payloads.  Nothing time- or
machine-dependent is emitted, so identical arguments give identical bytes.

Exit codes: 0 success, 1 verification or accuracy failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import dirac, verification
from .errors import AccuracyError, ConsistencyError, DomainError, HalfwaveError
from .transform import PowExpTerm, RadialProfile, SampledProfile, forward_transform

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    fmt: str = "csv"
    output: str | None = None
    seed: int = verification.DEFAULT_SEED
    quadrature_rel: float = 1e-8
    verify_rel: float = verification.DEFAULT_VERIFY_REL

    def __post_init__(self):
        if not (self.quadrature_rel > 0 and self.verify_rel > 0):
            raise UsageError("tolerances must be positive")


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    meta: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _json_value(value):
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    return value


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    for key, value in table.meta.items():
        buf.write(f"# {key}={_cell(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_json(table: Table) -> str:
    doc = {
        "meta": {k: _json_value(v) for k, v in table.meta.items()},
        "columns": table.columns,
        "rows": [{c: _json_value(v) for c, v in zip(table.columns, row)} for row in table.rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def render_text(table: Table) -> str:
    lines = [f"{k}: {_cell(v)}" for k, v in table.meta.items()]
    for row in table.rows:
        rec = dict(zip(table.columns, row))
        status = "PASS" if rec["passed"] else "FAIL"
        lines.append(f"{status}  {rec['suite']}.{rec['name']}  measured={_cell(rec['measured'])}"
                     f"  tol={_cell(rec['tolerance'])}  {rec['detail']}")
    return "\n".join(lines) + "\n"


def emit(table: Table, config: RunConfig) -> None:
    if config.fmt == "json":
        text = render_json(table)
    elif config.fmt == "text":
        text = render_text(table)
    else:
        text = render_csv(table)
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Argument parsing helpers
# ---------------------------------------------------------------------------

def parse_range(spec: str, positive: bool = False) -> np.ndarray:
    """``LO:HI:STEPS`` -> linearly spaced grid with STEPS points."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"range {spec!r} must look like LO:HI:STEPS")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"range {spec!r}: {exc}") from exc
    if steps < 1 or (steps > 1 and not hi > lo) or (steps == 1 and hi != lo):
        raise UsageError(f"range {spec!r} needs LO < HI and STEPS >= 1 (STEPS = 1 only with LO = HI)")
    grid = np.linspace(lo, hi, steps)
    if positive and np.any(grid <= 0):
        raise UsageError(f"range {spec!r} must stay strictly positive")
    return grid


def _complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError as exc:
        raise UsageError(f"cannot read {text!r} as a number") from exc


_TERM_KEYS = {"p", "s", "C"}


def parse_profile(spec: str):
    """Profile mini-language.

    ``pow-exp: p=<real>, s=<complex>, C=<complex>[; ...]`` builds a term list
    of C q^(p-1) e^(-s q) terms (s and C default to 1); ``file:<path>`` reads
    a sampled profile from CSV columns (q, Re f[, Im f]); ``zero`` is f = 0.
    """
    spec = spec.strip()
    if spec == "zero":
        return RadialProfile()
    if spec.startswith("file:"):
        path = spec[5:].strip()
        try:
            data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read profile file {path!r}: {exc}") from exc
        if data.shape[1] not in (2, 3):
            raise UsageError("profile file needs 2 or 3 columns: q, Re f[, Im f]")
        values = data[:, 1] + (1j * data[:, 2] if data.shape[1] == 3 else 0.0)
        try:
            return SampledProfile(data[:, 0], values)
        except DomainError as exc:
            raise UsageError(f"profile file {path!r}: {exc}") from exc
    m = re.fullmatch(r"pow-exp\s*:(.*)", spec, flags=re.S)
    if not m:
        raise UsageError(f"profile {spec!r} must be 'zero' or start with 'pow-exp:' or 'file:'")
    terms = []
    for chunk in m.group(1).split(";"):
        if not chunk.strip():
            continue
        fields = {}
        for item in chunk.split(","):
            if "=" not in item:
                raise UsageError(f"profile term item {item.strip()!r} is not key=value")
            key, value = (x.strip() for x in item.split("=", 1))
            if key not in _TERM_KEYS:
                raise UsageError(f"unknown profile key {key!r}; use p, s, C")
            fields[key] = value
        if "p" not in fields:
            raise UsageError("every profile term needs a power p")
        try:
            p = float(fields["p"])
        except ValueError as exc:
            raise UsageError(f"power {fields['p']!r} is not real") from exc
        s = _complex(fields.get("s", "1"))
        C = _complex(fields.get("C", "1"))
        try:
            terms.append(PowExpTerm(C, p, s))
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
    if not terms:
        raise UsageError("profile has no terms")
    return RadialProfile(tuple(terms))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_spectrum(args, config: RunConfig) -> int:
    alpha = args.alpha_fs
    lines = dirac.spectrum_table(args.protons, args.kappa_max, args.n_max, alpha, include_rejected=True)
    table = Table(["n", "principal", "j", "l", "label", "kappa", "gamma", "energy", "binding", "regime", "status"],
                  meta={"command": "spectrum", "protons": args.protons, "kappa_max": args.kappa_max,
                        "n_max": args.n_max, "alpha_fs": alpha, "lambda": args.protons * alpha})
    for ln in lines:
        table.rows.append([ln.n, ln.principal, str(ln.j), ln.l, ln.label, ln.kappa, ln.gamma,
                           ln.energy, ln.binding, ln.regime, ln.status])
    emit(table, config)
    if lines and all(ln.rejected for ln in lines):
        return EXIT_FAIL
    return EXIT_OK


def cmd_eigenfunction(args, config: RunConfig) -> int:
    try:
        state = dirac.QuantumState(args.protons, args.kappa, args.n, args.alpha_fs)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    if not (0 < args.q_min < args.q_max) or args.points < 2:
        raise UsageError("need 0 < q-min < q-max and at least 2 points")
    if args.spacing == "log":
        q = np.geomspace(args.q_min, args.q_max, args.points)
    else:
        q = np.linspace(args.q_min, args.q_max, args.points)
    params = dirac.coupling(state)
    spinor = dirac.radial_eigenfunction(params)
    f, g = spinor(q)
    columns = ["q", "f", "g"]
    cols = [q, f.real, g.real]
    if args.residuals:
        columns.append("residual")
        cols.append(dirac.ode_residual_profile(params, spinor, q))
    table = Table(columns, meta={
        "command": "eigenfunction", "label": state.label, "protons": state.protons, "kappa": state.kappa,
        "n": state.n, "alpha_fs": state.alpha_fs, "gamma": params.gamma, "energy": params.energy,
        "binding": params.binding, "normalization": spinor.normalization, "spacing": args.spacing})
    table.rows = [list(r) for r in zip(*cols)]
    emit(table, config)
    if args.residuals and np.max(cols[-1]) > 1e-9:
        return EXIT_FAIL
    return EXIT_OK


def cmd_transform(args, config: RunConfig) -> int:
    profile = parse_profile(args.profile)
    if not args.gamma > 0:
        raise UsageError("gamma must be positive")
    b = parse_range(args.b_range)
    a = parse_range(args.a_range, positive=True)
    table = Table(["b", "a", "re", "im"], meta={
        "command": "transform", "profile": args.profile, "gamma": args.gamma,
        "method": "closed" if isinstance(profile, RadialProfile) else "real-axis"})
    try:
        for av in a:
            zb = b - 1j * av
            vals = forward_transform(profile, args.gamma, zb, rel_tol=config.quadrature_rel)
            for bv, v in zip(b, np.atleast_1d(vals)):
                table.rows.append([float(bv), float(av), float(v.real), float(v.imag)])
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    emit(table, config)
    return EXIT_OK


def cmd_verify(args, config: RunConfig) -> int:
    try:
        results = verification.run_checks(args.suite, config.seed, config.verify_rel,
                                          args.inject_energy_perturbation)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    passed = sum(r.passed for r in results)
    table = Table(["suite", "name", "passed", "measured", "tolerance", "detail"], meta={
        "command": "verify", "suite": args.suite, "seed": config.seed, "verify_rel": config.verify_rel,
        "inject_energy_perturbation": args.inject_energy_perturbation,
        "checks": len(results), "passed": passed, "failed": len(results) - passed})
    table.rows = [[r.suite, r.name, r.passed, r.measured, r.tolerance, r.detail] for r in results]
    emit(table, config)
    return EXIT_OK if passed == len(results) else EXIT_FAIL


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="halfwave", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("csv", "json")):
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--output", help="write here instead of standard output")

    sp = sub.add_parser("spectrum", help="bound-state energies eps/m")
    sp.add_argument("--protons", type=_positive_int, required=True)
    sp.add_argument("--kappa-max", type=_positive_int, required=True)
    sp.add_argument("--n-max", type=_nonneg_int, required=True)
    sp.add_argument("--alpha-fs", type=float, default=dirac.ALPHA_FS)
    common(sp)

    ep = sub.add_parser("eigenfunction", help="sampled normalised radial spinor (q, f, g)")
    ep.add_argument("--protons", type=_positive_int, required=True)
    ep.add_argument("--kappa", type=int, required=True)
    ep.add_argument("--n", type=_nonneg_int, required=True)
    ep.add_argument("--q-min", type=float, required=True)
    ep.add_argument("--q-max", type=float, required=True)
    ep.add_argument("--points", type=int, required=True)
    ep.add_argument("--spacing", choices=("linear", "log"), default="linear")
    ep.add_argument("--residuals", action="store_true", help="add the radial-system residual column")
    ep.add_argument("--alpha-fs", type=float, default=dirac.ALPHA_FS)
    common(ep)

    tp = sub.add_parser("transform", help="forward transform on a half-plane grid")
    tp.add_argument("--profile", required=True)
    tp.add_argument("--gamma", type=float, required=True)
    tp.add_argument("--b-range", required=True)
    tp.add_argument("--a-range", required=True)
    tp.add_argument("--rel-tol", type=float, default=1e-8)
    common(tp)

    vp = sub.add_parser("verify", help="run the invariant suites")
    vp.add_argument("--suite", default="all", choices=verification.SUITES + ("all",))
    vp.add_argument("--seed", type=int, default=verification.DEFAULT_SEED)
    vp.add_argument("--tol", type=float, default=verification.DEFAULT_VERIFY_REL,
                    help="tolerance for checks without a fixed criterion")
    vp.add_argument("--inject-energy-perturbation", action="store_true",
                    help="shift the binding energy by 1%% in the ODE check (must fail)")
    common(vp, formats=("text", "csv", "json"))
    return parser


_COMMANDS = {"spectrum": cmd_spectrum, "eigenfunction": cmd_eigenfunction,
             "transform": cmd_transform, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        config = RunConfig(
            command=args.command, fmt=args.format, output=args.output,
            seed=getattr(args, "seed", verification.DEFAULT_SEED),
            quadrature_rel=getattr(args, "rel_tol", 1e-8),
            verify_rel=getattr(args, "tol", verification.DEFAULT_VERIFY_REL))
        return _COMMANDS[args.command](args, config)
    except UsageError as exc:
        print(f"halfwave {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AccuracyError, ConsistencyError) as exc:
        print(f"halfwave {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except HalfwaveError as exc:
        print(f"halfwave {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"halfwave {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
