"""Command-line front end.

Subcommands: params, sweep, simulate, verify, circuit.  Distributions are
given as ``name`` or ``name:key=value[,key=value...]``, e.g. ``uniform``,
``vmf:kappa=1.5``, ``brosseau:P=0.8,mu=0.5``, ``deltapair:theta=1.0472``,
``belt:theta1=0.5,theta2=1.2``, ``hg:h=0.3``, ``table:/path/to.csv``.
Angles are radians everywhere.  Exit codes: 0 success, 1 usage or parse
error, 2 numeric failure, 3 optimality violation.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import choi as choi_mod
from . import circuit as circuit_mod
from . import dist as dist_mod
from . import qsim
from .errors import CloneError, ParseError
from .optimal import (average_fidelity, optimal_angles, pcc_params, uc_params)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_OPTIMALITY = 3

_DIST_KEYS = {
    "uniform": (),
    "vmf": ("kappa",),
    "brosseau": ("P", "mu"),
    "hg": ("h",),
    "delta": ("theta",),
    "deltapair": ("theta",),
    "belt": ("theta1", "theta2"),
}


def parse_dist(spec: str) -> dist_mod.AxisDistribution:
    """Parse a textual distribution spec; positions are 0-based."""
    spec = spec.strip()
    if not spec:
        raise ParseError("empty distribution spec", 0)
    name, sep, rest = spec.partition(":")
    name = name.lower()
    if name == "table":
        if not rest:
            raise ParseError("table needs a file path", len("table:"))
        return dist_mod.load_tabulated(rest)
    if name not in _DIST_KEYS:
        raise ParseError(f"unknown distribution {name!r}", 0)
    allowed = _DIST_KEYS[name]
    values: dict[str, float] = {}
    if sep and rest:
        offset = len(name) + 1
        for chunk in rest.split(","):
            key, eq, val = chunk.partition("=")
            key = key.strip()
            if not eq:
                raise ParseError(f"expected key=value, got {chunk!r}",
                                 offset)
            if key not in allowed:
                raise ParseError(f"unknown key {key!r} for {name}", offset)
            if key in values:
                raise ParseError(f"duplicate key {key!r}", offset)
            try:
                values[key] = float(val)
            except ValueError:
                raise ParseError(f"bad number {val!r} for {key}",
                                 offset + len(key) + 1) from None
            offset += len(chunk) + 1
    elif sep and not rest:
        raise ParseError("trailing colon without parameters", len(name))
    missing = [k for k in allowed if k not in values]
    if missing:
        raise ParseError(f"{name} needs {', '.join(missing)}", len(spec))
    try:
        if name == "uniform":
            return dist_mod.Uniform()
        if name == "vmf":
            return dist_mod.VonMisesFisher(kappa=values["kappa"])
        if name == "brosseau":
            return dist_mod.Brosseau(P=values["P"], mu=values["mu"])
        if name == "hg":
            return dist_mod.HenyeyGreenstein(h=values["h"])
        if name == "delta":
            return dist_mod.Delta(theta=values["theta"])
        if name == "deltapair":
            return dist_mod.DeltaPair(theta=values["theta"])
        return dist_mod.Belt(theta1=values["theta1"], theta2=values["theta2"])
    except CloneError as exc:
        raise ParseError(f"invalid parameters for {name}: {exc}") from exc


def _fmt(value) -> str:
    """17-significant-digit float rendering shared by JSON and CSV output."""
    if isinstance(value, float):
        if math.isnan(value):
            return "NaN"
        if math.isinf(value):
            return "Infinity" if value > 0 else "-Infinity"
        if value == 0.0:
            return "0"  # avoid the "-0" rendering of negative zero
        return format(value, ".17g")
    return str(value)


def render_json(obj, indent: int = 0) -> str:
    """Deterministic JSON with fixed float formatting (insertion order kept)."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {render_json(v, indent + 1)}' for k, v in obj.items())
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(f"{pad}  {render_json(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, int):
        return str(obj)
    return '"' + str(obj).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _check_format(args, native: str) -> None:
    if args.format is not None and args.format != native:
        raise ParseError(f"{args.command} only emits {native}")


def _params_report(d: dist_mod.AxisDistribution) -> dict:
    m = dist_mod.moments(d)
    p = optimal_angles(m)
    return {
        "a1": m.a1,
        "a2": m.a2,
        "Gamma": p.gamma,
        "Omega": p.omega_value,
        "alpha_plus": p.alpha_plus,
        "alpha_minus": p.alpha_minus,
        "regime": p.regime.value,
        "F_avg": average_fidelity(m, p),
    }


def cmd_params(args) -> int:
    _check_format(args, "json")
    report = _params_report(parse_dist(args.dist))
    _emit(render_json(report), args.out)
    return EXIT_OK


def _parse_sweep(text: str) -> tuple[list[str], np.ndarray]:
    names, eq, grid = text.partition("=")
    if not eq:
        raise ParseError(f"sweep must look like key=start:stop:n, got {text!r}")
    parts = grid.split(":")
    if len(parts) != 3:
        raise ParseError(f"sweep grid must be start:stop:n, got {grid!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ParseError(f"bad sweep grid {grid!r}") from None
    if count < 2:
        raise ParseError("sweep needs at least 2 points")
    if start == stop:
        raise ParseError("sweep start and stop must differ")
    keys = [k.strip() for k in names.split(",") if k.strip()]
    if not keys:
        raise ParseError("sweep needs a parameter name")
    return keys, np.linspace(start, stop, count)


def _with_params(d: dist_mod.AxisDistribution, keys: list[str],
                 value: float) -> dist_mod.AxisDistribution:
    from dataclasses import replace

    kind = dist_mod.spec_string(d).partition(":")[0]
    for key in keys:
        if key not in _DIST_KEYS.get(kind, ()):
            raise ParseError(f"cannot sweep {key!r} on {kind}")
    return replace(d, **{k: value for k in keys})


def cmd_sweep(args) -> int:
    _check_format(args, "csv")
    base = parse_dist(args.dist)
    keys, grid = _parse_sweep(args.sweep)
    columns = ["param", "a1", "a2", "Gamma", "alpha_plus", "alpha_minus",
               "F_opt", "F_UC", "F_PCC_branch"]
    lines = [",".join(columns)]
    for value in grid:
        row: list[float] = [float(value)]
        try:
            d = _with_params(base, keys, float(value))
            m = dist_mod.moments(d)
            p = optimal_angles(m)
            f_pcc = max(average_fidelity(m, pcc_params(True)),
                        average_fidelity(m, pcc_params(False)))
            row += [m.a1, m.a2, p.gamma, p.alpha_plus, p.alpha_minus,
                    average_fidelity(m, p),
                    average_fidelity(m, uc_params()), f_pcc]
        except ParseError:
            raise
        except CloneError as exc:
            sys.stderr.write(
                f"warning: {','.join(keys)}={_fmt(float(value))}: {exc}\n")
            row += [math.nan] * 8
        lines.append(",".join(_fmt(v).replace("NaN", "nan") for v in row))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    _check_format(args, "json")
    d = parse_dist(args.dist)
    m = dist_mod.moments(d)
    p = optimal_angles(m)
    q = qsim.PureQubit(args.theta, args.phi)
    state = qsim.apply_clone(q, p)
    from .optimal import single_copy_fidelity

    report = {
        "amplitudes": [[float(a.real), float(a.imag)] for a in state],
        "F_clone1": qsim.clone_fidelity_sim(q, p, 1),
        "F_clone2": qsim.clone_fidelity_sim(q, p, 2),
        "F_closed_form": single_copy_fidelity(args.theta, p),
    }
    _emit(render_json(report), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    _check_format(args, "json")
    if args.samples < 1:
        raise ParseError("--samples must be >= 1")
    d = parse_dist(args.dist)
    numbers = choi_mod.optimality_report(d, args.samples, seed=args.seed)
    report = {"distribution": dist_mod.spec_string(d), **numbers}
    _emit(render_json(report), args.out)
    if report["max_sampled_F"] > report["F_opt"] + 1e-9:
        return EXIT_OPTIMALITY
    return EXIT_OK


def cmd_circuit(args) -> int:
    _check_format(args, "json")
    d = parse_dist(args.dist)
    m = dist_mod.moments(d)
    p = optimal_angles(m)
    circ = circuit_mod.build_circuit(p)
    report = {
        "distribution": dist_mod.spec_string(d),
        "alpha_plus": p.alpha_plus,
        "alpha_minus": p.alpha_minus,
        "regime": p.regime.value,
        "omega": 2 * p.alpha_plus,
        "Phi": 2 * (p.alpha_minus - p.alpha_plus),
        "gates": circ.as_dicts(),
    }
    _emit(render_json(report), args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="axiclone", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn):
        p = sub.add_parser(name)
        p.add_argument("--dist", required=True, help="distribution spec")
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.set_defaults(fn=fn)
        return p

    add("params", cmd_params)
    sweep = add("sweep", cmd_sweep)
    sweep.add_argument("--sweep", required=True, help="param=start:stop:n")
    simulate = add("simulate", cmd_simulate)
    simulate.add_argument("--theta", type=float, required=True)
    simulate.add_argument("--phi", type=float, default=0.0)
    verify = add("verify", cmd_verify)
    verify.add_argument("--samples", type=int, default=10000)
    verify.add_argument("--seed", type=int, default=0)
    add("circuit", cmd_circuit)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except CloneError as exc:
        sys.stderr.write(f"numeric error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
