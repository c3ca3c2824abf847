"""Command-line front end.

Exit status: 0 on success, 2 when ``--expect-unitary`` was given and the
transform is certified not unitary, 1 on any input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import clark as clark_mod
from . import geometry, levelset, rkspace, transform
from .demos import demo as load_demo, lattice_row_deviation
from .errors import HilbertClarkError, PointOnGamma
from .potential import PotentialContext, phi
from .sequences import DEDUP_TOL, Geometry, WeightedNodeSet, admissibility_sum

SCHEMA = "v1"
COMMANDS = ("check", "phi", "levelset", "transform", "localize", "rkspace",
            "clark", "demo")


class UsageError(HilbertClarkError):
    pass


@dataclass
class RunConfig:
    command: str
    nodes: WeightedNodeSet | None = None
    tolerances: dict = field(default_factory=dict)
    output_format: str = "json"
    options: dict = field(default_factory=dict)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _parse_points(text: str) -> np.ndarray:
    """``"re,im;re,im;..."`` or a JSON list of ``[re, im]`` pairs / reals."""
    text = text.strip()
    if text.startswith("["):
        raw = json.loads(text)
        return np.array([complex(*p) if isinstance(p, list) else complex(p)
                         for p in raw])
    out = []
    for chunk in filter(None, text.split(";")):
        parts = [float(x) for x in chunk.split(",")]
        if len(parts) == 1:
            out.append(complex(parts[0]))
        elif len(parts) == 2:
            out.append(complex(parts[0], parts[1]))
        else:
            raise UsageError(f"--points: cannot parse {chunk!r}")
    return np.array(out, dtype=complex)


def _parse_range(text: str, flag: str) -> tuple[float, float, int]:
    try:
        a, b, steps = text.split(":")
        return float(a), float(b), int(steps)
    except ValueError:
        raise UsageError(f"{flag} expects start:stop:steps, got {text!r}") from None


def _parse_complex(text: str, flag: str) -> complex:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag} expects re,im") from None
    if len(parts) == 1:
        return complex(parts[0])
    if len(parts) == 2:
        return complex(*parts)
    raise UsageError(f"{flag} expects re,im")


def _load_json_arg(text: str, flag: str):
    try:
        if text.startswith("@"):
            with open(text[1:]) as fh:
                return json.load(fh)
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _add_common(p: argparse.ArgumentParser, nodes: bool = True) -> None:
    if nodes:
        src = p.add_argument_group("node set")
        src.add_argument("--input", help="path to a node-set JSON file")
        src.add_argument("--json", dest="inline", help="inline node-set JSON")
        src.add_argument("--demo", dest="demo_nodes",
                         help="use the nodes of a prepared demo")
        src.add_argument("--n", type=int, help="size parameter for --demo")
    tol = p.add_argument_group("tolerances")
    tol.add_argument("--dedup-tol", type=float, default=DEDUP_TOL)
    tol.add_argument("--level-tol", type=float, default=levelset.LEVEL_TOL)
    tol.add_argument("--exc-tol", type=float, default=levelset.EXC_TOL)
    tol.add_argument("--unit-tol", type=float, default=None,
                     help="default: 1e-9 * max(rows, cols)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hilbert-clark",
                     description="Unitary discrete Hilbert transforms and Clark bases.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="validate a node set")
    _add_common(p)

    p = sub.add_parser("phi", help="evaluate the potential")
    _add_common(p)
    p.add_argument("--points")
    p.add_argument("--grid", help="start:stop:steps (x for lines, angle for circles)")

    p = sub.add_parser("levelset", help="solve phi = alpha")
    _add_common(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--scan", help="a0:a1:steps, CSV of level sets")

    p = sub.add_parser("transform", help="build and certify the transform")
    _add_common(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--report", action="store_true")
    p.add_argument("--matrix", help="write scaled entries to this CSV file")
    p.add_argument("--expect-unitary", action="store_true")

    p = sub.add_parser("localize", help="classify a point list as line/circle")
    _add_common(p, nodes=False)
    p.add_argument("--input")
    p.add_argument("--json", dest="inline")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("rkspace", help="reproducing-kernel space tools")
    p.add_argument("action", choices=("reconstruct",))
    _add_common(p)
    p.add_argument("--data", required=True,
                   help='JSON {"samples": [[re, im], ...], "alpha": a} or @file')
    p.add_argument("--points", required=True)

    p = sub.add_parser("clark", help="Clark basis for a unimodular beta")
    _add_common(p)
    p.add_argument("--beta", required=True, help="re,im")
    p.add_argument("--quad-points", type=int)

    p = sub.add_parser("demo", help="run a prepared instance")
    p.add_argument("name")
    _add_common(p, nodes=False)
    p.add_argument("--n", type=int)
    p.add_argument("--terms", type=int, default=3)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta")
    p.add_argument("--expect-unitary", action="store_true")
    return parser


def _load_nodes(args) -> WeightedNodeSet | None:
    sources = [s for s in (args.input, args.inline, getattr(args, "demo_nodes", None))
               if s is not None]
    if len(sources) != 1:
        raise UsageError("give exactly one of --input, --json, --demo")
    if getattr(args, "demo_nodes", None):
        return load_demo(args.demo_nodes, n=args.n).nodes
    if args.input is not None:
        try:
            with open(args.input) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"--input: {exc}") from exc
    else:
        data = _load_json_arg(args.inline, "--json")
    if not isinstance(data, dict):
        raise UsageError("node-set JSON must be an object")
    return WeightedNodeSet.from_json(data, dedup_tol=args.dedup_tol)


# flags whose values routinely start with "-" (ranges, complex pairs)
_SIGNED_VALUE_FLAGS = ("--grid", "--scan", "--beta", "--points")


def _attach_signed_values(argv: list[str]) -> list[str]:
    """Rewrite ``--grid -3:3:7`` as ``--grid=-3:3:7`` so argparse keeps the value."""
    out, i = [], 0
    while i < len(argv):
        arg = argv[i]
        if arg in _SIGNED_VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
        else:
            out.append(arg)
            i += 1
    return out


def config_from_args(argv=None) -> RunConfig:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_signed_values(argv))
    tolerances = {
        "dedup_tol": args.dedup_tol, "level_tol": args.level_tol,
        "exc_tol": args.exc_tol, "unit_tol": args.unit_tol,
    }
    for key, val in tolerances.items():
        if val is not None and val <= 0:
            raise UsageError(f"--{key.replace('_', '-')} must be positive")
    nodes = None
    if args.command not in ("localize", "demo"):
        nodes = _load_nodes(args)
    return RunConfig(args.command, nodes, tolerances, args.format, vars(args))


def _report(config: RunConfig, **body) -> dict:
    return {"schema": SCHEMA, "command": config.command,
            "tolerances": config.tolerances, **body}


def _ctx(nodes: WeightedNodeSet) -> PotentialContext:
    if nodes.geometry is Geometry.GENERAL:
        raise UsageError("this command needs line or circle geometry")
    return PotentialContext(nodes)


def _solve(config: RunConfig, ctx: PotentialContext, alpha: float):
    t = config.tolerances
    return levelset.solve_level_set(ctx, alpha, level_tol=t["level_tol"],
                                    exc_tol=t["exc_tol"])


def _certify(config, nodes, ls) -> dict:
    rep = transform.unitarity_report(transform.build(nodes, ls),
                                     unit_tol=config.tolerances["unit_tol"])
    return rep.to_json()


def _csv(rows, header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_check(config: RunConfig):
    nodes = config.nodes
    body = {"nodes": nodes.to_json(), "n": len(nodes),
            "admissibility_sum": admissibility_sum(nodes)}
    if nodes.geometry is Geometry.LINE:
        body["exceptional_alpha"] = levelset.exceptional_alpha(PotentialContext(nodes))
    return _report(config, **body), 0


def cmd_phi(config: RunConfig):
    nodes, opts = config.nodes, config.options
    ctx = _ctx(nodes)
    if opts["points"] is not None:
        z = _parse_points(opts["points"])
    elif opts["grid"] is not None:
        a, b, steps = _parse_range(opts["grid"], "--grid")
        t = np.linspace(a, b, steps)
        z = t.astype(complex) if ctx.is_line else np.exp(1j * t)
    else:
        raise UsageError("phi needs --points or --grid")
    rows = []
    for zi in z:
        try:
            val = complex(phi(ctx, zi))
        except PointOnGamma:
            val = complex(np.nan, np.nan)
        rows.append((zi.real, zi.imag, val.real, val.imag))
    if config.output_format == "csv":
        return _csv(rows, ("z_re", "z_im", "phi_re", "phi_im")), 0
    return _report(config, values=[
        {"z": [r[0], r[1]], "phi": [r[2], r[3]]} for r in rows]), 0


def cmd_levelset(config: RunConfig):
    ctx = _ctx(config.nodes)
    opts = config.options
    if opts["scan"] is not None:
        a0, a1, steps = _parse_range(opts["scan"], "--scan")
        rows = []
        width = len(config.nodes)
        for a in np.linspace(a0, a1, steps):
            ls = _solve(config, ctx, a)
            vals = [complex(z) for z in ls.lambdas]
            cells = [z.real if ctx.is_line else float(np.angle(z)) for z in vals]
            rows.append([a] + cells + [""] * (width - len(cells)))
        header = ["alpha"] + [f"lambda_{j + 1}" for j in range(width)]
        return _csv(rows, header), 0
    if opts["alpha"] is None:
        raise UsageError("levelset needs --alpha or --scan")
    ls = _solve(config, ctx, opts["alpha"])
    return _report(config, level_set=ls.to_json(),
                   exceptional_alpha=levelset.exceptional_alpha(ctx)), 0


def cmd_transform(config: RunConfig):
    nodes, opts = config.nodes, config.options
    ctx = _ctx(nodes)
    ls = _solve(config, ctx, opts["alpha"])
    T = transform.build(nodes, ls)
    rep = transform.unitarity_report(T, unit_tol=config.tolerances["unit_tol"])
    if opts.get("matrix"):
        U = T.scaled_entries()
        with open(opts["matrix"], "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(("row", "col", "re", "im"))
            for (j, n), val in np.ndenumerate(U):
                writer.writerow((j, n, val.real, val.imag))
    body = {"alpha": opts["alpha"], "report": rep.to_json()}
    if not opts.get("report"):
        body["level_set"] = ls.to_json()
    code = 2 if opts.get("expect_unitary") and rep.verdict is not transform.Verdict.UNITARY else 0
    return _report(config, **body), code


def cmd_localize(config: RunConfig):
    opts = config.options
    if (opts["input"] is None) == (opts["inline"] is None):
        raise UsageError("give exactly one of --input, --json")
    data = _load_json_arg("@" + opts["input"] if opts["input"] else opts["inline"],
                          "--input" if opts["input"] else "--json")
    if isinstance(data, dict):
        data = data.get("points")
    if not isinstance(data, list):
        raise UsageError('expected a point list or {"points": [...]}')
    pts = np.array([complex(*p) if isinstance(p, list) else complex(p) for p in data])
    loc = geometry.localize(pts, opts["tol"])
    return _report(config, classification=loc.to_json()), 0


def cmd_rkspace(config: RunConfig):
    nodes, opts = config.nodes, config.options
    ctx = _ctx(nodes)
    data = _load_json_arg(opts["data"], "--data")
    try:
        alpha = float(data["alpha"])
        samples = np.array([complex(*s) if isinstance(s, list) else complex(s)
                            for s in data["samples"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"--data: {exc}") from exc
    ls = _solve(config, ctx, alpha)
    z = _parse_points(opts["points"])
    values = rkspace.reconstruct(nodes, samples, ls, z, tol=config.tolerances["unit_tol"])
    return _report(config, alpha=alpha, points=[_pair(p) for p in z],
                   values=[_pair(v) for v in np.atleast_1d(values)]), 0


def cmd_clark(config: RunConfig):
    ctx = _ctx(config.nodes)
    if ctx.is_line:
        raise UsageError("clark needs circle geometry")
    beta = _parse_complex(config.options["beta"], "--beta")
    cb = clark_mod.clark_basis(clark_mod.InnerFunction(ctx), beta,
                               quad_points=config.options.get("quad_points"),
                               level_tol=config.tolerances["level_tol"])
    return _report(config, clark=cb.to_json()), 0


def cmd_demo(config: RunConfig):
    opts = config.options
    d = load_demo(opts["name"], n=opts["n"], terms=opts["terms"])
    body = {"demo": d.name, "note": d.note, "nodes": d.nodes.to_json()
            if d.name != "prime-example" else None}
    if d.name == "prime-example":
        body.update(primes=d.extra["primes"], radius=d.extra["radius"],
                    n_points=len(d.nodes),
                    admissibility_partial_sums=d.extra["admissibility_partial_sums"])
        return _report(config, **body), 0
    if d.name == "lattice":
        ls = d.extra["level_set"]
        body["row_deviation_central"] = lattice_row_deviation(opts["n"] or 64)
        body["report"] = _certify(config, d.nodes, ls)
        return _report(config, **body), 0
    ctx = PotentialContext(d.nodes)
    if opts["beta"] is not None:
        beta = _parse_complex(opts["beta"], "--beta")
        cb = clark_mod.clark_basis(clark_mod.InnerFunction(ctx), beta,
                                   level_tol=config.tolerances["level_tol"])
        body["clark"] = cb.to_json()
        return _report(config, **body), 0
    alpha = opts["alpha"] if opts["alpha"] is not None else d.alphas[0]
    ls = _solve(config, ctx, alpha)
    rep = _certify(config, d.nodes, ls)
    body.update(alpha=alpha, level_set=ls.to_json(), report=rep)
    negative = rep["verdict"] != transform.Verdict.UNITARY.value
    return _report(config, **body), 2 if opts.get("expect_unitary") and negative else 0


HANDLERS = {
    "check": cmd_check, "phi": cmd_phi, "levelset": cmd_levelset,
    "transform": cmd_transform, "localize": cmd_localize,
    "rkspace": cmd_rkspace, "clark": cmd_clark, "demo": cmd_demo,
}


def run(config: RunConfig, out=None) -> int:
    out = sys.stdout if out is None else out
    report, code = HANDLERS[config.command](config)
    if isinstance(report, str):
        out.write(report)
    else:
        out.write(json.dumps(report, indent=2) + "\n")
    return code


def main(argv=None) -> int:
    try:
        return run(config_from_args(argv))
    except (ValueError, TypeError) as exc:  # HilbertClarkError is a ValueError
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
