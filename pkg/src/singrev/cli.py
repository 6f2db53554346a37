"""Command line interface.

    singrev trace          --config CFG [--out FILE] [--samples N] [--tol X]
    singrev singularities  --config CFG [--out FILE]
    singrev periodicity    --config CFG [--out FILE]
    singrev solve-constants --config CFG
    singrev plot           --config CFG [--out FILE]
    singrev mesh           --config CFG [--out FILE] [--theta N]

Errors are reported as a single line ``singrev: error CODE: message`` on
stderr.  Exit status 2 means bad input (usage, config, expression syntax),
3 a numerical fault, 4 an I/O failure.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from . import periodicity, singularity, surface
from .config import ConfigError, RunConfig, load_config
from .errors import DomainError, ParseError, SingrevError
from .profile import H_consistency, profile_point, trace
from .svg import profile_svg

log = logging.getLogger("singrev")

EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

CSV_COLUMNS = ("t", "x", "y", "phi", "eta", "F", "G", "l")


class UsageError(SingrevError):
    code = "E_USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _g(v: float) -> str:
    return f"{v:.17g}"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _config(args) -> RunConfig:
    cfg = load_config(args.config)
    if getattr(args, "samples", None) is not None:
        if args.samples < 2:
            raise UsageError("--samples must be at least 2")
        cfg.samples = args.samples
    if getattr(args, "theta", None) is not None:
        if args.theta < 3:
            raise UsageError("--theta must be at least 3")
        cfg.n_theta = args.theta
    if getattr(args, "tol", None) is not None:
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        cfg.tol = args.tol
    return cfg


def _audit_H(cfg: RunConfig, spec) -> None:
    if spec.H_display is not None:
        worst = H_consistency(spec)
        if worst > 1e-9:
            log.warning("H*l differs from m by up to %.3g at regular points", worst)


def trace_csv(cfg: RunConfig) -> str:
    spec = cfg.spec()
    _audit_H(cfg, spec)
    tr = trace(spec, cfg.samples, tol=cfg.tol)
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    cols = [tr.t, tr.x, tr.y, tr.phi, tr.eta, tr.F, tr.G, tr.l]
    for row in zip(*cols):
        buf.write(",".join(_g(v) for v in row) + "\n")
    return buf.getvalue()


def cmd_trace(args) -> int:
    cfg = _config(args)
    _emit(trace_csv(cfg), args.out or cfg.trace_out)
    return 0


def singularity_report(cfg: RunConfig) -> dict:
    spec = cfg.spec()
    points = []
    for p in singularity.find_singular_points(spec):
        report = singularity.classify(spec, p)
        check = singularity.cross_check_details(spec, p)
        entry = report.as_dict()
        entry["jet_check"] = {
            "class": check.from_curve.cusp_class.value,
            "agree": check.agree,
            "note": check.from_curve.note,
        }
        points.append(entry)
    return {
        "l": cfg.l, "m": cfg.m, "H": cfg.H, "c1": cfg.c1, "c2": cfg.c2,
        "domain": [cfg.t_min, cfg.t_max],
        "singular_points": points,
    }


def cmd_singularities(args) -> int:
    cfg = _config(args)
    doc = singularity_report(cfg)
    pts = doc["singular_points"]
    lines = [f"{len(pts)} singular point(s)"]
    for e in pts:
        front = "front" if e["front"] else "frontal not front"
        agree = "agrees" if e["jet_check"]["agree"] else f"DISAGREES ({e['jet_check']['class']})"
        lines.append(f"t={e['t']:.12g}: {e['cusp']}, {front}, {e['surface']}; jet check {agree}")
        if e["warning"]:
            lines.append(f"  warning: {e['warning']}")
    print("\n".join(lines))
    out = args.out or cfg.report_out
    if out:
        Path(out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return 0


def cmd_periodicity(args) -> int:
    cfg = _config(args)
    if cfg.L is None:
        raise ConfigError("periodicity needs a period: set 'L = ...'", key="L")
    report = periodicity.check(cfg.spec(), cfg.L, tol=cfg.tol)
    d = report.as_dict()
    lines = [
        f"periodic={str(report.periodic).lower()} branch={report.branch.value}",
        f"L={_g(report.L)} eta(L)={_g(report.eta_L)} F(L)={_g(report.F_L)} G(L)={_g(report.G_L)}",
        f"residual={_g(report.residual)}",
    ]
    if report.constants is not None:
        lines.append(f"periodic constants c1={_g(report.constants[0])} "
                     f"c2={_g(report.constants[1])}")
    if report.T is not None:
        lines.append(f"T={_g(report.T)} trace defect={report.trace_defect:.3g}")
    for flag in report.flags:
        lines.append(f"note: {flag}")
    print("\n".join(lines))
    out = args.out or cfg.report_out
    if out:
        Path(out).write_text(json.dumps(d, indent=2) + "\n", encoding="utf-8")
    return 0


def cmd_solve_constants(args) -> int:
    cfg = _config(args)
    if cfg.L is None:
        raise ConfigError("solve-constants needs a period: set 'L = ...'", key="L")
    spec = cfg.spec(need_constants=False)
    c = periodicity.periodic_constants(spec.l, spec.m, cfg.L, tol=cfg.tol)
    if c is None:
        text = ("# resonant: 1 - cos(eta(L)) = 0, periodicity does not depend on c1, c2\n")
    else:
        text = f"c1 = {_g(c[0])}\nc2 = {_g(c[1])}\n"
    _emit(text, args.out)
    return 0


def plot_svg(cfg: RunConfig) -> str:
    spec = cfg.spec()
    tr = trace(spec, cfg.samples, tol=cfg.tol)
    marks = []
    for p in singularity.find_singular_points(spec):
        r = singularity.classify(spec, p)
        s = profile_point(spec, p, tr.integrals)
        marks.append((s.x, s.y, f"t={p:.6g}: {r.cusp_class.value}"))
    return profile_svg(tr.points, marks, title=cfg.title)


def cmd_plot(args) -> int:
    cfg = _config(args)
    _emit(plot_svg(cfg), args.out or cfg.plot_out)
    return 0


def mesh_obj(cfg: RunConfig) -> str:
    spec = cfg.spec()
    tr = trace(spec, cfg.samples, tol=cfg.tol)
    reports = singularity.singular_points(spec)
    mesh = surface.revolve(tr, cfg.n_theta)
    mesh = mesh.with_annotations(surface.label_surface_singularities(reports, tr))
    return surface.to_obj(mesh)


def cmd_mesh(args) -> int:
    cfg = _config(args)
    _emit(mesh_obj(cfg), args.out or cfg.mesh_out)
    return 0


COMMANDS = {
    "trace": cmd_trace,
    "singularities": cmd_singularities,
    "periodicity": cmd_periodicity,
    "solve-constants": cmd_solve_constants,
    "plot": cmd_plot,
    "mesh": cmd_mesh,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="singrev",
                     description="Singular surfaces of revolution with prescribed mean curvature.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True,
                       help="config file, or the name of a bundled fixture")
        p.add_argument("--out", help="output path ('-' for stdout)")
        p.add_argument("--samples", type=int)
        p.add_argument("--theta", type=int)
        p.add_argument("--tol", type=float)
    return parser


def _fail(code: str, message: str, status: int) -> int:
    text = " ".join(str(message).split())
    print(f"singrev: error {code}: {text}", file=sys.stderr)
    return status


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail(exc.code, exc, EXIT_INPUT)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="singrev: %(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ParseError, UsageError, DomainError) as exc:
        return _fail(exc.code, exc, EXIT_INPUT)
    except SingrevError as exc:
        return _fail(exc.code, exc, EXIT_NUMERIC)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); not an error of ours
        sys.stdout = open(os.devnull, "w")
        return 0
    except OSError as exc:
        return _fail("E_IO", exc, EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
