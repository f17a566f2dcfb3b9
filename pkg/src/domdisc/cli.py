"""Command line: classify, slice, mesh, leaves and verify.

Exit codes: 0 success, 2 input error, 3 indeterminate classification, 4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import render, serialize, verify
from ._config import DEFAULT, Tolerances
from .boundary import intersection_pattern
from .domains import COMPONENT, classify_plane, classify_point, leaf, leaves_through_point
from .frenet import Table, Transformed, Veronese
from .projlin import Chart, ProjLinError

EXIT_OK, EXIT_INPUT, EXIT_INDETERMINATE, EXIT_VERIFY = 0, 2, 3, 4

FAMILIES = {k.lower(): k for k in COMPONENT}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    curve: str = "veronese"
    chart: list = field(default_factory=lambda: [1.0, 0.0, 0.0, 0.0])
    frame: list | None = None
    seed: int = 0
    resolution: int | None = None
    tol_rank: float | None = None
    tol_bnd: float | None = None
    out: str | None = None
    format: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(**d)

    def tolerances(self) -> Tolerances:
        return DEFAULT.with_overrides(rank=self.tol_rank, bnd=self.tol_bnd)

    def make_chart(self) -> Chart:
        try:
            return Chart(self.chart, None if self.frame is None else np.asarray(self.frame, float).T)
        except (ProjLinError, ValueError) as e:
            raise InputError(f"bad chart: {e}") from e

    def make_curve(self):
        try:
            return serialize.curve_from_spec(self.curve)
        except serialize.DecodeError as e:
            raise InputError(str(e)) from e


def _json_arg(text: str):
    """Inline JSON, or the contents of a file when the argument names one."""
    path = Path(text)
    try:
        if not text.lstrip().startswith(("[", "{")) and path.is_file():
            text = path.read_text()
    except OSError:
        pass
    try:
        return serialize.loads(text)
    except serialize.DecodeError as e:
        raise InputError(f"malformed JSON: {e}") from e


def _float_list(text: str) -> list[float]:
    try:
        vals = json.loads(text) if text.lstrip().startswith("[") else [float(t) for t in text.split(",")]
        return [float(v) for v in vals]
    except (ValueError, TypeError) as e:
        raise InputError(f"expected comma separated numbers, got {text!r}") from e


def _label(tag: str, params) -> str:
    return f"{tag}({', '.join(f'{t:.5g}' for t in params)})" if params else tag


def _emit(cfg: RunConfig, payload, default_name: str | None = None) -> None:
    data = serialize.dumps(payload) if isinstance(payload, (dict, list)) else payload
    if cfg.out is None or cfg.out == "-":
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
        else:
            sys.stdout.write(data)
        return
    render.write_bytes(cfg.out, data)


def _point(obj) -> np.ndarray:
    try:
        return serialize.point_from_json(obj).v
    except serialize.DecodeError as e:
        raise InputError(str(e)) from e


def _plane(obj):
    """A plane is a covector list or a {"dim": 3, "basis": ...} subspace."""
    if isinstance(obj, dict) and "basis" in obj:
        try:
            s = serialize.subspace_from_json(obj)
        except (serialize.DecodeError, ProjLinError) as e:
            raise InputError(str(e)) from e
        if s.dim != 3:
            raise InputError("a plane needs three basis vectors")
        return s
    return _point(obj)


# commands

def cmd_classify(cfg: RunConfig, args) -> int:
    curve, tol = cfg.make_curve(), cfg.tolerances()
    if (args.point is None) == (args.plane is None):
        raise InputError("give exactly one of --point and --plane")
    if args.point is not None:
        pc = classify_point(curve, _point(_json_arg(args.point)), tol)
        report = {"kind": "point", **pc.as_dict()}
    else:
        pc = classify_plane(curve, _plane(_json_arg(args.plane)), tol)
        report = {"kind": "plane", **pc.as_dict()}
    report["label"] = _label(pc.tag, pc.params)
    report["config"] = cfg.to_dict()
    _emit(cfg, report)
    return EXIT_INDETERMINATE if pc.tag == "Indeterminate" else EXIT_OK


def cmd_slice(cfg: RunConfig, args) -> int:
    curve, tol = cfg.make_curve(), cfg.tolerances()
    pc = classify_plane(curve, _plane(_json_arg(args.plane)), tol)
    if pc.tag == "Indeterminate":
        _emit(cfg, {"kind": "plane", **pc.as_dict(), "label": "Indeterminate"})
        return EXIT_INDETERMINATE
    pat = intersection_pattern(curve, pc, cfg.resolution or 2048, tol)
    fmt = cfg.format or "svg"
    if fmt == "svg":
        _emit(cfg, render.slice_svg(pat, cfg.make_chart(), _label(pc.tag, pc.params)))
    elif fmt == "json":
        d = pat.as_dict(render.plane_chart(pat, cfg.make_chart())[0])
        d["config"] = cfg.to_dict()
        _emit(cfg, d)
    else:
        raise InputError(f"slice writes svg or json, not {fmt}")
    return EXIT_OK


def cmd_mesh(cfg: RunConfig, args) -> int:
    curve = cfg.make_curve()
    if isinstance(curve, Table) or not isinstance(curve, (Veronese, Transformed)):
        raise InputError("meshes need the Veronese curve or a projective image of it")
    if args.grid < 2:
        raise InputError("grid must be at least 2")
    mesh = render.boundary_mesh(curve, args.grid, cfg.make_chart())
    fmt = cfg.format or "obj"
    if fmt == "obj":
        _emit(cfg, mesh.obj())
    elif fmt == "ply":
        _emit(cfg, mesh.ply())
    elif fmt == "json":
        _emit(cfg, {"vertices": mesh.vertices, "triangles": mesh.triangles,
                    "near_curve": mesh.near_curve, "config": cfg.to_dict()})
    else:
        raise InputError(f"mesh writes obj, ply or json, not {fmt}")
    return EXIT_OK


def cmd_leaves(cfg: RunConfig, args) -> int:
    curve, tol = cfg.make_curve(), cfg.tolerances()
    family = FAMILIES.get(args.family.lower())
    if family is None:
        raise InputError(f"unknown family {args.family!r}; choose from {sorted(FAMILIES)}")
    res = cfg.resolution or 256
    if (args.params is None) == (args.through is None):
        raise InputError("give exactly one of --params and --through")
    if args.params is not None:
        leaves = [leaf(curve, family, tuple(_float_list(args.params)), res, tol)]
    else:
        leaves = leaves_through_point(curve, family, _point(_json_arg(args.through)), res, tol)
    fmt = cfg.format or "json"
    if fmt == "json":
        out = []
        for lf in leaves:
            d = lf.as_dict()
            for e in d["endpoints"]:
                e["label"] = _label(e["class"]["tag"], e["class"]["params"])
            out.append(d)
        _emit(cfg, {"family": family, "leaves": out, "config": cfg.to_dict()})
    elif fmt == "svg":
        _emit(cfg, render.leaves_svg(leaves, cfg.make_chart(), family))
    else:
        raise InputError(f"leaves writes json or svg, not {fmt}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> int:
    names = args.suite.split(",")
    if names != ["all"]:
        bad = [s for s in names if s not in verify.SUITES]
        if bad:
            raise InputError(f"unknown suite(s) {bad}; choose from {list(verify.SUITES)} or all")
    report = verify.run(names, cfg.make_curve(), cfg.seed, args.n, cfg.tolerances())
    report["config"] = cfg.to_dict()
    _emit(cfg, report)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


# parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", default="veronese", help="veronese | transform:FILE | table:FILE")
    common.add_argument("--chart", default="1,0,0,0",
                        help="covector of the plane at infinity, or JSON {inf, frame}")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol-rank", type=float, default=None)
    common.add_argument("--tol-bnd", type=float, default=None)
    common.add_argument("--resolution", type=int, default=None)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=["json", "svg", "obj", "ply"], default=None)

    p = argparse.ArgumentParser(prog="domdisc",
                                description="Domains of discontinuity of Frenet curves in RP^3.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("classify", parents=[common],
                       help="classify a point or a plane")
    c.add_argument("--point")
    c.add_argument("--plane")
    s = sub.add_parser("slice", parents=[common],
                       help="plane slice of the boundary surface")
    s.add_argument("--plane", required=True)
    m = sub.add_parser("mesh", parents=[common],
                       help="mesh of the boundary surface")
    m.add_argument("--grid", type=int, default=128)
    lv = sub.add_parser("leaves", parents=[common],
                        help="sampled leaves of a family")
    lv.add_argument("--family", required=True)
    lv.add_argument("--params")
    lv.add_argument("--through")
    v = sub.add_parser("verify", parents=[common],
                       help="run verification suites")
    v.add_argument("--suite", default="all")
    v.add_argument("--n", type=int, default=None)
    return p


def config_from_args(args) -> RunConfig:
    text = args.chart.strip()
    frame = None
    if text.startswith("{"):
        try:
            ch = serialize.chart_from_json(_json_arg(text))
        except serialize.DecodeError as e:
            raise InputError(str(e)) from e
        cov, frame = ch.covector.tolist(), ch.frame.T.tolist()
    else:
        cov = _float_list(text)
    if len(cov) != 4:
        raise InputError("a chart covector has four components")
    if not 0 <= args.seed < 2**64:
        raise InputError("seed must be a 64-bit unsigned integer")
    if args.resolution is not None and args.resolution < 8:
        raise InputError("resolution must be at least 8")
    return RunConfig(args.curve, cov, frame, args.seed, args.resolution, args.tol_rank,
                     args.tol_bnd, args.out, args.format)


COMMANDS = {"classify": cmd_classify, "slice": cmd_slice, "mesh": cmd_mesh,
            "leaves": cmd_leaves, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg, args)
    except (InputError, ProjLinError, serialize.DecodeError, ValueError) as e:
        print(f"domdisc: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
