"""Command line front end.

Sampling uses numpy's default generator (PCG64) seeded with ``--seed``, so a
given command line always draws the same trajectories.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import derivation
from .cylinders import decompose, perfectness, theta_s
from .derivation import enumerate_words, format_words, geometric_derive
from .diagrams import check_grid_shape, grid_rows, transition_diagram
from .flow import Trajectory, VertexHit, flow, random_trajectory
from .geometry import InvalidParams, Surface, SurfacePoint, build_surface, surface_to_json, validate_special
from .render import render_svg
from .verify import run_checks


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: str
    n: int
    m: int | None
    doubled: bool
    seed: int
    trials: int
    window: int
    theta: float | None
    start: SurfacePoint | None
    out: str | None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        if args.n is None:
            raise ConfigError("--n: required")
        if args.family == "bm":
            if args.m is None:
                raise ConfigError("--m: required for --family bm")
            if args.m < 2:
                raise ConfigError(f"--m: must be at least 2, got {args.m}")
        if args.n < 3:
            raise ConfigError(f"--n: must be at least 3, got {args.n}")
        if args.window < 3:
            raise ConfigError(f"--window: must be at least 3, got {args.window}")
        if args.trials < 1:
            raise ConfigError(f"--trials: must be positive, got {args.trials}")
        return cls(args.command, args.family, args.n, args.m, args.double, args.seed, args.trials,
                   args.window, args.theta, parse_start(args.start) if args.start else None, args.out)


def parse_start(text: str) -> SurfacePoint:
    try:
        xy, poly = text.split("@")
        x, y = xy.split(",")
        return SurfacePoint(int(poly), float(x), float(y))
    except ValueError:
        raise ConfigError(f"--start: expected x,y@polygon, got {text!r}") from None


def build(cfg: RunConfig) -> Surface:
    try:
        s = build_surface(cfg.family, cfg.n, cfg.m, cfg.doubled)
    except InvalidParams as exc:
        raise ConfigError(f"--family {cfg.family}: {exc}") from None
    report = validate_special(s)
    if not report.ok:
        raise ConfigError("surface failed validation: " + "; ".join(report.failures()))
    return s


def trajectory(s: Surface, cfg: RunConfig) -> Trajectory:
    rng = np.random.default_rng(cfg.seed)
    sampled = random_trajectory(s, rng, theta_s(s))
    start = cfg.start if cfg.start is not None else sampled.start
    theta = cfg.theta if cfg.theta is not None else sampled.theta
    return Trajectory(start, theta)


def emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_surface(s: Surface, cfg: RunConfig, args) -> int:
    if args.action == "build" or args.json:
        emit(dumps(surface_to_json(s)), cfg.out)
        return 0
    rows = [f"{s.family} {s.params}: {len(s.polygons)} polygons, {len(s.labels)} labels"]
    for k, poly in enumerate(s.polygons):
        rows.append(f"polygon {k}")
        for i in range(poly.n_edges):
            (ax, ay), _ = poly.edge(i)
            k2, i2 = s.partner((k, i))
            rows.append(f"  edge {i}: label {poly.edge_labels[i]:>3}  from ({ax:.6f}, {ay:.6f})  "
                        f"glued to polygon {k2} edge {i2}")
    emit("\n".join(rows) + "\n", cfg.out)
    return 0


def cmd_cylinders(s: Surface, cfg: RunConfig, args) -> int:
    rep = perfectness(s)
    data = {
        "perfect": rep.is_perfect,
        "common_modulus": rep.common_modulus,
        "theta_s": theta_s(s),
        "cylinders": [c.to_json() for c in decompose(s)],
    }
    emit(dumps(data), cfg.out)
    if args.svg:
        emit(render_svg(s, cylinders=True), args.svg)
    return 0


def cmd_render(s: Surface, cfg: RunConfig, args) -> int:
    overlay = None
    if args.trajectory or cfg.theta is not None or cfg.start is not None:
        t = trajectory(s, cfg)
        try:
            seq = flow(s, t, cfg.window)
        except VertexHit as hit:
            seq = hit.partial
        overlay = (t.start, seq)
    emit(render_svg(s, cylinders=args.cylinders, trajectory=overlay, sheared=args.sheared), cfg.out)
    return 0


def cmd_flow(s: Surface, cfg: RunConfig, args) -> int:
    t = trajectory(s, cfg)
    status = 0
    try:
        seq = flow(s, t, cfg.window)
    except VertexHit as hit:
        seq, status = hit.partial, 1
        sys.stderr.write(f"{hit}\n")
    if args.json:
        data = {"start": [t.start.x, t.start.y, t.start.polygon], "theta": t.theta,
                "labels": seq.labels,
                "crossings": [{"polygon": x.polygon, "edge": x.edge, "label": x.label,
                               "point": list(x.point), "param": x.param} for x in seq.crossings]}
        emit(dumps(data), cfg.out)
    else:
        emit(" ".join(str(x) for x in seq.labels) + "\n", cfg.out)
    if args.svg:
        emit(render_svg(s, trajectory=(t.start, seq)), args.svg)
    return status


def cmd_derive(s: Surface, cfg: RunConfig, args) -> int:
    t = trajectory(s, cfg)
    seq = flow(s, t, cfg.window)
    if args.mode == "combinatorial":
        out = derivation.derive_combinatorial(s, seq).labels
    elif args.mode == "sandwich":
        out = derivation.sandwich_derive(seq).labels
    else:
        geo = geometric_derive(s, t, seq.crossings[-1].param)
        out = [x.label for x in geo.crossings if x.param > seq.crossings[0].param]
    if args.json:
        emit(dumps({"mode": args.mode, "original": seq.labels, "derived": out, "theta": t.theta}), cfg.out)
    else:
        emit(" ".join(map(str, seq.labels)) + "\n" + " ".join(map(str, out)) + "\n", cfg.out)
    return 0


def cmd_words(s: Surface, cfg: RunConfig, args) -> int:
    words = enumerate_words(s)
    if args.json:
        emit(dumps([{"word": list(w.labels), "case": w.case, "kept": w.kept, "sandwiched": w.sandwiched}
                    for w in words]), cfg.out)
    else:
        emit(format_words(words) + "\n", cfg.out)
    return 0


def cmd_diagram(s: Surface, cfg: RunConfig, args) -> int:
    d = transition_diagram(s)
    rows = grid_rows(s.params["m"], s.params["n"]) if s.family == "bouw-moller" else None
    if args.dot:
        emit(d.to_dot(rows), cfg.out)
        return 0
    data = d.to_json()
    if rows is not None:
        rep = check_grid_shape(d, s.params["m"], s.params["n"])
        data["grid"] = {"rows": rows, "ok": rep.ok, "identity": rep.identity}
    emit(dumps(data), cfg.out)
    return 0


def cmd_verify(s: Surface, cfg: RunConfig, args) -> int:
    report = run_checks(s, trials=cfg.trials, window=cfg.window, seed=cfg.seed)
    if args.json:
        emit(dumps(report.to_json()), cfg.out)
    else:
        emit(report.text() + "\n", cfg.out)
    return 0 if report.ok else 1


COMMANDS = {
    "surface": cmd_surface, "cylinders": cmd_cylinders, "render": cmd_render, "flow": cmd_flow,
    "derive": cmd_derive, "words": cmd_words, "diagram": cmd_diagram, "verify": cmd_verify,
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=["regular", "bm"], default="regular")
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--double", action="store_true", help="double regular polygon surface")
    common.add_argument("--theta", type=float, help="trajectory angle in radians")
    common.add_argument("--start", help="start point as x,y@polygon")
    common.add_argument("--window", "-N", type=int, default=100, help="number of crossings")
    common.add_argument("--trials", type=int, default=200)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the main output here instead of stdout")
    common.add_argument("--json", action="store_true")

    parser = argparse.ArgumentParser(prog="perfectsurf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("surface", parents=[common], help="build or dump a surface")
    p.add_argument("action", choices=["build", "dump"])
    p = sub.add_parser("cylinders", parents=[common], help="cylinder decomposition report")
    p.add_argument("--svg", help="also write a shaded SVG here")
    p = sub.add_parser("render", parents=[common], help="draw the surface as SVG")
    p.add_argument("--cylinders", action="store_true")
    p.add_argument("--sheared", action="store_true", help="overlay flip-sheared gluing edges")
    p.add_argument("--trajectory", action="store_true", help="overlay a (sampled) trajectory")
    p = sub.add_parser("flow", parents=[common], help="cutting sequence of a trajectory")
    p.add_argument("--svg", help="also write an SVG with the trajectory")
    p = sub.add_parser("derive", parents=[common], help="derived sequence of a trajectory")
    p.add_argument("--mode", choices=["combinatorial", "sandwich", "geometric"], default="combinatorial")
    sub.add_parser("words", parents=[common], help="three-letter words and their verdicts")
    p = sub.add_parser("diagram", parents=[common], help="transition diagram")
    p.add_argument("--dot", action="store_true", help="Graphviz output")
    sub.add_parser("verify", parents=[common], help="run the property checks")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        s = build(cfg)
        return COMMANDS[args.command](s, cfg, args)
    except ConfigError as exc:
        parser.error(str(exc))
    except (derivation.WrongFamily, derivation.Inadmissible, VertexHit) as exc:
        sys.stderr.write(f"perfectsurf: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
