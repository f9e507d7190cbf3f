"""Command line driver: exploration, verification, dynamics, figure, report.

Exit codes: 0 all checks passed, 2 usage or configuration error, 3 a
mathematical Finding (a run produced a witness against an invariant this
package exists to check).

All outputs are deterministic for a fixed config: JSON with sorted keys,
CSV with LF line endings, no timestamps, and files written atomically.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .algebra import (
    ALPHA,
    AlgebraicPoint,
    AlphaContext,
    AlphaSpec,
    canonical_key,
    make_alpha,
    point,
)
from .dynamics import (
    KMatching,
    Vertex,
    assignment_from_targets,
    check_nested_rays,
    extract_matching,
    kmatching_from_assignment,
    random_kmatching,
    run_dynamics,
)
from .errors import (
    CLAIM1_VIOLATION,
    ConfigError,
    EquigraphError,
    Finding,
    VertexOutOfRangeError,
)
from .graph import IntervalGraph, Side, edge_polygon, vertex_record
from .group import MAX_BALL_RADIUS
from .pathcert import verify_lemma

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FINDING = 3

DEFAULTS = {
    "alpha": "-1,1,2,1",
    "seed": "0",
    "ball_radius": "8",
    "samples": "200",
    "bfs_budget": "10000",
    "k_values": "3,5,7,9",
    "window": "200",
    "instances": "500",
    "output_dir": "out",
}


@dataclass(frozen=True)
class RunConfig:
    alpha: AlphaSpec
    seed: int
    ball_radius: int
    samples: int
    bfs_budget: int
    k_values: tuple[int, ...]
    window: int
    instances: int
    output_dir: Path


# ----------------------------------------------------------------------
# config parsing


def parse_alpha_spec(text: str) -> AlphaSpec:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ConfigError(f"alpha needs four integers p,q,d,r, got {text!r}")
    try:
        p, q, d, r = (int(x) for x in parts)
    except ValueError as exc:
        raise ConfigError(f"alpha components must be integers: {text!r}") from exc
    return AlphaSpec(p, q, d, r)


def _parse_int(raw: dict, key: str) -> int:
    try:
        return int(raw[key])
    except ValueError as exc:
        raise ConfigError(f"{key} must be an integer, got {raw[key]!r}") from exc


def _typed_config(raw: dict) -> RunConfig:
    alpha = parse_alpha_spec(raw["alpha"])
    try:
        make_alpha(alpha)  # full validation: positive non-square d, 0 < alpha < 1
    except EquigraphError as exc:
        raise ConfigError(f"bad alpha: {exc}") from exc
    seed = _parse_int(raw, "seed")
    ball_radius = _parse_int(raw, "ball_radius")
    samples = _parse_int(raw, "samples")
    bfs_budget = _parse_int(raw, "bfs_budget")
    window = _parse_int(raw, "window")
    instances = _parse_int(raw, "instances")
    if seed < 0:
        raise ConfigError(f"seed must be nonnegative, got {seed}")
    if not 0 <= ball_radius <= MAX_BALL_RADIUS:
        raise ConfigError(
            f"ball_radius must be in [0, {MAX_BALL_RADIUS}], got {ball_radius}"
        )
    if samples < 0:
        raise ConfigError(f"samples must be nonnegative, got {samples}")
    if bfs_budget <= 0:
        raise ConfigError(f"bfs_budget must be positive, got {bfs_budget}")
    if window <= 0:
        raise ConfigError(f"window must be positive, got {window}")
    if instances < 0:
        raise ConfigError(f"instances must be nonnegative, got {instances}")
    try:
        k_values = tuple(int(x) for x in raw["k_values"].split(","))
    except ValueError as exc:
        raise ConfigError(f"k_values must be integers: {raw['k_values']!r}") from exc
    if not k_values:
        raise ConfigError("k_values must not be empty")
    for k in k_values:
        if k <= 0 or k % 2 == 0:
            raise ConfigError(f"every K must be an odd positive integer, got {k}")
    if window < max(k_values):
        raise ConfigError(f"window {window} smaller than largest K {max(k_values)}")
    return RunConfig(
        alpha=alpha,
        seed=seed,
        ball_radius=ball_radius,
        samples=samples,
        bfs_budget=bfs_budget,
        k_values=k_values,
        window=window,
        instances=instances,
        output_dir=Path(raw["output_dir"]),
    )


def load_config(
    config_path: Optional[str],
    seed: Optional[int] = None,
    alpha: Optional[str] = None,
    out: Optional[str] = None,
) -> RunConfig:
    """Defaults, then the key=value config file, then CLI overrides."""
    raw = dict(DEFAULTS)
    if config_path is not None:
        path = Path(config_path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {config_path}")
        for lineno, line in enumerate(path.read_text().splitlines(), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            key, sep, value = stripped.partition("=")
            if not sep:
                raise ConfigError(f"{config_path}:{lineno}: expected key=value")
            key, value = key.strip(), value.strip()
            if key not in DEFAULTS:
                raise ConfigError(f"{config_path}:{lineno}: unknown key {key!r}")
            raw[key] = value
    if seed is not None:
        raw["seed"] = str(seed)
    if alpha is not None:
        raw["alpha"] = alpha
    if out is not None:
        raw["output_dir"] = out
    return _typed_config(raw)


def config_echo(cfg: RunConfig) -> dict:
    return {
        "alpha": [cfg.alpha.p, cfg.alpha.q, cfg.alpha.d, cfg.alpha.r],
        "seed": cfg.seed,
        "ball_radius": cfg.ball_radius,
        "samples": cfg.samples,
        "bfs_budget": cfg.bfs_budget,
        "k_values": list(cfg.k_values),
        "window": cfg.window,
        "instances": cfg.instances,
        "output_dir": str(cfg.output_dir),
        "version": __version__,
    }


# ----------------------------------------------------------------------
# deterministic output helpers


def _write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(text.encode("utf-8"))
    os.replace(tmp, path)


def _write_json(path: Path, obj: dict) -> None:
    _write_text(path, json.dumps(obj, sort_keys=True, indent=2, default=str) + "\n")


def _write_csv(
    path: Path,
    comments: Sequence[tuple[str, object]],
    header: str,
    rows: Sequence[Sequence[object]],
) -> None:
    lines = [f"# {key}={value}" for key, value in comments]
    lines.append(header)
    lines.extend(",".join(str(cell) for cell in row) for row in rows)
    _write_text(path, "\n".join(lines) + "\n")


def _matching_record(m: KMatching) -> dict:
    return {
        "k": m.k,
        "windows": {str(pid): list(m.windows[pid]) for pid in m.path_ids},
        "deviations": {
            str(pid): {str(a): t for a, t in sorted(m.deviations[pid].items())}
            for pid in m.path_ids
        },
    }


# ----------------------------------------------------------------------
# subcommands


def parse_point_text(text: str) -> AlgebraicPoint:
    """Parse "u" or "u,v" (u, v rational) as the point u + v*alpha."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (1, 2):
        raise ConfigError(f"point must be 'u' or 'u,v', got {text!r}")
    try:
        u = Fraction(parts[0])
        v = Fraction(parts[1]) if len(parts) == 2 else Fraction(0)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"point components must be rational: {text!r}") from exc
    return AlgebraicPoint(u, v)


def cmd_explore(cfg: RunConfig, point_text: str, side_text: str) -> int:
    ctx = make_alpha(cfg.alpha)
    graph = IntervalGraph(ctx)
    pt = parse_point_text(point_text)
    side = Side.I if side_text == "I" else Side.J
    try:
        vtx = graph.vertex(side, pt)
    except VertexOutOfRangeError as exc:
        raise ConfigError(str(exc)) from exc
    view = graph.explore_component(vtx, cfg.bfs_budget)
    report = {
        "command": "explore",
        "params": {**config_echo(cfg), "point": point_text, "side": side.value},
        "origin": vertex_record(vtx),
        "origin_degree": graph.degree(vtx),
        "origin_index": view.origin_index,
        "component": view.to_record(),
        "visited_head": [vertex_record(w) for w in view.visited[:8]],
        "visited_tail": [vertex_record(w) for w in view.visited[-8:]],
    }
    target = cfg.output_dir / "explore.json"
    _write_json(target, report)
    print(
        f"explore: {view.kind} component from ({side.value}, {pt}), "
        f"{len(view.visited)} vertices seen; wrote {target}"
    )
    return EXIT_OK


def cmd_verify_lemma(cfg: RunConfig) -> int:
    ctx = make_alpha(cfg.alpha)
    graph = IntervalGraph(ctx)
    report = verify_lemma(
        graph, cfg.ball_radius, cfg.samples, cfg.seed, bfs_budget=cfg.bfs_budget
    )
    out = {"command": "verify-lemma", "params": config_echo(cfg), **report}
    target = cfg.output_dir / "verify_lemma.json"
    _write_json(target, out)
    n_violations = len(report["violations"])
    print(
        f"verify-lemma: {report['checks']} checks over {report['ball_size']} "
        f"elements, {n_violations} violations; wrote {target}"
    )
    return EXIT_FINDING if n_violations else EXIT_OK


def _pairs_cell(pairs: Sequence[tuple[Vertex, Vertex]]) -> str:
    return ";".join(f"{x[0]}:{x[1]}:{y[1]}" for x, y in pairs)


def _assert_converged(
    label: str, final: KMatching, initial_cost: int, iterations: int, sum_s: int
) -> KMatching:
    """Check every post-convergence invariant; return the extracted matching."""
    witness = {
        "instance": label,
        "initial_cost": initial_cost,
        "iterations": iterations,
        "sum_s": sum_s,
    }
    if iterations > initial_cost:
        raise Finding(CLAIM1_VIOLATION, "iteration count exceeded cost bound", witness)
    if sum_s > initial_cost:
        raise Finding(CLAIM1_VIOLATION, "sum of |S| exceeded cost bound", witness)
    if not check_nested_rays(final):
        raise Finding(CLAIM1_VIOLATION, "converged matching has facing rays", witness)
    extracted = extract_matching(final)
    if not extracted.is_standard:
        raise Finding(
            CLAIM1_VIOLATION, "extraction is not the standard matching", witness
        )
    return extracted


def _bridge_suite(cfg: RunConfig) -> dict:
    """Dynamics on a matching induced by group elements on a real component.

    Explores a window of the component through (I, 1/2), assigns isometry
    pieces realizing two block transpositions, converts them to a matching
    with the displacement bound derived from max |b|, and runs the
    improvement dynamics down to the standard matching.
    """
    ctx = make_alpha(cfg.alpha)
    graph = IntervalGraph(ctx)
    origin = graph.vertex(Side.I, point(Fraction(1, 2)))
    view = graph.explore_component(origin, budget=64)
    targets = {-4: -1, -2: -3, 0: 3, 2: 1}
    assignment = assignment_from_targets(view, targets)
    m0 = kmatching_from_assignment(view, assignment)
    final, trace = run_dynamics(m0)
    extracted = _assert_converged(
        "bridge", final, trace.initial_cost, trace.iterations, trace.sum_s
    )
    return {
        "origin": vertex_record(origin),
        "view_kind": view.kind,
        "targets": {str(a): t for a, t in sorted(targets.items())},
        "pieces": [[lo, hi, [el.a, el.b, el.c]] for lo, hi, el in assignment],
        "k": m0.k,
        "initial_cost": trace.initial_cost,
        "iterations": trace.iterations,
        "sum_s": trace.sum_s,
        "final_matching": _matching_record(final),
        "extracted_standard": extracted.is_standard,
    }


def cmd_dynamics(cfg: RunConfig) -> int:
    rows_by_k: dict[int, list[tuple]] = {k: [] for k in cfg.k_values}
    instance_records = []
    max_iterations = 0
    for i in range(cfg.instances):
        k = cfg.k_values[i % len(cfg.k_values)]
        inst_seed = cfg.seed * 1_000_003 + i
        m0 = random_kmatching(cfg.window, k, inst_seed)
        final, trace = run_dynamics(m0)
        extracted = _assert_converged(
            str(i), final, trace.initial_cost, trace.iterations, trace.sum_s
        )
        for rec in trace.records:
            rows_by_k[k].append(
                (i, rec.n, rec.s_size, rec.cost, _pairs_cell(rec.rewired))
            )
        max_iterations = max(max_iterations, trace.iterations)
        instance_records.append(
            {
                "instance": i,
                "k": k,
                "seed": inst_seed,
                "initial_cost": trace.initial_cost,
                "iterations": trace.iterations,
                "sum_s": trace.sum_s,
                "final_cost": trace.final_cost,
                "final_standard": final.is_standard,
                "extracted_standard": extracted.is_standard,
            }
        )
    bridge = _bridge_suite(cfg)
    for k in cfg.k_values:
        comments = [
            ("command", "dynamics"),
            ("seed", cfg.seed),
            ("window", cfg.window),
            ("instances", cfg.instances),
            ("k", k),
        ]
        _write_csv(
            cfg.output_dir / f"trace_K{k}.csv",
            comments,
            "instance,n,S_size,cost,rewired_pairs",
            rows_by_k[k],
        )
    summary = {
        "command": "dynamics",
        "params": config_echo(cfg),
        "totals": {
            "instances": cfg.instances,
            "converged": len(instance_records),
            "max_iterations": max_iterations,
            "by_k": {
                str(k): sum(1 for r in instance_records if r["k"] == k)
                for k in cfg.k_values
            },
        },
        "instances": instance_records,
        "bridge": bridge,
    }
    target = cfg.output_dir / "dynamics_summary.json"
    _write_json(target, summary)
    print(
        f"dynamics: {cfg.instances} random instances plus bridge suite "
        f"converged to standard; wrote {target}"
    )
    return EXIT_OK


def render_figure(ctx: AlphaContext) -> str:
    """SVG 1.1 drawing of the closed edge-set polygon in I x J.

    Geometry is computed exactly; floats appear only at render time.  The
    <desc> element carries the exact corners as (nu, du, nv, dv) tuples
    (numerator/denominator of the rational and alpha parts) for i and j.
    """
    corners = edge_polygon(ctx)
    margin, scale = 60.0, 440.0
    j_top = ctx.to_float(ALPHA) + 1.0

    def sx(i_val: float) -> str:
        return f"{margin + scale * i_val:.6f}"

    def sy(j_val: float) -> str:
        return f"{margin + scale * (j_top - j_val):.6f}"

    exact = [(canonical_key(ci), canonical_key(cj)) for ci, cj in corners]
    rendered = [(ctx.to_float(ci), ctx.to_float(cj)) for ci, cj in corners]
    poly_points = " ".join(f"{sx(px)},{sy(py)}" for px, py in rendered)
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="560" height="560" viewBox="0 0 560 560">',
        "<title>edge-set polygon of the interval graph</title>",
        f"<desc>exact corners (i;j) as ((nu,du,nv,dv),(nu,du,nv,dv)) "
        f"with x = nu/du + (nv/dv)*alpha: {exact!r}</desc>",
        f'<rect x="{margin:.6f}" y="{margin:.6f}" width="{scale:.6f}" '
        f'height="{scale:.6f}" fill="none" stroke="#999999" stroke-width="1"/>',
        f'<polygon points="{poly_points}" fill="#dbe9f6" fill-opacity="0.5" '
        'stroke="#1f5fa8" stroke-width="2"/>',
    ]
    for (ci, cj), (px, py) in zip(corners, rendered):
        lines.append(
            f'<circle cx="{sx(px)}" cy="{sy(py)}" r="4" fill="#1f5fa8"/>'
        )
        label_x = float(sx(px)) + 9.0
        label_y = float(sy(py)) - 9.0
        lines.append(
            f'<text x="{label_x:.6f}" y="{label_y:.6f}" font-size="15" '
            f'font-family="monospace" fill="#222222">({ci}, {cj})</text>'
        )
    axis = [
        (sx(0.0), f"{margin + scale + 24:.6f}", "0"),
        (sx(1.0), f"{margin + scale + 24:.6f}", "1"),
    ]
    for x_pos, y_pos, text in axis:
        lines.append(
            f'<text x="{x_pos}" y="{y_pos}" font-size="15" '
            f'font-family="monospace" fill="#222222" text-anchor="middle">{text}</text>'
        )
    j_lo_f = ctx.to_float(ALPHA)
    for j_val, text in ((j_lo_f, "a"), (j_top, "1+a")):
        lines.append(
            f'<text x="{margin - 14:.6f}" y="{sy(j_val)}" font-size="15" '
            f'font-family="monospace" fill="#222222" text-anchor="end">{text}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def cmd_figure(cfg: RunConfig) -> int:
    ctx = make_alpha(cfg.alpha)
    svg = render_figure(ctx)
    target = cfg.output_dir / "figure.svg"
    _write_text(target, svg)
    print(f"figure: wrote {target}")
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    out = cfg.output_dir
    needed = {
        "explore": "explore.json",
        "verify_lemma": "verify_lemma.json",
        "dynamics": "dynamics_summary.json",
        "figure": "figure.svg",
    }
    missing = sorted(
        name for name in needed.values() if not (out / name).is_file()
    )
    if missing:
        raise ConfigError(f"missing inputs in {out}: {', '.join(missing)}")
    svg_bytes = (out / needed["figure"]).read_bytes()
    merged = {
        "version": __version__,
        "config": config_echo(cfg),
        "explore": json.loads((out / needed["explore"]).read_text()),
        "verify_lemma": json.loads((out / needed["verify_lemma"]).read_text()),
        "dynamics": json.loads((out / needed["dynamics"]).read_text()),
        "figure": {
            "file": needed["figure"],
            "bytes": len(svg_bytes),
            "sha256": hashlib.sha256(svg_bytes).hexdigest(),
        },
    }
    target = out / "report.json"
    _write_json(target, merged)
    print(f"report: wrote {target}")
    return EXIT_OK


# ----------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equigraph",
        description=(
            "Exact checks for an interval isometry graph: component "
            "exploration, distance certificates, matching dynamics, and "
            "the edge-set figure."
        ),
    )
    parser.add_argument("--config", metavar="PATH", help="key=value config file")
    parser.add_argument("--seed", type=int, metavar="N", help="override seed")
    parser.add_argument("--out", metavar="DIR", help="override output directory")
    parser.add_argument(
        "--alpha", metavar="p,q,d,r", help="override alpha = (p + q*sqrt(d)) / r"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    explore = sub.add_parser("explore", help="walk and classify one component")
    explore.add_argument(
        "--point", default="1/2", metavar="u[,v]", help="origin point u + v*alpha"
    )
    explore.add_argument("--side", default="I", choices=("I", "J"))
    sub.add_parser("verify-lemma", help="check distance certificates over a ball")
    sub.add_parser("dynamics", help="run the matching-improvement suites")
    sub.add_parser("figure", help="draw the edge-set polygon as SVG")
    sub.add_parser("report", help="merge all outputs into one JSON report")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, seed=args.seed, alpha=args.alpha, out=args.out)
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "explore":
            return cmd_explore(cfg, args.point, args.side)
        if args.command == "verify-lemma":
            return cmd_verify_lemma(cfg)
        if args.command == "dynamics":
            return cmd_dynamics(cfg)
        if args.command == "figure":
            return cmd_figure(cfg)
        if args.command == "report":
            return cmd_report(cfg)
        raise ConfigError(f"unknown command {args.command!r}")  # pragma: no cover
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Finding as finding:
        payload = {
            "finding": finding.kind,
            "message": finding.message,
            "witness": finding.witness,
        }
        print(json.dumps(payload, sort_keys=True, default=str), file=sys.stderr)
        return EXIT_FINDING


if __name__ == "__main__":
    raise SystemExit(main())
