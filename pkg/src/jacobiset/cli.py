"""Command-line front end.

Subcommands: ``stats`` (measures of an input field), ``simplify`` (the
collapse algorithm), ``baseline`` (smoothing filters and Loop
subdivision), ``render`` (SVG), ``graph`` (neighborhood graph export),
and ``compare`` (measures table across inputs and methods).

Exit codes: 0 success, 2 input/validation error, 64 usage error. Every
command that writes an output also writes ``<output>.manifest.json``
recording the invocation. ``JSS_THREADS`` caps worker parallelism in
``compare``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from time import perf_counter

from . import __version__
from .baselines import FilterSpec, binomial_filter, gaussian_filter, loop_subdivide
from .collapse import simplify
from .fileio import (
    ParseError,
    load_field,
    load_sgf,
    save_bsf,
    save_sgf,
    sniff_format,
)
from .jacobi import measures
from .mesh import MeshError
from .regions import VARIANTS, graph_to_dot, graph_to_json, neighborhood_graph

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_USAGE = 64

_METHODS = ("original", "ca-a", "ca-b", "ca-c", "ca-d", "binomial", "gaussian", "loop")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunManifest:
    """Record of one command invocation, written next to its outputs."""

    command: str
    inputs: list
    parameters: dict
    outputs: list
    elapsed_ms: float
    tool_version: str = __version__

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "tool_version": self.tool_version,
            "inputs": self.inputs,
            "parameters": self.parameters,
            "outputs": self.outputs,
            "elapsed_ms": self.elapsed_ms,
        }


def _write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _write_manifest(anchor_path, manifest: RunManifest) -> None:
    _write_json(f"{anchor_path}.manifest.json", manifest.to_dict())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jacobiset", description=__doc__)
    parser.add_argument("--version", action="version", version=f"jacobiset {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", help="measures of an input field")
    p.add_argument("input")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--out", help="also write the measures as JSON")

    p = sub.add_parser("simplify", help="collapse low-hypervolume regions")
    p.add_argument("input")
    p.add_argument("--variant", choices=VARIANTS, default="A")
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--out", required=True, help="simplified field (BSF)")
    p.add_argument("--report", help="collapse report (JSON)")
    p.add_argument("--epsilon", type=float, default=0.0)

    p = sub.add_parser("baseline", help="smoothing filters / Loop subdivision")
    p.add_argument("input")
    p.add_argument("--method", choices=("binomial", "gaussian", "loop"), required=True)
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--sigma", type=float, default=1000.0)
    p.add_argument("--truncation", type=float, default=3.0)
    p.add_argument("--boundary", choices=("clamp", "mirror"), default="clamp")
    p.add_argument("--steps", type=int, default=4)
    p.add_argument("--out", required=True)

    p = sub.add_parser("render", help="render the field to SVG")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--show-jacobi", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--saturation-scale", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.0)

    p = sub.add_parser("graph", help="export the neighborhood graph")
    p.add_argument("input")
    p.add_argument("--variant", choices=VARIANTS, default="A")
    p.add_argument("--out", required=True, help="*.dot or *.json")
    p.add_argument("--epsilon", type=float, default=0.0)

    p = sub.add_parser("compare", help="measures table across inputs and methods")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--methods", nargs="+", choices=_METHODS, required=True)
    p.add_argument("--format", choices=("csv", "markdown"), default="markdown")
    p.add_argument("--out", help="write the table to a file instead of stdout")
    p.add_argument("--threshold", type=float, default=0.0001)
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--sigma", type=float, default=1000.0)
    p.add_argument("--truncation", type=float, default=3.0)
    p.add_argument("--boundary", choices=("clamp", "mirror"), default="clamp")
    p.add_argument("--steps", type=int, default=4)
    p.add_argument("--epsilon", type=float, default=0.0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = {
        "stats": cmd_stats,
        "simplify": cmd_simplify,
        "baseline": cmd_baseline,
        "render": cmd_render,
        "graph": cmd_graph,
        "compare": cmd_compare,
    }[args.command]
    try:
        return handler(args)
    except (ParseError, MeshError, OSError, ValueError, TypeError) as exc:
        print(f"jacobiset {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())


def cmd_stats(args) -> int:
    t0 = perf_counter()
    field = load_field(args.input)
    stats = measures(field, args.epsilon)
    regions_per_variant = {}
    for v in VARIANTS:
        _, _, regs, _ = neighborhood_graph(field, v, args.epsilon)
        regions_per_variant[v] = len(regs)
    payload = {
        "length": stats["length"],
        "components": stats["components"],
        "triangles": field.n_triangles,
        "regions_per_variant": regions_per_variant,
    }
    print(json.dumps(payload, indent=2))
    if args.out:
        _write_json(args.out, payload)
        _write_manifest(
            args.out,
            RunManifest(
                command="stats",
                inputs=[args.input],
                parameters={"epsilon": args.epsilon},
                outputs=[args.out],
                elapsed_ms=(perf_counter() - t0) * 1000.0,
            ),
        )
    return EXIT_OK


def cmd_simplify(args) -> int:
    t0 = perf_counter()
    field = load_field(args.input)
    report = simplify(
        field, variant=args.variant, threshold=args.threshold, epsilon=args.epsilon
    )
    save_bsf(field, args.out)
    outputs = [args.out]
    if args.report:
        # The report file stays byte-reproducible across runs; wall time
        # lives in the manifest instead.
        _write_json(args.report, report.to_dict(include_elapsed=False))
        outputs.append(args.report)
    _write_manifest(
        args.out,
        RunManifest(
            command="simplify",
            inputs=[args.input],
            parameters={
                "variant": args.variant,
                "threshold": args.threshold,
                "epsilon": args.epsilon,
            },
            outputs=outputs,
            elapsed_ms=(perf_counter() - t0) * 1000.0,
        ),
    )
    print(
        f"simplify: {report.status.value}, collapsed {report.collapsed_cells} cells "
        f"in {report.iterations} sweeps; components "
        f"{report.before['components']} -> {report.after['components']}, "
        f"length {report.before['length']:.6g} -> {report.after['length']:.6g}"
    )
    return EXIT_OK


def cmd_baseline(args) -> int:
    t0 = perf_counter()
    fmt = sniff_format(args.input)
    if args.method in ("binomial", "gaussian"):
        if fmt != "sgf":
            print(
                f"jacobiset baseline: error: --method {args.method} requires "
                "structured grid (SGF) input",
                file=sys.stderr,
            )
            return EXIT_INPUT
        grid = load_sgf(args.input)
        spec = FilterSpec(
            kind=args.method,
            radius=args.radius,
            sigma=args.sigma,
            truncation=args.truncation,
            boundary=args.boundary,
        )
        if args.method == "gaussian":
            extent = max(grid.width, grid.height)
            if args.truncation * args.sigma > extent:
                print(
                    f"warning: truncation*sigma = {args.truncation * args.sigma:g} "
                    f"exceeds the grid extent {extent}; the kernel degenerates to "
                    "a near-uniform average",
                    file=sys.stderr,
                )
            out = gaussian_filter(grid, spec)
        else:
            out = binomial_filter(grid, spec)
        save_sgf(out, args.out)
        parameters = {
            "method": args.method,
            "radius": args.radius,
            "sigma": args.sigma,
            "truncation": args.truncation,
            "boundary": args.boundary,
        }
    else:
        field = load_field(args.input)
        out_field = loop_subdivide(field, args.steps)
        save_bsf(out_field, args.out)
        parameters = {"method": "loop", "steps": args.steps}
    _write_manifest(
        args.out,
        RunManifest(
            command="baseline",
            inputs=[args.input],
            parameters=parameters,
            outputs=[args.out],
            elapsed_ms=(perf_counter() - t0) * 1000.0,
        ),
    )
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import render_svg

    t0 = perf_counter()
    field = load_field(args.input)
    svg = render_svg(
        field,
        show_jacobi=args.show_jacobi,
        saturation_scale=args.saturation_scale,
        epsilon=args.epsilon,
    )
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    _write_manifest(
        args.out,
        RunManifest(
            command="render",
            inputs=[args.input],
            parameters={
                "show_jacobi": args.show_jacobi,
                "saturation_scale": args.saturation_scale,
                "epsilon": args.epsilon,
            },
            outputs=[args.out],
            elapsed_ms=(perf_counter() - t0) * 1000.0,
        ),
    )
    return EXIT_OK


def cmd_graph(args) -> int:
    t0 = perf_counter()
    field = load_field(args.input)
    _, _, _, graph = neighborhood_graph(field, args.variant, args.epsilon)
    if args.out.endswith(".json"):
        _write_json(args.out, graph_to_json(graph))
    elif args.out.endswith(".dot") or args.out.endswith(".gv"):
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(graph_to_dot(graph))
    else:
        print(
            "jacobiset graph: error: --out must end in .dot, .gv, or .json",
            file=sys.stderr,
        )
        return EXIT_USAGE
    _write_manifest(
        args.out,
        RunManifest(
            command="graph",
            inputs=[args.input],
            parameters={"variant": args.variant, "epsilon": args.epsilon},
            outputs=[args.out],
            elapsed_ms=(perf_counter() - t0) * 1000.0,
        ),
    )
    return EXIT_OK


def _compare_cell(path: str, method: str, args) -> dict:
    eps = args.epsilon
    if method == "original":
        return measures(load_field(path), eps)
    if method.startswith("ca-"):
        field = load_field(path)
        report = simplify(
            field, variant=method[-1].upper(), threshold=args.threshold, epsilon=eps
        )
        return report.after
    if method in ("binomial", "gaussian"):
        if sniff_format(path) != "sgf":
            raise ValueError(f"{method} requires structured grid (SGF) input")
        grid = load_sgf(path)
        spec = FilterSpec(
            kind=method,
            radius=args.radius,
            sigma=args.sigma,
            truncation=args.truncation,
            boundary=args.boundary,
        )
        fn = gaussian_filter if method == "gaussian" else binomial_filter
        return measures(fn(grid, spec).to_tri_field(), eps)
    return measures(loop_subdivide(load_field(path), args.steps), eps)


def cmd_compare(args) -> int:
    cells = [(path, method) for path in args.inputs for method in args.methods]
    workers = max(1, int(os.environ.get("JSS_THREADS", "1")))

    def worker(cell):
        path, method = cell
        try:
            return _compare_cell(path, method, args)
        except (ParseError, MeshError, OSError, ValueError, TypeError) as exc:
            return {"error": str(exc)}

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = dict(zip(cells, pool.map(worker, cells)))
    else:
        results = {cell: worker(cell) for cell in cells}

    ok = sum(1 for r in results.values() if "error" not in r)
    table = _format_compare(args, results)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(table)
    else:
        print(table, end="")
    return EXIT_OK if ok else EXIT_INPUT


def _format_compare(args, results) -> str:
    rows = []
    for path in args.inputs:
        best_len = min(
            (r["length"] for m in args.methods if "error" not in (r := results[(path, m)])),
            default=None,
        )
        best_comp = min(
            (
                r["components"]
                for m in args.methods
                if "error" not in (r := results[(path, m)])
            ),
            default=None,
        )
        for method in args.methods:
            r = results[(path, method)]
            if "error" in r:
                rows.append((path, method, f"error: {r['error']}", "", False, False))
            else:
                rows.append(
                    (
                        path,
                        method,
                        f"{r['length']:.6g}",
                        str(r["components"]),
                        r["length"] == best_len,
                        r["components"] == best_comp,
                    )
                )
    if args.format == "csv":
        out = ["input,method,length,components"]
        for path, method, length, comp, _, _ in rows:
            out.append(f"{path},{method},{length},{comp}")
        return "\n".join(out) + "\n"
    out = [
        "| Input | Method | Length of Jacobi sets | # of components |",
        "| --- | --- | --- | --- |",
    ]
    for path, method, length, comp, is_best_len, is_best_comp in rows:
        length_cell = f"**{length}**" if is_best_len else length
        comp_cell = f"**{comp}**" if is_best_comp else comp
        out.append(f"| {path} | {method} | {length_cell} | {comp_cell} |")
    return "\n".join(out) + "\n"
