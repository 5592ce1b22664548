"""
Command-line front door for linkspace.

Machine-readable reports go to stdout (or `--output`), a banner of effective
options and human summaries go to stderr. Exit codes: 0 success, 2 usage or
malformed input, 3 negative result (not realizable, empty set, out-of-set
stage choice).
"""

from __future__ import annotations

import argparse
import math
import sys
from collections.abc import Sequence
from pathlib import Path

import msgspec

from .config import ConfigError, LinkspaceConfig
from .config_cli import (
    format_value_json,
    get_config_value,
    init_config,
    load_effective_config,
    render_config_json,
    set_config_value,
)
from .graph_core import PinnedFrame, load_graph
from .intervals_arcs import IntervalSet
from .k33_extension import (
    LENGTH_FIELDS,
    K33Lengths,
    configuration_at,
    gamma_set,
    gamma_set_oracle,
    staged_report,
    workspaces_G2,
)
from .moduli import K33_FRAME, generic_component_count, k33_component_count
from .realizability import (
    K4Lengths,
    attempt_realize,
    cayley_menger_det,
    cycle_closure_interval,
    cycle_realizable,
    cycle_survey,
    k4_realizable,
)
from .render import render_realization, render_workspaces
from .schemas import decode_k33_file, encode_report
from .utils.errors import (
    HINTS,
    GraphFormatError,
    GraphTooLargeError,
    LinkspaceError,
    StageChoiceError,
    WorkspaceEmptyError,
    error_response,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NEGATIVE = 3

_STAGE_PREREQUISITES = {"f": 5, "alpha": 6, "beta": 7, "gamma": 8}

LENGTHS_HELP = (
    "Comma-separated lengths or a JSON lengths file. "
    "K33 order: a,b,c,d,e,f,alpha,beta[,gamma] "
    "(a=v1v6, b=v1v2, c=v2v3, d=v3v4, e=v4v5, f=v5v6, alpha=v1v4, beta=v3v6, gamma=v2v5)"
)


class UsageError(LinkspaceError):
    """Raised for option combinations argparse cannot reject on its own."""


def parse_lengths(text: str) -> list[float]:
    """Parse "1,1,3" into floats."""
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise GraphFormatError(f"Invalid lengths: {text!r}") from exc
    if not values:
        raise GraphFormatError("No lengths given")
    bad = [x for x in values if not math.isfinite(x) or x < 0]
    if bad:
        raise GraphFormatError(f"Lengths must be finite and nonnegative, got {bad[0]}")
    return values


def load_k33_lengths(text: str) -> K33Lengths:
    """K33 lengths from an inline list or a JSON lengths file."""
    path = Path(text)
    try:
        if path.suffix == ".json" or path.is_file():
            try:
                doc = decode_k33_file(path.read_bytes())
            except OSError as exc:
                raise GraphFormatError(f"Unable to read lengths file: {path}") from exc
            except (msgspec.ValidationError, msgspec.DecodeError) as exc:
                raise GraphFormatError(f"Invalid lengths file: {exc}") from exc
            return K33Lengths.from_file(doc)
        return K33Lengths.from_sequence(parse_lengths(text))
    except GraphFormatError:
        raise
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def _print_error(message: str, hint: str | None = None) -> None:
    response = error_response(message, hint)
    print(f"Error: {response['error']}", file=sys.stderr)
    if response.get("hint"):
        print(f"Hint: {response['hint']}", file=sys.stderr)


def _banner(command: str, **options: object) -> None:
    shown = " ".join(f"{k}={v}" for k, v in options.items() if v is not None)
    print(f"linkspace {command}: {shown}".rstrip(), file=sys.stderr)


def _pick(flag: object, configured: object) -> object:
    return configured if flag is None else flag


class _Command:
    # Shared state for one subcommand run.

    def __init__(self, args: argparse.Namespace, config: LinkspaceConfig) -> None:
        self.args = args
        self.config = config

    @property
    def seed(self) -> int:
        return int(_pick(self.args.seed, self.config.realize.seed))  # type: ignore[arg-type]

    @property
    def workers(self) -> int:
        return int(_pick(self.args.workers, self.config.sweep.workers))  # type: ignore[arg-type]

    @property
    def resolution(self) -> int:
        return int(_pick(getattr(self.args, "resolution", None), self.config.sweep.resolution))  # type: ignore[arg-type]

    @property
    def restarts(self) -> int:
        return int(_pick(getattr(self.args, "restarts", None), self.config.realize.restarts))  # type: ignore[arg-type]

    @property
    def samples(self) -> int:
        return int(_pick(getattr(self.args, "samples", None), self.config.components.samples))  # type: ignore[arg-type]

    def banner(self, command: str, **options: object) -> None:
        options.setdefault("seed", self.seed)
        _banner(command, **options)

    def require_format(self, *allowed: str) -> str:
        fmt = self.args.format or allowed[0]
        if fmt not in allowed:
            raise UsageError(f"{self.args.command} supports --format {', '.join(allowed)}, not {fmt}")
        return fmt

    def emit(self, payload: bytes | str) -> None:
        data = payload.encode() if isinstance(payload, str) else payload
        output = self.args.output
        if output:
            path = Path(output)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(data)
            print(f"wrote {path}", file=sys.stderr)
        else:
            sys.stdout.write(data.decode())
            sys.stdout.flush()

    def emit_intervals(self, intervals: IntervalSet, report: dict) -> None:
        if self.require_format("json", "csv") == "csv":
            self.emit(intervals.to_csv())
        else:
            self.emit(encode_report(report))


def _cmd_check_cycle(cmd: _Command) -> int:
    lengths = parse_lengths(cmd.args.lengths)
    cmd.banner("check-cycle", lengths=len(lengths))
    ok = cycle_realizable(lengths)
    cmd.require_format("json")
    cmd.emit(encode_report({"lengths": lengths, "realizable": ok}))
    print("realizable" if ok else "not realizable", file=sys.stderr)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _cmd_check_k4(cmd: _Command) -> int:
    try:
        k = K4Lengths.from_sequence(parse_lengths(cmd.args.lengths))
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc
    cmd.banner("check-k4", lengths=6)
    ok = k4_realizable(k)
    cmd.require_format("json")
    cmd.emit(
        encode_report(
            {
                "lengths": {n: getattr(k, n) for n in ("a", "b", "c", "d", "alpha", "beta")},
                "cayley_menger": cayley_menger_det(k),
                "realizable": ok,
            }
        )
    )
    print("realizable" if ok else "not realizable", file=sys.stderr)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _cmd_closure_interval(cmd: _Command) -> int:
    lengths = parse_lengths(cmd.args.lengths)
    cmd.banner("closure-interval", lengths=len(lengths))
    interval = cycle_closure_interval(lengths)
    cmd.emit_intervals(interval, {"path_lengths": lengths, **interval.to_json()})
    print(interval.format(), file=sys.stderr)
    return EXIT_OK


def _cmd_k33_stage(cmd: _Command) -> int:
    lengths = load_k33_lengths(cmd.args.lengths)
    stage = cmd.args.stage
    keep = _STAGE_PREREQUISITES[stage]
    if len(lengths.values()) < keep:
        raise UsageError(
            f"Stage {stage} needs {', '.join(LENGTH_FIELDS[:keep])}; got {lengths.stage} lengths"
        )
    truncated = K33Lengths.from_sequence(lengths.values()[:keep])
    cmd.banner("k33-stage", stage=stage, resolution=cmd.resolution, workers=cmd.workers)
    chain = staged_report(truncated, cmd.resolution, cmd.args.merge_gap, workers=cmd.workers)
    report = chain.reports[-1]
    for r in chain.reports:
        print(f"{r.stage}: {r.feasible_set.format()}", file=sys.stderr)
    cmd.emit_intervals(report.feasible_set, {"lengths": truncated.to_json(), **report.to_json()})
    return EXIT_NEGATIVE if report.feasible_set.is_empty else EXIT_OK


def _cmd_gamma_set(cmd: _Command) -> int:
    lengths = load_k33_lengths(cmd.args.lengths)
    lengths.require("G3")
    lengths = K33Lengths.from_sequence(lengths.values()[:8])
    if cmd.args.oracle:
        cmd.banner("gamma-set", method="oracle", samples=cmd.samples, seed=cmd.seed)
        feasible = gamma_set_oracle(lengths, cmd.samples, cmd.seed, cmd.args.merge_gap)
        payload = {"lengths": lengths.to_json(), "method": "oracle", **feasible.to_json()}
    else:
        cmd.banner("gamma-set", resolution=cmd.resolution, workers=cmd.workers)
        report = gamma_set(
            lengths,
            cmd.resolution,
            cmd.args.merge_gap,
            workers=cmd.workers,
            include_coincident=not cmd.args.generic_only,
        )
        feasible = report.feasible_set
        payload = {"lengths": lengths.to_json(), "method": "sweep", **report.to_json()}
    print(f"gamma: {feasible.format()}", file=sys.stderr)
    cmd.emit_intervals(feasible, payload)
    return EXIT_NEGATIVE if feasible.is_empty else EXIT_OK


def _cmd_components(cmd: _Command) -> int:
    args = cmd.args
    cmd.require_format("json")
    comps = cmd.config.components
    lengths: K33Lengths | None = None
    if args.graph:
        if args.lengths or args.gamma is not None:
            raise UsageError("components takes either --graph or --lengths, not both")
        if args.method == "sweep":
            raise UsageError("The sweep method needs K33 --lengths")
        g = load_graph(Path(args.graph))
        pin = PinnedFrame.parse(args.pin) if args.pin else None
        if pin is None:
            raise UsageError("--pin is required with --graph")
        method = "sampling"
    elif args.lengths:
        lengths = load_k33_lengths(args.lengths)
        if args.gamma is not None:
            lengths = K33Lengths.from_sequence(lengths.values()[:8]).replace(gamma=args.gamma)
        lengths.require("K33")
        method = args.method or "sweep"
        g = lengths.graph()
        pin = PinnedFrame.parse(args.pin) if args.pin else K33_FRAME
        if method == "sweep" and pin != K33_FRAME:
            raise UsageError("The sweep method pins v4 at the origin and v1 on the x-axis")
    else:
        raise UsageError("components needs --graph or --lengths")

    if method == "sweep" and lengths is not None:
        cmd.banner("components", method=method, resolution=cmd.resolution, workers=cmd.workers)
        report = k33_component_count(lengths, cmd.resolution, workers=cmd.workers)
    else:
        knots = _pick(args.knots, comps.knots)
        cmd.banner(
            "components",
            method=method,
            samples=cmd.samples,
            seed=cmd.seed,
            knots=knots,
            workers=cmd.workers,
        )
        report = generic_component_count(
            g,
            pin,
            cmd.samples,
            cmd.seed,
            knots=int(knots),  # type: ignore[arg-type]
            descent_iterations=comps.descent_iterations,
            neighbors=comps.neighbors,
            workers=cmd.workers,
        )
    print(
        f"{report.count} component(s) [{report.method}]: {', '.join(report.dimension_flags)}",
        file=sys.stderr,
    )
    cmd.emit(encode_report(report.to_json()))
    return EXIT_OK if report.count else EXIT_NEGATIVE


def _cmd_realize(cmd: _Command) -> int:
    cmd.require_format("json")
    g = load_graph(Path(cmd.args.graph))
    pin = PinnedFrame.parse(cmd.args.pin) if cmd.args.pin else None
    if pin is not None:
        pin.check(g)
    cmd.banner("realize", restarts=cmd.restarts, seed=cmd.seed, workers=cmd.workers)
    report = attempt_realize(g, cmd.restarts, cmd.seed, workers=cmd.workers, pin=pin)
    print(f"{report.verdict} (best residual {report.best_residual:.3e})", file=sys.stderr)
    cmd.emit(encode_report(report.to_json()))
    return EXIT_OK if report.realized else EXIT_NEGATIVE


def _cmd_cycles(cmd: _Command) -> int:
    g = load_graph(Path(cmd.args.graph))
    cmd.banner("cycles", vertices=len(g.vertices), edges=len(g.edges))
    survey = cycle_survey(g)
    fmt = cmd.require_format("json", "csv")
    if fmt == "csv":
        rows = ["vertices,edges,lengths,realizable"]
        for cycle, ok in survey:
            rows.append(
                ",".join(
                    [
                        " ".join(cycle.vertices),
                        " ".join(str(i) for i in cycle.edge_indices),
                        " ".join(repr(x) for x in cycle.lengths),
                        "true" if ok else "false",
                    ]
                )
            )
        cmd.emit("\n".join(rows) + "\n")
    else:
        cmd.emit(
            encode_report(
                {
                    "cycle_count": len(survey),
                    "all_realizable": all(ok for _, ok in survey),
                    "cycles": [
                        {
                            "vertices": list(c.vertices),
                            "edge_indices": list(c.edge_indices),
                            "lengths": list(c.lengths),
                            "realizable": ok,
                        }
                        for c, ok in survey
                    ],
                }
            )
        )
    print(f"{len(survey)} simple cycle(s)", file=sys.stderr)
    return EXIT_OK


def _cmd_render(cmd: _Command) -> int:
    args = cmd.args
    cmd.require_format("svg")
    scale = int(_pick(args.scale, cmd.config.render.scale))  # type: ignore[arg-type]
    kind = args.kind
    cmd.banner("render", kind=kind, scale=scale, seed=cmd.seed)
    if kind == "workspaces":
        lengths = load_k33_lengths(_required(args.lengths, "--lengths"))
        lengths.require("G2")
        w3, w6 = workspaces_G2(lengths)
        cmd.emit(render_workspaces(w3, w6, lengths.alpha, scale, title="Workspaces of v3 and v6"))  # type: ignore[arg-type]
        return EXIT_OK
    if kind == "sample":
        lengths = load_k33_lengths(_required(args.lengths, "--lengths"))
        lengths.require("G3")
        signs = _parse_signs(args.signs)
        realization = configuration_at(lengths, args.theta, signs)
        if realization is None:
            print("infeasible sweep sample", file=sys.stderr)
            return EXIT_NEGATIVE
        g = K33Lengths.from_sequence(lengths.values()[:8]).graph()
        cmd.emit(render_realization(g, realization, scale, f"theta={args.theta:g} signs={args.signs}"))
        return EXIT_OK
    if kind == "realization":
        g = load_graph(Path(_required(args.graph, "--graph")))
        pin = PinnedFrame.parse(args.pin) if args.pin else None
        report = attempt_realize(g, cmd.restarts, cmd.seed, workers=cmd.workers, pin=pin)
        if not report.realized:
            print(f"no realization found (best residual {report.best_residual:.3e})", file=sys.stderr)
            return EXIT_NEGATIVE
        cmd.emit(render_realization(g, report.best_realization, scale))
        return EXIT_OK

    # components: one SVG per representative into a directory.
    if not args.output:
        raise UsageError("render components needs --output DIR")
    lengths = load_k33_lengths(_required(args.lengths, "--lengths"))
    if args.gamma is not None:
        lengths = K33Lengths.from_sequence(lengths.values()[:8]).replace(gamma=args.gamma)
    lengths.require("K33")
    report = k33_component_count(lengths, cmd.resolution, workers=cmd.workers)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    g = lengths.graph()
    for i, (rep, flag) in enumerate(zip(report.representatives, report.dimension_flags), 1):
        path = out_dir / f"component_{i:02d}.svg"
        svg = render_realization(g, rep.to_realization(), scale, f"component {i} ({flag})")
        path.write_text(svg, encoding="utf-8")
        print(path)
    return EXIT_OK if report.count else EXIT_NEGATIVE


def _required(value: str | None, flag: str) -> str:
    if not value:
        raise UsageError(f"{flag} is required")
    return value


def _parse_signs(text: str) -> tuple[int, int, int]:
    if len(text) != 3 or any(ch not in "+-" for ch in text):
        raise UsageError(f"--signs must be three of '+'/'-' (s5 s3 s2), got {text!r}")
    return tuple(1 if ch == "+" else -1 for ch in text)  # type: ignore[return-value]


def _cmd_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.config_command == "init":
        print(init_config(force=args.force))
    elif args.config_command == "show":
        print(render_config_json())
    elif args.config_command == "get":
        print(format_value_json(get_config_value(args.key)))
    elif args.config_command == "set":
        set_config_value(args.key, args.value)
    else:
        parser.print_help()
        return EXIT_USAGE
    return EXIT_OK


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "csv", "svg"), default=None,
                        help="Output format (default: json, svg for render)")
    parser.add_argument("--output", default=None, help="Write output to this path instead of stdout")
    parser.add_argument("--seed", type=int, default=None,
                        help="Random seed (env LINKSPACE_SEED, config realize.seed)")
    parser.add_argument("--workers", type=int, default=None,
                        help="Worker threads (env LINKSPACE_WORKERS, config sweep.workers)")


def _sweep_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--resolution", type=int, default=None,
                        help="Theta grid size, at least 1000 (env LINKSPACE_RESOLUTION)")
    parser.add_argument("--merge-gap", type=float, default=None,
                        help="Merge intervals closer than this (default 1e-3 times a+...+beta)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linkspace",
        description="Planar distance geometry: realizability, K33 extension stages, moduli components",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("check-cycle", help="Polygon inequality for one cycle")
    p.add_argument("--lengths", required=True, help="Comma-separated cycle lengths")
    _common(p)

    p = sub.add_parser("check-k4", help="Planar realizability of K4 lengths")
    p.add_argument("--lengths", required=True,
                   help="a,b,c,d,alpha,beta (a=v1v2, b=v2v4, c=v3v4, d=v1v3, alpha=v2v3, beta=v1v4)")
    _common(p)

    p = sub.add_parser("closure-interval", help="Lengths closing a path into a realizable cycle")
    p.add_argument("--lengths", required=True, help="Comma-separated path lengths")
    _common(p)

    p = sub.add_parser("k33-stage", help="Feasible set of one K33 extension stage")
    p.add_argument("--lengths", required=True, help=LENGTHS_HELP)
    p.add_argument("--stage", required=True, choices=("f", "alpha", "beta", "gamma"))
    _sweep_options(p)
    _common(p)

    p = sub.add_parser("gamma-set", help="Feasible gamma values for K33 lengths through beta")
    p.add_argument("--lengths", required=True, help=LENGTHS_HELP)
    p.add_argument("--oracle", action="store_true", help="Use the independent p3-angle sampler")
    p.add_argument("--samples", type=int, default=None, help="Oracle sample count")
    p.add_argument("--generic-only", action="store_true",
                   help="Skip configurations where the circles locating v2 coincide")
    _sweep_options(p)
    _common(p)

    p = sub.add_parser("components", help="Count connected components of the pinned moduli space")
    p.add_argument("--graph", default=None, help="JSON graph file (sampling method)")
    p.add_argument("--lengths", default=None, help=LENGTHS_HELP)
    p.add_argument("--gamma", type=float, default=None, help="gamma for K33 lengths given through beta")
    p.add_argument("--pin", default=None, help="Pinned edge as 'origin,axis' (K33 default v4,v1)")
    p.add_argument("--method", choices=("sweep", "sampling"), default=None)
    p.add_argument("--samples", type=int, default=None, help="Sampling starts (env LINKSPACE_SAMPLES)")
    p.add_argument("--knots", type=int, default=None, help="Projected knots per connecting path")
    p.add_argument("--resolution", type=int, default=None, help="Theta grid size for the sweep method")
    _common(p)

    p = sub.add_parser("realize", help="Multi-start search for a realization")
    p.add_argument("--graph", required=True, help="JSON graph file")
    p.add_argument("--restarts", type=int, default=None, help="Random restarts (env LINKSPACE_RESTARTS)")
    p.add_argument("--pin", default=None, help="Pin the result as 'origin,axis'")
    _common(p)

    p = sub.add_parser("cycles", help="Enumerate simple cycles and check each polygon inequality")
    p.add_argument("--graph", required=True, help="JSON graph file")
    _common(p)

    p = sub.add_parser("render", help="SVG figures")
    p.add_argument("kind", choices=("workspaces", "sample", "realization", "components"))
    p.add_argument("--lengths", default=None, help=LENGTHS_HELP)
    p.add_argument("--graph", default=None, help="JSON graph file (realization)")
    p.add_argument("--pin", default=None, help="Pinned edge as 'origin,axis'")
    p.add_argument("--theta", type=float, default=0.0, help="Sweep angle of v6 about v1 (sample)")
    p.add_argument("--signs", default="+++", help="Branch signs s5 s3 s2, e.g. '+-+' (sample)")
    p.add_argument("--gamma", type=float, default=None, help="gamma (components)")
    p.add_argument("--scale", type=int, default=None, help="Pixels per unit length")
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--resolution", type=int, default=None)
    _common(p)

    config_parser = sub.add_parser("config", help="Manage linkspace configuration")
    config_sub = config_parser.add_subparsers(dest="config_command")
    init_parser = config_sub.add_parser("init", help="Write default config to disk")
    init_parser.add_argument("--force", action="store_true", help="Overwrite existing config file")
    config_sub.add_parser("show", help="Show effective config (file + env overrides)")
    get_parser = config_sub.add_parser("get", help="Get a single config value by dotted path")
    get_parser.add_argument("key", help="Dotted config key (e.g. sweep.resolution)")
    set_parser = config_sub.add_parser("set", help="Set a single config value by dotted path")
    set_parser.add_argument("key", help="Dotted config key (e.g. sweep.resolution)")
    set_parser.add_argument("value", help="Value to set")
    return parser


_HANDLERS = {
    "check-cycle": _cmd_check_cycle,
    "check-k4": _cmd_check_k4,
    "closure-interval": _cmd_closure_interval,
    "k33-stage": _cmd_k33_stage,
    "gamma-set": _cmd_gamma_set,
    "components": _cmd_components,
    "realize": _cmd_realize,
    "cycles": _cmd_cycles,
    "render": _cmd_render,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run one subcommand and return its exit code."""
    from .logging_setup import configure_logging

    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "config":
            return _cmd_config(args, parser)
        configure_logging(args.command)
        command = _Command(args, load_effective_config())
        return _HANDLERS[args.command](command)
    except ConfigError as exc:
        _print_error(str(exc), HINTS["config"])
        return EXIT_USAGE
    except StageChoiceError as exc:
        _print_error(str(exc), HINTS["stage_choice"])
        return EXIT_NEGATIVE
    except WorkspaceEmptyError as exc:
        _print_error(str(exc), HINTS["workspace_empty"])
        return EXIT_NEGATIVE
    except GraphTooLargeError as exc:
        _print_error(str(exc), HINTS["graph_too_large"])
        return EXIT_USAGE
    except GraphFormatError as exc:
        hint = HINTS["lengths_format"] if getattr(args, "lengths", None) else HINTS["graph_format"]
        _print_error(str(exc), hint)
        return EXIT_USAGE
    except (LinkspaceError, ValueError) as exc:
        hint = HINTS["pin"] if "Pin" in str(exc) else None
        _print_error(str(exc), hint)
        return EXIT_USAGE


__all__ = [
    "EXIT_NEGATIVE",
    "EXIT_OK",
    "EXIT_USAGE",
    "build_parser",
    "load_k33_lengths",
    "main",
    "parse_lengths",
]
