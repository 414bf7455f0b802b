"""Command line front end.

Thin wrappers over the library; no server required except for ``serve``.
Exit codes: 0 clean, 1 diagnostics or violations found, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import __version__
from .dsl import (
    WorkflowParseError,
    read_graph_file,
    serialize_json,
    serialize_text,
)
from .errors import CvpError
from .plan import AnchorPolicy, check_plan, plan_from_json
from .shift import (
    ShiftExperimentConfig,
    report_csv,
    report_to_json,
    run_experiment,
    shift_world_graph,
)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2


def _print_parse_errors(exc: WorkflowParseError, path: str) -> None:
    payload = {"ok": False, "file": path, "diagnostics": [e.to_obj() for e in exc.errors]}
    print(json.dumps(payload, indent=2))


def _load_graph(path: str):
    """Returns (graph, exit_code); prints diagnostics on failure."""
    try:
        return read_graph_file(path), EXIT_OK
    except OSError as exc:
        print(f"cvp: cannot read {path}: {exc}", file=sys.stderr)
        return None, EXIT_USAGE
    except WorkflowParseError as exc:
        _print_parse_errors(exc, path)
        return None, EXIT_FINDINGS


def _cmd_validate(args: argparse.Namespace) -> int:
    graph, code = _load_graph(args.file)
    if graph is None:
        return code
    print(json.dumps({"ok": True, "file": args.file, "diagnostics": []}, indent=2))
    return EXIT_OK


def _cmd_fmt(args: argparse.Namespace) -> int:
    graph, code = _load_graph(args.file)
    if graph is None:
        return code
    if args.file.lower().endswith(".json"):
        print(serialize_json(graph))
    else:
        sys.stdout.write(serialize_text(graph))
    return EXIT_OK


def _cmd_blanket(args: argparse.Namespace) -> int:
    graph, code = _load_graph(args.file)
    if graph is None:
        return code
    if not graph.has_node(args.node):
        print(f"cvp: no node {args.node!r} in {args.file}", file=sys.stderr)
        return EXIT_USAGE
    print(
        json.dumps(
            {
                "node": args.node,
                "parents": sorted(graph.parents(args.node)),
                "children": sorted(graph.children(args.node)),
                "spouses": sorted(graph.spouses(args.node)),
                "blanket": sorted(graph.markov_blanket(args.node)),
            },
            indent=2,
        )
    )
    return EXIT_OK


def _cmd_check_plan(args: argparse.Namespace) -> int:
    graph, code = _load_graph(args.graph_file)
    if graph is None:
        return code
    try:
        plan = plan_from_json(open(args.plan_file, "rb").read())
    except OSError as exc:
        print(f"cvp: cannot read {args.plan_file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"cvp: invalid plan file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    policy = AnchorPolicy.parse(args.policy)
    report = check_plan(graph, plan, policy)
    print(json.dumps(report.to_obj(), indent=2))
    return EXIT_OK if report.ok else EXIT_FINDINGS


def _cmd_experiment(args: argparse.Namespace) -> int:
    config = ShiftExperimentConfig()
    overrides = {}
    for field_name, arg_name in (
        ("seed", "seed"),
        ("spurious_strength", "alpha"),
        ("spurious_noise_sd", "sigma_s"),
        ("flip_prob", "flip"),
        ("n_train", "n_train"),
        ("n_test", "n_test"),
    ):
        value = getattr(args, arg_name)
        if value is not None:
            overrides[field_name] = value
    try:
        config = replace(config, **overrides)
        report = run_experiment(config, shift_world_graph())
    except (CvpError, ValueError) as exc:
        print(f"cvp: experiment failed: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(report_csv(report))
    print(report_to_json(report, indent=2))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve

    serve(port=args.port, data_dir=args.data_dir, max_body_bytes=args.max_body_bytes)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvp", description="Causal workflow engine")
    parser.add_argument("--version", action="version", version=f"cvp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a .cvp or .json graph file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("fmt", help="print the canonical form of a graph file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_fmt)

    p = sub.add_parser("blanket", help="print a node's causal neighborhood")
    p.add_argument("file")
    p.add_argument("node")
    p.set_defaults(func=_cmd_blanket)

    p = sub.add_parser("check-plan", help="check a plan JSON file against a graph")
    p.add_argument("graph_file")
    p.add_argument("plan_file")
    p.add_argument("--policy", choices=["parents", "blanket"], default="parents")
    p.set_defaults(func=_cmd_check_plan)

    p = sub.add_parser("experiment", help="run the distribution-shift experiment")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None, help="spurious strength")
    p.add_argument("--sigma-s", dest="sigma_s", type=float, default=None, help="spurious noise sd")
    p.add_argument("--flip", type=float, default=None, help="label flip probability")
    p.add_argument("--n-train", dest="n_train", type=int, default=None)
    p.add_argument("--n-test", dest="n_test", type=int, default=None)
    p.add_argument("--csv", default=None, help="write the summary CSV here")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("serve", help="run the HTTP gateway")
    p.add_argument("--port", type=int, default=8321)
    p.add_argument("--data-dir", default="./cvp-data")
    p.add_argument("--max-body-bytes", type=int, default=4 * 1024 * 1024)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
