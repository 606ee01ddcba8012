"""Command line entry point: ``maoutage {optimize,validate,sweep,benchmark}``.

Exit status is 0 on success, 1 for configuration errors, 2 for numerical
errors and 3 when a sweep finished with some failed points.  Failures print
one JSON object on stderr, for example
``{"error": "config", "type": "ConfigError", "message": "..."}``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .benchmarks import SCHEMES
from .errors import ConfigError, MaOutageError
from .experiments import AXES, ExperimentSpec, load_manifest_spec, run

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_PARTIAL = 0, 1, 2, 3


def _csv_list(text: str, kind=str) -> list:
    return [kind(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maoutage", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials=False):
        p.add_argument("--config", help="scenario JSON file")
        p.add_argument("--spec", help="rerun the spec stored in a manifest.json")
        p.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
        p.add_argument("--out", required=True, help="output directory (replaced atomically)")
        p.add_argument("--starts", type=int, default=5, help="random starts per optimisation")
        p.add_argument("--line-search", action="store_true", help="Armijo backtracking instead of a fixed step")
        p.add_argument("--workers", type=int, default=1)
        if trials:
            p.add_argument("--trials", type=int, default=100_000, help="Monte Carlo trials")

    common(sub.add_parser("optimize", help="multi-start ascent on one scenario"))
    p = sub.add_parser("validate", help="analytic SINR law and rate against Monte Carlo")
    common(p, trials=True)
    p.add_argument("--user", type=int, default=1, help="1-based user index")
    p = sub.add_parser("sweep", help="schemes across one scenario parameter")
    common(p)
    p.add_argument("--axis", choices=AXES)
    p.add_argument("--grid", help="comma separated sorted values")
    p.add_argument("--schemes", default=",".join(SCHEMES))
    p.add_argument("--seeds", help="comma separated seeds (default: --seed)")
    p = sub.add_parser("benchmark", help="every scheme at one scenario")
    common(p)
    p.add_argument("--schemes", default=",".join(SCHEMES))
    p.add_argument("--seeds", help="comma separated seeds (default: --seed)")
    return parser


def spec_from_args(args) -> ExperimentSpec:
    if args.spec:
        spec = load_manifest_spec(args.spec)
        if spec.command != args.command:
            raise ConfigError(f"manifest holds a {spec.command!r} run, not {args.command!r}")
        return spec
    if not args.config:
        raise ConfigError("either --config or --spec is required")
    try:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read configuration {args.config}: {exc}") from exc
    fields = dict(command=args.command, config=doc, seeds=(args.seed,), starts=args.starts,
                  line_search=args.line_search, workers=args.workers)
    if args.command == "validate":
        fields.update(trials=args.trials, user=args.user)
    if args.command in ("sweep", "benchmark"):
        fields["schemes"] = tuple(_csv_list(args.schemes))
        if args.seeds:
            fields["seeds"] = tuple(_csv_list(args.seeds, int))
    if args.command == "sweep":
        if not args.axis or not args.grid:
            raise ConfigError("sweep needs --axis and --grid")
        try:
            fields.update(axis=args.axis, grid=tuple(_csv_list(args.grid, float)))
        except ValueError as exc:
            raise ConfigError(f"bad --grid: {exc}") from exc
    return ExperimentSpec(**fields)


def _fail(exc: Exception, category: str) -> None:
    sys.stderr.write(json.dumps({"error": category, "type": type(exc).__name__, "message": str(exc)}) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = spec_from_args(args)
        out = run(spec, args.out)
    except ConfigError as exc:
        _fail(exc, "config")
        return EXIT_CONFIG
    except MaOutageError as exc:
        category = getattr(exc, "category", "error")
        _fail(exc, category)
        return EXIT_CONFIG if category == "config" else EXIT_NUMERICAL
    except ValueError as exc:
        _fail(exc, "config")
        return EXIT_CONFIG
    if out.partial:
        sys.stderr.write(json.dumps({"error": "partial", "message": "some sweep points failed"}) + "\n")
        return EXIT_PARTIAL
    return EXIT_OK
