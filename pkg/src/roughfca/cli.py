"""Command line interface.

Subcommands::

    roughfca run        full pipeline, all reports
    roughfca proximity  proximity matrices only
    roughfca partition  cut partitions only
    roughfca rank       ordered table, rank table and clusters
    roughfca fca        per-cluster contexts, lattices, bases, frequencies
    roughfca search-cut recover feasible (alpha, beta) regions for target partitions

Every command takes --config (a JSON document); --data, --alpha, --beta,
--out, --force and --override stage=file beat the config values.  Exit
status is 0 on success, 2 on a stage failure (reported as
``error [stage:<name>] ...``).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .approx import CutParams, partition_from_json, partition_to_json
from .pipeline import PipelineConfig, StageError, emit_reports, run_pipeline, search_alpha_beta
from .proximity import proximity_to_csv
from .table import load_table

_OVERRIDE_STAGES = ("partitions", "ordered_table")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="pipeline configuration (JSON)")
    parser.add_argument("--data", help="data CSV, overrides the config value")
    parser.add_argument("--alpha", type=float, help="cut membership threshold")
    parser.add_argument("--beta", type=float, help="cut non-membership threshold")
    parser.add_argument("--out", help="output directory, overrides the config value")
    parser.add_argument("--force", action="store_true",
                        help="proceed past proximity validation failures")
    parser.add_argument("--override", action="append", default=[], metavar="STAGE=FILE",
                        help=f"stage override, STAGE one of {', '.join(_OVERRIDE_STAGES)}")


def _effective_config(args: argparse.Namespace) -> PipelineConfig:
    config = PipelineConfig.from_file(args.config)
    updates: dict = {}
    if args.data:
        updates["data_path"] = Path(args.data)
    if args.alpha is not None or args.beta is not None:
        alpha = args.alpha if args.alpha is not None else config.cut.alpha
        beta = args.beta if args.beta is not None else config.cut.beta
        updates["cut"] = CutParams(alpha, beta)
    if args.out:
        updates["output_dir"] = Path(args.out)
    if args.force:
        updates["force"] = True
    for spec in args.override:
        stage, _, path = spec.partition("=")
        if stage not in _OVERRIDE_STAGES or not path:
            raise StageError("load", f"bad override {spec!r}, expected STAGE=FILE with "
                                     f"STAGE in {_OVERRIDE_STAGES}")
        key = "partitions_override" if stage == "partitions" else "ordered_override"
        updates[key] = Path(path)
    return dataclasses.replace(config, **updates) if updates else config


def _output_dir(config: PipelineConfig) -> Path:
    if config.output_dir is None:
        raise StageError("emit", "no output directory: set output_dir in the config or pass --out")
    return config.output_dir


def _cmd_run(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    report = run_pipeline(config)
    out = _output_dir(config)
    manifest = emit_reports(report, out)
    print(f"wrote {len(manifest)} report files to {out}")
    for analysis in report.analyses:
        chief = ", ".join(analysis.chief[0][1]) if analysis.chief else "-"
        print(f"cluster {analysis.cluster.cluster_id} "
              f"(ranks {analysis.cluster.rank_range[0]}-{analysis.cluster.rank_range[1]}): "
              f"chief attributes {chief}")
    return 0


def _cmd_proximity(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    report = run_pipeline(dataclasses.replace(config, force=True))
    out = _output_dir(config)
    out.mkdir(parents=True, exist_ok=True)
    names = args.attribute or sorted(report.relations)
    for name in names:
        if name not in report.relations:
            raise StageError("proximity", f"unknown attribute {name!r}")
        (out / f"proximity_{name}.csv").write_text(
            proximity_to_csv(report.relations[name]), encoding="utf-8")
    flagged = {name: len(v) for name, v in report.violations.items() if v}
    if flagged:
        print(f"validation violations: {flagged}")
    print(f"wrote {len(names)} proximity matrices to {out}")
    return 0


def _cmd_partition(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    report = run_pipeline(config)
    out = _output_dir(config)
    out.mkdir(parents=True, exist_ok=True)
    docs = [partition_to_json(report.partitions[name], name,
                              config.cut.alpha, config.cut.beta)
            for name in sorted(report.partitions)]
    (out / "partitions.json").write_text(
        json.dumps(docs, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote partitions.json ({len(docs)} attributes) to {out}")
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    from .ordering import ordered_table_to_csv, rank_table_to_csv

    config = _effective_config(args)
    report = run_pipeline(config)
    out = _output_dir(config)
    out.mkdir(parents=True, exist_ok=True)
    (out / "ordered_table.csv").write_text(ordered_table_to_csv(report.ordered), encoding="utf-8")
    (out / "rank_table.csv").write_text(rank_table_to_csv(report.ranks), encoding="utf-8")
    clusters = [{"cluster_id": c.cluster_id, "rank_range": list(c.rank_range),
                 "members": list(c.members)} for c in report.clusters]
    (out / "clusters.json").write_text(
        json.dumps(clusters, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for row in report.ranks.rows:
        print(f"{row.object}: total {row.total}, rank {row.rank}")
    return 0


def _cmd_fca(args: argparse.Namespace) -> int:
    from . import fca as _fca

    config = _effective_config(args)
    report = run_pipeline(config)
    out = _output_dir(config)
    out.mkdir(parents=True, exist_ok=True)
    for analysis in report.analyses:
        prefix = f"cluster_{analysis.cluster.cluster_id}"
        (out / f"{prefix}_context.csv").write_text(
            _fca.context_to_csv(analysis.context), encoding="utf-8")
        (out / f"{prefix}_lattice.dot").write_text(
            _fca.lattice_to_dot(analysis.concepts, analysis.cover), encoding="utf-8")
        (out / f"{prefix}_basis.txt").write_text(
            _fca.basis_to_text(analysis.basis), encoding="utf-8")
        (out / f"{prefix}_basis.json").write_text(
            _fca.basis_to_json(analysis.basis), encoding="utf-8")
        (out / f"{prefix}_frequencies.csv").write_text(
            _fca.frequencies_to_csv(analysis.frequencies), encoding="utf-8")
        chief = ", ".join(analysis.chief[0][1]) if analysis.chief else "-"
        print(f"{prefix}: {len(analysis.concepts)} concepts, "
              f"{len(analysis.basis)} implications, chief {chief}")
    return 0


def _cmd_search_cut(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    try:
        csv_text = config.data_path.read_text(encoding="utf-8")
        table = load_table(csv_text, config.attributes)
    except (OSError, ValueError) as exc:
        raise StageError("load", str(exc)) from None
    try:
        docs = json.loads(Path(args.targets).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise StageError("partition", f"cannot read targets {args.targets}: {exc}") from None
    docs = docs if isinstance(docs, list) else [docs]
    targets = {}
    for doc in docs:
        name, part = partition_from_json(doc, table.objects)
        targets[name] = part
    result = search_alpha_beta(table, targets, step=args.step)
    payload = {
        "step": result.step,
        "feasible_points": [list(p) for p in result.points],
        "hull": list(result.hull) if result.hull else None,
        "per_attribute": {name: (list(h) if h else None)
                          for name, h in sorted(result.per_attribute.items())},
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        print(f"wrote {out} ({len(result.points)} feasible grid points)")
    else:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="roughfca", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="full pipeline")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_prox = sub.add_parser("proximity", help="proximity matrices")
    _add_common(p_prox)
    p_prox.add_argument("--attribute", action="append", help="restrict to one attribute")
    p_prox.set_defaults(func=_cmd_proximity)

    p_part = sub.add_parser("partition", help="cut partitions")
    _add_common(p_part)
    p_part.set_defaults(func=_cmd_partition)

    p_rank = sub.add_parser("rank", help="ordered table, ranks and clusters")
    _add_common(p_rank)
    p_rank.set_defaults(func=_cmd_rank)

    p_fca = sub.add_parser("fca", help="per-cluster concept analysis")
    _add_common(p_fca)
    p_fca.set_defaults(func=_cmd_fca)

    p_search = sub.add_parser("search-cut", help="recover feasible cut parameters")
    _add_common(p_search)
    p_search.add_argument("--targets", required=True,
                          help="target partitions (JSON list of partition documents)")
    p_search.add_argument("--step", type=float, default=0.005, help="grid resolution")
    p_search.set_defaults(func=_cmd_search_cut)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"error {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
