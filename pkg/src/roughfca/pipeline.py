"""End-to-end orchestration: load, proximity, cut, order, rank, cluster, FCA.

The pipeline is deterministic given a configuration: the same config and
data produce byte-identical report trees.  Any intermediate stage can be fed
an override (partitions, ordered-table labels) instead of its computed
value; overridden stages are recorded in the report's provenance block.

A non-empty proximity validation report (pairs with mu + nu > 1 are the
realistic case) stops the run unless ``force`` is set, in which case the
violations are carried into the provenance instead.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import fca
from .approx import CutParams, cut_graph, partition_from_cut, partition_from_json, partition_to_json
from .ordering import (
    LabelLadder,
    OrderedTable,
    RankCluster,
    RankTable,
    build_ordered_table,
    cluster_by_rank,
    ordered_table_override,
    ordered_table_to_csv,
    rank_table_to_csv,
    score_and_rank,
)
from .proximity import (
    IFProximityRelation,
    ProximityViolation,
    build_proximity,
    proximity_to_csv,
    validate_proximity,
)
from .table import AttributeSpec, InformationTable, Partition, load_table
from .unionfind import UnionFind

STAGES = ("load", "proximity", "validate", "partition", "order", "rank", "cluster", "fca", "emit")


class StageError(RuntimeError):
    """A pipeline failure tagged with the stage it occurred in."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[stage:{stage}] {message}")
        self.stage = stage


@dataclass(frozen=True)
class PipelineConfig:
    data_path: Path
    attributes: tuple[AttributeSpec, ...]
    cut: CutParams
    rank_ranges: tuple[tuple[int, int], ...]
    ladders: Mapping[str, LabelLadder] = field(default_factory=dict)
    block_order: str = "appearance"
    partitions_override: Path | None = None
    ordered_override: Path | None = None
    output_dir: Path | None = None
    force: bool = False

    @classmethod
    def from_dict(cls, doc: dict, base_dir: Path | None = None) -> "PipelineConfig":
        base = Path(base_dir) if base_dir else Path.cwd()

        def resolve(p: str | None) -> Path | None:
            if p is None:
                return None
            path = Path(p)
            return path if path.is_absolute() else base / path

        try:
            specs = tuple(
                AttributeSpec(
                    name=a["name"],
                    kind=a.get("kind", "numeric"),
                    range_max=a.get("range_max"),
                    ladder=tuple(a["ladder"]) if "ladder" in a else None,
                    drop_if_indiscernible=a.get("drop_if_indiscernible", True),
                )
                for a in doc["attributes"]
            )
            cut = CutParams(float(doc["alpha"]), float(doc["beta"]))
            ranges = tuple((int(lo), int(hi)) for lo, hi in doc["rank_ranges"])
            ladders = {
                name: LabelLadder(tuple(spec["labels"]), tuple(spec["weights"]))
                for name, spec in doc.get("ladders", {}).items()
            }
            overrides = doc.get("overrides", {})
            return cls(
                data_path=resolve(doc["data"]),
                attributes=specs,
                cut=cut,
                rank_ranges=ranges,
                ladders=ladders,
                block_order=doc.get("block_order", "appearance"),
                partitions_override=resolve(overrides.get("partitions")),
                ordered_override=resolve(overrides.get("ordered_table")),
                output_dir=resolve(doc.get("output_dir")),
                force=bool(doc.get("force", False)),
            )
        except KeyError as exc:
            raise StageError("load", f"config missing key {exc}") from None

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StageError("load", f"cannot read config {path}: {exc}") from None
        return cls.from_dict(doc, base_dir=path.parent)

    def echo(self) -> dict:
        """Stable JSON-serialisable image of the configuration."""
        return {
            "data": str(self.data_path),
            "alpha": self.cut.alpha,
            "beta": self.cut.beta,
            "attributes": [
                {
                    "name": a.name,
                    "kind": a.kind,
                    "range_max": a.range_max,
                    "ladder": list(a.ladder) if a.ladder else None,
                    "drop_if_indiscernible": a.drop_if_indiscernible,
                }
                for a in self.attributes
            ],
            "rank_ranges": [list(r) for r in self.rank_ranges],
            "ladders": {
                name: {"labels": list(l.labels), "weights": list(l.weights)}
                for name, l in sorted(self.ladders.items())
            },
            "block_order": self.block_order,
            "overrides": {
                "partitions": str(self.partitions_override) if self.partitions_override else None,
                "ordered_table": str(self.ordered_override) if self.ordered_override else None,
            },
            "force": self.force,
        }


@dataclass(frozen=True)
class ClusterAnalysis:
    cluster: RankCluster
    context: fca.FormalContext
    concepts: list[fca.Concept]
    cover: list[tuple[int, int]]
    basis: list[fca.Implication]
    frequencies: fca.FrequencyTable
    chief: list[tuple[int, tuple[str, ...]]]


@dataclass(frozen=True)
class PipelineReport:
    config: PipelineConfig
    table: InformationTable
    relations: dict[str, IFProximityRelation]
    violations: dict[str, list[ProximityViolation]]
    partitions: dict[str, Partition]
    ordered: OrderedTable
    ranks: RankTable
    clusters: list[RankCluster]
    analyses: list[ClusterAnalysis]
    provenance: dict


def _load_override_doc(path: Path, stage: str) -> object:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise StageError(stage, f"cannot read override {path}: {exc}") from None


def run_pipeline(config: PipelineConfig) -> PipelineReport:
    """Execute every stage in order, honouring overrides, and return the
    full report.  Raises :class:`StageError` with the failing stage name."""
    provenance: dict = {"config": config.echo(), "stages": {}}

    try:
        csv_text = config.data_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise StageError("load", f"cannot read data {config.data_path}: {exc}") from None
    try:
        table = load_table(csv_text, config.attributes)
    except ValueError as exc:
        raise StageError("load", str(exc)) from None

    numeric = [a.name for a in table.attributes if a.numeric]
    try:
        relations = {name: build_proximity(table, name) for name in numeric}
    except ValueError as exc:
        raise StageError("proximity", str(exc)) from None

    violations = {name: validate_proximity(rel) for name, rel in relations.items()}
    total_violations = sum(len(v) for v in violations.values())
    provenance["stages"]["validate"] = {
        "violations": {name: len(v) for name, v in sorted(violations.items()) if v},
        "forced": bool(config.force and total_violations),
    }
    if total_violations and not config.force:
        worst = next(v[0] for v in violations.values() if v)
        raise StageError(
            "validate",
            f"{total_violations} proximity axiom violation(s), e.g. {worst.kind} at "
            f"{worst.pair}: {worst.detail}; pass force to proceed",
        )

    override_parts: dict[str, Partition] = {}
    if config.partitions_override is not None:
        doc = _load_override_doc(config.partitions_override, "partition")
        docs = doc if isinstance(doc, list) else [doc]
        for entry in docs:
            try:
                name, part = partition_from_json(entry, table.objects)
            except ValueError as exc:
                raise StageError("partition", f"bad partition override: {exc}") from None
            if name not in relations:
                raise StageError("partition", f"override names unknown attribute {name!r}")
            override_parts[name] = part
    partitions = {}
    for name in numeric:
        if name in override_parts:
            partitions[name] = override_parts[name]
        else:
            partitions[name] = partition_from_cut(cut_graph(relations[name], config.cut))
    provenance["stages"]["partition"] = {
        name: ("override" if name in override_parts else "computed") for name in numeric
    }

    try:
        ordered = build_ordered_table(table, partitions, config.ladders, config.block_order)
    except ValueError as exc:
        raise StageError("order", str(exc)) from None
    if config.ordered_override is not None:
        doc = _load_override_doc(config.ordered_override, "order")
        if not isinstance(doc, dict):
            raise StageError("order", "ordered-table override must map attributes to label maps")
        try:
            ordered = ordered_table_override(ordered, doc)
        except ValueError as exc:
            raise StageError("order", f"bad ordered-table override: {exc}") from None
        provenance["stages"]["order"] = {"override": sorted(doc)}
    else:
        provenance["stages"]["order"] = {"override": []}
    provenance["stages"]["order"]["dropped"] = list(ordered.dropped)

    ranks = score_and_rank(ordered)
    try:
        clusters = cluster_by_rank(ranks, config.rank_ranges)
    except ValueError as exc:
        raise StageError("cluster", str(exc)) from None

    analyses = []
    for cluster in clusters:
        try:
            context = fca.build_context(ordered, cluster.members)
            concepts = fca.enumerate_concepts(context)
            cover = fca.lattice_cover(concepts)
            basis = fca.canonical_basis(context)
            freqs = fca.implication_frequencies(basis)
            chief = fca.chief_attributes(freqs)
        except ValueError as exc:
            raise StageError("fca", f"cluster {cluster.cluster_id}: {exc}") from None
        analyses.append(ClusterAnalysis(cluster, context, concepts, cover, basis, freqs, chief))

    return PipelineReport(
        config=config,
        table=table,
        relations=relations,
        violations=violations,
        partitions=partitions,
        ordered=ordered,
        ranks=ranks,
        clusters=clusters,
        analyses=analyses,
        provenance=provenance,
    )


# ---------------------------------------------------------------------------
# cut parameter recovery


@dataclass(frozen=True)
class CutSearchResult:
    """Grid points of the admissible set reproducing every target partition,
    with the bounding box of the joint region and of each attribute's own
    feasible points."""

    step: float
    points: list[tuple[float, float]]
    hull: tuple[float, float, float, float] | None
    per_attribute: dict[str, tuple[float, float, float, float] | None]


def _hull(points: Sequence[tuple[float, float]]) -> tuple[float, float, float, float] | None:
    if not points:
        return None
    alphas = [p[0] for p in points]
    betas = [p[1] for p in points]
    return (min(alphas), max(alphas), min(betas), max(betas))


def search_alpha_beta(table: InformationTable, targets: Mapping[str, Partition],
                      step: float = 0.005) -> CutSearchResult:
    """Scan the (alpha, beta) grid of the admissible set for the points whose
    cut partitions reproduce every target exactly.  An empty result is a
    valid answer.  Work is memoised per distinct edge set, so fine grids stay
    cheap."""
    if not targets:
        raise ValueError("at least one target partition is required")
    for name, part in targets.items():
        table.spec(name)
        if set(part.block_of) != set(table.objects):
            raise ValueError(f"target partition for {name!r} does not cover the universe")

    n = len(table.objects)
    pair_index = [(i, j) for i in range(n) for j in range(i + 1, n)]
    per_attr = {}
    for name in targets:
        rel = build_proximity(table, name)
        mu = np.array([rel.mu[i, j] for i, j in pair_index])
        nu = np.array([rel.nu[i, j] for i, j in pair_index])
        per_attr[name] = (mu, nu)

    steps = round(1.0 / step)
    levels = [i * step for i in range(steps + 1)]
    target_sets = {name: part.as_sets() for name, part in targets.items()}

    match_cache: dict[tuple[str, bytes], bool] = {}

    def matches(name: str, edge_mask: np.ndarray) -> bool:
        key = (name, edge_mask.tobytes())
        hit = match_cache.get(key)
        if hit is not None:
            return hit
        uf = UnionFind(n)
        for flag, (i, j) in zip(edge_mask, pair_index):
            if flag:
                uf.union(i, j)
        blocks = frozenset(
            frozenset(table.objects[i] for i in grp) for grp in uf.groups()
        )
        ok = blocks == target_sets[name]
        match_cache[key] = ok
        return ok

    feasible: list[tuple[float, float]] = []
    attr_points: dict[str, list[tuple[float, float]]] = {name: [] for name in targets}
    mu_ge = {name: {a: per_attr[name][0] >= a for a in levels} for name in targets}
    nu_le = {name: {b: per_attr[name][1] <= b for b in levels} for name in targets}
    for alpha in levels:
        for beta in levels:
            if alpha + beta > 1.0 + 1e-12:
                break
            ok_all = True
            for name in targets:
                edges = mu_ge[name][alpha] & nu_le[name][beta]
                if matches(name, edges):
                    attr_points[name].append((alpha, beta))
                else:
                    ok_all = False
            if ok_all:
                feasible.append((alpha, beta))

    return CutSearchResult(
        step=step,
        points=feasible,
        hull=_hull(feasible),
        per_attribute={name: _hull(pts) for name, pts in attr_points.items()},
    )


# ---------------------------------------------------------------------------
# report emission


def _write(path: Path, text: str, manifest: list[dict]) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise StageError("emit", f"cannot write {path}: {exc}") from None
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    manifest.append({"path": path.name, "sha256": digest})


def emit_reports(report: PipelineReport, output_dir: str | Path) -> list[dict]:
    """Write every artifact of a pipeline run into ``output_dir`` and return
    the manifest (also written as ``manifest.json``), one entry per file with
    its content digest."""
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise StageError("emit", f"cannot create {out}: {exc}") from None

    manifest: list[dict] = []
    cut = report.config.cut
    for name in sorted(report.relations):
        _write(out / f"proximity_{name}.csv", proximity_to_csv(report.relations[name]), manifest)

    partition_docs = [
        partition_to_json(report.partitions[name], name, cut.alpha, cut.beta)
        for name in sorted(report.partitions)
    ]
    _write(out / "partitions.json", json.dumps(partition_docs, indent=2, sort_keys=True) + "\n",
           manifest)

    _write(out / "ordered_table.csv", ordered_table_to_csv(report.ordered), manifest)
    _write(out / "rank_table.csv", rank_table_to_csv(report.ranks), manifest)

    clusters_doc = [
        {"cluster_id": c.cluster_id, "rank_range": list(c.rank_range), "members": list(c.members)}
        for c in report.clusters
    ]
    _write(out / "clusters.json", json.dumps(clusters_doc, indent=2, sort_keys=True) + "\n",
           manifest)

    chief_doc = {}
    for analysis in report.analyses:
        cid = analysis.cluster.cluster_id
        prefix = f"cluster_{cid}"
        _write(out / f"{prefix}_context.csv", fca.context_to_csv(analysis.context), manifest)
        _write(out / f"{prefix}_lattice.dot",
               fca.lattice_to_dot(analysis.concepts, analysis.cover), manifest)
        _write(out / f"{prefix}_basis.txt", fca.basis_to_text(analysis.basis), manifest)
        _write(out / f"{prefix}_basis.json", fca.basis_to_json(analysis.basis), manifest)
        _write(out / f"{prefix}_frequencies.csv",
               fca.frequencies_to_csv(analysis.frequencies), manifest)
        groups = [{"frequency": f, "attributes": list(attrs)} for f, attrs in analysis.chief]
        chief_doc[prefix] = {
            "groups": groups,
            "chief": groups[0]["attributes"] if groups else [],
            "next": groups[1]["attributes"] if len(groups) > 1 else [],
        }
    _write(out / "chief_attributes.json", json.dumps(chief_doc, indent=2, sort_keys=True) + "\n",
           manifest)

    _write(out / "report.json", json.dumps(report.provenance, indent=2, sort_keys=True) + "\n",
           manifest)

    manifest.sort(key=lambda e: e["path"])
    (out / "manifest.json").write_text(
        json.dumps({"files": manifest}, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest
