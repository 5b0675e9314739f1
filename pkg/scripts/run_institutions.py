#!/usr/bin/env python3
"""Run the full pipeline on the bundled institutions dataset and print a
summary: ranks, clusters and the chief attributes driving each cluster.

Equivalent to ``roughfca run --config data/institutions_config.json`` with a
chattier printout.  Reports land in --out (default: reports/).
"""

import argparse
import dataclasses
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from roughfca.pipeline import PipelineConfig, emit_reports, run_pipeline

REPO = Path(__file__).resolve().parents[1]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=REPO / "data" / "institutions_config.json")
    parser.add_argument("--out", default=REPO / "reports")
    args = parser.parse_args()

    config = PipelineConfig.from_file(args.config)
    report = run_pipeline(dataclasses.replace(config, output_dir=Path(args.out)))

    flagged = {name: len(v) for name, v in report.violations.items() if v}
    if flagged:
        print(f"proximity sum violations tolerated (force): {flagged}")
    print(f"dropped as indiscernible: {', '.join(report.ordered.dropped) or 'none'}\n")

    print(f"{'object':<8} {'total':>5} {'rank':>4}   labels")
    for row in report.ranks.rows:
        labels = ", ".join(f"{l}({w})" for l, w in zip(row.labels, row.weights))
        print(f"{row.object:<8} {row.total:>5} {row.rank:>4}   {labels}")

    print()
    for analysis in report.analyses:
        c = analysis.cluster
        chief = ", ".join(analysis.chief[0][1])
        runner_up = ", ".join(analysis.chief[1][1]) if len(analysis.chief) > 1 else "-"
        print(f"cluster {c.cluster_id} (ranks {c.rank_range[0]}-{c.rank_range[1]}): "
              f"{', '.join(c.members)}")
        print(f"  concepts: {len(analysis.concepts)}, implications: {len(analysis.basis)}")
        print(f"  chief attributes: {chief}   (next: {runner_up})")

    manifest = emit_reports(report, args.out)
    print(f"\nwrote {len(manifest)} files to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
