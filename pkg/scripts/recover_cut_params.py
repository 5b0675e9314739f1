#!/usr/bin/env python3
"""Recover the cut parameters behind the bundled dataset's partitions.

Grid-searches the admissible (alpha, beta) set for the points whose cut
partitions reproduce the five recoverable target partitions, then reports
the feasible region and spot-checks a representative point.
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from roughfca.approx import partition_from_json
from roughfca.pipeline import PipelineConfig, search_alpha_beta
from roughfca.table import load_table

REPO = Path(__file__).resolve().parents[1]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=REPO / "data" / "institutions_config.json")
    parser.add_argument("--targets", default=REPO / "data" / "target_partitions.json")
    parser.add_argument("--step", type=float, default=0.005)
    args = parser.parse_args()

    config = PipelineConfig.from_file(args.config)
    table = load_table(config.data_path.read_text(encoding="utf-8"), config.attributes)
    docs = json.loads(Path(args.targets).read_text(encoding="utf-8"))
    targets = dict(partition_from_json(doc, table.objects) for doc in docs)

    result = search_alpha_beta(table, targets, step=args.step)
    print(f"grid step {result.step}: {len(result.points)} feasible points")
    if result.hull:
        a0, a1, b0, b1 = result.hull
        print(f"joint hull: alpha in [{a0:g}, {a1:g}], beta in [{b0:g}, {b1:g}]")
    for name, hull in sorted(result.per_attribute.items()):
        if hull:
            print(f"  {name}: alpha in [{hull[0]:g}, {hull[1]:g}], "
                  f"beta in [{hull[2]:g}, {hull[3]:g}]")
        else:
            print(f"  {name}: no feasible point alone")
    if result.points:
        alpha, beta = result.points[0]
        print(f"example feasible point: alpha={alpha:g}, beta={beta:g}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
