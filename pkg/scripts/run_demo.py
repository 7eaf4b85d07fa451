#!/usr/bin/env python3
"""Drive the full pipeline on a demo corpus and compare the four schemes.

Runs make-pairs, emits stub predictions (lexical overlap by default),
combines them under all four schemes, scores every run against the gold
labels, and prints the side-by-side comparison table.

Usage:
    python scripts/make_demo_data.py --out demo-data
    python scripts/run_demo.py --data demo-data [--split validation] [--stub-mode lexical_overlap]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from argvalues.cli import main as cli
from argvalues.scoring import CategoryScore, ScoreReport, compare_reports
from argvalues.stubs import STUB_MODES


def check(code: int) -> None:
    if code != 0:
        sys.exit(code)


def load_report(path: Path) -> ScoreReport:
    raw = json.loads(path.read_text(encoding="utf-8"))
    return ScoreReport(
        per_category={
            name: CategoryScore(**scores) for name, scores in raw["per_category"].items()
        },
        macro_precision=raw["macro_precision"],
        macro_recall=raw["macro_recall"],
        overall_f1=raw["overall_f1"],
        mean_category_f1=raw["mean_category_f1"],
        metadata=raw["metadata"],
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default="demo-data", help="directory with config.json")
    parser.add_argument("--split", default="validation")
    parser.add_argument("--stub-mode", default="lexical_overlap", choices=STUB_MODES)
    parser.add_argument("--out", default=None, help="output directory override")
    parser.add_argument(
        "--entail-threshold",
        default="0.2",
        help="entailment cutoff; the lexical stub rarely reaches the real 0.8",
    )
    parser.add_argument(
        "--class-threshold",
        default="0.15",
        help="classifier cutoff for the stub scores",
    )
    args = parser.parse_args()

    config = str(Path(args.data) / "config.json")
    out = Path(args.out) if args.out else Path(args.data).parent / "demo-out"
    base = ["--config", config, "--split", args.split, "--out", str(out)]

    check(cli(["make-pairs", *base]))
    stub_args = ["--stub-mode", args.stub_mode]
    if args.stub_mode == "constant":
        stub_args += ["--constant-value", "1.0"]
    check(cli(["stub-predict", *base, *stub_args]))

    entail = str(out / f"stub-{args.split}.entail.tsv")
    baseline = str(out / f"stub-{args.split}.baseline.tsv")
    reduced = str(out / f"stub-{args.split}.reduced.tsv")
    threshold = [
        "--entail-threshold", args.entail_threshold,
        "--class-threshold", args.class_threshold,
    ]
    check(cli(["combine", *base, "--scheme", "rs1", "--entail-preds", entail, *threshold]))
    check(cli(["combine", *base, "--scheme", "rs2", "--entail-preds", entail,
               "--baseline-preds", baseline, *threshold]))
    check(cli(["combine", *base, "--scheme", "rs3", "--entail-preds", entail,
               "--reduced-preds", reduced, *threshold]))
    check(cli(["combine", *base, "--scheme", "rs4", "--entail-preds", entail,
               "--baseline-preds", baseline, "--reduced-preds", reduced, *threshold]))

    reports = {}
    for scheme in ("rs1", "rs2", "rs3", "rs4"):
        run_file = str(out / f"run-{scheme}-{args.split}.tsv")
        check(cli(["score", *base, "--run", run_file]))
        reports[scheme] = load_report(out / f"run-{scheme}-{args.split}.report.json")

    print()
    print(compare_reports(reports))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
