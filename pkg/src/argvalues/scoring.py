"""Scoring of run files with the shared-task metric.

Per category: precision, recall, and F1 from the tally of true positives,
false positives, and false negatives over the arguments. The overall score
("All") is the harmonic mean of macro-precision and macro-recall, which is
NOT the same number as the mean of the per-category F1s; both are reported.
Empty denominators score 0 throughout (the convention is echoed in the
report metadata because scorers differ on it).

Also provides the binary macro F1 (mean of the positive-class and
negative-class F1s) used to validate the entailment model itself.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import IO, Mapping, Sequence

from .corpus import LabelMatrix
from .ensemble import ResultSet
from .errors import DataError

log = logging.getLogger(__name__)


def _safe_div(numerator: float, denominator: float) -> float:
    return numerator / denominator if denominator else 0.0


def f1_from(precision: float, recall: float) -> float:
    return _safe_div(2.0 * precision * recall, precision + recall)


@dataclass(frozen=True)
class CategoryScore:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class ScoreReport:
    per_category: dict[str, CategoryScore]
    macro_precision: float
    macro_recall: float
    overall_f1: float
    mean_category_f1: float
    metadata: dict


def score_run(
    gold: LabelMatrix,
    run: ResultSet,
    include_empty_categories: bool = True,
) -> ScoreReport:
    """Score a result set against gold L2 annotations.

    Arguments in the run but not in gold are fatal; gold arguments missing
    from the run count as all-negative predictions (with a warning).
    ``include_empty_categories`` controls whether categories with no gold
    positives enter the macro averages (at precision = recall = 0).
    """
    unknown = sorted(set(run.predictions) - set(gold.rows))
    if unknown:
        preview = ", ".join(map(repr, unknown[:10]))
        raise DataError(f"run contains argument(s) not in the gold labels: {preview}")
    absent = [arg_id for arg_id in gold.rows if arg_id not in run.predictions]
    if absent:
        log.warning(
            "%d gold argument(s) missing from the run; treated as all-negative",
            len(absent),
        )

    empty_set: frozenset[str] = frozenset()
    per_category: dict[str, CategoryScore] = {}
    gold_positive_counts: dict[str, int] = {}
    for index, column in enumerate(gold.columns):
        tp = fp = fn = 0
        gold_positives = 0
        for arg_id, bits in gold.rows.items():
            actual = bits[index]
            gold_positives += actual
            predicted = column in run.predictions.get(arg_id, empty_set)
            if predicted and actual:
                tp += 1
            elif predicted and not actual:
                fp += 1
            elif not predicted and actual:
                fn += 1
        precision = _safe_div(tp, tp + fp)
        recall = _safe_div(tp, tp + fn)
        per_category[column] = CategoryScore(
            precision=precision,
            recall=recall,
            f1=f1_from(precision, recall),
            tp=tp,
            fp=fp,
            fn=fn,
        )
        gold_positive_counts[column] = gold_positives

    scored = [
        name
        for name in gold.columns
        if include_empty_categories or gold_positive_counts[name] > 0
    ]
    macro_precision = _safe_div(sum(per_category[n].precision for n in scored), len(scored))
    macro_recall = _safe_div(sum(per_category[n].recall for n in scored), len(scored))
    mean_category_f1 = _safe_div(sum(per_category[n].f1 for n in scored), len(scored))

    return ScoreReport(
        per_category=per_category,
        macro_precision=macro_precision,
        macro_recall=macro_recall,
        overall_f1=f1_from(macro_precision, macro_recall),
        mean_category_f1=mean_category_f1,
        metadata={
            "scheme": run.scheme,
            "zero_division": 0.0,
            "include_empty_categories": include_empty_categories,
            "gold_arguments": len(gold.rows),
            "run_arguments": len(run.predictions),
            "categories_in_macro": len(scored),
        },
    )


def binary_macro_f1(gold_bits: Sequence[int], predicted_bits: Sequence[int]) -> float:
    """Mean of the F1 scores of the positive and the negative class."""
    if len(gold_bits) != len(predicted_bits):
        raise DataError(
            f"bit sequences differ in length: {len(gold_bits)} vs {len(predicted_bits)}"
        )
    for bits, what in ((gold_bits, "gold"), (predicted_bits, "predicted")):
        if any(b not in (0, 1) for b in bits):
            raise DataError(f"{what} sequence contains non-binary values")

    f1s = []
    for positive in (1, 0):
        tp = sum(1 for g, p in zip(gold_bits, predicted_bits) if g == positive and p == positive)
        fp = sum(1 for g, p in zip(gold_bits, predicted_bits) if g != positive and p == positive)
        fn = sum(1 for g, p in zip(gold_bits, predicted_bits) if g == positive and p != positive)
        precision = _safe_div(tp, tp + fp)
        recall = _safe_div(tp, tp + fn)
        f1s.append(f1_from(precision, recall))
    return sum(f1s) / 2.0


def report_to_dict(report: ScoreReport) -> dict:
    return {
        "overall_f1": report.overall_f1,
        "macro_precision": report.macro_precision,
        "macro_recall": report.macro_recall,
        "mean_category_f1": report.mean_category_f1,
        "per_category": {
            name: {
                "precision": s.precision,
                "recall": s.recall,
                "f1": s.f1,
                "tp": s.tp,
                "fp": s.fp,
                "fn": s.fn,
            }
            for name, s in report.per_category.items()
        },
        "metadata": report.metadata,
    }


def write_report_json(report: ScoreReport, out: IO[str]) -> None:
    json.dump(report_to_dict(report), out, indent=2, ensure_ascii=False)
    out.write("\n")


def render_report_table(report: ScoreReport) -> str:
    """Aligned plain-text table: one row per category plus the overall block."""
    name_width = max(len("Category"), *(len(n) for n in report.per_category)) if report.per_category else len("Category")
    lines = [f"{'Category':<{name_width}}  {'Precision':>9}  {'Recall':>9}  {'F1':>9}"]
    for name, s in report.per_category.items():
        lines.append(
            f"{name:<{name_width}}  {s.precision:>9.4f}  {s.recall:>9.4f}  {s.f1:>9.4f}"
        )
    lines.append("-" * (name_width + 35))
    lines.append(
        f"{'Macro':<{name_width}}  {report.macro_precision:>9.4f}  "
        f"{report.macro_recall:>9.4f}  {report.overall_f1:>9.4f}"
    )
    lines.append(f"Overall F1 (harmonic of macro P/R): {report.overall_f1:.4f}")
    lines.append(f"Mean per-category F1:               {report.mean_category_f1:.4f}")
    return "\n".join(lines) + "\n"


def compare_reports(reports: Mapping[str, ScoreReport]) -> str:
    """Side-by-side overall comparison, best overall F1 first."""
    name_width = max(len("Model"), *(len(n) for n in reports)) if reports else len("Model")
    lines = [f"{'Model':<{name_width}}  {'F1':>7}  {'Precision':>9}  {'Recall':>7}"]
    ordered = sorted(reports.items(), key=lambda item: (-item[1].overall_f1, item[0]))
    for name, report in ordered:
        lines.append(
            f"{name:<{name_width}}  {report.overall_f1:>7.4f}  "
            f"{report.macro_precision:>9.4f}  {report.macro_recall:>7.4f}"
        )
    return "\n".join(lines) + "\n"
