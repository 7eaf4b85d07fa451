"""Combination of model predictions into the four result-set schemes.

Result Set 1 keeps every value category for which some descriptor reached
the entailment probability threshold (default 0.8; the boundary is kept).
The other three schemes fold in the classifier outputs:

  RS2  union of RS1 and the baseline (20-class) predictions
  RS3  categories of RS1 whose reduced class the reduced classifier predicted
  RS4  RS1 plus the baseline predictions confirmed by the reduced classifier

Prediction files are UTF-8 tab-separated. Descriptor predictions carry no
header and the columns (argument_id, value_name, descriptor_index,
probability); class predictions carry a header of the id column plus one
column per label, with probability (or already 0/1) cells. The emitted run
file is the shared-task shape: id column plus the 20 category columns,
cells in {0,1}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

from .corpus import ID_COLUMN, LabelMatrix, LEVEL_L2, ValueTaxonomy, parse_labels, write_labels
from .errors import DataError
from .labelalg import L2_LABEL_SPACE, REDUCED_LABEL_SPACE, reduce_category, reduced_names

log = logging.getLogger(__name__)

SCHEMES = ("rs1", "rs2", "rs3", "rs4")

DEFAULT_ENTAIL_THRESHOLD = 0.8
DEFAULT_CLASS_THRESHOLD = 0.5


@dataclass(frozen=True)
class DescriptorPrediction:
    """Entailment probability for one (argument, value descriptor) pair."""

    argument_id: str
    value_name: str
    descriptor_index: int
    probability: float


@dataclass(frozen=True)
class ClassPrediction:
    """Classifier scores for one argument over a declared label space."""

    argument_id: str
    label_space: str
    scores: dict[str, float]


@dataclass(frozen=True)
class ResultSet:
    """Per-argument set of predicted L2 categories under one scheme."""

    scheme: str
    predictions: dict[str, frozenset[str]]

    def roster(self) -> tuple[str, ...]:
        return tuple(self.predictions)


def read_descriptor_predictions(lines: Iterable[str]) -> list[DescriptorPrediction]:
    preds: list[DescriptorPrediction] = []
    seen: set[tuple[str, str, int]] = set()
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        cells = line.split("\t")
        if len(cells) != 4:
            raise DataError(
                f"descriptor predictions line {line_no}: expected 4 columns, "
                f"found {len(cells)}"
            )
        arg_id, value_name, index_text, prob_text = cells
        if not arg_id or not value_name:
            raise DataError(f"descriptor predictions line {line_no}: empty field")
        try:
            index = int(index_text)
        except ValueError:
            raise DataError(
                f"descriptor predictions line {line_no}: bad descriptor index "
                f"{index_text!r}"
            ) from None
        try:
            probability = float(prob_text)
        except ValueError:
            raise DataError(
                f"descriptor predictions line {line_no}: bad probability {prob_text!r}"
            ) from None
        if not 0.0 <= probability <= 1.0:
            raise DataError(
                f"descriptor predictions line {line_no}: probability {probability} "
                "outside [0, 1]"
            )
        key = (arg_id, value_name, index)
        if key in seen:
            raise DataError(
                f"descriptor predictions line {line_no}: duplicate triple {key!r}"
            )
        seen.add(key)
        preds.append(DescriptorPrediction(arg_id, value_name, index, probability))
    return preds


def write_descriptor_predictions(preds: Iterable[DescriptorPrediction], out: IO[str]) -> None:
    ordered = sorted(preds, key=lambda p: (p.argument_id, p.value_name, p.descriptor_index))
    for p in ordered:
        out.write(f"{p.argument_id}\t{p.value_name}\t{p.descriptor_index}\t{p.probability:.6f}\n")


def read_class_predictions(
    lines: Iterable[str],
    labels: Sequence[str],
    label_space: str,
    id_column: str = ID_COLUMN,
) -> list[ClassPrediction]:
    """Parse a class-prediction file against the expected label set.

    Header columns may come in any order but must match ``labels`` exactly.
    Cells are probabilities in [0, 1]; files with 0/1 cells parse the same.
    """
    rows = [line.rstrip("\n") for line in lines]
    if not rows or not rows[0]:
        raise DataError("class predictions file is empty (no header row)")
    header = rows[0].split("\t")
    if id_column not in header:
        raise DataError(f"class predictions header is missing the id column {id_column!r}")
    id_index = header.index(id_column)
    file_labels = [h for i, h in enumerate(header) if i != id_index]
    unknown = [name for name in file_labels if name not in labels]
    if unknown:
        raise DataError(
            "class predictions file has unknown label column(s): "
            + ", ".join(repr(u) for u in unknown)
        )
    missing = [name for name in labels if name not in file_labels]
    if missing:
        raise DataError(
            "class predictions file is missing label column(s): "
            + ", ".join(repr(m) for m in missing)
        )
    index_of = {name: header.index(name) for name in labels}

    preds: list[ClassPrediction] = []
    seen: set[str] = set()
    for row_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        cells = row.split("\t")
        if len(cells) != len(header):
            raise DataError(
                f"class predictions row {row_no} has {len(cells)} cells, "
                f"expected {len(header)}"
            )
        arg_id = cells[id_index].strip()
        if not arg_id:
            raise DataError(f"class predictions row {row_no} has an empty argument id")
        if arg_id in seen:
            raise DataError(f"duplicate class prediction row for id {arg_id!r}")
        seen.add(arg_id)
        scores: dict[str, float] = {}
        for name in labels:
            cell = cells[index_of[name]].strip()
            try:
                score = float(cell)
            except ValueError:
                raise DataError(
                    f"non-numeric score {cell!r} at row {row_no}, column {name!r}"
                ) from None
            if not 0.0 <= score <= 1.0:
                raise DataError(
                    f"score {score} outside [0, 1] at row {row_no}, column {name!r}"
                )
            scores[name] = score
        preds.append(ClassPrediction(argument_id=arg_id, label_space=label_space, scores=scores))
    return preds


def write_class_predictions(
    preds: Iterable[ClassPrediction],
    labels: Sequence[str],
    out: IO[str],
    id_column: str = ID_COLUMN,
) -> None:
    out.write("\t".join((id_column, *labels)) + "\n")
    for p in sorted(preds, key=lambda p: p.argument_id):
        cells = [f"{p.scores[name]:.6f}" for name in labels]
        out.write("\t".join((p.argument_id, *cells)) + "\n")


def result_set_1(
    preds: Iterable[DescriptorPrediction],
    taxonomy: ValueTaxonomy,
    roster: Sequence[str] | None = None,
    threshold: float = DEFAULT_ENTAIL_THRESHOLD,
) -> ResultSet:
    """Categories whose values have a descriptor at or above the threshold.

    Predictions below the threshold are filtered out; the boundary value is
    kept. Arguments in the roster without any prediction get an empty set
    (with a warning); predictions for ids outside the roster are ignored.
    """
    by_argument: dict[str, set[str]] = {}
    for p in preds:
        taxonomy.descriptor(p.value_name, p.descriptor_index)
        if p.probability >= threshold:
            by_argument.setdefault(p.argument_id, set()).add(
                taxonomy.category_of(p.value_name)
            )
        else:
            by_argument.setdefault(p.argument_id, set())
    if roster is None:
        roster = tuple(by_argument)
    predictions: dict[str, frozenset[str]] = {}
    for arg_id in roster:
        if arg_id not in by_argument:
            log.warning("no entailment predictions for argument %s; predicting nothing", arg_id)
        predictions[arg_id] = frozenset(by_argument.get(arg_id, ()))
    dropped = set(by_argument) - set(roster)
    if dropped:
        log.warning("ignoring predictions for %d argument(s) outside the roster", len(dropped))
    return ResultSet(scheme="rs1", predictions=predictions)


def binarize_class_predictions(
    preds: Iterable[ClassPrediction],
    threshold: float = DEFAULT_CLASS_THRESHOLD,
    roster: Sequence[str] | None = None,
) -> dict[str, frozenset[str]]:
    """Labels with score at or above the threshold, per argument.

    With a roster, arguments missing from the predictions get an empty set
    plus a warning, and predictions outside the roster are dropped.
    """
    by_argument = {p.argument_id: frozenset(n for n, s in p.scores.items() if s >= threshold) for p in preds}
    if roster is None:
        return by_argument
    result: dict[str, frozenset[str]] = {}
    for arg_id in roster:
        if arg_id not in by_argument:
            log.warning("no classifier prediction for argument %s; predicting nothing", arg_id)
        result[arg_id] = by_argument.get(arg_id, frozenset())
    dropped = set(by_argument) - set(roster)
    if dropped:
        log.warning("ignoring classifier predictions for %d argument(s) outside the roster", len(dropped))
    return result


def _check_roster(rs1: ResultSet, other: Mapping[str, frozenset[str]], what: str) -> None:
    missing = sorted(set(rs1.predictions) - set(other))
    extra = sorted(set(other) - set(rs1.predictions))
    problems = []
    if missing:
        problems.append(f"missing from {what}: " + ", ".join(map(repr, missing[:10])))
    if extra:
        problems.append(f"only in {what}: " + ", ".join(map(repr, extra[:10])))
    if problems:
        raise DataError("argument roster mismatch; " + "; ".join(problems))


def _check_categories(sets: Mapping[str, frozenset[str]], taxonomy: ValueTaxonomy, what: str) -> None:
    known = set(taxonomy.category_names)
    for arg_id, labels in sets.items():
        bad = labels - known
        if bad:
            raise DataError(
                f"{what} for argument {arg_id!r} contains unknown categor"
                f"{'y' if len(bad) == 1 else 'ies'}: " + ", ".join(sorted(map(repr, bad)))
            )


def result_set_2(
    rs1: ResultSet,
    baseline: Mapping[str, frozenset[str]],
    taxonomy: ValueTaxonomy,
) -> ResultSet:
    """Union of RS1 with the baseline classifier predictions (recall booster)."""
    _check_roster(rs1, baseline, "baseline predictions")
    _check_categories(baseline, taxonomy, "baseline prediction")
    predictions = {
        arg_id: categories | baseline[arg_id]
        for arg_id, categories in rs1.predictions.items()
    }
    return ResultSet(scheme="rs2", predictions=predictions)


def result_set_3(
    rs1: ResultSet,
    reduced: Mapping[str, frozenset[str]],
    taxonomy: ValueTaxonomy,
) -> ResultSet:
    """RS1 categories whose reduced class the reduced classifier confirmed.

    The 20-category and 12-class spaces meet through the reduction map, the
    only correspondence between them.
    """
    _check_roster(rs1, reduced, "reduced predictions")
    known = set(reduced_names(taxonomy))
    for arg_id, labels in reduced.items():
        bad = labels - known
        if bad:
            raise DataError(
                f"reduced prediction for argument {arg_id!r} contains unknown "
                "class(es): " + ", ".join(sorted(map(repr, bad)))
            )
    predictions = {
        arg_id: frozenset(c for c in categories if reduce_category(c) in reduced[arg_id])
        for arg_id, categories in rs1.predictions.items()
    }
    return ResultSet(scheme="rs3", predictions=predictions)


def result_set_4(
    rs1: ResultSet,
    baseline: Mapping[str, frozenset[str]],
    reduced: Mapping[str, frozenset[str]],
    taxonomy: ValueTaxonomy,
) -> ResultSet:
    """RS1 plus the baseline predictions the reduced classifier agrees with."""
    _check_roster(rs1, baseline, "baseline predictions")
    _check_roster(rs1, reduced, "reduced predictions")
    _check_categories(baseline, taxonomy, "baseline prediction")
    predictions = {
        arg_id: categories
        | frozenset(c for c in baseline[arg_id] if reduce_category(c) in reduced[arg_id])
        for arg_id, categories in rs1.predictions.items()
    }
    return ResultSet(scheme="rs4", predictions=predictions)


def result_set_to_matrix(result: ResultSet, taxonomy: ValueTaxonomy) -> LabelMatrix:
    """Run-file shape: one 0/1 row per argument over the 20 categories."""
    _check_categories(result.predictions, taxonomy, f"{result.scheme} prediction")
    columns = taxonomy.category_names
    rows = {
        arg_id: tuple(1 if name in categories else 0 for name in columns)
        for arg_id, categories in result.predictions.items()
    }
    return LabelMatrix(level=LEVEL_L2, columns=columns, rows=rows)


def matrix_to_result_set(matrix: LabelMatrix, scheme: str) -> ResultSet:
    predictions = {
        arg_id: frozenset(name for name, bit in zip(matrix.columns, bits) if bit)
        for arg_id, bits in matrix.rows.items()
    }
    return ResultSet(scheme=scheme, predictions=predictions)


def write_run_file(result: ResultSet, taxonomy: ValueTaxonomy, out: IO[str]) -> None:
    write_labels(result_set_to_matrix(result, taxonomy), out)


def read_run_file(lines: Iterable[str], taxonomy: ValueTaxonomy, scheme: str = "run") -> ResultSet:
    return matrix_to_result_set(parse_labels(lines, LEVEL_L2, taxonomy), scheme)
