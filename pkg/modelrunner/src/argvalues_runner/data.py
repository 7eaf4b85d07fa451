"""Readers for the pipeline's file formats and the external NLI corpus.

The pipeline toolkit owns these formats; the readers here are written
against the documented shapes and fail fast on violations, because a
training run on a malformed file wastes hours before anyone notices.

NLI corpus: JSON Lines with premise/hypothesis/label keys (the common
``sentence1``/``sentence2``/``gold_label`` names are accepted too). Labels
binarize to 1 for entailment and 0 for anything else; rows with the "-"
no-consensus marker are dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

ARGUMENT_COLUMNS = ("Argument ID", "Conclusion", "Stance", "Premise")
ID_COLUMN = "Argument ID"

PAIR_KINDS = ("positive", "negative_easy", "negative_difficult")

ENTAILMENT_LABEL = "entailment"
NO_CONSENSUS = "-"


class DataFormatError(Exception):
    """A file does not match the pipeline's documented format."""


@dataclass(frozen=True)
class ArgumentRow:
    id: str
    conclusion: str
    stance: str
    premise: str


@dataclass(frozen=True)
class PairRow:
    argument_id: str
    kind: str
    value_name: str
    descriptor_index: int
    label: int
    argument_text: str
    description_text: str


def argument_text(row: ArgumentRow, separator: str = " ") -> str:
    """premise + stance + conclusion, matching the pipeline's construction."""
    return separator.join((row.premise, row.stance, row.conclusion))


def description_text(
    value_name: str, descriptor: str, separator: str = " ", lowercase: bool = False
) -> str:
    name = value_name.lower() if lowercase else value_name
    return separator.join((name, "by", descriptor))


def reduce_label(name: str) -> str:
    """Colon-prefix reduction: '<prefix>: <rest>' collapses to '<prefix>'."""
    return name.split(":", 1)[0].rstrip()


def read_arguments(path: str | Path) -> list[ArgumentRow]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise DataFormatError(f"{path}: empty arguments file")
    header = lines[0].split("\t")
    missing = [c for c in ARGUMENT_COLUMNS if c not in header]
    if missing:
        raise DataFormatError(f"{path}: header is missing {missing}")
    index = {name: header.index(name) for name in ARGUMENT_COLUMNS}
    rows: list[ArgumentRow] = []
    seen: set[str] = set()
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cells = line.split("\t")
        if len(cells) != len(header):
            raise DataFormatError(f"{path}:{line_no}: wrong cell count")
        fields = {name: cells[index[name]].strip() for name in ARGUMENT_COLUMNS}
        if any(not v for v in fields.values()):
            raise DataFormatError(f"{path}:{line_no}: empty required field")
        if fields[ID_COLUMN] in seen:
            raise DataFormatError(f"{path}:{line_no}: duplicate id {fields[ID_COLUMN]!r}")
        seen.add(fields[ID_COLUMN])
        rows.append(
            ArgumentRow(
                id=fields[ID_COLUMN],
                conclusion=fields["Conclusion"],
                stance=fields["Stance"],
                premise=fields["Premise"],
            )
        )
    return rows


def read_label_matrix(path: str | Path) -> tuple[tuple[str, ...], dict[str, tuple[int, ...]]]:
    """Label file -> (label columns in file order, id -> bit row)."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise DataFormatError(f"{path}: empty label file")
    header = lines[0].split("\t")
    if ID_COLUMN not in header:
        raise DataFormatError(f"{path}: header is missing {ID_COLUMN!r}")
    id_index = header.index(ID_COLUMN)
    columns = tuple(h for i, h in enumerate(header) if i != id_index)
    rows: dict[str, tuple[int, ...]] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cells = line.split("\t")
        if len(cells) != len(header):
            raise DataFormatError(f"{path}:{line_no}: wrong cell count")
        arg_id = cells[id_index].strip()
        bits = []
        for i, cell in enumerate(cells):
            if i == id_index:
                continue
            cell = cell.strip()
            if cell not in ("0", "1"):
                raise DataFormatError(f"{path}:{line_no}: non-binary cell {cell!r}")
            bits.append(int(cell))
        if arg_id in rows:
            raise DataFormatError(f"{path}:{line_no}: duplicate id {arg_id!r}")
        rows[arg_id] = tuple(bits)
    return columns, rows


def reduced_targets(
    columns: tuple[str, ...], rows: dict[str, tuple[int, ...]]
) -> tuple[tuple[str, ...], dict[str, tuple[int, ...]]]:
    """Merge label columns by the reduction rule: 1 iff any member is 1."""
    reduced_columns: list[str] = []
    members: dict[str, list[int]] = {}
    for i, name in enumerate(columns):
        reduced = reduce_label(name)
        if reduced not in members:
            members[reduced] = []
            reduced_columns.append(reduced)
        members[reduced].append(i)
    out = {
        arg_id: tuple(
            int(any(bits[i] for i in members[name])) for name in reduced_columns
        )
        for arg_id, bits in rows.items()
    }
    return tuple(reduced_columns), out


def read_taxonomy(path: str | Path) -> dict[str, dict[str, list[str]]]:
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(document, dict):
        raise DataFormatError(f"{path}: taxonomy must be a JSON object")
    for category, values in document.items():
        if not isinstance(values, dict):
            raise DataFormatError(f"{path}: category {category!r} must map values to descriptors")
        for value, descriptors in values.items():
            if not isinstance(descriptors, list) or not descriptors:
                raise DataFormatError(f"{path}: value {value!r} needs a descriptor list")
    return document


def read_pairs(path: str | Path) -> list[PairRow]:
    """Strict pair-file reader; rejects schema violations before training."""
    rows: list[PairRow] = []
    seen: set[tuple[str, str, int]] = set()
    for line_no, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line:
            continue
        cells = line.split("\t")
        if len(cells) != 7:
            raise DataFormatError(f"{path}:{line_no}: expected 7 columns, found {len(cells)}")
        arg_id, kind, value_name, index_text, label_text, arg_text, desc_text = cells
        if kind not in PAIR_KINDS:
            raise DataFormatError(f"{path}:{line_no}: unknown kind {kind!r}")
        if label_text not in ("0", "1"):
            raise DataFormatError(f"{path}:{line_no}: label must be 0 or 1")
        label = int(label_text)
        if (label == 1) != (kind == "positive"):
            raise DataFormatError(f"{path}:{line_no}: label/kind mismatch")
        try:
            index = int(index_text)
        except ValueError:
            raise DataFormatError(f"{path}:{line_no}: bad descriptor index") from None
        if not arg_text or not desc_text:
            raise DataFormatError(f"{path}:{line_no}: empty text field")
        key = (arg_id, value_name, index)
        if key in seen:
            raise DataFormatError(f"{path}:{line_no}: duplicate pair {key!r}")
        seen.add(key)
        rows.append(PairRow(arg_id, kind, value_name, index, label, arg_text, desc_text))
    return rows


def read_nli(path: str | Path) -> list[tuple[str, str, int]]:
    """NLI corpus -> (premise, hypothesis, binary entailment label) triples."""
    examples: list[tuple[str, str, int]] = []
    for line_no, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            raise DataFormatError(f"{path}:{line_no}: not valid JSON") from None
        premise = record.get("premise", record.get("sentence1"))
        hypothesis = record.get("hypothesis", record.get("sentence2"))
        label = record.get("label", record.get("gold_label"))
        if premise is None or hypothesis is None or label is None:
            raise DataFormatError(
                f"{path}:{line_no}: need premise/hypothesis/label "
                "(or sentence1/sentence2/gold_label)"
            )
        if label == NO_CONSENSUS:
            continue
        examples.append((premise, hypothesis, 1 if label == ENTAILMENT_LABEL else 0))
    return examples
