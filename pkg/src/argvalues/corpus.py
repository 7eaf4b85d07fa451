"""Parsers for the shared-task data files and the shared in-memory data model.

Three file kinds are understood, all UTF-8:

  arguments   tab-separated with a header row; needs the four columns
              "Argument ID", "Conclusion", "Stance", "Premise" (names
              configurable, extra columns ignored)
  labels      tab-separated, header = id column plus one column per label
              name of the level (L1 values or L2 categories), cells strictly
              "0" or "1"
  taxonomy    JSON document mapping category name -> value name -> list of
              descriptor sentences, order-preserving

Parsing is strict: structural problems raise :class:`DataError` instead of
being silently repaired. Parsed structures are immutable and safe to share
across threads.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping

from .errors import DataError

# Levels of the label hierarchy.
LEVEL_L1 = "L1"
LEVEL_L2 = "L2"

#: Header names used by the shared-task distribution.
ARGUMENT_COLUMNS = ("Argument ID", "Conclusion", "Stance", "Premise")
ID_COLUMN = "Argument ID"

#: The 20 value categories of the official taxonomy, in taxonomy order.
OFFICIAL_CATEGORY_NAMES = (
    "Self-direction: thought",
    "Self-direction: action",
    "Stimulation",
    "Hedonism",
    "Achievement",
    "Power: dominance",
    "Power: resources",
    "Face",
    "Security: personal",
    "Security: societal",
    "Tradition",
    "Conformity: rules",
    "Conformity: interpersonal",
    "Humility",
    "Benevolence: caring",
    "Benevolence: dependability",
    "Universalism: concern",
    "Universalism: nature",
    "Universalism: tolerance",
    "Universalism: objectivity",
)

OFFICIAL_CATEGORY_COUNT = 20
OFFICIAL_VALUE_COUNT = 54


@dataclass(frozen=True)
class Argument:
    """One corpus row: an argument made of premise, stance, and conclusion."""

    id: str
    conclusion: str
    stance: str
    premise: str


@dataclass(frozen=True)
class L1Value:
    name: str
    descriptors: tuple[str, ...]


@dataclass(frozen=True)
class L2Category:
    name: str
    values: tuple[L1Value, ...]


@dataclass(frozen=True)
class ValueTaxonomy:
    """Three-level hierarchy: L2 category -> L1 value -> descriptor sentences."""

    categories: tuple[L2Category, ...]

    @cached_property
    def category_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.categories)

    @cached_property
    def value_names(self) -> tuple[str, ...]:
        """All L1 value names in taxonomy order."""
        return tuple(v.name for c in self.categories for v in c.values)

    @cached_property
    def _values_by_name(self) -> dict[str, L1Value]:
        return {v.name: v for c in self.categories for v in c.values}

    @cached_property
    def _category_by_value(self) -> dict[str, str]:
        return {v.name: c.name for c in self.categories for v in c.values}

    def value(self, value_name: str) -> L1Value:
        try:
            return self._values_by_name[value_name]
        except KeyError:
            raise DataError(f"unknown L1 value: {value_name!r}") from None

    def category_of(self, value_name: str) -> str:
        """Name of the unique category containing the value."""
        try:
            return self._category_by_value[value_name]
        except KeyError:
            raise DataError(f"unknown L1 value: {value_name!r}") from None

    def descriptor(self, value_name: str, index: int) -> str:
        descriptors = self.value(value_name).descriptors
        if not 0 <= index < len(descriptors):
            raise DataError(
                f"value {value_name!r} has no descriptor index {index} "
                f"(it has {len(descriptors)})"
            )
        return descriptors[index]

    def labels_for_level(self, level: str) -> tuple[str, ...]:
        if level == LEVEL_L1:
            return self.value_names
        if level == LEVEL_L2:
            return self.category_names
        raise DataError(f"unknown label level: {level!r}")

    def to_mapping(self) -> dict[str, dict[str, list[str]]]:
        """Plain nested-dict form, identical to the taxonomy file layout."""
        return {
            c.name: {v.name: list(v.descriptors) for v in c.values}
            for c in self.categories
        }

    @cached_property
    def fingerprint(self) -> str:
        """Content hash over the canonical JSON form (order-sensitive)."""
        blob = json.dumps(self.to_mapping(), ensure_ascii=False, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def is_official_shape(self) -> bool:
        return (
            len(self.categories) == OFFICIAL_CATEGORY_COUNT
            and len(self.value_names) == OFFICIAL_VALUE_COUNT
        )


@dataclass(frozen=True)
class LabelMatrix:
    """Binary annotation matrix for one split at one level.

    Columns always follow taxonomy order, regardless of the order found in
    the source file. Rows map argument id -> bit vector aligned to columns.
    """

    level: str
    columns: tuple[str, ...]
    rows: dict[str, tuple[int, ...]]

    def __post_init__(self) -> None:
        width = len(self.columns)
        for arg_id, bits in self.rows.items():
            if len(bits) != width:
                raise DataError(
                    f"label row for {arg_id!r} has {len(bits)} cells, "
                    f"expected {width}"
                )
            if any(b not in (0, 1) for b in bits):
                raise DataError(f"label row for {arg_id!r} contains non-binary cells")

    @cached_property
    def _column_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.columns)}

    def bit(self, argument_id: str, label: str) -> int:
        try:
            row = self.rows[argument_id]
        except KeyError:
            raise DataError(f"no label row for argument {argument_id!r}") from None
        try:
            return row[self._column_index[label]]
        except KeyError:
            raise DataError(f"unknown label column: {label!r}") from None

    def positives(self, argument_id: str) -> tuple[str, ...]:
        """Labels set to 1 for the argument, in column order."""
        row = self.rows.get(argument_id)
        if row is None:
            raise DataError(f"no label row for argument {argument_id!r}")
        return tuple(name for name, b in zip(self.columns, row) if b)


def _read_tsv(lines: Iterable[str]) -> Iterator[list[str]]:
    # QUOTE_NONE keeps quote characters literal; the task files never quote.
    return csv.reader(lines, delimiter="\t", quoting=csv.QUOTE_NONE)


def parse_arguments(
    lines: Iterable[str],
    columns: tuple[str, str, str, str] = ARGUMENT_COLUMNS,
) -> list[Argument]:
    """Parse an arguments file into :class:`Argument` records, in file order.

    ``columns`` names the (id, conclusion, stance, premise) headers. All four
    fields are trimmed of surrounding whitespace and must be non-empty.
    Duplicate ids and missing columns are fatal.
    """
    reader = _read_tsv(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("arguments file is empty (no header row)") from None

    missing = [name for name in columns if name not in header]
    if missing:
        raise DataError(
            "arguments header is missing required column(s): "
            + ", ".join(repr(m) for m in missing)
        )
    indices = [header.index(name) for name in columns]

    arguments: list[Argument] = []
    seen: dict[str, int] = {}
    for row_no, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise DataError(
                f"arguments row {row_no} has {len(row)} cells, "
                f"expected {len(header)}"
            )
        fields = [row[i].strip() for i in indices]
        for name, field in zip(columns, fields):
            if not field:
                raise DataError(f"row {row_no}: required field {name!r} is empty")
        arg_id, conclusion, stance, premise = fields
        if arg_id in seen:
            raise DataError(
                f"duplicate argument id {arg_id!r} (rows {seen[arg_id]} and {row_no})"
            )
        seen[arg_id] = row_no
        arguments.append(
            Argument(id=arg_id, conclusion=conclusion, stance=stance, premise=premise)
        )
    return arguments


def _reject_duplicate_keys(pairs: list[tuple[str, object]]) -> dict:
    result: dict = {}
    for key, value in pairs:
        if key in result:
            raise DataError(f"duplicate key in taxonomy document: {key!r}")
        result[key] = value
    return result


def parse_taxonomy(source: str | IO[str]) -> ValueTaxonomy:
    """Parse the JSON taxonomy document, preserving document order.

    The document maps category name -> value name -> list of descriptors.
    Value names must be unique across the whole taxonomy and every value
    needs at least one non-empty descriptor.
    """
    text = source if isinstance(source, str) else source.read()
    try:
        document = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise DataError(f"taxonomy is not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise DataError("taxonomy document must be a JSON object at the top level")

    return taxonomy_from_mapping(document)


def taxonomy_from_mapping(document: Mapping[str, Mapping[str, list[str]]]) -> ValueTaxonomy:
    """Build a validated taxonomy from the nested-dict layout."""
    categories: list[L2Category] = []
    seen_values: dict[str, str] = {}
    for cat_name, values in document.items():
        if not isinstance(cat_name, str) or not cat_name.strip():
            raise DataError(f"invalid category name: {cat_name!r}")
        if not isinstance(values, Mapping):
            raise DataError(f"category {cat_name!r} must map value names to descriptor lists")
        parsed_values: list[L1Value] = []
        for value_name, descriptors in values.items():
            if not isinstance(value_name, str) or not value_name.strip():
                raise DataError(f"invalid value name under {cat_name!r}: {value_name!r}")
            if value_name in seen_values:
                raise DataError(
                    f"value {value_name!r} appears in both "
                    f"{seen_values[value_name]!r} and {cat_name!r}"
                )
            seen_values[value_name] = cat_name
            if not isinstance(descriptors, list) or not descriptors:
                raise DataError(f"value {value_name!r} has no descriptors")
            for d in descriptors:
                if not isinstance(d, str) or not d.strip():
                    raise DataError(f"value {value_name!r} has an empty descriptor")
            parsed_values.append(L1Value(name=value_name, descriptors=tuple(descriptors)))
        categories.append(L2Category(name=cat_name, values=tuple(parsed_values)))
    return ValueTaxonomy(categories=tuple(categories))


def parse_labels(
    lines: Iterable[str],
    level: str,
    taxonomy: ValueTaxonomy,
    id_column: str = ID_COLUMN,
) -> LabelMatrix:
    """Parse a label file into a matrix with columns in taxonomy order.

    The header must contain the id column plus exactly the level's label
    names (any file order). Cells are parsed strictly as "0"/"1". Rows whose
    id matches no parsed argument are retained; matrices are joined by id
    downstream.
    """
    expected = taxonomy.labels_for_level(level)
    reader = _read_tsv(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("label file is empty (no header row)") from None

    if id_column not in header:
        raise DataError(f"label header is missing the id column {id_column!r}")
    id_index = header.index(id_column)
    label_columns = [h for i, h in enumerate(header) if i != id_index]

    unknown = [name for name in label_columns if name not in expected]
    if unknown:
        raise DataError(
            f"label file has column(s) not in the {level} label set: "
            + ", ".join(repr(u) for u in unknown)
        )
    missing = [name for name in expected if name not in label_columns]
    if missing:
        raise DataError(
            f"label file is missing {level} column(s): "
            + ", ".join(repr(m) for m in missing)
        )
    if len(label_columns) != len(set(label_columns)):
        dupes = sorted({c for c in label_columns if label_columns.count(c) > 1})
        raise DataError("label file repeats column(s): " + ", ".join(map(repr, dupes)))

    source_index = {name: header.index(name) for name in expected}
    rows: dict[str, tuple[int, ...]] = {}
    row_numbers: dict[str, int] = {}
    for row_no, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise DataError(
                f"label row {row_no} has {len(row)} cells, expected {len(header)}"
            )
        arg_id = row[id_index].strip()
        if not arg_id:
            raise DataError(f"label row {row_no} has an empty argument id")
        if arg_id in rows:
            raise DataError(
                f"duplicate label row for id {arg_id!r} "
                f"(rows {row_numbers[arg_id]} and {row_no})"
            )
        bits = []
        for name in expected:
            cell = row[source_index[name]].strip()
            if cell == "0":
                bits.append(0)
            elif cell == "1":
                bits.append(1)
            else:
                raise DataError(
                    f"non-binary cell {cell!r} at row {row_no}, column {name!r}"
                )
        rows[arg_id] = tuple(bits)
        row_numbers[arg_id] = row_no
    return LabelMatrix(level=level, columns=expected, rows=rows)


def write_labels(matrix: LabelMatrix, out: IO[str], id_column: str = ID_COLUMN) -> None:
    """Serialize a label matrix back to the tabular format (round-trip safe)."""
    out.write("\t".join((id_column, *matrix.columns)) + "\n")
    for arg_id, bits in matrix.rows.items():
        out.write("\t".join((arg_id, *(str(b) for b in bits))) + "\n")


def load_arguments(path: str | Path, columns: tuple[str, str, str, str] = ARGUMENT_COLUMNS) -> list[Argument]:
    with open(path, encoding="utf-8", newline="") as f:
        return parse_arguments(f, columns)


def load_taxonomy(path: str | Path) -> ValueTaxonomy:
    with open(path, encoding="utf-8") as f:
        return parse_taxonomy(f)


def load_labels(path: str | Path, level: str, taxonomy: ValueTaxonomy) -> LabelMatrix:
    with open(path, encoding="utf-8", newline="") as f:
        return parse_labels(f, level, taxonomy)
