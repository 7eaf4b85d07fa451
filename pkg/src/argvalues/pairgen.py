"""Synthesis of the textual-entailment training corpus.

Per argument: one positive pair for every descriptor of every positive L1
value (N pairs total), then N negative pairs split half difficult, half
easy. A difficult negative descriptor belongs to a value labeled 0 inside
one of the argument's positive categories; an easy one comes from a
category containing none of the argument's positive values.

Generation is deterministic: each argument gets its own RNG stream keyed by
(seed, argument id), so output is independent of iteration order and of any
parallel schedule, and the emitted file is sorted into a canonical order.

Pair file format (UTF-8, tab-separated, no header)::

    argument_id  kind  value_name  descriptor_index  label  argument_text  description_text

A JSON manifest with the seed, policy flags, taxonomy fingerprint, and
per-kind counts accompanies every generated file.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

from . import __version__
from .corpus import Argument, LabelMatrix, ValueTaxonomy
from .errors import DataError
from .textgen import DEFAULT_POLICY, DescriptionText, TextPolicy, build_argument_text, build_description_text

log = logging.getLogger(__name__)

KIND_POSITIVE = "positive"
KIND_NEGATIVE_EASY = "negative_easy"
KIND_NEGATIVE_DIFFICULT = "negative_difficult"
PAIR_KINDS = (KIND_POSITIVE, KIND_NEGATIVE_EASY, KIND_NEGATIVE_DIFFICULT)

PAIR_FILE_COLUMNS = (
    "argument_id",
    "kind",
    "value_name",
    "descriptor_index",
    "label",
    "argument_text",
    "description_text",
)

GENERATOR_VERSION = f"argvalues/{__version__}"


@dataclass(frozen=True)
class EntailmentPair:
    argument_id: str
    argument_text: str
    description: DescriptionText
    label: int
    kind: str
    value_name: str
    category_name: str

    def sort_key(self) -> tuple[str, str, str, int]:
        return (self.argument_id, self.kind, self.value_name, self.description.descriptor_index)


@dataclass
class PairDatasetManifest:
    """Sidecar metadata making a generated dataset reproducible."""

    generator_version: str
    split: str
    seed: int
    policy: dict
    taxonomy_fingerprint: str
    counts: dict[str, int] = field(default_factory=dict)
    shortfall: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PairDatasetManifest":
        raw = json.loads(text)
        return cls(**raw)


#: Free choices the construction rule leaves open, recorded in every manifest.
SAMPLING_POLICY = {
    "odd_negative_split": "difficult_first",
    "difficult_category_scope": "any_positive_category",
    "negative_sampling": "without_replacement",
}


def derive_argument_seed(seed: int, argument_id: str) -> int:
    """Stable per-argument RNG key; independent of iteration order."""
    digest = hashlib.sha256(f"{seed}\x1f{argument_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def positive_pairs(
    argument: Argument,
    l1_labels: LabelMatrix,
    taxonomy: ValueTaxonomy,
    policy: TextPolicy = DEFAULT_POLICY,
) -> list[EntailmentPair]:
    """One positive pair per descriptor of every positive L1 value.

    Output order is taxonomy order. Arguments with no positive values yield
    an empty list (their pair count N is zero by definition).
    """
    positives = set(l1_labels.positives(argument.id))
    if not positives:
        return []
    argument_text = build_argument_text(argument, policy).text
    pairs: list[EntailmentPair] = []
    for category in taxonomy.categories:
        for value in category.values:
            if value.name not in positives:
                continue
            for index, descriptor in enumerate(value.descriptors):
                description = build_description_text(value.name, descriptor, index, policy)
                pairs.append(
                    EntailmentPair(
                        argument_id=argument.id,
                        argument_text=argument_text,
                        description=description,
                        label=1,
                        kind=KIND_POSITIVE,
                        value_name=value.name,
                        category_name=category.name,
                    )
                )
    return pairs


def _candidate_pools(
    positives: set[str],
    taxonomy: ValueTaxonomy,
) -> tuple[list[tuple[str, int, str, str]], list[tuple[str, int, str, str]]]:
    """(difficult, easy) pools of (value, descriptor_index, descriptor, category).

    Difficult: value labeled 0 whose category holds >= 1 positive value.
    Easy: value labeled 0 in a category holding none. Pool order is taxonomy
    order, which keeps sampling reproducible.
    """
    positive_categories = {taxonomy.category_of(v) for v in positives}
    difficult: list[tuple[str, int, str, str]] = []
    easy: list[tuple[str, int, str, str]] = []
    for category in taxonomy.categories:
        pool = difficult if category.name in positive_categories else easy
        for value in category.values:
            if value.name in positives:
                continue
            for index, descriptor in enumerate(value.descriptors):
                pool.append((value.name, index, descriptor, category.name))
    return difficult, easy


def negative_pairs(
    argument: Argument,
    l1_labels: LabelMatrix,
    taxonomy: ValueTaxonomy,
    n: int,
    rng: random.Random,
    policy: TextPolicy = DEFAULT_POLICY,
) -> list[EntailmentPair]:
    """Sample n negatives: ceil(n/2) difficult + floor(n/2) easy.

    Sampling is without replacement over (value, descriptor) candidates. A
    shortfall in one pool is filled from the other; only when both pools are
    exhausted are fewer than n pairs returned (callers count the deficit).
    """
    if n <= 0:
        return []
    positives = set(l1_labels.positives(argument.id))
    difficult_pool, easy_pool = _candidate_pools(positives, taxonomy)

    difficult_quota = (n + 1) // 2
    easy_quota = n // 2
    take_difficult = min(difficult_quota, len(difficult_pool))
    take_easy = min(easy_quota, len(easy_pool))
    need = n - take_difficult - take_easy
    if need > 0:
        fill_easy = min(need, len(easy_pool) - take_easy)
        take_easy += fill_easy
        need -= fill_easy
    if need > 0:
        fill_difficult = min(need, len(difficult_pool) - take_difficult)
        take_difficult += fill_difficult
        need -= fill_difficult
    if need > 0:
        log.warning(
            "argument %s: negative pools exhausted, emitting %d of %d negatives",
            argument.id,
            take_difficult + take_easy,
            n,
        )
    elif (take_difficult, take_easy) != (difficult_quota, easy_quota):
        log.warning(
            "argument %s: negative pool fallback, %d difficult + %d easy "
            "(quotas were %d + %d)",
            argument.id,
            take_difficult,
            take_easy,
            difficult_quota,
            easy_quota,
        )

    argument_text = build_argument_text(argument, policy).text
    pairs: list[EntailmentPair] = []
    for kind, pool, take in (
        (KIND_NEGATIVE_DIFFICULT, difficult_pool, take_difficult),
        (KIND_NEGATIVE_EASY, easy_pool, take_easy),
    ):
        for value_name, index, descriptor, category_name in rng.sample(pool, take):
            description = build_description_text(value_name, descriptor, index, policy)
            pairs.append(
                EntailmentPair(
                    argument_id=argument.id,
                    argument_text=argument_text,
                    description=description,
                    label=0,
                    kind=kind,
                    value_name=value_name,
                    category_name=category_name,
                )
            )
    return pairs


def pairs_for_argument(
    argument: Argument,
    l1_labels: LabelMatrix,
    taxonomy: ValueTaxonomy,
    seed: int,
    policy: TextPolicy = DEFAULT_POLICY,
) -> list[EntailmentPair]:
    """All pairs for one argument under its keyed RNG stream."""
    positives = positive_pairs(argument, l1_labels, taxonomy, policy)
    if not positives:
        return []
    rng = random.Random(derive_argument_seed(seed, argument.id))
    negatives = negative_pairs(argument, l1_labels, taxonomy, len(positives), rng, policy)
    return positives + negatives


def _generate_chunk(
    arguments: Sequence[Argument],
    l1_labels: LabelMatrix,
    taxonomy: ValueTaxonomy,
    seed: int,
    policy: TextPolicy,
) -> tuple[list[EntailmentPair], dict[str, int]]:
    pairs: list[EntailmentPair] = []
    stats = {
        "shortfall_arguments": 0,
        "missing_pairs": 0,
        "fallback_arguments": 0,
        "arguments_with_pairs": 0,
    }
    for argument in arguments:
        generated = pairs_for_argument(argument, l1_labels, taxonomy, seed, policy)
        if not generated:
            continue
        stats["arguments_with_pairs"] += 1
        n_pos = sum(1 for p in generated if p.kind == KIND_POSITIVE)
        n_difficult = sum(1 for p in generated if p.kind == KIND_NEGATIVE_DIFFICULT)
        n_easy = sum(1 for p in generated if p.kind == KIND_NEGATIVE_EASY)
        if n_difficult + n_easy < n_pos:
            stats["shortfall_arguments"] += 1
            stats["missing_pairs"] += n_pos - n_difficult - n_easy
        elif (n_difficult, n_easy) != ((n_pos + 1) // 2, n_pos // 2):
            stats["fallback_arguments"] += 1
        pairs.extend(generated)
    return pairs, stats


def generate_dataset(
    arguments: Sequence[Argument],
    l1_labels: LabelMatrix,
    taxonomy: ValueTaxonomy,
    seed: int,
    policy: TextPolicy = DEFAULT_POLICY,
    split: str = "",
    workers: int = 1,
) -> tuple[list[EntailmentPair], PairDatasetManifest]:
    """Generate the full pair dataset for a split, canonically sorted.

    Output is a pure function of (corpus, taxonomy, seed, policy): shuffling
    the argument list changes nothing, and any worker count produces the
    same dataset because every argument owns a keyed RNG stream.
    """
    missing = [a.id for a in arguments if a.id not in l1_labels.rows]
    if missing:
        preview = ", ".join(repr(m) for m in missing[:10])
        more = f" (and {len(missing) - 10} more)" if len(missing) > 10 else ""
        raise DataError(f"arguments without L1 label rows: {preview}{more}")

    if workers > 1 and len(arguments) > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunk_size = max(1, -(-len(arguments) // (workers * 4)))
        chunks = [
            list(arguments[i : i + chunk_size])
            for i in range(0, len(arguments), chunk_size)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    _generate_chunk,
                    chunks,
                    (l1_labels,) * len(chunks),
                    (taxonomy,) * len(chunks),
                    (seed,) * len(chunks),
                    (policy,) * len(chunks),
                )
            )
    else:
        results = [_generate_chunk(arguments, l1_labels, taxonomy, seed, policy)]

    pairs: list[EntailmentPair] = []
    totals = {"shortfall_arguments": 0, "missing_pairs": 0, "fallback_arguments": 0, "arguments_with_pairs": 0}
    for chunk_pairs, stats in results:
        pairs.extend(chunk_pairs)
        for key in totals:
            totals[key] += stats[key]

    pairs.sort(key=EntailmentPair.sort_key)
    counts = {kind: 0 for kind in PAIR_KINDS}
    for pair in pairs:
        counts[pair.kind] += 1
    counts["total"] = len(pairs)
    counts["arguments"] = len(arguments)
    counts["arguments_with_pairs"] = totals["arguments_with_pairs"]

    manifest = PairDatasetManifest(
        generator_version=GENERATOR_VERSION,
        split=split,
        seed=seed,
        policy={**policy.as_dict(), **SAMPLING_POLICY},
        taxonomy_fingerprint=taxonomy.fingerprint,
        counts=counts,
        shortfall={
            "arguments": totals["shortfall_arguments"],
            "missing_pairs": totals["missing_pairs"],
            "fallback_arguments": totals["fallback_arguments"],
        },
    )
    return pairs, manifest


def _check_field(value: str, what: str) -> str:
    if "\t" in value or "\n" in value or "\r" in value:
        raise DataError(f"{what} contains a tab or newline and cannot be written as TSV")
    return value


def write_pairs(pairs: Iterable[EntailmentPair], out: IO[str]) -> None:
    """Write pairs in canonical sort order, one tab-separated record per line."""
    for pair in sorted(pairs, key=EntailmentPair.sort_key):
        record = (
            _check_field(pair.argument_id, "argument id"),
            pair.kind,
            _check_field(pair.value_name, "value name"),
            str(pair.description.descriptor_index),
            str(pair.label),
            _check_field(pair.argument_text, "argument text"),
            _check_field(pair.description.text, "description text"),
        )
        out.write("\t".join(record) + "\n")


def read_pairs(
    lines: Iterable[str],
    taxonomy: ValueTaxonomy | None = None,
) -> list[EntailmentPair]:
    """Strict parser for the pair-file format (the model trainer's input).

    With a taxonomy, value names and descriptor indices are checked against
    it and each pair's category is resolved; without one, provenance fields
    are taken at face value and the category is left blank.
    """
    pairs: list[EntailmentPair] = []
    seen: set[tuple[str, str, int]] = set()
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        cells = line.split("\t")
        if len(cells) != len(PAIR_FILE_COLUMNS):
            raise DataError(
                f"pair file line {line_no}: expected {len(PAIR_FILE_COLUMNS)} "
                f"columns, found {len(cells)}"
            )
        arg_id, kind, value_name, index_text, label_text, argument_text, description_text = cells
        if kind not in PAIR_KINDS:
            raise DataError(f"pair file line {line_no}: unknown kind {kind!r}")
        try:
            index = int(index_text)
        except ValueError:
            raise DataError(
                f"pair file line {line_no}: bad descriptor index {index_text!r}"
            ) from None
        if index < 0:
            raise DataError(f"pair file line {line_no}: negative descriptor index")
        if label_text not in ("0", "1"):
            raise DataError(f"pair file line {line_no}: label must be 0 or 1")
        label = int(label_text)
        if (label == 1) != (kind == KIND_POSITIVE):
            raise DataError(
                f"pair file line {line_no}: label {label} inconsistent with kind {kind!r}"
            )
        if not arg_id or not value_name or not argument_text or not description_text:
            raise DataError(f"pair file line {line_no}: empty field")
        key = (arg_id, value_name, index)
        if key in seen:
            raise DataError(
                f"pair file line {line_no}: duplicate (argument, value, descriptor) "
                f"triple {key!r}"
            )
        seen.add(key)
        category_name = ""
        if taxonomy is not None:
            taxonomy.descriptor(value_name, index)
            category_name = taxonomy.category_of(value_name)
        pairs.append(
            EntailmentPair(
                argument_id=arg_id,
                argument_text=argument_text,
                description=DescriptionText(
                    value_name=value_name, descriptor_index=index, text=description_text
                ),
                label=label,
                kind=kind,
                value_name=value_name,
                category_name=category_name,
            )
        )
    return pairs
