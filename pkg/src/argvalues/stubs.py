"""Deterministic model-free predictors for exercising the pipeline.

Three modes:

  lexical_overlap   share of the description's word types also found in the
                    argument (a crude but monotone relevance signal)
  constant          the same configured probability everywhere
  oracle_from_gold  1.0 exactly where the gold label says entailed/positive

The emitters write the same prediction-file formats as the real model
runner, so every downstream consumer can be tested end to end at desk
scale without any trained model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import Argument, LabelMatrix, ValueTaxonomy
from .ensemble import ClassPrediction, DescriptorPrediction
from .errors import DataError
from .labelalg import L2_LABEL_SPACE, REDUCED_LABEL_SPACE, reduced_classes
from .textgen import DEFAULT_POLICY, TextPolicy, build_argument_text, build_description_text

MODE_LEXICAL = "lexical_overlap"
MODE_CONSTANT = "constant"
MODE_ORACLE = "oracle_from_gold"
STUB_MODES = (MODE_LEXICAL, MODE_CONSTANT, MODE_ORACLE)


@dataclass(frozen=True)
class StubConfig:
    mode: str
    constant_value: float | None = None
    noise_seed: int | None = None  # reserved for perturbation experiments

    def __post_init__(self) -> None:
        if self.mode not in STUB_MODES:
            raise DataError(f"unknown stub mode {self.mode!r}; expected one of {STUB_MODES}")
        if self.mode == MODE_CONSTANT:
            if self.constant_value is None:
                raise DataError("constant stub mode requires constant_value")
            if not 0.0 <= self.constant_value <= 1.0:
                raise DataError(f"constant_value {self.constant_value} outside [0, 1]")
        elif self.constant_value is not None:
            raise DataError(f"constant_value is only valid in constant mode, not {self.mode!r}")


def _word_types(text: str) -> set[str]:
    return set(text.lower().split())


def _overlap(argument_text: str, reference_text: str) -> float:
    reference = _word_types(reference_text)
    if not reference:
        raise DataError("reference text has no word types")
    return len(_word_types(argument_text) & reference) / len(reference)


def stub_entailment_score(
    argument_text: str,
    description_text: str,
    config: StubConfig,
    gold: int | None = None,
) -> float:
    """Probability for one (argument text, description text) pair.

    Oracle mode needs the pair's gold L1 bit; the other modes depend only
    on the texts and the config.
    """
    if not argument_text.strip() or not description_text.strip():
        raise DataError("stub scoring requires non-empty texts")
    if config.mode == MODE_CONSTANT:
        return config.constant_value
    if config.mode == MODE_ORACLE:
        if gold is None:
            raise DataError("oracle_from_gold mode needs the gold label for the pair")
        return 1.0 if gold else 0.0
    return _overlap(argument_text, description_text)


def stub_class_scores(
    argument_text: str,
    labels: Sequence[str],
    config: StubConfig,
    gold: dict[str, int] | None = None,
) -> dict[str, float]:
    """Scores over a label space; lexical mode overlaps against label names."""
    if not argument_text.strip():
        raise DataError("stub scoring requires a non-empty argument text")
    if config.mode == MODE_CONSTANT:
        return {name: config.constant_value for name in labels}
    if config.mode == MODE_ORACLE:
        if gold is None:
            raise DataError("oracle_from_gold mode needs the gold bits for the argument")
        missing = [name for name in labels if name not in gold]
        if missing:
            raise DataError("gold bits missing label(s): " + ", ".join(map(repr, missing)))
        return {name: 1.0 if gold[name] else 0.0 for name in labels}
    return {name: _overlap(argument_text, name) for name in labels}


def emit_descriptor_predictions(
    arguments: Sequence[Argument],
    taxonomy: ValueTaxonomy,
    config: StubConfig,
    l1_labels: LabelMatrix | None = None,
    policy: TextPolicy = DEFAULT_POLICY,
) -> list[DescriptorPrediction]:
    """Score every argument against every (value, descriptor) combination."""
    if config.mode == MODE_ORACLE and l1_labels is None:
        raise DataError("oracle_from_gold mode needs the split's L1 labels")
    preds: list[DescriptorPrediction] = []
    for argument in arguments:
        argument_text = build_argument_text(argument, policy).text
        for category in taxonomy.categories:
            for value in category.values:
                gold = None
                if config.mode == MODE_ORACLE:
                    gold = l1_labels.bit(argument.id, value.name)
                for index, descriptor in enumerate(value.descriptors):
                    description = build_description_text(value.name, descriptor, index, policy)
                    probability = stub_entailment_score(
                        argument_text, description.text, config, gold
                    )
                    preds.append(
                        DescriptorPrediction(
                            argument_id=argument.id,
                            value_name=value.name,
                            descriptor_index=index,
                            probability=probability,
                        )
                    )
    return preds


def emit_class_predictions(
    arguments: Sequence[Argument],
    taxonomy: ValueTaxonomy,
    config: StubConfig,
    label_space: str,
    l2_labels: LabelMatrix | None = None,
    policy: TextPolicy = DEFAULT_POLICY,
) -> list[ClassPrediction]:
    """Classifier-shaped scores for a split, in either label space.

    In oracle mode a reduced class is positive iff any of its member
    categories is positive in the gold L2 row.
    """
    if config.mode == MODE_ORACLE and l2_labels is None:
        raise DataError("oracle_from_gold mode needs the split's L2 labels")
    if label_space == L2_LABEL_SPACE:
        labels: Sequence[str] = taxonomy.category_names
    elif label_space == REDUCED_LABEL_SPACE:
        labels = tuple(rc.name for rc in reduced_classes(taxonomy))
    else:
        raise DataError(f"unknown label space: {label_space!r}")

    preds: list[ClassPrediction] = []
    for argument in arguments:
        argument_text = build_argument_text(argument, policy).text
        gold = None
        if config.mode == MODE_ORACLE:
            if label_space == L2_LABEL_SPACE:
                gold = {name: l2_labels.bit(argument.id, name) for name in labels}
            else:
                gold = {
                    rc.name: int(any(l2_labels.bit(argument.id, m) for m in rc.members))
                    for rc in reduced_classes(taxonomy)
                }
        scores = stub_class_scores(argument_text, labels, config, gold)
        preds.append(
            ClassPrediction(argument_id=argument.id, label_space=label_space, scores=scores)
        )
    return preds
