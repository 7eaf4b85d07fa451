"""Batch inference writing the pipeline's prediction-file formats.

Entailment prediction covers every (argument, value descriptor)
combination; classifier prediction emits raw probabilities (binarization
is the pipeline's job, keeping the decision threshold in one place). Files
are written in canonical sort order, and each one gets a JSON sidecar
recording the recipe and text policy that produced it.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from .data import ArgumentRow, argument_text, description_text
from .training import PairExample, predict_class_probabilities, predict_entailment_probabilities


def descriptor_grid(taxonomy: dict[str, dict[str, list[str]]]) -> list[tuple[str, int, str]]:
    """(value name, descriptor index, descriptor) in taxonomy order."""
    grid = []
    for values in taxonomy.values():
        for value_name, descriptors in values.items():
            for index, descriptor in enumerate(descriptors):
                grid.append((value_name, index, descriptor))
    return grid


def predict_entailment_file(
    model,
    tokenizer,
    recipe,
    arguments: Sequence[ArgumentRow],
    taxonomy: dict,
    out_path: str | Path,
    separator: str = " ",
    lowercase_value_names: bool = False,
    device: str = "cpu",
) -> int:
    """Score every argument against every descriptor; returns the row count."""
    grid = descriptor_grid(taxonomy)
    rows: list[tuple[str, str, int, float]] = []
    for argument in arguments:
        arg_text = argument_text(argument, separator)
        examples = [
            PairExample(
                text_a=arg_text,
                text_b=description_text(value_name, descriptor, separator, lowercase_value_names),
                label=0,
            )
            for value_name, index, descriptor in grid
        ]
        probabilities = predict_entailment_probabilities(model, tokenizer, recipe, examples, device)
        rows.extend(
            (argument.id, value_name, index, probability)
            for (value_name, index, _), probability in zip(grid, probabilities)
        )

    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as out:
        for arg_id, value_name, index, probability in rows:
            out.write(f"{arg_id}\t{value_name}\t{index}\t{probability:.6f}\n")
    _write_sidecar(out_path, recipe, separator, lowercase_value_names, rows=len(rows))
    return len(rows)


def predict_class_file(
    model,
    tokenizer,
    recipe,
    arguments: Sequence[ArgumentRow],
    labels: Sequence[str],
    out_path: str | Path,
    separator: str = " ",
    device: str = "cpu",
) -> int:
    texts = [argument_text(a, separator) for a in arguments]
    scores = predict_class_probabilities(model, tokenizer, recipe, texts, device)
    ordered = sorted(zip(arguments, scores), key=lambda pair: pair[0].id)

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as out:
        out.write("\t".join(("Argument ID", *labels)) + "\n")
        for argument, row in ordered:
            cells = (f"{min(max(p, 0.0), 1.0):.6f}" for p in row)
            out.write("\t".join((argument.id, *cells)) + "\n")
    _write_sidecar(out_path, recipe, separator, False, rows=len(ordered), labels=list(labels))
    return len(ordered)


def _write_sidecar(out_path: Path, recipe, separator: str, lowercase: bool, **extra) -> None:
    recipe_dict = recipe.as_dict() if hasattr(recipe, "as_dict") else dict(recipe)
    payload = {
        "recipe": recipe_dict,
        "text_policy": {"separator": separator, "lowercase_value_names": lowercase},
        **extra,
    }
    sidecar = out_path.with_suffix(out_path.suffix + ".meta.json")
    sidecar.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
