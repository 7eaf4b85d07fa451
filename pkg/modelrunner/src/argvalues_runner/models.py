"""Model and tokenizer construction, checkpoint save/load.

``base_checkpoint`` may be a pretrained model id or path (the real runs
use roberta-base) or the literal ``tiny``, which builds a small randomly
initialized encoder plus a BPE tokenizer trained on the task texts. The
tiny path keeps every pipeline stage runnable on CPU in seconds; it shares
all code with the real path except construction.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from tokenizers import Tokenizer, models as tok_models, pre_tokenizers, processors, trainers
from transformers import (
    AutoModelForSequenceClassification,
    AutoTokenizer,
    PreTrainedTokenizerFast,
    RobertaConfig,
    RobertaForSequenceClassification,
)

from .recipes import TrainRecipe

TINY_BASE = "tiny"
RUNNER_FILE = "runner.json"

_TINY = {"vocab_size": 600, "hidden_size": 32, "layers": 2, "heads": 2, "intermediate": 64}

MULTI_LABEL = "multi_label_classification"
SINGLE_LABEL = "single_label_classification"


def _train_tiny_tokenizer(texts: Iterable[str], max_seq_len: int) -> PreTrainedTokenizerFast:
    tokenizer = Tokenizer(tok_models.BPE(unk_token="<unk>"))
    tokenizer.pre_tokenizer = pre_tokenizers.Whitespace()
    trainer = trainers.BpeTrainer(
        vocab_size=_TINY["vocab_size"],
        special_tokens=["<s>", "<pad>", "</s>", "<unk>", "<mask>"],
    )
    tokenizer.train_from_iterator(texts, trainer)
    tokenizer.post_processor = processors.TemplateProcessing(
        single="<s> $A </s>",
        pair="<s> $A </s> </s> $B </s>",
        special_tokens=[
            ("<s>", tokenizer.token_to_id("<s>")),
            ("</s>", tokenizer.token_to_id("</s>")),
        ],
    )
    return PreTrainedTokenizerFast(
        tokenizer_object=tokenizer,
        bos_token="<s>",
        eos_token="</s>",
        unk_token="<unk>",
        pad_token="<pad>",
        mask_token="<mask>",
        model_max_length=max_seq_len,
    )


def build_model(
    recipe: TrainRecipe,
    num_labels: int,
    problem_type: str,
    corpus_texts: Iterable[str] | None = None,
):
    """(tokenizer, model) for the recipe's base checkpoint."""
    if recipe.base_checkpoint == TINY_BASE:
        if corpus_texts is None:
            raise ValueError("tiny base needs corpus texts to train its tokenizer")
        tokenizer = _train_tiny_tokenizer(corpus_texts, recipe.max_seq_len)
        config = RobertaConfig(
            vocab_size=tokenizer.vocab_size + len(tokenizer.all_special_tokens),
            hidden_size=_TINY["hidden_size"],
            num_hidden_layers=_TINY["layers"],
            num_attention_heads=_TINY["heads"],
            intermediate_size=_TINY["intermediate"],
            max_position_embeddings=recipe.max_seq_len + 2,
            type_vocab_size=1,
            pad_token_id=tokenizer.pad_token_id,
            bos_token_id=tokenizer.bos_token_id,
            eos_token_id=tokenizer.eos_token_id,
            num_labels=num_labels,
            problem_type=problem_type,
        )
        return tokenizer, RobertaForSequenceClassification(config)

    tokenizer = AutoTokenizer.from_pretrained(recipe.base_checkpoint)
    model = AutoModelForSequenceClassification.from_pretrained(
        recipe.base_checkpoint,
        num_labels=num_labels,
        problem_type=problem_type,
        ignore_mismatched_sizes=True,
    )
    return tokenizer, model


def save_checkpoint(
    directory: str | Path,
    model,
    tokenizer,
    recipe: TrainRecipe,
    labels: tuple[str, ...] | None = None,
    metrics: dict | None = None,
) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(directory)
    tokenizer.save_pretrained(directory)
    payload = {
        "recipe": recipe.as_dict(),
        "labels": list(labels) if labels else None,
        "metrics": metrics or {},
    }
    (directory / RUNNER_FILE).write_text(
        json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def load_checkpoint(directory: str | Path):
    """(model, tokenizer, recipe dict, labels) from a saved checkpoint."""
    directory = Path(directory)
    meta_path = directory / RUNNER_FILE
    if not meta_path.is_file():
        raise FileNotFoundError(f"{directory} is not a runner checkpoint (no {RUNNER_FILE})")
    payload = json.loads(meta_path.read_text(encoding="utf-8"))
    model = AutoModelForSequenceClassification.from_pretrained(directory)
    tokenizer = AutoTokenizer.from_pretrained(directory)
    labels = tuple(payload["labels"]) if payload.get("labels") else None
    return model, tokenizer, payload["recipe"], labels
