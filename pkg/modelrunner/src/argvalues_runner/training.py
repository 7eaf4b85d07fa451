"""Training loops for the entailment model and the multi-label classifiers.

Batching is deterministic: example order per epoch is a pure function of
(shuffle seed, epoch), so two runs over the same canonically sorted input
see identical batch sequences. Early stopping tracks validation loss and
restores the best weights before the checkpoint is written.
"""

from __future__ import annotations

import copy
import hashlib
import logging
import random
from dataclasses import dataclass
from typing import Sequence

import torch

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairExample:
    text_a: str
    text_b: str
    label: int


@dataclass(frozen=True)
class MultiLabelExample:
    text: str
    targets: tuple[int, ...]


def epoch_order(n: int, seed: int, epoch: int) -> list[int]:
    """Deterministic shuffle of range(n) for one epoch."""
    digest = hashlib.sha256(f"{seed}:{epoch}".encode()).digest()
    rng = random.Random(int.from_bytes(digest[:8], "big"))
    order = list(range(n))
    rng.shuffle(order)
    return order


def _batches(order: Sequence[int], batch_size: int):
    for start in range(0, len(order), batch_size):
        yield order[start : start + batch_size]


def _encode_pairs(tokenizer, examples: Sequence[PairExample], max_seq_len: int, device):
    encoded = tokenizer(
        [e.text_a for e in examples],
        [e.text_b for e in examples],
        padding=True,
        truncation=True,
        max_length=max_seq_len,
        return_tensors="pt",
    )
    return {k: v.to(device) for k, v in encoded.items()}


def _encode_texts(tokenizer, examples: Sequence[MultiLabelExample], max_seq_len: int, device):
    encoded = tokenizer(
        [e.text for e in examples],
        padding=True,
        truncation=True,
        max_length=max_seq_len,
        return_tensors="pt",
    )
    return {k: v.to(device) for k, v in encoded.items()}


def binary_macro_f1(gold: Sequence[int], predicted: Sequence[int]) -> float:
    """Mean of the positive-class and negative-class F1 (zero-division -> 0)."""
    if len(gold) != len(predicted):
        raise ValueError("gold and predicted lengths differ")
    f1s = []
    for positive in (1, 0):
        tp = sum(1 for g, p in zip(gold, predicted) if g == positive and p == positive)
        fp = sum(1 for g, p in zip(gold, predicted) if g != positive and p == positive)
        fn = sum(1 for g, p in zip(gold, predicted) if g == positive and p != positive)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1s.append(2 * precision * recall / (precision + recall) if precision + recall else 0.0)
    return sum(f1s) / 2


def _make_optimizer(model, recipe):
    if recipe.optimizer != "adamw":
        raise ValueError(f"unsupported optimizer {recipe.optimizer!r}")
    return torch.optim.AdamW(model.parameters(), lr=recipe.learning_rate)


def train_entailment(
    model,
    tokenizer,
    recipe,
    train_examples: Sequence[PairExample],
    val_examples: Sequence[PairExample],
    device: str = "cpu",
) -> dict:
    """Binary sentence-pair training; returns metrics incl. validation macro F1."""
    model.to(device)
    optimizer = _make_optimizer(model, recipe)
    for epoch in range(recipe.epochs):
        model.train()
        total_loss = 0.0
        steps = 0
        for batch_indices in _batches(epoch_order(len(train_examples), recipe.shuffle_seed, epoch), recipe.batch_size):
            batch = [train_examples[i] for i in batch_indices]
            inputs = _encode_pairs(tokenizer, batch, recipe.max_seq_len, device)
            labels = torch.tensor([e.label for e in batch], dtype=torch.long, device=device)
            outputs = model(**inputs, labels=labels)
            outputs.loss.backward()
            optimizer.step()
            optimizer.zero_grad()
            total_loss += outputs.loss.item()
            steps += 1
        log.info("epoch %d: train loss %.4f", epoch, total_loss / max(steps, 1))

    metrics = {"val_macro_f1": None, "val_examples": len(val_examples)}
    if val_examples:
        gold = [e.label for e in val_examples]
        predicted = predict_entailment_labels(model, tokenizer, recipe, val_examples, device)
        metrics["val_macro_f1"] = binary_macro_f1(gold, predicted)
        log.info("validation binary macro F1: %.4f", metrics["val_macro_f1"])
    return metrics


@torch.no_grad()
def predict_entailment_labels(model, tokenizer, recipe, examples, device="cpu") -> list[int]:
    probs = predict_entailment_probabilities(model, tokenizer, recipe, examples, device)
    return [1 if p >= 0.5 else 0 for p in probs]


@torch.no_grad()
def predict_entailment_probabilities(model, tokenizer, recipe, examples, device="cpu") -> list[float]:
    model.to(device)
    model.eval()
    probabilities: list[float] = []
    for start in range(0, len(examples), recipe.batch_size):
        batch = examples[start : start + recipe.batch_size]
        inputs = _encode_pairs(tokenizer, batch, recipe.max_seq_len, device)
        logits = model(**inputs).logits
        probabilities.extend(torch.softmax(logits, dim=-1)[:, 1].tolist())
    return probabilities


def train_multilabel(
    model,
    tokenizer,
    recipe,
    train_examples: Sequence[MultiLabelExample],
    val_examples: Sequence[MultiLabelExample],
    device: str = "cpu",
) -> dict:
    """Multi-label training with early stopping on validation loss."""
    model.to(device)
    optimizer = _make_optimizer(model, recipe)
    best_loss = float("inf")
    best_state = None
    epochs_without_improvement = 0
    epochs_run = 0
    for epoch in range(recipe.epochs):
        model.train()
        for batch_indices in _batches(epoch_order(len(train_examples), recipe.shuffle_seed, epoch), recipe.batch_size):
            batch = [train_examples[i] for i in batch_indices]
            inputs = _encode_texts(tokenizer, batch, recipe.max_seq_len, device)
            labels = torch.tensor([e.targets for e in batch], dtype=torch.float, device=device)
            outputs = model(**inputs, labels=labels)
            outputs.loss.backward()
            optimizer.step()
            optimizer.zero_grad()
        epochs_run = epoch + 1

        val_loss = _multilabel_loss(model, tokenizer, recipe, val_examples, device)
        log.info("epoch %d: validation loss %.4f", epoch, val_loss)
        if val_loss < best_loss:
            best_loss = val_loss
            best_state = copy.deepcopy(model.state_dict())
            epochs_without_improvement = 0
        else:
            epochs_without_improvement += 1
            if (
                recipe.early_stop_patience is not None
                and epochs_without_improvement >= recipe.early_stop_patience
            ):
                log.info("early stop after epoch %d", epoch)
                break

    if best_state is not None:
        model.load_state_dict(best_state)
    return {"best_val_loss": best_loss, "epochs_run": epochs_run}


@torch.no_grad()
def _multilabel_loss(model, tokenizer, recipe, examples, device) -> float:
    if not examples:
        return 0.0
    model.eval()
    total = 0.0
    count = 0
    for start in range(0, len(examples), recipe.batch_size):
        batch = examples[start : start + recipe.batch_size]
        inputs = _encode_texts(tokenizer, batch, recipe.max_seq_len, device)
        labels = torch.tensor([e.targets for e in batch], dtype=torch.float, device=device)
        outputs = model(**inputs, labels=labels)
        total += outputs.loss.item() * len(batch)
        count += len(batch)
    return total / count


@torch.no_grad()
def predict_class_probabilities(model, tokenizer, recipe, texts: Sequence[str], device="cpu") -> list[list[float]]:
    model.to(device)
    model.eval()
    scores: list[list[float]] = []
    for start in range(0, len(texts), recipe.batch_size):
        batch = list(texts[start : start + recipe.batch_size])
        encoded = tokenizer(
            batch, padding=True, truncation=True, max_length=recipe.max_seq_len, return_tensors="pt"
        )
        encoded = {k: v.to(device) for k, v in encoded.items()}
        logits = model(**encoded).logits
        scores.extend(torch.sigmoid(logits).tolist())
    return scores
