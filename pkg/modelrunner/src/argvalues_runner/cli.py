"""Entry points for training and inference.

::

    argvalues-runner pretrain-nli    --train mnli.jsonl --val val_m.jsonl --val val_mm.jsonl --out ckpt/nli
    argvalues-runner finetune-entail --pairs pairs-train.tsv --val-pairs pairs-validation.tsv \
                                     --base-checkpoint ckpt/nli --out ckpt/entail
    argvalues-runner train-clf       --space l2 --arguments args.tsv --labels l2.tsv \
                                     --val-arguments vargs.tsv --val-labels vl2.tsv --out ckpt/baseline
    argvalues-runner predict         --kind entail --checkpoint ckpt/entail \
                                     --arguments args.tsv --taxonomy taxonomy.json --out preds.tsv

``--base tiny`` swaps roberta-base for a small randomly initialized
encoder with an on-the-fly tokenizer, which makes every command runnable
on CPU in seconds (for smoke tests and format checks, not for accuracy).

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .data import (
    DataFormatError,
    read_arguments,
    read_label_matrix,
    read_nli,
    read_pairs,
    read_taxonomy,
    reduced_targets,
    argument_text,
)
from .inference import predict_class_file, predict_entailment_file
from .models import TINY_BASE, build_model, load_checkpoint, save_checkpoint
from .recipes import (
    PHASE_BASELINE_CLF,
    PHASE_ENTAIL_FINETUNE,
    PHASE_NLI_PRETRAIN,
    PHASE_REDUCED_CLF,
    TrainRecipe,
    recipe_for,
)
from .training import (
    MultiLabelExample,
    PairExample,
    train_entailment,
    train_multilabel,
)

log = logging.getLogger(__name__)


class UsageError(Exception):
    pass


def _recipe_overrides(args: argparse.Namespace) -> dict:
    return {
        "base_checkpoint": getattr(args, "base", None),
        "epochs": getattr(args, "epochs", None),
        "batch_size": getattr(args, "batch_size", None),
        "learning_rate": getattr(args, "learning_rate", None),
        "max_seq_len": getattr(args, "max_seq_len", None),
        "shuffle_seed": getattr(args, "seed", None),
    }


def cmd_pretrain_nli(args: argparse.Namespace) -> int:
    recipe = recipe_for(PHASE_NLI_PRETRAIN, **_recipe_overrides(args))
    train = read_nli(args.train)
    if args.limit:
        train = train[: args.limit]
    if not train:
        raise DataFormatError(f"{args.train}: no usable NLI examples")
    val: list[tuple[str, str, int]] = []
    for path in args.val or []:
        val.extend(read_nli(path))
    if args.limit:
        val = val[: args.limit]

    train_examples = [PairExample(p, h, label) for p, h, label in train]
    val_examples = [PairExample(p, h, label) for p, h, label in val]
    corpus = [t for p, h, _ in train for t in (p, h)]
    tokenizer, model = build_model(recipe, num_labels=2, problem_type="single_label_classification", corpus_texts=corpus)
    metrics = train_entailment(model, tokenizer, recipe, train_examples, val_examples, args.device)
    save_checkpoint(args.out, model, tokenizer, recipe, metrics=metrics)
    print(f"checkpoint written to {args.out}")
    if metrics["val_macro_f1"] is not None:
        print(f"validation binary macro F1: {metrics['val_macro_f1']:.4f}")
    return 0


def cmd_finetune_entail(args: argparse.Namespace) -> int:
    pairs = read_pairs(args.pairs)
    if not pairs:
        raise DataFormatError(f"{args.pairs}: empty pair file")
    val_pairs = read_pairs(args.val_pairs) if args.val_pairs else []
    if args.limit:
        pairs = pairs[: args.limit]
        val_pairs = val_pairs[: args.limit]

    model, tokenizer, base_recipe, _ = load_checkpoint(args.base_checkpoint)
    recipe = recipe_for(
        PHASE_ENTAIL_FINETUNE,
        **{**_recipe_overrides(args), "base_checkpoint": str(args.base_checkpoint)},
    )
    if args.max_seq_len is None:
        recipe.max_seq_len = int(base_recipe.get("max_seq_len", recipe.max_seq_len))

    train_examples = [PairExample(p.argument_text, p.description_text, p.label) for p in pairs]
    val_examples = [PairExample(p.argument_text, p.description_text, p.label) for p in val_pairs]
    metrics = train_entailment(model, tokenizer, recipe, train_examples, val_examples, args.device)
    save_checkpoint(args.out, model, tokenizer, recipe, metrics=metrics)
    print(f"checkpoint written to {args.out}")
    if metrics["val_macro_f1"] is not None:
        print(f"validation binary macro F1: {metrics['val_macro_f1']:.4f}")
    return 0


def _multilabel_examples(arguments_path, labels_path, space, separator):
    arguments = read_arguments(arguments_path)
    columns, rows = read_label_matrix(labels_path)
    if space == "reduced":
        columns, rows = reduced_targets(columns, rows)
    missing = [a.id for a in arguments if a.id not in rows]
    if missing:
        raise DataFormatError(f"{labels_path}: no label row for {missing[:5]}")
    examples = [
        MultiLabelExample(text=argument_text(a, separator), targets=rows[a.id])
        for a in arguments
    ]
    return columns, examples


def cmd_train_clf(args: argparse.Namespace) -> int:
    phase = PHASE_BASELINE_CLF if args.space == "l2" else PHASE_REDUCED_CLF
    recipe = recipe_for(phase, **_recipe_overrides(args))
    labels, train_examples = _multilabel_examples(
        args.arguments, args.labels, args.space, args.separator
    )
    val_labels, val_examples = _multilabel_examples(
        args.val_arguments, args.val_labels, args.space, args.separator
    )
    if val_labels != labels:
        raise DataFormatError("training and validation label columns differ")

    corpus = [e.text for e in train_examples]
    tokenizer, model = build_model(
        recipe,
        num_labels=len(labels),
        problem_type="multi_label_classification",
        corpus_texts=corpus,
    )
    metrics = train_multilabel(model, tokenizer, recipe, train_examples, val_examples, args.device)
    save_checkpoint(args.out, model, tokenizer, recipe, labels=labels, metrics=metrics)
    print(f"checkpoint written to {args.out}")
    print(f"{len(labels)} target classes; best validation loss {metrics['best_val_loss']:.4f}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    model, tokenizer, recipe_dict, labels = load_checkpoint(args.checkpoint)
    recipe = TrainRecipe(**recipe_dict)
    if args.batch_size:
        recipe.batch_size = args.batch_size
    arguments = read_arguments(args.arguments)

    if args.kind == "entail":
        if not args.taxonomy:
            raise UsageError("predict --kind entail requires --taxonomy")
        taxonomy = read_taxonomy(args.taxonomy)
        rows = predict_entailment_file(
            model,
            tokenizer,
            recipe,
            arguments,
            taxonomy,
            args.out,
            separator=args.separator,
            lowercase_value_names=args.lowercase_value_names,
            device=args.device,
        )
        print(f"wrote {args.out} ({rows} descriptor predictions)")
    else:
        if labels is None:
            raise DataFormatError(
                f"{args.checkpoint}: checkpoint has no label list; was it trained with train-clf?"
            )
        rows = predict_class_file(
            model,
            tokenizer,
            recipe,
            arguments,
            labels,
            args.out,
            separator=args.separator,
            device=args.device,
        )
        print(f"wrote {args.out} ({rows} rows x {len(labels)} classes)")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _add_training_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--base", help="base model id/path, or 'tiny' (defaults per phase)")
    sub.add_argument("--epochs", type=int)
    sub.add_argument("--batch-size", type=int)
    sub.add_argument("--learning-rate", type=float)
    sub.add_argument("--max-seq-len", type=int)
    sub.add_argument("--seed", type=int, help="shuffle seed")
    sub.add_argument("--limit", type=int, help="cap example counts (smoke runs)")
    sub.add_argument("--device", default="cpu")
    sub.add_argument("--out", required=True, help="checkpoint output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="argvalues-runner", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"argvalues-runner {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    sub = subparsers.add_parser("pretrain-nli", help="binary-entailment pre-training on an NLI corpus")
    sub.add_argument("--train", required=True, help="NLI corpus (JSON Lines)")
    sub.add_argument("--val", action="append", help="validation file; repeat to combine splits")
    _add_training_flags(sub)
    sub.set_defaults(handler=cmd_pretrain_nli)

    sub = subparsers.add_parser("finetune-entail", help="fine-tune on a generated pair file")
    sub.add_argument("--pairs", required=True, help="training pair file")
    sub.add_argument("--val-pairs", help="validation pair file")
    sub.add_argument("--base-checkpoint", required=True, help="checkpoint from pretrain-nli")
    _add_training_flags(sub)
    sub.set_defaults(handler=cmd_finetune_entail)

    sub = subparsers.add_parser("train-clf", help="train a multi-label classifier")
    sub.add_argument("--space", required=True, choices=("l2", "reduced"))
    sub.add_argument("--arguments", required=True)
    sub.add_argument("--labels", required=True, help="L2 label file (reduced targets are derived)")
    sub.add_argument("--val-arguments", required=True)
    sub.add_argument("--val-labels", required=True)
    sub.add_argument("--separator", default=" ")
    _add_training_flags(sub)
    sub.set_defaults(handler=cmd_train_clf)

    sub = subparsers.add_parser("predict", help="write a prediction file for a split")
    sub.add_argument("--kind", required=True, choices=("entail", "clf"))
    sub.add_argument("--checkpoint", required=True)
    sub.add_argument("--arguments", required=True)
    sub.add_argument("--taxonomy", help="taxonomy JSON (entail only)")
    sub.add_argument("--out", required=True, help="prediction file path")
    sub.add_argument("--separator", default=" ")
    sub.add_argument("--lowercase-value-names", action="store_true")
    sub.add_argument("--batch-size", type=int)
    sub.add_argument("--device", default="cpu")
    sub.set_defaults(handler=cmd_predict)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
