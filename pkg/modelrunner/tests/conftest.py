import json
import random

import pytest

# The primary pipeline package is a test dependency only: tests use it to
# synthesize real input files and to verify the contract that everything
# the runner emits passes its strict parsers.
from argvalues.corpus import Argument, LEVEL_L1, LabelMatrix, taxonomy_from_mapping
from argvalues.pairgen import generate_dataset, write_pairs

TAXONOMY = {
    "Self-direction: thought": {
        "Be creative": ["promoting imagination", "being more creative"],
        "Be curious": ["exploring new ideas", "asking questions"],
    },
    "Self-direction: action": {
        "Be independent": ["planning one's own life"],
    },
    "Hedonism": {
        "Have pleasure": ["enjoying life", "having fun"],
    },
    "Power: dominance": {
        "Have authority": ["leading others"],
    },
    "Face": {
        "Maintain reputation": ["being respected", "protecting one's image"],
    },
}

WORDS = "people should value freedom ideas power pleasure reputation progress community".split()


def synth_arguments(count, rng):
    rows = []
    for i in range(count):
        pick = lambda n: " ".join(rng.choice(WORDS) for _ in range(n))
        rows.append((f"R{i:03d}", pick(4), rng.choice(["in favor of", "against"]), pick(6)))
    return rows


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """A 10-argument slice in the pipeline's file formats, plus pair files."""
    root = tmp_path_factory.mktemp("corpus")
    rng = random.Random(99)

    (root / "taxonomy.json").write_text(json.dumps(TAXONOMY, indent=1), encoding="utf-8")
    taxonomy = taxonomy_from_mapping(TAXONOMY)
    value_names = taxonomy.value_names

    for split, count in (("train", 10), ("validation", 6)):
        rows = synth_arguments(count, rng)
        with open(root / f"arguments-{split}.tsv", "w", encoding="utf-8") as f:
            f.write("Argument ID\tConclusion\tStance\tPremise\n")
            for row in rows:
                f.write("\t".join(row) + "\n")

        positives = {
            arg_id: set(rng.sample(value_names, rng.randint(1, 2)))
            for arg_id, *_ in rows
        }
        l1 = LabelMatrix(
            level=LEVEL_L1,
            columns=value_names,
            rows={
                arg_id: tuple(1 if v in pos else 0 for v in value_names)
                for arg_id, pos in positives.items()
            },
        )
        with open(root / f"labels-l1-{split}.tsv", "w", encoding="utf-8") as f:
            f.write("\t".join(("Argument ID", *value_names)) + "\n")
            for arg_id, bits in l1.rows.items():
                f.write("\t".join((arg_id, *(str(b) for b in bits))) + "\n")

        categories = taxonomy.category_names
        with open(root / f"labels-l2-{split}.tsv", "w", encoding="utf-8") as f:
            f.write("\t".join(("Argument ID", *categories)) + "\n")
            for arg_id, pos in positives.items():
                hit = {taxonomy.category_of(v) for v in pos}
                f.write(
                    "\t".join((arg_id, *("1" if c in hit else "0" for c in categories))) + "\n"
                )

        arguments = [
            Argument(id=i, conclusion=c, stance=s, premise=p) for i, c, s, p in rows
        ]
        pairs, _ = generate_dataset(arguments, l1, taxonomy, seed=3, split=split)
        with open(root / f"pairs-{split}.tsv", "w", encoding="utf-8") as f:
            write_pairs(pairs, f)

    nli = []
    for i in range(100):
        premise = " ".join(rng.choice(WORDS) for _ in range(6))
        hypothesis = " ".join(rng.choice(WORDS) for _ in range(4))
        label = rng.choice(["entailment", "neutral", "contradiction"])
        nli.append({"premise": premise, "hypothesis": hypothesis, "label": label})
    with open(root / "nli.jsonl", "w", encoding="utf-8") as f:
        for record in nli:
            f.write(json.dumps(record) + "\n")

    return root


@pytest.fixture(scope="session")
def entail_checkpoint(corpus_dir, tmp_path_factory):
    """Tiny two-phase entailment model: NLI pre-training then fine-tuning."""
    from argvalues_runner.cli import main

    ckpt_root = tmp_path_factory.mktemp("ckpt")
    nli_dir = ckpt_root / "nli"
    assert (
        main(
            [
                "pretrain-nli",
                "--train", str(corpus_dir / "nli.jsonl"),
                "--val", str(corpus_dir / "nli.jsonl"),
                "--base", "tiny",
                "--max-seq-len", "48",
                "--out", str(nli_dir),
            ]
        )
        == 0
    )
    entail_dir = ckpt_root / "entail"
    assert (
        main(
            [
                "finetune-entail",
                "--pairs", str(corpus_dir / "pairs-train.tsv"),
                "--val-pairs", str(corpus_dir / "pairs-validation.tsv"),
                "--base-checkpoint", str(nli_dir),
                "--out", str(entail_dir),
            ]
        )
        == 0
    )
    return entail_dir


@pytest.fixture(scope="session")
def clf_checkpoints(corpus_dir, tmp_path_factory):
    from argvalues_runner.cli import main

    ckpt_root = tmp_path_factory.mktemp("clf")
    out = {}
    for space in ("l2", "reduced"):
        directory = ckpt_root / space
        assert (
            main(
                [
                    "train-clf",
                    "--space", space,
                    "--arguments", str(corpus_dir / "arguments-train.tsv"),
                    "--labels", str(corpus_dir / "labels-l2-train.tsv"),
                    "--val-arguments", str(corpus_dir / "arguments-validation.tsv"),
                    "--val-labels", str(corpus_dir / "labels-l2-validation.tsv"),
                    "--base", "tiny",
                    "--epochs", "2",
                    "--max-seq-len", "48",
                    "--out", str(directory),
                ]
            )
            == 0
        )
        out[space] = directory
    return out
