"""Interface contract: everything the runner emits must pass the pipeline
package's strict parsers, with zero warnings, on a 10-argument slice."""

import logging

from argvalues_runner.cli import main

from argvalues.corpus import load_arguments, load_taxonomy
from argvalues.ensemble import (
    binarize_class_predictions,
    read_class_predictions,
    read_descriptor_predictions,
    result_set_1,
)
from argvalues.labelalg import L2_LABEL_SPACE, REDUCED_LABEL_SPACE, reduced_names


def test_entailment_predictions_satisfy_the_pipeline_contract(
    corpus_dir, entail_checkpoint, tmp_path, caplog
):
    out = tmp_path / "entail-preds.tsv"
    assert (
        main(
            [
                "predict",
                "--kind", "entail",
                "--checkpoint", str(entail_checkpoint),
                "--arguments", str(corpus_dir / "arguments-train.tsv"),
                "--taxonomy", str(corpus_dir / "taxonomy.json"),
                "--out", str(out),
            ]
        )
        == 0
    )
    assert out.with_suffix(out.suffix + ".meta.json").is_file()

    taxonomy = load_taxonomy(corpus_dir / "taxonomy.json")
    arguments = load_arguments(corpus_dir / "arguments-train.tsv")
    with open(out, encoding="utf-8") as f:
        preds = read_descriptor_predictions(f)

    # counting oracle: one prediction per argument x descriptor combination
    total_descriptors = sum(
        len(v.descriptors) for c in taxonomy.categories for v in c.values
    )
    assert len(preds) == len(arguments) * total_descriptors

    roster = [a.id for a in arguments]
    with caplog.at_level(logging.WARNING):
        result = result_set_1(preds, taxonomy, roster, threshold=0.8)
    assert caplog.records == [], "strict consumption must produce zero warnings"
    assert set(result.predictions) == set(roster)


def test_classifier_predictions_satisfy_the_pipeline_contract(
    corpus_dir, clf_checkpoints, tmp_path, caplog
):
    taxonomy = load_taxonomy(corpus_dir / "taxonomy.json")
    arguments = load_arguments(corpus_dir / "arguments-train.tsv")
    roster = [a.id for a in arguments]
    spaces = {
        "l2": (taxonomy.category_names, L2_LABEL_SPACE),
        "reduced": (reduced_names(taxonomy), REDUCED_LABEL_SPACE),
    }
    for space, checkpoint in clf_checkpoints.items():
        out = tmp_path / f"clf-{space}.tsv"
        assert (
            main(
                [
                    "predict",
                    "--kind", "clf",
                    "--checkpoint", str(checkpoint),
                    "--arguments", str(corpus_dir / "arguments-train.tsv"),
                    "--out", str(out),
                ]
            )
            == 0
        )
        labels, label_space = spaces[space]
        with open(out, encoding="utf-8") as f:
            preds = read_class_predictions(f, labels, label_space)
        assert {p.argument_id for p in preds} == set(roster)
        with caplog.at_level(logging.WARNING):
            sets = binarize_class_predictions(preds, threshold=0.5, roster=roster)
        assert caplog.records == []
        assert set(sets) == set(roster)


def test_reduced_predictions_stay_inside_their_class_members(
    corpus_dir, clf_checkpoints, tmp_path
):
    # expanding a predicted reduced class never leaves its member set
    from argvalues.labelalg import expand_reduced, reduce_category

    taxonomy = load_taxonomy(corpus_dir / "taxonomy.json")
    out = tmp_path / "reduced.tsv"
    main(
        [
            "predict",
            "--kind", "clf",
            "--checkpoint", str(clf_checkpoints["reduced"]),
            "--arguments", str(corpus_dir / "arguments-train.tsv"),
            "--out", str(out),
        ]
    )
    with open(out, encoding="utf-8") as f:
        preds = read_class_predictions(f, reduced_names(taxonomy), REDUCED_LABEL_SPACE)
    for prediction in preds:
        for reduced_name in prediction.scores:
            for member in expand_reduced(reduced_name, taxonomy):
                assert reduce_category(member) == reduced_name


def test_missing_taxonomy_for_entail_predict_is_usage_error(entail_checkpoint, corpus_dir, tmp_path, capsys):
    code = main(
        [
            "predict",
            "--kind", "entail",
            "--checkpoint", str(entail_checkpoint),
            "--arguments", str(corpus_dir / "arguments-train.tsv"),
            "--out", str(tmp_path / "x.tsv"),
        ]
    )
    assert code == 1
    assert "--taxonomy" in capsys.readouterr().err
