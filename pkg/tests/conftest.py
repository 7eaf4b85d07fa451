import json

import pytest

from argvalues.corpus import (
    Argument,
    LabelMatrix,
    OFFICIAL_CATEGORY_NAMES,
    ValueTaxonomy,
    taxonomy_from_mapping,
)

from toydata import (
    TOY_ARGUMENTS,
    TOY_POSITIVE_L1,
    TOY_TAXONOMY,
    make_l1_matrix,
    make_l2_matrix,
    write_arguments_tsv,
    write_labels_tsv,
)


@pytest.fixture
def taxonomy() -> ValueTaxonomy:
    return taxonomy_from_mapping(TOY_TAXONOMY)


@pytest.fixture
def arguments() -> list[Argument]:
    return [
        Argument(id=i, conclusion=c, stance=s, premise=p) for i, c, s, p in TOY_ARGUMENTS
    ]


@pytest.fixture
def l1_labels(taxonomy) -> LabelMatrix:
    return make_l1_matrix(taxonomy, TOY_POSITIVE_L1)


@pytest.fixture
def l2_labels(taxonomy) -> LabelMatrix:
    return make_l2_matrix(taxonomy, TOY_POSITIVE_L1)


@pytest.fixture
def official_category_taxonomy() -> ValueTaxonomy:
    """The 20 official category names, with placeholder values under each."""
    return taxonomy_from_mapping(
        {
            name: {f"Value under {name}": [f"a descriptor for {name}"]}
            for name in OFFICIAL_CATEGORY_NAMES
        }
    )


@pytest.fixture
def toy_dataset_dir(tmp_path, taxonomy, arguments, l1_labels, l2_labels):
    """Toy corpus on disk plus a config file wiring it up, for CLI tests."""
    data = tmp_path / "data"
    data.mkdir()
    (data / "taxonomy.json").write_text(
        json.dumps(TOY_TAXONOMY, ensure_ascii=False, indent=1), encoding="utf-8"
    )
    write_arguments_tsv(data / "arguments.tsv", arguments)
    write_labels_tsv(data / "labels-l1.tsv", l1_labels)
    write_labels_tsv(data / "labels-l2.tsv", l2_labels)
    config = {
        "taxonomy": "taxonomy.json",
        "splits": {
            "toy": {
                "arguments": "arguments.tsv",
                "labels_l1": "labels-l1.tsv",
                "labels_l2": "labels-l2.tsv",
            }
        },
        "seed": 7,
        "out_dir": str(tmp_path / "out"),
    }
    (data / "config.json").write_text(json.dumps(config, indent=1), encoding="utf-8")
    return data
