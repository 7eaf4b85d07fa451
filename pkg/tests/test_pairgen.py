import io
import logging
import random

import pytest
from hypothesis import given, settings, strategies as st

from argvalues.corpus import Argument, taxonomy_from_mapping
from argvalues.errors import DataError
from argvalues.pairgen import (
    KIND_NEGATIVE_DIFFICULT,
    KIND_NEGATIVE_EASY,
    KIND_POSITIVE,
    derive_argument_seed,
    generate_dataset,
    negative_pairs,
    pairs_for_argument,
    positive_pairs,
    read_pairs,
    write_pairs,
)

from toydata import make_l1_matrix


def test_positive_count_is_sum_over_positive_values(taxonomy, arguments, l1_labels):
    # A01: Be creative (2 descriptors) + Be curious (3 descriptors)
    pairs = positive_pairs(arguments[0], l1_labels, taxonomy)
    assert len(pairs) == 5
    assert all(p.label == 1 and p.kind == KIND_POSITIVE for p in pairs)


def test_zero_positive_values_emit_nothing(taxonomy, arguments, l1_labels):
    assert positive_pairs(arguments[2], l1_labels, taxonomy) == []
    assert pairs_for_argument(arguments[2], l1_labels, taxonomy, seed=0) == []


def test_positive_pairs_follow_taxonomy_order(taxonomy, arguments, l1_labels):
    pairs = positive_pairs(arguments[0], l1_labels, taxonomy)
    keys = [(p.value_name, p.description.descriptor_index) for p in pairs]
    assert keys == [
        ("Be creative", 0),
        ("Be creative", 1),
        ("Be curious", 0),
        ("Be curious", 1),
        ("Be curious", 2),
    ]


def test_description_texts_use_the_by_rule(taxonomy, arguments, l1_labels):
    pairs = positive_pairs(arguments[0], l1_labels, taxonomy)
    assert pairs[0].description.text == "Be creative by promoting imagination"


AMPLE = {
    "C1": {"P1": ["a", "b"], "N1": ["c", "d", "e"]},
    "C2": {"P2": ["f", "g"], "N2": ["h", "i"]},
    "C3": {"N3": ["j", "k", "l"]},
    "C4": {"N4": ["m", "n"]},
}


def ample_case():
    taxonomy = taxonomy_from_mapping(AMPLE)
    argument = Argument(id="X", conclusion="c", stance="s", premise="p")
    labels = make_l1_matrix(taxonomy, {"X": {"P1", "P2"}})
    return taxonomy, argument, labels


def test_even_n_with_ample_pools_splits_equally():
    taxonomy, argument, labels = ample_case()
    negatives = negative_pairs(argument, labels, taxonomy, 4, random.Random(1))
    kinds = [p.kind for p in negatives]
    assert kinds.count(KIND_NEGATIVE_DIFFICULT) == 2
    assert kinds.count(KIND_NEGATIVE_EASY) == 2


def test_odd_n_gives_difficult_the_extra_sample():
    taxonomy, argument, labels = ample_case()
    negatives = negative_pairs(argument, labels, taxonomy, 5, random.Random(1))
    kinds = [p.kind for p in negatives]
    assert kinds.count(KIND_NEGATIVE_DIFFICULT) == 3
    assert kinds.count(KIND_NEGATIVE_EASY) == 2


def test_difficult_negatives_share_a_positive_category():
    taxonomy, argument, labels = ample_case()
    negatives = negative_pairs(argument, labels, taxonomy, 4, random.Random(2))
    for pair in negatives:
        assert pair.label == 0
        assert pair.value_name in {"N1", "N2", "N3", "N4"}
        if pair.kind == KIND_NEGATIVE_DIFFICULT:
            assert pair.category_name in {"C1", "C2"}
        else:
            assert pair.category_name in {"C3", "C4"}


def test_empty_difficult_pool_falls_back_to_easy(caplog):
    # the only positive category contains nothing but positive values
    taxonomy = taxonomy_from_mapping(
        {"C1": {"P1": ["a", "b"]}, "C2": {"N1": ["c", "d", "e"]}}
    )
    argument = Argument(id="X", conclusion="c", stance="s", premise="p")
    labels = make_l1_matrix(taxonomy, {"X": {"P1"}})
    with caplog.at_level(logging.WARNING):
        negatives = negative_pairs(argument, labels, taxonomy, 2, random.Random(0))
    assert [p.kind for p in negatives] == [KIND_NEGATIVE_EASY, KIND_NEGATIVE_EASY]
    assert "fallback" in caplog.text


def test_exhausted_pools_undersample_with_warning(caplog):
    taxonomy = taxonomy_from_mapping({"C1": {"P1": ["a", "b", "c"], "N1": ["d"]}})
    argument = Argument(id="X", conclusion="c", stance="s", premise="p")
    labels = make_l1_matrix(taxonomy, {"X": {"P1"}})
    with caplog.at_level(logging.WARNING):
        negatives = negative_pairs(argument, labels, taxonomy, 3, random.Random(0))
    assert len(negatives) == 1
    assert "exhausted" in caplog.text


def test_sampling_is_without_replacement():
    taxonomy, argument, labels = ample_case()
    for seed in range(20):
        negatives = negative_pairs(argument, labels, taxonomy, 4, random.Random(seed))
        keys = [(p.value_name, p.description.descriptor_index) for p in negatives]
        assert len(keys) == len(set(keys))


def test_derive_argument_seed_is_stable():
    assert derive_argument_seed(7, "A01") == derive_argument_seed(7, "A01")
    assert derive_argument_seed(7, "A01") != derive_argument_seed(8, "A01")
    assert derive_argument_seed(7, "A01") != derive_argument_seed(7, "A02")


def test_generate_is_deterministic(taxonomy, arguments, l1_labels):
    first, manifest_a = generate_dataset(arguments, l1_labels, taxonomy, seed=42)
    second, manifest_b = generate_dataset(arguments, l1_labels, taxonomy, seed=42)
    assert first == second
    assert manifest_a == manifest_b
    third, _ = generate_dataset(arguments, l1_labels, taxonomy, seed=43)
    assert third != first


def test_argument_order_does_not_matter(taxonomy, arguments, l1_labels):
    forward, _ = generate_dataset(arguments, l1_labels, taxonomy, seed=42)
    shuffled = list(arguments)
    random.Random(0).shuffle(shuffled)
    reordered, _ = generate_dataset(shuffled, l1_labels, taxonomy, seed=42)
    assert forward == reordered  # canonical sort makes them identical, not just equal as multisets


def test_worker_count_does_not_change_output(taxonomy, arguments, l1_labels):
    sequential, manifest_a = generate_dataset(arguments, l1_labels, taxonomy, seed=42, workers=1)
    parallel, manifest_b = generate_dataset(arguments, l1_labels, taxonomy, seed=42, workers=2)
    assert sequential == parallel
    assert manifest_a == manifest_b


def test_manifest_counts_match_dataset(taxonomy, arguments, l1_labels):
    pairs, manifest = generate_dataset(arguments, l1_labels, taxonomy, seed=42, split="toy")
    assert manifest.split == "toy"
    assert manifest.counts["total"] == len(pairs)
    for kind in (KIND_POSITIVE, KIND_NEGATIVE_EASY, KIND_NEGATIVE_DIFFICULT):
        assert manifest.counts[kind] == sum(1 for p in pairs if p.kind == kind)
    assert manifest.counts["positive"] == sum(1 for p in pairs if p.label == 1)
    assert manifest.taxonomy_fingerprint == taxonomy.fingerprint


def test_no_duplicate_triples_per_split(taxonomy, arguments, l1_labels):
    pairs, _ = generate_dataset(arguments, l1_labels, taxonomy, seed=42)
    keys = [(p.argument_id, p.value_name, p.description.descriptor_index) for p in pairs]
    assert len(keys) == len(set(keys))


def test_generate_requires_label_rows(taxonomy, arguments, l1_labels):
    extra = arguments + [Argument(id="GHOST", conclusion="c", stance="s", premise="p")]
    with pytest.raises(DataError, match="'GHOST'"):
        generate_dataset(extra, l1_labels, taxonomy, seed=0)


def test_pair_file_round_trip(taxonomy, arguments, l1_labels):
    pairs, _ = generate_dataset(arguments, l1_labels, taxonomy, seed=42)
    buffer = io.StringIO()
    write_pairs(pairs, buffer)
    reread = read_pairs(buffer.getvalue().splitlines(), taxonomy)
    assert [(p.argument_id, p.kind, p.value_name, p.description.descriptor_index, p.label) for p in reread] == [
        (p.argument_id, p.kind, p.value_name, p.description.descriptor_index, p.label) for p in pairs
    ]
    assert [p.description.text for p in reread] == [p.description.text for p in pairs]
    assert all(p.category_name for p in reread)


def test_read_pairs_rejects_label_kind_mismatch():
    line = "A\tpositive\tV\t0\t0\tt\td"
    with pytest.raises(DataError, match="inconsistent"):
        read_pairs([line])


def test_read_pairs_rejects_duplicates():
    line = "A\tpositive\tV\t0\t1\tt\td"
    with pytest.raises(DataError, match="duplicate"):
        read_pairs([line, line])


@st.composite
def random_pair_case(draw):
    n_cats = draw(st.integers(1, 4))
    mapping = {}
    value_names = []
    for c in range(n_cats):
        values = {}
        for v in range(draw(st.integers(1, 3))):
            name = f"C{c} V{v}"
            n_desc = draw(st.integers(1, 3))
            values[name] = [f"d{c}.{v}.{k}" for k in range(n_desc)]
            value_names.append(name)
        mapping[f"C{c}"] = values
    taxonomy = taxonomy_from_mapping(mapping)
    bits = draw(
        st.lists(st.integers(0, 1), min_size=len(value_names), max_size=len(value_names))
    )
    positives = {name for name, bit in zip(value_names, bits) if bit}
    seed = draw(st.integers(0, 2**32))
    return taxonomy, positives, seed


@given(random_pair_case())
@settings(max_examples=200)
def test_pair_invariants_hold_on_random_taxonomies(case):
    taxonomy, positives, seed = case
    argument = Argument(id="X", conclusion="c", stance="s", premise="p")
    labels = make_l1_matrix(taxonomy, {"X": positives})
    pairs = pairs_for_argument(argument, labels, taxonomy, seed)

    pos = [p for p in pairs if p.kind == KIND_POSITIVE]
    neg = [p for p in pairs if p.kind != KIND_POSITIVE]
    n = sum(len(taxonomy.value(v).descriptors) for v in positives)
    assert len(pos) == n

    positive_categories = {taxonomy.category_of(v) for v in positives}
    difficult_pool = easy_pool = 0
    for category in taxonomy.categories:
        for value in category.values:
            if value.name in positives:
                continue
            if category.name in positive_categories:
                difficult_pool += len(value.descriptors)
            else:
                easy_pool += len(value.descriptors)

    assert len(neg) == min(n, difficult_pool + easy_pool)
    difficult = [p for p in neg if p.kind == KIND_NEGATIVE_DIFFICULT]
    easy = [p for p in neg if p.kind == KIND_NEGATIVE_EASY]
    if difficult_pool >= (n + 1) // 2 and easy_pool >= n // 2:
        assert len(difficult) - len(easy) in (0, 1)
    for p in neg:
        assert labels.bit("X", p.value_name) == 0
        assert p.category_name == taxonomy.category_of(p.value_name)
        if p.kind == KIND_NEGATIVE_DIFFICULT:
            assert p.category_name in positive_categories
        else:
            assert p.category_name not in positive_categories
    keys = [(p.value_name, p.description.descriptor_index) for p in neg]
    assert len(keys) == len(set(keys))
