import io

import pytest

from argvalues.corpus import OFFICIAL_CATEGORY_NAMES
from argvalues.errors import DataError
from argvalues.labelalg import (
    expand_reduced,
    l1_to_l2,
    reduce_category,
    reduced_classes,
    reduced_names,
    write_reduction_mapping,
)


def test_value_maps_to_its_category(taxonomy):
    assert l1_to_l2("Be creative", taxonomy) == "Self-direction: thought"


def test_single_value_category(taxonomy):
    assert l1_to_l2("Have pleasure", taxonomy) == "Hedonism"


def test_mapping_is_total_over_taxonomy(taxonomy):
    for name in taxonomy.value_names:
        assert l1_to_l2(name, taxonomy) in taxonomy.category_names


def test_unknown_value_is_fatal(taxonomy):
    with pytest.raises(DataError, match="unknown L1 value"):
        l1_to_l2("Be bogus", taxonomy)


def test_colon_prefix_merging():
    assert reduce_category("Self-direction: thought") == "Self-direction"
    assert reduce_category("Self-direction: action") == "Self-direction"


def test_name_without_delimiter_maps_to_itself():
    assert reduce_category("Hedonism") == "Hedonism"


def test_reduction_is_idempotent():
    for name in OFFICIAL_CATEGORY_NAMES:
        assert reduce_category(reduce_category(name)) == reduce_category(name)


def test_official_categories_reduce_to_twelve():
    assert len({reduce_category(name) for name in OFFICIAL_CATEGORY_NAMES}) == 12


def test_expand_universalism(official_category_taxonomy):
    assert set(expand_reduced("Universalism", official_category_taxonomy)) == {
        "Universalism: concern",
        "Universalism: nature",
        "Universalism: tolerance",
        "Universalism: objectivity",
    }


def test_expand_singleton(official_category_taxonomy):
    assert expand_reduced("Face", official_category_taxonomy) == ("Face",)


def test_expand_of_reduce_contains_original(official_category_taxonomy):
    for name in official_category_taxonomy.category_names:
        assert name in expand_reduced(reduce_category(name), official_category_taxonomy)


def test_reduce_of_expand_is_identity(official_category_taxonomy):
    for reduced in reduced_names(official_category_taxonomy):
        for member in expand_reduced(reduced, official_category_taxonomy):
            assert reduce_category(member) == reduced


def test_reduced_classes_partition_the_categories(official_category_taxonomy):
    classes = reduced_classes(official_category_taxonomy)
    all_members = [m for rc in classes for m in rc.members]
    assert sorted(all_members) == sorted(official_category_taxonomy.category_names)
    assert len(all_members) == len(set(all_members))
    for rc in classes:
        assert ":" not in rc.name


def test_unknown_reduced_name_is_fatal(taxonomy):
    with pytest.raises(DataError, match="unknown reduced class"):
        expand_reduced("Bogus", taxonomy)


def test_empty_category_name_is_fatal():
    with pytest.raises(DataError):
        reduce_category("")


def test_mapping_export(taxonomy):
    out = io.StringIO()
    write_reduction_mapping(taxonomy, out)
    lines = out.getvalue().splitlines()
    assert lines[0] == "Category\tReduced Class"
    assert len(lines) == 1 + len(taxonomy.category_names)
    assert "Power: dominance\tPower" in lines
    assert "Face\tFace" in lines
