"""Label-space mappings: descriptor value -> L1 -> L2 -> reduced class.

The reduction merges L2 categories sharing the prefix before ":" into one
class ("Self-direction: thought" and "Self-direction: action" both become
"Self-direction"); on the official 20 categories this yields 12 classes.
All lookup tables are built once from the taxonomy and are read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

from .corpus import ValueTaxonomy
from .errors import DataError

REDUCED_LABEL_SPACE = "reduced_12"
L2_LABEL_SPACE = "L2_20"


@dataclass(frozen=True)
class ReducedClass:
    name: str
    members: tuple[str, ...]


def l1_to_l2(value_name: str, taxonomy: ValueTaxonomy) -> str:
    """Category containing the L1 value; unknown values are fatal."""
    return taxonomy.category_of(value_name)


def reduce_category(l2_name: str) -> str:
    """Prefix before the first ":", trailing whitespace trimmed.

    Names without ":" map to themselves, so the rule is total.
    """
    if not l2_name:
        raise DataError("cannot reduce an empty category name")
    return l2_name.split(":", 1)[0].rstrip()


def reduced_classes(taxonomy: ValueTaxonomy) -> tuple[ReducedClass, ...]:
    """Partition of the taxonomy's categories into reduced classes.

    Class order follows first appearance in taxonomy order; members keep
    taxonomy order too.
    """
    grouped: dict[str, list[str]] = {}
    for name in taxonomy.category_names:
        grouped.setdefault(reduce_category(name), []).append(name)
    return tuple(
        ReducedClass(name=reduced, members=tuple(members))
        for reduced, members in grouped.items()
    )


def reduced_names(taxonomy: ValueTaxonomy) -> tuple[str, ...]:
    return tuple(rc.name for rc in reduced_classes(taxonomy))


def expand_reduced(reduced_name: str, taxonomy: ValueTaxonomy) -> tuple[str, ...]:
    """All categories whose reduction equals ``reduced_name``."""
    for rc in reduced_classes(taxonomy):
        if rc.name == reduced_name:
            return rc.members
    raise DataError(f"unknown reduced class: {reduced_name!r}")


def write_reduction_mapping(taxonomy: ValueTaxonomy, out: IO[str]) -> None:
    """Two-column tab-separated category -> reduced-class export."""
    out.write("Category\tReduced Class\n")
    for name in taxonomy.category_names:
        out.write(f"{name}\t{reduce_category(name)}\n")
