"""Builders for the two text surfaces fed to the entailment model.

The argument side concatenates premise, stance, and conclusion in that
order. The description side prepends the L1 value name and the keyword
"by" to a descriptor sentence, e.g.::

    Be creative by promoting imagination

Both builders are pure; the separator and casing policy travel with every
generated dataset (see the pair-file manifest) so that trained models and
regenerated files stay comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Argument
from .errors import DataError

DESCRIPTION_KEYWORD = "by"


@dataclass(frozen=True)
class TextPolicy:
    """Free choices the construction rule leaves open.

    separator: string placed between concatenated parts (single space by
        default; the parts themselves are trimmed first, so it never doubles).
    lowercase_value_names: lowercase the L1 value name in description texts.
    """

    separator: str = " "
    lowercase_value_names: bool = False

    def as_dict(self) -> dict:
        return {
            "separator": self.separator,
            "lowercase_value_names": self.lowercase_value_names,
        }


DEFAULT_POLICY = TextPolicy()


@dataclass(frozen=True)
class ArgumentText:
    argument_id: str
    text: str


@dataclass(frozen=True)
class DescriptionText:
    value_name: str
    descriptor_index: int
    text: str


def build_argument_text(argument: Argument, policy: TextPolicy = DEFAULT_POLICY) -> ArgumentText:
    """premise + stance + conclusion, separated by the policy separator."""
    parts = (argument.premise.strip(), argument.stance.strip(), argument.conclusion.strip())
    if not all(parts):
        raise DataError(f"argument {argument.id!r} has an empty text field")
    return ArgumentText(argument_id=argument.id, text=policy.separator.join(parts))


def build_description_text(
    value_name: str,
    descriptor: str,
    descriptor_index: int,
    policy: TextPolicy = DEFAULT_POLICY,
) -> DescriptionText:
    """'<value name> by <descriptor>' with the policy separator and casing."""
    name = value_name.strip()
    sentence = descriptor.strip()
    if not name:
        raise DataError("value name is empty")
    if not sentence:
        raise DataError(f"value {value_name!r} has an empty descriptor")
    if policy.lowercase_value_names:
        name = name.lower()
    text = policy.separator.join((name, DESCRIPTION_KEYWORD, sentence))
    return DescriptionText(value_name=value_name, descriptor_index=descriptor_index, text=text)
