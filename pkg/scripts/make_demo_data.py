#!/usr/bin/env python3
"""Generate a synthetic corpus in the shared-task file formats.

Produces a taxonomy with the official 20 category names (values and
descriptor sentences are invented), an arguments file, and consistent
L1/L2 label files, plus a config.json wiring them up, so the whole
pipeline can be driven without the real dataset.

Usage:
    python scripts/make_demo_data.py [--out demo-data] [--arguments 40] [--seed 13]
"""

from __future__ import annotations

import argparse
import json
import random
from pathlib import Path

from argvalues.corpus import OFFICIAL_CATEGORY_NAMES

ACTIONS = [
    "protecting", "supporting", "questioning", "respecting", "improving",
    "challenging", "preserving", "sharing", "rewarding", "organizing",
]
OBJECTS = [
    "traditions", "institutions", "communities", "opportunities", "rules",
    "neighbors", "resources", "achievements", "ideas", "freedoms",
]
TOPICS = [
    "public spending", "school curricula", "trade policy", "city planning",
    "energy use", "press freedom", "social media", "space research",
    "public health", "voting rules",
]
STANCES = ["in favor of", "against"]


def synth_taxonomy(rng: random.Random) -> dict:
    taxonomy: dict = {}
    for category in OFFICIAL_CATEGORY_NAMES:
        stem = category.replace(":", "").lower()
        values = {}
        for v in range(rng.randint(2, 3)):
            name = f"Value {stem} {v + 1}"
            descriptors = [
                f"{rng.choice(ACTIONS)} {rng.choice(OBJECTS)}"
                for _ in range(rng.randint(2, 4))
            ]
            values[name] = sorted(set(descriptors)) or [f"caring about {stem}"]
        taxonomy[category] = values
    return taxonomy


def synth_arguments(rng: random.Random, count: int) -> list[tuple[str, str, str, str]]:
    rows = []
    for i in range(count):
        topic = rng.choice(TOPICS)
        premise = (
            f"{rng.choice(ACTIONS)} {rng.choice(OBJECTS)} matters more than "
            f"{rng.choice(OBJECTS)} when we debate {topic}"
        )
        conclusion = f"we should rethink {topic}"
        rows.append((f"D{i + 1:05d}", conclusion, rng.choice(STANCES), premise))
    return rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo-data", help="output directory")
    parser.add_argument("--arguments", type=int, default=40)
    parser.add_argument("--seed", type=int, default=13)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    taxonomy = synth_taxonomy(rng)
    (out / "taxonomy.json").write_text(
        json.dumps(taxonomy, indent=1, ensure_ascii=False), encoding="utf-8"
    )

    value_names = [v for values in taxonomy.values() for v in values]
    category_of = {v: c for c, values in taxonomy.items() for v in values}

    for split, count in (("train", args.arguments), ("validation", max(10, args.arguments // 4))):
        rows = synth_arguments(rng, count)
        with open(out / f"arguments-{split}.tsv", "w", encoding="utf-8") as f:
            f.write("Argument ID\tConclusion\tStance\tPremise\n")
            for row in rows:
                f.write("\t".join(row) + "\n")

        # every category gets at least one positive argument, like the real
        # corpus; a split with uncovered categories scores below 1 even on
        # perfect predictions under the include-at-0 macro convention
        uncovered = [values for values in taxonomy.values()]
        rng.shuffle(uncovered)
        positives: dict[str, set[str]] = {}
        for arg_id, *_ in rows:
            chosen: set[str] = set()
            for _ in range(rng.randint(2, 3)):
                if uncovered:
                    chosen.add(rng.choice(list(uncovered.pop())))
                else:
                    chosen.add(rng.choice(value_names))
            positives[arg_id] = chosen
        while uncovered:
            values = uncovered.pop()
            positives[rng.choice(list(positives))].add(rng.choice(list(values)))
        with open(out / f"labels-l1-{split}.tsv", "w", encoding="utf-8") as f:
            f.write("\t".join(("Argument ID", *value_names)) + "\n")
            for arg_id, pos in positives.items():
                bits = ("1" if name in pos else "0" for name in value_names)
                f.write("\t".join((arg_id, *bits)) + "\n")
        with open(out / f"labels-l2-{split}.tsv", "w", encoding="utf-8") as f:
            f.write("\t".join(("Argument ID", *OFFICIAL_CATEGORY_NAMES)) + "\n")
            for arg_id, pos in positives.items():
                categories = {category_of[v] for v in pos}
                bits = ("1" if name in categories else "0" for name in OFFICIAL_CATEGORY_NAMES)
                f.write("\t".join((arg_id, *bits)) + "\n")

    config = {
        "taxonomy": "taxonomy.json",
        "splits": {
            split: {
                "arguments": f"arguments-{split}.tsv",
                "labels_l1": f"labels-l1-{split}.tsv",
                "labels_l2": f"labels-l2-{split}.tsv",
            }
            for split in ("train", "validation")
        },
        "seed": args.seed,
        "out_dir": "demo-out",
    }
    (out / "config.json").write_text(json.dumps(config, indent=1), encoding="utf-8")

    print(f"demo corpus written to {out}/ ({args.arguments} train arguments)")
    print(f"next: python scripts/run_demo.py --data {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
