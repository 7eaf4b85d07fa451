"""Command-line entry point wiring the whole pipeline together.

Subcommands::

    argvalues make-pairs      --config cfg.json --split train [--seed N] [--workers K]
    argvalues stub-predict    --config cfg.json --split validation --stub-mode oracle_from_gold
    argvalues combine         --config cfg.json --split validation --scheme rs2 \
                              --entail-preds f.tsv --baseline-preds g.tsv
    argvalues score           --config cfg.json --split validation --run run.tsv
    argvalues export-mapping  --config cfg.json
    argvalues stats           --config cfg.json [--split train]

Configuration lives in a JSON file; command-line flags override it. Input
paths in the config resolve relative to the config file, the output
directory relative to the working directory. Every command captures its
resolved configuration into the output directory and writes all artifacts
atomically (temp file + rename), so reruns are byte-identical and an
interrupted run never leaves partial files.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterator

from . import __version__
from .corpus import (
    Argument,
    LabelMatrix,
    LEVEL_L1,
    LEVEL_L2,
    ValueTaxonomy,
    load_arguments,
    load_labels,
    load_taxonomy,
)
from .ensemble import (
    DEFAULT_CLASS_THRESHOLD,
    DEFAULT_ENTAIL_THRESHOLD,
    SCHEMES,
    binarize_class_predictions,
    read_class_predictions,
    read_descriptor_predictions,
    read_run_file,
    result_set_1,
    result_set_2,
    result_set_3,
    result_set_4,
    write_class_predictions,
    write_descriptor_predictions,
    write_run_file,
)
from .errors import DataError
from .labelalg import (
    L2_LABEL_SPACE,
    REDUCED_LABEL_SPACE,
    reduced_classes,
    reduced_names,
    write_reduction_mapping,
)
from .pairgen import generate_dataset, write_pairs
from .scoring import render_report_table, score_run, write_report_json
from .stubs import MODE_ORACLE, STUB_MODES, StubConfig, emit_class_predictions, emit_descriptor_predictions
from .textgen import TextPolicy

log = logging.getLogger(__name__)


class UsageError(Exception):
    """Bad invocation (unknown split, missing input for a scheme, ...)."""


@dataclass
class SplitPaths:
    arguments: Path
    labels_l1: Path | None = None
    labels_l2: Path | None = None


@dataclass
class RunConfig:
    taxonomy: Path
    splits: dict[str, SplitPaths]
    seed: int = 0
    entail_threshold: float = DEFAULT_ENTAIL_THRESHOLD
    class_threshold: float = DEFAULT_CLASS_THRESHOLD
    separator: str = " "
    lowercase_value_names: bool = False
    out_dir: Path = Path("out")
    workers: int = 1

    def text_policy(self) -> TextPolicy:
        return TextPolicy(
            separator=self.separator,
            lowercase_value_names=self.lowercase_value_names,
        )

    def split(self, name: str) -> SplitPaths:
        try:
            return self.splits[name]
        except KeyError:
            known = ", ".join(sorted(self.splits)) or "(none)"
            raise UsageError(
                f"split {name!r} is not defined in the config (known: {known})"
            ) from None

    def as_dict(self) -> dict:
        return {
            "taxonomy": str(self.taxonomy),
            "splits": {
                name: {
                    "arguments": str(paths.arguments),
                    "labels_l1": str(paths.labels_l1) if paths.labels_l1 else None,
                    "labels_l2": str(paths.labels_l2) if paths.labels_l2 else None,
                }
                for name, paths in self.splits.items()
            },
            "seed": self.seed,
            "entail_threshold": self.entail_threshold,
            "class_threshold": self.class_threshold,
            "separator": self.separator,
            "lowercase_value_names": self.lowercase_value_names,
            "out_dir": str(self.out_dir),
            "workers": self.workers,
        }


_CONFIG_KEYS = {
    "taxonomy",
    "splits",
    "seed",
    "entail_threshold",
    "class_threshold",
    "separator",
    "lowercase_value_names",
    "out_dir",
    "workers",
}
_SPLIT_KEYS = {"arguments", "labels_l1", "labels_l2"}


def load_config(path: str | Path) -> RunConfig:
    """Load and validate a run configuration.

    All referenced input files must exist; thresholds must lie in [0, 1].
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise DataError("config must be a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise DataError("config has unknown key(s): " + ", ".join(sorted(unknown)))
    for key in ("taxonomy", "splits"):
        if key not in raw:
            raise DataError(f"config is missing required key {key!r}")

    base = path.resolve().parent

    def resolve(p: str) -> Path:
        candidate = Path(p)
        return candidate if candidate.is_absolute() else base / candidate

    def existing(p: str, what: str) -> Path:
        resolved = resolve(p)
        if not resolved.is_file():
            raise DataError(f"{what} does not exist: {resolved}")
        return resolved

    splits: dict[str, SplitPaths] = {}
    if not isinstance(raw["splits"], dict):
        raise DataError("config 'splits' must map split names to path objects")
    for name, paths in raw["splits"].items():
        if not isinstance(paths, dict):
            raise DataError(f"split {name!r} must be an object")
        unknown = set(paths) - _SPLIT_KEYS
        if unknown:
            raise DataError(
                f"split {name!r} has unknown key(s): " + ", ".join(sorted(unknown))
            )
        if "arguments" not in paths:
            raise DataError(f"split {name!r} is missing the 'arguments' path")
        splits[name] = SplitPaths(
            arguments=existing(paths["arguments"], f"arguments file for {name!r}"),
            labels_l1=existing(paths["labels_l1"], f"L1 labels for {name!r}")
            if paths.get("labels_l1")
            else None,
            labels_l2=existing(paths["labels_l2"], f"L2 labels for {name!r}")
            if paths.get("labels_l2")
            else None,
        )

    config = RunConfig(
        taxonomy=existing(raw["taxonomy"], "taxonomy file"),
        splits=splits,
        seed=int(raw.get("seed", 0)),
        entail_threshold=float(raw.get("entail_threshold", DEFAULT_ENTAIL_THRESHOLD)),
        class_threshold=float(raw.get("class_threshold", DEFAULT_CLASS_THRESHOLD)),
        separator=str(raw.get("separator", " ")),
        lowercase_value_names=bool(raw.get("lowercase_value_names", False)),
        out_dir=Path(raw.get("out_dir", "out")),
        workers=int(raw.get("workers", 1)),
    )
    _validate_config(config)
    return config


def _validate_config(config: RunConfig) -> None:
    for name, value in (
        ("entail_threshold", config.entail_threshold),
        ("class_threshold", config.class_threshold),
    ):
        if not 0.0 <= value <= 1.0:
            raise DataError(f"{name} must lie in [0, 1], got {value}")
    if config.workers < 1:
        raise DataError(f"workers must be >= 1, got {config.workers}")


@contextlib.contextmanager
def atomic_writer(path: Path) -> Iterator[IO[str]]:
    """Write to a sibling temp file, then rename into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    stream = os.fdopen(fd, "w", encoding="utf-8", newline="")
    try:
        yield stream
        stream.close()
        os.replace(tmp_name, path)
    except BaseException:
        stream.close()
        with contextlib.suppress(OSError):
            os.unlink(tmp_name)
        raise


def write_text_atomic(path: Path, text: str) -> None:
    with atomic_writer(path) as out:
        out.write(text)


def _capture_config(config: RunConfig, command: str, extras: dict) -> None:
    payload = {
        "tool": f"argvalues/{__version__}",
        "command": command,
        "config": config.as_dict(),
        **({"inputs": extras} if extras else {}),
    }
    write_text_atomic(
        config.out_dir / f"{command}.config.json",
        json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
    )


def _apply_overrides(config: RunConfig, args: argparse.Namespace) -> None:
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "entail_threshold", None) is not None:
        config.entail_threshold = args.entail_threshold
    if getattr(args, "class_threshold", None) is not None:
        config.class_threshold = args.class_threshold
    if getattr(args, "out", None) is not None:
        config.out_dir = Path(args.out)
    if getattr(args, "workers", None) is not None:
        config.workers = args.workers
    try:
        _validate_config(config)
    except DataError as exc:
        # a bad flag value is a usage problem, not corrupt data
        raise UsageError(str(exc)) from None


def _load_split_arguments(config: RunConfig, split: str) -> list[Argument]:
    return load_arguments(config.split(split).arguments)


def _load_split_labels(
    config: RunConfig, split: str, level: str, taxonomy: ValueTaxonomy, why: str
) -> LabelMatrix:
    paths = config.split(split)
    path = paths.labels_l1 if level == LEVEL_L1 else paths.labels_l2
    if path is None:
        raise UsageError(f"split {split!r} has no {level} labels in the config; {why}")
    return load_labels(path, level, taxonomy)


def cmd_make_pairs(config: RunConfig, args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(config.taxonomy)
    arguments = _load_split_arguments(config, args.split)
    l1_labels = _load_split_labels(
        config, args.split, LEVEL_L1, taxonomy, "pair generation needs L1 labels"
    )
    pairs, manifest = generate_dataset(
        arguments,
        l1_labels,
        taxonomy,
        seed=config.seed,
        policy=config.text_policy(),
        split=args.split,
        workers=config.workers,
    )
    pair_path = config.out_dir / f"pairs-{args.split}.tsv"
    with atomic_writer(pair_path) as out:
        write_pairs(pairs, out)
    write_text_atomic(config.out_dir / f"pairs-{args.split}.manifest.json", manifest.to_json())
    _capture_config(config, "make-pairs", {"split": args.split})

    counts = manifest.counts
    print(f"wrote {pair_path}")
    print(
        f"pairs: {counts['total']} total = {counts['positive']} positive + "
        f"{counts['negative_difficult']} difficult + {counts['negative_easy']} easy "
        f"(over {counts['arguments_with_pairs']}/{counts['arguments']} arguments)"
    )
    if manifest.shortfall["arguments"]:
        print(
            f"warning: negative pools exhausted for {manifest.shortfall['arguments']} "
            f"argument(s), {manifest.shortfall['missing_pairs']} pair(s) short"
        )
    return 0


def cmd_stub_predict(config: RunConfig, args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(config.taxonomy)
    arguments = _load_split_arguments(config, args.split)
    stub = StubConfig(mode=args.stub_mode, constant_value=args.constant_value)
    policy = config.text_policy()

    l1_labels = l2_labels = None
    if stub.mode == MODE_ORACLE:
        l1_labels = _load_split_labels(
            config, args.split, LEVEL_L1, taxonomy, "the oracle stub needs gold L1 labels"
        )
        l2_labels = _load_split_labels(
            config, args.split, LEVEL_L2, taxonomy, "the oracle stub needs gold L2 labels"
        )

    descriptor_preds = emit_descriptor_predictions(arguments, taxonomy, stub, l1_labels, policy)
    baseline_preds = emit_class_predictions(
        arguments, taxonomy, stub, L2_LABEL_SPACE, l2_labels, policy
    )
    reduced_preds = emit_class_predictions(
        arguments, taxonomy, stub, REDUCED_LABEL_SPACE, l2_labels, policy
    )

    out = config.out_dir
    entail_path = out / f"stub-{args.split}.entail.tsv"
    baseline_path = out / f"stub-{args.split}.baseline.tsv"
    reduced_path = out / f"stub-{args.split}.reduced.tsv"
    with atomic_writer(entail_path) as stream:
        write_descriptor_predictions(descriptor_preds, stream)
    with atomic_writer(baseline_path) as stream:
        write_class_predictions(baseline_preds, taxonomy.category_names, stream)
    with atomic_writer(reduced_path) as stream:
        write_class_predictions(reduced_preds, reduced_names(taxonomy), stream)
    _capture_config(
        config,
        "stub-predict",
        {"split": args.split, "stub_mode": stub.mode, "constant_value": stub.constant_value},
    )
    print(f"wrote {entail_path}")
    print(f"wrote {baseline_path}")
    print(f"wrote {reduced_path}")
    return 0


def cmd_combine(config: RunConfig, args: argparse.Namespace) -> int:
    needs = {"rs1": (), "rs2": ("baseline",), "rs3": ("reduced",), "rs4": ("baseline", "reduced")}
    for input_name in needs[args.scheme]:
        if getattr(args, f"{input_name}_preds") is None:
            raise UsageError(
                f"scheme {args.scheme} requires --{input_name.replace('_', '-')}-preds"
            )

    taxonomy = load_taxonomy(config.taxonomy)
    roster = [a.id for a in _load_split_arguments(config, args.split)]

    with open(args.entail_preds, encoding="utf-8") as f:
        descriptor_preds = read_descriptor_predictions(f)
    rs1 = result_set_1(descriptor_preds, taxonomy, roster, config.entail_threshold)

    baseline = reduced = None
    if args.baseline_preds is not None:
        with open(args.baseline_preds, encoding="utf-8") as f:
            preds = read_class_predictions(f, taxonomy.category_names, L2_LABEL_SPACE)
        baseline = binarize_class_predictions(preds, config.class_threshold, roster)
    if args.reduced_preds is not None:
        with open(args.reduced_preds, encoding="utf-8") as f:
            preds = read_class_predictions(f, reduced_names(taxonomy), REDUCED_LABEL_SPACE)
        reduced = binarize_class_predictions(preds, config.class_threshold, roster)

    if args.scheme == "rs1":
        result = rs1
    elif args.scheme == "rs2":
        result = result_set_2(rs1, baseline, taxonomy)
    elif args.scheme == "rs3":
        result = result_set_3(rs1, reduced, taxonomy)
    else:
        result = result_set_4(rs1, baseline, reduced, taxonomy)

    run_path = config.out_dir / f"run-{args.scheme}-{args.split}.tsv"
    with atomic_writer(run_path) as stream:
        write_run_file(result, taxonomy, stream)
    _capture_config(
        config,
        "combine",
        {
            "split": args.split,
            "scheme": args.scheme,
            "entail_preds": str(args.entail_preds),
            "baseline_preds": str(args.baseline_preds) if args.baseline_preds else None,
            "reduced_preds": str(args.reduced_preds) if args.reduced_preds else None,
        },
    )
    predicted = sum(len(s) for s in result.predictions.values())
    print(f"wrote {run_path}")
    print(f"{args.scheme}: {predicted} category predictions over {len(roster)} arguments")
    return 0


def cmd_score(config: RunConfig, args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(config.taxonomy)
    gold = _load_split_labels(
        config, args.split, LEVEL_L2, taxonomy, "scoring needs gold L2 labels"
    )
    with open(args.run, encoding="utf-8") as f:
        run = read_run_file(f, taxonomy, scheme=Path(args.run).stem)
    report = score_run(gold, run, include_empty_categories=not args.exclude_empty_categories)

    stem = Path(args.run).stem
    json_path = config.out_dir / f"{stem}.report.json"
    table_path = config.out_dir / f"{stem}.report.txt"
    with atomic_writer(json_path) as stream:
        write_report_json(report, stream)
    write_text_atomic(table_path, render_report_table(report))
    _capture_config(config, "score", {"split": args.split, "run": str(args.run)})
    print(f"wrote {json_path}")
    print(f"wrote {table_path}")
    print(
        f"overall F1 {report.overall_f1:.4f} "
        f"(macro precision {report.macro_precision:.4f}, "
        f"macro recall {report.macro_recall:.4f})"
    )
    return 0


def cmd_export_mapping(config: RunConfig, args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(config.taxonomy)
    path = config.out_dir / "reduced-classes.tsv"
    with atomic_writer(path) as stream:
        write_reduction_mapping(taxonomy, stream)
    _capture_config(config, "export-mapping", {})
    classes = reduced_classes(taxonomy)
    print(f"wrote {path}")
    print(f"{len(taxonomy.category_names)} categories -> {len(classes)} reduced classes")
    return 0


def cmd_stats(config: RunConfig, args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(config.taxonomy)
    descriptor_count = sum(
        len(v.descriptors) for c in taxonomy.categories for v in c.values
    )
    print(
        f"taxonomy: {len(taxonomy.categories)} categories, "
        f"{len(taxonomy.value_names)} values, {descriptor_count} descriptors "
        f"(fingerprint {taxonomy.fingerprint[:12]})"
    )
    names = [args.split] if args.split else sorted(config.splits)
    for name in names:
        paths = config.split(name)
        arguments = load_arguments(paths.arguments)
        line = f"split {name}: {len(arguments)} arguments"
        if paths.labels_l1:
            l1 = load_labels(paths.labels_l1, LEVEL_L1, taxonomy)
            positives = sum(sum(bits) for bits in l1.rows.values())
            line += f"; L1 labels for {len(l1.rows)} rows ({positives} positive)"
        if paths.labels_l2:
            l2 = load_labels(paths.labels_l2, LEVEL_L2, taxonomy)
            positives = sum(sum(bits) for bits in l2.rows.values())
            line += f"; L2 labels for {len(l2.rows)} rows ({positives} positive)"
        print(line)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="argvalues", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"argvalues {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def common(sub: argparse.ArgumentParser, *, split: bool = True) -> None:
        sub.add_argument("--config", required=True, help="path to the run config JSON")
        sub.add_argument("--out", help="output directory (overrides config)")
        if split:
            sub.add_argument("--split", required=True, help="split name from the config")

    sub = subparsers.add_parser("make-pairs", help="synthesize the entailment pair dataset")
    common(sub)
    sub.add_argument("--seed", type=int, help="generation seed (overrides config)")
    sub.add_argument("--workers", type=int, help="parallel worker cap (overrides config)")
    sub.set_defaults(handler=cmd_make_pairs)

    sub = subparsers.add_parser("stub-predict", help="emit model-free prediction files")
    common(sub)
    sub.add_argument("--stub-mode", required=True, choices=STUB_MODES)
    sub.add_argument(
        "--constant-value", type=float, help="probability for the constant stub mode"
    )
    sub.set_defaults(handler=cmd_stub_predict)

    sub = subparsers.add_parser("combine", help="combine prediction files into a run file")
    common(sub)
    sub.add_argument("--scheme", required=True, choices=SCHEMES)
    sub.add_argument("--entail-preds", required=True, help="descriptor-prediction file")
    sub.add_argument("--baseline-preds", help="20-category class-prediction file")
    sub.add_argument("--reduced-preds", help="12-class class-prediction file")
    sub.add_argument("--entail-threshold", type=float, help="overrides config")
    sub.add_argument("--class-threshold", type=float, help="overrides config")
    sub.set_defaults(handler=cmd_combine)

    sub = subparsers.add_parser("score", help="score a run file against gold labels")
    common(sub)
    sub.add_argument("--run", required=True, help="run file to score")
    sub.add_argument(
        "--exclude-empty-categories",
        action="store_true",
        help="drop categories without gold positives from the macro averages",
    )
    sub.set_defaults(handler=cmd_score)

    sub = subparsers.add_parser("export-mapping", help="export the category->reduced mapping")
    common(sub, split=False)
    sub.set_defaults(handler=cmd_export_mapping)

    sub = subparsers.add_parser("stats", help="parse and summarize the configured data")
    common(sub, split=False)
    sub.add_argument("--split", help="restrict to one split")
    sub.set_defaults(handler=cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = load_config(args.config)
        _apply_overrides(config, args)
        return args.handler(config, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
