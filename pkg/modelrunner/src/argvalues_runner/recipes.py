"""Training recipes with the published defaults per phase.

Entailment phases run one epoch with batches of 32 at learning rate 1e-5;
the classifiers train up to 30 epochs with batches of 64 at 2e-5 and stop
when validation loss fails to improve for 4 epochs. AdamW everywhere.
Sequence length and pooling are not pinned by the original setup, so they
live in the recipe and get echoed into every prediction file's sidecar.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

PHASE_NLI_PRETRAIN = "nli_pretrain"
PHASE_ENTAIL_FINETUNE = "entail_finetune"
PHASE_BASELINE_CLF = "baseline_clf"
PHASE_REDUCED_CLF = "reduced_clf"
PHASES = (PHASE_NLI_PRETRAIN, PHASE_ENTAIL_FINETUNE, PHASE_BASELINE_CLF, PHASE_REDUCED_CLF)

DEFAULT_BASE = "roberta-base"

_PHASE_DEFAULTS = {
    PHASE_NLI_PRETRAIN: {"epochs": 1, "batch_size": 32, "learning_rate": 1e-5, "early_stop_patience": None},
    PHASE_ENTAIL_FINETUNE: {"epochs": 1, "batch_size": 32, "learning_rate": 1e-5, "early_stop_patience": None},
    PHASE_BASELINE_CLF: {"epochs": 30, "batch_size": 64, "learning_rate": 2e-5, "early_stop_patience": 4},
    PHASE_REDUCED_CLF: {"epochs": 30, "batch_size": 64, "learning_rate": 2e-5, "early_stop_patience": 4},
}


@dataclass
class TrainRecipe:
    phase: str
    base_checkpoint: str = DEFAULT_BASE
    epochs: int = 1
    batch_size: int = 32
    learning_rate: float = 1e-5
    optimizer: str = "adamw"
    early_stop_patience: int | None = None
    max_seq_len: int = 256
    shuffle_seed: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


def recipe_for(phase: str, **overrides) -> TrainRecipe:
    """Recipe with the phase's published defaults, plus explicit overrides."""
    if phase not in _PHASE_DEFAULTS:
        raise ValueError(f"unknown phase {phase!r}; expected one of {PHASES}")
    settings = {**_PHASE_DEFAULTS[phase]}
    settings.update({k: v for k, v in overrides.items() if v is not None})
    return TrainRecipe(phase=phase, **settings)
