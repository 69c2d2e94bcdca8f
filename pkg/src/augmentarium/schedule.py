"""Training-sequence strategies: which samples each epoch trains on.

Nine strategies are supported. ``vanilla`` presents the whole pool every
epoch. ``adf``/``ada``/``adm`` present augmented data first, after, or in
the middle, in equal contiguous phases. ``cl``/``anticl``/``randcl``
spend the first half of the epochs on the easiest, hardest, or a random
subset before switching to the full pool. ``ccl`` and ``mccl`` follow a
triangular cycle of subset sizes over the easiest samples; they differ
only in which data trains the scoring model: the full mixed pool for
ccl, real data only for mccl (scores are still computed for everything).

Every strategy emits exactly ``epochs`` plans, so compared strategies
always consume the same number of training epochs.
"""

import json
import math
from dataclasses import dataclass, replace
from enum import Enum

from .corpus import TrainItem
from .errors import EmptyPool, MissingScore
from .nnet import MLP, TrainConfig, default_mlp, train, train_on_plans
from .rng import derive_rng, derive_seed
from .scoring import as_loss_map, score


class Strategy(str, Enum):
    VANILLA = "vanilla"
    ADF = "adf"
    ADM = "adm"
    ADA = "ada"
    CL = "cl"
    ANTICL = "anticl"
    RANDCL = "randcl"
    CCL = "ccl"
    MCCL = "mccl"


# strategies whose schedules rank samples by easiness, and the pool the
# scorer is trained on ("mixed" = real + augmented)
SCORED_STRATEGIES = {
    Strategy.CL: "mixed",
    Strategy.ANTICL: "mixed",
    Strategy.CCL: "mixed",
    Strategy.MCCL: "real",
}


@dataclass(frozen=True)
class ScheduleConfig:
    strategy: Strategy = Strategy.VANILLA
    epochs: int = 30
    ip: float = 0.25
    fp: float = 1.0
    cycle_alpha: float = 0.25
    easy_fraction: float = 0.5
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not 0.0 < self.ip <= self.fp <= 1.0:
            raise ValueError(f"need 0 < ip <= fp <= 1, got ip={self.ip} fp={self.fp}")
        if self.cycle_alpha <= 0.0:
            raise ValueError(f"cycle_alpha must be > 0, got {self.cycle_alpha}")
        if not 0.0 < self.easy_fraction <= 1.0:
            raise ValueError(
                f"easy_fraction must be in (0, 1], got {self.easy_fraction}"
            )


@dataclass(frozen=True)
class EpochPlan:
    epoch_index: int
    sample_ids: tuple


@dataclass(frozen=True)
class TrainingSchedule:
    plans: tuple

    def __len__(self):
        return len(self.plans)


def cycle_fractions(ip: float, fp: float, alpha: float, epochs: int) -> list[float]:
    """Triangle wave of dataset-size fractions.

    Starts at ip, steps by alpha up to fp, back down to ip, and repeats
    until ``epochs`` values are emitted. Steps clip at the endpoints, so
    consecutive values differ by alpha except where a step lands on ip
    or fp.
    """
    eps = 1e-12
    out = []
    f, direction = ip, 1
    for _ in range(epochs):
        out.append(f)
        nxt = f + direction * alpha
        if nxt >= fp - eps:
            nxt, direction = fp, -1
        elif nxt <= ip + eps:
            nxt, direction = ip, 1
        f = nxt
    return out


def _subset_size(fraction: float, n: int) -> int:
    # guard ceil against float fuzz like 0.75 * 4 = 3.0000000000000004
    return min(n, max(1, math.ceil(fraction * n - 1e-9)))


def _rank_ids(mixed, loss_map, hardest=False):
    missing = [i for i in mixed if i not in loss_map]
    if missing:
        raise MissingScore(f"no score for {missing[0]!r} ({len(missing)} missing)")
    sign = -1.0 if hardest else 1.0
    order = sorted(range(len(mixed)), key=lambda k: (sign * loss_map[mixed[k]], k))
    return [mixed[k] for k in order]


def build_schedule(
    cfg: ScheduleConfig, real_ids, aug_ids, scores=None, rng=None
) -> TrainingSchedule:
    """Per-epoch sample selections for the configured strategy.

    Strategies that rank by easiness need ``scores`` covering the mixed
    pool. Each epoch's subset is shuffled uniformly; the shuffle stream
    derives from ``cfg.seed`` unless an rng is supplied.
    """
    real_ids = list(real_ids)
    aug_ids = list(aug_ids)
    if not real_ids:
        raise EmptyPool("no real samples")
    mixed = real_ids + aug_ids
    T = cfg.epochs
    half = math.ceil(T / 2)
    loss_map = as_loss_map(scores) if scores is not None else {}
    if rng is None:
        rng = derive_rng(cfg.seed, "schedule")

    strategy = cfg.strategy
    if strategy is Strategy.VANILLA:
        selections = [mixed] * T
    elif strategy in (Strategy.ADF, Strategy.ADA, Strategy.ADM):
        if not aug_ids:
            raise EmptyPool(f"{strategy.value} needs augmented samples")
        if strategy is Strategy.ADF:
            selections = [aug_ids] * half + [real_ids] * (T - half)
        elif strategy is Strategy.ADA:
            selections = [real_ids] * half + [aug_ids] * (T - half)
        else:
            third = math.ceil(T / 3)
            b1 = min(third, T)
            b2 = min(third, T - b1)
            b3 = T - b1 - b2
            selections = [real_ids] * b1 + [aug_ids] * b2 + [real_ids] * b3
    elif strategy in (Strategy.CL, Strategy.ANTICL):
        ranked = _rank_ids(mixed, loss_map, hardest=strategy is Strategy.ANTICL)
        subset = ranked[: _subset_size(cfg.easy_fraction, len(mixed))]
        selections = [subset] * half + [mixed] * (T - half)
    elif strategy is Strategy.RANDCL:
        k = _subset_size(cfg.easy_fraction, len(mixed))
        order = rng.permutation(len(mixed))
        subset = [mixed[i] for i in order[:k]]
        selections = [subset] * half + [mixed] * (T - half)
    else:  # CCL / MCCL share the cycle; they differ in how scores are made
        ranked = _rank_ids(mixed, loss_map)
        fractions = cycle_fractions(cfg.ip, cfg.fp, cfg.cycle_alpha, T)
        selections = [ranked[: _subset_size(f, len(mixed))] for f in fractions]

    plans = []
    for t, selected in enumerate(selections):
        order = rng.permutation(len(selected))
        plans.append(EpochPlan(t, tuple(selected[i] for i in order)))
    return TrainingSchedule(tuple(plans))


def dump_schedule(schedule: TrainingSchedule, path) -> None:
    """Write one JSON object per epoch plan for auditing."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for plan in schedule.plans:
            fh.write(
                json.dumps({"epoch": plan.epoch_index, "ids": list(plan.sample_ids)})
                + "\n"
            )


# ---------------------------------------------------------------------------
# Pipelines


@dataclass
class PipelineResult:
    model: MLP
    schedule: TrainingSchedule
    scorer: MLP | None = None
    scorer_train_ids: tuple = ()
    scores: dict | None = None


def run_strategy(
    real_items: list[TrainItem],
    aug_items: list[TrainItem],
    cfg: ScheduleConfig,
    train_cfg: TrainConfig,
) -> PipelineResult:
    """Train a fresh classifier under one sequencing strategy.

    For score-driven strategies this first trains a scorer model: on the
    mixed pool for cl/anticl/ccl, on real data only for mccl. Scores are
    computed once, for every sample in the pool, and the main model is
    initialized from scratch (never warm-started from the scorer). The
    returned result carries the schedule and the scorer's training ids
    so callers can audit exactly what each model saw.
    """
    if not real_items:
        raise EmptyPool("no real samples")
    all_items = [*real_items, *aug_items]
    pool = {it.id: it for it in all_items}
    if len(pool) != len(all_items):
        raise EmptyPool("duplicate ids across real and augmented pools")
    dims_in = len(all_items[0].vec)
    num_classes = len(all_items[0].probs)

    scorer = None
    scorer_ids: tuple = ()
    loss_map = None
    scorer_pool = SCORED_STRATEGIES.get(cfg.strategy)
    if scorer_pool is not None:
        scorer_items = real_items if scorer_pool == "real" else all_items
        scorer = default_mlp(dims_in, num_classes, derive_seed(cfg.seed, "scorer-init"))
        train(
            scorer,
            [(it.vec, it.probs) for it in scorer_items],
            train_cfg,
            rng=derive_rng(cfg.seed, "scorer-train"),
        )
        scorer_ids = tuple(it.id for it in scorer_items)
        loss_map = as_loss_map(score(scorer, all_items))

    schedule = build_schedule(
        cfg,
        [it.id for it in real_items],
        [it.id for it in aug_items],
        loss_map,
        rng=derive_rng(cfg.seed, "schedule"),
    )
    model = default_mlp(dims_in, num_classes, derive_seed(cfg.seed, "init"))
    train_on_plans(model, pool, schedule, train_cfg)
    return PipelineResult(model, schedule, scorer, scorer_ids, loss_map)


def mccl_pipeline(real_items, aug_items, cfg: ScheduleConfig, train_cfg: TrainConfig):
    """Cycled curriculum with the scorer trained on real data only."""
    return run_strategy(real_items, aug_items, replace(cfg, strategy=Strategy.MCCL), train_cfg)


def ccl_pipeline(real_items, aug_items, cfg: ScheduleConfig, train_cfg: TrainConfig):
    """Cycled curriculum with the scorer trained on real plus augmented."""
    return run_strategy(real_items, aug_items, replace(cfg, strategy=Strategy.CCL), train_cfg)


__all__ = [
    "Strategy",
    "SCORED_STRATEGIES",
    "ScheduleConfig",
    "EpochPlan",
    "TrainingSchedule",
    "cycle_fractions",
    "build_schedule",
    "dump_schedule",
    "PipelineResult",
    "run_strategy",
    "mccl_pipeline",
    "ccl_pipeline",
]
