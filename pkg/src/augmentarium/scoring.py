"""Easiness scores and loss-quantile filtering of augmented data.

A sample's easiness score is its cross-entropy loss under a scorer model;
lower loss means easier. Filtering keeps the lowest-loss fraction of the
augmented pool only; real samples always pass through the pipeline
unfiltered, and the scorer used for filtering is the vanilla model
trained on real data alone (the experiment runner enforces this).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import MissingScore, MissingVector
from .nnet import MLP, per_sample_losses


@dataclass(frozen=True)
class EasinessScore:
    sample_id: str
    loss: float


def score(scorer: MLP, items) -> list[EasinessScore]:
    """Per-item loss under ``scorer``, paired with ids, in input order."""
    for it in items:
        if it.vec is None:
            raise MissingVector(f"item {it.id!r} has no feature vector")
    losses = per_sample_losses(scorer, [(it.vec, it.probs) for it in items])
    return [EasinessScore(it.id, loss) for it, loss in zip(items, losses)]


def as_loss_map(scores) -> dict[str, float]:
    """Accept a list of EasinessScore or an id -> loss mapping."""
    if isinstance(scores, dict):
        return {k: float(v) for k, v in scores.items()}
    return {s.sample_id: float(s.loss) for s in scores}


def filter_by_loss(aug, scores, quantile: float, per_class: bool = False):
    """Keep the ceil(quantile * n) lowest-loss augmented entries.

    Ties break by original position, and the kept entries retain their
    original relative order. ``aug`` may hold anything with an ``id``
    (samples or train items). With ``per_class`` the quota applies within
    each argmax class separately instead of globally.
    """
    if not 0.0 < quantile <= 1.0:
        raise ValueError(f"quantile must be in (0, 1], got {quantile}")
    aug = list(aug)
    if not aug:
        return []
    loss_map = as_loss_map(scores)
    missing = [a.id for a in aug if a.id not in loss_map]
    if missing:
        raise MissingScore(f"no score for {missing[0]!r} ({len(missing)} missing)")

    if per_class:
        keep: set[int] = set()
        groups: dict[int, list[int]] = {}
        for idx, a in enumerate(aug):
            cls = int(np.argmax(a.probs)) if hasattr(a, "probs") else a.label
            groups.setdefault(cls, []).append(idx)
        for indices in groups.values():
            k = math.ceil(quantile * len(indices))
            ranked = sorted(indices, key=lambda i: (loss_map[aug[i].id], i))
            keep.update(ranked[:k])
    else:
        k = math.ceil(quantile * len(aug))
        ranked = sorted(range(len(aug)), key=lambda i: (loss_map[aug[i].id], i))
        keep = set(ranked[:k])
    return [a for i, a in enumerate(aug) if i in keep]


__all__ = ["EasinessScore", "score", "as_loss_map", "filter_by_loss"]
