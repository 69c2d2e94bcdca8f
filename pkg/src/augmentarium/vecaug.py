"""Vector-space augmentation: Gaussian noise, mixup, and dropout masking.

These methods operate on feature vectors rather than tokens, so they work
with imported embeddings and with the built-in hashed features alike.
Labels are carried as soft distributions throughout; mixup is the only
method that produces genuinely soft targets, the others copy the parent's
one-hot label.

``flip`` is a diagnostic method (not an augmentation technique): it copies
the parent vector but rotates the label to the next class, which makes it
a reliable way to force a statistically significant accuracy drop when
exercising the experiment harness.
"""

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .corpus import TrainItem
from .errors import DimensionMismatch, EmptyInput
from .rng import derive_rng

VEC_METHODS = ("noise", "mixup", "vdrop", "flip")


@dataclass(frozen=True)
class VecAugConfig:
    method: str
    sigma: float = 1.0
    mixup_alpha: float = 0.2
    drop_p: float = 0.1
    rate: float = 1.0
    seed: int = 0
    within_class: bool = False

    def __post_init__(self):
        if self.method not in VEC_METHODS:
            raise ValueError(f"unknown vector method {self.method!r}")
        if self.sigma < 0.0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.mixup_alpha <= 0.0:
            raise ValueError(f"mixup_alpha must be > 0, got {self.mixup_alpha}")
        if not 0.0 <= self.drop_p < 1.0:
            raise ValueError(f"drop_p must be in [0, 1), got {self.drop_p}")
        if self.rate <= 0.0:
            raise ValueError(f"rate must be positive, got {self.rate}")


def gaussian_noise(vec, sigma, rng) -> np.ndarray:
    """Add i.i.d. normal(0, sigma^2) noise per component."""
    if sigma < 0.0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    vec = np.asarray(vec, dtype=float)
    return vec + rng.normal(0.0, sigma, size=vec.shape)


def mixup(v1, y1, v2, y2, lam):
    """Convex combination of two vectors and their soft labels."""
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    if v1.shape != v2.shape:
        raise DimensionMismatch(f"vector dims differ: {v1.shape} vs {v2.shape}")
    if y1.shape != y2.shape:
        raise DimensionMismatch(f"label dims differ: {y1.shape} vs {y2.shape}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    return lam * v1 + (1.0 - lam) * v2, lam * y1 + (1.0 - lam) * y2


def draw_mixup_lambda(mixup_alpha, rng) -> float:
    return float(rng.beta(mixup_alpha, mixup_alpha))


def vec_dropout(vec, drop_p, rng) -> np.ndarray:
    """Zero each component with probability drop_p, scale survivors by
    1/(1-drop_p) so the expectation matches the input."""
    if not 0.0 <= drop_p < 1.0:
        raise ValueError(f"drop_p must be in [0, 1), got {drop_p}")
    vec = np.asarray(vec, dtype=float)
    keep = rng.random(vec.shape) >= drop_p
    return np.where(keep, vec / (1.0 - drop_p), 0.0)


def flip_label(probs) -> np.ndarray:
    """Rotate the label distribution one class forward (diagnostic)."""
    return np.roll(np.asarray(probs, dtype=float), 1)


def augment_vectors(items: list[TrainItem], config: VecAugConfig) -> list[TrainItem]:
    """Generate round(rate * |items|) augmented vector items.

    Parents are sampled uniformly with replacement; each (parent, replica)
    gets a derived RNG substream and output is sorted by (parent id,
    replica). Mixup partners are drawn uniformly over all items, or over
    same-argmax-class items when ``within_class`` is set.
    """
    if not items:
        raise EmptyInput("no items to augment")
    count = round(config.rate * len(items))
    picker = derive_rng(config.seed, "parents")
    replica: dict[str, int] = defaultdict(int)
    jobs = []
    for _ in range(count):
        parent = items[int(picker.integers(0, len(items)))]
        jobs.append((parent, replica[parent.id]))
        replica[parent.id] += 1
    jobs.sort(key=lambda job: (job[0].id, job[1]))

    by_class: dict[int, list[TrainItem]] = defaultdict(list)
    if config.method == "mixup" and config.within_class:
        for it in items:
            by_class[int(np.argmax(it.probs))].append(it)

    out = []
    for parent, k in jobs:
        rng = derive_rng(config.seed, parent.id, k)
        if config.method == "noise":
            vec, probs = gaussian_noise(parent.vec, config.sigma, rng), parent.probs
        elif config.method == "vdrop":
            vec, probs = vec_dropout(parent.vec, config.drop_p, rng), parent.probs
        elif config.method == "flip":
            vec, probs = np.array(parent.vec, dtype=float), flip_label(parent.probs)
        else:  # mixup
            pool = (
                by_class[int(np.argmax(parent.probs))]
                if config.within_class
                else items
            )
            partner = pool[int(rng.integers(0, len(pool)))]
            lam = draw_mixup_lambda(config.mixup_alpha, rng)
            vec, probs = mixup(parent.vec, parent.probs, partner.vec, partner.probs, lam)
        out.append(
            TrainItem(
                id=f"{parent.id}:{config.method}:{k}",
                vec=vec,
                probs=probs,
                augmented=True,
            )
        )
    return out


__all__ = [
    "VEC_METHODS",
    "VecAugConfig",
    "gaussian_noise",
    "mixup",
    "draw_mixup_lambda",
    "vec_dropout",
    "flip_label",
    "augment_vectors",
]
