"""Augmentarium: text and vector augmentation, loss-based filtering,
training-sequence strategies, and a significance-tested experiment
harness, all runnable from a single seeded CLI."""

from . import corpus, nnet, runner, schedule, scoring, stats, synthetic, textaug, vecaug
from .corpus import Dataset, Origin, Sample, TrainItem
from .nnet import MLP, TrainConfig
from .runner import ExperimentReport, ExperimentSpec, run_experiment
from .schedule import ScheduleConfig, Strategy, TrainingSchedule
from .stats import Outcome, Verdict

__version__ = "0.1.0"

__all__ = [
    "corpus",
    "textaug",
    "vecaug",
    "nnet",
    "scoring",
    "schedule",
    "stats",
    "runner",
    "synthetic",
    "Dataset",
    "Origin",
    "Sample",
    "TrainItem",
    "MLP",
    "TrainConfig",
    "ScheduleConfig",
    "Strategy",
    "TrainingSchedule",
    "Outcome",
    "Verdict",
    "ExperimentSpec",
    "ExperimentReport",
    "run_experiment",
    "__version__",
]
