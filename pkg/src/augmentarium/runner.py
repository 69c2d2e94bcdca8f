"""Experiment orchestration: repetitions, baseline comparison, timing
benchmarks, and report files.

An experiment runs R repetitions. Repetition r uses seed base_seed + r:
the dataset is split once per repetition and shared by both arms, the
baseline arm trains vanilla on real data only, and the method arm runs
augmentation, optional loss filtering, and the configured sequencing
strategy. Arms with identical configuration are bit-identical by
construction, so a no-op method arm ties its baseline with p = 1.

Report CSVs contain no wall-clock values, so rerunning a spec reproduces
them byte for byte; timings are kept on the report object and in the
JSON report only.
"""

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from statistics import median, stdev

import numpy as np

from .corpus import (
    DEFAULT_DIM,
    Dataset,
    TrainItem,
    build_items,
    featurize,
    import_vectors,
    load_dataset,
    load_lexicon,
    load_thesaurus,
    one_hot,
    stratified_split,
    tokenize,
    Lexicon,
)
from .errors import (
    DataError,
    EmptyInput,
    IoError,
    NumericError,
    ParseError,
    TooFewRuns,
)
from .nnet import TrainConfig, accuracy
from .rng import derive_rng, derive_seed
from .schedule import ScheduleConfig, Strategy, run_strategy
from .scoring import filter_by_loss, score
from .stats import DEFAULT_ALPHA_SIG, Outcome, Verdict, compare, heatmap_value
from .textaug import TEXT_METHODS, TextAugConfig, apply_method, augment_corpus
from .vecaug import (
    VEC_METHODS,
    VecAugConfig,
    augment_vectors,
    draw_mixup_lambda,
    gaussian_noise,
    mixup,
    vec_dropout,
)

WORKERS_ENV = "AUGMENTARIUM_WORKERS"

BENCH_METHODS = ("rd", "ri", "rs", "sr", "w2v", "aeda", "noise", "mixup", "vdrop")


@dataclass
class ExperimentSpec:
    """Everything needed to reproduce one method-vs-baseline comparison."""

    name: str = "experiment"
    dataset_path: str | None = None
    vectors_path: str | None = None
    thesaurus_path: str | None = None
    lexicon_path: str | None = None
    feature_dim: int = DEFAULT_DIM
    train_n: int = 1000
    test_n: int = 4000
    method: str = "none"
    rate: float = 1.0
    alpha: float = 0.1
    sigma: float = 1.0
    mixup_alpha: float = 0.2
    drop_p: float = 0.1
    within_class: bool = False
    filter_q: float | None = None
    strategy: str = "vanilla"
    epochs: int = 30
    batch_size: int = 32
    ip: float = 0.25
    fp: float = 1.0
    cycle_alpha: float = 0.25
    easy_fraction: float = 0.5
    repetitions: int = 20
    base_seed: int = 0
    alpha_sig: float = DEFAULT_ALPHA_SIG

    def __post_init__(self):
        if self.repetitions < 2:
            raise TooFewRuns(f"repetitions must be >= 2, got {self.repetitions}")
        if not 0.0 < self.alpha_sig < 1.0:
            raise DataError(f"alpha_sig must be in (0, 1), got {self.alpha_sig}")
        if self.filter_q is not None and not 0.0 < self.filter_q <= 1.0:
            raise DataError(f"filter_q must be in (0, 1], got {self.filter_q}")
        Strategy(self.strategy)
        if self.method not in ("none", "", *TEXT_METHODS, *VEC_METHODS):
            raise DataError(f"unknown augmentation method {self.method!r}")

    def arm_label(self) -> str:
        method = self.method if self.method not in ("", "none") else "none"
        if self.strategy != Strategy.VANILLA.value:
            return f"{self.strategy}+{method}"
        return method

    def rate_label(self) -> str:
        if self.method in ("", "none"):
            return "0%"
        return f"{int(round(self.rate * 100))}%"


@dataclass
class ExperimentReport:
    name: str
    dataset: str
    method: str
    rate_label: str
    strategy: str
    filter_q: float | None
    repetitions: int
    alpha_sig: float
    baseline_accuracies: list[float]
    method_accuracies: list[float]
    verdict: Verdict
    heatmap: float
    timings: dict = field(default_factory=dict)

    @property
    def baseline_mean(self):
        return sum(self.baseline_accuracies) / len(self.baseline_accuracies)

    @property
    def method_mean(self):
        return sum(self.method_accuracies) / len(self.method_accuracies)

    @property
    def baseline_std(self):
        return stdev(self.baseline_accuracies)

    @property
    def method_std(self):
        return stdev(self.method_accuracies)

    def to_json_dict(self) -> dict:
        out = asdict(self)
        out["verdict"] = {
            "p_value": self.verdict.p_value,
            "mean_diff": self.verdict.mean_diff,
            "outcome": self.verdict.outcome.value,
        }
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "ExperimentReport":
        verdict = Verdict(
            p_value=data["verdict"]["p_value"],
            mean_diff=data["verdict"]["mean_diff"],
            outcome=Outcome(data["verdict"]["outcome"]),
        )
        kwargs = {k: v for k, v in data.items() if k != "verdict"}
        return cls(verdict=verdict, **kwargs)


# ---------------------------------------------------------------------------
# Spec files: flat "key = value" text, '#' starts a comment


_SPEC_ALIASES = {
    "dataset": "dataset_path",
    "vectors": "vectors_path",
    "thesaurus": "thesaurus_path",
    "lexicon": "lexicon_path",
    "t": "epochs",
    "q": "easy_fraction",
    "dim": "feature_dim",
    "filter": "filter_q",
    "seed": "base_seed",
}

_BOOL_VALUES = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _coerce_spec_value(name: str, raw: str):
    int_fields = {"feature_dim", "train_n", "test_n", "epochs", "batch_size",
                  "repetitions", "base_seed"}
    float_fields = {"rate", "alpha", "sigma", "mixup_alpha", "drop_p", "ip", "fp",
                    "cycle_alpha", "easy_fraction", "alpha_sig"}
    if name in int_fields:
        return int(raw)
    if name in float_fields:
        return float(raw)
    if name == "filter_q":
        return None if raw.lower() == "none" else float(raw)
    if name == "within_class":
        try:
            return _BOOL_VALUES[raw.lower()]
        except KeyError:
            raise ValueError(f"expected a boolean, got {raw!r}") from None
    return raw


def spec_from_mapping(mapping: dict, source: str = "<mapping>") -> ExperimentSpec:
    known = {f.name for f in fields(ExperimentSpec)}
    kwargs = {}
    for key, raw in mapping.items():
        name = _SPEC_ALIASES.get(key, key)
        if name not in known:
            raise DataError(f"{source}: unknown spec key {key!r}")
        try:
            kwargs[name] = _coerce_spec_value(name, raw) if isinstance(raw, str) else raw
        except ValueError as exc:
            raise DataError(f"{source}: bad value for {key!r}: {exc}") from exc
    return ExperimentSpec(**kwargs)


def parse_spec_file(path) -> ExperimentSpec:
    """Read a flat key = value spec file (see README for the key list)."""
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(path, lineno, "expected 'key = value'")
            key, _, value = line.partition("=")
            mapping[key.strip().lower()] = value.strip()
    return spec_from_mapping(mapping, source=str(path))


# ---------------------------------------------------------------------------
# The repetition loop


def _build_augmented(spec, train_ds, real_items, vectors, thesaurus, lexicon, seed):
    """The method arm's augmented pool for one repetition."""
    if spec.method in ("", "none"):
        return []
    if spec.method in TEXT_METHODS:
        if vectors is not None:
            raise DataError(
                "text augmentation over imported vectors is not supported in the "
                "core pipeline: augmented texts would have no vectors (use the "
                "built-in featurizer, or export vectors for the augmented file)"
            )
        cfg = TextAugConfig(
            method=spec.method, alpha=spec.alpha, rate=spec.rate, seed=seed
        )
        aug = augment_corpus(train_ds, cfg, thesaurus=thesaurus, lexicon=lexicon)
        return [
            TrainItem(
                id=s.id,
                vec=featurize(s.text, spec.feature_dim),
                probs=one_hot(s.label, train_ds.num_classes),
                augmented=True,
            )
            for s in aug
        ]
    cfg = VecAugConfig(
        method=spec.method,
        sigma=spec.sigma,
        mixup_alpha=spec.mixup_alpha,
        drop_p=spec.drop_p,
        rate=spec.rate,
        seed=seed,
        within_class=spec.within_class,
    )
    return augment_vectors(real_items, cfg)


def _run_repetition(spec, ds, vectors, thesaurus, lexicon, rep: int) -> dict:
    rep_seed = spec.base_seed + rep
    timings = {}

    t0 = time.perf_counter()
    train_ds, test_ds = stratified_split(
        ds, spec.train_n, spec.test_n, derive_seed(rep_seed, "split")
    )
    real_items = build_items(train_ds, vectors, spec.feature_dim)
    test_items = build_items(test_ds, vectors, spec.feature_dim)
    test_X = np.stack([it.vec for it in test_items])
    test_labels = np.asarray([s.label for s in test_ds.samples])
    timings["split"] = time.perf_counter() - t0

    train_cfg = TrainConfig(epochs=spec.epochs, batch_size=spec.batch_size)
    pipe_seed = derive_seed(rep_seed, "pipeline")
    baseline_cfg = ScheduleConfig(
        strategy=Strategy.VANILLA,
        epochs=spec.epochs,
        ip=spec.ip,
        fp=spec.fp,
        cycle_alpha=spec.cycle_alpha,
        easy_fraction=spec.easy_fraction,
        seed=pipe_seed,
    )

    t0 = time.perf_counter()
    baseline = run_strategy(real_items, [], baseline_cfg, train_cfg)
    timings["baseline"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    aug_items = _build_augmented(
        spec, train_ds, real_items, vectors, thesaurus, lexicon,
        derive_seed(rep_seed, "augment"),
    )
    if spec.filter_q is not None and aug_items:
        # the filtering scorer is the vanilla model trained on real data only
        scores = score(baseline.model, aug_items)
        aug_items = filter_by_loss(aug_items, scores, spec.filter_q)
    timings["augment"] = time.perf_counter() - t0

    arm_cfg = ScheduleConfig(
        strategy=Strategy(spec.strategy),
        epochs=spec.epochs,
        ip=spec.ip,
        fp=spec.fp,
        cycle_alpha=spec.cycle_alpha,
        easy_fraction=spec.easy_fraction,
        seed=pipe_seed,
    )
    t0 = time.perf_counter()
    arm = run_strategy(real_items, aug_items, arm_cfg, train_cfg)
    timings["method"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    baseline_acc = accuracy(baseline.model, test_X, test_labels)
    method_acc = accuracy(arm.model, test_X, test_labels)
    timings["eval"] = time.perf_counter() - t0

    aug_ids = {it.id for it in aug_items}
    for plan in baseline.schedule.plans:
        leaked = aug_ids.intersection(plan.sample_ids)
        if leaked:
            raise DataError(f"baseline arm consumed augmented ids: {sorted(leaked)[:3]}")

    return {"baseline": baseline_acc, "method": method_acc, "timings": timings}


def run_experiment(
    spec: ExperimentSpec,
    dataset: Dataset | None = None,
    vectors=None,
    thesaurus=None,
    lexicon=None,
    workers: int | None = None,
) -> ExperimentReport:
    """Run the full method-vs-baseline comparison for one spec.

    ``dataset``/``vectors`` override the spec's file paths for in-memory
    use. Repetitions are independent and may run in parallel (capped by
    the AUGMENTARIUM_WORKERS env var); results do not depend on the
    worker count. A failing repetition aborts the experiment with the
    number of completed repetitions in the error.
    """
    ds = dataset if dataset is not None else load_dataset(spec.dataset_path)
    if vectors is None and spec.vectors_path:
        vectors = import_vectors(spec.vectors_path, ds)
    if thesaurus is None and spec.thesaurus_path:
        thesaurus = load_thesaurus(spec.thesaurus_path)
    if lexicon is None and spec.lexicon_path:
        lexicon = load_lexicon(spec.lexicon_path)

    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or "1")
    workers = max(1, workers)

    results = []
    reps = range(spec.repetitions)

    def one(rep):
        return _run_repetition(spec, ds, vectors, thesaurus, lexicon, rep)

    try:
        if workers == 1:
            for rep in reps:
                results.append(one(rep))
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for result in pool.map(one, reps):
                    results.append(result)
    except (DataError, NumericError) as exc:
        kind = NumericError if isinstance(exc, NumericError) else DataError
        wrapped = kind(
            f"experiment {spec.name!r} aborted after {len(results)} completed "
            f"repetitions: {exc}"
        )
        wrapped.completed = results
        raise wrapped from exc

    baseline_accs = [r["baseline"] for r in results]
    method_accs = [r["method"] for r in results]
    for acc in (*baseline_accs, *method_accs):
        if not 0.0 <= acc <= 1.0:
            raise NumericError(f"accuracy {acc} outside [0, 1]")
    verdict = compare(method_accs, baseline_accs, spec.alpha_sig)
    timings = {}
    for r in results:
        for phase, secs in r["timings"].items():
            timings[phase] = timings.get(phase, 0.0) + secs

    return ExperimentReport(
        name=spec.name,
        dataset=ds.name,
        method=spec.arm_label(),
        rate_label=spec.rate_label(),
        strategy=spec.strategy,
        filter_q=spec.filter_q,
        repetitions=spec.repetitions,
        alpha_sig=spec.alpha_sig,
        baseline_accuracies=baseline_accs,
        method_accuracies=method_accs,
        verdict=verdict,
        heatmap=heatmap_value(verdict),
        timings=timings,
    )


# ---------------------------------------------------------------------------
# Report files


def _write_csv(path, header, rows):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def report(reports, outdir) -> dict:
    """Write summary.csv, tally.csv, and heatmap.csv under ``outdir``.

    summary.csv has one row per report (method arm statistics), tally.csv
    counts wins and losses per method and rate in Table-2 column order,
    and heatmap.csv is the strategy-and-method by dataset matrix of
    signed significance values.
    """
    reports = list(reports)
    if not reports:
        raise EmptyInput("no reports to write")
    os.makedirs(outdir, exist_ok=True)
    paths = {
        "summary": os.path.join(outdir, "summary.csv"),
        "tally": os.path.join(outdir, "tally.csv"),
        "heatmap": os.path.join(outdir, "heatmap.csv"),
    }

    summary_rows = [
        (
            r.dataset,
            r.method,
            r.rate_label,
            repr(r.method_mean),
            repr(r.method_std),
            repr(r.verdict.p_value),
            r.verdict.outcome.value,
            repr(r.heatmap),
        )
        for r in sorted(reports, key=lambda r: (r.dataset, r.method, r.rate_label))
    ]
    _write_csv(
        paths["summary"],
        ["dataset", "method", "aug_rate", "mean", "std", "p", "outcome", "heatmap_value"],
        summary_rows,
    )

    groups: dict[tuple, list] = {}
    for r in reports:
        groups.setdefault((r.method, r.rate_label), []).append(r.verdict)
    tally_rows = []
    for (method, rate), verdicts in sorted(groups.items()):
        wins = sum(1 for v in verdicts if v.outcome is Outcome.WIN)
        losses = sum(1 for v in verdicts if v.outcome is Outcome.LOSS)
        tally_rows.append((method, rate, wins, losses))
    _write_csv(paths["tally"], ["method", "aug_rate", "wins", "losses"], tally_rows)

    datasets = sorted({r.dataset for r in reports})
    cells: dict[str, dict[str, float]] = {}
    for r in reports:
        pair = f"{r.method}@{r.rate_label}"
        cells.setdefault(pair, {})[r.dataset] = r.heatmap
    heatmap_rows = [
        [pair] + [repr(cells[pair].get(d, 0.0)) for d in datasets]
        for pair in sorted(cells)
    ]
    _write_csv(paths["heatmap"], ["pair", *datasets], heatmap_rows)
    return paths


# ---------------------------------------------------------------------------
# Augmenter timing


@dataclass(frozen=True)
class BenchRow:
    method: str
    repetitions: int
    total_ms: float
    ms_per_item: float


def _bench_lexicon(token_lists) -> Lexicon:
    """A deterministic stand-in lexicon built from the corpus vocabulary."""
    vocab = sorted({t for toks in token_lists for t in toks})[:2000]
    while len(vocab) < 2:
        vocab.append(f"pad{len(vocab)}")
    rows = np.stack([featurize(w, 16) for w in vocab])
    return Lexicon(vocab, rows)


def bench_augmenters(
    ds: Dataset,
    methods=None,
    repetitions: int = 5,
    thesaurus=None,
    lexicon=None,
    dim: int = 64,
    seed: int = 0,
) -> list[BenchRow]:
    """Median wall-clock per full corpus pass for each method, in ms.

    One warm-up pass per method is excluded. Word resources default to an
    empty thesaurus (insertion falls back to duplication, replacement to
    the identity) and a hashed-vector lexicon over the corpus vocabulary,
    so every method runs on any corpus. Reported times depend on this
    machine; cross-machine comparisons are structural only.
    """
    if not ds.samples:
        raise EmptyInput("bench corpus is empty")
    methods = list(methods) if methods else list(BENCH_METHODS)
    token_lists = [tokenize(s.text) or ["x"] for s in ds.samples]
    items = build_items(ds, None, dim)
    if thesaurus is None:
        thesaurus = {}
    if lexicon is None:
        lexicon = _bench_lexicon(token_lists)

    def one_pass(method, rng):
        if method in TEXT_METHODS:
            for tokens in token_lists:
                apply_method(
                    method, tokens, rng, alpha=0.1, thesaurus=thesaurus, lexicon=lexicon
                )
        elif method == "noise":
            for it in items:
                gaussian_noise(it.vec, 1.0, rng)
        elif method == "vdrop":
            for it in items:
                vec_dropout(it.vec, 0.1, rng)
        elif method == "mixup":
            for it in items:
                partner = items[int(rng.integers(0, len(items)))]
                lam = draw_mixup_lambda(0.2, rng)
                mixup(it.vec, it.probs, partner.vec, partner.probs, lam)
        else:
            raise DataError(f"unknown bench method {method!r}")

    rows = []
    for method in methods:
        one_pass(method, derive_rng(seed, method, "warmup"))
        times = []
        for rep in range(repetitions):
            rng = derive_rng(seed, method, rep)
            t0 = time.perf_counter()
            one_pass(method, rng)
            times.append((time.perf_counter() - t0) * 1000.0)
        total = float(median(times))
        rows.append(BenchRow(method, repetitions, total, total / len(ds.samples)))
    return rows


def write_bench_csv(rows, path) -> None:
    _write_csv(
        path,
        ["method", "repetitions", "total_ms", "ms_per_item"],
        [(r.method, r.repetitions, repr(r.total_ms), repr(r.ms_per_item)) for r in rows],
    )


__all__ = [
    "WORKERS_ENV",
    "BENCH_METHODS",
    "ExperimentSpec",
    "ExperimentReport",
    "spec_from_mapping",
    "parse_spec_file",
    "run_experiment",
    "report",
    "BenchRow",
    "bench_augmenters",
    "write_bench_csv",
]
