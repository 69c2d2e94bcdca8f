"""Command-line interface.

Subcommands: augment, filter, train, experiment, bench, report, validate.
Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import runner
from .corpus import (
    DEFAULT_DIM,
    Dataset,
    Origin,
    TrainItem,
    _iter_jsonl,
    build_items,
    import_vectors,
    load_dataset,
    load_lexicon,
    load_thesaurus,
    save_dataset,
)
from .errors import DataError, DimensionMismatch, NumericError, ParseError
from .nnet import TrainConfig, save_model
from .schedule import ScheduleConfig, Strategy, dump_schedule, run_strategy
from .scoring import filter_by_loss
from .textaug import TEXT_METHODS, TextAugConfig, augment_corpus, import_adapter_output
from .vecaug import VEC_METHODS, VecAugConfig, augment_vectors

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; this CLI reserves 2
    # for data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _real_subset(ds: Dataset) -> Dataset:
    real = [s for s in ds.samples if s.origin is Origin.REAL]
    return Dataset(ds.name, ds.num_classes, real)


def _load_aug_vectors(path, num_classes=None):
    """Augmented-vector JSONL: {"id", "vec", "probs"} records."""
    items = []
    dim = None
    for lineno, rec in _iter_jsonl(path):
        try:
            vec = np.asarray(rec["vec"], dtype=float)
            probs = np.asarray(rec["probs"], dtype=float)
            sid = rec["id"]
        except KeyError as exc:
            raise ParseError(path, lineno, f"missing field {exc.args[0]!r}") from exc
        if dim is None:
            dim = vec.shape[0]
        elif vec.shape[0] != dim:
            raise ParseError(path, lineno, f"vector dim {vec.shape[0]} != {dim}")
        if num_classes is not None and probs.shape[0] != num_classes:
            raise ParseError(path, lineno, f"probs length {probs.shape[0]} != {num_classes}")
        if not (np.all(np.isfinite(vec)) and np.all(np.isfinite(probs))):
            raise ParseError(path, lineno, "non-finite entry")
        items.append(TrainItem(id=sid, vec=vec, probs=probs, augmented=True))
    return items


def _cmd_augment(args) -> int:
    ds = load_dataset(args.infile)
    real = _real_subset(ds)
    if args.method in TEXT_METHODS:
        cfg = TextAugConfig(
            method=args.method, alpha=args.alpha, rate=args.rate, seed=args.seed
        )
        thesaurus = load_thesaurus(args.thesaurus) if args.thesaurus else None
        lexicon = load_lexicon(args.lexicon) if args.lexicon else None
        aug = augment_corpus(real, cfg, thesaurus=thesaurus, lexicon=lexicon)
        save_dataset(Dataset(f"{ds.name}-aug", ds.num_classes, aug), args.out)
        print(f"wrote {len(aug)} augmented samples to {args.out}")
        return EXIT_OK
    if args.method in VEC_METHODS:
        if not args.vectors:
            raise DataError(f"--vectors is required for vector method {args.method!r}")
        vectors = import_vectors(args.vectors, ds)
        items = build_items(real, vectors)
        cfg = VecAugConfig(
            method=args.method,
            sigma=args.sigma,
            mixup_alpha=args.mixup_alpha,
            drop_p=args.drop_p,
            rate=args.rate,
            seed=args.seed,
            within_class=args.within_class,
        )
        aug_items = augment_vectors(items, cfg)
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            for it in aug_items:
                parent_id = it.id.rsplit(":", 2)[0]
                fh.write(
                    json.dumps(
                        {
                            "id": it.id,
                            "vec": [float(x) for x in it.vec],
                            "probs": [float(x) for x in it.probs],
                            "method": args.method,
                            "parent_id": parent_id,
                        }
                    )
                    + "\n"
                )
        print(f"wrote {len(aug_items)} augmented vectors to {args.out}")
        return EXIT_OK
    raise DataError(f"unknown method {args.method!r}")


def _read_scores_csv(path) -> dict:
    scores = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if lineno == 1 and row[:2] == ["sample_id", "loss"]:
                continue
            if len(row) < 2:
                raise ParseError(path, lineno, "expected 'sample_id,loss'")
            try:
                scores[row[0]] = float(row[1])
            except ValueError:
                raise ParseError(path, lineno, f"bad loss value {row[1]!r}") from None
    return scores


def _cmd_filter(args) -> int:
    ds = load_dataset(args.infile)
    scores = _read_scores_csv(args.scores)
    real = [s for s in ds.samples if s.origin is Origin.REAL]
    augmented = [s for s in ds.samples if s.origin is Origin.AUGMENTED]
    kept = filter_by_loss(augmented, scores, args.quantile, per_class=args.per_class)
    kept_ids = {s.id for s in kept} | {s.id for s in real}
    out = [s for s in ds.samples if s.id in kept_ids]
    save_dataset(Dataset(f"{ds.name}-filtered", ds.num_classes, out), args.out)
    print(
        f"kept {len(kept)}/{len(augmented)} augmented samples "
        f"(+{len(real)} real passed through) -> {args.out}"
    )
    return EXIT_OK


def _cmd_train(args) -> int:
    ds = load_dataset(args.infile)
    extra = load_dataset(args.aug, num_classes=ds.num_classes) if args.aug else None
    # one id space across --in and --aug, so a single vectors file can
    # cover both and duplicate ids are rejected up front
    id_space = Dataset(
        ds.name, ds.num_classes,
        ds.samples + (extra.samples if extra else []),
    )
    vectors = import_vectors(args.vectors, id_space) if args.vectors else None
    real_ds = _real_subset(ds)
    real_items = build_items(real_ds, vectors, args.dim)

    aug_items = []
    aug_in_main = [s for s in ds.samples if s.origin is Origin.AUGMENTED]
    if aug_in_main:
        aug_sub = Dataset(ds.name, ds.num_classes, aug_in_main)
        aug_items.extend(build_items(aug_sub, vectors, args.dim))
    if extra is not None:
        aug_items.extend(build_items(extra, vectors, args.dim))
    if args.aug_vectors:
        aug_items.extend(_load_aug_vectors(args.aug_vectors, ds.num_classes))
    if real_items and aug_items:
        dim = real_items[0].vec.shape[0]
        for it in aug_items:
            if it.vec.shape[0] != dim:
                raise DimensionMismatch(
                    f"augmented item {it.id!r} has dim {it.vec.shape[0]}, "
                    f"training data has dim {dim}"
                )

    cfg = ScheduleConfig(
        strategy=Strategy(args.strategy),
        epochs=args.epochs,
        ip=args.ip,
        fp=args.fp,
        cycle_alpha=args.cycle_alpha,
        easy_fraction=args.q,
        seed=args.seed,
    )
    train_cfg = TrainConfig(epochs=args.epochs, batch_size=args.batch, seed=args.seed)
    result = run_strategy(real_items, aug_items, cfg, train_cfg)
    save_model(result.model, args.out)
    if args.dump_schedule:
        dump_schedule(result.schedule, args.dump_schedule)
        print(f"schedule -> {args.dump_schedule}")
    print(
        f"trained {args.strategy} on {len(real_items)} real + {len(aug_items)} "
        f"augmented samples -> {args.out}"
    )
    return EXIT_OK


def _cmd_experiment(args) -> int:
    spec = runner.parse_spec_file(args.spec)
    rep = runner.run_experiment(spec, workers=args.workers)
    paths = runner.report([rep], args.out)
    with open(os.path.join(args.out, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(rep.to_json_dict(), fh, indent=2)
        fh.write("\n")
    print(
        f"{rep.name}: {rep.method}@{rep.rate_label} mean={rep.method_mean:.4f} "
        f"vs baseline {rep.baseline_mean:.4f} p={rep.verdict.p_value:.4g} "
        f"-> {rep.verdict.outcome.value}"
    )
    print(f"reports -> {paths['summary']}, {paths['tally']}, {paths['heatmap']}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    ds = load_dataset(args.infile)
    methods = args.methods.split(",") if args.methods else None
    rows = runner.bench_augmenters(ds, methods=methods, repetitions=args.reps)
    for row in rows:
        print(f"{row.method:8s} {row.total_ms:12.3f} ms/pass  {row.ms_per_item:10.5f} ms/item")
    ordering = [r.method for r in sorted(rows, key=lambda r: r.total_ms)]
    print(f"observed ordering on this machine (fastest first): {' < '.join(ordering)}")
    if args.out:
        runner.write_bench_csv(rows, args.out)
        print(f"bench table -> {args.out}")
    return EXIT_OK


def _cmd_report(args) -> int:
    reports = []
    for path in args.infiles:
        with open(path, encoding="utf-8") as fh:
            reports.append(runner.ExperimentReport.from_json_dict(json.load(fh)))
    paths = runner.report(reports, args.out)
    print(f"aggregated {len(reports)} reports -> {paths['summary']}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    ds = load_dataset(args.dataset)
    print(f"dataset: {len(ds)} samples, {ds.num_classes} classes")
    if args.vectors:
        vectors = import_vectors(args.vectors, ds)
        dims = {v.shape[0] for v in vectors.values()}
        dim = dims.pop() if dims else 0
        print(f"vectors: {len(vectors)} records, dim {dim}")
    if args.adapter:
        aug = import_adapter_output(args.adapter, ds)
        print(f"adapter: {len(aug)} augmented samples")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="augmentarium", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("augment", help="generate augmented samples or vectors")
    p.add_argument("--method", required=True, choices=[*TEXT_METHODS, *VEC_METHODS])
    p.add_argument("--in", dest="infile", required=True, help="dataset JSONL")
    p.add_argument("--out", required=True)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--thesaurus", help="thesaurus TSV (sr/ri)")
    p.add_argument("--lexicon", help="word2vec text lexicon (w2v)")
    p.add_argument("--vectors", help="vector JSONL (vector methods)")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--mixup-alpha", type=float, default=0.2)
    p.add_argument("--drop-p", type=float, default=0.1)
    p.add_argument("--within-class", action="store_true")
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("filter", help="keep the lowest-loss augmented samples")
    p.add_argument("--quantile", type=float, required=True)
    p.add_argument("--scores", required=True, help="CSV of sample_id,loss")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--per-class", action="store_true")
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("train", help="train a classifier under a strategy")
    p.add_argument("--in", dest="infile", required=True, help="dataset JSONL")
    p.add_argument("--vectors", help="vector JSONL for the dataset")
    p.add_argument("--aug", help="augmented dataset JSONL")
    p.add_argument("--aug-vectors", help="augmented-vector JSONL (id/vec/probs)")
    p.add_argument("--strategy", default="vanilla",
                   choices=[s.value for s in Strategy])
    p.add_argument("--epochs", "--T", dest="epochs", type=int, default=30)
    p.add_argument("--batch", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=DEFAULT_DIM)
    p.add_argument("--ip", type=float, default=0.25)
    p.add_argument("--fp", type=float, default=1.0)
    p.add_argument("--cycle-alpha", type=float, default=0.25)
    p.add_argument("--q", type=float, default=0.5, help="easy-subset fraction")
    p.add_argument("--out", required=True, help="model checkpoint path")
    p.add_argument("--dump-schedule", help="write epoch plans JSONL")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("experiment", help="run a spec file end to end")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", default="reports")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("bench", help="time the built-in augmenters")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--methods", help="comma-separated subset")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("report", help="aggregate report JSON files into CSVs")
    p.add_argument("--in", dest="infiles", nargs="+", required=True)
    p.add_argument("--out", default="reports")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("validate", help="check files against the loaders")
    p.add_argument("--dataset", required=True)
    p.add_argument("--vectors")
    p.add_argument("--adapter")
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return int(args.func(args) or 0)
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
