"""Dataset ingestion, preprocessing, stratified splits, and featurization.

File formats (all UTF-8, LF line endings):

* Dataset JSONL: one object per line with fields ``id`` (str), ``text``
  (str), ``label`` (int, 0-based) and optional ``origin`` ("real" or
  "augmented"), ``method``, ``parent_id``.
* Vector JSONL: ``{"id": str, "vec": [float, ...]}``, constant vector
  length across the file.
* Thesaurus TSV: ``word<TAB>syn1,syn2,...``, one lowercase headword per
  line.
* Embedding lexicon: word2vec text format, first line ``<count> <dim>``,
  then ``word v1 ... v_dim`` per line.

Texts are normalized on load: lowercased, then truncated to the first
300 Unicode scalar values. The built-in featurizer is a signed hashed
bag of words over whitespace tokens, L2-normalized, so the pipeline runs
end to end without any external embedding model; precomputed vectors can
be imported for fidelity.
"""

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import (
    DataError,
    DimensionMismatch,
    InsufficientSamples,
    InvalidSizes,
    MissingVector,
    ParseError,
    UnknownId,
)
from .rng import derive_rng

MAX_CHARS = 300
DEFAULT_DIM = 512


def preprocess(text: str) -> str:
    """Lowercase, then keep the first 300 characters. Idempotent."""
    return text.lower()[:MAX_CHARS]


def tokenize(text: str) -> list[str]:
    """Whitespace tokens of the preprocessed text; punctuation stays attached."""
    return preprocess(text).split()


class Origin(str, Enum):
    REAL = "real"
    AUGMENTED = "augmented"


@dataclass(frozen=True)
class Sample:
    """One labeled text instance with augmentation provenance."""

    id: str
    text: str
    label: int
    origin: Origin = Origin.REAL
    method: str = ""
    parent_id: str = ""

    def __post_init__(self):
        if self.origin is Origin.REAL and (self.method or self.parent_id):
            raise DataError(
                f"sample {self.id!r}: real samples must have empty method and parent_id"
            )
        if self.origin is Origin.AUGMENTED and not (self.method and self.parent_id):
            raise DataError(
                f"sample {self.id!r}: augmented samples need method and parent_id"
            )
        if self.label < 0:
            raise DataError(f"sample {self.id!r}: negative label {self.label}")


@dataclass
class Dataset:
    name: str
    num_classes: int
    samples: list[Sample] = field(default_factory=list)

    def __post_init__(self):
        if self.num_classes < 1:
            raise DataError(f"dataset {self.name!r}: num_classes must be positive")
        seen = set()
        for s in self.samples:
            if s.id in seen:
                raise DataError(f"dataset {self.name!r}: duplicate id {s.id!r}")
            seen.add(s.id)
            if not 0 <= s.label < self.num_classes:
                raise DataError(
                    f"dataset {self.name!r}: label {s.label} of {s.id!r} "
                    f"outside [0, {self.num_classes})"
                )

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def by_id(self) -> dict[str, Sample]:
        return {s.id: s for s in self.samples}


def _largest_remainder(counts: list[int], total: int) -> list[int]:
    """Apportion ``total`` across classes proportionally to ``counts``.

    Floors the exact quotas, then hands the leftover units to the classes
    with the largest fractional remainders; ties go to the lower class
    index. Quotas are exact rationals so equal remainders really tie.
    """
    n = sum(counts)
    quotas = [Fraction(total * c, n) for c in counts]
    out = [int(q) for q in quotas]
    leftover = total - sum(out)
    order = sorted(range(len(counts)), key=lambda c: (-(quotas[c] - out[c]), c))
    for c in order[:leftover]:
        out[c] += 1
    return out


def stratified_split(
    ds: Dataset, train_n: int, test_n: int, seed: int
) -> tuple[Dataset, Dataset]:
    """Disjoint train/test split preserving the class distribution.

    Per-class counts use largest-remainder rounding of the dataset's class
    proportions. Deterministic for a fixed seed; sample order within each
    split follows the original dataset order.
    """
    if train_n < 0 or test_n < 0:
        raise InvalidSizes("split sizes must be nonnegative")
    if train_n + test_n > len(ds):
        raise InvalidSizes(
            f"train_n + test_n = {train_n + test_n} exceeds dataset size {len(ds)}"
        )
    by_class: dict[int, list[int]] = {c: [] for c in range(ds.num_classes)}
    for idx, s in enumerate(ds.samples):
        by_class[s.label].append(idx)
    counts = [len(by_class[c]) for c in range(ds.num_classes)]
    if min(counts) == 0:
        empty = counts.index(0)
        raise InsufficientSamples(f"class {empty} has no samples")

    train_quota = _largest_remainder(counts, train_n)
    test_quota = _largest_remainder(counts, test_n)
    rng = derive_rng(seed, "stratified-split")
    train_idx: list[int] = []
    test_idx: list[int] = []
    for c in range(ds.num_classes):
        need = train_quota[c] + test_quota[c]
        members = by_class[c]
        if need > len(members):
            raise InsufficientSamples(
                f"class {c} has {len(members)} samples but the split needs {need}"
            )
        order = rng.permutation(len(members))
        picked = [members[i] for i in order]
        train_idx.extend(picked[: train_quota[c]])
        test_idx.extend(picked[train_quota[c] : need])

    train = [ds.samples[i] for i in sorted(train_idx)]
    test = [ds.samples[i] for i in sorted(test_idx)]
    return (
        Dataset(f"{ds.name}-train", ds.num_classes, train),
        Dataset(f"{ds.name}-test", ds.num_classes, test),
    )


def featurize(text: str, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Signed hashed bag-of-words vector of the preprocessed text.

    Each whitespace token is hashed to a bucket in [0, dim) with a sign in
    {-1, +1}; the result is L2-normalized unless all-zero. Deterministic
    across processes (no RNG, no salted hashing).
    """
    if dim < 2:
        raise DataError(f"feature dim must be >= 2, got {dim}")
    vec = np.zeros(dim)
    for token in tokenize(text):
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=9).digest()
        bucket = int.from_bytes(digest[:8], "big") % dim
        sign = 1.0 if digest[8] & 1 == 0 else -1.0
        vec[bucket] += sign
    norm = float(np.linalg.norm(vec))
    if norm > 0.0:
        vec /= norm
    return vec


# ---------------------------------------------------------------------------
# JSONL datasets and vectors


def _iter_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(rec, dict):
                raise ParseError(path, lineno, "expected a JSON object")
            yield lineno, rec


def load_dataset(path, fmt: str = "jsonl", name=None, num_classes=None) -> Dataset:
    """Read a dataset JSONL file; texts are preprocessed on load."""
    if fmt != "jsonl":
        raise DataError(f"unsupported dataset format {fmt!r}")
    samples = []
    max_label = -1
    for lineno, rec in _iter_jsonl(path):
        try:
            sid = rec["id"]
            text = rec["text"]
            label = rec["label"]
        except KeyError as exc:
            raise ParseError(path, lineno, f"missing field {exc.args[0]!r}") from exc
        if not isinstance(sid, str) or not isinstance(text, str):
            raise ParseError(path, lineno, "id and text must be strings")
        if not isinstance(label, int) or isinstance(label, bool):
            raise ParseError(path, lineno, "label must be an integer")
        origin_raw = rec.get("origin", "real")
        try:
            origin = Origin(origin_raw)
        except ValueError:
            raise ParseError(path, lineno, f"unknown origin {origin_raw!r}") from None
        try:
            sample = Sample(
                id=sid,
                text=preprocess(text),
                label=label,
                origin=origin,
                method=rec.get("method", ""),
                parent_id=rec.get("parent_id", ""),
            )
        except DataError as exc:
            raise ParseError(path, lineno, str(exc)) from exc
        samples.append(sample)
        max_label = max(max_label, label)
    if num_classes is None:
        num_classes = max_label + 1
    if name is None:
        name = str(path)
    try:
        return Dataset(name, num_classes, samples)
    except DataError as exc:
        raise ParseError(path, 0, str(exc)) from exc


def save_dataset(ds: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for s in ds.samples:
            rec = {"id": s.id, "text": s.text, "label": s.label}
            if s.origin is Origin.AUGMENTED:
                rec["origin"] = s.origin.value
                rec["method"] = s.method
                rec["parent_id"] = s.parent_id
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def import_vectors(path, ds: Dataset) -> dict[str, np.ndarray]:
    """Read vector JSONL and match records to ``ds`` by id.

    Enforces one shared dimension across the file and rejects ids that do
    not occur in the dataset.
    """
    known = {s.id for s in ds.samples}
    vectors: dict[str, np.ndarray] = {}
    dim = None
    for lineno, rec in _iter_jsonl(path):
        try:
            sid = rec["id"]
            raw = rec["vec"]
        except KeyError as exc:
            raise ParseError(path, lineno, f"missing field {exc.args[0]!r}") from exc
        if not isinstance(sid, str) or not isinstance(raw, list):
            raise ParseError(path, lineno, "expected string id and list vec")
        if sid not in known:
            raise UnknownId(f"{path}:{lineno}: vector id {sid!r} has no sample")
        vec = np.asarray(raw, dtype=float)
        if vec.ndim != 1:
            raise ParseError(path, lineno, "vec must be a flat list of numbers")
        if not np.all(np.isfinite(vec)):
            raise ParseError(path, lineno, f"non-finite entry in vector {sid!r}")
        if dim is None:
            dim = vec.shape[0]
        elif vec.shape[0] != dim:
            raise DimensionMismatch(
                f"{path}:{lineno}: vector {sid!r} has dim {vec.shape[0]}, expected {dim}"
            )
        vectors[sid] = vec
    return vectors


def save_vectors(vectors: dict[str, np.ndarray], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for sid, vec in vectors.items():
            fh.write(json.dumps({"id": sid, "vec": [float(x) for x in vec]}) + "\n")


# ---------------------------------------------------------------------------
# Word resources


def load_thesaurus(path) -> dict[str, list[str]]:
    """Read a thesaurus TSV into a word -> synonyms mapping (lowercased)."""
    table: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if "\t" not in line:
                raise ParseError(path, lineno, "expected word<TAB>syn1,syn2,...")
            word, _, rest = line.partition("\t")
            syns = [s.strip().lower() for s in rest.split(",") if s.strip()]
            if not word.strip():
                raise ParseError(path, lineno, "empty headword")
            table[word.strip().lower()] = syns
    return table


class Lexicon:
    """Word-embedding table with cosine nearest-neighbor lookup.

    Rows are indexed in file order; cosine ties resolve to the earliest
    row, so lookups are deterministic.
    """

    def __init__(self, words, matrix):
        self.words = list(words)
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise DataError("lexicon contains duplicate words")
        self.matrix = np.asarray(matrix, dtype=float)
        if self.matrix.shape[0] != len(self.words):
            raise DimensionMismatch("lexicon row count does not match word count")
        norms = np.linalg.norm(self.matrix, axis=1)
        self._unit = self.matrix / np.where(norms > 0, norms, 1.0)[:, None]

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self.index

    def vector(self, word) -> np.ndarray:
        return self.matrix[self.index[word]]

    def nearest(self, word):
        """Cosine-nearest word distinct from ``word``; None if alone."""
        if len(self.words) < 2:
            return None
        i = self.index[word]
        sims = self._unit @ self._unit[i]
        sims[i] = -np.inf
        return self.words[int(np.argmax(sims))]


def load_lexicon(path) -> Lexicon:
    """Read a word2vec-format text file into a Lexicon."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError(path, 1, "expected header '<count> <dim>'")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError(path, 1, "header fields must be integers") from None
        words = []
        rows = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != dim + 1:
                raise DimensionMismatch(
                    f"{path}:{lineno}: expected {dim} components, got {len(parts) - 1}"
                )
            words.append(parts[0])
            try:
                rows.append([float(x) for x in parts[1:]])
            except ValueError:
                raise ParseError(path, lineno, "non-numeric vector component") from None
    if len(words) != count:
        raise ParseError(path, 0, f"header claims {count} words, file has {len(words)}")
    return Lexicon(words, np.asarray(rows))


def save_lexicon(lex: Lexicon, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(lex)} {lex.matrix.shape[1]}\n")
        for word, row in zip(lex.words, lex.matrix):
            fh.write(word + " " + " ".join(repr(float(x)) for x in row) + "\n")


# ---------------------------------------------------------------------------
# Training items: the vectorized view shared by the training pipeline


@dataclass(frozen=True)
class TrainItem:
    """A sample ready for training: feature vector plus soft label."""

    id: str
    vec: np.ndarray
    probs: np.ndarray
    augmented: bool = False


def one_hot(label: int, num_classes: int) -> np.ndarray:
    probs = np.zeros(num_classes)
    probs[label] = 1.0
    return probs


def build_items(
    ds: Dataset, vectors: dict[str, np.ndarray] | None = None, dim: int = DEFAULT_DIM
) -> list[TrainItem]:
    """Vectorize a dataset with imported vectors or the built-in featurizer."""
    items = []
    for s in ds.samples:
        if vectors is not None:
            if s.id not in vectors:
                raise MissingVector(f"no vector for sample {s.id!r}")
            vec = vectors[s.id]
        else:
            vec = featurize(s.text, dim)
        items.append(
            TrainItem(
                id=s.id,
                vec=vec,
                probs=one_hot(s.label, ds.num_classes),
                augmented=s.origin is Origin.AUGMENTED,
            )
        )
    return items


__all__ = [
    "MAX_CHARS",
    "DEFAULT_DIM",
    "Origin",
    "Sample",
    "Dataset",
    "TrainItem",
    "Lexicon",
    "preprocess",
    "tokenize",
    "stratified_split",
    "featurize",
    "load_dataset",
    "save_dataset",
    "import_vectors",
    "save_vectors",
    "load_thesaurus",
    "load_lexicon",
    "save_lexicon",
    "one_hot",
    "build_items",
]
