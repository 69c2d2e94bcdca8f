"""Token-level augmentation and the adapter import path.

Six model-free methods operate on token lists: random deletion (rd),
random insertion (ri), random swap of adjacent tokens (rs), synonym
replacement (sr), embedding-neighbor replacement (w2v), and punctuation
insertion (aeda). Externally generated augmentations (back-translation,
mask filling, generative continuation) enter through ``import_adapter_output``.

Every operation takes an explicit RNG and draws in a fixed order, so
corpora regenerate deterministically and tests can replay recorded
streams. The corpus driver derives one substream per (parent, replica)
pair; its output order is canonical regardless of execution order.
"""

from collections import defaultdict
from dataclasses import dataclass

from .corpus import Dataset, Lexicon, Origin, Sample, _iter_jsonl, preprocess, tokenize
from .errors import EmptyInput, EmptyLexicon, ParseError, UnknownParent
from .rng import derive_rng

TEXT_METHODS = ("rd", "ri", "rs", "sr", "w2v", "aeda")

DEFAULT_PUNCTUATION = (".", ";", "?", ":", "!", ",")


@dataclass(frozen=True)
class TextAugConfig:
    """Settings for one augmentation pass.

    ``alpha`` is the per-word operation rate; ``rate`` is the size of the
    augmented set as a fraction of the real training set (3.0 = 300%).
    """

    method: str
    alpha: float = 0.1
    rate: float = 1.0
    seed: int = 0
    punctuation: tuple[str, ...] = DEFAULT_PUNCTUATION

    def __post_init__(self):
        if self.method not in TEXT_METHODS:
            raise ValueError(f"unknown text method {self.method!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.rate <= 0.0:
            raise ValueError(f"rate must be positive, got {self.rate}")
        if self.method == "aeda" and not self.punctuation:
            raise ValueError("aeda needs a nonempty punctuation set")


def _require_tokens(tokens):
    if not tokens:
        raise EmptyInput("token list is empty")


def _op_count(alpha: float, length: int) -> int:
    return max(1, round(alpha * length))


def _sample_indices(candidates, k, rng):
    """k distinct elements via partial Fisher-Yates on a copy."""
    pool = list(candidates)
    for i in range(k):
        j = i + int(rng.integers(0, len(pool) - i))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k]


def random_deletion(tokens, alpha, rng):
    """Drop each token with probability alpha; never returns empty.

    One uniform draw per token, in order. If everything would be deleted,
    a uniformly random token is kept instead.
    """
    _require_tokens(tokens)
    kept = [t for t in tokens if rng.random() >= alpha]
    if kept:
        return kept
    return [tokens[int(rng.integers(0, len(tokens)))]]


def random_insertion(tokens, alpha, thesaurus, rng):
    """Insert max(1, round(alpha*len)) words; alpha=0 is the identity.

    Each insertion picks a random position whose token has synonyms and
    inserts a random synonym at a random slot; with no synonym-bearing
    token, a random existing token is duplicated instead.
    """
    _require_tokens(tokens)
    out = list(tokens)
    if alpha == 0.0:
        return out
    for _ in range(_op_count(alpha, len(tokens))):
        candidates = [i for i, t in enumerate(out) if thesaurus.get(t)]
        if candidates:
            pos = candidates[int(rng.integers(0, len(candidates)))]
            synonyms = thesaurus[out[pos]]
            word = synonyms[int(rng.integers(0, len(synonyms)))]
        else:
            word = out[int(rng.integers(0, len(out)))]
        out.insert(int(rng.integers(0, len(out) + 1)), word)
    return out


def random_swap(tokens, alpha, rng):
    """Swap max(1, round(alpha*len)) adjacent pairs; multiset preserved."""
    _require_tokens(tokens)
    out = list(tokens)
    if len(out) < 2:
        return out
    for _ in range(_op_count(alpha, len(out))):
        i = int(rng.integers(0, len(out) - 1))
        out[i], out[i + 1] = out[i + 1], out[i]
    return out


def synonym_replacement(tokens, alpha, thesaurus, rng):
    """Replace up to max(1, round(alpha*len)) tokens by random synonyms.

    Only positions with a thesaurus entry are eligible; length never
    changes.
    """
    _require_tokens(tokens)
    out = list(tokens)
    candidates = [i for i, t in enumerate(out) if thesaurus.get(t)]
    k = min(_op_count(alpha, len(out)), len(candidates))
    for pos in sorted(_sample_indices(candidates, k, rng)):
        synonyms = thesaurus[out[pos]]
        out[pos] = synonyms[int(rng.integers(0, len(synonyms)))]
    return out


def w2v_replacement(tokens, alpha, lexicon: Lexicon, rng):
    """Replace up to max(1, round(alpha*len)) in-vocabulary tokens by their
    cosine-nearest lexicon neighbor (never the original word).

    Out-of-vocabulary positions are skipped; length never changes.
    """
    _require_tokens(tokens)
    if lexicon is None or len(lexicon) == 0:
        raise EmptyLexicon("w2v replacement needs a nonempty lexicon")
    out = list(tokens)
    candidates = [i for i, t in enumerate(out) if t in lexicon]
    k = min(_op_count(alpha, len(out)), len(candidates))
    for pos in sorted(_sample_indices(candidates, k, rng)):
        neighbor = lexicon.nearest(out[pos])
        if neighbor is not None:
            out[pos] = neighbor
    return out


def aeda(tokens, punctuation, rng):
    """Insert n random punctuation marks, n uniform in [1, max(1, len//3)].

    Marks become standalone tokens; the original tokens keep their order.
    Draw order: n, then (mark, position) per insertion.
    """
    _require_tokens(tokens)
    if not punctuation:
        raise ValueError("punctuation set is empty")
    n = int(rng.integers(1, max(1, len(tokens) // 3) + 1))
    out = list(tokens)
    for _ in range(n):
        mark = punctuation[int(rng.integers(0, len(punctuation)))]
        out.insert(int(rng.integers(0, len(out) + 1)), mark)
    return out


def apply_method(method, tokens, rng, *, alpha=0.1, thesaurus=None,
                 lexicon=None, punctuation=DEFAULT_PUNCTUATION):
    """Dispatch one augmentation method on a token list."""
    if method == "rd":
        return random_deletion(tokens, alpha, rng)
    if method == "ri":
        return random_insertion(tokens, alpha, thesaurus or {}, rng)
    if method == "rs":
        return random_swap(tokens, alpha, rng)
    if method == "sr":
        return synonym_replacement(tokens, alpha, thesaurus or {}, rng)
    if method == "w2v":
        return w2v_replacement(tokens, alpha, lexicon, rng)
    if method == "aeda":
        return aeda(tokens, punctuation, rng)
    raise ValueError(f"unknown text method {method!r}")


def augment_corpus(real: Dataset, config: TextAugConfig, *, thesaurus=None,
                   lexicon=None) -> list[Sample]:
    """Generate round(rate * |real|) augmented samples from real parents.

    Parents are sampled uniformly with replacement; each (parent, replica)
    pair gets its own derived RNG substream, and output is sorted by
    (parent_id, replica) so the result does not depend on execution order.
    Labels are inherited and augmented texts are re-preprocessed.
    """
    if not real.samples:
        raise EmptyInput("real dataset is empty")
    count = round(config.rate * len(real.samples))
    picker = derive_rng(config.seed, "parents")
    replica: dict[str, int] = defaultdict(int)
    jobs = []
    for _ in range(count):
        parent = real.samples[int(picker.integers(0, len(real.samples)))]
        jobs.append((parent, replica[parent.id]))
        replica[parent.id] += 1
    jobs.sort(key=lambda job: (job[0].id, job[1]))

    out = []
    for parent, k in jobs:
        rng = derive_rng(config.seed, parent.id, k)
        tokens = tokenize(parent.text)
        if tokens:
            tokens = apply_method(
                config.method,
                tokens,
                rng,
                alpha=config.alpha,
                thesaurus=thesaurus,
                lexicon=lexicon,
                punctuation=config.punctuation,
            )
            text = preprocess(" ".join(tokens))
        else:
            # a parent with no tokens passes through unchanged
            text = parent.text
        out.append(
            Sample(
                id=f"{parent.id}:{config.method}:{k}",
                text=text,
                label=parent.label,
                origin=Origin.AUGMENTED,
                method=config.method,
                parent_id=parent.id,
            )
        )
    return out


def import_adapter_output(path, real: Dataset) -> list[Sample]:
    """Read adapter JSONL records and attach them to their real parents.

    Each record ``{"parent_id", "method", "text"}`` becomes an augmented
    sample with the parent's label; texts are preprocessed. Unknown
    parents are rejected.
    """
    parents = {s.id: s for s in real.samples if s.origin is Origin.REAL}
    counters: dict[tuple[str, str], int] = defaultdict(int)
    out = []
    for lineno, rec in _iter_jsonl(path):
        try:
            parent_id = rec["parent_id"]
            method = rec["method"]
            text = rec["text"]
        except KeyError as exc:
            raise ParseError(path, lineno, f"missing field {exc.args[0]!r}") from exc
        if not all(isinstance(x, str) for x in (parent_id, method, text)):
            raise ParseError(path, lineno, "parent_id, method, text must be strings")
        if not method:
            raise ParseError(path, lineno, "method must be nonempty")
        parent = parents.get(parent_id)
        if parent is None:
            raise UnknownParent(
                f"{path}:{lineno}: parent {parent_id!r} not in the real dataset"
            )
        k = counters[(parent_id, method)]
        counters[(parent_id, method)] += 1
        out.append(
            Sample(
                id=f"{parent_id}:{method}:{k}",
                text=preprocess(text),
                label=parent.label,
                origin=Origin.AUGMENTED,
                method=method,
                parent_id=parent_id,
            )
        )
    return out


__all__ = [
    "TEXT_METHODS",
    "DEFAULT_PUNCTUATION",
    "TextAugConfig",
    "random_deletion",
    "random_insertion",
    "random_swap",
    "synonym_replacement",
    "w2v_replacement",
    "aeda",
    "apply_method",
    "augment_corpus",
    "import_adapter_output",
]
