import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from augmentarium.corpus import Lexicon, Origin, preprocess
from augmentarium.errors import EmptyInput, EmptyLexicon, ParseError, UnknownParent
from augmentarium.rng import derive_rng
from augmentarium.textaug import (
    DEFAULT_PUNCTUATION,
    TextAugConfig,
    aeda,
    augment_corpus,
    import_adapter_output,
    random_deletion,
    random_insertion,
    random_swap,
    synonym_replacement,
    w2v_replacement,
)

from _helpers import ReplayRNG, text_dataset

tokens_strategy = st.lists(
    st.text(alphabet="abcdefg", min_size=1, max_size=6), min_size=1, max_size=20
)


# ---------------------------------------------------------------------------
# random deletion


def test_rd_alpha_zero_identity():
    tokens = ["a", "b", "c"]
    assert random_deletion(tokens, 0.0, derive_rng(1)) == tokens


def test_rd_alpha_one_keeps_single_token():
    out = random_deletion(["a", "b", "c"], 1.0, derive_rng(2))
    assert len(out) == 1
    assert out[0] in {"a", "b", "c"}


def test_rd_replayed_stream():
    # uniform draws per token in order: 0.05 < alpha deletes "a"
    rng = ReplayRNG(floats=[0.05, 0.20, 0.80])
    assert random_deletion(["a", "b", "c"], 0.1, rng) == ["b", "c"]
    assert rng.exhausted()


@given(tokens_strategy, st.floats(min_value=0.0, max_value=1.0), st.integers(0, 999))
def test_rd_never_empty(tokens, alpha, seed):
    assert random_deletion(tokens, alpha, derive_rng(seed))


def test_rd_empty_input():
    with pytest.raises(EmptyInput):
        random_deletion([], 0.1, derive_rng(0))


# ---------------------------------------------------------------------------
# random insertion


def test_ri_alpha_zero_identity():
    tokens = ["x", "y"]
    assert random_insertion(tokens, 0.0, {"x": ["z"]}, derive_rng(3)) == tokens


def test_ri_replayed_stream():
    # draws: candidate index, synonym index, insertion slot
    rng = ReplayRNG(ints=[0, 0, 2])
    out = random_insertion(["the", "quick", "fox"], 0.1, {"quick": ["fast"]}, rng)
    assert out == ["the", "quick", "fast", "fox"]
    assert rng.exhausted()


@given(tokens_strategy, st.integers(0, 999))
def test_ri_empty_thesaurus_duplicates(tokens, seed):
    out = random_insertion(tokens, 0.1, {}, derive_rng(seed))
    n = max(1, round(0.1 * len(tokens)))
    assert len(out) == len(tokens) + n
    # every inserted word already occurred in the input
    assert set(out) == set(tokens)


# ---------------------------------------------------------------------------
# random swap


def test_rs_single_token_unchanged():
    assert random_swap(["a"], 0.5, derive_rng(4)) == ["a"]


def test_rs_fixed_index():
    rng = ReplayRNG(ints=[1])
    assert random_swap(["a", "b", "c", "d"], 0.1, rng) == ["a", "c", "b", "d"]


@given(tokens_strategy, st.floats(min_value=0.0, max_value=1.0), st.integers(0, 999))
def test_rs_preserves_multiset(tokens, alpha, seed):
    out = random_swap(tokens, alpha, derive_rng(seed))
    assert sorted(out) == sorted(tokens)


# ---------------------------------------------------------------------------
# synonym replacement


def test_sr_empty_thesaurus_identity():
    tokens = ["big", "dog"]
    assert synonym_replacement(tokens, 0.5, {}, derive_rng(5)) == tokens


def test_sr_single_candidate():
    rng = ReplayRNG(ints=[0, 0])  # position pick, synonym pick
    assert synonym_replacement(["big", "dog"], 0.1, {"big": ["large"]}, rng) == [
        "large",
        "dog",
    ]


@given(tokens_strategy, st.floats(min_value=0.0, max_value=1.0), st.integers(0, 999))
def test_sr_length_preserved(tokens, alpha, seed):
    thesaurus = {t: [t + "x"] for t in tokens[::2]}
    out = synonym_replacement(tokens, alpha, thesaurus, derive_rng(seed))
    assert len(out) == len(tokens)


# ---------------------------------------------------------------------------
# embedding-neighbor replacement


def _lexicon():
    return Lexicon(["a", "b", "c"], np.array([[1.0, 0.0], [0.9, 0.1], [0.0, 1.0]]))


def test_w2v_out_of_vocabulary_identity():
    tokens = ["zz", "yy"]
    assert w2v_replacement(tokens, 0.5, _lexicon(), derive_rng(6)) == tokens


def test_w2v_replaces_with_nearest():
    rng = ReplayRNG(ints=[0])  # only one candidate position to pick
    assert w2v_replacement(["a"], 1.0, _lexicon(), rng) == ["b"]


@given(st.integers(0, 999))
def test_w2v_never_returns_original(seed):
    out = w2v_replacement(["a", "b", "c"], 1.0, _lexicon(), derive_rng(seed))
    assert len(out) == 3
    for before, after in zip(["a", "b", "c"], out):
        assert after != before


def test_w2v_requires_lexicon():
    with pytest.raises(EmptyLexicon):
        w2v_replacement(["a"], 0.1, None, derive_rng(0))


# ---------------------------------------------------------------------------
# aeda


def test_aeda_replayed_stream():
    rng = ReplayRNG(ints=[1, 1, 1])  # n=1, mark ";", slot 1
    out = aeda(["i", "like", "it"], DEFAULT_PUNCTUATION, rng)
    assert out == ["i", ";", "like", "it"]


@given(tokens_strategy, st.integers(0, 999))
def test_aeda_bounds_and_recovery(tokens, seed):
    out = aeda(tokens, DEFAULT_PUNCTUATION, derive_rng(seed))
    inserted = len(out) - len(tokens)
    assert 1 <= inserted <= max(1, len(tokens) // 3)
    recovered = [t for t in out if t not in DEFAULT_PUNCTUATION]
    assert recovered == tokens  # inputs avoid the punctuation alphabet


# ---------------------------------------------------------------------------
# corpus driver


def test_augment_corpus_counts_and_labels():
    ds = text_dataset([0, 1, 0, 1, 1])
    cfg = TextAugConfig(method="rs", rate=3.0, seed=9)
    aug = augment_corpus(ds, cfg)
    assert len(aug) == round(3.0 * len(ds))
    parents = ds.by_id()
    for s in aug:
        assert s.origin is Origin.AUGMENTED
        assert s.method == "rs"
        assert s.label == parents[s.parent_id].label


def test_augment_corpus_deterministic_and_canonically_ordered():
    ds = text_dataset([0, 1] * 10)
    cfg = TextAugConfig(method="rd", rate=1.5, seed=4)
    a = augment_corpus(ds, cfg)
    b = augment_corpus(ds, cfg)
    assert a == b
    keys = [(s.parent_id, s.id) for s in a]
    assert keys == sorted(keys)


@pytest.mark.parametrize("rate,n,expected", [(1.0, 7, 7), (3.0, 5, 15), (0.5, 5, 2)])
def test_augment_corpus_rate_rounding(rate, n, expected):
    ds = text_dataset([i % 2 for i in range(n)])
    cfg = TextAugConfig(method="aeda", rate=rate, seed=0)
    assert len(augment_corpus(ds, cfg)) == expected


def test_augment_corpus_output_is_preprocessed():
    ds = text_dataset([0, 1])
    cfg = TextAugConfig(method="ri", rate=2.0, seed=1)
    for s in augment_corpus(ds, cfg, thesaurus={"alpha": ["A" * 400]}):
        assert s.text == preprocess(s.text)


def test_config_validation():
    with pytest.raises(ValueError):
        TextAugConfig(method="nope")
    with pytest.raises(ValueError):
        TextAugConfig(method="rd", alpha=1.5)
    with pytest.raises(ValueError):
        TextAugConfig(method="aeda", punctuation=())


# ---------------------------------------------------------------------------
# adapter import


def test_adapter_unknown_parent(tmp_path):
    ds = text_dataset([0, 1])
    path = tmp_path / "adapter.jsonl"
    path.write_text(
        '{"parent_id":"ghost","method":"back_tr","text":"hello"}\n', encoding="utf-8"
    )
    with pytest.raises(UnknownParent):
        import_adapter_output(path, ds)


def test_adapter_label_inheritance(tmp_path):
    ds = text_dataset([2, 0, 1], num_classes=3)
    path = tmp_path / "adapter.jsonl"
    path.write_text(
        '{"parent_id":"s0000","method":"back_tr","text":"Hello Again"}\n',
        encoding="utf-8",
    )
    out = import_adapter_output(path, ds)
    assert len(out) == 1
    assert out[0].label == 2
    assert out[0].text == "hello again"
    assert out[0].parent_id == "s0000"


def test_adapter_round_trip_count(tmp_path):
    ds = text_dataset([0, 1, 0, 1])
    path = tmp_path / "adapter.jsonl"
    lines = [
        {"parent_id": s.id, "method": "gpt_gen", "text": s.text + " more"}
        for s in ds.samples
        for _ in range(2)
    ]
    import json

    path.write_text(
        "".join(json.dumps(rec) + "\n" for rec in lines), encoding="utf-8"
    )
    out = import_adapter_output(path, ds)
    assert len(out) == len(lines)
    assert len({s.id for s in out}) == len(lines)


def test_adapter_rejects_missing_field(tmp_path):
    ds = text_dataset([0, 1])
    path = tmp_path / "adapter.jsonl"
    path.write_text('{"parent_id":"s0000","text":"x"}\n', encoding="utf-8")
    with pytest.raises(ParseError):
        import_adapter_output(path, ds)
