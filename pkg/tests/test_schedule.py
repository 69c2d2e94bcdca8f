import math
from statistics import fmean

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from augmentarium.corpus import TrainItem, one_hot
from augmentarium.errors import EmptyPool, MissingScore
from augmentarium.nnet import TrainConfig, accuracy
from augmentarium.rng import derive_rng
from augmentarium.schedule import (
    ScheduleConfig,
    Strategy,
    build_schedule,
    ccl_pipeline,
    cycle_fractions,
    mccl_pipeline,
    run_strategy,
)
from augmentarium.vecaug import VecAugConfig, augment_vectors


def _cfg(strategy, epochs=6, seed=0, **kw):
    return ScheduleConfig(strategy=strategy, epochs=epochs, seed=seed, **kw)


REAL = [f"r{i}" for i in range(6)]
AUG = [f"a{i}" for i in range(4)]
SCORES = {sid: float(i) for i, sid in enumerate([*REAL, *AUG])}


# ---------------------------------------------------------------------------
# the size cycle


def test_cycle_fractions_reference_sequence():
    fractions = cycle_fractions(0.25, 1.0, 0.25, 8)
    assert fractions == [0.25, 0.50, 0.75, 1.00, 0.75, 0.50, 0.25, 0.50]


def test_cycle_fractions_clips_at_endpoints():
    fractions = cycle_fractions(0.3, 1.0, 0.25, 9)
    assert fractions == [0.3, 0.55, 0.8, 1.0, 0.75, 0.5, 0.3, 0.55, 0.8]


def test_cycle_fractions_degenerate_flat():
    assert cycle_fractions(0.6, 0.6, 0.25, 4) == [0.6] * 4


def _cycle_oracle(ip, fp, alpha, epochs):
    """Independent enumeration: walk the triangle wave state machine."""
    values = []
    current, ascending = ip, True
    for _ in range(epochs):
        values.append(current)
        step = alpha if ascending else -alpha
        nxt = current + step
        if ascending and nxt >= fp - 1e-12:
            nxt = fp
            ascending = False
        elif not ascending and nxt <= ip + 1e-12:
            nxt = ip
            ascending = True
        current = nxt
    return values


@settings(deadline=None, max_examples=60)
@given(
    st.floats(min_value=0.05, max_value=1.0),
    st.floats(min_value=0.0, max_value=0.95),
    st.floats(min_value=0.01, max_value=0.6),
    st.integers(min_value=1, max_value=40),
)
def test_cycle_fractions_match_oracle(ip, span, alpha, epochs):
    fp = min(1.0, ip + span)
    got = cycle_fractions(ip, fp, alpha, epochs)
    assert got == _cycle_oracle(ip, fp, alpha, epochs)
    for f in got:
        assert ip - 1e-12 <= f <= fp + 1e-12


def test_cycle_fraction_steps_are_alpha_except_clips():
    ip, fp, alpha = 0.25, 1.0, 0.25
    fractions = cycle_fractions(ip, fp, alpha, 20)
    for prev, nxt in zip(fractions, fractions[1:]):
        if prev not in (ip, fp) and nxt not in (ip, fp):
            assert abs(abs(nxt - prev) - alpha) <= 1e-12


# ---------------------------------------------------------------------------
# schedule construction


def test_vanilla_all_epochs_full_pool():
    sched = build_schedule(_cfg(Strategy.VANILLA, epochs=3), REAL[:5], [], {})
    assert len(sched.plans) == 3
    for plan in sched.plans:
        assert sorted(plan.sample_ids) == sorted(REAL[:5])


def test_adf_orders_augmented_first():
    sched = build_schedule(_cfg(Strategy.ADF, epochs=5), REAL, AUG, {})
    for plan in sched.plans[:3]:  # ceil(5/2) = 3
        assert set(plan.sample_ids) == set(AUG)
    for plan in sched.plans[3:]:
        assert set(plan.sample_ids) == set(REAL)


def test_ada_orders_augmented_after():
    sched = build_schedule(_cfg(Strategy.ADA, epochs=4), REAL, AUG, {})
    for plan in sched.plans[:2]:
        assert set(plan.sample_ids) == set(REAL)
    for plan in sched.plans[2:]:
        assert set(plan.sample_ids) == set(AUG)


def test_adm_real_aug_real_blocks():
    sched = build_schedule(_cfg(Strategy.ADM, epochs=7), REAL, AUG, {})
    pools = [set(plan.sample_ids) for plan in sched.plans]
    third = math.ceil(7 / 3)  # 3
    assert pools[:third] == [set(REAL)] * third
    assert pools[third : 2 * third] == [set(AUG)] * third
    assert pools[2 * third :] == [set(REAL)] * (7 - 2 * third)


@pytest.mark.parametrize("strategy", [Strategy.ADF, Strategy.ADA, Strategy.ADM])
def test_aug_phase_strategies_need_augmented_data(strategy):
    with pytest.raises(EmptyPool):
        build_schedule(_cfg(strategy), REAL, [], {})


def test_cl_easiest_then_mixed():
    losses = {"a": 0.1, "b": 0.2, "c": 0.9, "d": 1.0}
    cfg = _cfg(Strategy.CL, epochs=4, easy_fraction=0.5)
    sched = build_schedule(cfg, ["a", "b", "c", "d"], [], losses)
    assert set(sched.plans[0].sample_ids) == {"a", "b"}
    assert set(sched.plans[1].sample_ids) == {"a", "b"}
    assert set(sched.plans[2].sample_ids) == {"a", "b", "c", "d"}
    assert set(sched.plans[3].sample_ids) == {"a", "b", "c", "d"}


def test_anticl_hardest_then_mixed():
    losses = {"a": 0.1, "b": 0.2, "c": 0.9, "d": 1.0}
    cfg = _cfg(Strategy.ANTICL, epochs=4, easy_fraction=0.5)
    sched = build_schedule(cfg, ["a", "b", "c", "d"], [], losses)
    assert set(sched.plans[0].sample_ids) == {"c", "d"}
    assert set(sched.plans[2].sample_ids) == {"a", "b", "c", "d"}


def test_cl_epoch0_equals_brute_force_lowest_losses():
    rng = derive_rng(404)
    ids = [f"s{i}" for i in range(30)]
    losses = {sid: float(rng.random()) for sid in ids}
    cfg = _cfg(Strategy.CL, epochs=2, easy_fraction=0.4)
    sched = build_schedule(cfg, ids, [], losses)
    k = math.ceil(0.4 * len(ids))
    expected = set(sorted(ids, key=lambda s: losses[s])[:k])
    assert set(sched.plans[0].sample_ids) == expected


def test_randcl_subset_size_and_consistency():
    cfg = _cfg(Strategy.RANDCL, epochs=6, easy_fraction=0.5)
    sched = build_schedule(cfg, REAL, AUG, {})
    k = math.ceil(0.5 * (len(REAL) + len(AUG)))
    first = set(sched.plans[0].sample_ids)
    assert len(first) == k
    for plan in sched.plans[:3]:
        assert set(plan.sample_ids) == first
    for plan in sched.plans[3:]:
        assert set(plan.sample_ids) == set(REAL) | set(AUG)


def test_ccl_uses_cycle_sizes_over_easiest():
    cfg = _cfg(Strategy.CCL, epochs=8, ip=0.25, fp=1.0, cycle_alpha=0.25)
    sched = build_schedule(cfg, REAL, AUG, SCORES)
    n = len(REAL) + len(AUG)
    ranked = sorted(SCORES, key=SCORES.get)
    for plan, fraction in zip(sched.plans, cycle_fractions(0.25, 1.0, 0.25, 8)):
        k = math.ceil(fraction * n - 1e-9)
        assert set(plan.sample_ids) == set(ranked[:k])


def test_missing_scores_rejected():
    with pytest.raises(MissingScore):
        build_schedule(_cfg(Strategy.CL), REAL, AUG, {"r0": 0.1})


def test_empty_real_pool_rejected():
    with pytest.raises(EmptyPool):
        build_schedule(_cfg(Strategy.VANILLA), [], AUG, {})


@pytest.mark.parametrize("strategy", list(Strategy))
@pytest.mark.parametrize("epochs", [1, 5, 30])
def test_every_strategy_emits_exactly_t_plans(strategy, epochs):
    cfg = _cfg(strategy, epochs=epochs)
    sched = build_schedule(cfg, REAL, AUG, SCORES)
    assert len(sched.plans) == epochs
    assert [p.epoch_index for p in sched.plans] == list(range(epochs))
    for plan in sched.plans:
        assert plan.sample_ids  # nonempty


@pytest.mark.parametrize("strategy", list(Strategy))
def test_schedules_deterministic(strategy):
    cfg = _cfg(strategy, epochs=7, seed=99)
    a = build_schedule(cfg, REAL, AUG, SCORES)
    b = build_schedule(cfg, REAL, AUG, SCORES)
    assert a == b


# ---------------------------------------------------------------------------
# pipelines


def _blob_items(n, dim=2, separation=2.0, seed=0, prefix="r"):
    rng = derive_rng(seed, "sched-blobs")
    items = []
    for i in range(n):
        label = i % 2
        center = separation if label == 1 else -separation
        items.append(
            TrainItem(
                id=f"{prefix}{i:03d}",
                vec=center + rng.normal(0.0, 0.6, size=dim),
                probs=one_hot(label, 2),
            )
        )
    return items


def test_mccl_scorer_sees_no_augmented_ids():
    real = _blob_items(12)
    aug = augment_vectors(real, VecAugConfig(method="noise", sigma=0.3, seed=1))
    cfg = _cfg(Strategy.MCCL, epochs=4)
    result = mccl_pipeline(real, aug, cfg, TrainConfig(epochs=4, seed=0))
    aug_ids = {it.id for it in aug}
    assert set(result.scorer_train_ids) == {it.id for it in real}
    assert not set(result.scorer_train_ids) & aug_ids
    # scores still cover the whole combined pool
    assert set(result.scores) == {it.id for it in real} | aug_ids


def test_ccl_scorer_sees_augmented_ids():
    real = _blob_items(10)
    aug = augment_vectors(real, VecAugConfig(method="noise", sigma=0.3, seed=2))
    result = ccl_pipeline(real, aug, _cfg(Strategy.CCL, epochs=4), TrainConfig(epochs=4))
    assert {it.id for it in aug} <= set(result.scorer_train_ids)


def test_mccl_equals_ccl_without_augmentation():
    real = _blob_items(10)
    cfg_m = _cfg(Strategy.MCCL, epochs=6, seed=5)
    cfg_c = _cfg(Strategy.CCL, epochs=6, seed=5)
    tc = TrainConfig(epochs=6, seed=5)
    a = mccl_pipeline(real, [], cfg_m, tc)
    b = ccl_pipeline(real, [], cfg_c, tc)
    assert a.schedule == b.schedule
    for wa, wb in zip(a.model.weights, b.model.weights):
        assert np.array_equal(wa, wb)


def test_pipeline_fraction_sequence_matches_build_schedule():
    real = _blob_items(8)
    cfg = _cfg(Strategy.CCL, epochs=8, ip=0.25, fp=1.0, cycle_alpha=0.25, seed=3)
    result = ccl_pipeline(real, [], cfg, TrainConfig(epochs=8, seed=3))
    n = len(real)
    sizes = [len(p.sample_ids) for p in result.schedule.plans]
    expected = [
        min(n, max(1, math.ceil(f * n - 1e-9)))
        for f in cycle_fractions(0.25, 1.0, 0.25, 8)
    ]
    assert sizes == expected


@settings(deadline=None, max_examples=8)
@given(st.integers(0, 10_000))
def test_run_strategy_deterministic_per_seed(seed):
    real = _blob_items(8)
    cfg = _cfg(Strategy.CL, epochs=3, seed=seed)
    tc = TrainConfig(epochs=3, batch_size=4)
    a = run_strategy(real, [], cfg, tc)
    b = run_strategy(real, [], cfg, tc)
    for wa, wb in zip(a.model.weights, b.model.weights):
        assert np.array_equal(wa, wb)


def test_mccl_toy_accuracy_matches_vanilla_floor():
    # label-preserving jitter augmentation on separable blobs: across 20
    # seeds the cycled pipeline stays within 0.05 of vanilla on held-out
    # points (a sanity floor, not a performance claim)
    test_items = _blob_items(80, seed=777, prefix="t")
    test_X = np.stack([it.vec for it in test_items])
    test_labels = np.array([int(np.argmax(it.probs)) for it in test_items])
    mccl_accs, vanilla_accs = [], []
    for seed in range(20):
        real = _blob_items(24, seed=seed)
        aug = augment_vectors(
            real, VecAugConfig(method="noise", sigma=0.3, rate=1.0, seed=seed)
        )
        tc = TrainConfig(epochs=10, batch_size=8)
        vanilla = run_strategy(real, [], _cfg(Strategy.VANILLA, epochs=10, seed=seed), tc)
        cycled = mccl_pipeline(real, aug, _cfg(Strategy.MCCL, epochs=10, seed=seed), tc)
        vanilla_accs.append(accuracy(vanilla.model, test_X, test_labels))
        mccl_accs.append(accuracy(cycled.model, test_X, test_labels))
    assert fmean(mccl_accs) >= fmean(vanilla_accs) - 0.05
