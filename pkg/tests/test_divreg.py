import math

import numpy as np
import pytest

from src.divreg.direct import optimize_scores
from src.divreg.loss import block_loss_and_grad, div_loss_and_grad, evaluate_block
from src.divreg.masking import TopMask, UnmaskPolicy, softmax_rows, top_mask, unmask
from src.divreg.minibatch import sample_minibatch, scaled_k
from src.divreg.regularizers import coverage_reg, skewness_reg
from src.metrics.diversity import ItemFrequency, coverage_at_k, entropy_at_k, gini_at_k
from src.metrics.recommend import RecLists
from src.mf.model import score_submatrix
from src.primitives.exceptions import ConfigError, ContractViolation
from tests.helpers import max_relative_error, numeric_grads, random_model


def test_softmax_rows_sum_to_one():
    soft = softmax_rows(np.random.default_rng(0).normal(size=(4, 7)) * 10)
    np.testing.assert_allclose(soft.sum(axis=1), 1.0)
    assert (soft > 0).all()


def test_softmax_rows_is_stable_for_large_scores():
    soft = softmax_rows(np.array([[1000.0, 1000.0 + math.log(3)]]))
    assert np.isfinite(soft).all()
    np.testing.assert_allclose(soft, [[0.25, 0.75]], rtol=1e-12)


def test_softmax_rows_ignores_row_shifts():
    rng = np.random.default_rng(14)
    raw = rng.normal(size=(5, 8))
    shifted = raw + rng.uniform(-200, 200, size=(5, 1))
    np.testing.assert_allclose(softmax_rows(shifted), softmax_rows(raw), rtol=0, atol=1e-12)


def test_top_mask_keeps_ties():
    soft = np.full((1, 5), 0.2)
    assert top_mask(soft, 2).keep.sum() == 5


def test_top_mask_keeps_exactly_k_when_distinct():
    soft = softmax_rows(np.random.default_rng(1).normal(size=(6, 9)))
    mask = top_mask(soft, 3)
    np.testing.assert_array_equal(mask.row_counts(), 3)
    for row, keep in zip(soft, mask.keep):
        assert set(np.flatnonzero(keep)) == set(np.argsort(-row)[:3])


def test_top_mask_hand_example():
    mask = top_mask(np.array([[0.5, 0.2, 0.9, 0.1]]), 2)
    assert mask.keep.tolist() == [[True, False, True, False]]


@pytest.mark.parametrize("k", [0, 6])
def test_top_mask_rejects_k_out_of_range(k):
    with pytest.raises(ContractViolation):
        top_mask(np.full((2, 5), 0.2), k)


def test_top_plus_unmasks_next_best():
    soft = np.array([[0.5, 0.2, 0.15, 0.1, 0.05]])
    mask = unmask(top_mask(soft, 1), soft, "top_plus", 2)
    assert mask.keep.tolist() == [[True, True, True, False, False]]


def test_random_unmask_adds_n_masked_entries():
    soft = softmax_rows(np.random.default_rng(2).normal(size=(5, 10)))
    base = top_mask(soft, 2)
    a = unmask(base, soft, "random", 3, np.random.default_rng(9))
    b = unmask(base, soft, "random", 3, np.random.default_rng(9))
    np.testing.assert_array_equal(a.row_counts(), 5)
    assert (a.keep >= base.keep).all()
    np.testing.assert_array_equal(a.keep, b.keep)


def test_unmask_more_than_available_keeps_everything():
    soft = softmax_rows(np.random.default_rng(3).normal(size=(3, 4)))
    mask = unmask(top_mask(soft, 2), soft, "top_plus", 50)
    assert mask.keep.all()


def test_unmask_none_is_identity():
    soft = softmax_rows(np.random.default_rng(4).normal(size=(3, 6)))
    base = top_mask(soft, 2)
    assert unmask(base, soft, "none", 4) is base


def test_unknown_scheme_is_a_config_error():
    with pytest.raises(ConfigError):
        UnmaskPolicy("everything", 3)


def test_regularizers_on_uniform_rows():
    soft = np.full((3, 4), 0.25)
    mask = top_mask(soft, 4)
    assert skewness_reg(soft, mask) == pytest.approx(-3 * math.log(4))
    assert coverage_reg(soft, mask) == pytest.approx(-4 * math.log(0.75))


def test_coverage_hand_value():
    soft = np.array([[0.3, 0.7], [0.3, 0.7]])
    mask = TopMask(np.ones((2, 2), dtype=bool))
    # column masses 0.6 and 1.4
    assert coverage_reg(soft, mask) == pytest.approx(-math.log(0.6) - math.log(1.4), abs=1e-9)
    assert coverage_reg(soft, mask) == pytest.approx(0.1744, abs=1e-4)


def test_skewness_hand_value():
    soft = np.array([[0.6, 0.2, 0.2]])
    mask = TopMask(np.array([[True, True, False]]))
    # kept mass renormalizes to 0.75 / 0.25
    assert skewness_reg(soft, mask) == pytest.approx(0.75 * math.log(0.75) + 0.25 * math.log(0.25), abs=1e-12)
    assert skewness_reg(soft, mask) == pytest.approx(-0.5623, abs=1e-4)


def test_skewness_bounded_below_by_row_count():
    rng = np.random.default_rng(15)
    for m in (1, 2, 4):
        soft = softmax_rows(rng.normal(scale=2.0, size=(6, 9)))
        assert skewness_reg(soft, top_mask(soft, m)) >= -6 * math.log(m) - 1e-12
    even = np.tile([0.3, 0.3, 0.2, 0.2], (3, 1))
    assert skewness_reg(even, top_mask(even, 2)) == pytest.approx(-3 * math.log(2), abs=1e-12)


def test_fully_masked_row_is_a_contract_violation():
    soft = np.full((2, 3), 1 / 3)
    keep = np.array([[True, False, False], [False, False, False]])
    with pytest.raises(ContractViolation):
        skewness_reg(soft, TopMask(keep))


def test_coverage_bound_holds_for_random_masks():
    rng = np.random.default_rng(5)
    violations = 0
    for _ in range(100):
        rows, cols = rng.integers(2, 11, size=2)
        soft = softmax_rows(rng.normal(scale=2.0, size=(rows, cols)))
        mask = unmask(top_mask(soft, int(rng.integers(1, cols + 1))), soft, "random", int(rng.integers(0, cols)), rng)
        bound = (rows / cols) ** cols
        if math.exp(-coverage_reg(soft, mask)) > bound * (1 + 1e-6):
            violations += 1
    assert violations == 0


def test_div_gradient_matches_finite_differences():
    model = random_model(8, 12, 4, seed=6)
    res = div_loss_and_grad(model, 8, 12, 3, UnmaskPolicy("top_plus", 2), np.random.default_rng(0))
    assert res.batch.k_b == 3
    assert res.grads.source == "div"
    frozen = res.mask
    numeric = numeric_grads(lambda m: evaluate_block(score_submatrix(m, res.batch.users, res.batch.items), frozen), model)
    for name, analytic in res.grads.as_dict().items():
        assert max_relative_error(analytic, numeric[name]) <= 1e-4, name


@pytest.mark.parametrize("use_cov,use_skew", [(True, False), (False, True)])
def test_ablated_gradient_matches_finite_differences(use_cov, use_skew):
    raw = np.random.default_rng(7).normal(size=(5, 8))
    res = block_loss_and_grad(raw, 2, UnmaskPolicy("top_plus", 2), use_cov=use_cov, use_skew=use_skew)
    h = 1e-5
    numeric = np.zeros_like(raw)
    for idx in np.ndindex(raw.shape):
        up, down = raw.copy(), raw.copy()
        up[idx] += h
        down[idx] -= h
        numeric[idx] = (evaluate_block(up, res.mask, use_cov, use_skew) - evaluate_block(down, res.mask, use_cov, use_skew)) / (2 * h)
    assert max_relative_error(res.grad_raw, numeric) <= 1e-4


def test_full_batch_equals_full_matrix_bitwise():
    model = random_model(16, 20, 6, seed=8)
    policy = UnmaskPolicy("top_plus", 3)
    res = div_loss_and_grad(model, 16, 20, 5, policy, np.random.default_rng(1))
    np.testing.assert_array_equal(res.batch.users, np.arange(16))
    np.testing.assert_array_equal(res.batch.items, np.arange(20))

    soft = softmax_rows(score_submatrix(model, np.arange(16), np.arange(20)))
    mask = unmask(top_mask(soft, 5), soft, "top_plus", 3)
    full = coverage_reg(soft, mask) + skewness_reg(soft, mask)
    assert res.loss == full
    assert res.loss == evaluate_block(score_submatrix(model), mask)


def test_minibatch_rows_outside_block_get_no_gradient():
    model = random_model(10, 15, 3, seed=9)
    res = div_loss_and_grad(model, 4, 6, 5, UnmaskPolicy("top_plus", 1), np.random.default_rng(2))
    outside_users = np.setdiff1d(np.arange(10), res.batch.users)
    outside_items = np.setdiff1d(np.arange(15), res.batch.items)
    assert not res.grads.user_emb[outside_users].any()
    assert not res.grads.item_emb[outside_items].any()


def test_both_regularizers_disabled_is_rejected():
    with pytest.raises(ContractViolation):
        block_loss_and_grad(np.zeros((2, 3)), 1, UnmaskPolicy(), use_cov=False, use_skew=False)


def test_scaled_k():
    assert scaled_k(5000, 10000, 5) == 2  # 2.5 rounds half to even
    assert scaled_k(3, 10000, 5) == 1
    assert scaled_k(20, 20, 5) == 5
    assert scaled_k(2, 2, 5) == 2


def test_sample_minibatch_sorted_and_unique():
    batch = sample_minibatch(50, 40, 10, 7, 5, np.random.default_rng(3))
    assert len(np.unique(batch.users)) == 10 and len(np.unique(batch.items)) == 7
    assert (np.diff(batch.users) > 0).all() and (np.diff(batch.items) > 0).all()
    assert batch.k_b == 1
    with pytest.raises(ContractViolation):
        sample_minibatch(50, 40, 51, 7, 5, np.random.default_rng(3))


# 12 users x 6 items, two kept items per user, every item kept by four users
EVEN_PAIRS = [(u, (u + 1) % 6) for u in range(6)] + [(u, (u + 2) % 6) for u in range(6)]


def pair_scores(pairs, margin: float, cols: int = 6) -> np.ndarray:
    raw = np.zeros((len(pairs), cols))
    for row, pair in enumerate(pairs):
        raw[row, list(pair)] = margin
    return raw


def loss_floor(mask: TopMask) -> float:
    """-sum_u log|kept_u| - |I| log(|U|/|I| + eps); no score block goes below it."""
    rows, cols = mask.shape
    return float(-np.log(mask.row_counts()).sum() - cols * math.log(rows / cols + 1e-12))


def top2_frequency(scores: np.ndarray) -> ItemFrequency:
    items = np.argsort(-scores, axis=1, kind="stable")[:, :2]
    return ItemFrequency.from_lists(RecLists(np.arange(len(scores)), items), scores.shape[1])


def test_loss_never_goes_below_floor():
    rng = np.random.default_rng(13)
    violations = 0
    for _ in range(100):
        rows, cols = rng.integers(2, 13, size=2)
        raw = rng.normal(scale=3.0, size=(rows, cols))
        k = int(rng.integers(1, cols + 1))
        policy = UnmaskPolicy(["none", "top_plus", "random"][int(rng.integers(3))], int(rng.integers(0, cols)))
        res = block_loss_and_grad(raw, k, policy, rng)
        if res.loss < loss_floor(res.mask) - 1e-9:
            violations += 1
    assert violations == 0


def test_even_exposure_attains_floor():
    res = block_loss_and_grad(pair_scores(EVEN_PAIRS, 30.0), 2, UnmaskPolicy("none", 0))
    np.testing.assert_array_equal(res.mask.row_counts(), 2)
    assert res.loss == pytest.approx(-18 * math.log(2), abs=1e-9)
    assert res.loss == pytest.approx(loss_floor(res.mask), abs=1e-9)

    freq = top2_frequency(pair_scores(EVEN_PAIRS, 30.0))
    assert coverage_at_k(freq) == 1.0
    assert gini_at_k(freq) == pytest.approx(0.0, abs=1e-12)
    assert entropy_at_k(freq) == pytest.approx(math.log(6), abs=1e-12)


def test_uneven_exposure_costs_more_than_even():
    floor = -18 * math.log(2)
    # one user swaps item 0 for item 5: exposure 3,4,4,4,4,5
    skewed = list(EVEN_PAIRS)
    skewed[6] = (5, 2)
    res = block_loss_and_grad(pair_scores(skewed, 30.0), 2, UnmaskPolicy("none", 0))
    assert res.loss == pytest.approx(floor + math.log(16 / 15), abs=1e-6)
    # everyone gets the same two items; four columns carry no mass
    collapsed = block_loss_and_grad(pair_scores([(0, 1)] * 12, 30.0), 2, UnmaskPolicy("none", 0))
    assert collapsed.loss > floor + 1.0


def test_even_exposure_survives_optimization():
    start = pair_scores(EVEN_PAIRS, 3.0)
    for seed in range(10):
        raw = start + np.random.default_rng(seed).normal(scale=0.1, size=start.shape)
        trace = optimize_scores(raw, 2, UnmaskPolicy("none", 0), lr=0.01, max_steps=2000)
        assert trace.steps == 2000 and not trace.stopped_early
        assert trace.losses[-1] < trace.losses[0]
        top2 = np.argsort(-trace.scores, axis=1, kind="stable")[:, :2]
        assert [set(row) for row in top2.tolist()] == [set(p) for p in EVEN_PAIRS], seed
        freq = top2_frequency(trace.scores)
        assert coverage_at_k(freq) == 1.0
        assert gini_at_k(freq) <= 0.05
        assert entropy_at_k(freq) >= 0.98 * math.log(6)


def test_coverage_does_not_drop_across_epochs():
    scores = pair_scores(EVEN_PAIRS, 3.0) + np.random.default_rng(21).normal(scale=0.1, size=(12, 6))
    history = [coverage_at_k(top2_frequency(scores))]
    for _ in range(5):
        scores = optimize_scores(scores, 2, UnmaskPolicy("none", 0), lr=0.01, max_steps=100).scores
        history.append(coverage_at_k(top2_frequency(scores)))
    assert all(b >= a for a, b in zip(history, history[1:]))
    assert history[-1] == 1.0


def test_optimize_scores_stops_when_asked():
    raw = np.random.default_rng(10).normal(size=(12, 6))
    trace = optimize_scores(raw, 2, UnmaskPolicy("random", 1), np.random.default_rng(11), stop_when=lambda s: True)
    assert trace.stopped_early
    assert trace.steps == 1 and len(trace.losses) == 1
    assert not np.array_equal(trace.scores, raw)


def test_optimize_scores_does_not_touch_input():
    raw = np.random.default_rng(12).normal(size=(4, 5))
    before = raw.copy()
    trace = optimize_scores(raw, 2, UnmaskPolicy("top_plus", 1), max_steps=5)
    np.testing.assert_array_equal(raw, before)
    assert trace.steps == 5 and len(trace.losses) == 5
