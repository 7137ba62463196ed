import numpy as np
import pytest

from harsanyi_attrib.andor import (
    FIXED_MODES,
    OptimizerConfig,
    loss_and_subgradient,
    optimize_gamma,
    or_operator_norm,
    sparsity_loss,
    split_fixed,
    split_with_gamma,
)
from harsanyi_attrib.errors import Diverged, InputError
from harsanyi_attrib.game import GameSpec, ValueTable, synth_game

from conftest import planted_mixed, random_gamma, random_table


def test_and_only_has_no_or_part(rng):
    table = random_table(rng, 4)
    split = split_fixed(table, "and-only")
    np.testing.assert_array_equal(split.v_or, 0.0)
    np.testing.assert_array_equal(split.v_and, table.values)


def test_balanced_halves(g2):
    split = split_fixed(g2, "balanced")
    assert split.v_and[-1] == split.v_or[-1] == 1.5


def test_or_only(or2):
    split = split_fixed(or2, "or-only")
    np.testing.assert_array_equal(split.v_and, 0.0)
    np.testing.assert_array_equal(split.v_or, [0, 1, 1, 1])


def test_unknown_mode(g2):
    with pytest.raises(InputError):
        split_fixed(g2, "learned")
    with pytest.raises(InputError):
        split_with_gamma(g2, np.zeros(4), "sideways")
    with pytest.raises(InputError):
        split_with_gamma(g2, np.zeros(8))


def test_conservation_is_exact(rng):
    for n in range(1, 9):
        table = random_table(rng, n, -100, 100)
        split = split_with_gamma(table, rng.uniform(-50, 50, size=1 << n))
        # v/2 + γ + v/2 - γ: exact unless the γ shift loses bits of v/2
        assert np.abs(split.v_and + split.v_or - table.values).max() <= 1e-12 * 100


def test_sparsity_loss_examples(or2):
    planted = synth_game(GameSpec("planted-and", 3, and_terms=[(0b011, 1.0)]))
    assert sparsity_loss(split_fixed(planted, "and-only")) == 1.0
    zero = ValueTable.from_values(np.zeros(8))
    assert sparsity_loss(split_fixed(zero, "balanced")) == 0.0
    assert sparsity_loss(split_fixed(or2, "or-only")) == 1.0


def test_loss_ignores_baseline(rng):
    table = random_table(rng, 5)
    shifted = ValueTable.from_values(table.values + 7.0)
    for mode in FIXED_MODES:
        assert sparsity_loss(split_fixed(shifted, mode)) == pytest.approx(
            sparsity_loss(split_fixed(table, mode)), abs=1e-12
        )


def test_subgradient_matches_finite_differences(rng):
    n = 5
    table = random_table(rng, n)
    gamma = random_gamma(rng, n)
    loss, grad = loss_and_subgradient(table, gamma)
    assert loss == pytest.approx(sparsity_loss(split_with_gamma(table, gamma)))
    h = 1e-7
    for k in range(1 << n):
        e = np.zeros(1 << n)
        e[k] = h
        fd = (loss_and_subgradient(table, gamma + e)[0] - loss_and_subgradient(table, gamma - e)[0]) / (2 * h)
        assert fd == pytest.approx(grad[k], abs=1e-5)


def test_operator_norm():
    from harsanyi_attrib.andor import _or_from_and

    for n in (1, 3, 5):
        matrix = np.array([_or_from_and(e) for e in np.eye(1 << n)]).T
        assert np.linalg.norm(matrix, 2) == pytest.approx(or_operator_norm(n), rel=1e-10)


def test_learned_not_worse_than_and_only_on_planted_and(rng):
    pairs = [(0b0011, 1.0), (0b1100, -0.5), (0b10110, 2.0)]
    table = synth_game(GameSpec("planted-and", 5, and_terms=pairs))
    for seed in (0, 1, 2):
        split = optimize_gamma(table, OptimizerConfig(seed=seed))
        assert split.mode == "learned"
        assert sparsity_loss(split) <= 3.5 + 1e-9


def test_learned_beats_fixed_on_planted_mixed(rng):
    table = planted_mixed(rng, 6)
    split = optimize_gamma(table)
    fixed = {m: sparsity_loss(split_fixed(table, m)) for m in FIXED_MODES}
    assert sparsity_loss(split) <= min(fixed.values()) + 1e-9
    assert sparsity_loss(split) <= fixed["balanced"]


def test_learned_approaches_planted_cost(rng):
    # splitting into exactly the planted AND and OR parts costs sum |c|,
    # which upper-bounds the optimum
    n = 6
    for _ in range(3):
        masks = rng.choice(np.arange(1, 1 << n), size=5, replace=False)
        coefs = rng.uniform(0.5, 2.0, size=5)
        pairs = list(zip(masks.tolist(), coefs.tolist()))
        table = synth_game(GameSpec("planted-mixed", n, and_terms=pairs[:3], or_terms=pairs[3:]))
        planted_cost = coefs.sum()
        split = optimize_gamma(table, OptimizerConfig(max_iters=3000))
        assert sparsity_loss(split) <= 1.05 * planted_cost


def test_constant_game():
    table = ValueTable.from_values(np.full(16, 3.25))
    split = optimize_gamma(table)
    assert sparsity_loss(split) <= 1e-9
    np.testing.assert_array_equal(split.gamma, 0.0)


@pytest.mark.parametrize("method", ["primal-dual", "subgradient"])
def test_history_is_nonincreasing_and_best_is_returned(rng, method):
    table = planted_mixed(rng, 6)
    split = optimize_gamma(table, OptimizerConfig(max_iters=400, method=method))
    hist = np.array(split.history)
    assert np.all(np.diff(hist) <= 0)
    assert sparsity_loss(split) == pytest.approx(hist[-1], rel=1e-9, abs=1e-12)


def test_deterministic(rng):
    table = planted_mixed(rng, 5)
    a = optimize_gamma(table, OptimizerConfig(seed=4))
    b = optimize_gamma(table, OptimizerConfig(seed=4))
    assert a.gamma.tobytes() == b.gamma.tobytes()
    assert a.history == b.history


def test_diverged():
    table = synth_game(GameSpec("random", 4, seed=1))
    with pytest.raises(Diverged):
        optimize_gamma(table, OptimizerConfig(method="subgradient", step0=1e6, decay=0.0))


@pytest.mark.parametrize(
    "kwargs",
    [{"max_iters": 0}, {"step0": 0.0}, {"tol": -1.0}, {"decay": -0.1}, {"method": "newton"}, {"patience": 0}],
)
def test_config_validation(kwargs):
    with pytest.raises(InputError):
        OptimizerConfig(**kwargs)
