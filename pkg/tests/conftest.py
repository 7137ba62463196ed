import numpy as np
import pytest

from harsanyi_attrib.game import GameSpec, ValueTable, synth_game


def scale_of(values) -> float:
    return max(1.0, float(np.max(np.abs(values))))


def random_table(rng, n, low=-1.0, high=1.0) -> ValueTable:
    return ValueTable.from_values(rng.uniform(low, high, size=1 << n))


def random_gamma(rng, n):
    return rng.uniform(-1.0, 1.0, size=1 << n)


def planted_mixed(rng, n, n_and=3, n_or=2, low=0.5, high=2.0) -> ValueTable:
    masks = rng.choice(np.arange(1, 1 << n), size=n_and + n_or, replace=False)
    coefs = rng.uniform(low, high, size=n_and + n_or)
    pairs = [(int(m), float(c)) for m, c in zip(masks, coefs)]
    return synth_game(GameSpec("planted-mixed", n, and_terms=pairs[:n_and], or_terms=pairs[n_and:]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def g2():
    """The two-player game v = [0, 1, 1, 3]."""
    return ValueTable.from_values([0.0, 1.0, 1.0, 3.0])


@pytest.fixture
def or2():
    """Planted OR game on two players: v = [0, 1, 1, 1]."""
    return ValueTable.from_values([0.0, 1.0, 1.0, 1.0])
