import numpy as np
import pytest

from sgcert import corpus, oracles


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def toy():
    """Single player, single state, gamma=0, rewards (1, 0)."""
    return corpus.two_arm_bandit()


@pytest.fixture
def pennies():
    return corpus.matching_pennies()


def random_instances(seed, count, shapes=((2, 2, 2), (3, 1, 2), (2, 1, 3)),
                     gammas=(0.0, 0.5, 0.9)):
    """Deterministic stream of (game, profile) pairs across shapes/discounts."""
    rng = np.random.default_rng(seed)
    for k in range(count):
        n, s, a = shapes[k % len(shapes)]
        game = oracles.random_game(rng, n, s, a, gammas[k % len(gammas)])
        yield game, oracles.random_profile(game, rng)
