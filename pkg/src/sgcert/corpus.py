"""Desk-scale games with analytically known equilibria.

Each entry pairs a game with one known equilibrium profile (games may
appear under several names with different equilibria).  The single-state
bimatrix games double as one-shot instances when gamma = 0; the discounted
variants keep the stage game identical across time so the stage
equilibrium remains an equilibrium of the discounted game.

``write_corpus`` materializes the games and equilibria as JSON files plus
a manifest, which is the on-disk interface consumed by the command line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .game import (
    StochasticGame,
    StrategyProfile,
    save_game,
    save_profile,
    validate_game,
    validate_profile,
)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    game: StochasticGame
    equilibrium: StrategyProfile
    note: str


def _bimatrix(r1, r2, gamma=0.0, r_max=None):
    """Single-state 2-player game from 2x2 payoff matrices."""
    r1 = np.asarray(r1, float)
    r2 = np.asarray(r2, float)
    j = r1.size
    transition = np.ones((1, j, 1))
    rewards = np.stack([r1.reshape(1, j), r2.reshape(1, j)])
    return validate_game(
        ["s0"],
        [[f"a{k}" for k in range(r1.shape[0])], [f"b{k}" for k in range(r1.shape[1])]],
        transition,
        rewards,
        gamma,
        r_max,
    )


def _profile(game, rows):
    return validate_profile(game, rows)


def dominant_bimatrix(gamma: float = 0.0) -> StochasticGame:
    # Action 0 strictly dominant for both players.
    return _bimatrix([[3, 2], [1, 0]], [[3, 1], [2, 0]], gamma)


def matching_pennies(gamma: float = 0.0) -> StochasticGame:
    return _bimatrix([[1, 0], [0, 1]], [[0, 1], [1, 0]], gamma)


def coordination(gamma: float = 0.0) -> StochasticGame:
    return _bimatrix([[1, 0], [0, 1]], [[1, 0], [0, 1]], gamma)


def asymmetric_mixed(gamma: float = 0.0) -> StochasticGame:
    # Unique equilibrium at p = q = (1/3, 2/3) from the indifference system.
    return _bimatrix([[2, 0], [0, 1]], [[0, 2], [1, 0]], gamma)


def two_arm_bandit() -> StochasticGame:
    # One player, one state, rewards (1, 0), undiscounted.
    return validate_game(
        ["s0"], [["a0", "a1"]], [[[1.0], [1.0]]], [[[1.0, 0.0]]], 0.0
    )


def indifferent_bandit() -> StochasticGame:
    return validate_game(
        ["s0"], [["a0", "a1"]], [[[1.0], [1.0]]], [[[1.0, 1.0]]], 0.0
    )


def dominant_chain(gamma: float = 0.9) -> StochasticGame:
    """Single-agent 2-state game; action 0 pays 1 in both states and the
    transition kernel is action-independent, so always-0 is optimal and
    V(s) = 1 / (1 - gamma)."""
    transition = [
        [[0.7, 0.3], [0.7, 0.3]],
        [[0.4, 0.6], [0.4, 0.6]],
    ]
    rewards = [[[1.0, 0.0], [1.0, 0.0]]]
    return validate_game(["s0", "s1"], [["a0", "a1"]], transition, rewards, gamma)


def zero_sum_chain(gamma: float = 0.5) -> StochasticGame:
    """2-state zero-sum game (rewards sum to 2) with a pure saddle point.

    Both states carry the same stage game, so continuation values are
    state-independent and the stage saddle (a0, b1) stays an equilibrium:
    V1(s) = V2(s) = 1 / (1 - gamma).
    """
    r1 = np.array([[2.0, 1.0], [1.0, 0.0]])
    r2 = 2.0 - r1
    transition = [
        [[0.8, 0.2], [0.5, 0.5], [0.3, 0.7], [0.6, 0.4]],
        [[0.1, 0.9], [0.4, 0.6], [0.9, 0.1], [0.2, 0.8]],
    ]
    rewards = [
        [r1.ravel().tolist()] * 2,
        [r2.ravel().tolist()] * 2,
    ]
    return validate_game(
        ["s0", "s1"], [["a0", "a1"], ["b0", "b1"]], transition, rewards, gamma
    )


def desk_corpus() -> list[CorpusEntry]:
    entries = []

    g = dominant_bimatrix(0.0)
    entries.append(
        CorpusEntry(
            "dominant", g, _profile(g, [[[1, 0]], [[1, 0]]]),
            "strictly dominant pure equilibrium",
        )
    )
    g = dominant_bimatrix(0.5)
    entries.append(
        CorpusEntry(
            "dominant_discounted", g, _profile(g, [[[1, 0]], [[1, 0]]]),
            "dominance is unaffected by the single-state discounting",
        )
    )
    g = matching_pennies(0.0)
    entries.append(
        CorpusEntry(
            "matching_pennies", g,
            _profile(g, [[[0.5, 0.5]], [[0.5, 0.5]]]),
            "unique mixed equilibrium, both uniform",
        )
    )
    g = matching_pennies(0.6)
    entries.append(
        CorpusEntry(
            "matching_pennies_discounted", g,
            _profile(g, [[[0.5, 0.5]], [[0.5, 0.5]]]),
            "single state, so the stage equilibrium persists under discounting",
        )
    )
    g = coordination(0.0)
    entries.append(
        CorpusEntry(
            "coordination_pure", g, _profile(g, [[[1, 0]], [[1, 0]]]),
            "one of two pure coordination equilibria",
        )
    )
    entries.append(
        CorpusEntry(
            "coordination_mixed", g,
            _profile(g, [[[0.5, 0.5]], [[0.5, 0.5]]]),
            "the uniform mixed coordination equilibrium",
        )
    )
    g = coordination(0.5)
    entries.append(
        CorpusEntry(
            "coordination_discounted", g, _profile(g, [[[0, 1]], [[0, 1]]]),
            "the other pure equilibrium, discounted variant",
        )
    )
    g = asymmetric_mixed(0.0)
    third = 1.0 / 3.0
    entries.append(
        CorpusEntry(
            "asymmetric_mixed", g,
            _profile(g, [[[third, 1 - third]], [[third, 1 - third]]]),
            "unique mixed equilibrium from the indifference equations",
        )
    )
    g = two_arm_bandit()
    entries.append(
        CorpusEntry(
            "two_arm_bandit", g, _profile(g, [[[1, 0]]]),
            "single agent, pure optimum on the better arm",
        )
    )
    g = indifferent_bandit()
    entries.append(
        CorpusEntry(
            "indifferent_bandit", g, _profile(g, [[[0.5, 0.5]]]),
            "all rewards equal, every profile is an equilibrium",
        )
    )
    g = dominant_chain(0.9)
    entries.append(
        CorpusEntry(
            "dominant_chain", g, _profile(g, [[[1, 0], [1, 0]]]),
            "single-agent chain; action 0 optimal everywhere, V = 10",
        )
    )
    g = zero_sum_chain(0.5)
    entries.append(
        CorpusEntry(
            "zero_sum_chain", g,
            _profile(g, [[[1, 0], [1, 0]], [[0, 1], [0, 1]]]),
            "pure saddle point repeated in both states",
        )
    )
    return entries


def single_state_corpus() -> list[CorpusEntry]:
    """The one-state entries, small enough for exhaustive simplicial search."""
    return [e for e in desk_corpus() if e.game.num_states == 1]


def write_corpus(directory) -> Path:
    """Serialize the corpus: one game and one equilibrium file per entry,
    plus a manifest recording files, notes, and the random-instance seeds
    used by the oracle-agreement harness."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "entries": [],
        "random_instances": {
            "seeds": list(range(100)),
            "gammas": [0.0, 0.5, 0.9],
            "oracle_agreement": {
                "joint_expectation": 1e-10,
                "deterministic_policy_enumeration": 1e-8,
                "truncated_value_horizon": 200,
            },
        },
    }
    for entry in desk_corpus():
        game_file = f"{entry.name}.game.json"
        eq_file = f"{entry.name}.equilibrium.json"
        save_game(entry.game, directory / game_file)
        save_profile(entry.equilibrium, directory / eq_file)
        manifest["entries"].append(
            {"name": entry.name, "game": game_file, "equilibrium": eq_file,
             "note": entry.note}
        )
    with open(directory / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return directory
