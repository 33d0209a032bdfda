"""Core data model for finite discounted stochastic games.

A game is a tuple (number of players, states, per-player action sets,
transition kernel, per-player rewards, discount).  Joint actions are indexed
row-major over players in declared player order: for action counts
(A1, ..., An) the joint index of (a1, ..., an) is
a1 * A2 * ... * An + ... + a(n-1) * An + an.

Strategy profiles are behavioral: one probability vector over the player's
actions per (player, state).  All evaluation here is exact, via dense linear
solves of the Bellman system (I - gamma * P_pi) V = r_pi.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from math import prod

import numpy as np

# Tolerance on probability sums for user-supplied data vs. derived quantities.
PROB_TOL_INPUT = 1e-12
PROB_TOL_DERIVED = 1e-10


class GameValidationError(ValueError):
    """A game or profile violates a structural constraint."""


@dataclass(frozen=True)
class StochasticGame:
    """Validated stochastic game.  Construct via :func:`validate_game`.

    Attributes:
        states: ordered state names.
        actions: per-player ordered action names.
        transition: array of shape (S, J, S); ``transition[s, j]`` is the
            next-state distribution under joint action index ``j``.
        rewards: array of shape (n, S, J), nonnegative.
        gamma: discount factor in [0, 1).
        r_max: uniform upper bound on all rewards.
    """

    states: tuple[str, ...]
    actions: tuple[tuple[str, ...], ...]
    transition: np.ndarray
    rewards: np.ndarray
    gamma: float
    r_max: float

    @property
    def num_players(self) -> int:
        return len(self.actions)

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def num_actions(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.actions)

    @property
    def a_max(self) -> int:
        return max(self.num_actions)

    @property
    def num_joint_actions(self) -> int:
        return prod(self.num_actions)

    def joint_index(self, joint: tuple[int, ...]) -> int:
        """Row-major index of a joint action given per-player action indices."""
        idx = 0
        for a, count in zip(joint, self.num_actions):
            idx = idx * count + a
        return idx

    def joint_actions(self):
        """Iterate all joint actions as tuples, in joint-index order."""
        return product(*(range(a) for a in self.num_actions))

    @property
    def value_upper_bound(self) -> float:
        return self.r_max / (1.0 - self.gamma)


@dataclass(frozen=True)
class StrategyProfile:
    """Behavioral strategy profile: ``probs[i][s]`` is player i's distribution
    over actions at state s.  Construct via :func:`validate_profile` or the
    helpers below."""

    probs: tuple[np.ndarray, ...]

    def copy_with(self, player: int, state: int, dist: np.ndarray) -> "StrategyProfile":
        """New profile with one (player, state) distribution replaced."""
        new = list(np.array(p) for p in self.probs)
        new[player][state] = dist
        return StrategyProfile(tuple(new))

    def max_norm_distance(self, other: "StrategyProfile") -> float:
        return max(
            float(np.max(np.abs(a - b))) for a, b in zip(self.probs, other.probs)
        )


def validate_game(
    states,
    actions,
    transition,
    rewards,
    gamma,
    r_max=None,
) -> StochasticGame:
    """Validate raw game data and return a :class:`StochasticGame`.

    Raises :class:`GameValidationError` naming the first violated constraint.
    If ``r_max`` is omitted it is set to the maximum observed reward.
    """
    states = tuple(str(s) for s in states)
    actions = tuple(tuple(str(a) for a in acts) for acts in actions)
    if len(states) == 0:
        raise GameValidationError("game must have at least one state")
    if len(actions) == 0:
        raise GameValidationError("game must have at least one player")
    for i, acts in enumerate(actions):
        if len(acts) == 0:
            raise GameValidationError(f"player {i} has an empty action set")

    gamma = float(gamma)
    if not 0.0 <= gamma < 1.0:
        raise GameValidationError(f"discount must satisfy 0 <= gamma < 1, got {gamma}")

    n = len(actions)
    s_count = len(states)
    j_count = prod(len(a) for a in actions)

    transition = np.asarray(transition, dtype=float)
    if transition.shape != (s_count, j_count, s_count):
        raise GameValidationError(
            f"transition shape {transition.shape} does not match "
            f"(S={s_count}, joint={j_count}, S={s_count})"
        )
    if np.any(transition < 0):
        s, j, t = np.argwhere(transition < 0)[0]
        raise GameValidationError(
            f"negative transition probability at state {s}, joint action {j}, "
            f"successor {t}"
        )
    row_sums = transition.sum(axis=2)
    bad = np.abs(row_sums - 1.0) > PROB_TOL_INPUT
    if np.any(bad):
        s, j = np.argwhere(bad)[0]
        raise GameValidationError(
            f"transition row at state {s}, joint action {j} sums to "
            f"{row_sums[s, j]!r}, expected 1"
        )

    rewards = np.asarray(rewards, dtype=float)
    if rewards.shape != (n, s_count, j_count):
        raise GameValidationError(
            f"rewards shape {rewards.shape} does not match "
            f"(n={n}, S={s_count}, joint={j_count})"
        )
    if np.any(rewards < 0):
        i, s, j = np.argwhere(rewards < 0)[0]
        raise GameValidationError(
            f"negative reward for player {i} at state {s}, joint action {j}"
        )
    observed_max = float(rewards.max()) if rewards.size else 0.0
    if r_max is None:
        r_max = observed_max
    else:
        r_max = float(r_max)
        if r_max < 0:
            raise GameValidationError("r_max must be nonnegative")
        if observed_max > r_max + PROB_TOL_INPUT:
            raise GameValidationError(
                f"reward {observed_max} exceeds declared r_max {r_max}"
            )

    transition = transition.copy()
    rewards = rewards.copy()
    transition.flags.writeable = False
    rewards.flags.writeable = False
    return StochasticGame(states, actions, transition, rewards, gamma, r_max)


def validate_profile(game: StochasticGame, probs) -> StrategyProfile:
    """Validate per-(player, state) distributions against the game shape."""
    if len(probs) != game.num_players:
        raise GameValidationError(
            f"profile has {len(probs)} players, game has {game.num_players}"
        )
    out = []
    for i, rows in enumerate(probs):
        arr = np.asarray(rows, dtype=float)
        if arr.shape != (game.num_states, game.num_actions[i]):
            raise GameValidationError(
                f"player {i} strategy shape {arr.shape} does not match "
                f"(S={game.num_states}, A={game.num_actions[i]})"
            )
        if np.any(arr < 0):
            s, a = np.argwhere(arr < 0)[0]
            raise GameValidationError(
                f"negative probability for player {i} at state {s}, action {a}"
            )
        sums = arr.sum(axis=1)
        bad = np.abs(sums - 1.0) > PROB_TOL_INPUT
        if np.any(bad):
            s = int(np.argwhere(bad)[0][0])
            raise GameValidationError(
                f"player {i} distribution at state {s} sums to {sums[s]!r}"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        out.append(arr)
    return StrategyProfile(tuple(out))


def uniform_profile(game: StochasticGame) -> StrategyProfile:
    return validate_profile(
        game,
        [np.full((game.num_states, a), 1.0 / a) for a in game.num_actions],
    )


def pure_profile(game: StochasticGame, choices) -> StrategyProfile:
    """Deterministic profile; ``choices[i][s]`` is player i's action at s.

    A single per-state sequence is broadcast to all players for convenience
    only when the game has one player.
    """
    probs = []
    for i, a_count in enumerate(game.num_actions):
        rows = np.zeros((game.num_states, a_count))
        for s in range(game.num_states):
            rows[s, choices[i][s]] = 1.0
        probs.append(rows)
    return validate_profile(game, probs)


def _joint_weights(game: StochasticGame, pi: StrategyProfile, state: int) -> np.ndarray:
    """Probability of each joint action at a state, in joint-index order."""
    w = pi.probs[0][state]
    for j in range(1, game.num_players):
        w = np.multiply.outer(w, pi.probs[j][state])
    return w.ravel()


def marginal_reward(
    game: StochasticGame, pi: StrategyProfile, player: int
) -> np.ndarray:
    """Expected one-step reward of a player at each state under the profile."""
    _check_player(game, player)
    out = np.empty(game.num_states)
    for s in range(game.num_states):
        out[s] = game.rewards[player, s] @ _joint_weights(game, pi, s)
    return out


def marginal_transition(game: StochasticGame, pi: StrategyProfile) -> np.ndarray:
    """S x S state transition matrix induced by the profile."""
    p = np.empty((game.num_states, game.num_states))
    for s in range(game.num_states):
        p[s] = _joint_weights(game, pi, s) @ game.transition[s]
    sums = p.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > PROB_TOL_DERIVED):
        raise GameValidationError("marginal transition row drifted off the simplex")
    return p


def value_function(
    game: StochasticGame, pi: StrategyProfile, player: int
) -> np.ndarray:
    """Exact discounted value of a player at every state.

    Solves the dense Bellman system; always nonsingular since gamma < 1.
    """
    _check_player(game, player)
    p = marginal_transition(game, pi)
    r = marginal_reward(game, pi, player)
    eye = np.eye(game.num_states)
    return np.linalg.solve(eye - game.gamma * p, r)


def deviation_value(
    game: StochasticGame, pi: StrategyProfile, player: int, state: int, action: int
) -> float:
    """Value at ``state`` when the player commits to a pure action there.

    The player's distributions at all other states, and all other players'
    strategies, are unchanged; the modification is stationary.
    """
    _check_player(game, player)
    if not 0 <= state < game.num_states:
        raise IndexError(f"state {state} out of range")
    if not 0 <= action < game.num_actions[player]:
        raise IndexError(f"action {action} out of range for player {player}")
    point = np.zeros(game.num_actions[player])
    point[action] = 1.0
    modified = pi.copy_with(player, state, point)
    return float(value_function(game, modified, player)[state])


def opponent_marginals(
    game: StochasticGame, pi: StrategyProfile, player: int
) -> tuple[np.ndarray, np.ndarray]:
    """Reward and transition tables with all other players marginalized out.

    Returns ``(r, p)`` with ``r[s, a]`` the expected reward and ``p[s, a]``
    the next-state distribution when the player takes action ``a`` at ``s``
    and everyone else follows the profile.  This is the single-agent MDP
    induced by freezing the opponents.
    """
    _check_player(game, player)
    n = game.num_players
    shape = game.num_actions
    s_count = game.num_states
    a_count = shape[player]
    r_out = np.empty((s_count, a_count))
    p_out = np.empty((s_count, a_count, s_count))
    for s in range(s_count):
        r_t = np.moveaxis(game.rewards[player, s].reshape(shape), player, 0)
        p_t = np.moveaxis(game.transition[s].reshape(shape + (s_count,)), player, 0)
        for j in range(n):
            if j == player:
                continue
            # axis 1 is always the next opponent axis after the moveaxis above
            r_t = np.tensordot(r_t, pi.probs[j][s], axes=([1], [0]))
            p_t = np.tensordot(p_t, pi.probs[j][s], axes=([1], [0]))
        r_out[s] = r_t
        p_out[s] = p_t
    return r_out, p_out


def _check_player(game: StochasticGame, player: int) -> None:
    if not 0 <= player < game.num_players:
        raise IndexError(f"player {player} out of range")


# ---------------------------------------------------------------------------
# File formats (JSON): games and profiles.

def game_to_dict(game: StochasticGame) -> dict:
    return {
        "gamma": game.gamma,
        "states": list(game.states),
        "players": [{"actions": list(a)} for a in game.actions],
        "transitions": game.transition.tolist(),
        "rewards": game.rewards.tolist(),
        "r_max": game.r_max,
    }


def game_from_dict(data: dict) -> StochasticGame:
    try:
        states = data["states"]
        players = data["players"]
        transitions = data["transitions"]
        rewards = data["rewards"]
        gamma = data["gamma"]
    except (KeyError, TypeError) as exc:
        raise GameValidationError(f"missing game field: {exc}") from exc
    actions = [p["actions"] for p in players]
    return validate_game(
        states, actions, transitions, rewards, gamma, data.get("r_max")
    )


def load_game(path) -> StochasticGame:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GameValidationError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    return game_from_dict(data)


def save_game(game: StochasticGame, path) -> None:
    with open(path, "w") as fh:
        json.dump(game_to_dict(game), fh, indent=2)
        fh.write("\n")


def profile_to_dict(pi: StrategyProfile) -> dict:
    return {"probs": [p.tolist() for p in pi.probs]}


def profile_from_dict(game: StochasticGame, data: dict) -> StrategyProfile:
    try:
        probs = data["probs"]
    except (KeyError, TypeError) as exc:
        raise GameValidationError("profile file must contain a 'probs' field") from exc
    return validate_profile(game, probs)


def load_profile(game: StochasticGame, path) -> StrategyProfile:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GameValidationError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    return profile_from_dict(game, data)


def save_profile(pi: StrategyProfile, path) -> None:
    with open(path, "w") as fh:
        json.dump(profile_to_dict(pi), fh, indent=2)
        fh.write("\n")
