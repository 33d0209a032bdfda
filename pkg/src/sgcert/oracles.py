"""Independent brute-force references for validating the main modules.

Everything here recomputes a quantity by a route deliberately different
from the library's primary path: explicit joint-action enumeration instead
of tensor contraction, truncated power series instead of a linear solve,
deterministic-policy enumeration instead of policy iteration, support
enumeration instead of the improvement map, and minimax value iteration
for zero-sum cross-checks.  Desk scale only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import linprog

from .game import (
    StochasticGame,
    StrategyProfile,
    marginal_reward,
    marginal_transition,
    opponent_marginals,
    validate_game,
    validate_profile,
)
from .nash_map import apply_f

DET_POLICY_GUARD = 10**5


def enumerate_joint_expectation(
    game: StochasticGame, pi: StrategyProfile, player: int
) -> np.ndarray:
    """Expected per-state reward by explicit sum over all joint actions."""
    out = np.zeros(game.num_states)
    for s in range(game.num_states):
        for joint in game.joint_actions():
            w = 1.0
            for i, a in enumerate(joint):
                w *= pi.probs[i][s, a]
            out[s] += w * game.rewards[player, s, game.joint_index(joint)]
    return out


def enumerate_marginal_transition(
    game: StochasticGame, pi: StrategyProfile
) -> np.ndarray:
    """State transition matrix by explicit sum over all joint actions."""
    out = np.zeros((game.num_states, game.num_states))
    for s in range(game.num_states):
        for joint in game.joint_actions():
            w = 1.0
            for i, a in enumerate(joint):
                w *= pi.probs[i][s, a]
            out[s] += w * game.transition[s, game.joint_index(joint)]
    return out


def truncated_value(
    game: StochasticGame, pi: StrategyProfile, player: int, horizon: int
) -> np.ndarray:
    """Finite-horizon value: sum_{t < horizon} gamma^t (P_pi)^t r_pi.

    Differs from the exact value by at most gamma^horizon * r_max / (1-gamma).
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    r = marginal_reward(game, pi, player)
    p = marginal_transition(game, pi)
    total = np.zeros(game.num_states)
    term = r.copy()
    for _ in range(horizon):
        total += term
        term = game.gamma * (p @ term)
    return total


def enumerate_deterministic_policies(
    game: StochasticGame, pi_others: StrategyProfile, player: int,
    guard: int = DET_POLICY_GUARD,
) -> np.ndarray:
    """Entrywise-best value over all deterministic stationary policies of one
    player against frozen opponents, each evaluated by an exact solve."""
    a_count = game.num_actions[player]
    if a_count**game.num_states > guard:
        raise ValueError("policy count exceeds enumeration guard")
    r_ia, p_ia = opponent_marginals(game, pi_others, player)
    eye = np.eye(game.num_states)
    rows = np.arange(game.num_states)
    best = np.full(game.num_states, -np.inf)
    for policy in product(range(a_count), repeat=game.num_states):
        choice = np.array(policy)
        v = np.linalg.solve(
            eye - game.gamma * p_ia[rows, choice], r_ia[rows, choice]
        )
        best = np.maximum(best, v)
    return best


@dataclass(frozen=True)
class SupportEnumerationResult:
    equilibria: list[StrategyProfile]
    degenerate: bool


def support_enumeration_2x2(game: StochasticGame) -> SupportEnumerationResult:
    """All Nash equilibria of a 2-player, single-state, 2x2, gamma=0 game.

    Pure profiles are checked directly; the fully mixed candidate comes from
    the indifference equations.  Near-singular indifference systems are
    reported via the ``degenerate`` flag and only pure equilibria returned.
    """
    if (
        game.num_players != 2
        or game.num_states != 1
        or game.gamma != 0.0
        or game.num_actions != (2, 2)
    ):
        raise ValueError("support enumeration requires a 2x2 one-shot game")
    r1 = game.rewards[0, 0].reshape(2, 2)
    r2 = game.rewards[1, 0].reshape(2, 2)
    found: list[StrategyProfile] = []

    for a, b in product(range(2), range(2)):
        if r1[1 - a, b] <= r1[a, b] + 1e-12 and r2[a, 1 - b] <= r2[a, b] + 1e-12:
            found.append(
                validate_profile(
                    game,
                    [[[1.0 - a, float(a)]], [[1.0 - b, float(b)]]],
                )
            )

    # Fully mixed: player 1 mixes to make player 2 indifferent and vice versa.
    den_p = (r2[0, 0] - r2[0, 1]) - (r2[1, 0] - r2[1, 1])
    den_q = (r1[0, 0] - r1[1, 0]) - (r1[0, 1] - r1[1, 1])
    degenerate = abs(den_p) < 1e-9 or abs(den_q) < 1e-9
    if not degenerate:
        p = (r2[1, 1] - r2[1, 0]) / den_p
        q = (r1[1, 1] - r1[0, 1]) / den_q
        if 0 < p < 1 and 0 < q < 1:
            found.append(
                validate_profile(game, [[[p, 1.0 - p]], [[q, 1.0 - q]]])
            )
    return SupportEnumerationResult(found, degenerate)


def finite_difference_lipschitz(
    game: StochasticGame, samples: int, seed: int
) -> float:
    """Max observed ratio ||f(pi1) - f(pi2)|| / ||pi1 - pi2|| over random
    profile pairs; identical pairs are skipped."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        p1 = random_profile(game, rng)
        p2 = random_profile(game, rng)
        delta = p1.max_norm_distance(p2)
        if delta == 0.0:
            continue
        num = apply_f(game, p1).max_norm_distance(apply_f(game, p2))
        worst = max(worst, num / delta)
    return worst


def grid_residual_argmin(game: StochasticGame, d: int):
    """Grid profile minimizing the fixed-point residual, first in
    lexicographic order on ties, together with that residual."""
    from .nash_map import residual
    from .simplicial import GRID_ENUM_GUARD, grid_point_count, grid_points

    if grid_point_count(game, d) > GRID_ENUM_GUARD:
        raise ValueError("grid too large to enumerate")
    best = None
    best_res = np.inf
    for point in grid_points(game, d):
        res = residual(game, point.to_profile(game))
        if res < best_res - 1e-15:
            best, best_res = point, res
    return best, best_res


# ---------------------------------------------------------------------------
# Random desk-scale instances.

def random_game(
    rng: np.random.Generator,
    num_players: int = 2,
    num_states: int = 2,
    num_actions=2,
    gamma: float = 0.5,
) -> StochasticGame:
    """Random instance: rewards uniform on [0, 1] with r_max pinned to 1,
    transition rows normalized from uniform positives."""
    if isinstance(num_actions, int):
        num_actions = [num_actions] * num_players
    j_count = int(np.prod(num_actions))
    raw = rng.uniform(0.05, 1.0, size=(num_states, j_count, num_states))
    transition = raw / raw.sum(axis=2, keepdims=True)
    rewards = rng.uniform(0.0, 1.0, size=(num_players, num_states, j_count))
    states = [f"s{k}" for k in range(num_states)]
    actions = [[f"a{k}" for k in range(a)] for a in num_actions]
    return validate_game(states, actions, transition, rewards, gamma, r_max=1.0)


def random_profile(game: StochasticGame, rng: np.random.Generator) -> StrategyProfile:
    probs = []
    for a in game.num_actions:
        raw = rng.uniform(0.01, 1.0, size=(game.num_states, a))
        probs.append(raw / raw.sum(axis=1, keepdims=True))
    return validate_profile(game, probs)


# ---------------------------------------------------------------------------
# Zero-sum cross-checks.

def matrix_game_value(payoff: np.ndarray) -> tuple[float, np.ndarray]:
    """Minimax value and maximizer strategy of a zero-sum matrix game where
    the row player maximizes ``payoff``.  Solved as a linear program."""
    payoff = np.asarray(payoff, dtype=float)
    rows, cols = payoff.shape
    # Variables: (x_1..x_rows, v); maximize v subject to x^T payoff >= v.
    c = np.zeros(rows + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-payoff.T, np.ones((cols, 1))])
    b_ub = np.zeros(cols)
    a_eq = np.ones((1, rows + 1))
    a_eq[0, -1] = 0.0
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=[1.0],
        bounds=[(0, None)] * rows + [(None, None)],
        method="highs",
    )
    if not res.success:  # pragma: no cover
        raise RuntimeError(f"matrix game LP failed: {res.message}")
    return float(res.x[-1]), res.x[:-1]


def shapley_values(
    game: StochasticGame, maximizer: int = 0, tol: float = 1e-10, max_iters: int = 100_000
) -> np.ndarray:
    """Minimax value iteration for a 2-player zero-sum view of the game.

    Iterates V(s) <- val[ r(s, a, b) + gamma * sum_s' P(s'|s, a, b) V(s') ]
    on the maximizer's reward, where val is the matrix-game minimax value.
    Converges geometrically since the operator is a gamma-contraction.
    """
    if game.num_players != 2:
        raise ValueError("minimax value iteration requires 2 players")
    a1, a2 = game.num_actions
    r = game.rewards[maximizer].reshape(game.num_states, a1, a2)
    p = game.transition.reshape(game.num_states, a1, a2, game.num_states)
    if maximizer == 1:
        r = np.swapaxes(r, 1, 2)
        p = np.swapaxes(p, 1, 2)
    v = np.zeros(game.num_states)
    for _ in range(max_iters):
        stage = r + game.gamma * (p @ v)
        new = np.array(
            [matrix_game_value(stage[s])[0] for s in range(game.num_states)]
        )
        if np.max(np.abs(new - v)) < tol:
            return new
        v = new
    raise RuntimeError("minimax value iteration did not converge")  # pragma: no cover
