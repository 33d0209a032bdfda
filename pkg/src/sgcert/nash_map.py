"""The improvement map on strategy profiles and its fixed-point residual.

For each (player, state, action) the one-shot deviation gain is

    D(i, s, a) = max(0, V_dev(i, s, a) - V(i, s)),

where V_dev is the value of committing to the pure action at that state
only.  The map shifts probability toward profitably deviating actions:

    f(pi)(i, s, a) = (pi(i, s, a) + D(i, s, a)) / (1 + sum_b D(i, s, b)).

A profile is a Markov perfect equilibrium exactly when it is a fixed point
of this map, so ||f(pi) - pi||_inf serves as the equilibrium residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import StochasticGame, StrategyProfile, opponent_marginals, validate_profile

# Raw gains within this distance of zero are clamped to avoid spurious tiny
# denominators in the map.
GAIN_CLAMP = 1e-12


@dataclass(frozen=True)
class GainTable:
    """One-shot deviation gains, ``gains[i][s, a]``, all nonnegative."""

    gains: tuple[np.ndarray, ...]

    @property
    def max_gain(self) -> float:
        return max(float(g.max()) for g in self.gains)

    def entry(self, player: int, state: int, action: int) -> float:
        return float(self.gains[player][state, action])


def gain_table(game: StochasticGame, pi: StrategyProfile) -> GainTable:
    """Deviation gains for every (player, state, action).

    Each player's deviation values are obtained from the single-agent MDP
    with opponents frozen: the Bellman matrix for the deviation at (s, a)
    differs from the on-profile one only in row s, so all deviations solve
    as one batched dense system per player.
    """
    s_count = game.num_states
    eye = np.eye(s_count)
    out = []
    for i in range(game.num_players):
        r_ia, p_ia = opponent_marginals(game, pi, i)
        own = pi.probs[i]
        r_pi = np.einsum("sa,sa->s", own, r_ia)
        p_pi = np.einsum("sa,sat->st", own, p_ia)
        m = eye - game.gamma * p_pi
        v = np.linalg.solve(m, r_pi)

        a_count = game.num_actions[i]
        ms = np.tile(m, (s_count * a_count, 1, 1))
        bs = np.tile(r_pi, (s_count * a_count, 1))
        k = 0
        for s in range(s_count):
            for a in range(a_count):
                ms[k, s, :] = -game.gamma * p_ia[s, a]
                ms[k, s, s] += 1.0
                bs[k, s] = r_ia[s, a]
                k += 1
        v_dev = np.linalg.solve(ms, bs[..., None])[..., 0]
        dev_at_s = v_dev[np.arange(s_count * a_count), np.repeat(np.arange(s_count), a_count)]
        g = dev_at_s.reshape(s_count, a_count) - v[:, None]
        g[g < GAIN_CLAMP] = 0.0
        g.flags.writeable = False
        out.append(g)
    return GainTable(tuple(out))


def apply_f(game: StochasticGame, pi: StrategyProfile) -> StrategyProfile:
    """One application of the improvement map; returns a valid profile."""
    gains = gain_table(game, pi)
    probs = []
    for i in range(game.num_players):
        g = gains.gains[i]
        denom = 1.0 + g.sum(axis=1)
        probs.append((pi.probs[i] + g) / denom[:, None])
    return validate_profile(game, probs)


def residual(game: StochasticGame, pi: StrategyProfile) -> float:
    """Fixed-point residual ||f(pi) - pi||_inf."""
    return apply_f(game, pi).max_norm_distance(pi)


def lipschitz_constant(game: StochasticGame) -> float:
    """Closed-form Lipschitz constant of the map in the max norm:
    9 * n * S^2 * A_max^2 * R_max / (1 - gamma)^2."""
    n = game.num_players
    s = game.num_states
    a = game.a_max
    return 9.0 * n * s * s * a * a * game.r_max / (1.0 - game.gamma) ** 2
