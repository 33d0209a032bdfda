"""Turn fixed-point residuals into certified approximate-equilibrium bounds.

The bound chain: a residual eps on the improvement map implies every
one-shot deviation gain is at most

    A_max * (sqrt(eps') / (1 - gamma) + R_max * sqrt(eps') + eps'),
    eps' = eps * (1 + A_max * R_max / (1 - gamma)),

and a uniform one-shot gain bound g implies every best-response regret is
at most g / (1 - gamma).  Regrets are measured exactly against the optimal
value of the single-agent MDP obtained by freezing the opponents.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .game import StochasticGame, StrategyProfile, opponent_marginals, value_function
from .nash_map import gain_table, lipschitz_constant, residual

_PI_TIE_TOL = 1e-12


@dataclass(frozen=True)
class Certificate:
    """Certified regret report for a profile.

    ``epsilon_bound`` is the theoretical bound implied by the residual;
    ``epsilon_achieved`` is the maximum measured best-response regret, which
    is authoritative for the verdict (the bound is loose by design).
    """

    residual: float
    per_state_regret: tuple[np.ndarray, ...]
    epsilon_bound: float
    epsilon_achieved: float
    lipschitz: float
    is_eps_mpe_for: float | None = None
    d_used: int | None = None

    @property
    def verdict(self) -> bool | None:
        if self.is_eps_mpe_for is None:
            return None
        return self.epsilon_achieved <= self.is_eps_mpe_for

    def to_dict(self) -> dict:
        return {
            "residual": self.residual,
            "epsilon_bound": self.epsilon_bound,
            "epsilon_achieved": self.epsilon_achieved,
            "per_state_regret": [r.tolist() for r in self.per_state_regret],
            "lambda": self.lipschitz,
            "d": self.d_used,
            "target": self.is_eps_mpe_for,
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(_round_floats(self.to_dict()), indent=2, sort_keys=True)


def _round_floats(obj):
    """12-significant-digit float formatting for reproducible reports."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(v) for v in obj]
    return obj


def best_response_values(
    game: StochasticGame, pi: StrategyProfile, player: int
) -> np.ndarray:
    """Optimal values of the MDP induced by freezing the other players.

    Policy iteration with exact evaluation: evaluate the current
    deterministic policy by a dense solve, switch a state's action only on
    strict improvement (ties broken toward the lowest action index), stop
    when no state switches.  Terminates because each switch strictly
    improves the evaluated value and the policy set is finite.
    """
    r_ia, p_ia = opponent_marginals(game, pi, player)
    s_count = game.num_states
    eye = np.eye(s_count)
    rows = np.arange(s_count)
    policy = np.zeros(s_count, dtype=int)
    for _ in range(game.num_actions[player] ** s_count + 1):
        p = p_ia[rows, policy]
        r = r_ia[rows, policy]
        v = np.linalg.solve(eye - game.gamma * p, r)
        q = r_ia + game.gamma * (p_ia @ v)
        best = np.argmax(q, axis=1)
        improved = q[rows, best] > q[rows, policy] + _PI_TIE_TOL
        if not improved.any():
            return v
        policy = np.where(improved, best, policy)
    raise RuntimeError("policy iteration failed to terminate")  # pragma: no cover


def epsilon_prime(game: StochasticGame, eps: float) -> float:
    """eps * (1 + A_max * R_max / (1 - gamma))."""
    return eps * (1.0 + game.a_max * game.r_max / (1.0 - game.gamma))


def residual_to_gain_bound(game: StochasticGame, eps: float) -> float:
    """Bound on every one-shot deviation gain implied by residual eps."""
    ep = epsilon_prime(game, eps)
    root = math.sqrt(ep)
    return game.a_max * (root / (1.0 - game.gamma) + game.r_max * root + ep)


def residual_to_mpe_bound(game: StochasticGame, eps: float) -> float:
    """Bound on every best-response regret implied by residual eps."""
    return residual_to_gain_bound(game, eps) / (1.0 - game.gamma)


def certify_profile(
    game: StochasticGame,
    pi: StrategyProfile,
    target_inv_l: float | None = None,
) -> Certificate:
    """Measure per-(player, state) best-response regrets and bundle them with
    the residual-implied theoretical bound.  When ``target_inv_l`` (the
    precision 1/L) is given, the certificate carries a verdict and the grid
    size the full construction would require for that L."""
    eps = residual(game, pi)
    regrets = []
    for i in range(game.num_players):
        regrets.append(best_response_values(game, pi, i) - value_function(game, pi, i))
    achieved = max(0.0, max(float(r.max()) for r in regrets))
    d_used = None
    if target_inv_l is not None:
        if target_inv_l <= 0:
            raise ValueError("target precision must be positive")
        d_used = choose_d(game, max(1, math.ceil(1.0 / target_inv_l)))
    return Certificate(
        residual=eps,
        per_state_regret=tuple(regrets),
        epsilon_bound=residual_to_mpe_bound(game, eps),
        epsilon_achieved=achieved,
        lipschitz=lipschitz_constant(game),
        is_eps_mpe_for=target_inv_l,
        d_used=d_used,
    )


@dataclass(frozen=True)
class GainRegretReport:
    max_gain: float
    max_regret: float
    bound: float
    passed: bool


def gain_to_regret_check(game: StochasticGame, pi: StrategyProfile) -> GainRegretReport:
    """Report-only check that regrets obey the one-shot gain bound:
    every best-response regret <= (max gain) / (1 - gamma) + 1e-8."""
    g = gain_table(game, pi).max_gain
    max_regret = -math.inf
    for i in range(game.num_players):
        diff = best_response_values(game, pi, i) - value_function(game, pi, i)
        max_regret = max(max_regret, float(diff.max()))
    bound = g / (1.0 - game.gamma)
    return GainRegretReport(g, max_regret, bound, max_regret <= bound + 1e-8)


def choose_d(game: StochasticGame, l_target: int) -> int:
    """Grid size guaranteeing a 1/L-approximate equilibrium from any stopping
    simplex: ceil(32 * A_max^5 * R_max^3 * (lambda + 1) * L^2 / (1-gamma)^5)."""
    if l_target < 1:
        raise ValueError("L must be a positive integer")
    lam = lipschitz_constant(game)
    value = (
        32.0
        * game.a_max**5
        * game.r_max**3
        * (lam + 1.0)
        * l_target
        * l_target
        / (1.0 - game.gamma) ** 5
    )
    nearest = round(value)
    if abs(value - nearest) <= 1e-6 * max(1.0, abs(value)):
        return int(nearest)
    return int(math.ceil(value))
