import json
import math

import numpy as np
import pytest

from sgcert import (
    best_response_values,
    certify_profile,
    choose_d,
    epsilon_prime,
    gain_table,
    gain_to_regret_check,
    residual,
    residual_to_gain_bound,
    residual_to_mpe_bound,
    uniform_profile,
    validate_profile,
    value_function,
)
from sgcert import corpus
from sgcert.game import opponent_marginals
from sgcert.oracles import enumerate_deterministic_policies, random_game

from conftest import random_instances


class TestBestResponseValues:
    def test_single_agent_max_reward(self, toy):
        pi = uniform_profile(toy)
        assert best_response_values(toy, pi, 0)[0] == pytest.approx(1.0)

    def test_matching_pennies_vs_uniform(self, pennies):
        pi = uniform_profile(pennies)
        for i in range(2):
            assert best_response_values(pennies, pi, i)[0] == pytest.approx(0.5)

    def test_matches_deterministic_policy_enumeration(self):
        for game, pi in random_instances(53, 25):
            for i in range(game.num_players):
                np.testing.assert_allclose(
                    best_response_values(game, pi, i),
                    enumerate_deterministic_policies(game, pi, i),
                    atol=1e-8,
                )

    def test_bellman_optimality_residual(self):
        for game, pi in random_instances(59, 25):
            for i in range(game.num_players):
                v = best_response_values(game, pi, i)
                r_ia, p_ia = opponent_marginals(game, pi, i)
                q = r_ia + game.gamma * (p_ia @ v)
                np.testing.assert_allclose(q.max(axis=1), v, atol=1e-9)

    def test_dominates_on_profile_value(self):
        for game, pi in random_instances(61, 25):
            for i in range(game.num_players):
                v_star = best_response_values(game, pi, i)
                v = value_function(game, pi, i)
                assert np.all(v_star >= v - 1e-9)


class TestCertifyProfile:
    def test_dominant_equilibrium_verdict(self):
        g = corpus.dominant_bimatrix()
        pi = validate_profile(g, [[[1, 0]], [[1, 0]]])
        cert = certify_profile(g, pi, target_inv_l=1e-6)
        assert cert.epsilon_achieved <= 1e-12
        assert cert.verdict is True

    def test_matching_pennies_uniform_zero_regret(self, pennies):
        cert = certify_profile(pennies, uniform_profile(pennies))
        assert cert.epsilon_achieved <= 1e-12
        assert cert.verdict is None

    def test_pure_non_equilibrium_has_unit_regret(self, pennies):
        pi = validate_profile(pennies, [[[1, 0]], [[1, 0]]])
        cert = certify_profile(pennies, pi)
        # the mismatched player switches and gains 1 - 0
        assert cert.epsilon_achieved == pytest.approx(1.0)

    def test_achieved_below_bound(self):
        for game, pi in random_instances(67, 30):
            cert = certify_profile(game, pi)
            assert cert.epsilon_achieved <= cert.epsilon_bound + 1e-9

    def test_json_report_shape(self, pennies):
        cert = certify_profile(pennies, uniform_profile(pennies), 0.5)
        data = json.loads(cert.to_json())
        assert set(data) == {
            "residual", "epsilon_bound", "epsilon_achieved", "per_state_regret",
            "lambda", "d", "target", "verdict",
        }
        assert data["verdict"] is True
        assert data["d"] == choose_d(pennies, 2)


class TestBoundFormulas:
    def test_epsilon_prime(self, rng):
        g = random_game(rng, 2, 2, 2, 0.5)  # A_max=2, R_max=1
        assert epsilon_prime(g, 0.0) == 0.0
        assert epsilon_prime(g, 0.01) == pytest.approx(0.05)

    def test_epsilon_prime_collapses_without_rewards(self):
        from sgcert.game import validate_game

        g = validate_game(["s0"], [["a0", "a1"]], [[[1.0], [1.0]]],
                          [[[0.0, 0.0]]], 0.5)
        assert epsilon_prime(g, 0.3) == 0.3

    def test_gain_bound_value(self, rng):
        g = random_game(rng, 2, 2, 2, 0.5)
        assert residual_to_gain_bound(g, 0.0) == 0.0
        expected = 2 * (math.sqrt(0.05) / 0.5 + math.sqrt(0.05) + 0.05)
        assert residual_to_gain_bound(g, 0.01) == pytest.approx(expected)
        assert residual_to_gain_bound(g, 0.01) == pytest.approx(1.4416407865, abs=1e-9)

    def test_gain_bound_monotone(self, rng):
        g = random_game(rng, 2, 2, 2, 0.5)
        values = [residual_to_gain_bound(g, e) for e in np.linspace(0, 0.5, 20)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_mpe_bound_value(self, rng):
        g = random_game(rng, 2, 2, 2, 0.5)
        assert residual_to_mpe_bound(g, 0.0) == 0.0
        assert residual_to_mpe_bound(g, 0.01) == pytest.approx(2.8832815730, abs=1e-9)

    def test_mpe_bound_grows_with_gamma(self, rng):
        g1 = random_game(rng, 2, 2, 2, 0.5)
        g2 = random_game(np.random.default_rng(0), 2, 2, 2, 0.9)
        assert residual_to_mpe_bound(g2, 0.01) > residual_to_mpe_bound(g1, 0.01)


class TestGainToRegret:
    def test_equilibrium_passes_with_zeros(self):
        g = corpus.dominant_bimatrix()
        pi = validate_profile(g, [[[1, 0]], [[1, 0]]])
        report = gain_to_regret_check(g, pi)
        assert report.passed
        assert report.max_gain == 0.0
        assert report.max_regret <= 1e-12

    def test_random_profiles_pass(self):
        for game, pi in random_instances(71, 100):
            assert gain_to_regret_check(game, pi).passed

    def test_single_agent_specialization(self, rng):
        for _ in range(20):
            game = random_game(rng, 1, 2, 2, 0.5)
            pi = uniform_profile(game)
            assert gain_to_regret_check(game, pi).passed


class TestChooseD:
    def test_reference_values(self, toy, rng):
        assert choose_d(toy, 1) == 37888
        g = random_game(rng, 2, 2, 2, 0.5)
        assert choose_d(g, 10) == 3_778_150_400

    def test_quadratic_in_l(self, toy):
        assert choose_d(toy, 2) == 4 * choose_d(toy, 1)
        assert choose_d(toy, 10) == 100 * choose_d(toy, 1)

    def test_rejects_nonpositive_l(self, toy):
        with pytest.raises(ValueError):
            choose_d(toy, 0)
