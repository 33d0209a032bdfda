"""The improvement map nudges every player toward profitable one-shot
deviations.  Its fixed points are exactly the stationary equilibria, and the
distance a profile moves (the residual) measures how far from equilibrium it
is.

    python3 demos/02_improvement_map.py
"""

import numpy as np

from sgcert import apply_f, gain_table, residual, validate_profile
from sgcert.corpus import matching_pennies, two_arm_bandit

# A single agent choosing between a good arm (reward 1) and a bad arm
# (reward 0).  Start with an even split.
bandit = two_arm_bandit()
pi = validate_profile(bandit, [[[0.5, 0.5]]])

table = gain_table(bandit, pi)
print("gains at the even split:", table.gains[0][0])

for step in range(12):
    res = residual(bandit, pi)
    print(f"step {step:2d}  p(good arm) = {pi.probs[0][0, 0]:.6f}  "
          f"residual = {res:.2e}")
    pi = apply_f(bandit, pi)

# The map drifts toward the pure optimum.  Convergence is slow near the
# boundary, which is why the solver in the command-line tool damps and
# iterates rather than expecting a one-shot answer.

# At an equilibrium nothing moves at all.
mp = matching_pennies()
uniform = validate_profile(mp, [[[0.5, 0.5]], [[0.5, 0.5]]])
print("\nmatching pennies, both uniform:")
print("  residual =", residual(mp, uniform))
out = apply_f(mp, uniform)
assert out.max_norm_distance(uniform) == 0.0
print("  the improvement map leaves the equilibrium fixed")
