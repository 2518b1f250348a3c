# %% [markdown]
# # Simulating the duel
#
# Two players alternate shots according to an ordering; each shot hits with
# probability eps.  The empirical survival gap should match the analytic bias.

# %%
from fractions import Fraction

from onebit.analysis import bias
from onebit.baselines import Ordering, beta_expansion_ordering
from onebit.duel import simulate_duel

alt = Ordering.alternating().prefix(40)
rep = simulate_duel(alt, 0.5, 10 ** 6, seed=1, analytic=1 / 3)
print(f"alternating eps=1/2: empirical {rep.empirical:.5f}, analytic 1/3, z = {rep.z_score:+.2f}")

# %%
beta = beta_expansion_ordering(Fraction(1, 4), 100)
analytic = float(bias(beta, Fraction(1, 4), 100).value)
rep = simulate_duel(beta.bits, 0.25, 10 ** 6, seed=1, analytic=analytic)
print(f"beta eps=1/4: empirical {rep.empirical:.5f}, analytic {analytic:.2e}, z = {rep.z_score:+.2f}")
