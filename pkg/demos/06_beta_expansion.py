# %% [markdown]
# # A perfectly fair ordering for one eps
#
# The greedy expansion of 1 in base 1/(1 - eps) gives an ordering whose bias
# is exactly zero at that eps.  It is tuned to a single eps, so at any other
# hit probability it loses its advantage.

# %%
from fractions import Fraction

import mpmath

from onebit.analysis import bias
from onebit.baselines import beta_expansion_ordering

seq = beta_expansion_ordering(Fraction(1, 4), 200)
print(seq.to01(60))
for e in (Fraction(1, 4), Fraction(1, 5), Fraction(1, 10)):
    print(f"eps={e}: bias {mpmath.nstr(bias(seq, e, 200).value, 5)}")
