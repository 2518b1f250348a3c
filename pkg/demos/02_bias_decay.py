# %% [markdown]
# # How fast the duel bias vanishes
#
# The bias of an ordering q is eps * sum q_n (1 - eps)^n.  Periodic orderings
# only reach a power of eps.  The quantized sequence decays like
# sqrt(eps) * exp(-pi^2 / (24 eps)).

# %%
from fractions import Fraction

import mpmath

from onebit import build_filter, quantize
from onebit.analysis import bias, envelope, terms_for_envelope
from onebit.baselines import Ordering

grid = [Fraction(1, 10), Fraction(1, 20), Fraction(1, 50), Fraction(1, 100)]
n_max = max(terms_for_envelope(e) for e in grid)
q6 = quantize(build_filter(6, 0), None, n_max)

# %%
print(f"{'eps':>6} {'N':>6} {'q6 bias':>14} {'ratio':>10} {'alternating':>12} {'thue-morse':>12}")
for e in grid:
    n = terms_for_envelope(e)
    b = bias(q6, e, n)
    alt = bias(Ordering.alternating().prefix(4000), e, 4000)
    tm = bias(Ordering.thue_morse().prefix(4000), e, 4000)
    ratio = abs(b.value) / envelope(e)
    print(f"{float(e):>6} {n:>6} {mpmath.nstr(b.value, 6):>14} {mpmath.nstr(ratio, 4):>10} "
          f"{mpmath.nstr(alt.value, 4):>12} {mpmath.nstr(tm.value, 4):>12}")

# %% [markdown]
# The ratio column stays below a fixed constant, so the envelope's exponent
# pi^2/24 describes the decay.  The alternating ordering only manages eps/2.
