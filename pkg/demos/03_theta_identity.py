# %% [markdown]
# # Two ways to evaluate theta_4 near z = 1
#
# The direct series 1 + 2 sum (-1)^n z^(n^2) converges slowly as z -> 1.  The
# modular (Poisson) form converges fast there, and the two must agree.

# %%
import mpmath

from onebit import PrecisionConfig
from onebit.analysis import theta4_direct, theta4_poisson

cfg = PrecisionConfig(mantissa_bits=128)
with mpmath.mp.workprec(160):
    for lam in ("0.05", "0.2", "1", "5"):
        lam = mpmath.mpf(lam)
        d = theta4_direct(mpmath.exp(-lam), cfg)
        p = theta4_poisson(lam, cfg)
        print(f"lambda={mpmath.nstr(lam, 3):>5}  direct={mpmath.nstr(d.value, 20):>26}  "
              f"gap={mpmath.nstr(abs(d.value - p.value), 3)}")

# %% [markdown]
# For small lambda theta_4 is of size exp(-pi^2 / (4 lambda)), which is where
# the decay exponent of the bias comes from.
