# %% [markdown]
# # The approach region R_M
#
# R_M = {z : |1 - z| <= M (1 - |z|)} is a teardrop touching the unit circle
# at z = 1.  Its boundary has the polar form
# r(theta) = exp(-acosh(1 + (1 - cos theta) / (M^2 - 1))).

# %%
import mpmath

from onebit.analysis import in_region, region_boundary

for M in (1.1, 2, 5):
    pts = region_boundary(M, 8)
    print(f"M = {M}")
    for theta, z in pts:
        print(f"  theta={mpmath.nstr(theta, 5):>8}  |z|={mpmath.nstr(abs(z), 8)}")

# %%
print(in_region(mpmath.mpf("0.9"), 2), in_region(mpmath.mpc("0.9", "0.3"), 2))
