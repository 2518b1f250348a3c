# %% [markdown]
# # A one-bit approximation of zero
#
# The quantizer turns the all-zero coefficient sequence into a sequence of
# signs whose generating function stays small near z = 1.  With the lacunary
# filter of order sigma = 6 the first fifty signs are printed below, followed
# by the sigma = 8 sequence, whose opening looks like Thue-Morse.

# %%
from onebit import build_filter, quantize
from onebit.baselines import thue_morse_bit

q6 = quantize(build_filter(6, 0), None, 50)
print("q6 :", q6.to01())

# %%
q8 = quantize(build_filter(8, 0), None, 32)
tm = "".join("1" if thue_morse_bit(n) > 0 else "0" for n in range(32))
print("q8 :", q8.to01())
print("TM :", tm)
print("first disagreement at n =", next(i for i, (a, b) in enumerate(zip(q8.to01(), tm)) if a != b))

# %% [markdown]
# The residuals never leave [-1, 1].  The state keeps fixed-point maxima.

# %%
st = quantize(build_filter(6, 0), None, 2000).state
one = 1 << st.precision
print(f"max|v| = {st.max_abs_v / one:.6f}, max|w| = {st.max_abs_w / one:.6f}")
