# %% [markdown]
# # Which codes C_{delta,s} are MRD?
#
# The code spanned by `x` and `x^(q^s) + delta x^(q^(n/2+s))` depends on
# `delta` only through its norm `alpha` down to F_{q^(n/2)}, so one
# representative per norm class is enough.

# %%
import time
from collections import Counter

from rmlab.codes import norm_class_scan
from rmlab.fields import build_tower

F = build_tower(3, 1, 8)
t0 = time.perf_counter()
table = norm_class_scan(F, 1, "all", mode="exact")
print(f"{len(table.rows)} classes in {time.perf_counter() - t0:.1f}s")
print(Counter((r.verdict, r.min_distance) for r in table.rows))
print("MRD classes:", table.mrd_alphas())

# %% [markdown]
# Early exit stops a class at its first codeword of rank at most n - 2.

# %%
t0 = time.perf_counter()
fast = norm_class_scan(F, 3, "all", mode="decide")
print(f"s=3 decide scan: {time.perf_counter() - t0:.1f}s, MRD classes {fast.mrd_alphas()}")

# %% [markdown]
# n = 6 and n = 4 for comparison.

# %%
for q, n in ((3, 6), (3, 4), (5, 4)):
    ctx = build_tower(q, 1, n)
    t = norm_class_scan(ctx, 1, "all", mode="decide")
    print(f"q={q} n={n}: {len(t.mrd_alphas())} MRD of {len(t.rows)} classes")
