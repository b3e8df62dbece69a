# %% [markdown]
# # q-polynomials as F_q-linear maps
#
# A q-polynomial `sum a_i x^(q^i)` acts on F_{q^n}.  Composition modulo
# `x^(q^n) - x` matches the product of Dickson matrices.

# %%
import numpy as np

from rmlab.fields import build_tower
from rmlab.linpoly import LinearizedPoly, dickson_matrix, evaluate_many, fast_rank, rank_kernel

F = build_tower(3, 1, 8)
f = LinearizedPoly.from_terms(F, {1: 1, 5: 7})          # x^q + 7 x^(q^5)
g = LinearizedPoly.from_terms(F, {0: 2, 3: 100})
print(f, "\n", g)
print("D(f o g) == D(f) D(g):", dickson_matrix(f @ g) == dickson_matrix(f) @ dickson_matrix(g))

# %% [markdown]
# Rank and kernel, three ways: elimination on the Dickson matrix, on the
# prime-field matrix, and by counting the kernel directly.

# %%
allx = np.arange(F.order)
for delta in (7, 11, 1):
    h = LinearizedPoly.from_terms(F, {1: 1, 5: delta})
    kernel = np.count_nonzero(evaluate_many(h, allx) == 0)
    print(f"delta={delta:3d} rank/kernel={rank_kernel(h)} fp-rank={fast_rank(h)} |ker|={kernel}")
