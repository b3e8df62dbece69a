# %% [markdown]
# # The field tower
#
# Everything lives in one field F_{p^(e n)} built from the first monic
# irreducible polynomial in integer-encoding order.  Elements are integers
# `sum c_i p^i`; subfields are the fixed points of a Frobenius power.

# %%
from rmlab.fields import (build_tower, find_nonsquare, find_normal_element, is_square,
                          relative_norm, relative_trace, sqrt)

F9 = build_tower(3, 1, 2)
print(F9)
t = F9.theta()
print("t*t =", (t * t).value, " t^3 =", t.frobenius(1).value)

# %% [markdown]
# Square roots, non-squares and normal elements are chosen deterministically:
# the smallest encoding wins.

# %%
print("sqrt(-1) =", sqrt(F9, F9(2, 2)).value)
print("first non-square of F_9:", find_nonsquare(F9, 2).value)
xi, moore = find_normal_element(F9, 2)
print("normal element:", xi.value, "Moore determinant:", moore.det.value)

# %% [markdown]
# The tower used for the n = 8 experiments: F_3 < F_81 < F_6561.

# %%
F = build_tower(3, 1, 8)
x = F(1234)
print("level of x:", F.level_of(x))
print("N_{q^8/q^4}(x) =", relative_norm(F, x, 4).value, " N_{q^8/q}(x) =", relative_norm(F, x, 1).value)
print("Tr_{q^8/q}(x) =", relative_trace(F, x, 1).value)
half = F.subfield(4)
print("squares in F_81*:", sum(is_square(F, F(int(a), 4)) for a in half[1:]))
