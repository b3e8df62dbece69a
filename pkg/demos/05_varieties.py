# %% [markdown]
# # From the curve to quadrics in P^7
#
# Expanding `S` and `Z` on a normal basis of F_81 over F_3 turns the curve
# equation into four quadratic forms (W).  The Moore matrix and consecutive
# differences carry W onto V, cut out by the Frobenius conjugates of the curve.

# %%
import time

from rmlab.fields import build_tower
from rmlab.geometry import CurveParams, build_variety_V, build_variety_W, coherence_check
from rmlab.geometry.varieties import enumerate_W, printed_cross_coefficients, projective_size

F = build_tower(3, 1, 8)
params = CurveParams(F, int(F.subfield(4)[9]), 1)
W = build_variety_W(params)
pts = enumerate_W(W)
print("P^7(F_3) candidates:", pts.candidates, " W points:", len(pts.points), " with Z3 != 0:", int(pts.z3_nonzero.sum()))
print(coherence_check(params))

# %% [markdown]
# The cross term of the fourth conjugate carries `eta^((q^4+q^3)/2)`.
# Reducing that exponent to `(1+q^3)/2` flips the sign, since
# `eta^((q^4-1)/2) = -1` for a non-square `eta`.

# %%
V = build_variety_V(params)
derived = [F.arith.add(int(V.matrices[j, 4 + j, 4 + (j + 1) % 4]), int(V.matrices[j, 4 + j, 4 + (j + 1) % 4]))
           for j in range(4)]
print("derived:", derived)
print("reduced:", printed_cross_coefficients(params))

# %% [markdown]
# Affine W-point counts grow roughly like q^3 (recorded, not asserted).
# q = 7 would need the field of order 7^8, beyond the table backend.

# %%
for q in (3, 5):
    ctx = build_tower(q, 1, 8)
    t0 = time.perf_counter()
    P = CurveParams(ctx, int(ctx.subfield(4)[9]), 1)
    found = enumerate_W(build_variety_W(P))
    affine = len(found.points) * (q - 1) + 1
    print(f"q={q}: projective {len(found.points)}, affine {affine}, q^3={q ** 3}, "
          f"of {projective_size(q, 8)} candidates, {time.perf_counter() - t0:.1f}s")
