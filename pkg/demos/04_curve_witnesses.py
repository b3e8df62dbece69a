# %% [markdown]
# # Curve points as non-MRD certificates
#
# For each norm class `alpha != +-1` a plane curve over F_{q^4} is attached;
# every affine point with `Z != 0` yields `(T, S, A, B)` satisfying four exact
# conditions, which force a codeword of rank at most 6.

# %%
from rmlab.codes import is_mrd, make_code, norm_classes
from rmlab.fields import build_tower
from rmlab.geometry import CurveParams, curve_points, genus, hasse_weil_window, witness_from_point

F = build_tower(3, 1, 8)
classes = norm_classes(F)
alpha = sorted(classes)[10]
for eps in (1, -1):
    params = CurveParams(F, alpha, eps)
    pts = curve_points(params, nonzero_z=True)
    w = witness_from_point(params, pts.points[0])
    print(params, "points with Z != 0:", pts.count)
    print("  witness T,S,A,B =", w.encodings())
print("code non-MRD:", not is_mrd(make_code(F, "delta_s", delta=classes[alpha], s=1)))

# %% [markdown]
# Point counts over all classes against the Hasse-Weil window.  With genus 5
# and 81 elements the lower end is vacuous, so the counts are what matter.

# %%
g = genus(3, 1)
print("genus", g, "window", hasse_weil_window(81, g))
counts = [curve_points(CurveParams(F, a, 1), with_points=False).count
          for a in sorted(classes) if a not in (1, F.arith.neg(1))]
print("min/max affine points:", min(counts), max(counts))
