# %% [markdown]
# # Equivalence and the point-count threshold
#
# Two codes `<x, f>` and `<x, g>` are equivalent when some invertible
# `(a b; c d)` and field automorphism make `c x + d g' = f o (a x + b g')`.
# For each automorphism this is a linear system over F_p.

# %%
from rmlab.equiv import delta_s_equivalent, known_family_battery, norm_minus_one_elements, u_equiv_decide
from rmlab.codes import make_code
from rmlab.fields import build_tower

F = build_tower(3, 1, 8)
minus = norm_minus_one_elements(F)
d = minus[0]
inv = F.arith.inv(d)
f = make_code(F, "delta_s", delta=d, s=1).f
g = make_code(F, "delta_s", delta=inv, s=3).f
print(u_equiv_decide(f, g))
print("closed form agrees:", delta_s_equivalent(F, d, 1, inv, 3))

# %%
for row in known_family_battery(F, samples=1, seed=0):
    print(f"{row.left:>16} vs {row.right:<16} {row.verdict}")

# %% [markdown]
# The lower bound `q^m - (d-1)(d-2) q^(m-1/2) - 5 d^(13/3) q^(m-1)` for
# `(m, d) = (3, 16)`, with certified rational enclosures.

# %%
from rmlab.geometry import cafure_matera, crossover, min_q, smallest_odd_prime_power_above

for q in (10 ** 6, 1039844, 1039845, 1039891):
    b = cafure_matera(q, 3, 16)
    print(q, "positive" if b.positive else "non-positive", f"(bits={b.bits})")
mq = min_q(3, 16)
print("crossover", round(crossover(3, 16), 3), "least integer", mq,
      "least odd prime power", smallest_odd_prime_power_above(mq))
