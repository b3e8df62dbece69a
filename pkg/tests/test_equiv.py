import numpy as np
import pytest

from rmlab.codes import make_code
from rmlab.equiv import (
    EQUIVALENT, INCONCLUSIVE, NOT_EQUIVALENT, automorphism_split, delta_s_equivalent, equivalence_system,
    known_family_battery, norm_minus_one_elements, restriction_partner, twisted_parameters, u_equiv_decide,
    verify_witness,
)
from rmlab.exceptions import InvalidParameter
from rmlab.fields import build_tower, relative_norm
from rmlab.linpoly import LinearizedPoly, apply_automorphism, compose

F38 = build_tower(3, 1, 8)
F34 = build_tower(3, 1, 4)


def coefficient_route(f, g, w):
    """c x + d g^phi == f o (a x + b g^phi), checked on coefficients by composition."""
    ctx = f.ctx
    a, b, c, d, k = w
    i, j = automorphism_split(ctx, k)
    G = apply_automorphism(g, i, j)
    lhs = LinearizedPoly.scalar(ctx, c) + G.scale(d)
    rhs = compose(f, LinearizedPoly.scalar(ctx, a) + G.scale(b))
    return lhs == rhs


def norm_ok(ctx, delta):
    return relative_norm(ctx, ctx(int(delta)), ctx.n // 2) != ctx.one


def test_reflexive_with_identity_witness():
    f = make_code(F34, "delta_s", delta=5, s=1).f
    dec = u_equiv_decide(f, f)
    assert dec.verdict == EQUIVALENT and dec.equivalent
    assert verify_witness(f, f, (1, 0, 0, 1, 0))
    assert verify_witness(f, f, dec.witness)
    assert coefficient_route(f, f, dec.witness)


def test_witness_verification_rejects_singular_and_wrong():
    f = make_code(F34, "delta_s", delta=5, s=1).f
    assert not verify_witness(f, f, (0, 0, 0, 0, 0))
    assert not verify_witness(f, f, (1, 0, 0, 2, 0))


def test_system_solutions_are_identities():
    rng = np.random.default_rng(0)
    f = make_code(F34, "delta_s", delta=5, s=1).f
    g = make_code(F34, "delta_s", delta=7, s=1).f
    from rmlab.fpla import nullspace
    M = equivalence_system(f, g)
    N = nullspace(M, 3)
    assert len(N)
    for coeffs in rng.integers(0, 3, (10, len(N))):
        v = (coeffs @ N) % 3
        a, b, c, d = (int(F34.vencode(v[4 * k:4 * k + 4])) for k in range(4))
        assert coefficient_route(f, g, (a, b, c, d, 0))


@pytest.mark.parametrize("p,n", [(3, 4), (5, 4), (3, 8)])
def test_predicate_agrees_with_linear_system(p, n):
    ctx = build_tower(p, 1, n)
    rng = np.random.default_rng(p * n)
    s_values = [s for s in range(1, n) if np.gcd(s, n // 2) == 1]
    xs = np.arange(1, ctx.order)
    unit = xs[ctx.vpow(xs, 1 + ctx.q ** (n // 2)) == 1]
    outcomes = []
    while len(outcomes) < 16:
        d1, d2 = (int(v) for v in rng.integers(1, ctx.order, 2))
        s1, s2 = (int(v) for v in rng.choice(s_values, 2))
        if len(outcomes) % 2:
            # same norm up to a field automorphism, times a norm-one factor
            d2 = (ctx(d1).p_power(int(rng.integers(0, n))) * ctx(int(rng.choice(unit)))).value
            s2 = s1
        if not (norm_ok(ctx, d1) and norm_ok(ctx, d2)):
            continue
        f = make_code(ctx, "delta_s", delta=d1, s=s1).f
        g = make_code(ctx, "delta_s", delta=d2, s=s2).f
        dec = u_equiv_decide(f, g, mrd=(False, False))
        assert dec.verdict != INCONCLUSIVE
        assert dec.equivalent == delta_s_equivalent(ctx, d1, s1, d2, s2)
        if dec.equivalent:
            assert coefficient_route(f, g, dec.witness)
        outcomes.append(dec.equivalent)
    assert any(outcomes) and not all(outcomes)


def test_symmetry():
    rng = np.random.default_rng(1)
    for _ in range(6):
        d1, d2 = (int(v) for v in rng.integers(1, F34.order, 2))
        if not (norm_ok(F34, d1) and norm_ok(F34, d2)):
            continue
        f = make_code(F34, "delta_s", delta=d1, s=1).f
        g = make_code(F34, "delta_s", delta=d2, s=3).f
        assert u_equiv_decide(f, g).verdict == u_equiv_decide(g, f).verdict


def test_frobenius_of_norm_is_equivalent():
    rng = np.random.default_rng(2)
    for d in rng.integers(1, F38.order, 5):
        d = F38(int(d))
        if not norm_ok(F38, d):
            continue
        d2 = d.frobenius(1)                      # N(d^q) = N(d)^q
        assert delta_s_equivalent(F38, d.value, 1, d2.value, 1)
        inv = 1 / d                               # (delta, 1) ~ (delta^-1, 3) since 1 + 3 = n/2
        assert delta_s_equivalent(F38, d.value, 1, inv.value, 3)
        f = make_code(F38, "delta_s", delta=d.value, s=1).f
        g = make_code(F38, "delta_s", delta=inv.value, s=3).f
        assert u_equiv_decide(f, g, mrd=(False, False)).verdict == EQUIVALENT


def test_predicate_handles_large_s():
    d = 5
    inv = F34.arith.inv(d)
    # C_{d,3} = C_{1/d,1} as codes when n = 4
    assert delta_s_equivalent(F34, d, 3, inv, 1)


def test_predicate_rejects_norm_one():
    xs = np.arange(1, F38.order)
    d = int(xs[F38.vpow(xs, 82) == 1][1])
    with pytest.raises(InvalidParameter):
        delta_s_equivalent(F38, d, 1, 5, 1)


def test_exhaustive_negative_and_inconclusive():
    F9 = build_tower(3, 1, 2)
    zero = LinearizedPoly.zero(F9)
    frob = LinearizedPoly.monomial(F9, 1)
    small = u_equiv_decide(zero, frob)
    assert small.verdict == NOT_EQUIVALENT               # p^k = 81 fits the enumeration
    assert max(small.solution_dims) > 0
    big = u_equiv_decide(LinearizedPoly.zero(F38), LinearizedPoly.monomial(F38, 1))
    assert big.verdict == INCONCLUSIVE and big.equivalent is None
    assert u_equiv_decide(zero, frob, limit=1).verdict == INCONCLUSIVE


def test_scope():
    f = make_code(F34, "gabidulin", r=1).f
    assert u_equiv_decide(f, f).scope == "code"
    z = LinearizedPoly.zero(F34)
    assert u_equiv_decide(z, z).scope == "U-equivalence only"


def test_nonprime_q_uses_all_automorphisms():
    F = build_tower(3, 2, 4)
    rng = np.random.default_rng(3)
    g = make_code(F, "delta_s", delta=int(rng.integers(2, F.order)), s=1).f
    # conjugating coefficients by x^p gives an equivalent polynomial with k = 1
    f = apply_automorphism(g, 1, 0)
    dec = u_equiv_decide(f, g, mrd=(False, False))
    assert dec.verdict == EQUIVALENT
    assert coefficient_route(f, g, dec.witness)


def test_parameter_lists():
    minus = norm_minus_one_elements(F38)
    assert len(minus) == 82
    assert all(relative_norm(F38, F38(h), 4).value == 2 for h in minus[:10])
    eps = twisted_parameters(F38)
    assert all(relative_norm(F38, F38(v), 1).value not in (0, 1) for v in eps[:10])


def test_restriction_partner():
    minus = norm_minus_one_elements(F38)
    h2, dec = restriction_partner(F38, minus[0], 3)
    assert dec.verdict == EQUIVALENT
    src = make_code(F38, "quadrinomial", h=minus[0], r=3).f
    dst = make_code(F38, "quadrinomial", h=h2, r=1).f
    assert verify_witness(dst, src, dec.witness)


def test_battery_small():
    rows = known_family_battery(F38, samples=1, seed=5, r_values=(1, 3))
    assert rows[0].verdict == EQUIVALENT
    assert all(r.ok for r in rows)
    assert sum(r.verdict == NOT_EQUIVALENT for r in rows) == len(rows) - 1
