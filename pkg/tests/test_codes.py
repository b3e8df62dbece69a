import json

import numpy as np
import pytest

from rmlab.codes import (
    ALMOST_MRD, MRD, NOT_MRD, OTHER, classify, idealiser, is_mrd, make_code, min_distance,
    norm_class_scan, norm_classes, parse_family, select_classes,
)
from rmlab.exceptions import InvalidParameter
from rmlab.fields import build_tower, relative_norm
from rmlab.linpoly import LinearizedPoly, compose, evaluate_many

from oracles import brute_rank_fq

F34 = build_tower(3, 1, 4)
F38 = build_tower(3, 1, 8)


def brute_min_distance(code):
    """Min rank over a x + f(x) (b = 1 after scaling); b = 0 gives rank n."""
    ctx = code.ctx
    allx = np.arange(ctx.order)
    fx = evaluate_many(code.f, allx)
    best = ctx.n
    for a in range(ctx.order):
        vals = ctx.vadd(ctx.vmul(a, allx), fx)
        best = min(best, brute_rank_fq(vals.tolist(), ctx.q, ctx.order))
    return best


def test_family_constraints():
    with pytest.raises(InvalidParameter):
        make_code(F38, "delta_s", delta=0, s=1)
    with pytest.raises(InvalidParameter):
        make_code(F38, "delta_s", delta=5, s=2)          # gcd(2, 4) != 1
    with pytest.raises(InvalidParameter):
        make_code(F38, "gabidulin", r=2)
    with pytest.raises(InvalidParameter):
        make_code(F38, "twisted", epsilon=1, r=1)        # norm 1
    with pytest.raises(InvalidParameter):
        make_code(F38, "quadrinomial", h=1, r=1)         # N(1) = 1 != -1
    with pytest.raises(InvalidParameter):
        make_code(build_tower(3, 1, 5), "delta_s", delta=1, s=1)
    with pytest.raises(InvalidParameter):
        make_code(F38, "nonsense")
    for bad in ("delta_s:5", "gab:x", "quad:1:1", "foo:1"):
        with pytest.raises(InvalidParameter):
            parse_family(F38, bad)


def test_parse_family_round_trip():
    allx = np.arange(1, F38.order)
    h = int(allx[F38.vpow(allx, 82) == 2][0])
    g = int(F38.arith.generator)
    for spec in ("delta_s:7:3", "gab:3", f"twisted:{g}:1", f"quad:{h}:5"):
        code = parse_family(F38, spec)
        assert code.spec() == spec
    custom = parse_family(F34, "custom:0,1,0,5")
    assert custom.f.coeffs == (0, 1, 0, 5)


@pytest.mark.parametrize("ctx", [F34, build_tower(3, 1, 6), build_tower(5, 1, 4)], ids=["3^4", "3^6", "5^4"])
def test_min_distance_matches_brute_force(ctx):
    rng = np.random.default_rng(0)
    deltas = rng.integers(1, ctx.order, 6)
    for d in deltas:
        code = make_code(ctx, "delta_s", delta=int(d), s=1)
        want = brute_min_distance(code)
        assert min_distance(code) == want
        assert is_mrd(code) == (want == ctx.n - 1)


def test_small_n_is_mrd():
    for p in (3, 5):
        ctx = build_tower(p, 1, 2)
        for d in range(1, ctx.order):
            assert is_mrd(make_code(ctx, "delta_s", delta=d, s=1))


def test_gabidulin_is_mrd_and_twisted():
    assert classify(make_code(F38, "gabidulin", r=1)).verdict == MRD
    assert classify(make_code(F38, "gabidulin", r=3)).verdict == MRD
    g = int(F38.arith.generator)          # its norm generates F_q^*, so it is not 1
    assert is_mrd(make_code(F38, "twisted", epsilon=g, r=1))


def test_classification_labels():
    from rmlab.codes import Classification
    assert Classification.from_distance(7, 8).verdict == MRD
    assert Classification.from_distance(6, 8).verdict == ALMOST_MRD
    assert Classification.from_distance(4, 8).verdict == OTHER


def test_norm_classes():
    classes = norm_classes(F38)
    assert sorted(classes) == sorted(int(a) for a in F38.subfield(4) if a)
    for alpha, delta in classes.items():
        assert relative_norm(F38, F38(delta), 4).value == alpha
        smaller = np.arange(1, delta)
        assert not np.any(F38.vpow(smaller, 82) == alpha)


def test_class_invariance_exhaustive_q3_n8():
    # every delta of a norm class gives the same MRD verdict
    deltas = np.arange(1, F38.order)
    norms = F38.vpow(deltas, 82)
    verdict = {}
    for d, a in zip(deltas, norms):
        v = is_mrd(make_code(F38, "delta_s", delta=int(d), s=1))
        assert verdict.setdefault(int(a), v) == v
    assert [a for a, v in verdict.items() if v] == [2]


def test_decide_mode_agrees_with_exact():
    classes = select_classes(F38, "sample:12", seed=3)
    exact = norm_class_scan(F38, 1, classes, mode="exact")
    fast = norm_class_scan(F38, 1, classes, mode="decide")
    for a, b in zip(exact.rows, fast.rows):
        assert a.alpha == b.alpha
        assert (a.verdict == MRD) == (b.verdict == MRD)
        assert b.verdict in (MRD, NOT_MRD)
        assert b.min_distance >= a.min_distance


def test_scan_is_thread_deterministic():
    one = norm_class_scan(F38, 1, "sample:10", mode="decide", threads=1, seed=9)
    four = norm_class_scan(F38, 1, "sample:10", mode="decide", threads=4, seed=9)
    assert one.to_csv() == four.to_csv()
    assert one.to_json() == four.to_json()


def test_csv_and_json_agree():
    table = norm_class_scan(F34, 1, "all", mode="exact")
    rows = json.loads(table.to_json())
    lines = table.to_csv().strip().split("\n")
    assert lines[0] == "alpha_encoding,delta_representative_encoding,min_distance,verdict"
    assert len(lines) == len(rows) + 1 == 9
    for line, row in zip(lines[1:], rows):
        assert line.split(",") == [str(row[c]) for c in lines[0].split(",")]


def test_select_classes():
    assert select_classes(F38, "sample:5", seed=1) == select_classes(F38, "sample:5", seed=1)
    assert select_classes(F38, "alpha:2") == [2]
    with pytest.raises(InvalidParameter):
        select_classes(F38, "alpha:5")                  # not in F_{q^4}
    with pytest.raises(InvalidParameter):
        select_classes(F38, "sample:0")
    with pytest.raises(InvalidParameter):
        select_classes(F38, "most")


def test_idealisers_of_gabidulin():
    code = make_code(F34, "gabidulin", r=1)
    for side in ("left", "right"):
        rep = idealiser(code, side)
        assert rep.dimension == 4
        assert rep.is_field and rep.closed and rep.commutative


def test_idealiser_of_full_space_is_not_a_field():
    F9 = build_tower(3, 1, 2)
    code = make_code(F9, "custom", f=LinearizedPoly.monomial(F9, 1))
    rep = idealiser(code, "left")
    assert rep.dimension == 4                          # all 2x2 matrices over F_3
    assert rep.closed and not rep.commutative and rep.is_field is False


def test_right_idealiser_contains_half_field():
    # C o tau_mu = tau_{mu^(q^s)} o C for mu in F_{q^(n/2)}, so those lie in the right idealiser
    code = make_code(F34, "delta_s", delta=5, s=1)
    rep = idealiser(code, "right")
    assert rep.dimension >= 2
    for mu in F34.subfield(2)[1:]:
        tau = LinearizedPoly.scalar(F34, int(mu))
        lhs = compose(code.f, tau)
        rhs = compose(LinearizedPoly.scalar(F34, F34.frob_raw(int(mu), 1)), code.f)
        assert lhs == rhs


def test_idealiser_over_nonprime_q():
    F = build_tower(3, 2, 4)
    code = make_code(F, "gabidulin", r=1)
    rep = idealiser(code, "left")
    assert rep.dimension == 4 and len(rep.basis) == 4
    assert rep.is_field
    with pytest.raises(InvalidParameter):
        idealiser(code, "middle")


def kernel_count_mrd(ctx, delta, s):
    """a x + f(x) loses rank exactly when -a = f(x)/x for several x; MRD iff each
    ratio is taken by at most q - 1 nonzero x (a kernel of dimension <= 1)."""
    xs = np.arange(1, ctx.order)
    f = make_code(ctx, "delta_s", delta=delta, s=s).f
    ratios = ctx.vmul(evaluate_many(f, xs), ctx.vpow(xs, ctx.order - 2))
    _, counts = np.unique(ratios, return_counts=True)
    return counts.max() <= ctx.q - 1


@pytest.mark.parametrize("p,n", [(3, 6), (3, 4), (5, 4), (3, 8)])
def test_scan_matches_kernel_count_oracle(p, n):
    ctx = build_tower(p, 1, n)
    table = norm_class_scan(ctx, 1, "all", mode="decide")
    for row in table.rows:
        assert (row.verdict == MRD) == kernel_count_mrd(ctx, row.delta, 1)
    if (p, n) == (3, 6):
        assert len(table.mrd_alphas()) == 6
