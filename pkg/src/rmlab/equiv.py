"""Equivalence of the subspaces ``U_f = {(y, f(y))}`` under semilinear maps of F_{q^n}^2.

``U_f`` and ``U_g`` are equivalent when for some automorphism ``phi`` and some
``a, b, c, d`` with ``ad - bc != 0``

    c y^phi + d g(y)^phi = f(a y^phi + b g(y)^phi)    for every y.

Writing ``G = g^phi`` (automorphism applied to the coefficients) this reads
``c x + d G - f o (a x + b G) = 0`` in ``L_{n,q}``, a linear condition on the
F_p-digits of ``(a, b, c, d)``.  For codes that are both MRD this is the same as
equivalence of ``C_f`` and ``C_g``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fpla
from .codes import BiGeneratedCode, is_mrd, make_code, parse_family
from .exceptions import InvalidParameter
from .fields import FieldContext, relative_norm
from .linpoly import LinearizedPoly, apply_automorphism, evaluate_many

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"
INCONCLUSIVE = "inconclusive"

ENUMERATION_LIMIT = 10 ** 6


@dataclass(frozen=True)
class EquivDecision:
    verdict: str
    witness: tuple[int, int, int, int, int] | None = None   # (a, b, c, d, k) with phi = x^(p^k)
    method: str = "linear_system"
    solution_dims: tuple[int, ...] = ()                      # F_q-dimension per automorphism
    scope: str = "U-equivalence only"

    @property
    def equivalent(self) -> bool | None:
        if self.verdict == INCONCLUSIVE:
            return None
        return self.verdict == EQUIVALENT


def automorphism_split(ctx: FieldContext, k: int) -> tuple[int, int]:
    """``x^(p^k) = (x^(p^i))^(q^j)`` with ``i < e``, ``j < n``."""
    k %= ctx.degree
    return k % ctx.e, k // ctx.e


def _residual(f: LinearizedPoly, G: LinearizedPoly, a: int, b: int, c: int, d: int) -> LinearizedPoly:
    ctx = f.ctx
    inner = LinearizedPoly.scalar(ctx, a) + G.scale(b)
    return LinearizedPoly.scalar(ctx, c) + G.scale(d) - (f @ inner)


def equivalence_system(f: LinearizedPoly, G: LinearizedPoly) -> np.ndarray:
    """F_p-matrix of ``(a, b, c, d) -> c x + d G - f o (a x + b G)``.

    Unknowns are the digits of ``a``, ``b``, ``c``, ``d`` in that order; rows
    are the digits of the ``n`` resulting coefficients.
    """
    ctx = f.ctx
    D = ctx.degree
    cols = []
    for slot in range(4):
        for k in range(D):
            args = [0, 0, 0, 0]
            args[slot] = ctx.p ** k
            r = _residual(f, G, *args)
            cols.append(ctx.vdigits(np.array(r.coeffs, dtype=np.int64)).reshape(-1))
    return np.array(cols, dtype=np.int64).T


def verify_witness(f: LinearizedPoly, g: LinearizedPoly, witness) -> bool:
    """Check the identity pointwise, applying the automorphism to ``y`` and ``g(y)``.

    This route avoids both composition and the coefficient action of the
    automorphism, so it is independent of the linear system.  All points are
    used when the field is small, otherwise a fixed sample.
    """
    ctx = f.ctx
    a, b, c, d, k = (int(v) for v in witness)
    A = ctx.arith
    if A.sub(A.mul(a, d), A.mul(b, c)) == 0:
        return False
    if ctx.order <= 1 << 16:
        ys = np.arange(ctx.order, dtype=np.int64)
    else:
        ys = np.random.default_rng(0).integers(0, ctx.order, size=4096)
    e = ctx.p ** (k % ctx.degree)
    yp = ctx.vpow(ys, e)
    gp = ctx.vpow(evaluate_many(g, ys), e)
    lhs = ctx.vadd(ctx.vmul(c, yp), ctx.vmul(d, gp))
    rhs = evaluate_many(f, ctx.vadd(ctx.vmul(a, yp), ctx.vmul(b, gp)))
    return bool(np.array_equal(lhs, rhs))


def _coeff_rows(ctx: FieldContext, basis: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Encodings of ``(a, b, c, d)`` for each row of F_p-combination coefficients."""
    vecs = (coeffs @ basis) % ctx.p
    return ctx.vencode(vecs.reshape(len(vecs), 4, ctx.degree))


def _search_invertible(ctx: FieldContext, basis: np.ndarray, limit: int):
    """Look for a solution with ``ad - bc != 0``.

    Returns ``(found, exhausted)``: with ``p^k <= limit`` every element of the
    solution space is tested; otherwise only 0/1 combinations of the basis
    (at most ``limit`` of them) are.
    """
    k = len(basis)
    if k == 0:
        return None, True
    p = ctx.p
    exhaustive = p ** k <= limit
    radix = p if exhaustive else 2
    total = radix ** k if exhaustive else min(2 ** k, limit)
    chunk = 1 << 15
    for start in range(1, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        coeff = np.empty((idx.size, k), dtype=np.int64)
        r = idx.copy()
        for i in range(k):
            coeff[:, i] = r % radix
            r //= radix
        abcd = _coeff_rows(ctx, basis, coeff)
        det = ctx.vsub(ctx.vmul(abcd[:, 0], abcd[:, 3]), ctx.vmul(abcd[:, 1], abcd[:, 2]))
        hit = np.nonzero(det)[0]
        if hit.size:
            return tuple(int(v) for v in abcd[hit[0]]), exhaustive
    return None, exhaustive


def u_equiv_decide(f: LinearizedPoly, g: LinearizedPoly, limit: int = ENUMERATION_LIMIT,
                   mrd: tuple[bool, bool] | None = None) -> EquivDecision:
    """Decide whether ``U_f`` and ``U_g`` are equivalent.

    Every automorphism ``x -> x^(p^k)``, ``0 <= k < e n``, is tried.  A negative
    answer is only given when every solution space was searched exhaustively;
    otherwise the verdict is ``inconclusive``.  ``mrd`` states whether both
    codes are MRD (computed when omitted); only then is the result a statement
    about the codes.
    """
    ctx = f.ctx
    if g.ctx != ctx:
        raise InvalidParameter("polynomials belong to different contexts")
    if mrd is None:
        mrd = (is_mrd(make_code(ctx, "custom", f=f)), is_mrd(make_code(ctx, "custom", f=g)))
    scope = "code" if all(mrd) else "U-equivalence only"
    dims = []
    all_exhausted = True
    for k in range(ctx.degree):
        i, j = automorphism_split(ctx, k)
        G = apply_automorphism(g, i, j)
        basis = fpla.nullspace(equivalence_system(f, G), ctx.p)
        dims.append(len(basis) // ctx.e)
        found, exhausted = _search_invertible(ctx, basis, limit)
        if found is not None:
            w = (*found, k)
            if not verify_witness(f, g, w):
                raise AssertionError(f"witness {w} fails the pointwise check")
            return EquivDecision(EQUIVALENT, w, "linear_system", tuple(dims), scope)
        all_exhausted &= exhausted
    verdict = NOT_EQUIVALENT if all_exhausted else INCONCLUSIVE
    return EquivDecision(verdict, None, "linear_system", tuple(dims), scope)


# ---------------------------------------------------------------------------
# closed-form predicate for the delta_s family
# ---------------------------------------------------------------------------

def _normalise(ctx: FieldContext, delta: int, s: int) -> tuple[int, int]:
    """Bring ``s`` below ``n/2`` using ``C_{delta, s+n/2} = C_{1/delta, s}``."""
    half = ctx.n // 2
    s %= ctx.n
    if s > half:
        return ctx.arith.inv(delta), s - half
    return delta, s


def delta_s_equivalent(ctx: FieldContext, delta: int, s: int, delta2: int, s2: int) -> bool:
    """Closed-form test for ``U_{delta,s} ~ U_{delta2,s2}``.

    After normalising ``s, s2 < n/2``: equivalent iff for some automorphism
    ``sigma`` of ``F_{q^(n/2)}`` either ``s2 = s`` and ``N(delta) = N(delta2)^sigma``,
    or ``s + s2 = n/2`` and ``N(delta) N(delta2)^sigma = 1``.
    """
    if ctx.n % 2 or ctx.n < 4:
        raise InvalidParameter("need n >= 4 even")
    for d, t in ((delta, s), (delta2, s2)):
        make_code(ctx, "delta_s", delta=d, s=t)
    d1, t1 = _normalise(ctx, int(delta), s)
    d2, t2 = _normalise(ctx, int(delta2), s2)
    half = ctx.n // 2
    n1 = relative_norm(ctx, ctx(d1), half)
    n2 = relative_norm(ctx, ctx(d2), half)
    if n1 == 1 or n2 == 1:
        raise InvalidParameter("norms equal to 1 are excluded")
    for k in range(ctx.e * half):                     # Aut(F_{q^(n/2)}) = <x^p>
        n2s = n2.p_power(k)
        if t1 == t2 and n1 == n2s:
            return True
        if t1 + t2 == half and n1 * n2s == 1:
            return True
    return False


# ---------------------------------------------------------------------------
# battery against the known families in L_{8,q}
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BatteryRow:
    left: str
    right: str
    verdict: str
    automorphism_index: int | None
    witness: tuple[int, int, int, int] | None
    scope: str
    expected: str

    @property
    def ok(self) -> bool:
        return self.verdict == self.expected

    def as_dict(self) -> dict:
        return {
            "family_spec_left": self.left,
            "family_spec_right": self.right,
            "automorphism_index": "" if self.automorphism_index is None else self.automorphism_index,
            "verdict": self.verdict,
            "witness_encodings": "" if self.witness is None else " ".join(map(str, self.witness)),
        }


BATTERY_COLUMNS = ("family_spec_left", "family_spec_right", "automorphism_index", "verdict", "witness_encodings")


def _row(left: BiGeneratedCode, right: BiGeneratedCode, expected: str, mrd=(True, True)) -> BatteryRow:
    dec = u_equiv_decide(left.f, right.f, mrd=mrd)
    w = dec.witness
    return BatteryRow(left.spec(), right.spec(), dec.verdict,
                      None if w is None else w[4], None if w is None else w[:4], dec.scope, expected)


def norm_minus_one_elements(ctx: FieldContext) -> list[int]:
    """Encodings ``h`` with ``N_{q^n/q^(n/2)}(h) = -1``, ascending."""
    xs = np.arange(1, ctx.order, dtype=np.int64)
    nrm = ctx.vpow(xs, 1 + ctx.q ** (ctx.n // 2))
    return [int(v) for v in xs[nrm == ctx.arith.neg(1)]]


def twisted_parameters(ctx: FieldContext) -> list[int]:
    """Encodings ``eps`` with ``N_{q^n/q}(eps)`` not in ``{0, 1}``, ascending."""
    xs = np.arange(1, ctx.order, dtype=np.int64)
    nrm = ctx.vpow(xs, (ctx.order - 1) // (ctx.q - 1))
    return [int(v) for v in xs[nrm != 1]]


def restriction_partner(ctx: FieldContext, h: int, r: int, candidates=None) -> tuple[int, EquivDecision] | None:
    """Some ``h2`` with ``N(h2) = -1`` such that ``U_{psi_{h,r}} ~ U_{psi_{h2,1}}``, found by search."""
    src = make_code(ctx, "quadrinomial", h=h, r=r)
    for h2 in (norm_minus_one_elements(ctx) if candidates is None else candidates):
        dst = make_code(ctx, "quadrinomial", h=h2, r=1)
        dec = u_equiv_decide(dst.f, src.f, mrd=(True, True))
        if dec.verdict == EQUIVALENT:
            return h2, dec
    return None


def known_family_battery(ctx: FieldContext, samples: int = 2, seed: int = 0,
                         r_values=(1, 3, 5, 7)) -> list[BatteryRow]:
    """Decide ``C_{delta,1}`` (``N(delta) = -1``) against the other known MRD families.

    Sampled ``delta``, ``eps`` and ``h`` are drawn with a seeded generator.
    Every row is expected non-equivalent except the sanity row comparing a
    code with itself.
    """
    if ctx.n != 8:
        raise InvalidParameter("the battery is defined for n = 8")
    ctx.require_odd("the battery")
    rng = np.random.default_rng(seed)
    minus = norm_minus_one_elements(ctx)
    deltas = sorted(int(v) for v in rng.choice(minus, size=samples, replace=False))
    hs = sorted(int(v) for v in rng.choice(minus, size=samples, replace=False))
    epss = sorted(int(v) for v in rng.choice(twisted_parameters(ctx), size=samples, replace=False))
    rows = []
    for delta in deltas:
        code = make_code(ctx, "delta_s", delta=delta, s=1)
        rows.append(_row(code, code, EQUIVALENT))
        for r in r_values:
            rows.append(_row(code, make_code(ctx, "gabidulin", r=r), NOT_EQUIVALENT))
            for eps in epss:
                rows.append(_row(code, make_code(ctx, "twisted", epsilon=eps, r=r), NOT_EQUIVALENT))
        for h in hs:
            rows.append(_row(code, make_code(ctx, "quadrinomial", h=h, r=1), NOT_EQUIVALENT))
    return rows


def decide_specs(ctx: FieldContext, left: str, right: str, limit: int = ENUMERATION_LIMIT) -> BatteryRow:
    """Decide two codes given in the family grammar."""
    a, b = parse_family(ctx, left), parse_family(ctx, right)
    dec = u_equiv_decide(a.f, b.f, limit=limit)
    w = dec.witness
    return BatteryRow(a.spec(), b.spec(), dec.verdict, None if w is None else w[4],
                      None if w is None else w[:4], dec.scope, "")
