"""Quadric systems in P^7 obtained from the curve by normal-basis expansion.

Writing ``S = sum S_i xi^(q^i)`` and ``Z = sum Z_i xi^(q^i)`` over a normal
basis of ``F_{q^4}/F_q`` turns the curve equation into four quadratic forms
over F_q (the variety ``W``).  The block Moore matrix ``phi`` sends ``(S_i, Z_i)``
to ``(S^(q^j), Z^(q^j))`` and ``psi`` takes consecutive differences; the image
is cut out by the four Frobenius conjugates of the curve equation (``V``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import InvalidParameter
from ..fields import FieldContext, FieldElement, NormalBasis
from .curve import CurveParams

W_LABELS = ("S0", "S1", "S2", "S3", "Z0", "Z1", "Z2", "Z3")
V_LABELS = ("W0", "W1", "W2", "X3", "Y0", "Y1", "Y2", "Y3")
VERTEX = (0, 0, 0, 1, 0, 0, 0, 0)


@dataclass(frozen=True, eq=False)
class QuadraticFormSystem:
    """Forms ``Q_k(v) = v^T M_k v`` with symmetric matrices of encodings.

    ``level`` is the subfield the entries live in (1 for ``W``, 4 for ``V``).
    """

    ctx: FieldContext
    matrices: np.ndarray          # (k, 8, 8)
    level: int
    labels: tuple[str, ...]

    def __post_init__(self):
        m = self.matrices
        if m.ndim != 3 or m.shape[1] != m.shape[2] or not np.array_equal(m, m.transpose(0, 2, 1)):
            raise InvalidParameter("form matrices must be square and symmetric")

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def evaluate(self, points) -> np.ndarray:
        """Values of all forms at each row of ``points`` (encodings); shape ``(N, k)``."""
        ctx = self.ctx
        P = np.atleast_2d(np.asarray(points, dtype=np.int64))
        out = np.zeros((P.shape[0], len(self.matrices)), dtype=np.int64)
        for i in range(self.dim):
            for j in range(i, self.dim):
                prod = ctx.vmul(P[:, i], P[:, j])
                for k, M in enumerate(self.matrices):
                    c = int(M[i, j])
                    if c == 0:
                        continue
                    if i != j:
                        c = ctx.arith.add(c, c)
                    out[:, k] = ctx.vadd(out[:, k], ctx.vmul(c, prod))
        return out

    def vanishes(self, points) -> np.ndarray:
        return ~np.any(self.evaluate(points), axis=1)


def _curve_map(params: CurveParams, S, Z):
    return params.evaluate(np.asarray(S, dtype=np.int64), np.asarray(Z, dtype=np.int64))


def expand(basis: NormalBasis, coords) -> tuple[np.ndarray, np.ndarray]:
    """``(S, Z)`` encodings from rows of eight F_q-coordinates ``(S_0..S_3, Z_0..Z_3)``."""
    ctx = basis.ctx
    C = np.atleast_2d(np.asarray(coords, dtype=np.int64))
    b = [x.value for x in basis.elements]
    S = np.zeros(len(C), dtype=np.int64)
    Z = np.zeros(len(C), dtype=np.int64)
    for i in range(4):
        S = ctx.vadd(S, ctx.vmul(C[:, i], b[i]))
        Z = ctx.vadd(Z, ctx.vmul(C[:, 4 + i], b[i]))
    return S, Z


def _require_w(params: CurveParams):
    if params.level != 4:
        raise InvalidParameter("W is built over a degree-4 curve field")


def build_variety_W(params: CurveParams, xi: FieldElement | None = None) -> QuadraticFormSystem:
    """The four F_q-forms ``f_0..f_3`` with ``Q(S, Z) = sum f_k xi^(q^k)``.

    Forms are read off by polarization at basis vectors:
    ``B(u, v) = (Q(u+v) - Q(u) - Q(v)) / 2`` and then split on the normal basis.
    """
    _require_w(params)
    ctx = params.ctx
    basis = NormalBasis(ctx, 4, xi)
    eye = np.eye(8, dtype=np.int64)
    pairs = [eye[i] + eye[j] for i in range(8) for j in range(i + 1, 8)]
    vecs = np.vstack([eye, pairs])
    vals = _curve_map(params, *expand(basis, vecs))
    diag = vals[:8]
    half = ctx.arith.inv(2)
    B = np.zeros((8, 8), dtype=np.int64)
    for i in range(8):
        B[i, i] = diag[i]
    idx = 8
    for i in range(8):
        for j in range(i + 1, 8):
            v = ctx.arith.sub(ctx.arith.sub(int(vals[idx]), int(diag[i])), int(diag[j]))
            B[i, j] = B[j, i] = ctx.arith.mul(v, half)
            idx += 1
    mats = np.zeros((4, 8, 8), dtype=np.int64)
    for i in range(8):
        for j in range(8):
            mats[:, i, j] = basis.coordinates(int(B[i, j]))
    return QuadraticFormSystem(ctx, mats, 1, W_LABELS)


def projective_points(ctx: FieldContext, dim: int, level: int = 1, chunk: int | None = None):
    """Yield blocks of representatives of ``P^(dim-1)`` over the level field, first nonzero coordinate 1.

    Blocks are grouped by the position of the leading 1, in lexicographic order
    of the remaining coordinates.
    """
    field = ctx.subfield(level)
    Q = len(field)
    for lead in range(dim):
        free = dim - lead - 1
        total = Q ** free
        step = total if chunk is None else chunk
        for start in range(0, total, step):
            idx = np.arange(start, min(total, start + step), dtype=np.int64)
            block = np.zeros((idx.size, dim), dtype=np.int64)
            block[:, lead] = 1
            r = idx.copy()
            for col in range(dim - 1, lead, -1):
                block[:, col] = field[r % Q]
                r //= Q
            yield block


def projective_size(q: int, dim: int) -> int:
    return (q ** dim - 1) // (q - 1)


@dataclass(frozen=True, eq=False)
class WPoints:
    candidates: int
    points: np.ndarray            # (k, 8) F_q encodings, normalised
    z3_nonzero: np.ndarray        # boolean mask over points

    @property
    def has_z3_point(self) -> bool:
        return bool(self.z3_nonzero.any())


def enumerate_W(system: QuadraticFormSystem) -> WPoints:
    """All F_q-rational points of the system in ``P^7``."""
    ctx = system.ctx
    found, seen = [], 0
    for block in projective_points(ctx, system.dim, 1):
        seen += len(block)
        found.append(block[system.vanishes(block)])
    pts = np.vstack(found) if found else np.zeros((0, system.dim), dtype=np.int64)
    return WPoints(seen, pts, pts[:, 7] != 0)


def lift_to_curve(params: CurveParams, point, xi: FieldElement | None = None) -> tuple[int, int]:
    """The affine curve point ``(S, Z)`` given by the basis expansion of ``point``."""
    S, Z = expand(NormalBasis(params.ctx, 4, xi), [point])
    return int(S[0]), int(Z[0])


def on_curve(params: CurveParams, S, Z) -> np.ndarray:
    return _curve_map(params, np.atleast_1d(S), np.atleast_1d(Z)) == 0


# -- V -----------------------------------------------------------------------

def build_variety_V(params: CurveParams) -> QuadraticFormSystem:
    """Forms over F_{q^4} in ``(W0, W1, W2, X3, Y0, Y1, Y2, Y3)``.

    Form ``j`` is the ``q^j``-th conjugate of the curve equation written in
    ``X_i = S^(q^i)``, ``Y_i = Z^(q^i)``, with ``X_(j+1) - X_j`` replaced by
    ``W_j`` (and ``X_0 - X_3`` by ``-(W_0 + W_1 + W_2)``).
    """
    _require_w(params)
    if params.s != 1:
        raise InvalidParameter("V is defined for s = 1")
    ctx, A, q = params.ctx, params.ctx.arith, params.ctx.q
    eta, beta = params.eta.value, params.beta.value
    # curve: Z-part(eta, beta) - (S^q - S)^2 ; conjugate j applies q^j to every coefficient
    c_cross = A.mul(A.neg(A.add(beta, beta)), A.pow(eta, (q + 1) // 2))
    mats = np.zeros((4, 8, 8), dtype=np.int64)
    half = A.inv(2)
    minus_one = A.neg(1)

    def put(M, i, j, c):
        if i == j:
            M[i, i] = A.add(int(M[i, i]), c)
        else:
            h = A.mul(c, half)
            M[i, j] = A.add(int(M[i, j]), h)
            M[j, i] = A.add(int(M[j, i]), h)

    for j in range(4):
        M = mats[j]
        y0, y1 = 4 + j, 4 + (j + 1) % 4
        put(M, y0, y0, ctx.frob_raw(eta, j))
        put(M, y1, y1, ctx.frob_raw(eta, j + 1))
        put(M, y0, y1, ctx.frob_raw(c_cross, j))
        if j < 3:
            put(M, j, j, minus_one)
        else:
            for a in range(3):
                put(M, a, a, minus_one)
                for b in range(a + 1, 3):
                    put(M, a, b, A.neg(2))
    return QuadraticFormSystem(ctx, mats, 4, V_LABELS)


def printed_cross_coefficients(params: CurveParams) -> list[int]:
    """Cross-term coefficients ``-2 beta^(q^j) eta^((q^j + q^(j+1))/2)`` with exponents reduced as integers,
    the last one taken as ``eta^((1 + q^3)/2)``."""
    A, q = params.ctx.arith, params.ctx.q
    eta, beta = params.eta.value, params.beta.value
    out = []
    for j in range(4):
        e = (q ** j + q ** (j + 1)) // 2 if j < 3 else (1 + q ** 3) // 2
        out.append(A.mul(A.neg(A.add(params.ctx.frob_raw(beta, j), params.ctx.frob_raw(beta, j))), A.pow(eta, e)))
    return out


def phi(basis: NormalBasis, points) -> np.ndarray:
    """Block Moore map: ``X_j = sum_i S_i xi^(q^(i+j))`` and likewise for ``Y``."""
    ctx = basis.ctx
    P = np.atleast_2d(np.asarray(points, dtype=np.int64))
    M = basis.moore.raw()
    out = np.zeros_like(P)
    for j in range(4):
        for i in range(4):
            out[:, j] = ctx.vadd(out[:, j], ctx.vmul(P[:, i], M[i][j]))
            out[:, 4 + j] = ctx.vadd(out[:, 4 + j], ctx.vmul(P[:, 4 + i], M[i][j]))
    return out


def psi(ctx: FieldContext, points) -> np.ndarray:
    """``(X, Y) -> (X1-X0, X2-X1, X3-X2, X3, Y)``."""
    P = np.atleast_2d(np.asarray(points, dtype=np.int64))
    out = P.copy()
    for j in range(3):
        out[:, j] = ctx.vsub(P[:, j + 1], P[:, j])
    return out


def correspondence_check(params: CurveParams, points, xi: FieldElement | None = None,
                         system: QuadraticFormSystem | None = None) -> np.ndarray:
    """Whether each F_q-point maps under ``psi o phi`` onto ``V``."""
    basis = NormalBasis(params.ctx, 4, xi)
    system = build_variety_V(params) if system is None else system
    return system.vanishes(psi(params.ctx, phi(basis, points)))


@dataclass(frozen=True)
class CoherenceReport:
    candidates: int
    w_points: int
    z3_points: int
    lift_failures: int
    v_failures: int
    bijection_failures: int

    @property
    def ok(self) -> bool:
        return self.lift_failures == 0 and self.v_failures == 0 and self.bijection_failures == 0


def coherence_check(params: CurveParams, xi: FieldElement | None = None) -> CoherenceReport:
    """Check, over every point of ``P^7(F_q)``, that W-points lift to the curve,
    map onto V, and that non-W-points do not map onto V."""
    ctx = params.ctx
    basis = NormalBasis(ctx, 4, xi)
    W = build_variety_W(params, basis.xi)
    V = build_variety_V(params)
    cand = w_pts = z3 = lift_bad = v_bad = bij_bad = 0
    for block in projective_points(ctx, 8, 1):
        cand += len(block)
        in_w = W.vanishes(block)
        in_v = V.vanishes(psi(ctx, phi(basis, block)))
        w_pts += int(in_w.sum())
        v_bad += int((in_w & ~in_v).sum())
        bij_bad += int((in_w != in_v).sum())
        sel = block[in_w & (block[:, 7] != 0)]
        z3 += len(sel)
        if len(sel):
            S, Z = expand(basis, sel)
            lift_bad += int((~on_curve(params, S, Z) | (Z == 0)).sum())
    return CoherenceReport(cand, w_pts, z3, lift_bad, v_bad, bij_bad)


# -- the 3-space disjoint from V ------------------------------------------------

@dataclass(frozen=True)
class DimensionWitnessReport:
    discriminant: int              # beta^(2 q^2) - 1
    disjoint: bool                 # closed-form decision
    exhaustive_points: int | None  # size of P^3(F_{q^4}) scanned
    exhaustive_hits: int | None
    degree: int = 16
    dimension: int = 3


def three_space_points(ctx: FieldContext, free) -> np.ndarray:
    """Embed ``(W0, W1, W2, Y2)`` into P^7 with ``X3 = Y0 = Y1 = 0`` and ``Y3 = -Y2``."""
    F = np.atleast_2d(np.asarray(free, dtype=np.int64))
    out = np.zeros((len(F), 8), dtype=np.int64)
    out[:, 0:3] = F[:, 0:3]
    out[:, 6] = F[:, 3]
    out[:, 7] = ctx.vneg(F[:, 3])
    return out


EXHAUSTIVE_LIMIT = 10 ** 6


def dimension_witness_check(params: CurveParams, exhaustive: bool | None = None,
                            chunk: int = 65536) -> DimensionWitnessReport:
    """Decide that the 3-space ``X3 = Y0 = Y1 = 0, Y2 + Y3 = 0`` misses ``V``.

    On that space the first form forces ``W0 = 0``; the second gives
    ``W1^2 = eta^(q^2) Y2^2``, the fourth ``(W1+W2)^2 = eta^(q^3) Y2^2`` and
    eliminating ``W1, W2`` with the third leaves
    ``4 eta^(q^3+q^2) (beta^(2 q^2) - 1) Y2^4 = 0``.  So a common point needs
    ``Y2 = 0``, which forces all coordinates to vanish, unless ``beta = +-1``.
    Optionally confirmed by scanning ``P^3(F_{q^4})``.
    """
    _require_w(params)
    ctx, A, q = params.ctx, params.ctx.arith, params.ctx.q
    b = params.beta.value
    if b in (1, A.neg(1)):
        raise InvalidParameter("beta must not be +-1")
    disc = A.sub(A.pow(b, 2 * q * q), 1)
    Q4 = q ** 4
    size = projective_size(Q4, 4)
    if exhaustive is None:
        exhaustive = size <= EXHAUSTIVE_LIMIT
    hits = None
    if exhaustive:
        V = build_variety_V(params)
        hits = 0
        for block in projective_points(ctx, 4, 4, chunk):
            hits += int(V.vanishes(three_space_points(ctx, block)).sum())
    return DimensionWitnessReport(disc, disc != 0, size if exhaustive else None, hits)
