"""The plane curve attached to ``C_{delta,s}`` and the witnesses built from its points.

For ``alpha = N_{q^n/q^(n/2)}(delta)`` and ``beta = eps (alpha+1)/(1-alpha)``
the curve over ``F_{q^(n/2)}`` is

    -(S^(q^s) - S)^2 + eta Z^2 + eta^(q^s) Z^(2 q^s) - 2 beta eta^((q^s+1)/2) Z^(q^s+1) = 0

with ``eta`` a non-square.  An affine point with ``Z != 0`` yields elements
``T, S, A, B`` satisfying four polynomial conditions that force a codeword of
rank at most ``n - 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import InvalidParameter, VerificationError
from ..fields import FieldContext, FieldElement, find_nonsquare, is_square


def beta_from_alpha(ctx: FieldContext, alpha, epsilon: int, level: int | None = None) -> FieldElement:
    """``eps (alpha + 1) / (1 - alpha)``; ``alpha = 1`` is a pole."""
    level = ctx.n // 2 if level is None else level
    if epsilon not in (1, -1):
        raise InvalidParameter("epsilon must be +1 or -1")
    a = ctx(int(alpha), level)
    if a == 1:
        raise InvalidParameter("alpha = 1 has no beta")
    return ctx.from_int(epsilon) * (a + 1) / (1 - a)


class CurveParams:
    """Parameters of the curve: ``s``, ``beta``, ``eta``, ``epsilon`` and the source ``alpha``.

    ``level`` is the relative degree of the curve's field over F_q, ``n/2`` by
    default.  ``eta`` defaults to the first non-square of that field.
    """

    def __init__(self, ctx: FieldContext, alpha, epsilon: int = 1, s: int = 1,
                 eta: FieldElement | int | None = None, level: int | None = None):
        ctx.require_odd("the curve")
        self.ctx = ctx
        self.level = ctx.n // 2 if level is None else level
        ctx._check_level(self.level)
        if s < 1:
            raise InvalidParameter("s must be positive")
        self.s = s
        self.epsilon = epsilon
        self.alpha = ctx(int(alpha), self.level)
        self.beta = beta_from_alpha(ctx, alpha, epsilon, self.level)
        if eta is None:
            self.eta = find_nonsquare(ctx, self.level)
        else:
            self.eta = ctx(int(eta), self.level)
            if self.eta == 0 or is_square(ctx, self.eta):
                raise InvalidParameter("eta must be a non-square")
        self.qs = ctx.q ** s

    @classmethod
    def from_beta(cls, ctx: FieldContext, beta, s: int = 1, eta=None, level: int | None = None) -> "CurveParams":
        """Parameters for a prescribed ``beta`` (with ``epsilon = 1``)."""
        level = ctx.n // 2 if level is None else level
        b = ctx(int(beta), level)
        if b == -1:
            raise InvalidParameter("beta = -1 corresponds to no alpha")
        alpha = (b - 1) / (b + 1)
        return cls(ctx, alpha.value, 1, s, eta, level)

    def __repr__(self):
        return (f"CurveParams(alpha={self.alpha.value}, epsilon={self.epsilon}, s={self.s}, "
                f"beta={self.beta.value}, eta={self.eta.value}, level={self.level})")

    # the two separated parts of the equation: g(S) = h(Z)
    def s_part(self, S):
        """``(S^(q^s) - S)^2`` on an array of encodings."""
        ctx = self.ctx
        d = ctx.vsub(ctx.vfrob(S, self.s), S)
        return ctx.vmul(d, d)

    def z_part(self, Z):
        """``eta Z^2 + eta^(q^s) Z^(2q^s) - 2 beta eta^((q^s+1)/2) Z^(q^s+1)``."""
        ctx, A, qs = self.ctx, self.ctx.arith, self.qs
        eta, beta = self.eta.value, self.beta.value
        zq = ctx.vfrob(Z, self.s)
        t1 = ctx.vmul(eta, ctx.vmul(Z, Z))
        t2 = ctx.vmul(A.pow(eta, qs), ctx.vmul(zq, zq))
        c3 = A.mul(A.neg(A.add(beta, beta)), A.pow(eta, (qs + 1) // 2))
        t3 = ctx.vmul(c3, ctx.vmul(zq, Z))
        return ctx.vadd(ctx.vadd(t1, t2), t3)

    def evaluate(self, S, Z):
        """Left-hand side of the curve equation (vectorised)."""
        return self.ctx.vsub(self.z_part(Z), self.s_part(S))


@dataclass(frozen=True)
class CurvePoints:
    count: int
    points: np.ndarray | None      # (k, 2) encodings, sorted
    has_nonzero_z: bool
    count_nonzero_z: int


def curve_points(params: CurveParams, nonzero_z: bool = False, with_points: bool = True) -> CurvePoints:
    """All affine points of the curve over its field of definition.

    The equation separates as ``g(S) = h(Z)``; both sides are tabulated over
    the field and matched by value.
    """
    ctx = params.ctx
    field = ctx.subfield(params.level)
    gs = params.s_part(field)
    hz = params.z_part(field)
    order_s = np.argsort(gs, kind="stable")
    gs_sorted = gs[order_s]
    lo = np.searchsorted(gs_sorted, hz, side="left")
    hi = np.searchsorted(gs_sorted, hz, side="right")
    mult = hi - lo
    zmask = field != 0
    count_nz = int(mult[zmask].sum())
    count = count_nz if nonzero_z else int(mult.sum())
    pts = None
    if with_points:
        rows = []
        for zi in np.nonzero(mult)[0]:
            if nonzero_z and field[zi] == 0:
                continue
            for si in order_s[lo[zi]:hi[zi]]:
                rows.append((int(field[si]), int(field[zi])))
        pts = np.array(sorted(rows), dtype=np.int64).reshape(-1, 2)
    return CurvePoints(count, pts, count_nz > 0, count_nz)


@dataclass(frozen=True)
class Witness:
    T: FieldElement
    S: FieldElement
    A: FieldElement
    B: FieldElement
    Delta: FieldElement

    def encodings(self) -> tuple[int, int, int, int]:
        return (self.T.value, self.S.value, self.A.value, self.B.value)


def witness_conditions(params: CurveParams, w: Witness) -> tuple[bool, bool, bool, bool]:
    """The four conditions on ``(T, S, A, B)``, each evaluated exactly."""
    s, a = params.s, params.alpha
    T, S, A, B = w.T, w.S, w.A, w.B
    Ts, Ss = T.frobenius(s), S.frobenius(s)
    c1 = (1 - a) * (T + Ts) - a * Ss * S + (1 + a) * (A * S - 2 * B * T)
    delta = S * S + 4 * T
    c2 = delta != 0 and not is_square(params.ctx, delta.at_level(params.level), params.level)
    c3 = Ss - (2 * A + B * S)
    c4 = -Ts - (A * A + B * (A * S - B * T))
    return (c1 == 0, bool(c2), c3 == 0, c4 == 0)


def witness_from_point(params: CurveParams, point) -> Witness:
    """Build ``(T, S, A, B)`` from an affine point with ``Z != 0`` and verify it."""
    ctx, lvl = params.ctx, params.level
    S = ctx(int(point[0]), lvl)
    Z = ctx(int(point[1]), lvl)
    if Z == 0:
        raise InvalidParameter("the point must have Z != 0")
    if params.evaluate(np.array([S.value]), np.array([Z.value]))[0] != 0:
        raise InvalidParameter("the point is not on the curve")
    eps = ctx.from_int(params.epsilon)
    Delta = params.eta * Z * Z
    T = (Delta - S * S) / 4
    D = Delta ** ((params.qs - 1) // 2)
    B = eps * D
    A = (S.frobenius(params.s) - eps * S * D) / 2
    w = Witness(T.at_level(lvl), S, A.at_level(lvl), B.at_level(lvl), Delta.at_level(lvl))
    if not all(witness_conditions(params, w)):
        raise VerificationError(f"witness conditions fail at point {tuple(point)}: {witness_conditions(params, w)}")
    return w


def genus(q: int, s: int) -> int:
    """Genus of the curve: ``q^(2s) - q^s - 1``."""
    return q ** (2 * s) - q ** s - 1


def hasse_weil_window(q_half: int, g: int, clamp: bool = True) -> tuple[float, float]:
    """Bounds ``q_half + 1 -/+ 2 g sqrt(q_half)`` on the number of points.

    With ``clamp`` the lower end is raised to 0 when the window is vacuous.
    """
    r = 2 * g * q_half ** 0.5
    lower = q_half + 1 - r
    return (max(0.0, lower) if clamp else lower, q_half + 1 + r)
