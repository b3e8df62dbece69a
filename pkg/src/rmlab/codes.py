"""Bi-generated rank-metric codes ``C_f = {a x + b f(x) : a, b in F_{q^n}}``.

Minimum distances are computed by scanning the projective line: since ``C_f``
is F_{q^n}-linear, the minimum rank over nonzero codewords is attained on the
representatives ``(1:0) -> x`` and ``(a:1) -> a x + f``.  All ``q^n`` ranks of
a scan are computed as one batched elimination over F_p.
"""

from __future__ import annotations

import functools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import fpla
from .exceptions import InvalidParameter
from .fields import FieldContext, FieldElement, relative_norm
from .linpoly import LinearizedPoly, fp_matrix, mul_matrices

MRD = "MRD"
ALMOST_MRD = "AlmostMRD"
OTHER = "Other"
NOT_MRD = "NotMRD"

_SCAN_CHUNK = 8192
_STACK_BYTES = 64 << 20


# ---------------------------------------------------------------------------
# code families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BiGeneratedCode:
    f: LinearizedPoly
    family: str
    params: tuple = ()

    @property
    def ctx(self) -> FieldContext:
        return self.f.ctx

    @property
    def n(self) -> int:
        return self.f.ctx.n

    def param(self, name):
        return dict(self.params)[name]

    def spec(self) -> str:
        """Family string in the command-line grammar."""
        d = dict(self.params)
        if self.family == "delta_s":
            return f"delta_s:{d['delta']}:{d['s']}"
        if self.family == "gabidulin":
            return f"gab:{d['r']}"
        if self.family == "twisted":
            return f"twisted:{d['epsilon']}:{d['r']}"
        if self.family == "quadrinomial":
            return f"quad:{d['h']}:{d['r']}"
        return "custom:" + self.f.serialize()

    def fp_generators(self) -> np.ndarray:
        """F_p-basis of the code as a stack of (e n) x (e n) matrices."""
        ctx = self.ctx
        units = mul_matrices(ctx, [ctx.p ** k for k in range(ctx.degree)])
        mf = fp_matrix(self.f)
        return np.concatenate([units, (units @ mf) % ctx.p])


def _elem(ctx: FieldContext, v) -> FieldElement:
    return ctx(int(v))


def delta_s_poly(ctx: FieldContext, delta, s: int) -> LinearizedPoly:
    """``x^(q^s) + delta x^(q^(n/2+s))``."""
    return LinearizedPoly.from_terms(ctx, {s: 1, ctx.n // 2 + s: int(delta)})


def quadrinomial_poly(ctx: FieldContext, h, r: int) -> LinearizedPoly:
    """``x^(q^r) + x^(q^3r) + h^(q^r+1) x^(q^5r) + h^(1-q^7r) x^(q^7r)``."""
    A, q = ctx.arith, ctx.q
    hv = int(h)
    return LinearizedPoly.from_terms(ctx, {
        r: 1,
        3 * r: 1,
        5 * r: A.pow(hv, q ** r + 1),
        7 * r: A.pow(hv, 1 - q ** (7 * r)),
    })


def make_code(ctx: FieldContext, family: str, **params) -> BiGeneratedCode:
    """Build a code of one of the known families, checking its constraints.

    Families and parameters: ``delta_s(delta, s)``, ``gabidulin(r)``,
    ``twisted(epsilon, r)``, ``quadrinomial(h, r)`` and ``custom(f)``.
    """
    n = ctx.n
    if family == "delta_s":
        delta, s = int(params["delta"]), int(params["s"])
        if n % 2:
            raise InvalidParameter("delta_s codes need n even")
        if not 1 <= s <= n - 1 or math.gcd(s, n // 2) != 1:
            raise InvalidParameter(f"s={s} must lie in 1..n-1 and be coprime with n/2={n // 2}")
        if delta == 0:
            raise InvalidParameter("delta must be nonzero")
        _elem(ctx, delta)
        return BiGeneratedCode(delta_s_poly(ctx, delta, s), family, (("delta", delta), ("s", s)))
    if family == "gabidulin":
        r = int(params["r"])
        if not 1 <= r <= n - 1 or math.gcd(r, n) != 1:
            raise InvalidParameter(f"r={r} must lie in 1..n-1 and be coprime with n={n}")
        return BiGeneratedCode(LinearizedPoly.monomial(ctx, r), family, (("r", r),))
    if family == "twisted":
        eps, r = int(params["epsilon"]), int(params["r"])
        if not 1 <= r <= n - 1 or math.gcd(r, n) != 1:
            raise InvalidParameter(f"r={r} must lie in 1..n-1 and be coprime with n={n}")
        nrm = relative_norm(ctx, _elem(ctx, eps), 1).value
        if nrm in (0, 1):
            raise InvalidParameter("twisted Gabidulin codes need N_{q^n/q}(epsilon) not in {0, 1}")
        f = LinearizedPoly.from_terms(ctx, {r: eps, n - r: 1})
        return BiGeneratedCode(f, family, (("epsilon", eps), ("r", r)))
    if family == "quadrinomial":
        h, r = int(params["h"]), int(params["r"])
        if n != 8:
            raise InvalidParameter("quadrinomial codes are defined here for n = 8")
        if math.gcd(r, n) != 1 or not 1 <= r <= n - 1:
            raise InvalidParameter(f"r={r} must be odd and in 1..7")
        minus_one = ctx.arith.neg(1)
        if h == 0 or relative_norm(ctx, _elem(ctx, h), 4).value != minus_one:
            raise InvalidParameter("quadrinomial codes need N_{q^8/q^4}(h) = -1")
        return BiGeneratedCode(quadrinomial_poly(ctx, h, r), family, (("h", h), ("r", r)))
    if family == "custom":
        f = params["f"]
        if not isinstance(f, LinearizedPoly):
            f = LinearizedPoly(ctx, f)
        return BiGeneratedCode(f, family, ())
    raise InvalidParameter(f"unknown family {family!r}")


def parse_family(ctx: FieldContext, text: str) -> BiGeneratedCode:
    """Parse ``delta_s:<delta>:<s>``, ``gab:<r>``, ``twisted:<eps>:<r>``, ``quad:<h>:<r>``."""
    parts = text.strip().split(":")
    try:
        kind = parts[0]
        if kind == "delta_s" and len(parts) == 3:
            return make_code(ctx, "delta_s", delta=int(parts[1]), s=int(parts[2]))
        if kind == "gab" and len(parts) == 2:
            return make_code(ctx, "gabidulin", r=int(parts[1]))
        if kind == "twisted" and len(parts) == 3:
            return make_code(ctx, "twisted", epsilon=int(parts[1]), r=int(parts[2]))
        if kind == "quad" and len(parts) == 3:
            return make_code(ctx, "quadrinomial", h=int(parts[1]), r=int(parts[2]))
        if kind == "custom" and len(parts) == 2:
            return make_code(ctx, "custom", f=LinearizedPoly.parse(ctx, parts[1]))
    except ValueError as exc:
        raise InvalidParameter(f"bad family spec {text!r}: {exc}") from exc
    raise InvalidParameter(f"bad family spec {text!r}")


# ---------------------------------------------------------------------------
# minimum distance
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=4)
def _scalar_stack(ctx: FieldContext) -> np.ndarray | None:
    if ctx.order * ctx.degree ** 2 > _STACK_BYTES:
        return None
    stack = mul_matrices(ctx, np.arange(ctx.order, dtype=np.int64)).astype(np.int8)
    stack.setflags(write=False)
    return stack


def _line_ranks(code: BiGeneratedCode, start: int, stop: int) -> np.ndarray:
    """F_q-ranks of ``a x + f`` for encodings ``a`` in ``[start, stop)``."""
    ctx = code.ctx
    stack = _scalar_stack(ctx)
    if stack is not None:
        mats = stack[start:stop].astype(np.int64)
    else:
        mats = mul_matrices(ctx, np.arange(start, stop, dtype=np.int64))
    mats += fp_matrix(code.f)[None]
    return fpla.batch_rank(mats, ctx.p) // ctx.e


def min_distance(code: BiGeneratedCode, stop_at: int | None = None, chunk: int = _SCAN_CHUNK) -> int:
    """Minimum rank over the nonzero codewords.

    The line is visited as ``(1:0)`` then ``(a:1)`` by increasing encoding of
    ``a``.  With ``stop_at`` the scan returns as soon as a codeword of rank
    ``<= stop_at`` has been seen; the value returned is then only an upper bound.
    """
    ctx = code.ctx
    best = ctx.n  # rank of x
    if stop_at is not None and best <= stop_at:
        return best
    start = 0
    size = min(chunk, 64) if stop_at is not None else chunk
    while start < ctx.order:
        stop = min(ctx.order, start + size)
        best = min(best, int(_line_ranks(code, start, stop).min()))
        if stop_at is not None and best <= stop_at:
            return best
        start = stop
        size = min(chunk, size * 4)
    return best


def is_mrd(code: BiGeneratedCode) -> bool:
    """MRD decision with early exit at the first codeword of rank ``<= n-2``."""
    return min_distance(code, stop_at=code.n - 2) == code.n - 1


@dataclass(frozen=True)
class Classification:
    min_distance: int
    verdict: str

    @classmethod
    def from_distance(cls, d: int, n: int) -> "Classification":
        if d == n - 1:
            return cls(d, MRD)
        if d == n - 2:
            return cls(d, ALMOST_MRD)
        return cls(d, OTHER)


def classify(code: BiGeneratedCode) -> Classification:
    return Classification.from_distance(min_distance(code), code.n)


# ---------------------------------------------------------------------------
# norm-class scans for delta_s codes
# ---------------------------------------------------------------------------

def norm_classes(ctx: FieldContext) -> dict[int, int]:
    """Map each norm ``alpha = N_{q^n/q^(n/2)}(delta)`` to its smallest ``delta``."""
    if ctx.n % 2:
        raise InvalidParameter("norm classes need n even")
    return dict(_norm_classes_cached(ctx))


@functools.lru_cache(maxsize=8)
def _norm_classes_cached(ctx: FieldContext) -> tuple[tuple[int, int], ...]:
    deltas = np.arange(1, ctx.order, dtype=np.int64)
    norms = ctx.vpow(deltas, 1 + ctx.q ** (ctx.n // 2))
    alphas, first = np.unique(norms, return_index=True)
    return tuple((int(a), int(deltas[i])) for a, i in zip(alphas, first))


@dataclass(frozen=True)
class ScanRow:
    alpha: int
    delta: int
    min_distance: int
    verdict: str

    def as_dict(self) -> dict:
        return {
            "alpha_encoding": self.alpha,
            "delta_representative_encoding": self.delta,
            "min_distance": self.min_distance,
            "verdict": self.verdict,
        }


SCAN_COLUMNS = ("alpha_encoding", "delta_representative_encoding", "min_distance", "verdict")


@dataclass(frozen=True)
class ScanTable:
    p: int
    e: int
    n: int
    s: int
    mode: str
    rows: tuple[ScanRow, ...] = field(default_factory=tuple)

    def mrd_alphas(self) -> list[int]:
        return [r.alpha for r in self.rows if r.verdict == MRD]

    def to_csv(self) -> str:
        lines = [",".join(SCAN_COLUMNS)]
        for r in self.rows:
            d = r.as_dict()
            lines.append(",".join(str(d[c]) for c in SCAN_COLUMNS))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps([r.as_dict() for r in self.rows], indent=1) + "\n"


def select_classes(ctx: FieldContext, selector: str | Sequence[int] = "all", seed: int = 0) -> list[int]:
    """Resolve a class selector: ``all``, ``sample:K``, ``alpha:<enc>`` or a list of alphas."""
    alphas = sorted(norm_classes(ctx))
    if not isinstance(selector, str):
        chosen = [int(a) for a in selector]
        bad = [a for a in chosen if a not in set(alphas)]
        if bad:
            raise InvalidParameter(f"not a nonzero element of the half field: {bad}")
        return chosen
    if selector == "all":
        return alphas
    kind, _, arg = selector.partition(":")
    if kind == "sample":
        k = int(arg)
        if not 0 < k <= len(alphas):
            raise InvalidParameter(f"sample size must be in 1..{len(alphas)}")
        rng = np.random.default_rng(seed)
        return sorted(int(a) for a in rng.choice(alphas, size=k, replace=False))
    if kind == "alpha":
        return select_classes(ctx, [int(arg)])
    raise InvalidParameter(f"bad class selector {selector!r}")


def scan_class(ctx: FieldContext, s: int, alpha: int, mode: str = "exact") -> ScanRow:
    delta = norm_classes(ctx)[alpha]
    code = make_code(ctx, "delta_s", delta=delta, s=s)
    if mode == "exact":
        c = classify(code)
        return ScanRow(alpha, delta, c.min_distance, c.verdict)
    if mode == "decide":
        d = min_distance(code, stop_at=ctx.n - 2)
        return ScanRow(alpha, delta, d, MRD if d == ctx.n - 1 else NOT_MRD)
    raise InvalidParameter(f"unknown scan mode {mode!r}")


def norm_class_scan(ctx: FieldContext, s: int, classes: str | Sequence[int] = "all",
                    mode: str = "exact", threads: int = 1, seed: int = 0) -> ScanTable:
    """Classify ``C_{delta,s}`` for one representative ``delta`` per norm class.

    In ``decide`` mode non-MRD classes stop at the first codeword of rank
    ``<= n-2`` and report that rank, an upper bound on the distance.
    Rows come back sorted by ``alpha`` whatever the thread count.
    """
    alphas = select_classes(ctx, classes, seed)
    make_code(ctx, "delta_s", delta=1, s=s)  # validates s early
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda a: scan_class(ctx, s, a, mode), alphas))
    else:
        rows = [scan_class(ctx, s, a, mode) for a in alphas]
    rows.sort(key=lambda r: r.alpha)
    return ScanTable(ctx.p, ctx.e, ctx.n, s, mode, tuple(rows))


# ---------------------------------------------------------------------------
# idealisers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdealiserReport:
    side: str
    dimension: int
    basis: tuple[LinearizedPoly, ...]
    is_field: bool | None
    closed: bool
    commutative: bool


_FIELD_CHECK_LIMIT = 2_000_000


def _fq_basis(ctx: FieldContext, vecs: np.ndarray) -> list[np.ndarray]:
    """Pick an F_q-basis among F_p-vectors of q-polynomial coefficients (shape (n, D))."""
    if ctx.e == 1:
        return list(vecs)
    scalars = [int(c) for c in ctx.subfield(1) if c]

    def span_rows(chosen):
        rows = []
        for v in chosen:
            coeffs = ctx.vencode(v)
            for s in scalars:
                rows.append(ctx.vdigits(ctx.vmul(s, coeffs)).reshape(-1))
        return np.array(rows)

    chosen: list[np.ndarray] = []
    for v in vecs:
        if not chosen or not fpla.in_span(span_rows(chosen), v.reshape(-1), ctx.p):
            chosen.append(v)
    return chosen


def idealiser(code: BiGeneratedCode, side: str = "left") -> IdealiserReport:
    """Left (``h o C <= C``) or right (``C o h <= C``) idealiser of the code.

    Unknown ``h`` is written on the F_p-basis ``t^j x^(q^i)``; membership of
    ``h o g`` (resp. ``g o h``) in the code, for every ``g`` of an F_p-basis
    of the code, is a linear condition solved by elimination.
    """
    if side not in ("left", "right"):
        raise InvalidParameter("side must be 'left' or 'right'")
    ctx = code.ctx
    p, D, n = ctx.p, ctx.degree, ctx.n
    gens = code.fp_generators()                                   # (2D, D, D)
    parity = fpla.nullspace(gens.reshape(len(gens), -1), p)       # rows orthogonal to the code
    units = mul_matrices(ctx, [p ** j for j in range(D)])         # t^j as maps
    frob = fp_matrix(LinearizedPoly.monomial(ctx, 1))
    frob_pows = [np.eye(D, dtype=np.int64)]
    for _ in range(1, n):
        frob_pows.append((frob_pows[-1] @ frob) % p)
    # basis element (i, j) is t^j x^(q^i)
    hb = np.array([[(units[j] @ frob_pows[i]) % p for j in range(D)] for i in range(n)])
    hb = hb.reshape(n * D, D, D)
    if side == "left":
        prods = np.einsum("tab,kbc->tkac", hb, gens) % p
    else:
        prods = np.einsum("kab,tbc->tkac", gens, hb) % p
    # conditions: parity . vec(prod) = 0 for every generator k
    cond = np.einsum("rx,tkx->tkr", parity, prods.reshape(n * D, len(gens), D * D)) % p
    system = cond.reshape(n * D, -1).T
    sol = fpla.nullspace(system, p)                               # (k, n*D)
    mats = np.einsum("kt,tab->kab", sol, hb) % p

    def in_algebra(M):
        return fpla.in_span(mats.reshape(len(mats), -1), M.reshape(-1), p)

    closed = all(in_algebra((mats[a] @ mats[b]) % p) for a in range(len(mats)) for b in range(len(mats)))
    commutative = all(np.array_equal((mats[a] @ mats[b]) % p, (mats[b] @ mats[a]) % p)
                      for a in range(len(mats)) for b in range(a + 1, len(mats)))
    is_field: bool | None
    if not closed:
        is_field = False
    elif p ** len(mats) <= _FIELD_CHECK_LIMIT:
        is_field = _all_nonzero_invertible(mats, p)
    else:
        is_field = None
    vecs = [v.reshape(n, D) for v in sol]
    basis = tuple(LinearizedPoly(ctx, [int(ctx.vencode(row)) for row in v]) for v in _fq_basis(ctx, np.array(vecs)))
    return IdealiserReport(side, len(sol) // ctx.e, basis, is_field, closed, commutative)


def _all_nonzero_invertible(mats: np.ndarray, p: int, chunk: int = 65536) -> bool:
    k, D, _ = mats.shape
    total = p ** k
    flat = mats.reshape(k, -1)
    for start in range(1, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        coeff = np.empty((idx.size, k), dtype=np.int64)
        r = idx.copy()
        for i in range(k):
            coeff[:, i] = r % p
            r //= p
        elems = ((coeff @ flat) % p).reshape(-1, D, D)
        if np.any(fpla.batch_rank(elems, p) < D):
            return False
    return True
