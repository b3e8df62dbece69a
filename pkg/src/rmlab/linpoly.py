"""q-polynomials ``sum a_i x^(q^i)`` over F_{q^n}, taken modulo ``x^(q^n) - x``.

A :class:`LinearizedPoly` stores its ``n`` coefficients as raw field
encodings.  Two matrix views are available:

* :func:`dickson_matrix` gives the n x n matrix over F_q in a chosen F_q-basis
  of F_{q^n} (entries are level-1 encodings);
* :func:`fp_matrix` gives the (e n) x (e n) matrix over the prime field in the
  power basis of the modulus.  Because the image of an F_q-linear map is an
  F_q-space, its F_p-rank is ``e`` times its F_q-rank; the scans rely on this.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import fpla
from .exceptions import InvalidParameter
from .fields import FieldContext, FieldElement, FqBasis, NormalBasis


class LinearizedPoly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs: Sequence[int | FieldElement]):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != ctx.n:
            raise InvalidParameter(f"need exactly n={ctx.n} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < ctx.order for c in coeffs):
            raise InvalidParameter("coefficient encoding out of range")
        self.ctx = ctx
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, ctx: FieldContext) -> "LinearizedPoly":
        return cls(ctx, [0] * ctx.n)

    @classmethod
    def monomial(cls, ctx: FieldContext, i: int, a: int | FieldElement = 1) -> "LinearizedPoly":
        c = [0] * ctx.n
        c[i % ctx.n] = int(a)
        return cls(ctx, c)

    @classmethod
    def identity(cls, ctx: FieldContext) -> "LinearizedPoly":
        return cls.monomial(ctx, 0, 1)

    @classmethod
    def scalar(cls, ctx: FieldContext, a: int | FieldElement) -> "LinearizedPoly":
        """The map ``x -> a x``."""
        return cls.monomial(ctx, 0, a)

    @classmethod
    def from_terms(cls, ctx: FieldContext, terms: dict[int, int | FieldElement]) -> "LinearizedPoly":
        """Build from ``{q_degree: coefficient}``; degrees are reduced mod n and summed."""
        c = [0] * ctx.n
        for i, a in terms.items():
            k = i % ctx.n
            c[k] = ctx.arith.add(c[k], int(a))
        return cls(ctx, c)

    @classmethod
    def parse(cls, ctx: FieldContext, text: str) -> "LinearizedPoly":
        return cls(ctx, [int(t) for t in text.split(",")])

    def serialize(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    # -- basic algebra -----------------------------------------------------
    def coefficients(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.ctx, c, self.ctx.n) for c in self.coeffs)

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, g: "LinearizedPoly") -> "LinearizedPoly":
        A = self.ctx.arith
        return LinearizedPoly(self.ctx, [A.add(a, b) for a, b in zip(self.coeffs, g.coeffs)])

    def __sub__(self, g: "LinearizedPoly") -> "LinearizedPoly":
        A = self.ctx.arith
        return LinearizedPoly(self.ctx, [A.sub(a, b) for a, b in zip(self.coeffs, g.coeffs)])

    def __neg__(self) -> "LinearizedPoly":
        A = self.ctx.arith
        return LinearizedPoly(self.ctx, [A.neg(a) for a in self.coeffs])

    def scale(self, a: int | FieldElement) -> "LinearizedPoly":
        """``a * f(x)``, i.e. ``tau_a o f``."""
        A = self.ctx.arith
        return LinearizedPoly(self.ctx, [A.mul(int(a), c) for c in self.coeffs])

    def __call__(self, x: FieldElement | int) -> FieldElement:
        return evaluate(self, x)

    def __matmul__(self, g: "LinearizedPoly") -> "LinearizedPoly":
        return compose(self, g)

    def __eq__(self, g):
        return isinstance(g, LinearizedPoly) and self.ctx == g.ctx and self.coeffs == g.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"{c}*x^(q^{i})" for i, c in enumerate(self.coeffs) if c]
        return "LinearizedPoly(" + (" + ".join(terms) if terms else "0") + ")"


def evaluate(f: LinearizedPoly, x: FieldElement | int) -> FieldElement:
    ctx, A = f.ctx, f.ctx.arith
    v = int(x)
    acc = 0
    for i, a in enumerate(f.coeffs):
        if a:
            acc = A.add(acc, A.mul(a, ctx.frob_raw(v, i)))
    return FieldElement(ctx, acc, ctx.n)


def evaluate_many(f: LinearizedPoly, xs) -> np.ndarray:
    """Vectorised evaluation on an array of encodings."""
    ctx = f.ctx
    xs = np.asarray(xs, dtype=np.int64)
    acc = np.zeros_like(xs)
    for i, a in enumerate(f.coeffs):
        if a:
            acc = ctx.vadd(acc, ctx.vmul(a, ctx.vfrob(xs, i)))
    return acc


def compose(f: LinearizedPoly, g: LinearizedPoly) -> LinearizedPoly:
    """``f o g`` modulo ``x^(q^n) - x``: ``c_k = sum_{i+j=k mod n} a_i b_j^(q^i)``."""
    if f.ctx != g.ctx:
        raise InvalidParameter("polynomials live in different contexts")
    ctx, A, n = f.ctx, f.ctx.arith, f.ctx.n
    out = [0] * n
    for i, a in enumerate(f.coeffs):
        if not a:
            continue
        for j, b in enumerate(g.coeffs):
            if b:
                k = (i + j) % n
                out[k] = A.add(out[k], A.mul(a, ctx.frob_raw(b, i)))
    return LinearizedPoly(ctx, out)


def apply_automorphism(f: LinearizedPoly, i: int, j: int) -> LinearizedPoly:
    """Apply ``x -> (x^(p^i))^(q^j)`` to every coefficient."""
    ctx = f.ctx
    return LinearizedPoly(ctx, [ctx.frob_raw(ctx.ppow_raw(c, i), j) for c in f.coeffs])


# ---------------------------------------------------------------------------
# matrices over F_q
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FqMatrix:
    """Square matrix with entries in F_q, stored as level-1 encodings."""

    ctx: FieldContext
    entries: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        A = self.ctx.arith
        return FqMatrix(self.ctx, tuple(tuple(A.add(x, y) for x, y in zip(r, s))
                                        for r, s in zip(self.entries, other.entries)))

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        A = self.ctx.arith
        cols = list(zip(*other.entries))
        out = []
        for r in self.entries:
            row = []
            for c in cols:
                acc = 0
                for x, y in zip(r, c):
                    if x and y:
                        acc = A.add(acc, A.mul(x, y))
                row.append(acc)
            out.append(tuple(row))
        return FqMatrix(self.ctx, tuple(out))

    def rank(self, at_least: int | None = None) -> int:
        """Rank over F_q; with ``at_least`` elimination stops once that many pivots are found."""
        return fq_rank(self.ctx, self.entries, at_least)

    @classmethod
    def identity(cls, ctx: FieldContext, size: int) -> "FqMatrix":
        return cls(ctx, tuple(tuple(1 if i == j else 0 for j in range(size)) for i in range(size)))


def fq_rank(ctx: FieldContext, rows, at_least: int | None = None) -> int:
    A = ctx.arith
    M = [list(r) for r in rows]
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    r = 0
    for c in range(ncols):
        if at_least is not None and r >= at_least:
            break
        piv = next((i for i in range(r, nrows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = A.inv(M[r][c])
        for i in range(r + 1, nrows):
            if M[i][c]:
                f = A.mul(M[i][c], inv)
                M[i] = [A.sub(x, A.mul(f, y)) for x, y in zip(M[i], M[r])]
        r += 1
    return r


@functools.lru_cache(maxsize=16)
def _default_basis(ctx: FieldContext) -> NormalBasis:
    return NormalBasis(ctx, ctx.n)


def dickson_matrix(f: LinearizedPoly, basis: FqBasis | Sequence[FieldElement] | None = None) -> FqMatrix:
    """Matrix of ``f`` over F_q; column j holds the coordinates of ``f(b_j)``.

    The default basis is the normal basis from :func:`rmlab.fields.find_normal_element`.
    """
    ctx = f.ctx
    if basis is None:
        basis = _default_basis(ctx)
    elif not isinstance(basis, FqBasis):
        basis = FqBasis(ctx, list(basis), ctx.n)
    cols = [basis.coordinates(evaluate(f, b)) for b in basis.elements]
    return FqMatrix(ctx, tuple(zip(*cols)))


def rank_kernel(f: LinearizedPoly) -> tuple[int, int]:
    """``(rank, kernel dimension)`` over F_q by elimination on the Dickson matrix."""
    r = dickson_matrix(f).rank()
    return r, f.ctx.n - r


# ---------------------------------------------------------------------------
# prime-field view
# ---------------------------------------------------------------------------

def fp_matrix(f: LinearizedPoly) -> np.ndarray:
    """(e n) x (e n) matrix over F_p; column k holds the digits of ``f(t^k)``."""
    ctx = f.ctx
    vals = evaluate_many(f, np.array([ctx.p ** k for k in range(ctx.degree)], dtype=np.int64))
    return ctx.vdigits(vals).T.copy()


def mul_matrices(ctx: FieldContext, values) -> np.ndarray:
    """Stack of F_p-matrices of ``x -> a x`` for each encoding ``a`` in ``values``."""
    values = np.asarray(values, dtype=np.int64)
    basis = np.array([ctx.p ** k for k in range(ctx.degree)], dtype=np.int64)
    prods = ctx.vmul(values[..., None], basis)            # (..., col k)
    return np.swapaxes(ctx.vdigits(prods), -1, -2)        # (..., row, col)


def fast_rank(f: LinearizedPoly) -> int:
    """Rank over F_q computed from the F_p-matrix."""
    return fpla.rank(fp_matrix(f), f.ctx.p) // f.ctx.e


def from_fp_matrix(ctx: FieldContext, M) -> LinearizedPoly:
    """Recover the q-polynomial whose F_p-matrix is ``M``.

    Interpolates through the normal basis: with ``y_j = f(xi^(q^j))`` the
    coefficients solve ``sum_i a_i xi^(q^(i+j)) = y_j``.  Raises if ``M`` is
    not F_q-linear.
    """
    M = np.asarray(M, dtype=np.int64) % ctx.p
    nb = _default_basis(ctx)
    A = ctx.arith
    ys = []
    for b in nb.elements:
        d = np.asarray(ctx.vdigits(b.value))
        ys.append(int(ctx.vencode(M @ d)))
    inv = _moore_inverse(ctx)
    coeffs = []
    for i in range(ctx.n):
        acc = 0
        for j in range(ctx.n):
            acc = A.add(acc, A.mul(ys[j], inv[j][i]))
        coeffs.append(acc)
    g = LinearizedPoly(ctx, coeffs)
    if not np.array_equal(fp_matrix(g), M):
        raise InvalidParameter("matrix is not F_q-linear")
    return g


@functools.lru_cache(maxsize=16)
def _moore_inverse(ctx: FieldContext):
    from .fields import field_inverse
    return field_inverse(ctx, _default_basis(ctx).moore.raw())
