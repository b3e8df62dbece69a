"""Finite field towers F_p <= F_q <= F_{q^m} <= F_{q^n}.

Every level lives inside a single field F_{p^(e*n)} = F_p[t]/(modulus).  An
element is stored as the integer ``sum(c_i * p**i)`` where ``c_i`` are its
coordinates on the power basis ``1, t, t^2, ...``; this integer is also the
canonical ordering used whenever "the first element with property X" is
needed.  A subfield F_{q^m} is the set of elements fixed by ``x -> x^(q^m)``.

Small fields (up to ``TABLE_LIMIT`` elements) use exp/log/Zech tables, which
also back the vectorised kernels (``vmul``, ``vadd``...) used by the scans.
Larger fields fall back to schoolbook polynomial arithmetic.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import InvalidParameter, UnsupportedConfiguration

TABLE_LIMIT = 1 << 21
_LIST_LIMIT = 1 << 19


# ---------------------------------------------------------------------------
# integer helpers
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split a prime power ``q`` into ``(p, e)``; raise if ``q`` is not one."""
    if q < 2:
        raise InvalidParameter(f"{q} is not a prime power")
    for p in prime_factors(q)[:1]:
        e = 0
        r = q
        while r % p == 0:
            r //= p
            e += 1
        if r == 1:
            return p, e
    raise InvalidParameter(f"{q} is not a prime power")


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# polynomials over F_p as coefficient lists, lowest degree first
# ---------------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _polymulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _polymod(out, m, p)


def _polypowmod(a: list[int], k: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(list(a), m, p)
    while k:
        if k & 1:
            result = _polymulmod(result, base, m, p)
        base = _polymulmod(base, base, m, p)
        k >>= 1
    return result


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p (coefficients low to high)."""
    f = _trim([c % p for c in poly])
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    # x^(p^d) == x mod f
    h = x
    for _ in range(d):
        h = _polypowmod(h, p, f, p)
    if _trim([(u - v) % p for u, v in _zip_pad(h, x)]):
        return False
    for r in prime_factors(d):
        h = x
        for _ in range(d // r):
            h = _polypowmod(h, p, f, p)
        g = _polygcd(f, [(u - v) % p for u, v in _zip_pad(h, x)], p)
        if len(g) > 1:
            return False
    return True


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def first_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """First monic irreducible of the given degree in integer-encoding order.

    The monic polynomial ``t^d + sum c_i t^i`` is ordered by ``sum c_i p^i``.
    """
    for code in range(p ** degree):
        low = [(code // p ** i) % p for i in range(degree)]
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("an irreducible polynomial always exists")


# ---------------------------------------------------------------------------
# arithmetic backends over raw integer encodings
# ---------------------------------------------------------------------------

class _PolyArith:
    """Schoolbook arithmetic; used when tables would be too large."""

    def __init__(self, p: int, degree: int, modulus: tuple[int, ...]):
        self.p = p
        self.degree = degree
        self.modulus = list(modulus)
        self.order = p ** degree
        self.weights = [p ** i for i in range(degree)]

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def encode(self, digits: Iterable[int]) -> int:
        return sum((int(c) % self.p) * w for c, w in zip(digits, self.weights))

    def add(self, a, b):
        return self.encode(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def sub(self, a, b):
        return self.encode(x - y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a):
        return self.encode(-x for x in self.digits(a))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        r = _polymulmod(_trim(self.digits(a)), _trim(self.digits(b)), self.modulus, self.p)
        return self.encode(r + [0] * (self.degree - len(r)))

    def pow(self, a, k):
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 0
        k %= self.order - 1
        r = _polypowmod(_trim(self.digits(a)), k, self.modulus, self.p)
        return self.encode(r + [0] * (self.degree - len(r)))

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in finite field")
        return self.pow(a, self.order - 2)

    # vector kernels: plain loops
    def _vec(self, fn, *arrays):
        arrays = np.broadcast_arrays(*[np.asarray(a, dtype=np.int64) for a in arrays])
        out = np.empty(arrays[0].shape, dtype=np.int64)
        flat = [a.ravel() for a in arrays]
        res = out.ravel()
        for i in range(res.size):
            res[i] = fn(*(int(f[i]) for f in flat))
        return out

    def vadd(self, a, b):
        return self._vec(self.add, a, b)

    def vsub(self, a, b):
        return self._vec(self.sub, a, b)

    def vneg(self, a):
        return self._vec(self.neg, a)

    def vmul(self, a, b):
        return self._vec(self.mul, a, b)

    def vpow(self, a, k):
        return self._vec(lambda x: self.pow(x, k), a)

    def vdigits(self, a):
        a = np.asarray(a, dtype=np.int64)
        out = np.empty(a.shape + (self.degree,), dtype=np.int64)
        r = a.copy()
        for i in range(self.degree):
            out[..., i] = r % self.p
            r //= self.p
        return out


class _TableArith(_PolyArith):
    """Exp/log/Zech tables over a primitive element."""

    def __init__(self, p: int, degree: int, modulus: tuple[int, ...]):
        super().__init__(p, degree, modulus)
        N = self.order
        Q = N - 1
        self.Q = Q
        w = np.array(self.weights, dtype=np.int64)
        self.w = w

        # digits of every encoding
        dig = np.empty((N, degree), dtype=np.int64)
        r = np.arange(N, dtype=np.int64)
        for i in range(degree):
            dig[:, i] = r % p
            r //= p
        self.digit_table = dig

        g = self._primitive_element()
        self.generator = g
        mg = self._mul_matrix(g)
        exp_digits = self._power_digits(mg, Q)
        exp = exp_digits @ w
        log = np.full(N, -1, dtype=np.int64)
        log[exp] = np.arange(Q, dtype=np.int64)
        one_plus = exp_digits.copy()
        one_plus[:, 0] = (one_plus[:, 0] + 1) % p
        zech = log[one_plus @ w]
        self.exp = exp
        self.log = log
        self.zech = zech
        self.neg_shift = Q // 2 if p != 2 else 0
        if N <= _LIST_LIMIT:
            self._exp = exp.tolist()
            self._log = log.tolist()
            self._zech = zech.tolist()
        else:
            self._exp, self._log, self._zech = exp, log, zech

    def _primitive_element(self) -> int:
        Q = self.order - 1
        factors = prime_factors(Q)
        for g in range(2, self.order):
            gd = _trim(self.digits(g))
            if all(_polypowmod(gd, Q // r, self.modulus, self.p) != [1] for r in factors):
                return g
        return 1  # F_2 only

    def _mul_matrix(self, a: int) -> np.ndarray:
        cols = []
        for k in range(self.degree):
            cols.append(self.digits(super().mul(a, self.p ** k)))
        return np.array(cols, dtype=np.int64).T

    def _power_digits(self, mg: np.ndarray, count: int) -> np.ndarray:
        p = self.p
        block = max(1, math.isqrt(count) + 1)
        first = np.zeros((block, self.degree), dtype=np.int64)
        v = np.zeros(self.degree, dtype=np.int64)
        v[0] = 1
        for i in range(block):
            first[i] = v
            v = (mg @ v) % p
        step = np.eye(self.degree, dtype=np.int64)
        base = mg.copy()
        k = block
        while k:
            if k & 1:
                step = (step @ base) % p
            base = (base @ base) % p
            k >>= 1
        parts = [first]
        total = block
        cur = first
        while total < count:
            cur = (cur @ step.T) % p
            parts.append(cur)
            total += block
        return np.concatenate(parts)[:count]

    def add(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self.Q]
        if z < 0:
            return 0
        return int(self._exp[(la + z) % self.Q])

    def neg(self, a):
        if a == 0:
            return 0
        return int(self._exp[(self._log[a] + self.neg_shift) % self.Q])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(self._log[a] + self._log[b]) % self.Q])

    def pow(self, a, k):
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 0
        return int(self._exp[(int(self._log[a]) * k) % self.Q])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in finite field")
        return int(self._exp[(-self._log[a]) % self.Q])

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self.exp[(self.log[a] + self.log[b]) % self.Q]
        return np.where((a == 0) | (b == 0), 0, r)

    def vadd(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        la = self.log[a]
        z = self.zech[(self.log[b] - la) % self.Q]
        r = np.where(z < 0, 0, self.exp[(la + z) % self.Q])
        r = np.where(a == 0, b, r)
        return np.where(b == 0, a, r)

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == 0, 0, self.exp[(self.log[a] + self.neg_shift) % self.Q])

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vpow(self, a, k):
        a = np.asarray(a, dtype=np.int64)
        if k < 0 and np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse")
        kk = k % self.Q
        r = self.exp[(self.log[a] * kk) % self.Q]
        zero_val = 1 if k == 0 else 0
        return np.where(a == 0, zero_val, r)

    def vdigits(self, a):
        return self.digit_table[np.asarray(a, dtype=np.int64)]


# ---------------------------------------------------------------------------
# context and elements
# ---------------------------------------------------------------------------

class FieldContext:
    """The tower F_p <= F_q <= ... <= F_{q^n} with q = p^e.

    Levels are relative degrees over F_q; level ``m`` is only meaningful when
    ``m`` divides ``n``.  Contexts are immutable and compare equal when their
    parameters and modulus agree.
    """

    def __init__(self, p: int, e: int, n: int, modulus: Sequence[int]):
        self.p = p
        self.e = e
        self.n = n
        self.q = p ** e
        self.degree = e * n
        self.order = p ** self.degree
        self.modulus = tuple(int(c) for c in modulus)
        if len(self.modulus) != self.degree + 1 or self.modulus[-1] != 1:
            raise InvalidParameter("modulus must be monic of degree e*n")
        if not is_irreducible(self.modulus, p):
            raise InvalidParameter("modulus is not irreducible over F_p")
        backend = _TableArith if self.order <= TABLE_LIMIT else _PolyArith
        self.arith = backend(p, self.degree, self.modulus)
        self.has_tables = isinstance(self.arith, _TableArith)

    # -- identity -----------------------------------------------------------
    def key(self) -> tuple:
        return (self.p, self.e, self.n, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldContext) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FieldContext(p={self.p}, e={self.e}, n={self.n}, modulus={list(self.modulus)})"

    @property
    def geometry_supported(self) -> bool:
        return self.p != 2

    def require_odd(self, what: str = "this operation"):
        if self.p == 2:
            raise UnsupportedConfiguration(f"{what} requires odd characteristic")

    # -- element construction ---------------------------------------------
    def __call__(self, value: int, level: int | None = None) -> "FieldElement":
        if isinstance(value, FieldElement):
            value = value.value
        value = int(value)
        if not 0 <= value < self.order:
            raise InvalidParameter(f"encoding {value} out of range for a field of order {self.order}")
        if level is None:
            return FieldElement(self, value, self.n)
        self._check_level(level)
        if self.frob_raw(value, level) != value:
            raise InvalidParameter(f"element {value} does not lie in the level-{level} subfield")
        return FieldElement(self, value, level)

    def from_int(self, k: int) -> "FieldElement":
        """Image of the integer ``k`` in the prime field."""
        return FieldElement(self, k % self.p, 1)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0, 1)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1, 1)

    def theta(self) -> "FieldElement":
        """The root of the modulus (encoding ``p``, or 1 when degree is 1)."""
        if self.degree == 1:
            return FieldElement(self, (-self.modulus[0]) % self.p, self.n)
        return FieldElement(self, self.p, self.n)

    def _check_level(self, m: int):
        if m < 1 or self.n % m:
            raise InvalidParameter(f"level {m} does not divide n={self.n}")

    def from_coords(self, coords: Sequence[int], level: int | None = None) -> "FieldElement":
        return self(self.arith.encode(coords), level)

    def coords(self, x: "FieldElement | int") -> tuple[int, ...]:
        v = x.value if isinstance(x, FieldElement) else int(x)
        return tuple(self.arith.digits(v))

    # -- raw operations on encodings ----------------------------------------
    def frob_raw(self, value: int, i: int) -> int:
        """``value^(q^i)`` with ``i`` reduced mod n."""
        return self.arith.pow(value, self.q ** (i % self.n))

    def ppow_raw(self, value: int, i: int) -> int:
        """``value^(p^i)`` with ``i`` reduced mod e*n."""
        return self.arith.pow(value, self.p ** (i % self.degree))

    def level_of(self, x: "FieldElement | int") -> int:
        v = x.value if isinstance(x, FieldElement) else int(x)
        for m in divisors(self.n):
            if self.frob_raw(v, m) == v:
                return m
        return self.n

    def subfield(self, m: int) -> np.ndarray:
        """Sorted encodings of all elements of the level-``m`` subfield."""
        self._check_level(m)
        return _subfield_cached(self, m)

    # -- vectorised kernels over arrays of encodings ----------------------
    def vmul(self, a, b):
        return self.arith.vmul(a, b)

    def vadd(self, a, b):
        return self.arith.vadd(a, b)

    def vsub(self, a, b):
        return self.arith.vsub(a, b)

    def vneg(self, a):
        return self.arith.vneg(a)

    def vpow(self, a, k: int):
        return self.arith.vpow(a, k)

    def vfrob(self, a, i: int):
        return self.arith.vpow(a, self.q ** (i % self.n))

    def vdigits(self, a):
        return self.arith.vdigits(a)

    def vencode(self, digits) -> np.ndarray:
        w = np.array([self.p ** i for i in range(self.degree)], dtype=np.int64)
        return (np.asarray(digits, dtype=np.int64) % self.p) @ w


@functools.lru_cache(maxsize=None)
def _subfield_cached(ctx: FieldContext, m: int) -> np.ndarray:
    size = ctx.q ** m
    if ctx.has_tables:
        step = (ctx.order - 1) // (size - 1)
        vals = np.concatenate([[0], ctx.arith.exp[::step][: size - 1]])
    else:
        if ctx.order > 1 << 24:
            raise UnsupportedConfiguration("subfield enumeration needs a table-backed context")
        allv = np.arange(ctx.order, dtype=np.int64)
        vals = allv[ctx.vpow(allv, ctx.q ** m) == allv]
    out = np.sort(vals.astype(np.int64))
    out.setflags(write=False)
    return out


class FieldElement:
    """An element of a :class:`FieldContext` together with a declared level."""

    __slots__ = ("ctx", "value", "level")

    def __init__(self, ctx: FieldContext, value: int, level: int):
        self.ctx = ctx
        self.value = value
        self.level = level

    # -- coercion -------------------------------------------------------------
    def _other(self, y) -> "FieldElement":
        if isinstance(y, FieldElement):
            if y.ctx is not self.ctx and y.ctx != self.ctx:
                raise InvalidParameter("operands belong to different field contexts")
            return y
        if isinstance(y, (int, np.integer)):
            return self.ctx.from_int(int(y))
        return NotImplemented

    def _lvl(self, y: "FieldElement") -> int:
        return math.lcm(self.level, y.level)

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return FieldElement(self.ctx, self.ctx.arith.add(self.value, y.value), self._lvl(y))

    __radd__ = __add__

    def __sub__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return FieldElement(self.ctx, self.ctx.arith.sub(self.value, y.value), self._lvl(y))

    def __rsub__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return y - self

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.arith.neg(self.value), self.level)

    def __mul__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return FieldElement(self.ctx, self.ctx.arith.mul(self.value, y.value), self._lvl(y))

    __rmul__ = __mul__

    def __truediv__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return FieldElement(self.ctx, self.ctx.arith.mul(self.value, self.ctx.arith.inv(y.value)),
                            self._lvl(y))

    def __rtruediv__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return y / self

    def __pow__(self, k: int):
        return FieldElement(self.ctx, self.ctx.arith.pow(self.value, int(k)), self.level)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.arith.inv(self.value), self.level)

    def frobenius(self, i: int = 1) -> "FieldElement":
        """``self^(q^i)``."""
        return FieldElement(self.ctx, self.ctx.frob_raw(self.value, i), self.level)

    def p_power(self, i: int = 1) -> "FieldElement":
        """``self^(p^i)``."""
        return FieldElement(self.ctx, self.ctx.ppow_raw(self.value, i), self.level)

    def at_level(self, m: int) -> "FieldElement":
        """Re-declare at level ``m`` after checking membership."""
        return self.ctx(self.value, m)

    # -- comparisons ----------------------------------------------------------
    def __eq__(self, y):
        if isinstance(y, FieldElement):
            return self.value == y.value and self.ctx == y.ctx
        if isinstance(y, (int, np.integer)):
            return self.value == self.ctx.from_int(int(y)).value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.ctx.key()))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value}, level={self.level})"


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=32)
def build_tower(p: int, e: int = 1, n: int = 1) -> FieldContext:
    """Build the tower F_p <= F_{p^e} <= F_{p^(e n)} with a canonical modulus.

    The modulus is the first monic irreducible of degree ``e*n`` over F_p in
    integer-encoding order, so equal inputs always give identical contexts.
    Characteristic 2 is accepted; geometry routines refuse it later.
    """
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise InvalidParameter(f"p={p} is not prime")
    if e < 1 or n < 1:
        raise InvalidParameter("e and n must be positive")
    return FieldContext(int(p), int(e), int(n), first_irreducible(int(p), int(e) * int(n)))


def arith(ctx: FieldContext, op: str, x: FieldElement, y) -> FieldElement:
    """Dispatch a binary operation by name: add, sub, mul, div or pow."""
    if x.ctx != ctx:
        raise InvalidParameter("operand does not belong to the context")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "pow":
        return x ** int(y)
    raise InvalidParameter(f"unknown operation {op!r}")


def frobenius(ctx: FieldContext, x: FieldElement, i: int) -> FieldElement:
    return x.frobenius(i)


def relative_norm(ctx: FieldContext, x: FieldElement, m: int, top: int | None = None) -> FieldElement:
    """Norm from the level-``top`` field (default n) down to level ``m``."""
    top = ctx.n if top is None else top
    ctx._check_level(m)
    ctx._check_level(top)
    if top % m:
        raise InvalidParameter(f"level {m} does not divide {top}")
    k = (ctx.q ** top - 1) // (ctx.q ** m - 1)
    return FieldElement(ctx, ctx.arith.pow(x.value, k), m)


def relative_trace(ctx: FieldContext, x: FieldElement, m: int, top: int | None = None) -> FieldElement:
    top = ctx.n if top is None else top
    ctx._check_level(m)
    ctx._check_level(top)
    if top % m:
        raise InvalidParameter(f"level {m} does not divide {top}")
    acc = 0
    for k in range(top // m):
        acc = ctx.arith.add(acc, ctx.frob_raw(x.value, m * k))
    return FieldElement(ctx, acc, m)


def is_square(ctx: FieldContext, x: FieldElement, m: int | None = None) -> bool:
    """Whether ``x`` is a square in the level-``m`` field (default: its declared level)."""
    m = x.level if m is None else m
    ctx._check_level(m)
    if x.value == 0 or ctx.p == 2:
        return True
    if ctx.frob_raw(x.value, m) != x.value:
        raise InvalidParameter(f"element does not lie in the level-{m} subfield")
    return ctx.arith.pow(x.value, (ctx.q ** m - 1) // 2) == 1


def sqrt(ctx: FieldContext, x: FieldElement, m: int | None = None) -> FieldElement:
    """Square root in the level-``m`` field; of the two roots the smaller encoding is returned."""
    m = x.level if m is None else m
    if not is_square(ctx, x, m):
        raise InvalidParameter("element is not a square")
    if x.value == 0:
        return FieldElement(ctx, 0, m)
    if ctx.has_tables:
        lg = int(ctx.arith.log[x.value])
        root = int(ctx.arith.exp[lg // 2]) if lg % 2 == 0 else None
        if root is None:  # only possible in characteristic 2
            root = ctx.arith.pow(x.value, (ctx.order) // 2)
    else:
        root = _tonelli_shanks(ctx, x.value, m)
    other = ctx.arith.neg(root)
    return FieldElement(ctx, min(root, other), m)


def _tonelli_shanks(ctx: FieldContext, a: int, m: int) -> int:
    A = ctx.arith
    if ctx.p == 2:
        return A.pow(a, ctx.order // 2)
    Qm = ctx.q ** m - 1
    s, t = 0, Qm
    while t % 2 == 0:
        s += 1
        t //= 2
    z = find_nonsquare(ctx, m).value
    M, c, tt, R = s, A.pow(z, t), A.pow(a, t), A.pow(a, (t + 1) // 2)
    while tt != 1:
        i, t2 = 0, tt
        while t2 != 1:
            t2 = A.mul(t2, t2)
            i += 1
        b = A.pow(c, 1 << (M - i - 1))
        M, c = i, A.mul(b, b)
        tt, R = A.mul(tt, c), A.mul(R, b)
    return R


def find_nonsquare(ctx: FieldContext, m: int) -> FieldElement:
    """The first non-square of the level-``m`` field in encoding order."""
    ctx.require_odd("finding a non-square")
    ctx._check_level(m)
    half = (ctx.q ** m - 1) // 2
    if m == ctx.n and not ctx.has_tables:
        # the whole field in encoding order; avoid materialising it
        v = 1
        while ctx.arith.pow(v, half) == 1:
            v += 1
        return FieldElement(ctx, v, m)
    sub = ctx.subfield(m)
    powered = ctx.vpow(sub, half)
    idx = np.nonzero((sub != 0) & (powered != 1))[0]
    return FieldElement(ctx, int(sub[idx[0]]), m)


# ---------------------------------------------------------------------------
# matrices over the field, Moore matrices and normal bases
# ---------------------------------------------------------------------------

def field_det(ctx: FieldContext, rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square matrix of raw encodings."""
    A = ctx.arith
    M = [list(map(int, r)) for r in rows]
    size = len(M)
    det = 1
    for c in range(size):
        piv = next((r for r in range(c, size) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = A.neg(det)
        det = A.mul(det, M[c][c])
        inv = A.inv(M[c][c])
        for r in range(c + 1, size):
            if M[r][c]:
                f = A.mul(M[r][c], inv)
                M[r] = [A.sub(x, A.mul(f, y)) for x, y in zip(M[r], M[c])]
    return det


def field_inverse(ctx: FieldContext, rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Inverse of a square matrix of raw encodings (Gauss-Jordan)."""
    A = ctx.arith
    size = len(rows)
    M = [list(map(int, r)) + [1 if i == j else 0 for j in range(size)] for i, r in enumerate(rows)]
    for c in range(size):
        piv = next((r for r in range(c, size) if M[r][c]), None)
        if piv is None:
            raise InvalidParameter("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = A.inv(M[c][c])
        M[c] = [A.mul(inv, x) for x in M[c]]
        for r in range(size):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [A.sub(x, A.mul(f, y)) for x, y in zip(M[r], M[c])]
    return [row[size:] for row in M]


@dataclass(frozen=True)
class MooreMatrix:
    """Matrix with entry (i, j) equal to ``xi^(q^((i+j) mod size))``."""

    element: FieldElement
    size: int
    entries: tuple[tuple[FieldElement, ...], ...] = field(repr=False)
    det: FieldElement = field(repr=False)

    def raw(self) -> list[list[int]]:
        return [[x.value for x in row] for row in self.entries]

    @property
    def nonsingular(self) -> bool:
        return self.det.value != 0


def moore_matrix(ctx: FieldContext, xi: FieldElement, size: int) -> MooreMatrix:
    pw = [xi.frobenius(k) for k in range(size)]
    entries = tuple(tuple(pw[(i + j) % size] for j in range(size)) for i in range(size))
    det = field_det(ctx, [[x.value for x in r] for r in entries])
    return MooreMatrix(xi, size, entries, FieldElement(ctx, det, size))


def find_normal_element(ctx: FieldContext, m: int) -> tuple[FieldElement, MooreMatrix]:
    """First element of F_{q^m} (encoding order) generating a normal basis over F_q."""
    ctx._check_level(m)
    for v in ctx.subfield(m):
        xi = FieldElement(ctx, int(v), m)
        M = moore_matrix(ctx, xi, m)
        if M.nonsingular:
            return xi, M
    raise AssertionError("normal elements always exist")


class FqBasis:
    """Coordinates of level-``m`` elements on an F_q-basis ``b_0, ..., b_{m-1}``.

    With ``B[i][j] = b_j^(q^i)`` we have ``(y^(q^i))_i = B c``, so the
    coordinates are ``c = B^-1 (y^(q^i))_i``.  ``B`` is invertible exactly when
    the elements are F_q-independent.
    """

    def __init__(self, ctx: FieldContext, elements: Sequence[FieldElement], m: int | None = None):
        self.ctx = ctx
        self.m = len(elements) if m is None else m
        if len(elements) != self.m:
            raise InvalidParameter("a basis of F_{q^m} needs exactly m elements")
        self.elements = [ctx(int(b), self.m) for b in elements]
        rows = [[ctx.frob_raw(b.value, i) for b in self.elements] for i in range(self.m)]
        if field_det(ctx, rows) == 0:
            raise InvalidParameter("elements are not F_q-independent")
        self._inv = field_inverse(ctx, rows)

    def coordinates(self, y: FieldElement | int) -> tuple[int, ...]:
        """F_q-coordinates of ``y`` as level-1 encodings."""
        ctx, A = self.ctx, self.ctx.arith
        v = y.value if isinstance(y, FieldElement) else int(y)
        conj = [ctx.frob_raw(v, i) for i in range(self.m)]
        out = []
        for j in range(self.m):
            acc = 0
            for i in range(self.m):
                acc = A.add(acc, A.mul(self._inv[j][i], conj[i]))
            out.append(acc)
        return tuple(out)

    def combine(self, coords: Sequence[int | FieldElement]) -> FieldElement:
        A = self.ctx.arith
        acc = 0
        for c, b in zip(coords, self.elements):
            acc = A.add(acc, A.mul(int(c), b.value))
        return FieldElement(self.ctx, acc, self.m)


class NormalBasis(FqBasis):
    """The basis ``xi, xi^q, ..., xi^(q^(m-1))`` of F_{q^m} over F_q."""

    def __init__(self, ctx: FieldContext, m: int, xi: FieldElement | None = None):
        if xi is None:
            xi, moore = find_normal_element(ctx, m)
        else:
            xi = ctx(xi.value, m)
            moore = moore_matrix(ctx, xi, m)
            if not moore.nonsingular:
                raise InvalidParameter("element is not normal: Moore determinant vanishes")
        self.xi = xi
        self.moore = moore
        super().__init__(ctx, [xi.frobenius(k) for k in range(m)], m)
