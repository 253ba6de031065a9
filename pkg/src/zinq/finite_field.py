"""Finite fields F_q, trace sets U_q and brute-force curve point counts.

Elements of F_q = F_p[x]/(f) are stored as integers 0 <= i < q whose base-p
digits are the coefficients (low degree first).  Multiplication goes through
discrete log tables built from a primitive element.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import BoundExceeded, EvenCharacteristic, PreconditionViolation
from .exact_arith import is_prime, legendre

FIELD_BOUND = 2**16
_ADD_TABLE_LIMIT = 512


# -- polynomials over F_p (coefficient tuples, low degree first) ---------------

def _poly_mod(num: list[int], den: tuple[int, ...], p: int) -> list[int]:
    """Remainder of num modulo den over F_p, as a list of len(den) - 1 coefficients."""
    num = [c % p for c in num]
    dd = len(den) - 1
    inv = pow(den[-1], -1, p)
    for top in range(len(num) - 1, dd - 1, -1):
        c = num[top] * inv % p
        if c:
            shift = top - dd
            for i, d in enumerate(den):
                num[shift + i] = (num[shift + i] - c * d) % p
    return (num + [0] * dd)[:dd]


def _is_irreducible(f: tuple[int, ...], p: int) -> bool:
    k = len(f) - 1
    if k == 1:
        return True
    for deg in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            g = tail + (1,)
            if not any(_poly_mod(list(f), g, p)):
                return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k, comparing the
    coefficient tuple (c0, c1, ..., c_{k-1}) from the constant term up."""
    if k == 1:
        return (0, 1)
    for m in range(1, p**k):
        f = tuple((m // p ** (k - 1 - i)) % p for i in range(k)) + (1,)
        if f[0] != 0 and _is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# -- the field ------------------------------------------------------------------

class FqContext:
    """F_q with q = p**k and a fixed modulus; build through :func:`fq_context`."""

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p, self.k, self.modulus = p, k, modulus
        self.q = p**k
        self._build_tables()
        self._add = None
        if k > 1 and self.q <= _ADD_TABLE_LIMIT:
            q = self.q
            self._add = [[self._add_digits(i, j) for j in range(q)] for i in range(q)]
        self._neg = [self._neg_digits(i) for i in range(self.q)]

    def __repr__(self):
        return f"FqContext(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    # digits <-> index
    def coeffs(self, i: int) -> tuple[int, ...]:
        p, out = self.p, []
        for _ in range(self.k):
            i, r = divmod(i, p)
            out.append(r)
        return tuple(out)

    def index(self, coeffs) -> int:
        i = 0
        for c in reversed(list(coeffs) + [0] * (self.k - len(coeffs))):
            i = i * self.p + c % self.p
        return i

    def _add_digits(self, i: int, j: int) -> int:
        p, out, scale = self.p, 0, 1
        for _ in range(self.k):
            i, a = divmod(i, p)
            j, b = divmod(j, p)
            out += ((a + b) % p) * scale
            scale *= p
        return out

    def _neg_digits(self, i: int) -> int:
        return self.index([(-c) % self.p for c in self.coeffs(i)])

    def _poly_mulmod(self, a: int, b: int) -> int:
        p = self.p
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        return self.index(_poly_mod(prod, self.modulus, p))

    def _build_tables(self):
        q = self.q
        order = q - 1
        factors = [r for r in range(2, order + 1) if order % r == 0 and is_prime(r)]
        for g in range(2 if q > 2 else 1, q):
            exp = [1] * order
            x = 1
            for e in range(1, order):
                x = self._poly_mulmod(x, g)
                exp[e] = x
            if all(exp[order // r] != 1 for r in factors):
                break
        else:  # pragma: no cover
            raise AssertionError("no primitive element")
        self._exp = exp
        self._log = [0] * q
        for e, x in enumerate(exp):
            self._log[x] = e

    # arithmetic on indices
    def add(self, i: int, j: int) -> int:
        if self.k == 1:
            return (i + j) % self.p
        if self._add is not None:
            return self._add[i][j]
        return self._add_digits(i, j)

    def neg(self, i: int) -> int:
        return self._neg[i]

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self._neg[j])

    def mul(self, i: int, j: int) -> int:
        if i == 0 or j == 0:
            return 0
        if self.k == 1:
            return i * j % self.p
        return self._exp[(self._log[i] + self._log[j]) % (self.q - 1)]

    def inv(self, i: int) -> int:
        if i == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self._exp[(-self._log[i]) % (self.q - 1)]

    def square(self, i: int) -> int:
        return self.mul(i, i)

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def elem(self, i: int) -> "FqElem":
        return FqElem(self, i)

    def smallest_nonsquare(self) -> int:
        """Smallest index c != 0 that is not a square (odd q only)."""
        if self.p == 2:
            raise EvenCharacteristic("every element of F_2^k is a square")
        squares = {self.square(x) for x in range(1, self.q)}
        return next(c for c in range(1, self.q) if c not in squares)

    def artin_schreier_constant(self) -> int:
        """Smallest c with x^2 + x + c irreducible (even q only)."""
        if self.p != 2:
            raise PreconditionViolation("only meaningful in characteristic 2")
        image = {self.add(self.square(x), x) for x in range(self.q)}
        return next(c for c in range(self.q) if c not in image)


@lru_cache(maxsize=None)
def _context(p: int, k: int) -> FqContext:
    return FqContext(p, k, smallest_irreducible(p, k))


def fq_context(p: int, k: int = 1, *, bound: int = FIELD_BOUND) -> FqContext:
    if not is_prime(p):
        raise PreconditionViolation(f"{p} is not prime")
    if k < 1:
        raise PreconditionViolation("k must be >= 1")
    if p**k > bound:
        raise BoundExceeded(f"q = {p}^{k} exceeds the bound {bound}")
    return _context(p, k)


@dataclass(frozen=True, order=True)
class FqElem:
    ctx: FqContext = field(compare=False, repr=False)
    index: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.ctx.coeffs(self.index)

    def to_json(self) -> dict:
        return {"p": self.ctx.p, "k": self.ctx.k, "coeffs": list(self.coeffs)}

    def __str__(self):
        return "[" + ",".join(map(str, self.coeffs)) + "]"


# -- U_q ------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _uq_indices(ctx: FqContext) -> frozenset[int]:
    # x^2 - s x + 1 has a root r iff r != 0 and s = r + 1/r; with no root it
    # cannot be the square of a linear factor either, so it is irreducible.
    reducible = {ctx.add(r, ctx.inv(r)) for r in range(1, ctx.q)}
    return frozenset(s for s in range(ctx.q) if s not in reducible)


def compute_Uq(ctx: FqContext) -> list[FqElem]:
    """Sorted list of s in F_q with x^2 - s x + 1 irreducible."""
    return [FqElem(ctx, s) for s in sorted(_uq_indices(ctx))]


def uq_sumset(ctx: FqContext) -> frozenset[int]:
    u = _uq_indices(ctx)
    return frozenset(ctx.add(x, y) for x in u for y in u)


def sumset_covers(ctx: FqContext) -> bool:
    """True iff U_q + U_q = F_q."""
    return len(uq_sumset(ctx)) == ctx.q


# -- curves -----------------------------------------------------------------------

def count_norm_trace_curve(ctx: FqContext, a) -> int:
    """#X(F_q) for the curve witnessing a in U_q + U_q.

    Odd q:  x1^2 - c y1^2 = 1, x2^2 - c y2^2 = 1, 2x1 + 2x2 = a, y1, y2 != 0
    Even q: x1^2 + x1 y1 + c y1^2 = 1, same for (x2, y2), y1 + y2 = a, y1, y2 != 0
    with c the smallest nonsquare (odd q) or smallest c making x^2 + x + c
    irreducible (even q).  Enumerates (x1, y1) and counts the matching
    (x2, y2) from a precomputed table.
    """
    a = a.index if isinstance(a, FqElem) else int(a)
    if a == 0:
        raise PreconditionViolation("a must be nonzero")
    q = ctx.q
    add, mul, sq = ctx.add, ctx.mul, ctx.square
    one = 1
    total = 0
    if ctx.p != 2:
        c = ctx.smallest_nonsquare()
        # number of y != 0 with c*y^2 == w
        nonzero_y = [0] * q
        for y in range(1, q):
            nonzero_y[mul(c, sq(y))] += 1
        half_a = mul(a, ctx.inv(ctx.from_int(2)))
        for x1 in range(q):
            rhs = ctx.sub(sq(x1), one)  # c*y1^2 must equal x1^2 - 1
            n1 = nonzero_y[rhs]
            if not n1:
                continue
            x2 = ctx.sub(half_a, x1)
            total += n1 * nonzero_y[ctx.sub(sq(x2), one)]
        return total
    c = ctx.artin_schreier_constant()
    # number of x with x^2 + x y + c y^2 == 1, indexed by y
    per_y = [0] * q
    for y in range(1, q):
        cy2 = mul(c, sq(y))
        per_y[y] = sum(1 for x in range(q) if add(add(sq(x), mul(x, y)), cy2) == one)
    for y1 in range(1, q):
        y2 = ctx.sub(a, y1)
        if y2 == 0:
            continue
        total += per_y[y1] * per_y[y2]
    return total


def hasse_lower_bound_holds(count: int, q: int, punctures: int) -> bool:
    """Exact test of count >= q + 1 - 2*sqrt(q) - punctures."""
    d = count - (q + 1 - punctures)
    return d >= 0 or d * d <= 4 * q


def hasse_bound_positive(q: int, punctures: int) -> bool:
    """Exact test of q + 1 - 2*sqrt(q) - punctures > 0."""
    m = q + 1 - punctures
    return m > 0 and m * m > 4 * q


def find_nonresidue(p: int) -> int:
    """Smallest positive quadratic nonresidue mod an odd prime p."""
    if p == 2:
        raise EvenCharacteristic("F_2^x has no nonsquares")
    if not is_prime(p):
        raise PreconditionViolation(f"{p} is not prime")
    return next(c for c in range(2, p) if legendre(c, p) == -1)


def count_quartic_curve(p: int, c: int) -> list[tuple[int, int]]:
    """All (x0, y0) in F_p^2 with c^2 x0^4 + y0^2 + 1 = 0 and x0 != 0."""
    if p < 11 or not is_prime(p):
        raise PreconditionViolation("p must be a prime >= 11")
    if legendre(c, p) != -1:
        raise PreconditionViolation(f"{c} is not a nonresidue mod {p}")
    c2 = c * c % p
    roots: dict[int, list[int]] = {}
    for y in range(p):
        roots.setdefault(y * y % p, []).append(y)
    out = []
    for x in range(1, p):
        need = (-1 - c2 * pow(x, 4, p)) % p
        out.extend((x, y) for y in roots.get(need, ()))
    return out
