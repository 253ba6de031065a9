"""Exact rational arithmetic, factorization and p-adic helpers.

Rationals are :class:`fractions.Fraction`, which is already canonical
(``gcd(num, den) == 1`` and ``den > 0``) at construction.  The only string
form accepted or emitted anywhere in the package is ``"num/den"`` (or a bare
integer); decimals are rejected on purpose.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .errors import BudgetExceeded, NegativeInput, NotCoprime, NotPIntegral

Rational = Fraction

TRIAL_LIMIT = 10**6
RHO_ITERATIONS = 200_000
DEFAULT_SEED = 0

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"5"``, ``"-3/7"`` etc.  Raises ValueError on anything else."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational of the form num/den: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(x) -> str:
    return str(Fraction(x))


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


# -- primes -----------------------------------------------------------------

@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    n = TRIAL_LIMIT
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return tuple(i for i in range(n + 1) if sieve[i])


@lru_cache(maxsize=1)
def _prime_blocks(size: int = 256) -> tuple[tuple[tuple[int, ...], int], ...]:
    """The trial-division primes in blocks, each with its product, so that a
    block sharing no factor with n costs a single gcd."""
    ps = _small_primes()
    return tuple((ps[i : i + size], math.prod(ps[i : i + size])) for i in range(0, len(ps), size))


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24 (the bases below)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = list(_MR_BASES)
    if n >= 3_317_044_064_679_887_385_961_981:
        rng = random.Random(n)
        bases += [rng.randrange(2, n - 1) for _ in range(16)]
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n <= TRIAL_LIMIT:
        ps = _small_primes()
        return [p for p in ps if p <= n] if n < ps[-1] else list(ps)
    return [p for p in range(2, n + 1) if is_prime(p)]


def is_prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q == p**k, or None."""
    if q < 2:
        return None
    for p in primes_up_to(math.isqrt(q) + 1):
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            return (p, k) if q == 1 else None
    return (q, 1)


def prime_powers_up_to(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if is_prime_power(q)]


@dataclass(frozen=True)
class Place:
    """A place of Q: a finite prime ``p`` or the real place (``p is None``)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.p is None

    def __str__(self):
        return "inf" if self.p is None else str(self.p)


INF = Place(None)


def as_place(v) -> Place:
    if isinstance(v, Place):
        return v
    if v is None or v == "inf" or v == math.inf:
        return INF
    return Place(int(v))


# -- factorization ----------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def _brent(n: int, rng: random.Random, iterations: int) -> int | None:
    """One Pollard-Brent run; returns a nontrivial factor or None."""
    if n % 2 == 0:
        return 2
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    used = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * (x - y) % n
            g = math.gcd(q, n)
            k += m
        used += r
        r *= 2
        if used > iterations:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split(n: int, rng: random.Random, iterations: int, out: dict[int, int]):
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, rng, iterations, out)
        _split(r, rng, iterations, out)
        return
    for _ in range(8):
        d = _brent(n, rng, iterations)
        if d is not None:
            _split(d, rng, iterations, out)
            _split(n // d, rng, iterations, out)
            return
    raise BudgetExceeded(f"could not split composite {n} within {iterations} rho iterations")


@lru_cache(maxsize=65536)
def _factorize_abs(n: int, trial_limit: int, rho_iterations: int, seed: int):
    found: dict[int, int] = {}
    if n > 1 and is_prime(n):
        return ((n, 1),)
    done = False
    for block, prod in _prime_blocks():
        if done or block[0] > trial_limit or block[0] ** 2 > n:
            break
        if math.gcd(n, prod) == 1:
            continue
        for p in block:
            if p > trial_limit or p * p > n:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                found[p] = e
                if n > 1 and is_prime(n):
                    done = True
                    break
    if n > 1:
        _split(n, random.Random(seed), rho_iterations, found)
    return tuple(sorted(found.items()))


def factorize(
    n: int,
    *,
    trial_limit: int = TRIAL_LIMIT,
    rho_iterations: int = RHO_ITERATIONS,
    seed: int = DEFAULT_SEED,
) -> Factorization:
    """Factor a nonzero integer.

    Trial division up to ``trial_limit`` (stopping early once the cofactor is
    prime), then Pollard-Brent with at most ``rho_iterations`` steps per
    attempt.  A composite that survives the budget raises BudgetExceeded.
    """
    n = int(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    return Factorization(1 if n > 0 else -1, _factorize_abs(abs(n), trial_limit, rho_iterations, seed))


def prime_divisors(*xs) -> list[int]:
    """Sorted primes dividing a numerator or denominator of any of ``xs``."""
    ps: set[int] = set()
    for x in xs:
        x = as_rational(x)
        for part in (x.numerator, x.denominator):
            if part != 0 and abs(part) != 1:
                ps.update(factorize(part).primes)
    return sorted(ps)


def squarefree_part(n: int) -> tuple[int, int]:
    """Write n = s * f**2 with s squarefree (sign kept in s)."""
    s, f = (1 if n > 0 else -1), 1
    for p, e in factorize(n).factors:
        if e % 2:
            s *= p
        f *= p ** (e // 2)
    return s, f


# -- valuations and local squares ---------------------------------------------

def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(x, p: int):
    """v_p(x) as an int, or math.inf for x == 0."""
    x = as_rational(x)
    if x == 0:
        return math.inf
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def unit_part(x, p: int) -> Fraction:
    """x / p**v_p(x)."""
    x = as_rational(x)
    v = padic_valuation(x, p)
    return x / Fraction(p) ** v


def reduce_mod_p(x, p: int) -> int:
    x = as_rational(x)
    if padic_valuation(x, p) < 0:
        raise NotPIntegral(f"{x} is not integral at {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p, via Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_square_local(x, v) -> bool:
    x = as_rational(x)
    if x == 0:
        raise ValueError("is_square_local needs x != 0")
    v = as_place(v)
    if v.is_infinite:
        return x > 0
    p = v.p
    if padic_valuation(x, p) % 2:
        return False
    u = unit_part(x, p)
    w = u.numerator * u.denominator  # same square class as u
    if p == 2:
        return w % 8 == 1
    return legendre(w, p) == 1


def sqrt_mod_prime(a: int, p: int) -> int:
    """Tonelli-Shanks; raises ValueError if a is a nonresidue."""
    a %= p
    if a == 0 or p == 2:
        return a
    if legendre(a, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


# -- CRT ------------------------------------------------------------------------

def crt(congruences: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Combine (residue, modulus) pairs with pairwise coprime moduli.

    Returns (r, M) with 0 <= r < M; the empty list gives (0, 1).
    """
    r, m = 0, 1
    for res, mod in congruences:
        if mod <= 0:
            raise ValueError("moduli must be positive")
        if math.gcd(m, mod) != 1:
            raise NotCoprime(f"modulus {mod} shares a factor with {m}")
        # r + m*k = res (mod mod)
        k = (res - r) * pow(m, -1, mod) % mod
        r, m = r + m * k, m * mod
    return r % m, m


# -- sums of squares ------------------------------------------------------------

_EXHAUSTIVE_BELOW = 10**6


def _four_squares_small(n: int) -> tuple[int, int, int, int]:
    # descending a >= b >= c >= d, first hit wins
    for a in range(math.isqrt(n), -1, -1):
        r1 = n - a * a
        for b in range(min(a, math.isqrt(r1)), -1, -1):
            r2 = r1 - b * b
            for c in range(min(b, math.isqrt(r2)), -1, -1):
                r3 = r2 - c * c
                d = math.isqrt(r3)
                if d * d == r3 and d <= c:
                    return a, b, c, d
    raise AssertionError("Lagrange's theorem failed")  # pragma: no cover


def two_squares_prime(p: int) -> tuple[int, int]:
    """x**2 + y**2 == p for a prime p == 1 (mod 4) (or p == 2)."""
    if p == 2:
        return 1, 1
    r = sqrt_mod_prime(-1, p)
    a, b = p, r
    limit = math.isqrt(p)
    while b > limit:
        a, b = b, a % b
    c = math.isqrt(p - b * b)
    assert b * b + c * c == p
    return b, c


def _four_squares_int(n: int, rng: random.Random, retries: int) -> tuple[int, int, int, int]:
    if n < _EXHAUSTIVE_BELOW:
        return _four_squares_small(n)
    e = 0
    while n % 4 == 0:
        n //= 4
        e += 1
    scale = 1 << e
    if n < _EXHAUSTIVE_BELOW:
        return tuple(scale * v for v in _four_squares_small(n))
    for _ in range(retries):
        x = rng.randrange(math.isqrt(n) + 1)
        y = rng.randrange(math.isqrt(n - x * x) + 1)
        r = n - x * x - y * y
        if r in (0, 1, 2):
            z, w = {0: (0, 0), 1: (1, 0), 2: (1, 1)}[r]
        elif r % 4 == 1 and is_prime(r):
            z, w = two_squares_prime(r)
        else:
            continue
        return tuple(scale * v for v in (x, y, z, w))
    raise BudgetExceeded(f"no four-square decomposition of {n} in {retries} tries")


def four_squares(r, *, seed: int = DEFAULT_SEED, retries: int = 100_000) -> tuple[Fraction, ...]:
    """Four rationals whose squares sum to ``r >= 0`` exactly.

    r = m/d is handled through the integer m*d = u1^2 + ... + u4^2, giving
    r = (u1/d)^2 + ... + (u4/d)^2.
    """
    r = as_rational(r)
    if r < 0:
        raise NegativeInput(f"{r} < 0 is not a sum of squares")
    m, d = r.numerator, r.denominator
    us = _four_squares_int(m * d, random.Random(seed), retries)
    out = tuple(Fraction(u, d) for u in us)
    assert sum(v * v for v in out) == r
    return out


