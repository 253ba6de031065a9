"""Hilbert symbols, ramification of H_{a,b}, and a constructive conic solver."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    BudgetExceeded,
    NotInTraceSet,
    PreconditionViolation,
    SearchBudgetExceeded,
    Unsolvable,
)
from .exact_arith import (
    INF,
    Place,
    as_place,
    as_rational,
    crt,
    factorize,
    is_square_local,
    legendre,
    padic_valuation,
    prime_divisors,
    reduce_mod_p,
    sqrt_mod_prime,
    squarefree_part,
)


@dataclass(frozen=True)
class QuatParams:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        if self.a == 0 or self.b == 0:
            raise PreconditionViolation("quaternion parameters must be nonzero")


@dataclass(frozen=True)
class QuatElem:
    """x1 + x2 i + x3 j + x4 ij."""

    x1: Fraction
    x2: Fraction = Fraction(0)
    x3: Fraction = Fraction(0)
    x4: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("x1", "x2", "x3", "x4"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.x1, self.x2, self.x3, self.x4


@dataclass(frozen=True)
class RamificationSet:
    finite_primes: tuple[int, ...]
    infinite_ramified: bool

    def __contains__(self, p):
        return p in self.finite_primes


def reduced_trace(e: QuatElem) -> Fraction:
    return 2 * e.x1


def reduced_norm(e: QuatElem, params: QuatParams) -> Fraction:
    a, b = params.a, params.b
    return e.x1**2 - a * e.x2**2 - b * e.x3**2 + a * b * e.x4**2


# -- Hilbert symbol ---------------------------------------------------------------

def _split_p(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def _hilbert_int(a: int, b: int, p: int) -> int:
    alpha, u = _split_p(a, p)
    beta, v = _split_p(b, p)
    if p == 2:
        eps_u, eps_v = ((u - 1) // 2) % 2, ((v - 1) // 2) % 2
        om_u, om_v = ((u * u - 1) // 8) % 2, ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre(u, p)
    if alpha % 2:
        sign *= legendre(v, p)
    return sign


def hilbert_symbol(a, b, v) -> int:
    """(a, b)_v for nonzero rationals a, b and a place v (prime or "inf")."""
    a, b = as_rational(a), as_rational(b)
    if a == 0 or b == 0:
        raise PreconditionViolation("Hilbert symbol needs nonzero arguments")
    v = as_place(v)
    if v.is_infinite:
        return -1 if (a < 0 and b < 0) else 1
    # multiplying by den^2 keeps the square class
    return _hilbert_int(a.numerator * a.denominator, b.numerator * b.denominator, v.p)


def _factor(n: int, known=()) -> dict[int, int]:
    """Exponents of |n|, dividing out the primes in ``known`` before factoring the rest."""
    n = abs(n)
    out: dict[int, int] = {}
    for p in known:
        while n % p == 0:
            n //= p
            out[p] = out.get(p, 0) + 1
    if n > 1:
        for p, e in factorize(n).factors:
            out[p] = out.get(p, 0) + e
    return out


def candidate_primes(*xs, known=()) -> list[int]:
    """2 together with every prime dividing a numerator or denominator.

    ``known`` lists primes already found, so only the cofactors are factored.
    """
    if not known:
        return sorted(set(prime_divisors(*xs)) | {2})
    ps = {2}
    for x in xs:
        x = as_rational(x)
        ps.update(_factor(x.numerator, known))
        ps.update(_factor(x.denominator, known))
    return sorted(ps)


@lru_cache(maxsize=16384)
def _ramified(a: Fraction, b: Fraction) -> RamificationSet:
    finite = tuple(p for p in candidate_primes(a, b) if hilbert_symbol(a, b, p) == -1)
    inf = hilbert_symbol(a, b, INF) == -1
    assert (len(finite) + inf) % 2 == 0, "Hilbert reciprocity violated"
    return RamificationSet(finite, inf)


def ramified_primes(params: QuatParams) -> RamificationSet:
    return _ramified(params.a, params.b)


# -- conics -------------------------------------------------------------------------

def _sqrt_mod_squarefree(a: int, primes) -> int:
    """t with t^2 = a modulo the product n of ``primes``; |t| <= n/2."""
    congr = [(sqrt_mod_prime(a % p, p), p) for p in primes]
    t, m = crt(congr)
    return t - m if t > m // 2 else t


def _gauss_reduce(u: tuple[int, int], v: tuple[int, int], w: int) -> tuple[int, int]:
    """Shortest nonzero vector of the lattice spanned by u, v under w x^2 + z^2."""

    def dot(p, q):
        return w * p[0] * q[0] + p[1] * q[1]

    if dot(u, u) > dot(v, v):
        u, v = v, u
    while True:
        n = dot(u, u)
        mu = (2 * dot(u, v) + n) // (2 * n)
        v = (v[0] - mu * u[0], v[1] - mu * u[1])
        if dot(v, v) >= n:
            return u
        u, v = v, u


def _legendre_descent(a: int, b: int, depth: int = 0, known=()) -> tuple[int, int, int]:
    """Nontrivial integer (x, y, z) with z^2 = a x^2 + b y^2.

    The equation must be locally solvable everywhere.  With |a| <= |b| and b
    squarefree, take t = sqrt(a) mod b; the lattice z = t x (mod b) has a
    short vector with z^2 - a x^2 = b k and |k| <= 1.16 sqrt|a|.  Since bk is a
    norm from Q(sqrt a), (a, k) is solvable too; recurse and glue with the
    norm identity.  Coefficients shrink doubly exponentially, so only small
    numbers past the first two are ever factored (``known`` primes are
    divided out first).
    """
    if depth > 200:  # pragma: no cover
        raise SearchBudgetExceeded("descent did not terminate")
    ra, rb = _exact_sqrt(a), _exact_sqrt(b)
    if ra is not None:
        return 1, 0, ra
    if rb is not None:
        return 0, 1, rb
    if a + b == 0:
        return 1, 1, 0
    if a < 0 and b < 0:
        raise AssertionError(f"descent hit the obstruction at infinity: {a}, {b}")
    if abs(a) > abs(b):
        y, x, z = _legendre_descent(b, a, depth + 1, known)
        return x, y, z
    exps = _factor(b, known)
    f = math.prod(p ** (e // 2) for p, e in exps.items())
    if f > 1:
        x, y, z = _legendre_descent(a, b // (f * f), depth + 1, known)
        return x * f, y, z * f
    try:
        t = _sqrt_mod_squarefree(a, exps)
    except ValueError as exc:
        raise AssertionError(f"descent hit a local obstruction: {a}, {b}") from exc
    x, z = _gauss_reduce((0, abs(b)), (1, t), abs(a))
    k = (z * z - a * x * x) // b
    x1, y1, z1 = _legendre_descent(a, k, depth + 1, known)
    # (z + x sqrt a)(z1 + x1 sqrt a) has norm b (k y1)^2
    X = z * x1 + x * z1
    Z = z * z1 + a * x * x1
    Y = k * y1
    g = math.gcd(math.gcd(X, Y), Z)
    return X // g, Y // g, Z // g


def _exact_sqrt(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def conic_obstruction(a, b, c, *, known=()) -> Place | None:
    """First place where a x^2 + b y^2 = c has no local solution, else None."""
    a, b, c = as_rational(a), as_rational(b), as_rational(c)
    if hilbert_symbol(a * c, b * c, INF) == -1:
        return INF
    for p in candidate_primes(a, b, c, known=known):
        if hilbert_symbol(a * c, b * c, p) == -1:
            return Place(p)
    return None


def _bounded_height_search(a, b, c, height_budget: int):
    """Search x = u/w with |u|, w <= H and solve for y; H doubles each round."""
    h = 1
    while h <= height_budget:
        for w in range(1, h + 1):
            for u in range(-h, h + 1):
                x = Fraction(u, w)
                y2 = (c - a * x * x) / b
                if y2 < 0:
                    continue
                rn, rd = math.isqrt(y2.numerator), math.isqrt(y2.denominator)
                if rn * rn == y2.numerator and rd * rd == y2.denominator:
                    return x, Fraction(rn, rd)
        h *= 2
    return None


def _affine_point(A: Fraction, B: Fraction, X: Fraction, Y: Fraction, Z: Fraction):
    """Given a projective zero of A X^2 + B Y^2 - Z^2, return one with Z != 0."""
    if Z != 0:
        return X, Y, Z
    # line through P = (X, Y, 0) in direction D; second intersection is P + lam D
    for D in ((0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1), (1, -1, 1), (2, 1, 1)):
        dx, dy, dz = map(Fraction, D)
        q_d = A * dx * dx + B * dy * dy - dz * dz
        bil = A * X * dx + B * Y * dy
        if q_d == 0 or bil == 0:
            continue
        lam = -2 * bil / q_d
        X2, Y2, Z2 = X + lam * dx, Y + lam * dy, lam * dz
        if Z2 != 0:
            return X2, Y2, Z2
    raise AssertionError("no affine point found")  # pragma: no cover


def _squarefree_product(x: Fraction, *parts: Fraction, known=()) -> tuple[int, int]:
    """squarefree_part(x.num * x.den) for x = prod(parts), factoring only the parts."""
    odd = 1
    exps: dict[int, int] = {}
    for part in parts:
        for n in (part.numerator, part.denominator):
            for p, e in _factor(n, known).items():
                exps[p] = exps.get(p, 0) + e
    for p, e in exps.items():
        if e % 2:
            odd *= p
    n = x.numerator * x.denominator
    sq = odd if n > 0 else -odd
    f = math.isqrt(n // sq)
    assert sq * f * f == n
    return sq, f


def solve_conic(a, b, c, *, height_budget: int = 64, known=()) -> tuple[Fraction, Fraction]:
    """Rational (x, y) with a x^2 + b y^2 = c.

    ``known`` may list primes dividing the coefficients, to save refactoring.

    Raises Unsolvable (with the obstructing place) only after exhibiting a
    failing local symbol; a failed search raises SearchBudgetExceeded.
    """
    a, b, c = as_rational(a), as_rational(b), as_rational(c)
    if 0 in (a, b, c):
        raise PreconditionViolation("solve_conic needs nonzero coefficients")
    place = conic_obstruction(a, b, c, known=known)
    if place is not None:
        raise Unsolvable(f"{a} x^2 + {b} y^2 = {c} has no point over Q_{place}", place)

    # a x^2 + b y^2 = c  <=>  A X^2 + B Y^2 = Z^2 with A = ac, B = bc, x = cX/Z, y = cY/Z
    # dividing through by a common factor of a and b keeps the descent small
    g = Fraction(math.gcd(a.numerator, b.numerator), math.lcm(a.denominator, b.denominator))
    a, b, c = a / g, b / g, c / g
    A, B = a * c, b * c
    sa, fa = _squarefree_product(A, a, c, known=known)
    sb, fb = _squarefree_product(B, b, c, known=known)
    # A = sa * (fa / A.den)^2
    ra, rb = Fraction(fa, A.denominator), Fraction(fb, B.denominator)
    try:
        x0, y0, z0 = _legendre_descent(sa, sb, known=known)
        X, Y, Z = Fraction(x0) / ra, Fraction(y0) / rb, Fraction(z0)
        X, Y, Z = _affine_point(A, B, X, Y, Z)
        x, y = c * X / Z, c * Y / Z
    except BudgetExceeded:
        found = _bounded_height_search(a, b, c, height_budget)
        if found is None:
            raise SearchBudgetExceeded(
                f"{a} x^2 + {b} y^2 = {c} is locally solvable but no point was found"
            ) from None
        x, y = found
    if a * x * x + b * y * y != c:  # pragma: no cover
        raise AssertionError("conic solution failed substitution check")
    return abs(x), abs(y)


# -- norm one, prescribed trace --------------------------------------------------------

def in_S_local_params(params: QuatParams, s: Fraction, p: int, delta: RamificationSet) -> bool:
    if p not in delta:
        return True
    if s in (2, -2):
        return True
    if padic_valuation(s, p) < 0:
        return False
    return not is_square_local(s * s - 4, p)


def _locally_solvable_at(a, b, c, places) -> bool:
    return all(hilbert_symbol(a * c, b * c, v) == 1 for v in places)


@lru_cache(maxsize=4096)
def _local_class(a: int, b: int, r: Fraction, p: int, max_e: int = 6):
    """A p-adic class of x4 on which the slice a x2^2 + b x3^2 = r + ab x4^2 is solvable at p.

    Returns (e, u, K): every x4 with v_p(x4 - u/p^e) >= K works, because on
    that class c = r + ab x4^2 keeps its square class.  None if nothing is
    found within the search limits.
    """
    place = Place(p)
    # the class of c is mostly read off the low p-adic digits of u
    max_u = 2 * p**3 + 2 if p <= 7 else 4 * p + 4
    extra = 3 if p == 2 else 1
    vab = padic_valuation(Fraction(a * b), p)
    vr = padic_valuation(r, p) if r else None

    def units(j):
        # u = p^j w with p not dividing w
        return (p**j * w for w in range(1, (max_u - 1) // p**j + 1) if w % p)

    def candidates(e):
        if p == 2:
            return units(0) if e else range(1, max_u)
        # odd p: unless v(ab x4^2) = v(r), c has the class of r or of ab x4^2,
        # so one x4 per valuation is enough
        if e:
            return units(0) if vab - 2 * e == vr else (1,)
        js = itertools.takewhile(lambda j: p**j < max_u, itertools.count())
        return itertools.chain.from_iterable(units(j) if vab + 2 * j == vr else (p**j,) for j in js)

    seen: dict = {}
    for e in range(max_e + 1):
        for u in candidates(e):
            x4 = Fraction(u, p**e)
            c = r + a * b * x4 * x4
            if c == 0:
                continue
            key = None
            if p != 2:
                vc = padic_valuation(c, p)
                key = (vc % 2, legendre(reduce_mod_p(c / Fraction(p) ** vc, p), p))
                if key in seen:
                    continue
            ok = _locally_solvable_at(a, b, c, (place,))
            if key is not None:
                seen[key] = ok
            if not ok:
                continue
            # c' - c = ab (2 x4 d + d^2) for x4' = x4 + d
            need = padic_valuation(c, p) + extra - vab
            K = max(need - padic_valuation(x4, p), -(-need // 2))
            return e, u, K
    return None


def _normalize(x: Fraction) -> tuple[int, Fraction]:
    """x = s * f^2 with s a squarefree integer and f rational."""
    sq, f = squarefree_part(x.numerator * x.denominator)
    return sq, Fraction(f, x.denominator)


def _x4_candidates(a: int, b: int, r: Fraction, classes: dict, definite: bool, small: int = 2_000):
    """x4 values to try.

    Indefinite forms: first the small values m/D, m < ``small``, with
    D = prod p^e_p; then X/D with X running through the CRT progression that
    puts x4 in every local class at once.  A definite form bounds
    x4, so there the denominators D*k, k = 1, 2, ... are swept through the
    interval instead.
    """
    D = 1
    for p, (e, _, _) in classes.items():
        D *= p**e
    if not definite:
        yield from (Fraction(m, D) for m in range(small))
        congruences = []
        for p, (e, u, K) in classes.items():
            k = K + e
            if k > 0:
                congruences.append((u * (D // p**e), p**k))
        X0, M = crt(congruences)
        yield from (Fraction(X0 + M * t, D) for t in itertools.count())
        return
    bound = -r / (a * b)  # x4^2 <= bound, since a x2^2 + b x3^2 <= 0
    yield Fraction(0)
    for k in itertools.count(1):
        den = D * k
        m = 1
        while Fraction(m * m, den * den) <= bound:
            if math.gcd(m, k) == 1:
                yield Fraction(m, den)
            m += 1


def _splits_quickly(c: Fraction, rho_iterations: int = 1_000) -> bool:
    try:
        factorize(c.numerator, rho_iterations=rho_iterations)
        factorize(c.denominator, rho_iterations=rho_iterations)
    except BudgetExceeded:
        return False
    return True


def _checked(params: QuatParams, e: QuatElem) -> QuatElem:
    if reduced_norm(e, params) != 1:  # pragma: no cover
        raise AssertionError("norm-trace solution failed substitution check")
    return e


def solve_norm_trace(
    params: QuatParams, s, *, slice_budget: int = 20_000, full_checks: int = 2_000,
    quick_checks: int = 64, hard_slices: int = 6
) -> QuatElem:
    """Element with reduced trace s and reduced norm 1.

    Needs a x2^2 + b x3^2 - ab x4^2 = s^2/4 - 1.  The parameters are first
    scaled to squarefree integers, and the slices x2 = 0 and x3 = 0 are
    tried as plain conics.  Otherwise, for every prime p of 2ab(s^2/4 - 1) a
    p-adic class of x4 is found on which the slice a x2^2 + b x3^2 = c is
    solvable at p; x4 then runs through the CRT combination of those classes
    (a bounded interval when the algebra is definite).  Slices are screened
    by Hilbert symbols before the full local check and the conic solver,
    and the first ``quick_checks`` checks skip slices whose c does not
    factor cheaply.  After ``hard_slices`` slices whose conic could not be factored the search
    gives up with SearchBudgetExceeded.
    """
    s = as_rational(s)
    x1 = s / 2
    r = x1 * x1 - 1
    if r == 0:
        return QuatElem(x1)
    delta = ramified_primes(params)
    for p in delta.finite_primes:
        if not in_S_local_params(params, s, p, delta):
            raise NotInTraceSet(f"{s} is not a reduced trace of norm 1 over Q_{p}")
    if delta.infinite_ramified and not (-2 <= s <= 2):
        raise NotInTraceSet(f"{s} is not a reduced trace of norm 1 over R")
    a0, fa = _normalize(params.a)
    b0, fb = _normalize(params.b)
    bad = candidate_primes(a0, b0, r)
    screen = [INF] + [Place(p) for p in bad]
    classes = {}
    for p in bad:
        cls = _local_class(a0, b0, r, p)
        if cls is None:
            raise SearchBudgetExceeded(f"no x4 class makes the slice solvable at {p} for s={s}")
        classes[p] = cls
    # x2 = 0 or x3 = 0 leaves a conic with right-hand side r itself
    for coeff, put in ((b0, lambda u, v: (0, u, v)), (a0, lambda u, v: (u, 0, v))):
        try:
            if conic_obstruction(coeff, -a0 * b0, r, known=bad) is not None:
                continue
            x2, x3, x4 = put(*solve_conic(coeff, -a0 * b0, r, known=bad))
        except BudgetExceeded:
            continue
        return _checked(params, QuatElem(x1, x2 / fa, x3 / fb, x4 / (fa * fb)))
    checks = 0
    for x4 in itertools.islice(_x4_candidates(a0, b0, r, classes, delta.infinite_ramified), slice_budget):
        c = r + a0 * b0 * x4 * x4
        if c == 0:
            return _checked(params, QuatElem(x1, 0, 0, x4 / (fa * fb)))
        if not _locally_solvable_at(a0, b0, c, screen):
            continue
        checks += 1
        if checks > full_checks:
            break
        if checks <= quick_checks and not _splits_quickly(c):
            # prefer slices whose c factors cheaply
            continue
        try:
            if conic_obstruction(a0, b0, c, known=bad) is not None:
                continue
            x2, x3 = solve_conic(a0, b0, c, known=bad)
        except BudgetExceeded:
            # c too hard to factor; try another slice, but not forever
            hard_slices -= 1
            if hard_slices <= 0:
                break
            continue
        return _checked(params, QuatElem(x1, x2 / fa, x3 / fb, x4 / (fa * fb)))
    raise SearchBudgetExceeded(f"no locally solvable x4 slice found for s={s} in H_{{{params.a},{params.b}}}")
