"""Membership in S_{a,b}, T_{a,b} and the decomposition t = s + s' + n."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInT, PreconditionViolation, SearchExhausted
from .exact_arith import as_rational, crt, is_prime, legendre, padic_valuation, reduce_mod_p
from .finite_field import _uq_indices, find_nonresidue, fq_context, uq_sumset
from .quaternion import QuatParams, in_S_local_params, ramified_primes

N = 2 * 3 * 5 * 7 * 11  # 2310
SMALL_PRIMES = (2, 3, 5, 7, 11)

_TABLE_LIMIT = 4096
_CRT_ENUM_LIMIT = 200_000


@dataclass(frozen=True)
class TraceDecomposition:
    s: Fraction
    s_prime: Fraction
    n: int

    @property
    def total(self) -> Fraction:
        return self.s + self.s_prime + self.n


@dataclass(frozen=True)
class ZpGeneratorPair:
    first: QuatParams
    second: QuatParams
    p: int


def _params(params) -> QuatParams:
    return params if isinstance(params, QuatParams) else QuatParams(*params)


def _require_positive(params: QuatParams):
    if params.a <= 0 and params.b <= 0:
        raise PreconditionViolation("need a > 0 or b > 0")


def in_S_local(params, s, p: int) -> bool:
    params = _params(params)
    return in_S_local_params(params, as_rational(s), p, ramified_primes(params))


def in_S_global(params, s) -> bool:
    params = _params(params)
    _require_positive(params)
    s = as_rational(s)
    delta = ramified_primes(params)
    return all(in_S_local_params(params, s, p, delta) for p in delta.finite_primes)


def in_T(params, t) -> bool:
    params = _params(params)
    _require_positive(params)
    t = as_rational(t)
    return all(padic_valuation(t, p) >= 0 for p in ramified_primes(params).finite_primes)


def in_Up(s: int, p: int) -> bool:
    """Is x^2 - s x + 1 irreducible over F_p?"""
    if p <= _TABLE_LIMIT:
        return s % p in _uq_indices(fq_context(p))
    return legendre(s * s - 4, p) == -1


def _sumset_contains(r: int, p: int) -> bool:
    return r % p in uq_sumset(fq_context(p))


def _smallest_s(residues: dict[int, int]) -> int:
    """Smallest s >= 0 with s and r_p - s in U_p for every p, r_p = residues[p]."""
    primes = sorted(residues)

    def fits(u, p):
        return in_Up(u, p) and in_Up(residues[p] - u, p)

    if primes[-1] <= _TABLE_LIMIT:
        allowed = {p: [u for u in range(p) if fits(u, p)] for p in primes}
        for p in primes:
            if not allowed[p]:  # pragma: no cover - excluded by the U_q lemma
                raise AssertionError(f"r = {residues[p]} not in U_{p} + U_{p}")
        size = 1
        for res in allowed.values():
            size *= len(res)
        if size <= _CRT_ENUM_LIMIT:
            return min(
                crt(zip(combo, primes))[0]
                for combo in itertools.product(*(allowed[p] for p in primes))
            )
    # each residue class fits with probability about 1/4, so this ends quickly
    s = 0
    while not all(fits(s, p) for p in primes):
        s += 1
    return s


def decompose_T(params, t) -> TraceDecomposition:
    """Write t = s + s' + n with s, s' in S_{a,b} and 0 <= n < 2310.

    n is the smallest value making red_p(t - n) land in U_p + U_p for the
    ramified primes p <= 11; s is the smallest nonnegative integer with
    red_p(s), red_p(t - n - s) in U_p at every ramified p.
    """
    params = _params(params)
    t = as_rational(t)
    if not in_T(params, t):
        raise NotInT(f"{t} is not integral at every prime ramified in H_{{{params.a},{params.b}}}")
    delta = ramified_primes(params).finite_primes
    if not delta:
        return TraceDecomposition(t, Fraction(0), 0)
    small = [p for p in delta if p in SMALL_PRIMES]
    n = next(
        n for n in range(N) if all(_sumset_contains(reduce_mod_p(t - n, p), p) for p in small)
    )
    s = Fraction(_smallest_s({p: reduce_mod_p(t - n, p) for p in delta}))
    out = TraceDecomposition(s, t - n - s, n)
    assert out.total == t
    return out


def zp_generators(p: int, *, scan_limit: int = 10**6) -> ZpGeneratorPair:
    """Two algebras with positive parameters whose ramification meets in {p}."""
    if not is_prime(p):
        raise PreconditionViolation(f"{p} is not prime")
    first = QuatParams(7, 7) if p == 2 else QuatParams(p, find_nonresidue(p))
    d1 = set(ramified_primes(first).finite_primes)
    if p == 2:
        # (q, q) ramifies exactly at {2, q} for q = 3 mod 4
        candidates = (QuatParams(q, q) for q in range(3, scan_limit, 4) if is_prime(q))
    else:
        # b' = 1 mod 8 is a 2-adic square, so 2 never ramifies in (p, b')
        candidates = (
            QuatParams(p, b) for b in range(9, scan_limit, 8) if legendre(b, p) == -1
        )
    for second in candidates:
        if d1 & set(ramified_primes(second).finite_primes) == {p}:
            return ZpGeneratorPair(first, second, p)
    raise SearchExhausted(f"no generator pair for Z_({p}) below {scan_limit}")
