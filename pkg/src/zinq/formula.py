"""The two universal-existential formulas defining Z in Q.

T1 has 17 existential variables::

    (a + sum a_i^2)(b + sum b_i^2) * [ (N(x) - 1)^2 + (N(y) - 1)^2
        + n^2 (n-1)^2 ... (n-2309)^2 + (2 x1 + 2 y1 + n - t)^2 ] = 0

with N the reduced norm of H_{a,b}.  T2 substitutes A = a^2 + b^2 + 1 and
B = a^2 + a + 1 + b^2 for the quaternion parameters, eliminates y1 and folds
n into a product over 0..2309::

    [x1^2 - A x2^2 - B x3^2 + AB x4^2 - 1]^2
      + prod_n [ (n - t - 2 x1)^2 - 4A y2^2 - 4B y3^2 + 4AB y4^2 - 4 ]^2 = 0

Witnesses make the polynomial vanish; refutations exhibit (a, b) whose
algebra ramifies at a prime in the denominator of t.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import IsInteger, NotInteger, PreconditionViolation, SearchExhausted
from .exact_arith import as_rational, factorize, four_squares, is_prime, padic_valuation
from .finite_field import count_quartic_curve, find_nonresidue
from .quaternion import QuatElem, QuatParams, hilbert_symbol, solve_norm_trace
from .trace_sets import N, decompose_T

ZERO = Fraction(0)
_ZERO4 = (ZERO, ZERO, ZERO, ZERO)


@dataclass(frozen=True)
class WitnessT1:
    a: Fraction
    b: Fraction
    a_sq: tuple[Fraction, ...]  # a1..a4
    b_sq: tuple[Fraction, ...]  # b1..b4
    x: QuatElem
    y: QuatElem
    n: int


@dataclass(frozen=True)
class WitnessT2:
    a: Fraction
    b: Fraction
    x: QuatElem
    y: tuple[Fraction, Fraction, Fraction]  # y2, y3, y4
    n: int


Witness = Union[WitnessT1, WitnessT2]


@dataclass(frozen=True)
class RefutationCert:
    formula_id: str
    p: int
    a: Fraction
    b: Fraction
    valuation: int
    curve_point: tuple[int, int] | None = None


@dataclass(frozen=True)
class Verdict:
    t: Fraction
    is_integer: bool
    witnesses: tuple = ()
    refutation: RefutationCert | None = None
    seed: int | None = None
    sample_count: int | None = None


def t2_params(a, b) -> tuple[Fraction, Fraction]:
    a, b = as_rational(a), as_rational(b)
    return a * a + b * b + 1, a * a + a + 1 + b * b


def _is_int_in_range(n) -> bool:
    n = as_rational(n)
    return n.denominator == 1 and 0 <= n < N


# -- evaluation ---------------------------------------------------------------

def t1_value_is_zero(t, a, b, a_sq, b_sq, x: QuatElem, y: QuatElem, n) -> bool:
    """Exact zero test of the T1 polynomial.

    A product vanishes iff a factor does, and a sum of rational squares
    vanishes iff every square does; the product over n is zero iff n is an
    integer in [0, 2309], so it is never expanded.
    """
    t, a, b = as_rational(t), as_rational(a), as_rational(b)
    if a + sum(v * v for v in a_sq) == 0:
        return True
    if b + sum(v * v for v in b_sq) == 0:
        return True
    norm_x = x.x1**2 - a * x.x2**2 - b * x.x3**2 + a * b * x.x4**2
    norm_y = y.x1**2 - a * y.x2**2 - b * y.x3**2 + a * b * y.x4**2
    return (
        norm_x == 1
        and norm_y == 1
        and _is_int_in_range(n)
        and 2 * x.x1 + 2 * y.x1 + as_rational(n) - t == 0
    )


def eval_T1(t, a, b, w: WitnessT1) -> bool:
    return t1_value_is_zero(t, a, b, w.a_sq, w.b_sq, w.x, w.y, w.n)


def t2_factor(t, a, b, x1, y, n) -> Fraction:
    """The n-th bracket of the T2 product."""
    A, B = t2_params(a, b)
    y2, y3, y4 = y
    return (
        (n - as_rational(t) - 2 * x1) ** 2
        - 4 * A * y2 * y2
        - 4 * B * y3 * y3
        + 4 * A * B * y4 * y4
        - 4
    )


def eval_T2(t, a, b, w: WitnessT2) -> bool:
    """First bracket must vanish, then the declared factor index n."""
    A, B = t2_params(a, b)
    x = w.x
    first = x.x1**2 - A * x.x2**2 - B * x.x3**2 + A * B * x.x4**2 - 1
    if first != 0:
        return False
    if not _is_int_in_range(w.n):
        return False
    return t2_factor(t, a, b, x.x1, w.y, int(w.n)) == 0


# -- provers --------------------------------------------------------------------

def _require_integer(t) -> Fraction:
    t = as_rational(t)
    if t.denominator != 1:
        raise NotInteger(f"{t} is not an integer")
    return t


def prove_T1(t, a, b) -> WitnessT1:
    t, a, b = _require_integer(t), as_rational(a), as_rational(b)
    zero_x = QuatElem(ZERO)
    if a <= 0:
        return WitnessT1(a, b, four_squares(-a), _ZERO4, zero_x, zero_x, 0)
    if b <= 0:
        return WitnessT1(a, b, _ZERO4, four_squares(-b), zero_x, zero_x, 0)
    params = QuatParams(a, b)
    dec = decompose_T(params, t)
    x = solve_norm_trace(params, dec.s)
    y = solve_norm_trace(params, dec.s_prime)
    w = WitnessT1(a, b, _ZERO4, _ZERO4, x, y, dec.n)
    assert eval_T1(t, a, b, w)
    return w


def prove_T2(t, a, b) -> WitnessT2:
    t, a, b = _require_integer(t), as_rational(a), as_rational(b)
    A, B = t2_params(a, b)
    params = QuatParams(A, B)
    dec = decompose_T(params, t)
    # the display reads (n - t - 2 x1), so x carries trace -s (S is symmetric)
    x = solve_norm_trace(params, -dec.s)
    z = solve_norm_trace(params, dec.s_prime)
    w = WitnessT2(a, b, x, (z.x2, z.x3, z.x4), dec.n)
    assert eval_T2(t, a, b, w)
    return w


def prove(formula_id: str, t, a, b) -> Witness:
    return {"T1": prove_T1, "T2": prove_T2}[_fid(formula_id)](t, a, b)


def eval_witness(t, w: Witness) -> bool:
    if isinstance(w, WitnessT1):
        return eval_T1(t, w.a, w.b, w)
    return eval_T2(t, w.a, w.b, w)


# -- refuters -------------------------------------------------------------------

def _fid(formula_id: str) -> str:
    fid = formula_id.upper()
    if fid not in ("T1", "T2"):
        raise ValueError(f"unknown formula id {formula_id!r}")
    return fid


def intersection_recipe(p: int) -> tuple[Fraction, Fraction]:
    """(a, b) with a, b > 0 and p ramified in H_{a,b}."""
    if p == 2:
        return Fraction(7), Fraction(7)
    return Fraction(p), Fraction(find_nonresidue(p))


def some_ts_recipe(p: int) -> tuple[Fraction, Fraction, tuple[int, int] | None]:
    """(a, b, curve point) with p ramified in H_{a^2+b^2+1, a^2+a+1+b^2}.

    For p >= 11 the point (x0, y0) on c^2 x^4 + y^2 + 1 = 0 gives
    a = c x0^2, b = y0; x0 is bumped by p when a^2 + b^2 + 1 = 0 (mod p^2).
    """
    if p in (2, 3):
        return Fraction(-1), Fraction(1), None
    if p in (5, 7):
        return Fraction(2), Fraction(0), None
    c = find_nonresidue(p)
    for x0, y0 in count_quartic_curve(p, c):
        for x in (x0, x0 + p):
            a, b = c * x * x, y0
            if (a * a + b * b + 1) % (p * p) == 0:
                continue
            A, B = t2_params(a, b)
            if hilbert_symbol(A, B, p) == -1:
                return Fraction(a), Fraction(b), (x, y0)
    raise SearchExhausted(f"no point on the quartic curve gave ramification at {p}")


def _denominator_prime(t: Fraction) -> int:
    return factorize(t.denominator).factors[0][0]


def refute(t, formula_id: str = "T1") -> RefutationCert:
    t = as_rational(t)
    fid = _fid(formula_id)
    if t.denominator == 1:
        raise IsInteger(f"{t} is an integer; nothing to refute")
    p = _denominator_prime(t)
    point = None
    if fid == "T1":
        a, b = intersection_recipe(p)
    else:
        a, b, point = some_ts_recipe(p)
    cert = RefutationCert(fid, p, a, b, padic_valuation(t, p), point)
    if not check_refutation(cert, t):  # pragma: no cover
        raise AssertionError(f"refutation for {t} failed its own check")
    return cert


def check_refutation(cert: RefutationCert, t) -> bool:
    """Recompute everything from (formula, p, a, b) and t."""
    t = as_rational(t)
    try:
        fid = _fid(cert.formula_id)
        p = int(cert.p)
    except (ValueError, TypeError):
        return False
    if p < 2 or not is_prime(p):
        return False
    v = padic_valuation(t, p)
    if not v < 0 or v != cert.valuation:
        return False
    a, b = as_rational(cert.a), as_rational(cert.b)
    if fid == "T1":
        if not (a > 0 and b > 0):
            return False
        return hilbert_symbol(a, b, p) == -1
    A, B = t2_params(a, b)
    return hilbert_symbol(A, B, p) == -1


# -- classifier ------------------------------------------------------------------

def adversarial_pairs_t1() -> list[tuple[Fraction, Fraction]]:
    pairs = [(Fraction(7), Fraction(7))]
    pairs += [intersection_recipe(p) for p in range(3, 24) if is_prime(p)]
    return pairs


T2_FIXED_PAIRS = ((Fraction(0), Fraction(0)), (Fraction(-1), Fraction(1)), (Fraction(2), Fraction(0)))


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-30, 30), rng.randint(1, 12))


def sample_pairs(seed: int, count: int) -> list[tuple[Fraction, Fraction]]:
    rng = random.Random(seed)
    return [(_random_rational(rng), _random_rational(rng)) for _ in range(count)]


def classify(t, sample_count: int = 4, seed: int = 0) -> Verdict:
    """Integer verdicts carry verified witnesses; others a checked refutation."""
    t = as_rational(t)
    if sample_count < 0:
        raise PreconditionViolation("sample_count must be >= 0")
    if t.denominator != 1:
        return Verdict(t, False, refutation=refute(t, "T1"), seed=seed, sample_count=sample_count)
    witnesses = []
    pairs1 = sample_pairs(seed, sample_count) + adversarial_pairs_t1()
    for a, b in pairs1:
        witnesses.append(prove_T1(t, a, b))
    pairs2 = list(T2_FIXED_PAIRS) + sample_pairs(seed + 1, sample_count)
    for a, b in pairs2:
        witnesses.append(prove_T2(t, a, b))
    if not all(eval_witness(t, w) for w in witnesses):  # pragma: no cover
        raise AssertionError("a freshly built witness failed to verify")
    return Verdict(t, True, witnesses=tuple(witnesses), seed=seed, sample_count=sample_count)
