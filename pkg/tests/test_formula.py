import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zinq.errors import IsInteger, NotInteger
from zinq.exact_arith import padic_valuation
from zinq.formula import (
    RefutationCert,
    WitnessT1,
    WitnessT2,
    check_refutation,
    classify,
    eval_T1,
    eval_T2,
    eval_witness,
    prove,
    prove_T1,
    prove_T2,
    refute,
    sample_pairs,
    t2_params,
)
from zinq.quaternion import QuatElem, QuatParams, hilbert_symbol, reduced_norm
from zinq.trace_sets import decompose_T, in_T

Z4 = (Fraction(0),) * 4
ZERO = QuatElem(0)
non_integers = st.builds(Fraction, st.integers(-10**4, 10**4), st.integers(2, 10**4)).filter(
    lambda x: x.denominator != 1
)


# -- evaluation -----------------------------------------------------------------------------

def test_eval_T1_examples():
    w = WitnessT1(Fraction(-1), Fraction(1), (1, 0, 0, 0), Z4, ZERO, ZERO, 0)
    assert eval_T1(0, -1, 1, w)
    w = WitnessT1(Fraction(1), Fraction(1), Z4, Z4, ZERO, ZERO, 0)
    assert not eval_T1(0, 1, 1, w)


def test_eval_T1_checks_every_condition():
    x, y = QuatElem(1), QuatElem(-1)
    good = WitnessT1(Fraction(1), Fraction(1), Z4, Z4, x, y, 0)
    assert eval_T1(0, 1, 1, good)
    assert not eval_T1(1, 1, 1, good)  # trace sum
    assert not eval_T1(0, 1, 1, WitnessT1(Fraction(1), Fraction(1), Z4, Z4, QuatElem(2), y, 0))  # norm
    assert not eval_T1(2310, 1, 1, WitnessT1(Fraction(1), Fraction(1), Z4, Z4, x, y, 2310))  # n range
    assert not eval_T1(Fraction(1, 2), 1, 1, WitnessT1(Fraction(1), Fraction(1), Z4, Z4, x, y, Fraction(1, 2)))


def test_eval_T2_examples():
    w = WitnessT2(Fraction(0), Fraction(0), QuatElem(1), (Fraction(0),) * 3, 0)
    assert not eval_T2(2, 0, 0, w)
    assert t2_params(1, 1) == (3, 4)


def test_eval_T2_sign_convention():
    # the factor reads (n - t - 2 x1), so x carries trace -s
    a, b = 2, 3
    w = prove_T2(11, a, b)
    d = decompose_T(QuatParams(*t2_params(a, b)), 11)
    assert 2 * w.x.x1 == -d.s and w.n == d.n
    assert eval_T2(11, a, b, w)
    flipped = WitnessT2(w.a, w.b, QuatElem(-w.x.x1, w.x.x2, w.x.x3, w.x.x4), w.y, w.n)
    assert d.s == 0 or not eval_T2(11, a, b, flipped)


# -- provers ---------------------------------------------------------------------------------

def test_prove_T1_example_round_trip():
    w = prove_T1(5, 7, 7)
    d = decompose_T(QuatParams(7, 7), 5)
    assert w.n == d.n
    assert 2 * w.x.x1 == d.s and 2 * w.y.x1 == d.s_prime
    assert eval_T1(5, 7, 7, w)


def test_prove_T1_zero_factor():
    w = prove_T1(0, -1, 1)
    assert w.a_sq == (1, 0, 0, 0)
    assert eval_T1(0, -1, 1, w)
    w = prove_T1(3, 4, Fraction(-7, 3))
    assert sum(v * v for v in w.b_sq) == Fraction(7, 3)
    assert eval_T1(3, 4, Fraction(-7, 3), w)


def test_prove_T1_split_algebra():
    w = prove_T1(0, 1, 1)
    assert w.n == 0
    assert eval_T1(0, 1, 1, w)


def test_prove_T2_examples():
    w = prove_T2(0, 0, 0)
    assert eval_T2(0, 0, 0, w)
    w = prove_T2(7, 1, 1)
    assert eval_T2(7, 1, 1, w)
    A, B = t2_params(1, 1)
    assert reduced_norm(w.x, QuatParams(A, B)) == 1
    with pytest.raises(NotInteger):
        prove_T2(Fraction(1, 2), 0, 0)
    with pytest.raises(NotInteger):
        prove_T1(Fraction(1, 2), 7, 7)


def test_prove_dispatch():
    assert isinstance(prove("t1", 4, 7, 7), WitnessT1)
    assert isinstance(prove("T2", 4, 7, 7), WitnessT2)
    with pytest.raises(ValueError):
        prove("T3", 4, 7, 7)


@pytest.mark.slow
def test_soundness_round_trip_seeded():
    rng = random.Random(1234)
    ts = [rng.randint(-10**4, 10**4) for _ in range(200)]
    for i, t in enumerate(ts):
        for a, b in sample_pairs(10_000 + i, 20):
            assert eval_T1(t, a, b, prove_T1(t, a, b)), (t, a, b)
            assert eval_T2(t, a, b, prove_T2(t, a, b)), (t, a, b)


desk_params = st.builds(Fraction, st.integers(-10**4, 10**4), st.integers(1, 50))


@settings(max_examples=40, deadline=None)
@given(st.integers(-10**6, 10**6), desk_params, desk_params)
def test_prover_round_trip_property(t, a, b):
    if a != 0 and b != 0:
        assert eval_T1(t, a, b, prove_T1(t, a, b))
    assert eval_T2(t, a, b, prove_T2(t, a, b))


# -- refuters ---------------------------------------------------------------------------------

@pytest.mark.parametrize(
    "t, fid, p, a, b",
    [
        (Fraction(1, 2), "T1", 2, 7, 7),
        (Fraction(1, 3), "T1", 3, 3, 2),
        (Fraction(1, 5), "T2", 5, 2, 0),
        (Fraction(1, 2), "T2", 2, -1, 1),
        (Fraction(1, 11), "T2", 11, 8, 1),
        (Fraction(5, 221), "T2", 13, 8, 0),
    ],
)
def test_refute_examples(t, fid, p, a, b):
    c = refute(t, fid)
    assert (c.p, c.a, c.b) == (p, a, b)
    assert c.valuation == padic_valuation(t, p)
    assert check_refutation(c, t)


def test_refute_curve_point_recorded():
    c = refute(Fraction(1, 11), "T2")
    assert c.curve_point == (2, 1)
    x0, y0 = c.curve_point
    assert (2 * 2 * x0**4 + y0 * y0 + 1) % 11 == 0


def test_refute_integer():
    with pytest.raises(IsInteger):
        refute(4)


def test_check_refutation_examples():
    assert check_refutation(refute(Fraction(1, 2), "T1"), Fraction(1, 2))
    assert not check_refutation(RefutationCert("T1", 2, Fraction(7), Fraction(7), 0), 3)
    assert not check_refutation(RefutationCert("T1", 2, Fraction(1), Fraction(1), -1), Fraction(1, 2))


def test_check_refutation_rejects_tampering():
    t = Fraction(4, 9)
    c = refute(t)
    assert check_refutation(c, t)
    assert not check_refutation(RefutationCert("T1", c.p, c.a, c.b, c.valuation + 1), t)
    assert not check_refutation(RefutationCert("T1", 5, c.a, c.b, c.valuation), t)
    assert not check_refutation(RefutationCert("T1", 4, c.a, c.b, c.valuation), t)
    assert not check_refutation(RefutationCert("T1", c.p, -c.a, c.b, c.valuation), t)
    assert not check_refutation(RefutationCert("T7", c.p, c.a, c.b, c.valuation), t)


def test_refuter_completeness_seeded():
    rng = random.Random(99)
    done = 0
    while done < 200:
        t = Fraction(rng.randint(-10**4, 10**4), rng.randint(1, 10**4))
        if t.denominator == 1:
            continue
        for fid in ("T1", "T2"):
            c = refute(t, fid)
            assert check_refutation(c, t)
            assert padic_valuation(t, c.p) < 0
        done += 1


@settings(max_examples=200)
@given(non_integers)
def test_refutation_pairs_leave_t_outside_T(t):
    c = refute(t, "T1")
    assert hilbert_symbol(c.a, c.b, c.p) == -1
    assert not in_T(QuatParams(c.a, c.b), t)
    c = refute(t, "T2")
    assert not in_T(QuatParams(*t2_params(c.a, c.b)), t)


# -- cross-oracle consistency -------------------------------------------------------------------

def _random_witness_t1(rng, a, b):
    r = lambda: Fraction(rng.randint(-9, 9), rng.randint(1, 4))  # noqa: E731
    return WitnessT1(a, b, Z4, Z4, QuatElem(r(), r(), r(), r()), QuatElem(r(), r(), r(), r()), rng.randint(0, 2309))


def test_no_witness_for_non_members():
    rng = random.Random(5)
    a, b = Fraction(7), Fraction(7)
    for _ in range(200):
        t = Fraction(2 * rng.randint(-100, 100) + 1, 2 * (2 * rng.randint(1, 20) - 1))  # v_2(t) = -1
        assert not in_T(QuatParams(a, b), t)
        for _ in range(20):
            assert not eval_T1(t, a, b, _random_witness_t1(rng, a, b))
        # a genuine witness for a nearby integer must not transfer either
        w = prove_T1(int(t), a, b)
        assert not eval_T1(t, a, b, w)


@settings(max_examples=100, deadline=None)
@given(st.integers(-500, 500), st.integers(1, 60), st.integers(1, 60))
def test_true_witness_implies_membership(t, a, b):
    w = prove_T1(t, a, b)
    if eval_T1(t, a, b, w):
        assert in_T(QuatParams(a, b), t)


# -- classifier ------------------------------------------------------------------------------------

def test_classify_examples():
    v = classify(5)
    assert v.is_integer and v.witnesses
    assert all(eval_witness(5, w) for w in v.witnesses)
    v = classify(Fraction(1, 2))
    assert not v.is_integer
    assert (v.refutation.p, v.refutation.a, v.refutation.b) == (2, 7, 7)


def test_classify_negative_denominator_examples():
    # -2310/7 = -330 is an integer
    assert classify(Fraction(-2310, 7)).is_integer
    v = classify(Fraction(-2311, 7))
    assert (v.refutation.p, v.refutation.a, v.refutation.b) == (7, 7, 3)


def test_classify_deterministic():
    assert classify(17, seed=42) == classify(17, seed=42)
    assert classify(Fraction(3, 10), seed=1) == classify(Fraction(3, 10), seed=1)


def test_classify_witness_counts():
    v = classify(-9, sample_count=4)
    fids = [type(w).__name__ for w in v.witnesses]
    assert fids.count("WitnessT1") == 4 + 9
    assert fids.count("WitnessT2") == 3 + 4


@settings(max_examples=30, deadline=None)
@given(st.fractions(max_denominator=500).filter(lambda x: abs(x) <= 10**4))
def test_classify_integer_iff_denominator_one(t):
    v = classify(t, sample_count=1)
    assert v.is_integer == (t.denominator == 1)
    if v.is_integer:
        assert all(eval_witness(t, w) for w in v.witnesses)
    else:
        assert check_refutation(v.refutation, t)
