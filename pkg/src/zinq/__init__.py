"""Deciding integrality of rationals through quaternion-algebra trace sets."""

from .exact_arith import INF, Place, factorize, four_squares, padic_valuation, parse_rational
from .formula import classify, eval_T1, eval_T2, prove_T1, prove_T2, refute, check_refutation
from .quaternion import QuatElem, QuatParams, hilbert_symbol, ramified_primes, solve_conic, solve_norm_trace
from .trace_sets import decompose_T, in_S_global, in_S_local, in_T, zp_generators

__version__ = "0.1.0"
