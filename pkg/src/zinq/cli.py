"""Command-line front end.

Exit status: 0 affirmative / verified, 1 negative / refuted / check failed,
2 usage or budget error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import certificates as certs
from .errors import BoundExceeded, BudgetExceeded, IsInteger, NotInT, NotInteger, PreconditionViolation, ZinqError
from .exact_arith import INF, Place, format_rational, is_prime, parse_rational
from .formula import classify, prove, refute
from .quaternion import QuatParams, hilbert_symbol, ramified_primes
from .trace_sets import decompose_T, in_T, zp_generators
from . import verify

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2

# "-3/7" should parse as a positional, not an option
_NEGATIVE = re.compile(r"^-\d+(/\d+)?$")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = _NEGATIVE

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def nonzero_rational(text: str):
    x = rational(text)
    if x == 0:
        raise argparse.ArgumentTypeError("argument must be nonzero")
    return x


def place(text: str) -> Place:
    if text.lower() in ("inf", "infinity", "oo"):
        return INF
    if not text.isdigit() or not is_prime(int(text)):
        raise argparse.ArgumentTypeError(f"{text!r} is neither a prime nor 'inf'")
    return Place(int(text))


def prime(text: str) -> int:
    if not text.isdigit() or not is_prime(int(text)):
        raise argparse.ArgumentTypeError(f"{text!r} is not a prime")
    return int(text)


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)


# -- commands -------------------------------------------------------------------

def cmd_hilbert(args):
    print(hilbert_symbol(args.a, args.b, args.place))
    return EXIT_OK


def cmd_ramified(args):
    delta = ramified_primes(QuatParams(args.a, args.b))
    print("Delta = {" + ", ".join(map(str, delta.finite_primes)) + "}")
    print(f"infinite place ramified: {'yes' if delta.infinite_ramified else 'no'}")
    return EXIT_OK


def cmd_in_t(args):
    ok = in_T(QuatParams(args.a, args.b), args.t)
    print("true" if ok else "false")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_decompose(args):
    try:
        d = decompose_T(QuatParams(args.a, args.b), args.t)
    except NotInT as exc:
        print(f"NOT IN T: {exc}")
        return EXIT_NEGATIVE
    print(f"s={format_rational(d.s)} s'={format_rational(d.s_prime)} n={d.n}")
    return EXIT_OK


def cmd_classify(args):
    v = classify(args.t, sample_count=args.samples, seed=args.seed)
    cert = certs.verdict_certificate(v)
    _write(certs.dumps(cert), args.out)
    if v.is_integer:
        print(f"INTEGER ({len(v.witnesses)} witnesses verified)")
        return EXIT_OK
    r = v.refutation
    print(f"NONINTEGER p={r.p} (a,b)=({format_rational(r.a)},{format_rational(r.b)})")
    return EXIT_NEGATIVE


def cmd_prove(args):
    try:
        w = prove(args.formula, args.t, args.a, args.b)
    except NotInteger as exc:
        print(f"NOT AN INTEGER: {exc}")
        return EXIT_NEGATIVE
    text = certs.dumps(certs.witness_certificate(args.t, w))
    _write(text, args.out)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_refute(args):
    try:
        c = refute(args.t, args.formula)
    except IsInteger as exc:
        print(f"INTEGER: {exc}")
        return EXIT_NEGATIVE
    text = certs.dumps(certs.refutation_certificate(args.t, c))
    _write(text, args.out)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args):
    try:
        with open(args.cert) as fh:
            cert = json.load(fh)
    except OSError as exc:
        print(f"cannot read certificate: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        print(f"malformed JSON: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        ok = certs.check_certificate(cert, args.t)
    except certs.CertificateError as exc:
        print(f"INVALID: {exc}")
        return EXIT_NEGATIVE
    print("VALID" if ok else "INVALID")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_zp_gen(args):
    g = zp_generators(args.p)
    for label, params in (("first", g.first), ("second", g.second)):
        delta = ramified_primes(params).finite_primes
        print(
            f"{label}: (a,b)=({format_rational(params.a)},{format_rational(params.b)}) "
            "Delta={" + ", ".join(map(str, delta)) + "}"
        )
    return EXIT_OK


def cmd_verify_lemmas(args):
    if args.max_q > verify.FIELD_BOUND:
        raise BoundExceeded(f"--max-q {args.max_q} exceeds {verify.FIELD_BOUND}")
    reports = verify.run_all(max_q=args.max_q, max_p=args.max_p, seed=args.seed)
    print("lemma\tstatus\tinstances\tfailures")
    for r in reports:
        print(f"{r.lemma_id}\t{'PASS' if r.passed else 'FAIL'}\t{len(r.instances)}\t{len(r.counterexamples)}")
    _write(verify.reports_json(reports, args.timing), args.json)
    if args.figures:
        from .plotting import render_figures

        for path in render_figures(reports, args.figures):
            print(f"figure\t{path}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zinq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("hilbert", help="Hilbert symbol (a,b)_v")
    p.add_argument("a", type=nonzero_rational)
    p.add_argument("b", type=nonzero_rational)
    p.add_argument("place", type=place, help="a prime or 'inf'")
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("ramified", help="primes ramified in H_{a,b}")
    p.add_argument("a", type=nonzero_rational)
    p.add_argument("b", type=nonzero_rational)
    p.set_defaults(func=cmd_ramified)

    p = sub.add_parser("in-t", help="is t in T_{a,b}?")
    p.add_argument("a", type=nonzero_rational)
    p.add_argument("b", type=nonzero_rational)
    p.add_argument("t", type=rational)
    p.set_defaults(func=cmd_in_t)

    p = sub.add_parser("decompose", help="write t = s + s' + n")
    p.add_argument("a", type=nonzero_rational)
    p.add_argument("b", type=nonzero_rational)
    p.add_argument("t", type=rational)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("classify", help="decide whether t is an integer, with a certificate")
    p.add_argument("t", type=rational)
    p.add_argument("--samples", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the certificate here")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("prove", help="witness for an integer t and a pair (a, b)")
    p.add_argument("--formula", choices=["t1", "t2", "T1", "T2"], default="t1")
    p.add_argument("t", type=rational)
    p.add_argument("a", type=rational)
    p.add_argument("b", type=rational)
    p.add_argument("--out")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("refute", help="refutation certificate for a non-integer t")
    p.add_argument("--formula", choices=["t1", "t2", "T1", "T2"], default="t1")
    p.add_argument("t", type=rational)
    p.add_argument("--out")
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("check", help="verify a certificate about t")
    p.add_argument("cert")
    p.add_argument("t", type=rational)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("zp-gen", help="pairs whose ramification meets in {p}")
    p.add_argument("p", type=prime)
    p.set_defaults(func=cmd_zp_gen)

    p = sub.add_parser("verify-lemmas", help="run the lemma verification suite")
    p.add_argument("--max-q", type=int, default=64)
    p.add_argument("--max-p", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", help="write the JSON report here")
    p.add_argument("--figures", help="directory for PNG figures")
    p.add_argument("--timing", action="store_true", help="include wall times in the JSON report")
    p.set_defaults(func=cmd_verify_lemmas)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, BoundExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (PreconditionViolation, ZinqError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
