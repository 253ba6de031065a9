"""Versioned JSON certificates and an independent checker.

Every certificate is an object ``{version, formula_id, t, kind, payload,
metadata}``; all rationals are "num/den" strings.  Kinds:

* ``witness`` - one WitnessT1/WitnessT2 for a single (a, b);
* ``witness_bundle`` - the Integer verdict of the classifier;
* ``refutation`` - a RefutationCert.

The checker never trusts anything but the numbers in the payload.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .exact_arith import format_rational, parse_rational
from .formula import (
    RefutationCert,
    Verdict,
    WitnessT1,
    WitnessT2,
    check_refutation,
    eval_witness,
)
from .quaternion import QuatElem

VERSION = 1

INTEGER_NOTE = (
    "Integer verdicts are backed by witnesses for finitely many sampled and "
    "adversarial (a, b); they do not exhaust the universal quantifiers."
)
NONINTEGER_NOTE = "Non-integer verdicts are complete proofs: the refutation is checkable."
TIEBREAK_NOTE = (
    "Decompositions use the smallest n, then the smallest nonnegative s; "
    "this choice is a convention, not part of the mathematics."
)


class CertificateError(ValueError):
    """Malformed or unsupported certificate."""


R = format_rational


def _q(text) -> Fraction:
    if not isinstance(text, str):
        raise CertificateError(f"rationals must be strings, got {text!r}")
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise CertificateError(str(exc)) from None


def _int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise CertificateError(f"expected an integer, got {v!r}")
    return v


# -- witnesses ---------------------------------------------------------------

def witness_to_json(w) -> dict:
    if isinstance(w, WitnessT1):
        out = {"formula_id": "T1", "a": R(w.a), "b": R(w.b)}
        for name, vals in (("a", w.a_sq), ("b", w.b_sq), ("x", w.x.coords()), ("y", w.y.coords())):
            for i, v in enumerate(vals, 1):
                out[f"{name}{i}"] = R(v)
        out["n"] = w.n
        return out
    out = {"formula_id": "T2", "a": R(w.a), "b": R(w.b)}
    for i, v in enumerate(w.x.coords(), 1):
        out[f"x{i}"] = R(v)
    for i, v in enumerate(w.y, 2):
        out[f"y{i}"] = R(v)
    out["n"] = w.n
    return out


def witness_from_json(d: dict):
    try:
        fid = d["formula_id"]
        a, b, n = _q(d["a"]), _q(d["b"]), _int(d["n"])
        x = QuatElem(*(_q(d[f"x{i}"]) for i in range(1, 5)))
        if fid == "T1":
            return WitnessT1(
                a,
                b,
                tuple(_q(d[f"a{i}"]) for i in range(1, 5)),
                tuple(_q(d[f"b{i}"]) for i in range(1, 5)),
                x,
                QuatElem(*(_q(d[f"y{i}"]) for i in range(1, 5))),
                n,
            )
        if fid == "T2":
            return WitnessT2(a, b, x, tuple(_q(d[f"y{i}"]) for i in range(2, 5)), n)
    except KeyError as exc:
        raise CertificateError(f"missing field {exc}") from None
    raise CertificateError(f"unknown formula id {d.get('formula_id')!r}")


def refutation_to_json(c: RefutationCert) -> dict:
    out = {"p": c.p, "a": R(c.a), "b": R(c.b), "valuation": c.valuation}
    if c.curve_point is not None:
        out["curve_point"] = list(c.curve_point)
    return out


def refutation_from_json(fid: str, d: dict) -> RefutationCert:
    try:
        point = d.get("curve_point")
        return RefutationCert(
            fid,
            _int(d["p"]),
            _q(d["a"]),
            _q(d["b"]),
            _int(d["valuation"]),
            tuple(point) if point is not None else None,
        )
    except KeyError as exc:
        raise CertificateError(f"missing field {exc}") from None


# -- envelopes -------------------------------------------------------------------

def _envelope(formula_id: str, t, kind: str, payload: dict, metadata: dict) -> dict:
    return {
        "version": VERSION,
        "formula_id": formula_id,
        "t": R(t),
        "kind": kind,
        "payload": payload,
        "metadata": metadata,
    }


def witness_certificate(t, w) -> dict:
    d = witness_to_json(w)
    fid = d.pop("formula_id")
    return _envelope(fid, t, "witness", d, {"tie_break": TIEBREAK_NOTE})


def refutation_certificate(t, c: RefutationCert) -> dict:
    return _envelope(c.formula_id, t, "refutation", refutation_to_json(c), {"note": NONINTEGER_NOTE})


def verdict_certificate(v: Verdict) -> dict:
    if not v.is_integer:
        cert = refutation_certificate(v.t, v.refutation)
        cert["metadata"]["verdict"] = "NONINTEGER"
        return cert
    payload = {
        "seed": v.seed,
        "sample_count": v.sample_count,
        "witnesses": [witness_to_json(w) for w in v.witnesses],
    }
    meta = {"verdict": "INTEGER", "note": INTEGER_NOTE, "tie_break": TIEBREAK_NOTE}
    return _envelope("T1+T2", v.t, "witness_bundle", payload, meta)


def dumps(cert: dict) -> str:
    return json.dumps(cert, indent=2) + "\n"


# -- checking ---------------------------------------------------------------------

def check_certificate(cert: dict, t) -> bool:
    """True iff ``cert`` is a valid certificate about ``t``.

    Raises CertificateError for structurally malformed input (unknown version,
    wrong types); a well-formed certificate that does not verify returns False.
    """
    if not isinstance(cert, dict):
        raise CertificateError("certificate must be a JSON object")
    if cert.get("version") != VERSION:
        raise CertificateError(f"unsupported certificate version {cert.get('version')!r}")
    t = parse_rational(t) if isinstance(t, str) else Fraction(t)
    if _q(cert.get("t")) != t:
        return False
    kind, fid, payload = cert.get("kind"), cert.get("formula_id"), cert.get("payload")
    if not isinstance(payload, dict):
        raise CertificateError("payload must be an object")
    if kind == "refutation":
        if fid not in ("T1", "T2"):
            raise CertificateError(f"unknown formula id {fid!r}")
        return check_refutation(refutation_from_json(fid, payload), t)
    if kind == "witness":
        w = witness_from_json(dict(payload, formula_id=fid))
        return eval_witness(t, w)
    if kind == "witness_bundle":
        ws = payload.get("witnesses")
        if not isinstance(ws, list) or not ws:
            return False
        return all(eval_witness(t, witness_from_json(w)) for w in ws)
    raise CertificateError(f"unknown certificate kind {kind!r}")
