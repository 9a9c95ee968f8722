"""Command line front end: generate, check, solve, and verify.

Exit codes follow one contract everywhere: 0 for member/verified/pass,
1 for refuted/fail, 2 for usage or internal errors.  All JSON output is
deterministic (sorted keys, no timestamps).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import gamma as g
from . import numerics as num
from . import words as w

SEQ_KINDS = ("thue-morse", "M", "theta", "phi-iterate", "smallest-admissible", "braunholtz")
CHECK_KINDS = ("gamma", "gamma-strict", "admissible", "square-free")
SMALLEST_TARGETS = ("admissible-sequence", "univoque-number")
VERIFY_SUITES = ("identity", "roundtrip", "phi-vs-closed-form", "equivalence")

DEFAULT_COUNT = 32
DEFAULT_HORIZON = 10_000
DEFAULT_TOL = "1e-40"


def _parse_word(text: str) -> tuple:
    """Parse letters from '(w)*', 'w^inf' or a bare word; returns the period."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")*"):
        s = s[1:-2]
    else:
        for marker in ("^∞", "^inf", "^oo"):
            if s.endswith(marker):
                s = s[: -len(marker)]
                break
    s = s.strip()
    if not s:
        raise ValueError(f"empty word in {text!r}")
    if "," in s or " " in s:
        tokens = s.replace(",", " ").split()
    else:
        tokens = list(s)
    try:
        return tuple(int(tok) for tok in tokens)
    except ValueError:
        raise ValueError(f"cannot parse letters from {text!r}") from None


def _parse_range(text: str) -> list:
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if lo > hi:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _valid_ts(b: int) -> list:
    return [t for t in range(1, b + 1) if 2 * t >= b + 1]


def _emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _require(args, names) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            raise ValueError(f"--{name} is required here")


def cmd_seq(args) -> int:
    n = args.count
    if n < 0:
        raise ValueError("--count must be >= 0")
    if args.kind == "thue-morse":
        symbols = [w.tm_eps(i) for i in range(n)]
    elif args.kind == "M":
        _require(args, ("b", "t"))
        symbols = w.m_stream(args.b, args.t).prefix(n)
    elif args.kind == "theta":
        symbols = w.fixed_point(w.theta_universal(), 3).prefix(n)
    elif args.kind == "phi-iterate":
        _require(args, ("b", "t", "s"))
        symbols = w.PeriodicStream(g.phi_iterate(args.b, args.t, args.s)).prefix(n)
    elif args.kind == "smallest-admissible":
        _require(args, ("b",))
        symbols = g.smallest_admissible(args.b).prefix(n)
    else:  # braunholtz
        symbols = w.m_stream(2, 2).prefix(n)

    if args.format == "json":
        _emit_json({"kind": args.kind, "b": args.b, "t": args.t, "s": args.s,
                    "count": n, "symbols": symbols})
    elif args.format == "csv":
        print("index,letter")
        for i, x in enumerate(symbols):
            print(f"{i},{x}")
    else:
        print(" ".join(str(x) for x in symbols))
    return 0


def _check_input(args, alphabet: w.Alphabet, default_stream=None):
    """Build the stream to check from --word / --stream / the default."""
    if args.word is not None:
        return w.PeriodicStream(w.PeriodicWord(alphabet, _parse_word(args.word)))
    if args.stream is not None:
        return w.stream_from_descriptor(json.loads(args.stream))
    if default_stream is not None:
        return default_stream
    raise ValueError("need --word or --stream for this check")


def cmd_check(args) -> int:
    horizon = args.horizon
    if args.kind == "gamma":
        _require(args, ("b", "t"))
        params = g.GammaParams(args.b, args.t)
        stream = _check_input(args, params.alphabet)
        if not isinstance(stream, w.PeriodicStream):
            raise ValueError("gamma membership is decided exactly and needs a periodic word")
        verdict = g.gamma_member(stream.word, params.alphabet)
        payload = verdict.to_json()
        ok = verdict.is_positive
        human = _describe_verdict(verdict)
    elif args.kind == "gamma-strict":
        _require(args, ("b", "t"))
        params = g.GammaParams(args.b, args.t)
        stream = _check_input(args, params.alphabet,
                              default_stream=w.m_stream(args.b, args.t))
        verdict = g.gamma_strict_check(stream, params.alphabet, horizon)
        payload = verdict.to_json()
        ok = verdict.is_positive
        human = _describe_verdict(verdict)
    elif args.kind == "admissible":
        _require(args, ("b",))
        stream = _check_input(args, w.Alphabet(0, args.b))
        verdict = g.admissible_check(stream, args.b, horizon)
        payload = verdict.to_json()
        ok = verdict.is_positive
        human = _describe_verdict(verdict)
    else:  # square-free
        _require(args, ("b", "t"))
        stream = _check_input(args, w.Alphabet(args.b - args.t, args.t),
                              default_stream=w.m_stream(args.b, args.t))
        scan = g.square_free_check(stream, horizon)
        payload = scan.to_json()
        ok = scan.square_free
        human = (f"square-free over the first {scan.horizon} symbols" if ok else
                 f"square of half-length {scan.length} at position {scan.position}")

    if args.format == "json":
        _emit_json(payload)
    elif args.format == "csv":
        print("key,value")
        for k, v in sorted(payload.items()):
            print(f"{k},{v}")
    else:
        print(human)
        _emit_json(payload)
    return 0 if ok else 1


def _describe_verdict(v: g.CheckVerdict) -> str:
    if v.status is g.Status.MEMBER_EXACT:
        return "member (exact decision)"
    if v.status is g.Status.VERIFIED_TO_HORIZON:
        return f"verified up to horizon {v.horizon}"
    where = f"shift {v.witness_shift}"
    if v.witness_index is not None:
        where += f", index {v.witness_index}"
    note = f" ({v.note})" if v.note else ""
    return f"refuted at {where}{note}"


def cmd_smallest(args) -> int:
    if args.target == "admissible-sequence":
        _require(args, ("b",))
        stream = g.smallest_admissible(args.b)
        symbols = stream.prefix(args.count)
        if args.format == "json":
            _emit_json({"b": args.b, "descriptor": stream.descriptor(), "symbols": symbols})
        elif args.format == "csv":
            print("index,letter")
            for i, x in enumerate(symbols):
                print(f"{i},{x}")
        else:
            print(" ".join(str(x) for x in symbols))
        return 0

    _require(args, ("b",))
    result = num.smallest_univoque(args.b, Fraction(args.tol))
    if args.format == "json":
        _emit_json(result.to_json(prefix_len=args.count))
    elif args.format == "csv":
        print("key,value")
        for k, v in sorted(result.to_json(prefix_len=args.count).items()):
            v = " ".join(map(str, v)) if isinstance(v, list) else v
            print(f"{k},{v}")
    else:
        lam_lo, lam_hi = result.lam.decimal_bounds(50)
        res_lo, res_hi = result.identity_residual.decimal_bounds(35)
        print(f"digits: {' '.join(str(d) for d in result.digits_prefix(args.count))}")
        print(f"lambda_lo: {lam_lo}")
        print(f"lambda_hi: {lam_hi}")
        print(f"identity_residual: [{res_lo}, {res_hi}]")
        print(f"terms_used: {result.terms_used}")
    return 0


def cmd_solve(args) -> int:
    _require(args, ("b",))
    alphabet = w.Alphabet(0, args.b)
    if args.word is not None:
        stream = w.PeriodicStream(w.PeriodicWord(alphabet, _parse_word(args.word)))
    elif args.stream is not None:
        stream = w.stream_from_descriptor(json.loads(args.stream))
    else:
        raise ValueError("need --word or --stream digits to solve")
    enc = num.solve_lambda(stream, args.b, Fraction(args.tol))
    if args.format == "json":
        _emit_json(enc.to_json())
    elif args.format == "csv":
        print("key,value")
        for k, v in sorted(enc.to_json().items()):
            print(f"{k},{v}")
    else:
        lo, hi = enc.decimal_bounds(50)
        print(f"lambda_lo: {lo}")
        print(f"lambda_hi: {hi}")
    return 0


def _verify_identity(args, cells) -> None:
    tol = Fraction(args.tol)
    for b in _parse_range(args.b):
        for t in (_parse_range(args.t) if args.t else _valid_ts(b)):
            enc = num.solve_lambda(w.m_stream(b, t), b, tol)
            residual = num.functional_identity_residual(b, t, enc)
            ok = residual.contains(0) and residual.width <= Fraction(1, 10**25)
            lo, hi = residual.decimal_bounds(30)
            cells.append({"suite": "identity", "b": b, "t": t, "pass": ok,
                          "residual_lo": lo, "residual_hi": hi})


def _verify_roundtrip(args, cells) -> None:
    tol = Fraction(args.tol)
    for b in _parse_range(args.b):
        report = num.univoque_roundtrip(b, tol, 60)
        cells.append({"suite": "roundtrip", "b": b, "t": b,
                      "pass": report.matches_closed_form,
                      "digits_certified": len(report.digits)})


def _verify_phi(args, cells) -> None:
    srange = _parse_range(args.s) if args.s else list(range(1, 11))
    for b in _parse_range(args.b):
        for t in (_parse_range(args.t) if args.t else _valid_ts(b)):
            stream = w.m_stream(b, t)
            prev = -1
            ok = True
            worst = None
            for s in srange:
                word = g.phi_iterate(b, t, s)
                bound = 2 * word.T
                ref = stream.prefix(bound)
                agree = bound
                for i in range(bound):
                    if word.letter(i) != ref[i]:
                        agree = i
                        break
                if agree < 2 ** (s + 1) - 1 or agree <= prev:
                    ok = False
                    worst = s
                    break
                prev = agree
            cells.append({"suite": "phi-vs-closed-form", "b": b, "t": t,
                          "s_max": srange[-1], "pass": ok,
                          "failed_at_s": worst})


def _verify_equivalence(args, cells) -> None:
    length = args.len
    for b in _parse_range(args.b):
        for t in _valid_ts(b):
            if 2 * t <= b:
                continue
            mismatches = 0
            total = 0
            stack = [(t,)]
            while stack:
                word = stack.pop()
                if len(word) < length:
                    stack.extend(word + (c,) for c in range(b + 1))
                    continue
                total += 1
                adm = g.admissible_prefix_refutation(word, b) is not None
                gam = g.gamma_strict_prefix_refutation(word, b, t) is not None
                if adm != gam:
                    mismatches += 1
            cells.append({"suite": "equivalence", "b": b, "t": t, "len": length,
                          "words": total, "mismatches": mismatches,
                          "pass": mismatches == 0})


def cmd_verify(args) -> int:
    cells: list = []
    if args.suite == "identity":
        _verify_identity(args, cells)
    elif args.suite == "roundtrip":
        _verify_roundtrip(args, cells)
    elif args.suite == "phi-vs-closed-form":
        _verify_phi(args, cells)
    else:
        _verify_equivalence(args, cells)

    all_pass = all(c["pass"] for c in cells)
    if args.format == "json":
        _emit_json({"suite": args.suite, "cells": cells, "all_pass": all_pass})
    else:
        for c in cells:
            tag = "PASS" if c["pass"] else "FAIL"
            keys = [f"{k}={c[k]}" for k in c if k not in ("suite", "pass")]
            print(f"{c['suite']} {' '.join(keys)} {tag}")
        print(f"{args.suite}: {'all cells pass' if all_pass else 'FAILURES present'}")
    return 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="univoque",
        description="Extremal shift-bounded sequences and smallest univoque numbers")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, tol=False, horizon=False, count=False):
        p.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
        if tol:
            p.add_argument("--tol", default=DEFAULT_TOL,
                           help="certification tolerance (exact rational, e.g. 1e-40)")
        if horizon:
            p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
        if count:
            p.add_argument("--count", type=int, default=DEFAULT_COUNT)

    p = sub.add_parser("seq", help="print symbols of a named stream")
    p.add_argument("kind", choices=SEQ_KINDS)
    p.add_argument("--b", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--s", type=int)
    add_common(p, count=True)
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("check", help="run a membership or square-freeness check")
    p.add_argument("kind", choices=CHECK_KINDS)
    p.add_argument("--word", help="periodic word, e.g. '(2 1)*' or '10^inf'")
    p.add_argument("--stream", help="JSON stream descriptor")
    p.add_argument("--b", type=int)
    p.add_argument("--t", type=int)
    add_common(p, horizon=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("smallest", help="construct a smallest extremal object")
    p.add_argument("target", choices=SMALLEST_TARGETS)
    p.add_argument("--b", type=int)
    add_common(p, tol=True, count=True)
    p.set_defaults(func=cmd_smallest)

    p = sub.add_parser("solve", help="solve 1 = sum d_n lambda^-(n+1) for lambda")
    p.add_argument("--word", help="periodic digit word")
    p.add_argument("--stream", help="JSON stream descriptor for the digits")
    p.add_argument("--b", type=int)
    add_common(p, tol=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run a property suite over a parameter grid")
    p.add_argument("suite", choices=VERIFY_SUITES)
    p.add_argument("--b", default="1..4", help="range like 1..4 or a single value")
    p.add_argument("--t", help="range of t (default: all valid t per b)")
    p.add_argument("--s", help="range of iteration depths (phi suite)")
    p.add_argument("--len", type=int, default=8, help="word length (equivalence suite)")
    add_common(p, tol=True, horizon=True)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError, num.BracketingError,
            num.CertificationError, g.HorizonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
