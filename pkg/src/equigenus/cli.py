"""Command-line interface.

Exit codes: 0 success, 1 the checked property fails (non-rigid, unbalanced,
not divisible), 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import warnings
from fractions import Fraction
from typing import List, Optional, TextIO

from .catalog import ManifoldFileError, load_manifold
from .exact import LaurentPoly, format_rational, parse_rational
from .genus import a_hat_genus, elliptic_genus, l_genus
from .localization import (
    NonPrimitiveActionWarning,
    check_rigidity,
    equivariant_twisted_signature,
    is_two_balanced,
    lemma2_verify,
)
from .rseries import BundleExpr, expand_R

DEFAULT_Q_ORDER = 3

_TERM_RE = re.compile(r"^(\d+(?:/\d+)?)?(\*?t(?:\^(~?\d+))?)?$")


class InputError(Exception):
    pass


def parse_character(text: str) -> LaurentPoly:
    """Parse a Laurent polynomial in ``t`` such as ``"2 + 3*t^2 + 3*t^-2"``."""
    s = text.replace(" ", "").replace("^-", "^~")
    if not s:
        raise InputError("empty character")
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise InputError(f"cannot parse character {text!r}")
    out = LaurentPoly()
    for term in terms:
        sign = -1 if term[0] == "-" else 1
        body = term.lstrip("+-")
        m = _TERM_RE.match(body)
        if not body or not m or not (m.group(1) or m.group(2)):
            raise InputError(f"cannot parse term {term!r} in {text!r}")
        if m.group(2) and m.group(1) is None and body.startswith("*"):
            raise InputError(f"cannot parse term {term!r} in {text!r}")
        coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        if m.group(2):
            exp = m.group(3)
            e = 1 if exp is None else int(exp.replace("~", "-"))
        else:
            e = 0
        out = out + LaurentPoly.character(e, sign * coeff)
    return out


def _fmt_char(p: LaurentPoly) -> str:
    return p.to_str("t", 2)


def _bundle(name: str) -> BundleExpr:
    if name == "trivial":
        return BundleExpr.one()
    return expand_R(int(name[1:]))[int(name[1:])]


def _emit(out: TextIO, args, text: str, payload: dict) -> None:
    if args.json:
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def cmd_compute(args, out) -> int:
    M = load_manifold(args.manifold)
    if args.genus == "elliptic":
        if M.pontryagin is None:
            raise InputError(f"{M.name} carries no pontryagin_numbers")
        phi = elliptic_genus(M.pontryagin, args.q_order)
        coeffs = [format_rational(c) for c in phi]
        _emit(out, args, f"Phi({M.name}) = {phi}", {
            "manifold": M.name, "genus": "elliptic", "q_order": args.q_order, "coefficients": coeffs,
        })
        return 0
    if M.pontryagin is None:
        raise InputError(f"{M.name} carries no pontryagin_numbers")
    value = a_hat_genus(M.pontryagin) if args.genus == "a-hat" else l_genus(M.pontryagin)
    label = "A-hat" if args.genus == "a-hat" else "L"
    _emit(out, args, f"{label}({M.name}) = {format_rational(value)}", {
        "manifold": M.name, "genus": args.genus, "value": format_rational(value),
    })
    return 0


def cmd_rigidity(args, out) -> int:
    M = load_manifold(args.manifold)
    v = check_rigidity(M, args.q_order)
    head = f"rigid_through {v.rigid_through}"
    if v.rigid:
        consts = ", ".join(format_rational(c) for c in v.constants)
        lines = [f"{head}; constants [{consts}]"]
    else:
        parts = [head]
        for i, w in sorted(v.witnesses.items()):
            (l1, v1), (l2, v2) = w.samples
            parts.append(
                f"witness q^{i}: value {format_rational(v1)} at lambda={format_rational(l1)}, "
                f"{format_rational(v2)} at lambda={format_rational(l2)}"
            )
        lines = ["; ".join(parts)]
    lines += [f"flag: {f}" for f in v.flags]
    payload = {
        "manifold": M.name,
        "q_order": v.order,
        "rigid": v.rigid,
        "rigid_through": v.rigid_through,
        "constants": [None if c is None else format_rational(c) for c in v.constants],
        "coefficients": [str(c) for c in v.coefficients],
        "witnesses": {
            str(i): [[format_rational(l), format_rational(x)] for l, x in w.samples]
            for i, w in sorted(v.witnesses.items())
        },
        "pontryagin_agrees": list(v.pontryagin_agrees),
        "balanced": v.balance.balanced,
        "primitive": v.balance.primitive,
        "flags": list(v.flags),
    }
    _emit(out, args, "\n".join(lines), payload)
    return 0 if v.rigid and v.consistent else 1


def cmd_balanced(args, out) -> int:
    M = load_manifold(args.manifold)
    r = is_two_balanced(M)
    par = ",".join(str(p) for p in r.parities)
    text = f"balanced: {str(r.balanced).lower()}, parities [{par}], primitive: {str(r.primitive).lower()}"
    if not r.primitive:
        text += f" (weight gcd {r.weight_gcd})"
    _emit(out, args, text, {
        "manifold": M.name, "balanced": r.balanced, "parities": list(r.parities),
        "weight_gcd": r.weight_gcd, "primitive": r.primitive,
    })
    return 0 if r.balanced else 1


def cmd_lemma2(args, out) -> int:
    a, b = parse_character(args.char_a), parse_character(args.char_b)
    try:
        rep = lemma2_verify(a, b)
    except ValueError as e:
        raise InputError(str(e)) from None
    quotient = _fmt_char(rep.quotient) if rep.quotient is not None else "none"
    text = (
        f"symmetric: {str(rep.symmetric).lower()}, divisible: {str(rep.divisible).lower()}, "
        f"quotient: {quotient}, parity_difference: {rep.parity_difference}"
    )
    _emit(out, args, text, {
        "difference": _fmt_char(rep.difference), "symmetric": rep.symmetric,
        "divisible": rep.divisible, "quotient": None if rep.quotient is None else quotient,
        "parity_difference": rep.parity_difference,
    })
    return 0 if rep.divisible and rep.symmetric else 1


def cmd_r_series(args, out) -> int:
    R = expand_R(args.order)
    text = "; ".join(f"R{i} = {r}" for i, r in enumerate(R))
    _emit(out, args, text, {"order": args.order, "R": [str(r) for r in R]})
    return 0


def cmd_equivariant(args, out) -> int:
    M = load_manifold(args.manifold)
    r = equivariant_twisted_signature(M, _bundle(args.bundle))
    text = f"sign({M.name}, {args.bundle})(lambda) = {r}"
    payload = {"manifold": M.name, "bundle": args.bundle, "function": str(r)}
    if args.at is not None:
        try:
            lam = parse_rational(args.at)
            value = r.at_lambda(lam)
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"--at {args.at}: {e}") from None
        text += f"\nat lambda={format_rational(lam)}: {format_rational(value)}"
        payload["at"] = format_rational(lam)
        payload["value"] = format_rational(value)
    _emit(out, args, text, payload)
    return 0


def _non_negative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(
        prog="equigenus",
        description="Exact genera, elliptic genus and circle-action rigidity checks.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="A-hat, L or elliptic genus from Pontryagin numbers")
    c.add_argument("--manifold", required=True)
    c.add_argument("--genus", required=True, choices=["a-hat", "l", "elliptic"])
    c.add_argument("--q-order", type=_non_negative, default=DEFAULT_Q_ORDER)
    c.set_defaults(func=cmd_compute)

    c = sub.add_parser("rigidity", parents=[common], help="constancy of the equivariant elliptic genus")
    c.add_argument("--manifold", required=True)
    c.add_argument("--q-order", type=_non_negative, default=DEFAULT_Q_ORDER)
    c.set_defaults(func=cmd_rigidity)

    c = sub.add_parser("balanced", parents=[common], help="2-balanced check on the fixed-point weights")
    c.add_argument("--manifold", required=True)
    c.set_defaults(func=cmd_balanced)

    c = sub.add_parser("lemma2", parents=[common], help="(1-t)^3 divisibility of a character difference")
    c.add_argument("--char-a", required=True)
    c.add_argument("--char-b", required=True)
    c.set_defaults(func=cmd_lemma2)

    c = sub.add_parser("r-series", parents=[common], help="symbolic R_0..R_N")
    c.add_argument("--order", type=_non_negative, required=True)
    c.set_defaults(func=cmd_r_series)

    c = sub.add_parser("equivariant", parents=[common], help="equivariant twisted signature")
    c.add_argument("--manifold", required=True)
    c.add_argument("--bundle", required=True, choices=["trivial", "R1", "R2"])
    c.add_argument("--at", metavar="LAMBDA")
    c.set_defaults(func=cmd_equivariant)
    return p


def run_command(argv: Optional[List[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonPrimitiveActionWarning)
            return args.func(args, out)
    except (InputError, ManifoldFileError, FileNotFoundError, ValueError) as e:
        err.write(f"error: {e}\n")
        return 2


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
