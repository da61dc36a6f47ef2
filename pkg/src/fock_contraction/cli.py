"""Command-line entry point: ``verify``, ``seq``, ``bound``, ``sharpness``,
``bathtub``.

Exit codes: 0 when nothing failed, 1 when any row or check FAILed, 2 on usage
errors. EXPLORATORY and INCONCLUSIVE rows never change the exit code.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import math
import re
import sys
from typing import Optional, Sequence

from .inequality import (
    PolynomialF,
    RadialProfile,
    auto_sharpness_radius,
    bathtub_check,
    faber_krahn_bound,
    faber_krahn_margin,
    local_mass,
    random_annuli,
    sharpness_ratio,
)
from .report import EXPLORATORY, FAIL, PASS, render_table
from .sequences import VERIFIED_MAX_N, threshold_scan
from .specfun import FockParams
from .verify import VerifyConfig, run_verify

FAILING_SEQ_STATUSES = {"CONJECTURE-VIOLATION", "RECURRENCE-MISMATCH"}


# ---------------------------------------------------------------------------
# flag parsers
# ---------------------------------------------------------------------------

def parse_alpha(text: str) -> float:
    """A positive decimal literal or the token ``pi``."""
    t = text.strip().lower()
    try:
        value = math.pi if t == "pi" else float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"alpha must be a number or 'pi', got {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError("alpha must be positive")
    return value


def parse_int_list(text: str) -> list[int]:
    """``1..10``, ``1,2,5`` or a mix such as ``1..3,7``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = (int(x) for x in part.split("..", 1))
                if hi < lo:
                    raise argparse.ArgumentTypeError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if any(v < 0 for v in out):
        raise argparse.ArgumentTypeError("values must be non-negative")
    return out


def parse_float_list(text: str) -> list[float]:
    try:
        out = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None
    if not all(math.isfinite(v) and v > 0 for v in out):
        raise argparse.ArgumentTypeError("values must be positive")
    return out


_MONOMIAL = re.compile(r"^z\^?(\d*)$")


def parse_polynomial(text: str) -> PolynomialF:
    """``z3`` / ``z^3`` / ``z`` for a monomial, otherwise a comma-separated
    coefficient list c0,c1,... (Python complex literals allowed)."""
    t = text.strip().lower().replace(" ", "")
    m = _MONOMIAL.match(t)
    try:
        if m:
            f = PolynomialF.monomial(int(m.group(1) or 1))
        else:
            f = PolynomialF(tuple(complex(c.replace("i", "j")) for c in t.split(",")))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse polynomial {text!r}") from None
    if f.is_zero():
        raise argparse.ArgumentTypeError("f must be nonzero")
    return f


def non_negative_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError("expected a positive number")
    return v


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _alpha_label(alpha: float) -> str:
    return "pi" if alpha == math.pi else format(alpha, ".12g")


def cmd_verify(args) -> tuple[str, int]:
    report = run_verify(VerifyConfig(n=args.n, kmax=args.kmax, quick=args.quick))
    if args.stamp:
        report.stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return report.render(args.format), report.exit_code


SEQ_COLUMNS = ("n", "k", "a_quad", "a_rec", "error_estimate", "k_over_k_plus_1", "below_one",
               "above_lower", "shifted_lower", "above_shifted_lower", "status", "flagged")


def cmd_seq(args) -> tuple[str, int]:
    if args.kmax < args.n:
        raise ValueError(f"--kmax ({args.kmax}) must be >= --n ({args.n})")
    records = threshold_scan(args.n, args.kmax)
    rows = [(r.n, r.k, r.a_quad, r.a_rec, r.error_estimate, r.lower, r.below_one, r.above_lower,
             r.lower_shifted, r.above_lower_shifted, r.status, r.flagged) for r in records]
    code = 1 if any(r.status in FAILING_SEQ_STATUSES for r in records) else 0
    header = {"shifted_index": "j = k - n + 1"}
    return render_table("seq/1", SEQ_COLUMNS, rows, args.format, header), code


BOUND_COLUMNS = ("n", "alpha", "m", "r_inner", "R", "s", "mass", "bound", "margin",
                 "relative_margin", "status")


def cmd_bound(args) -> tuple[str, int]:
    params = FockParams(args.alpha, args.n)
    rows = []
    code = 0
    for m in args.m:
        f = PolynomialF.monomial(m)
        profile = RadialProfile(f, params)
        for R in args.R:
            if R <= args.r_inner:
                raise ValueError(f"R = {R} must exceed --r-inner = {args.r_inner}")
            s = args.alpha * (R * R - args.r_inner ** 2)
            bound = faber_krahn_bound(f, params, s)
            margin = faber_krahn_margin(f, params, args.r_inner, R)
            mass = local_mass(profile, args.r_inner, R)
            status = EXPLORATORY if args.n > VERIFIED_MAX_N else (PASS if margin > 0 else FAIL)
            if status == FAIL:
                code = 1
            rows.append((args.n, _alpha_label(args.alpha), m, args.r_inner, R, s, mass, bound,
                         margin, margin / bound, status))
    return render_table("bound/1", BOUND_COLUMNS, rows, args.format), code


SHARPNESS_COLUMNS = ("n", "alpha", "m", "R", "s", "J", "one_minus_J", "status")


def cmd_sharpness(args) -> tuple[str, int]:
    params = FockParams(args.alpha, args.n)
    rows = []
    code = 0
    for m in args.m:
        if m < args.n:
            raise ValueError(f"m = {m} must be >= n = {args.n}")
        radii = args.R or [auto_sharpness_radius(m, args.alpha)]
        for R in radii:
            J = sharpness_ratio(R, m, params)
            status = PASS if J < 1 else FAIL
            if status == FAIL:
                code = 1
            rows.append((args.n, _alpha_label(args.alpha), m, R, args.alpha * R * R, J, 1 - J,
                         status))
    header = {"auto_R": "alpha R^2 = m + 5 when --R is omitted"}
    return render_table("sharpness/1", SHARPNESS_COLUMNS, rows, args.format, header), code


BATHTUB_COLUMNS = ("trial", "kind", "r_inner", "r_outer", "s", "mass", "level_mass",
                   "excess", "dominated")


def cmd_bathtub(args) -> tuple[str, int]:
    params = FockParams(args.alpha, args.n)
    profile = RadialProfile(args.f, params)
    s = args.s
    disk = (0.0, math.sqrt(s / args.alpha))
    rep = bathtub_check(profile, s, [disk] + random_annuli(args.alpha, s, args.trials, args.seed))
    lvl = rep.level_set
    rows = [(0, "level", lvl.inner_radius, lvl.outer_radius, lvl.normalized_measure,
             rep.level_mass, rep.level_mass, 0.0, True)]
    for i, t in enumerate(rep.trials):
        kind = "disk" if i == 0 else "random"
        rows.append((i + 1, kind, t.r_lo, t.r_hi, args.alpha * (t.r_hi ** 2 - t.r_lo ** 2),
                     t.mass, rep.level_mass, t.mass - rep.level_mass, t.dominated))
    header = {"seed": args.seed, "tolerance": rep.tolerance}
    return render_table("bathtub/1", BATHTUB_COLUMNS, rows, args.format, header), (
        0 if rep.all_dominated else 1)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="FILE", help="write to FILE instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fock-contraction",
        description="Numerical checks for derivative contraction bounds on Fock spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--n", type=non_negative_int, help="restrict order-dependent checks to one n")
    p.add_argument("--kmax", type=non_negative_int, default=200)
    p.add_argument("--quick", action="store_true", help="fast subset (under 5 s)")
    p.add_argument("--stamp", action="store_true", help="add a timestamp to the header")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("seq", help="a_k(n) table")
    p.add_argument("--n", type=non_negative_int, required=True)
    p.add_argument("--kmax", type=non_negative_int, required=True)
    _common(p)
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("bound", help="margins of the derivative mass bound for z^m")
    p.add_argument("--n", type=non_negative_int, default=1)
    p.add_argument("--alpha", type=parse_alpha, default=math.pi)
    p.add_argument("--m", type=parse_int_list, required=True, help="e.g. 1..10 or 1,3,5")
    p.add_argument("--R", type=parse_float_list, required=True, help="outer radii, e.g. 0.5,1,2")
    p.add_argument("--r-inner", dest="r_inner", type=float, default=0.0,
                   help="inner radius (annuli); 0 gives disks")
    _common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sharpness", help="J(R, m) for monomials on disks")
    p.add_argument("--n", type=non_negative_int, default=1)
    p.add_argument("--alpha", type=parse_alpha, default=math.pi)
    p.add_argument("--m", type=parse_int_list, required=True)
    p.add_argument("--R", type=parse_float_list, default=None,
                   help="radii; default alpha R^2 = m + 5")
    _common(p)
    p.set_defaults(func=cmd_sharpness)

    p = sub.add_parser("bathtub", help="super-level set against equal-measure annuli")
    p.add_argument("--f", type=parse_polynomial, default=PolynomialF.monomial(3),
                   help="z3, z^3 or coefficients c0,c1,...")
    p.add_argument("--n", type=non_negative_int, default=1)
    p.add_argument("--alpha", type=parse_alpha, default=math.pi)
    p.add_argument("--s", type=positive_float, default=1.0)
    p.add_argument("--trials", type=non_negative_int, default=20)
    p.add_argument("--seed", type=int, default=7)
    _common(p)
    p.set_defaults(func=cmd_bathtub)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except ValueError as exc:
        parser.error(str(exc))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
