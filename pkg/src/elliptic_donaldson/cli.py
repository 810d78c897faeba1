"""Command-line front end.

Symbolic output uses fixed indeterminate names: pg, m1, m2, e, d for the
surface and fiber data; S2 = (Sigma^2), fS = (f.Sigma), kS = (kappa.Sigma),
sS = (sigma.Sigma), dS = (delta.Sigma).  Exit codes: 0 success, 1 verification
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .checks import CHECKS, UnknownCheckError, run_checks
from .curvesheaf import BundleDesc, CurveKind, OutOfScopeError, SheafDesc, dim_hom_to_rank1
from .donaldson import gamma, solve_c, solve_d
from .elemmod import ModificationSpec, allowable, trace_modifications
from .exact import RatFunc, format_rational
from .grr import GrrContext, mu_extension_case, mu_general, mu_section_case, mu_squared_general
from .prodcalc import section_setting
from .surface import EllipticSurface, coh_dims_section_case, moduli_dimension

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2

INDETERMINATE_HELP = (
    "indeterminates: pg, m1, m2, e, d; S2=(Sigma^2), fS=(f.Sigma), kS=(kappa.Sigma), "
    "sS=(sigma.Sigma), dS=(delta.Sigma); c1, c2 are the multiple-fiber constants c(e, m_i)"
)


class UsageError(ValueError):
    """Invalid parameters; reported with exit code 2."""


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _json_value(x: RatFunc) -> str:
    """Constants as "p/q", anything else as its rendered expression."""
    return format_rational(x.to_fraction(), always_slash=True) if x.is_constant() else x.render()


def _text_value(x: RatFunc) -> str:
    return format_rational(x.to_fraction()) if x.is_constant() else x.render()


def _surface(args) -> EllipticSurface:
    try:
        return EllipticSurface(pg=args.pg, m1=args.m1, m2=args.m2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_gamma(args) -> int:
    if args.t not in (0, 1, 2):
        raise UsageError("only t = 0, 1, 2 are computed")
    S = _surface(args)
    poly = gamma(args.t, S)
    params = {k: getattr(args, k) for k in ("pg", "m1", "m2")}
    payload = {"command": "gamma", "t": args.t, "parameters": params, **poly.to_json()}
    text = poly.render()
    evaluate = not args.symbolic_sigma and (args.S2 is not None or args.kS is not None)
    if evaluate:
        if args.S2 is None or args.kS is None:
            raise UsageError("evaluation needs both --S2 and --kS")
        value = poly.evaluate(args.S2, args.kS)
        payload["value"] = _json_value(value)
        text = value.render()
    _emit(args, payload, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        reports = run_checks(args.selector)
    except UnknownCheckError:
        print(f"unknown check {args.selector!r}; known: all, {', '.join(CHECKS)}", file=sys.stderr)
        return EXIT_USAGE
    passed = all(r.passed for r in reports)
    if args.json:
        payload = {"command": "verify", "selector": args.selector, "passed": passed, "checks": [r.to_json() for r in reports]}
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for r in reports:
            print(f"{r.status.upper():4}  {r.check_id:26} {r.elapsed:7.3f}s  {r.statement}")
            if not r.passed:
                print(f"      lhs: {r.lhs}\n      rhs: {r.rhs}")
    return EXIT_OK if passed else EXIT_FAILURE


def cmd_mu(args) -> int:
    if args.case == "general":
        ctx = GrrContext.build(pg=args.pg, m1=args.m1, m2=args.m2, e=args.e)
        mu4 = mu_general(ctx)
        squared = mu_squared_general(ctx, mu4)
    else:
        st = section_setting(args.pg)
        mu4 = mu_section_case(setting=st) if args.case == "section" else mu_extension_case(setting=st)
        squared = mu4.square() / 16
    payload = {
        "command": "mu",
        "case": args.case,
        "minus_four_mu": mu4.render(),
        "mu_squared": _json_value(squared),
    }
    _emit(args, payload, f"-4 mu(Sigma) = {mu4.render()}\nmu(Sigma)^2 = {squared.render()}")
    return EXIT_OK


def cmd_hom_dim(args) -> int:
    curve = CurveKind(args.curve)
    try:
        if args.bundle == "stable":
            V = BundleDesc.stable(curve, args.e)
        elif args.bundle == "split":
            if args.l1 is None:
                raise UsageError("split bundles need --l1")
            V = BundleDesc.split(curve, args.l1, 2 * args.e + 1 - args.l1)
        else:
            V = BundleDesc.nodal_vn(args.n, args.e)
        lam = SheafDesc(curve, args.d, locally_free=not args.torsion_free, tag=args.tag)
        result = dim_hom_to_rank1(V, lam)
    except OutOfScopeError as exc:
        raise UsageError(f"not determined: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    surj = result.surjection_exists
    payload = {"command": "hom-dim", "bundle": args.bundle, "e": args.e, "d": args.d, "dim": result.dim, "surjection": surj}
    surj_text = "undetermined" if surj is None else ("yes" if surj else "no")
    _emit(args, payload, f"dim Hom = {result.dim}; surjection: {surj_text}")
    return EXIT_OK


def _parse_step(text: str) -> ModificationSpec:
    try:
        mult, deg = text.split(":")
        return ModificationSpec(int(mult), Fraction(deg))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MULTIPLICITY:DEGREE, got {text!r}") from None


def cmd_mod_calc(args) -> int:
    S = _surface(args)
    if not S.numeric():
        raise UsageError("mod-calc needs numeric --pg, --m1, --m2")
    steps: List[ModificationSpec] = args.step or []
    for spec in steps:
        if spec.fiber_multiplicity not in (1, int(S.m1.to_fraction()), int(S.m2.to_fraction())):
            raise UsageError(f"no fiber of multiplicity {spec.fiber_multiplicity} on this surface")
    p1_start = -3 * S.chi
    try:
        trace = trace_modifications(p1_start, args.e, steps, force=args.force)
    except ValueError as exc:
        raise UsageError(f"{exc}; pass --force to apply it anyway") from None
    final = trace[-1] if trace else p1_start
    dim = moduli_dimension(final, S)
    rows = [
        {"multiplicity": s.fiber_multiplicity, "deg_quotient": format_rational(s.deg_quotient, always_slash=True),
         "allowable": allowable(s, args.e), "p1": _json_value(p)}
        for s, p in zip(steps, trace)
    ]
    payload = {"command": "mod-calc", "e": args.e, "p1_initial": _json_value(p1_start), "steps": rows, "dimension": _json_value(dim)}
    lines = [f"p1 start: {p1_start.render()}"]
    lines += [
        f"step {i}: multiplicity {s.fiber_multiplicity}, deg Q = {format_rational(s.deg_quotient)} -> p1 = {_text_value(p)}"
        for i, (s, p) in enumerate(zip(steps, trace), 1)
    ]
    lines.append(f"moduli dimension: {dim.render()}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_table(args) -> int:
    if args.kind == "constants":
        header = ("m", "c(e,m)", "d(e,m)")
        values = [(m, solve_c(m), solve_d(m)) for m in range(1, args.max_m + 1, 2)]
        rows = [(str(m), _text_value(c), _text_value(d)) for m, c, d in values]
        json_rows = [[str(m), _json_value(c), _json_value(d)] for m, c, d in values]
    elif args.kind == "cohomology":
        header = ("a", "h0", "h1", "h2")
        rows = [(str(a), *map(str, coh_dims_section_case(a, args.pg))) for a in range(args.low, args.high + 1)]
    else:
        header = ("d", "stable", "split L1=e", "nodal n=1")
        e = args.e
        rows = []
        for d in range(args.low, args.high + 1):
            row = [str(d)]
            for V, curve in (
                (BundleDesc.stable(CurveKind.SMOOTH, e), CurveKind.SMOOTH),
                (BundleDesc.split(CurveKind.SMOOTH, e, e + 1), CurveKind.SMOOTH),
                (BundleDesc.nodal_vn(1, e), CurveKind.NODAL),
            ):
                try:
                    row.append(str(dim_hom_to_rank1(V, SheafDesc(curve, d)).dim))
                except OutOfScopeError:
                    row.append("-")
            rows.append(tuple(row))
    if args.kind != "constants":
        json_rows = [list(r) for r in rows]
    payload = {"command": "table", "kind": args.kind, "header": list(header), "rows": json_rows}
    widths = [max(len(x) for x in col) for col in zip(header, *rows)]
    text = "\n".join("  ".join(x.rjust(w) for x, w in zip(r, widths)) for r in [header, *rows])
    _emit(args, payload, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_surface_flags(p: argparse.ArgumentParser, numeric_pg: bool = False) -> None:
    p.add_argument("--pg", type=int, default=0 if numeric_pg else None, help="geometric genus (symbolic if omitted)")
    p.add_argument("--m1", type=int, default=None, help="first multiple-fiber multiplicity, odd (symbolic if omitted)")
    p.add_argument("--m2", type=int, default=None, help="second multiple-fiber multiplicity, odd (symbolic if omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elliptic-donaldson",
        description="Exact intersection theory and Donaldson polynomials of elliptic surfaces.",
        epilog=INDETERMINATE_HELP,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", help="Donaldson polynomial gamma_t", epilog=INDETERMINATE_HELP)
    p.add_argument("--t", type=int, required=True, help="t in {0, 1, 2}; the polynomial has degree 2t")
    _add_surface_flags(p)
    p.add_argument("--S2", type=_rational, default=None, help="value of (Sigma^2) for evaluation")
    p.add_argument("--kS", type=_rational, default=None, help="value of (kappa.Sigma) for evaluation")
    p.add_argument("--symbolic-sigma", action="store_true", help="print the polynomial in S2, kS even if values are given")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("selector", nargs="?", default="all", help=f"all, or one of: {', '.join(CHECKS)}")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mu", help="-4 mu(Sigma) and mu(Sigma)^2 from the universal-sheaf pipelines", epilog=INDETERMINATE_HELP)
    p.add_argument("--case", choices=("section", "extension", "general"), default="section")
    _add_surface_flags(p)
    p.add_argument("--e", type=int, default=None, help="fiber degree is 2e+1 (general case; symbolic if omitted)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("hom-dim", help="dim Hom(V, lambda) on a genus-one curve")
    p.add_argument("--curve", choices=[c.value for c in CurveKind], default="smooth")
    p.add_argument("--bundle", choices=("stable", "split", "nodal-vn"), required=True)
    p.add_argument("--e", type=int, required=True, help="V has degree 2e+1")
    p.add_argument("--d", type=int, required=True, help="degree of lambda")
    p.add_argument("--l1", type=int, default=None, help="degree of the smaller summand (split)")
    p.add_argument("--n", type=int, default=1, help="index n of V_{n,delta} (nodal-vn)")
    p.add_argument("--tag", choices=("L1", "L2"), default=None, help="lambda coincides with this summand or quotient")
    p.add_argument("--torsion-free", action="store_true", help="lambda is not locally free (nodal curve)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_hom_dim)

    p = sub.add_parser("mod-calc", help="p1 trace through elementary modifications of V0")
    _add_surface_flags(p, numeric_pg=True)
    p.add_argument("--e", type=int, default=0, help="fiber degree is 2e+1")
    p.add_argument("--step", type=_parse_step, action="append", metavar="M:DEG",
                   help="modify along a fiber of multiplicity M with quotient degree DEG (repeatable)")
    p.add_argument("--force", action="store_true", help="apply steps that are not allowable")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_mod_calc, m1=1, m2=1)

    p = sub.add_parser("table", help="tables of constants, cohomology, or Hom dimensions")
    p.add_argument("kind", choices=("constants", "cohomology", "hom"))
    p.add_argument("--max-m", type=int, default=9)
    p.add_argument("--pg", type=int, default=0)
    p.add_argument("--e", type=int, default=0)
    p.add_argument("--low", type=int, default=-3)
    p.add_argument("--high", type=int, default=4)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
