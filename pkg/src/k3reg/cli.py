"""Command-line surface for the verification engine.

Exit codes: 0 pass/success, 1 verification fail, 2 inconclusive,
3 input error, 4 precision failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from mpmath import mp

from k3reg import bloch, chars, lfun, mpnum, units, verify
from k3reg.mpnum import PrecisionContext, PrecisionError

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3
EXIT_PRECISION = 4

MAX_DIGITS = 5000


def _resolve_case(path: str) -> str:
    import os
    if os.path.exists(path):
        return path
    name = path if path.endswith(".case") else path + ".case"
    pkg_file = resources.files("k3reg").joinpath("cases", name)
    if pkg_file.is_file():
        return str(pkg_file)
    raise FileNotFoundError(f"case file not found: {path}")


def _context(args) -> PrecisionContext:
    digits = args.digits
    if digits is None:
        return None
    if digits > MAX_DIGITS:
        raise PrecisionError(f"requested {digits} digits exceeds the supported "
                             f"maximum of {MAX_DIGITS}")
    return PrecisionContext(digits, max(15, digits // 4))


def _load(args) -> verify.CaseFile:
    return verify.load_case(_resolve_case(args.case))


def cmd_verify(args) -> int:
    case = _load(args)
    ctx = _context(args)
    variants = args.variant if args.variant else None
    report = verify.run_case(case, ctx, variants=variants)
    print(report.render_text())
    if args.json:
        with open(args.json, "w") as f:
            json.dump(report.to_dict(), f, indent=1)
        print(f"report written to {args.json}")
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL,
            "inconclusive": EXIT_INCONCLUSIVE}.get(report.status, EXIT_PRECISION)


def cmd_lfun(args) -> int:
    case = _load(args)
    ctx = _context(args) or case.precision()
    built = verify.build_case(case, ctx)
    L = built.lfunctions.get(args.char)
    if L is None:
        print(f"no L-function for gamma index {args.char}; available: "
              f"{sorted(built.lfunctions)}", file=sys.stderr)
        return EXIT_INPUT
    with ctx.workprec():
        res = L.evaluate(mp.mpf(args.s), args.deriv, ctx)
        if res.is_structural_zero:
            print(f"L^({args.deriv})({args.s}) = 0 (structural zero of order "
                  f"{res.structural_zero_order})")
        else:
            print(mp.nstr(res.value, ctx.working_digits))
    return EXIT_PASS


def cmd_roots(args) -> int:
    case = _load(args)
    ctx = _context(args) or case.precision()
    built = verify.build_case(case, ctx)
    rd = built.F.embeddings(ctx)
    print(f"signature (r1, r2) = {rd.signature}")
    with ctx.workprec():
        for i, r in enumerate(rd.roots):
            mark = " <- sigma" if i == built.sigma else ""
            print(f"  [{i}] {mp.nstr(r, min(30, ctx.working_digits))}{mark}")
    return EXIT_PASS


def cmd_group(args) -> int:
    case = _load(args)
    built = verify.build_case(case, _context(args))
    if built.group is None:
        print("case runs in subfield mode; the abstract group has "
              f"{built.table.group.order} elements and {len(built.table.group.classes)} classes")
        return EXIT_PASS
    G = built.group
    print(f"order {G.order}, {len(G.classes)} conjugacy classes")
    for c in G.classes:
        print(f"  class of element order {G.element_order(c)}: size {len(G.class_members[c])}")
    print(f"tau_sigma has order {G.element_order(built.tau)}")
    return EXIT_PASS


def cmd_units(args) -> int:
    case = _load(args)
    built = verify.build_case(case, _context(args))
    print(f"{len(built.candidates)} exceptional-unit kernel candidates")
    if built.lattice:
        print(f"lattice rank {len(built.lattice.basis)}, torsion order {built.lattice.w}")
    return EXIT_PASS


def cmd_wedge(args) -> int:
    case = _load(args)
    built = verify.build_case(case, _context(args))
    tors, free = built.wedge.invariants()
    print(f"wedge-square presentation: free rank {free}, torsion divisors {list(tors)}")
    return EXIT_PASS


def cmd_kernel(args) -> int:
    case = _load(args)
    built = verify.build_case(case, _context(args))
    basis = bloch.kernel_search(built.candidates, built.lattice, built.wedge)
    if not basis:
        print("kernel is trivial over the given candidates")
        return EXIT_INCONCLUSIVE
    for i, el in enumerate(basis):
        coeffs = {j: int(v) for j, (k, v) in enumerate(el.xi.items())}
        print(f"  kernel[{i}]: coefficients {sorted(el.xi.terms.values())} "
              f"({len(el.xi)} terms), delta = 0 exactly")
    return EXIT_PASS


def cmd_recognize(args) -> int:
    case = _load(args)
    ctx = _context(args) or case.precision()
    built = verify.build_case(case, ctx)
    with ctx.workprec():
        val = mp.mpc(complex(args.value))
        rec = verify._recognize_e(built, val)
        if rec is None:
            print("no algebraic relation found at this precision")
            return EXIT_INCONCLUSIVE
        e, coeffs, resid = rec
        print(f"coefficients over the character-field basis: {[str(c) for c in coeffs]}")
        print(f"residual {mp.nstr(resid, 3)}")
    return EXIT_PASS


def cmd_report(args) -> int:
    args.json = args.out
    return cmd_verify(args)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="k3reg",
        description="numerically verify special-element identities relating "
                    "dilogarithm regulators and Artin L-derivatives at s = -1")
    ap.add_argument("--digits", type=int, default=None,
                    help="working decimal digits (default: from the case file)")
    ap.add_argument("--threads", type=int, default=1,
                    help="worker parallelism capability (this build runs serially; "
                         "values > 1 are accepted and currently equivalent to 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the full conjecture verification")
    p.add_argument("case")
    p.add_argument("--variant", action="append",
                   choices=["projector", "z_decomposition", "combined"],
                   help="restrict to specific beta constructions")
    p.add_argument("--json", help="also write the machine-readable report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lfun", help="evaluate one L-function derivative")
    p.add_argument("case")
    p.add_argument("--s", default="-1", help="evaluation point (real)")
    p.add_argument("--deriv", type=int, default=1, help="derivative order")
    p.add_argument("--char", type=int, default=1,
                   help="gamma index of the character twist (1 = identity)")
    p.set_defaults(func=cmd_lfun)

    p = sub.add_parser("roots", help="print the embeddings of the field")
    p.add_argument("case")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("group", help="print Galois-group data")
    p.add_argument("case")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("units", help="run the exceptional-unit search")
    p.add_argument("case")
    p.set_defaults(func=cmd_units)

    p = sub.add_parser("wedge", help="print the wedge-square presentation invariants")
    p.add_argument("case")
    p.set_defaults(func=cmd_wedge)

    p = sub.add_parser("kernel", help="print the Bloch-kernel basis")
    p.add_argument("case")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("recognize", help="recognize a number over the character-field basis")
    p.add_argument("case")
    p.add_argument("--value", required=True, help="complex value, e.g. '2.2360679'")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("report", help="verify and write the report to a file")
    p.add_argument("case")
    p.add_argument("--out", required=True)
    p.add_argument("--variant", action="append",
                   choices=["projector", "z_decomposition", "combined"])
    p.set_defaults(func=cmd_report)

    args = ap.parse_args(argv)
    if args.threads < 1:
        print("--threads must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except FileNotFoundError as ex:
        print(f"input error: {ex}", file=sys.stderr)
        return EXIT_INPUT
    except verify.CaseError as ex:
        print(f"case error: {ex}", file=sys.stderr)
        return EXIT_INPUT
    except verify.Inconclusive as ex:
        print(f"inconclusive: {ex}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except PrecisionError as ex:
        print(f"precision failure: {ex}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
