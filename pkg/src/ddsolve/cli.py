"""Command-line interface.

Subcommands::

    check FILE                         integrability check
    solve FILE [--assume-irreducible] [--json OUT]
    verify FILE SOLFILE [--terms N] [--t0 Q]
    tools {disp|standard|split|moser|ratsol|petkovsek|hyperexp} ...

Exit codes: 0 = Solved / pass; 1 = NoSolution / NoLiouvillianSolutions /
failed verification; 2 = Unsupported / Inconclusive; 3 = input error.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys

import sympy as sp

from .closedform import UnsupportedCase, hyperexp_solutions, petkovsek
from .difftools import dispersion, split_alpha_beta_power, standard_decompose
from .fields import TRIVIAL_TOWER, mat_reduce, treduce
from .files import (SchemaError, outcome_to_dict, read_solution, read_system,
                    write_solution)
from .moser import ReductionStalled, moser_reduce, ord_and_moser
from .parsing import ParseError, parse_ratfunc, print_ratfunc
from .procedures import solve_liouvillian
from .ratsol import rational_solutions
from .sequences import verify_certificates, verify_numeric_window

__all__ = ["main"]

EXIT_SOLVED = 0
EXIT_NO_SOLUTION = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3

_VERDICT_EXIT = {
    "Solved": EXIT_SOLVED,
    "NoSolution": EXIT_NO_SOLUTION,
    "NoLiouvillianSolutions": EXIT_NO_SOLUTION,
    "Unsupported": EXIT_INCONCLUSIVE,
    "Inconclusive": EXIT_INCONCLUSIVE,
}


def _print_matrix(name: str, M: sp.Matrix, tower=TRIVIAL_TOWER, out=None):
    out = out or _sys.stdout
    print(f"{name} =", file=out)
    for i in range(M.shape[0]):
        row = "  ".join(print_ratfunc(M[i, j], tower)
                        for j in range(M.shape[1]))
        print(f"  [ {row} ]", file=out)


def _cmd_check(args) -> int:
    try:
        system = read_system(args.file)
    except SchemaError as err:
        print(f"input error: {err}", file=_sys.stderr)
        return EXIT_INPUT_ERROR
    from .procedures import check_integrability
    ok, residual = check_integrability(system.A, system.B)
    if ok:
        print("integrable: sigma(B) = delta(A)A^-1 + ABA^-1 holds")
        return EXIT_SOLVED
    try:
        system.validate()
    except ValueError:
        print("not integrable; residual sigma(B) - delta(A)A^-1 - ABA^-1:")
        _print_matrix("residual", residual)
        return EXIT_INPUT_ERROR
    print(f"integrable at the sigma^{system.integrability_level} level only;"
          " residual of the sigma-level identity:")
    _print_matrix("residual", residual)
    return EXIT_SOLVED


def _human_report(outcome):
    print(f"verdict: {outcome.kind}"
          + (f" ({outcome.provenance})" if outcome.provenance else ""))
    if outcome.reason:
        print(f"reason: {outcome.reason}")
    rep = outcome.report or {}
    for sub in ("dp1", "dp2"):
        if sub in rep:
            d = rep[sub]
            print(f"{sub}: {d.get('kind')} stages={d.get('stages')}"
                  + (f" [{d.get('reason')}]" if d.get("reason") else ""))
    for note in rep.get("assumptions", []):
        print(f"assumption: {note}")
    nf = outcome.normal_form
    if nf is not None:
        tw = nf.tower
        print(f"alpha = {print_ratfunc(nf.alpha, tw)}")
        for i, b in enumerate(nf.betas):
            print(f"beta_{i + 1} = {print_ratfunc(b, tw)}")
        for i, c in enumerate(nf.cs_or_bhats):
            print(f"c_{i + 1} = {print_ratfunc(c, tw)}")
        if nf.ell != 1:
            print(f"interlacing period = {nf.ell}, j0 = {nf.j0}")
        if "G" in rep:
            _print_matrix("G", rep["G"], tw)
        if "Bbar" in rep:
            _print_matrix("Bbar", rep["Bbar"], tw)
    for k, sol in enumerate(outcome.solutions or []):
        if sol.kind == "Interlaced":
            for i, W, cert in sol.components:
                print(f"solution {k} (interlaced, class {i} mod "
                      f"{cert.sigma_step}): sigma-ratio "
                      f"{print_ratfunc(cert.sigma_ratio, sol.tower)}, "
                      f"delta-ratio "
                      f"{print_ratfunc(cert.delta_ratio, sol.tower)}")
        else:
            print(f"solution {k} (hypergeometric): sigma-ratio "
                  f"{print_ratfunc(sol.cert.sigma_ratio, sol.tower)}, "
                  f"delta-ratio "
                  f"{print_ratfunc(sol.cert.delta_ratio, sol.tower)}")
    if "verification" in rep:
        print(f"verified: {rep['verification']}")


def _cmd_solve(args) -> int:
    try:
        system = read_system(args.file)
    except SchemaError as err:
        print(f"input error: {err}", file=_sys.stderr)
        return EXIT_INPUT_ERROR
    if args.assume_irreducible:
        system.assume_irreducible = True
    try:
        outcome = solve_liouvillian(system)
    except ValueError as err:
        print(f"input error: {err}", file=_sys.stderr)
        return EXIT_INPUT_ERROR
    _human_report(outcome)
    if args.json:
        write_solution(args.json, outcome)
    return _VERDICT_EXIT.get(outcome.kind, EXIT_INCONCLUSIVE)


def _cmd_verify(args) -> int:
    try:
        system = read_system(args.file)
        _, sols, _ = read_solution(args.solfile)
    except SchemaError as err:
        print(f"input error: {err}", file=_sys.stderr)
        return EXIT_INPUT_ERROR
    if not sols:
        print("no solutions in file")
        return EXIT_NO_SOLUTION
    t0 = sp.Rational(args.t0) if args.t0 is not None else None
    all_ok = True
    for k, sol in enumerate(sols):
        res = verify_certificates(system, sol)
        for f in res.failures:
            print(f"solution {k}: FAIL {f}")
        ok = res.ok
        if ok and t0 is not None:
            resn = verify_numeric_window(system, sol, t0, terms=args.terms)
            for f in resn.failures:
                print(f"solution {k}: FAIL {f}")
            ok = resn.ok
        print(f"solution {k}: {'ok' if ok else 'FAILED'}")
        all_ok = all_ok and ok
    return EXIT_SOLVED if all_ok else EXIT_NO_SOLUTION


# ---------------------------------------------------------------------------
# tools

def _read_matrix_file(path: str) -> sp.Matrix:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        rows = data["M"]
        return sp.Matrix([[parse_ratfunc(e) for e in row] for row in rows])
    except (OSError, json.JSONDecodeError, KeyError, TypeError,
            ParseError) as err:
        raise SchemaError("/M", str(err))


def _cmd_tools(args) -> int:
    try:
        return _dispatch_tool(args)
    except (SchemaError, ParseError, ZeroDivisionError) as err:
        print(f"input error: {err}", file=_sys.stderr)
        return EXIT_INPUT_ERROR
    except (UnsupportedCase, ReductionStalled) as err:
        print(f"unsupported: {err}", file=_sys.stderr)
        return EXIT_INCONCLUSIVE


def _dispatch_tool(args) -> int:
    if not args.expr:
        raise SchemaError("", "missing tool arguments")
    if args.tool == "disp":
        p = parse_ratfunc(args.expr[0])
        print(dispersion(p, args.step))
        return EXIT_SOLVED
    if args.tool == "standard":
        f = parse_ratfunc(args.expr[0])
        sd = standard_decompose(f, args.step)
        print(f"g = {print_ratfunc(sd.g)}")
        print(f"standard = {print_ratfunc(sd.standard_part)}")
        return EXIT_SOLVED
    if args.tool == "split":
        a = parse_ratfunc(args.expr[0])
        n = int(args.expr[1])
        res = split_alpha_beta_power(a, n)
        if res is None:
            print("no alpha(x)^n * beta(t) split")
            return EXIT_NO_SOLUTION
        alpha, beta = res
        print(f"alpha = {print_ratfunc(alpha)}")
        print(f"beta = {print_ratfunc(beta)}")
        return EXIT_SOLVED
    if args.tool == "moser":
        M = _read_matrix_file(args.expr[0])
        rep = moser_reduce(M)
        ordv, _, _ = ord_and_moser(rep.reduced)
        print(f"ord = {ordv}")
        print(f"moser_order = {rep.moser_order}")
        _print_matrix("gauge", rep.gauge)
        _print_matrix("reduced", rep.reduced)
        return EXIT_SOLVED
    if args.tool == "ratsol":
        M = _read_matrix_file(args.expr[0])
        basis = rational_solutions(M, args.step, TRIVIAL_TOWER).basis
        if not basis:
            print("no nonzero rational solutions")
            return EXIT_NO_SOLUTION
        for k, V in enumerate(basis):
            print(f"V_{k} = [ "
                  + "  ".join(print_ratfunc(e) for e in V) + " ]")
        return EXIT_SOLVED
    if args.tool == "petkovsek":
        ps = [parse_ratfunc(s) for s in args.expr]
        ratios = petkovsek(ps, args.step)
        if not ratios:
            print("no hypergeometric solutions")
            return EXIT_NO_SOLUTION
        for r in ratios:
            print(print_ratfunc(r))
        return EXIT_SOLVED
    if args.tool == "hyperexp":
        M = _read_matrix_file(args.expr[0])
        cands = hyperexp_solutions(M)
        if not cands:
            print("no hyperexponential solutions")
            return EXIT_NO_SOLUTION
        for c in cands:
            vec = "  ".join(print_ratfunc(e, c.tower) for e in c.V)
            print(f"certificate = {print_ratfunc(c.certificate, c.tower)}"
                  f"   V = [ {vec} ]")
        return EXIT_SOLVED
    raise SchemaError("", f"unknown tool {args.tool}")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ddsolve",
        description="Liouvillian solutions of integrable difference-"
                    "differential systems over Q(x, t).")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="integrability check")
    p.add_argument("file")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("solve", help="full decision procedure")
    p.add_argument("file")
    p.add_argument("--assume-irreducible", action="store_true")
    p.add_argument("--json", metavar="OUT", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="re-verify a solution file")
    p.add_argument("file")
    p.add_argument("solfile")
    p.add_argument("--terms", type=int, default=30)
    p.add_argument("--t0", default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("tools", help="subroutine access")
    p.add_argument("--step", type=int, default=1)
    p.add_argument("tool", choices=["disp", "standard", "split", "moser",
                                    "ratsol", "petkovsek", "hyperexp"])
    # REMAINDER so expressions may start with '-'; give --step before the
    # tool name
    p.add_argument("expr", nargs=argparse.REMAINDER,
                   help="expressions, or a matrix file for "
                        "moser/ratsol/hyperexp")
    p.set_defaults(func=_cmd_tools)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
