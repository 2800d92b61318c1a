"""Command-line entry point.

Exit codes: 0 on success, 2 for invalid input, 3 for numerical failures.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .coupled_grp import solve_coupled_grp
from .coupled_rp import CouplingData, coupling_residual, solve_coupled_rp
from .errors import ConfigError, CoupledGRPError, NumericalError
from .euler import GasParams, PrimState
from .grp import SideSlopes, solve_single_grp
from .harness import (convergence_study, load_config, simulate, write_convergence_csv,
                      write_run)
from .riemann import exact_rp

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


def _triple(text: str):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers: {text!r}")
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers: {text!r}")
    return vals


def _levels(text: str):
    try:
        if ".." in text:
            a, b = (int(v) for v in text.split(".."))
            return list(range(a, b + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"levels look like 3..6 or 3,4,5: {text!r}")


def _state(vals) -> PrimState:
    s = PrimState(*vals)
    if not (s.rho > 0 and s.p > 0):
        raise ConfigError("states need rho > 0 and p > 0")
    return s


def _fmt(x) -> str:
    return f"{x:.10g}"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coupledgrp",
                                 description="Coupled GRP for gas-generator interfaces")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", help="simulate a case and write snapshot CSVs")
    p.add_argument("config", help="config file or shipped case name (case1, case2, case3)")
    p.add_argument("--level", type=int)
    p.add_argument("--coupling", choices=("grp", "sync"))
    p.add_argument("--out", help="output directory (overrides [output] path)")

    p = sub.add_parser("convergence", help="errors and EoC against a fine reference")
    p.add_argument("config")
    p.add_argument("--levels", type=_levels, default=[3, 4, 5, 6])
    p.add_argument("--ref-level", type=int, default=8)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="CSV file; standard output if omitted")

    def gas(p):
        p.add_argument("--gamma", type=float, default=1.4)
        p.add_argument("--r-sgc", type=float, default=277.13333)

    p = sub.add_parser("riemann", help="exact Riemann problem star state")
    p.add_argument("--left", type=_triple, required=True, metavar="RHO,U,P")
    p.add_argument("--right", type=_triple, required=True, metavar="RHO,U,P")
    gas(p)

    p = sub.add_parser("couple", help="coupled Riemann problem at the interface")
    p.add_argument("--left", type=_triple, required=True, metavar="RHO,U,P")
    p.add_argument("--right", type=_triple, required=True, metavar="RHO,U,P")
    p.add_argument("--outtake", type=float, default=0.0)
    gas(p)

    p = sub.add_parser("grp", help="interface time derivatives from a (coupled) GRP")
    p.add_argument("--left", type=_triple, required=True, metavar="RHO,U,P")
    p.add_argument("--right", type=_triple, required=True, metavar="RHO,U,P")
    p.add_argument("--slopes-left", type=_triple, default=(0.0, 0.0, 0.0),
                   metavar="DRHO,DU,DP")
    p.add_argument("--slopes-right", type=_triple, default=(0.0, 0.0, 0.0),
                   metavar="DRHO,DU,DP")
    p.add_argument("--coupled", action="store_true",
                   help="solve the coupled GRP instead of the plain one")
    p.add_argument("--outtake", type=float, default=0.0)
    p.add_argument("--outtake-rate", type=float, default=0.0)
    gas(p)
    return ap


def _gas(args) -> GasParams:
    try:
        return GasParams(args.gamma, args.r_sgc)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    res = simulate(cfg, args.level, args.coupling)
    out = args.out or cfg.output_path
    index = write_run(out, res.snapshots)
    print(f"wrote {len(res.snapshots)} snapshots, index {index}")
    print(f"max coupling residual {res.max_residual:.3e}")
    return EXIT_OK


def cmd_convergence(args) -> int:
    cfg = load_config(args.config)
    rep = convergence_study(cfg, args.levels, args.ref_level, jobs=args.jobs)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        write_convergence_csv(args.out, rep)
    else:
        print("level,err,eoc")
        for lv, err, eoc in rep.rows:
            print(f"{lv},{err:.6e},{'' if eoc is None else f'{eoc:.4f}'}")
    return EXIT_OK


def cmd_riemann(args) -> int:
    g = _gas(args)
    sol = exact_rp(_state(args.left), _state(args.right), g)
    print("p_star,u_star,rho_star_L,rho_star_R,wave_L,wave_R")
    print(",".join([_fmt(sol.p_star), _fmt(sol.u_star), _fmt(sol.rho_star_L),
                    _fmt(sol.rho_star_R), *sol.wave_types]))
    return EXIT_OK


def cmd_couple(args) -> int:
    g = _gas(args)
    cpl = CouplingData(args.outtake)
    st = solve_coupled_rp(_state(args.left), _state(args.right), cpl, g)
    lt, rt = st.left_trace, st.right_trace
    res = coupling_residual(st, cpl)
    print("side,rho,u,p,wave")
    print(f"L,{_fmt(lt.rho)},{_fmt(lt.u)},{_fmt(lt.p)},{st.left_wave}")
    print(f"R,{_fmt(rt.rho)},{_fmt(rt.u)},{_fmt(rt.p)},{st.right_wave}")
    print("residual," + ",".join(f"{r:.3e}" for r in res))
    return EXIT_OK


def cmd_grp(args) -> int:
    g = _gas(args)
    uL, uR = _state(args.left), _state(args.right)
    sL, sR = SideSlopes(*args.slopes_left), SideSlopes(*args.slopes_right)
    if args.coupled:
        cpl = CouplingData(args.outtake, args.outtake_rate)
        _, dv = solve_coupled_grp(uL, uR, sL, sR, cpl, g)
        print("side,rho_t,u_t,p_t")
        print("L," + ",".join(_fmt(v) for v in dv.left))
        print("R," + ",".join(_fmt(v) for v in dv.right))
        print(f"det,{_fmt(dv.det)}")
    else:
        rho_t, u_t, p_t = solve_single_grp(uL, uR, sL, sR, g)
        print("rho_t,u_t,p_t")
        print(",".join(_fmt(v) for v in (rho_t, u_t, p_t)))
    return EXIT_OK


COMMANDS = {"run": cmd_run, "convergence": cmd_convergence, "riemann": cmd_riemann,
            "couple": cmd_couple, "grp": cmd_grp}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.cmd](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:  # invalid arguments surfaced by constructors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CoupledGRPError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
