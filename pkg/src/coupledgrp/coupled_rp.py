"""Coupled half-Riemann problem for the gas-generator interface.

The left trace lies on the forward 1-curve of the left state, the right
trace on the backward 3-curve of the right state, with its density replaced
across a contact so that it matches the left trace.  Both are parametrised by
a common interface pressure, reducing the coupling conditions

    p_bar = p,  rho_bar = rho,  u_bar = u + E / rho_bar

to a scalar root-find.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import NegativeVelocity, NoConvergence, SupersonicInterface, VacuumState
from .euler import GasParams, PrimState
from .riemann import RAREFACTION, SHOCK, star_density, wave_function


@dataclass(frozen=True)
class CouplingData:
    outtake: float = 0.0
    outtake_rate: float = 0.0

    def __post_init__(self):
        if self.outtake < 0.0:
            raise ValueError("outtake must be non-negative")


@dataclass(frozen=True)
class CoupledStarState:
    left_trace: PrimState
    right_trace: PrimState
    left_wave: str
    right_wave: str
    # density behind the 3-wave, i.e. right of the contact in the right domain
    rho_behind_right_wave: float


def _branches(p, uL, uR, g):
    fl, dfl = wave_function(p, uL.rho, uL.p, g)
    fr, dfr = wave_function(p, uR.rho, uR.p, g)
    rho_bar = star_density(p, uL.rho, uL.p, g)
    return float(uL.u - fl), float(uR.u + fr), float(rho_bar)


def interface_residual(p_i: float, uL: PrimState, uR: PrimState, outtake: float,
                       g: GasParams) -> float:
    """``F(p_I) = u_bar(p_I) - u(p_I) - E / rho_bar(p_I)``."""
    ubar, u, rho_bar = _branches(p_i, uL, uR, g)
    return ubar - u - outtake / rho_bar


def solve_coupled_rp(uL: PrimState, uR: PrimState, cpl: CouplingData,
                     g: GasParams, check: bool = True) -> CoupledStarState:
    e = cpl.outtake
    if e == 0.0 and uL == uR:
        return CoupledStarState(uL, uR, RAREFACTION, RAREFACTION, uR.rho)

    def F(p):
        return interface_residual(p, uL, uR, e, g)

    p_floor = max(1e-10, 1e-6 * min(uL.p, uR.p))
    # F -> -inf for large p; walk down from above until F changes sign so
    # that the root closest to the data is bracketed (F also turns negative
    # near vacuum when E > 0).
    hi = 10.0 * max(uL.p, uR.p)
    while F(hi) > 0.0:
        hi *= 4.0
        if hi > 1e30:
            raise NoConvergence("no upper bracket for the interface pressure")
    lo = hi
    while True:
        lo *= 0.7
        if lo < p_floor:
            raise VacuumState("coupling conditions cannot be met at positive pressure")
        if F(lo) > 0.0:
            break
        hi = lo
    tol = 1e-12 * max(1.0, abs(uL.u) + abs(uR.u))
    try:
        p_i = brentq(F, lo, hi, xtol=1e-14 * hi, rtol=4 * np.finfo(float).eps,
                     maxiter=200)
    except RuntimeError as exc:  # pragma: no cover
        raise NoConvergence(str(exc)) from exc
    if abs(F(p_i)) > max(tol, 1e-9):
        raise NoConvergence(f"coupled RP residual {F(p_i)} above tolerance")

    ubar, u, rho_bar = _branches(p_i, uL, uR, g)
    # put the velocity defect on the right trace so that the coupling
    # conditions hold to round-off
    u = ubar - e / rho_bar
    left = PrimState(rho_bar, ubar, p_i)
    right = PrimState(rho_bar, u, p_i)
    st = CoupledStarState(
        left, right,
        SHOCK if p_i > uL.p else RAREFACTION,
        SHOCK if p_i > uR.p else RAREFACTION,
        float(star_density(p_i, uR.rho, uR.p, g)),
    )
    if check:
        check_regime(st, g)
    return st


def check_regime(st: CoupledStarState, g: GasParams):
    for name, s in (("left", st.left_trace), ("right", st.right_trace)):
        c = math.sqrt(g.gamma * s.p / s.rho)
        if abs(s.u) >= c:
            raise SupersonicInterface(f"{name} trace |u|={abs(s.u):.6g} >= c={c:.6g}")
        if s.u < 0.0:
            raise NegativeVelocity(f"{name} trace velocity {s.u:.6g} < 0")


def coupling_residual(st: CoupledStarState, cpl: CouplingData) -> np.ndarray:
    lb, r = st.left_trace, st.right_trace
    return np.array([lb.p - r.p, lb.rho - r.rho, lb.u - r.u - cpl.outtake / lb.rho])
