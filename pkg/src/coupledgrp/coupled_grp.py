"""Coupled GRP at the gas-generator interface.

Unknowns are ``(u_bar_t, u_t, p_bar_t)``.  The first two rows are the
Eulerian GRP relations of the 1-wave (left domain) and the 3-wave (right
domain), the third is the time-differentiated momentum-jump condition with
the left density derivative eliminated through its own GRP relation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coupled_rp import CoupledStarState, CouplingData, solve_coupled_rp
from .errors import SingularCoupling
from .euler import GasParams, PrimState
from .grp import GrpSideCoeffs, SideSlopes, side_coeffs


@dataclass(frozen=True)
class CoupledDerivatives:
    d_ubar_dt: float
    d_u_dt: float
    d_pbar_dt: float
    d_p_dt: float
    d_rhobar_dt: float
    d_rho_dt: float
    det: float = float("nan")

    @property
    def left(self) -> PrimState:
        return PrimState(self.d_rhobar_dt, self.d_ubar_dt, self.d_pbar_dt)

    @property
    def right(self) -> PrimState:
        return PrimState(self.d_rho_dt, self.d_u_dt, self.d_p_dt)


def derivative_identities(dv: CoupledDerivatives, rho_bar: float, cpl: CouplingData) -> np.ndarray:
    """Residuals of the time-differentiated coupling conditions."""
    return np.array([
        dv.d_pbar_dt - dv.d_p_dt,
        dv.d_rhobar_dt - dv.d_rho_dt,
        dv.d_ubar_dt - dv.d_u_dt - cpl.outtake_rate / rho_bar
        + cpl.outtake / rho_bar ** 2 * dv.d_rhobar_dt,
    ])


@dataclass(frozen=True)
class InterfaceBoundarySeries:
    t0: float
    t1: float
    left_star: PrimState
    right_star: PrimState
    left_deriv: PrimState
    right_deriv: PrimState
    # (E, E') at t0; when set, the right trace is slaved to the left one
    coupling: tuple | None = None

    def __post_init__(self):
        if not self.t1 > self.t0:
            raise ValueError("window must have t1 > t0")

    def left_at(self, t: float) -> PrimState:
        dt = t - self.t0
        return PrimState(*(s + dt * d for s, d in zip(self.left_star, self.left_deriv)))

    def right_at(self, t: float) -> PrimState:
        dt = t - self.t0
        if self.coupling is not None:
            # exact coupling conditions at every t; tangent to the linear
            # right series at t0 by the derivative identities
            rho, u_bar, p = self.left_at(t)
            e = self.coupling[0] + dt * self.coupling[1]
            return PrimState(rho, u_bar - e / rho, p)
        return PrimState(*(s + dt * d for s, d in zip(self.right_star, self.right_deriv)))

    def trace(self, side: str, t: float) -> PrimState:
        return self.left_at(t) if side == "L" else self.right_at(t)


def assemble_matrix(cl: GrpSideCoeffs, cr: GrpSideCoeffs, star: CoupledStarState,
                    cpl: CouplingData):
    rho_bar = star.left_trace.rho
    e_fac = cpl.outtake / rho_bar ** 2
    mat = np.array([
        [cl.h, 0.0, cl.k],
        [0.0, cr.h, cr.k],
        [1.0 - e_fac * cl.g_u / cl.g_rho, -1.0, -e_fac * cl.g_p / cl.g_rho],
    ])
    rhs = np.array([cl.q, cr.q, cpl.outtake_rate / rho_bar - e_fac * cl.f / cl.g_rho])
    return mat, rhs


def _det3(m) -> float:
    return float(m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
                 - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
                 + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def det_check(mat) -> float:
    det = _det3(mat)
    norms = np.prod(np.linalg.norm(mat, axis=1))
    if not abs(det) >= 1e-12 * norms:
        raise SingularCoupling(f"coupled GRP matrix is singular (det={det:.3e})")
    return det


def _cramer(mat, rhs, det):
    out = []
    for j in range(3):
        mj = mat.copy()
        mj[:, j] = rhs
        out.append(_det3(mj) / det)
    return out


def solve_coupled_grp(uL: PrimState, uR: PrimState, slopesL: SideSlopes,
                      slopesR: SideSlopes, cpl: CouplingData, g: GasParams):
    """One step of the coupled generalized Riemann solver.

    Returns the associated coupled RP solution and the interface time
    derivatives on both sides.
    """
    star = solve_coupled_rp(uL, uR, cpl, g)
    lt, rt = star.left_trace, star.right_trace
    behind_3 = PrimState(star.rho_behind_right_wave, rt.u, rt.p)
    cl = side_coeffs(uL, lt, lt, SideSlopes(*slopesL), "L", g)
    cr = side_coeffs(uR, behind_3, rt, SideSlopes(*slopesR), "R", g)
    mat, rhs = assemble_matrix(cl, cr, star, cpl)
    det = det_check(mat)
    ubar_t, u_t, pbar_t = _cramer(mat, rhs, det)
    rhobar_t = (cl.f - cl.g_u * ubar_t - cl.g_p * pbar_t) / cl.g_rho
    return star, CoupledDerivatives(ubar_t, u_t, pbar_t, pbar_t, rhobar_t, rhobar_t, det)


def boundary_series(star: CoupledStarState, derivs: CoupledDerivatives, t0: float,
                    t1: float, cpl: CouplingData | None = None) -> InterfaceBoundarySeries:
    """Linear-in-time traces on [t0, t1].

    With ``cpl`` the right trace is derived from the left one through the
    coupling conditions, so they hold exactly throughout the window.
    """
    coupling = None if cpl is None else (cpl.outtake, cpl.outtake_rate)
    return InterfaceBoundarySeries(t0, t1, star.left_trace, star.right_trace,
                                   derivs.left, derivs.right, coupling)


def constant_series(star: CoupledStarState, t0: float, t1: float) -> InterfaceBoundarySeries:
    zero = PrimState(0.0, 0.0, 0.0)
    return InterfaceBoundarySeries(t0, t1, star.left_trace, star.right_trace, zero, zero)


def rarefaction_det(rho_bar, c_bar, u_bar, rho, c, u, outtake) -> float:
    """Closed-form determinant when both waves are rarefactions.

    With the rarefaction density coefficients (c^2, 0, -1) the (3,3) entry is
    ``+E/(rho_bar c_bar)^2``, so the outtake term raises the determinant; it
    stays negative because ``E <= rho_bar u_bar < rho_bar c_bar``.
    """
    h_l = (c_bar - u_bar) / c_bar
    k_l = (c_bar - u_bar) / (rho_bar * c_bar ** 2)
    h_r = (c + u) / c
    k_r = -(c + u) / (rho * c ** 2)
    return -k_l * h_r + h_l * k_r + outtake / (rho_bar * c_bar) ** 2 * h_l * h_r
