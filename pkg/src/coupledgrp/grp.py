"""Generalized Riemann problem (GRP) for the planar ideal-gas Euler equations.

Each wave adjacent to the t-axis yields one linear relation between the
material derivatives of velocity and pressure in the intermediate region,

    a (Du/Dt)_* + b (Dp/Dt)_* = d,

which is then rewritten in terms of partial time derivatives.

Rarefactions are resolved in characteristic coordinates through the fan.
With theta = c_*/c_K the left relation has a = 1, b = 1/(rho_* c_*) and

    d = theta^(2g/(g-1)) T s' (g-1)/(3g-1)
        + theta^((g+1)/(2(g-1))) (2g T s'/(3g-1) - c_K psi')

with T s' = (p' - c^2 rho')/((g-1) rho) and psi' = u' + 2c'/(g-1); the right
relation is its mirror image.  Shocks are resolved by differentiating the
Rankine-Hugoniot relations along the shock path.

Slopes are one-sided spatial derivatives of the primitive variables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import SingularSystem, SonicFan
from .euler import GasParams, PrimState
from .riemann import RAREFACTION, SHOCK, exact_rp, shock_speed, star_density, wave_function


class SideSlopes(NamedTuple):
    d_rho_dx: float = 0.0
    d_u_dx: float = 0.0
    d_p_dx: float = 0.0


ZERO_SLOPES = SideSlopes()


@dataclass(frozen=True)
class GrpSideCoeffs:
    a: float
    b: float
    d: float
    h: float
    k: float
    q: float
    g_rho: float
    g_u: float
    g_p: float
    f: float
    wave_type: str
    side: str


def _time_derivs(w: PrimState, s: SideSlopes, g: GasParams):
    """Partial time derivatives of smooth initial data from the PDE."""
    rho, u, p = w
    rho_t = -(u * s.d_rho_dx + rho * s.d_u_dx)
    u_t = -(u * s.d_u_dx + s.d_p_dx / rho)
    p_t = -(u * s.d_p_dx + g.gamma * p * s.d_u_dx)
    return rho_t, u_t, p_t


def _shock_path_derivs(w, s, sigma, g):
    """Derivatives of the pre-shock state along ``dx/dt = sigma``."""
    rho_t, u_t, p_t = _time_derivs(w, s, g)
    return (rho_t + sigma * s.d_rho_dx, u_t + sigma * s.d_u_dx,
            p_t + sigma * s.d_p_dx)


def _hugoniot_partials(p, w: PrimState, g: GasParams):
    """``f_K`` and its partial derivatives in (p, p_K, rho_K) on the shock branch."""
    gm = g.gamma
    mu2 = (gm - 1.0) / (gm + 1.0)
    a_k = 2.0 / ((gm + 1.0) * w.rho)
    b_k = mu2 * w.p
    q = math.sqrt(a_k / (p + b_k))
    f = (p - w.p) * q
    f_p = q * (1.0 - 0.5 * (p - w.p) / (p + b_k))
    f_pk = -q * (1.0 + 0.5 * mu2 * (p - w.p) / (p + b_k))
    f_rhok = -0.5 * f / w.rho
    return f, f_p, f_pk, f_rhok


def _rho_hugoniot_partials(p, w: PrimState, g: GasParams):
    """Partials of the post-shock density in (p, p_K, rho_K)."""
    gm = g.gamma
    mu2 = (gm - 1.0) / (gm + 1.0)
    r = p / w.p
    rho_star = w.rho * (r + mu2) / (mu2 * r + 1.0)
    h_p = w.rho / w.p * (1.0 - mu2 * mu2) / (mu2 * r + 1.0) ** 2
    return h_p, -h_p * r, rho_star / w.rho


def lagrangian_coeffs(init: PrimState, star: PrimState, slopes: SideSlopes,
                      side: str, g: GasParams, wave_type: str | None = None):
    """Return ``(a, b, d)`` for the wave on ``side`` ("L" or "R").

    ``star`` is the state directly behind the wave.
    """
    gm = g.gamma
    if wave_type is None:
        wave_type = SHOCK if star.p > init.p else RAREFACTION
    sgn = 1.0 if side == "L" else -1.0
    rho_s, u_s, p_s = star
    c_s = math.sqrt(gm * p_s / rho_s)

    if wave_type == RAREFACTION:
        rho, _, p = init
        c = math.sqrt(gm * p / rho)
        theta = c_s / c
        ts = (slopes.d_p_dx - c * c * slopes.d_rho_dx) / ((gm - 1.0) * rho)
        dc = 0.5 * c * (slopes.d_p_dx / p - slopes.d_rho_dx / rho)
        riem = slopes.d_u_dx + sgn * 2.0 * dc / (gm - 1.0)
        d = (theta ** (2.0 * gm / (gm - 1.0)) * ts * (gm - 1.0) / (3.0 * gm - 1.0)
             + theta ** ((gm + 1.0) / (2.0 * (gm - 1.0)))
             * (2.0 * gm * ts / (3.0 * gm - 1.0) - sgn * c * riem))
        return 1.0, sgn / (rho_s * c_s), d

    family = 1 if side == "L" else 3
    sigma = shock_speed(init, p_s, family, g)
    _, f_p, f_pk, f_rhok = _hugoniot_partials(p_s, init, g)
    drho, du, dp = _shock_path_derivs(init, slopes, sigma, g)
    rel = sigma - u_s
    a = 1.0 - sgn * f_p * rel * rho_s
    b = sgn * f_p - rel / (rho_s * c_s * c_s)
    d = du - sgn * (f_pk * dp + f_rhok * drho)
    return a, b, d


def eulerian_coeffs(a: float, b: float, d: float, region: PrimState, g: GasParams):
    """Rewrite ``a Du/Dt + b Dp/Dt = d`` as ``h u_t + k p_t = q``.

    ``region`` is the intermediate state in which the partial derivatives
    are taken (the state on the t-axis).
    """
    rho, u, p = region
    c2 = g.gamma * p / rho
    return a - rho * u * b, b - u / (rho * c2) * a, (1.0 - u * u / c2) * d


def density_coeffs(init: PrimState, star: PrimState, slopes: SideSlopes,
                   wave_type: str, side: str, g: GasParams):
    """Coefficients of ``g_rho rho_t + g_u u_t + g_p p_t = f`` behind a wave."""
    gm = g.gamma
    rho_s, u_s, p_s = star
    c2 = gm * p_s / rho_s
    if wave_type == RAREFACTION:
        # entropy gradient is carried through the fan in mass coordinates
        ent = slopes.d_p_dx / init.p - gm * slopes.d_rho_dx / init.rho
        f = u_s * p_s * rho_s / init.rho * ent
        return c2, 0.0, -1.0, f

    family = 1 if side == "L" else 3
    sigma = shock_speed(init, p_s, family, g)
    h_p, h_pk, h_rhok = _rho_hugoniot_partials(p_s, init, g)
    drho, _, dp = _shock_path_derivs(init, slopes, sigma, g)
    m2 = u_s * u_s / c2
    # (u - sigma) rho_t + P Dp/Dt + U Du/Dt = u K
    coef_p = sigma / c2 - u_s * h_p
    coef_u = u_s * h_p * (sigma - u_s) * rho_s
    known = u_s * (h_rhok * drho + h_pk * dp)
    g_rho = u_s - sigma
    g_u = (coef_u - coef_p * u_s * rho_s) / (1.0 - m2)
    g_p = (coef_p - coef_u * u_s / (rho_s * c2)) / (1.0 - m2)
    scale = c2 / g_rho
    return c2, g_u * scale, g_p * scale, known * scale


def side_coeffs(init: PrimState, star: PrimState, region: PrimState,
                slopes: SideSlopes, side: str, g: GasParams) -> GrpSideCoeffs:
    wave_type = SHOCK if star.p > init.p else RAREFACTION
    a, b, d = lagrangian_coeffs(init, star, slopes, side, g, wave_type)
    h, k, q = eulerian_coeffs(a, b, d, region, g)
    g_rho, g_u, g_p, f = density_coeffs(init, star, slopes, wave_type, side, g)
    return GrpSideCoeffs(a, b, d, h, k, q, g_rho, g_u, g_p, f, wave_type, side)


def check_axis_intermediate(sol, left: PrimState, right: PrimState, g: GasParams):
    (lt, rt), (ls, rs) = sol.wave_types, sol.wave_speeds
    if lt == SHOCK and ls[0] >= 0.0 or lt == RAREFACTION and ls[0] >= 0.0:
        raise SonicFan("1-wave does not move left: t-axis is not in the star region")
    if lt == RAREFACTION and ls[1] > 0.0:
        raise SonicFan("t-axis lies inside the 1-rarefaction")
    if rs[0] <= 0.0:
        raise SonicFan("3-wave does not move right: t-axis is not in the star region")
    if rt == RAREFACTION and rs[1] < 0.0:
        raise SonicFan("t-axis lies inside the 3-rarefaction")


def solve_single_grp(uL: PrimState, uR: PrimState, slopesL: SideSlopes,
                     slopesR: SideSlopes, g: GasParams):
    """Time derivatives ``(rho_t, u_t, p_t)`` on the t-axis for an uncoupled GRP."""
    sol = exact_rp(uL, uR, g)
    check_axis_intermediate(sol, uL, uR, g)
    star_l = sol.side_state("L")
    star_r = sol.side_state("R")
    region = star_l if sol.u_star >= 0.0 else star_r
    cl = side_coeffs(uL, star_l, region, slopesL, "L", g)
    cr = side_coeffs(uR, star_r, region, slopesR, "R", g)
    det = cl.h * cr.k - cr.h * cl.k
    scale = abs(cl.h * cr.k) + abs(cr.h * cl.k)
    if abs(det) < 1e-14 * scale or scale == 0.0:
        raise SingularSystem(f"GRP system determinant {det:.3e}")
    u_t = (cl.q * cr.k - cr.q * cl.k) / det
    p_t = (cl.h * cr.q - cr.h * cl.q) / det
    dc = cl if sol.u_star >= 0.0 else cr
    rho_t = (dc.f - dc.g_u * u_t - dc.g_p * p_t) / dc.g_rho
    return rho_t, u_t, p_t
