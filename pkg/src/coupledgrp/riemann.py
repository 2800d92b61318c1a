"""Exact Riemann solver for the ideal-gas Euler equations.

The pressure-function formulation is the usual one: the star pressure is the
root of ``f_L(p) + f_R(p) + (u_R - u_L)``, where ``f_K`` is the velocity
change across the 1- (K=L) or 3-wave (K=R).  Rarefaction branches use the
isentropic relations, shock branches Rankine-Hugoniot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NoConvergence, VacuumState
from .euler import GasParams, PrimState

SHOCK = "shock"
RAREFACTION = "rarefaction"

MAX_ITER = 100
RTOL = 1e-12


class LaxCurveSide(NamedTuple):
    family: int
    direction: str

    def check(self):
        if self.family not in (1, 3):
            raise ValueError(f"wave family must be 1 or 3, got {self.family}")
        if (self.family, self.direction) not in ((1, "forward"), (3, "backward")):
            raise ValueError(
                "only the forward 1-curve and backward 3-curve are available "
                f"(got family {self.family}, {self.direction})")


FORWARD_1 = LaxCurveSide(1, "forward")
BACKWARD_3 = LaxCurveSide(3, "backward")


@dataclass(frozen=True)
class RiemannSolution:
    p_star: float
    u_star: float
    rho_star_L: float
    rho_star_R: float
    wave_types: tuple[str, str]
    # (head, tail) for rarefactions, (sigma, sigma) for shocks
    wave_speeds: tuple[tuple[float, float], tuple[float, float]]

    def side_state(self, side: str) -> PrimState:
        rho = self.rho_star_L if side == "L" else self.rho_star_R
        return PrimState(rho, self.u_star, self.p_star)


# -- single-side wave relations -------------------------------------------

def wave_function(p, rho_k, p_k, g: GasParams):
    """Velocity jump ``f_K(p)`` across a 1-/3-wave and its derivative.

    Works on scalars or arrays.  Returns ``(f, df/dp)``.
    """
    gm = g.gamma
    c_k = np.sqrt(gm * p_k / rho_k)
    p = np.asarray(p, dtype=float)
    shock = p > p_k
    # rarefaction branch
    pr = np.where(shock, p_k, p) / p_k
    e = (gm - 1.0) / (2.0 * gm)
    f_rare = 2.0 * c_k / (gm - 1.0) * (pr ** e - 1.0)
    df_rare = 1.0 / (rho_k * c_k) * pr ** (-(gm + 1.0) / (2.0 * gm))
    # shock branch
    a_k = 2.0 / ((gm + 1.0) * rho_k)
    b_k = (gm - 1.0) / (gm + 1.0) * p_k
    ps = np.where(shock, p, p_k)
    q = np.sqrt(a_k / (b_k + ps))
    f_sh = (ps - p_k) * q
    df_sh = q * (1.0 - 0.5 * (ps - p_k) / (b_k + ps))
    return np.where(shock, f_sh, f_rare), np.where(shock, df_sh, df_rare)


def star_density(p, rho_k, p_k, g: GasParams):
    """Density behind a 1-/3-wave at pressure ``p``."""
    gm = g.gamma
    mu2 = (gm - 1.0) / (gm + 1.0)
    r = np.asarray(p, dtype=float) / p_k
    rare = rho_k * np.maximum(r, 0.0) ** (1.0 / gm)
    shock = rho_k * (r + mu2) / (mu2 * r + 1.0)
    return np.where(r > 1.0, shock, rare)


def lax_curve_state(base: PrimState, p: float, side: LaxCurveSide,
                    g: GasParams) -> PrimState:
    """State reachable from ``base`` through one wave at pressure ``p``.

    For the forward 1-curve ``base`` is the state left of the wave; for the
    backward 3-curve it is the state to the right.
    """
    side.check()
    if not p > 0.0:
        raise VacuumState(f"pressure {p} is not positive")
    f, _ = wave_function(p, base.rho, base.p, g)
    f = float(f)
    u = base.u - f if side.family == 1 else base.u + f
    rho = float(star_density(p, base.rho, base.p, g))
    return PrimState(rho, u, float(p))


# -- star region -------------------------------------------------------------

def _two_rarefaction_guess(wl, wr, g):
    gm = g.gamma
    e = (gm - 1.0) / (2.0 * gm)
    cl = np.sqrt(gm * wl[..., 2] / wl[..., 0])
    cr = np.sqrt(gm * wr[..., 2] / wr[..., 0])
    num = cl + cr - 0.5 * (gm - 1.0) * (wr[..., 1] - wl[..., 1])
    den = cl / wl[..., 2] ** e + cr / wr[..., 2] ** e
    return (np.maximum(num, 1e-300) / den) ** (1.0 / e)


def star_pu(wl: np.ndarray, wr: np.ndarray, g: GasParams):
    """Vectorised star pressure and velocity for arrays of state pairs.

    ``wl`` and ``wr`` are ``(n, 3)`` primitive arrays.  Newton iteration on
    the pressure function, safeguarded by bisection on a bracket.
    """
    wl = np.atleast_2d(wl)
    wr = np.atleast_2d(wr)
    gm = g.gamma
    rl, ul, pl = wl[:, 0], wl[:, 1], wl[:, 2]
    rr, ur, pr = wr[:, 0], wr[:, 1], wr[:, 2]
    cl = np.sqrt(gm * pl / rl)
    cr = np.sqrt(gm * pr / rr)
    du = ur - ul
    if np.any(2.0 * (cl + cr) / (gm - 1.0) <= du):
        raise VacuumState("initial data generate vacuum")

    lo = 1e-10 * np.minimum(pl, pr)
    hi = 50.0 * np.maximum(pl, pr)
    # widen the upper bracket for strong compressions
    for _ in range(60):
        fl, _ = wave_function(hi, rl, pl, g)
        fr, _ = wave_function(hi, rr, pr, g)
        bad = fl + fr + du < 0.0
        if not bad.any():
            break
        hi = np.where(bad, 4.0 * hi, hi)

    p = np.clip(_two_rarefaction_guess(wl, wr, g), lo, hi)
    for _ in range(MAX_ITER):
        fl, dfl = wave_function(p, rl, pl, g)
        fr, dfr = wave_function(p, rr, pr, g)
        f = fl + fr + du
        ustar = 0.5 * (ul + ur + fr - fl)
        done = np.abs(f) < RTOL * np.maximum(1.0, np.abs(ustar))
        if done.all():
            return p, ustar
        lo = np.where(f < 0.0, p, lo)
        hi = np.where(f > 0.0, p, hi)
        p_new = p - f / (dfl + dfr)
        outside = (p_new <= lo) | (p_new >= hi) | ~np.isfinite(p_new)
        p_new = np.where(outside, 0.5 * (lo + hi), p_new)
        # stagnated at round-off: accept
        stalled = np.abs(p_new - p) <= 4.0 * np.finfo(float).eps * p
        if np.all(done | stalled):
            return p, ustar
        p = np.where(done, p, p_new)
    raise NoConvergence("star pressure iteration did not converge")


def exact_rp(left: PrimState, right: PrimState, g: GasParams) -> RiemannSolution:
    wl = np.array([left])
    wr = np.array([right])
    p, u = star_pu(wl, wr, g)
    p, u = float(p[0]), float(u[0])
    gm = g.gamma
    cl = math.sqrt(gm * left.p / left.rho)
    cr = math.sqrt(gm * right.p / right.rho)
    rho_l = float(star_density(p, left.rho, left.p, g))
    rho_r = float(star_density(p, right.rho, right.p, g))
    if p > left.p:
        s = left.u - cl * math.sqrt((gm + 1) / (2 * gm) * p / left.p + (gm - 1) / (2 * gm))
        lt, ls = SHOCK, (s, s)
    else:
        lt, ls = RAREFACTION, (left.u - cl, u - math.sqrt(gm * p / rho_l))
    if p > right.p:
        s = right.u + cr * math.sqrt((gm + 1) / (2 * gm) * p / right.p + (gm - 1) / (2 * gm))
        rt, rs = SHOCK, (s, s)
    else:
        rt, rs = RAREFACTION, (right.u + cr, u + math.sqrt(gm * p / rho_r))
    return RiemannSolution(p, u, rho_l, rho_r, (lt, rt), (ls, rs))


def shock_speed(base: PrimState, p: float, family: int, g: GasParams) -> float:
    gm = g.gamma
    c = math.sqrt(gm * base.p / base.rho)
    m = c * math.sqrt((gm + 1) / (2 * gm) * p / base.p + (gm - 1) / (2 * gm))
    return base.u - m if family == 1 else base.u + m


# -- sampling ----------------------------------------------------------------

def sample_arr(wl: np.ndarray, wr: np.ndarray, p: np.ndarray, u: np.ndarray,
               xi, g: GasParams) -> np.ndarray:
    """Self-similar solution on rays ``x/t = xi`` for arrays of problems."""
    gm = g.gamma
    wl = np.atleast_2d(wl)
    wr = np.atleast_2d(wr)
    xi = np.broadcast_to(np.asarray(xi, dtype=float), p.shape)
    out = np.empty((p.shape[0], 3))

    left_of_contact = xi <= u
    # pick the side
    w = np.where(left_of_contact[:, None], wl, wr)
    sgn = np.where(left_of_contact, -1.0, 1.0)  # -1: 1-wave, +1: 3-wave
    rk, uk, pk = w[:, 0], w[:, 1], w[:, 2]
    ck = np.sqrt(gm * pk / rk)
    rho_star = star_density(p, rk, pk, g)
    c_star = np.sqrt(gm * p / rho_star)
    shock = p > pk

    # shock: single jump at sigma
    sig = uk + sgn * ck * np.sqrt((gm + 1) / (2 * gm) * p / pk + (gm - 1) / (2 * gm))
    in_star_sh = sgn * (xi - sig) < 0.0
    # rarefaction: head/tail
    head = uk + sgn * ck
    tail = u + sgn * c_star
    beyond_head = sgn * (xi - head) >= 0.0
    in_star_ra = sgn * (xi - tail) <= 0.0
    # inside fan
    c_fan = 2.0 / (gm + 1.0) * ck + sgn * (gm - 1.0) / (gm + 1.0) * (xi - uk)
    u_fan = 2.0 / (gm + 1.0) * (-sgn * ck + 0.5 * (gm - 1.0) * uk + xi)
    c_fan = np.maximum(c_fan, 1e-300)
    rho_fan = rk * (c_fan / ck) ** (2.0 / (gm - 1.0))
    p_fan = pk * (c_fan / ck) ** (2.0 * gm / (gm - 1.0))

    star = np.where((shock & in_star_sh) | (~shock & in_star_ra), True, False)
    fan = ~shock & ~in_star_ra & ~beyond_head
    out[:, 0] = np.where(star, rho_star, np.where(fan, rho_fan, rk))
    out[:, 1] = np.where(star, u, np.where(fan, u_fan, uk))
    out[:, 2] = np.where(star, p, np.where(fan, p_fan, pk))
    return out


def sample_fan(sol: RiemannSolution, left: PrimState, right: PrimState,
               xi: float, g: GasParams) -> PrimState:
    w = sample_arr(np.array([left]), np.array([right]), np.array([sol.p_star]),
                   np.array([sol.u_star]), xi, g)[0]
    return PrimState(*map(float, w))


def godunov_state(wl: np.ndarray, wr: np.ndarray, g: GasParams) -> np.ndarray:
    """Riemann solution on the ray ``x/t = 0`` for arrays of face pairs."""
    p, u = star_pu(wl, wr, g)
    return sample_arr(wl, wr, p, u, 0.0, g)
