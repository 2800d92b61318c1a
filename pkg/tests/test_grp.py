import numpy as np
import pytest

from coupledgrp.errors import SonicFan
from coupledgrp.euler import PrimState, sound_speed
from coupledgrp.grp import (SideSlopes, ZERO_SLOPES, density_coeffs, eulerian_coeffs,
                            lagrangian_coeffs, side_coeffs, solve_single_grp)
from coupledgrp.riemann import BACKWARD_3, FORWARD_1, RAREFACTION, SHOCK, lax_curve_state

P0 = 146820.4
C0 = float(np.sqrt(1.4 * P0))


def test_rarefaction_left_ab(gas):
    star = PrimState(1.0, 250.0, P0)
    init = PrimState(1.1, 200.0, 1.2 * P0)
    a, b, d = lagrangian_coeffs(init, star, ZERO_SLOPES, "L", gas, RAREFACTION)
    assert a == 1.0
    assert b == pytest.approx(2.20567e-3, rel=1e-5)
    assert d == 0.0
    a, b, d = lagrangian_coeffs(init, star, ZERO_SLOPES, "R", gas, RAREFACTION)
    assert (a, b) == (1.0, pytest.approx(-2.20567e-3, rel=1e-5))


def test_zero_slopes_shock(gas):
    init = PrimState(1.0, 0.0, 1.0)
    star = lax_curve_state(init, 1.5, FORWARD_1, gas)
    assert lagrangian_coeffs(init, star, ZERO_SLOPES, "L", gas)[2] == 0.0
    assert density_coeffs(init, star, ZERO_SLOPES, SHOCK, "L", gas)[3] == 0.0


def test_eulerian_identity_at_rest(gas):
    assert eulerian_coeffs(1.3, 0.2, 0.7, PrimState(1.0, 0.0, 1.0), gas) == (1.3, 0.2, 0.7)


def test_eulerian_rarefaction_values(gas):
    region = PrimState(1.0, 250.0, P0)
    h, k, q = eulerian_coeffs(1.0, 1.0 / C0, 0.0, region, gas)
    assert h == pytest.approx((C0 - 250) / C0, rel=1e-12) and h == pytest.approx(0.44857, abs=1e-5)
    # (c - u)/(rho c^2) = 203.375/205548.6
    assert k == pytest.approx((C0 - 250) / C0 ** 2, rel=1e-12)
    assert k == pytest.approx(9.8947e-4, rel=1e-4)
    h, k, q = eulerian_coeffs(1.0, -1.0 / C0, 0.0, region, gas)
    assert h == pytest.approx(1.55143, abs=1e-5)
    assert k == pytest.approx(-(C0 + 250) / C0 ** 2, rel=1e-12)
    assert k == pytest.approx(-3.4220e-3, rel=1e-4)


def test_density_rarefaction(gas):
    star = PrimState(1.0, 250.0, P0)
    init = PrimState(1.1, 200.0, 1.2 * P0)
    g_rho, g_u, g_p, f = density_coeffs(init, star, ZERO_SLOPES, RAREFACTION, "L", gas)
    assert g_rho == pytest.approx(205548.6, rel=1e-6)
    assert (g_u, g_p, f) == (0.0, -1.0, 0.0)


def test_single_grp_trivial(gas):
    w = PrimState(1.0, 100.0, P0)
    assert solve_single_grp(w, w, ZERO_SLOPES, ZERO_SLOPES, gas) == (0.0, 0.0, 0.0)
    w = PrimState(1.0, 0.0, 1.0)
    rho_t, u_t, p_t = solve_single_grp(w, w, SideSlopes(0, 0, -0.3), SideSlopes(0, 0, 0.3), gas)
    assert abs(u_t) < 1e-14


def test_single_grp_sonic_fan(gas):
    with pytest.raises(SonicFan):
        solve_single_grp(PrimState(1, 0.9, 1), PrimState(0.125, 0, 0.1), ZERO_SLOPES, ZERO_SLOPES, gas)


@pytest.mark.parametrize("types", [(RAREFACTION, RAREFACTION), (RAREFACTION, SHOCK),
                                   (SHOCK, RAREFACTION), (SHOCK, SHOCK)])
def test_sign_pattern(gas, types):
    rng = np.random.default_rng(11)
    for _ in range(200):
        p_star = P0
        ratios = [rng.uniform(1.02, 1.5) if t == RAREFACTION else rng.uniform(0.7, 0.98) for t in types]
        initL = PrimState(rng.uniform(0.5, 2), 0.0, p_star * ratios[0])
        initR = PrimState(rng.uniform(0.5, 2), 0.0, p_star * ratios[1])
        sl = lax_curve_state(initL, p_star, FORWARD_1, gas)
        sr = lax_curve_state(initR, p_star, BACKWARD_3, gas)
        # shift velocities so both sides meet at a random subsonic u*
        u_star = rng.uniform(-0.8, 0.8) * min(sound_speed(sl, gas), sound_speed(sr, gas))
        initL = initL._replace(u=u_star - sl.u)
        initR = initR._replace(u=u_star - sr.u)
        sl, sr = sl._replace(u=u_star), sr._replace(u=u_star)
        region = sl if u_star >= 0 else sr
        cl = side_coeffs(initL, sl, region, ZERO_SLOPES, "L", gas)
        cr = side_coeffs(initR, sr, region, ZERO_SLOPES, "R", gas)
        assert (cl.wave_type, cr.wave_type) == types
        assert cl.h > 0 and cl.k > 0 and cr.h > 0 and cr.k < 0


@pytest.mark.parametrize("side", ["L", "R"])
def test_shock_limit_continuity(gas, side):
    init = PrimState(1.0, 50.0, P0)
    slopes = SideSlopes(0.01, 2.0, 3000.0)
    curve = FORWARD_1 if side == "L" else BACKWARD_3
    vals = {}
    for eps in (1e-3, 1e-4, 1e-5):
        for sgn in (1, -1):
            star = lax_curve_state(init, P0 * (1 + sgn * eps), curve, gas)
            a, b, d = lagrangian_coeffs(init, star, slopes, side, gas)
            wt = SHOCK if sgn > 0 else RAREFACTION
            g_rho, g_u, g_p, f = density_coeffs(init, star, slopes, wt, side, gas)
            vals[eps, sgn] = np.array([b / a * C0, d / a, g_u / g_rho * C0, g_p / g_rho * C0 ** 2,
                                       f / g_rho])
    gaps = [np.abs(vals[e, 1] - vals[e, -1]).max() for e in (1e-3, 1e-4, 1e-5)]
    scale = np.abs(vals[1e-5, -1]).max()
    assert gaps[2] < 1e-4 * scale
    assert gaps[0] > gaps[1] > gaps[2]
