import numpy as np
import pytest

from coupledgrp.coupled_rp import (CoupledStarState, CouplingData, coupling_residual,
                                   interface_residual, solve_coupled_rp)
from coupledgrp.errors import NegativeVelocity, SupersonicInterface
from coupledgrp.euler import PrimState
from coupledgrp.riemann import RAREFACTION
from oracles import coupled_traces

P0 = 146820.4


def rel_residual(st, cpl):
    scale = np.maximum(1.0, np.abs([st.left_trace.p, st.left_trace.rho, st.left_trace.u]))
    return np.abs(coupling_residual(st, cpl)) / scale


def test_identity(gas):
    w = PrimState(1.0, 250.0, P0)
    st = solve_coupled_rp(w, w, CouplingData(0.0), gas)
    assert st.left_trace == w and st.right_trace == w


def test_case3_onset(gas):
    w = PrimState(1.0, 30.0, P0)
    cpl = CouplingData(3.0)
    st = solve_coupled_rp(w, w, cpl, gas)
    c = np.sqrt(1.4 * P0)
    assert st.left_trace.p == pytest.approx(1.4614e5, rel=1e-3)
    assert st.left_trace.p == pytest.approx(P0 - 3.0 * c / 2, rel=1e-4)
    assert st.left_trace.u - st.right_trace.u == pytest.approx(3.0 / st.left_trace.rho, rel=1e-12)
    assert rel_residual(st, cpl).max() < 1e-10
    ref = coupled_traces(np.array([w]), np.array([w]), np.array([3.0]), 1.4)
    assert st.left_trace.p == pytest.approx(ref[0][0, 2], rel=1e-10)


def test_case1_ramp(gas):
    w = PrimState(1.0, 1.0, P0)
    cpl = CouplingData(0.3, 3.0)
    st = solve_coupled_rp(w, w, cpl, gas)
    assert rel_residual(st, cpl).max() < 1e-10
    assert st.left_wave == RAREFACTION


def test_coupling_residual_examples():
    w = PrimState(1.0, 250.0, P0)
    st = CoupledStarState(w, w, RAREFACTION, RAREFACTION, 1.0)
    assert np.all(coupling_residual(st, CouplingData(0.0)) == 0)
    st = CoupledStarState(PrimState(1, 33, P0), PrimState(1, 30, P0), RAREFACTION, RAREFACTION, 1.0)
    assert np.all(coupling_residual(st, CouplingData(3.0)) == 0)


def _random_inputs(rng, n):
    for _ in range(n):
        cl = np.sqrt(1.4 * P0)
        wl = PrimState(rng.uniform(0.5, 2.0), rng.uniform(0.0, 0.5) * cl, P0 * rng.uniform(0.5, 2.0))
        wr = PrimState(rng.uniform(0.5, 2.0), rng.uniform(0.0, 0.5) * cl, P0 * rng.uniform(0.5, 2.0))
        yield wl, wr, rng.uniform(0.0, 30.0)


def test_random_against_oracle(gas):
    rng = np.random.default_rng(3)
    done = 0
    for wl, wr, e in _random_inputs(rng, 200):
        try:
            st = solve_coupled_rp(wl, wr, CouplingData(e), gas)
        except (SupersonicInterface, NegativeVelocity):
            continue
        done += 1
        left, right = coupled_traces(np.array([wl]), np.array([wr]), np.array([e]), 1.4)
        assert st.left_trace == pytest.approx(tuple(left[0]), rel=1e-9, abs=1e-9)
        assert st.right_trace == pytest.approx(tuple(right[0]), rel=1e-9, abs=1e-9)
        assert rel_residual(st, CouplingData(e)).max() < 1e-10
    assert done > 100


def test_residual_monotone(gas):
    rng = np.random.default_rng(5)
    for wl, wr, e in _random_inputs(rng, 30):
        st = solve_coupled_rp(wl, wr, CouplingData(e), gas, check=False)
        ps = st.left_trace.p * np.linspace(0.5, 2.0, 400)
        f = np.array([interface_residual(p, wl, wr, e, gas) for p in ps])
        assert np.all(np.diff(f) < 0)


def test_continuity_in_outtake(gas):
    wl, wr = PrimState(1.2, 40.0, 1.5e5), PrimState(0.9, 60.0, 1.4e5)
    base = solve_coupled_rp(wl, wr, CouplingData(0.0), gas)
    gaps = []
    for e in (1.0, 0.1, 0.01):
        st = solve_coupled_rp(wl, wr, CouplingData(e), gas)
        gaps.append(max(abs(a - b) / abs(b) for a, b in zip(st.left_trace, base.left_trace)))
    # the traces move linearly in E
    assert gaps[0] / gaps[1] == pytest.approx(10.0, rel=0.05)
    assert gaps[1] / gaps[2] == pytest.approx(10.0, rel=0.05)
    # for E = 0 the traces are the star state left of the contact
    assert base.left_trace.u == pytest.approx(base.right_trace.u, rel=1e-12)


def test_regime_errors(gas):
    c = np.sqrt(1.4 * P0)
    w = PrimState(1.0, 0.99 * c, P0)
    with pytest.raises(SupersonicInterface):
        solve_coupled_rp(w, PrimState(1.0, 0.99 * c, 0.5 * P0), CouplingData(0.0), gas)
    w = PrimState(1.0, 1.0, P0)
    with pytest.raises(NegativeVelocity):
        solve_coupled_rp(w, w, CouplingData(100.0), gas)


def test_negative_outtake_rejected():
    with pytest.raises(ValueError):
        CouplingData(-1.0)
