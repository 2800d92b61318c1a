"""Orchestration of the two domain steppers.

In ``grp`` mode, every sync window starts with one coupled GRP solve; both
domains then march independently with their own CFL steps using the linear
interface traces.  ``sync`` mode is the reference coupling: a common time
step, with a coupled Riemann problem solved on the Hancock-predicted face
values at every half step.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .coupled_grp import boundary_series, solve_coupled_grp
from .coupled_rp import CouplingData, coupling_residual, solve_coupled_rp
from .errors import NumericalError
from .euler import GasParams, PrimState, sound_speed
from .fv import (DomainGrid, DomainState, FarFieldSpec, cfl_dt, interface_face_state,
                 interface_prediction, predict, step, update)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OuttakeProfile:
    """Prescribed outtake E(t).

    kinds: ``constant`` (params: value), ``trapezoid`` (params: rate, plateau,
    t_plateau_end) and ``periodic_spline`` (params: times, values).
    """
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("constant", "trapezoid", "periodic_spline"):
            raise ValueError(f"unknown outtake kind {self.kind!r}")
        if self.kind == "periodic_spline":
            t = np.asarray(self.params["times"], float)
            v = np.asarray(self.params["values"], float)
            if len(t) != len(v) or len(t) < 3 or np.any(np.diff(t) <= 0):
                raise ValueError("spline nodes must be increasing, >= 3, matching values")
            if v[0] != v[-1]:
                raise ValueError("periodic spline needs equal end values")
            object.__setattr__(self, "_spline", CubicSpline(t, v, bc_type="periodic"))
        if self.kind == "constant" and self.params.get("value", 0.0) < 0.0:
            raise ValueError("outtake must be non-negative")

    def breakpoints(self) -> list[float]:
        if self.kind == "trapezoid":
            rate, plateau, t_end = self._trap()
            t_up = plateau / rate
            return [0.0, t_up, t_end, t_end + plateau / rate]
        if self.kind == "periodic_spline":
            return [float(t) for t in self.params["times"]]
        return [0.0]

    def _trap(self):
        p = self.params
        return p.get("rate", 3.0), p.get("plateau", 0.6), p.get("t_plateau_end", 0.3)


def eval_outtake(profile: OuttakeProfile, t: float) -> tuple[float, float]:
    """Return ``(E(t), E'(t))``.  Derivatives are right-continuous at kinks
    except at the end of a ramp, matching half-open intervals ``(a, b]``."""
    if profile.kind == "constant":
        return float(profile.params.get("value", 0.0)), 0.0
    if profile.kind == "trapezoid":
        rate, plateau, t_end = profile._trap()
        t_up = plateau / rate
        t_down = t_end + plateau / rate
        if t <= t_end:
            e = min(plateau, rate * t)
        else:
            e = max(0.0, plateau - rate * (t - t_end))
        if 0.0 < t <= t_up:
            de = rate
        elif t_end < t <= t_down:
            de = -rate
        else:
            de = 0.0
        return max(e, 0.0), de
    sp = profile._spline
    t_nodes = profile.params["times"]
    if t < t_nodes[0] or t > t_nodes[-1]:
        return 0.0, 0.0
    return max(float(sp(t)), 0.0), float(sp(t, 1))


def outtake_at(profile: OuttakeProfile, t: float, window_end: float | None = None) -> CouplingData:
    """Coupling data at the start of a window.

    Windows never straddle a breakpoint, so for the piecewise-linear profile
    the rate is read in the window interior; this picks the slope of the
    segment that starts at a kink.
    """
    e, de = eval_outtake(profile, t)
    if profile.kind == "trapezoid" and window_end is not None:
        de = eval_outtake(profile, 0.5 * (t + window_end))[1]
    return CouplingData(e, de)


@dataclass
class CoupledProblem:
    left_grid: DomainGrid
    right_grid: DomainGrid
    left_far: FarFieldSpec
    right_far: FarFieldSpec
    outtake: OuttakeProfile
    c_cfl: float = 0.2
    p_order: int = 1
    mode: str = "grp"  # "grp" or "sync"
    concurrent: bool = False
    t_final: float = 0.0
    snapshot_times: tuple = ()


@dataclass
class WindowDiagnostics:
    t0: float
    t1: float
    star: object
    derivs: object
    det: float
    residual: np.ndarray
    steps_left: int
    steps_right: int


@dataclass
class Snapshot:
    t: float
    left: np.ndarray   # primitive cell averages
    right: np.ndarray
    left_x: np.ndarray
    right_x: np.ndarray
    left_cons: np.ndarray
    right_cons: np.ndarray
    interface_star: object = None


def _next_break(profile: OuttakeProfile, t0: float, t_end: float) -> float:
    tol = 1e-12 * max(1.0, abs(t_end))
    nxt = t_end
    for b in profile.breakpoints():
        if b > t0 + tol:
            nxt = min(nxt, b)
    return nxt


def _march(state, grid, far, series, t1, prob, g):
    while state.t < t1:
        remaining = t1 - state.t
        dt = cfl_dt(state, prob.c_cfl, prob.p_order, grid.dx, g)
        n = max(1, math.ceil(remaining / dt * (1.0 - 1e-12)))
        dt = remaining / n
        for _ in range(n):
            state = step(state, grid, dt, series, far, g)
        state.t = t1  # remove round-off drift
    return state


def advance_window(left: DomainState, right: DomainState, prob: CoupledProblem,
                   g: GasParams, t_stop: float, pool: ThreadPoolExecutor | None = None):
    """Advance both domains over one sync window starting at their common time."""
    t0 = left.t
    uL, sL = interface_face_state(left, prob.left_grid, g, prob.left_far)
    uR, sR = interface_face_state(right, prob.right_grid, g, prob.right_far)
    t_lim = min(t_stop, _next_break(prob.outtake, t0, t_stop))
    cpl = outtake_at(prob.outtake, t0, t_lim)
    star, derivs = solve_coupled_grp(uL, uR, sL, sR, cpl, g)
    lt, rt = star.left_trace, star.right_trace
    win = min(prob.c_cfl * prob.left_grid.dx / (abs(lt.u) + sound_speed(lt, g)),
              prob.c_cfl * prob.right_grid.dx / (abs(rt.u) + sound_speed(rt, g)))
    t1 = min(t0 + win, t_lim)
    if t_lim - t1 < 1e-3 * win:
        t1 = t_lim
    series = boundary_series(star, derivs, t0, t1, cpl)
    nl0, nr0 = left.n_steps, right.n_steps
    if pool is not None:
        fl = pool.submit(_march, left, prob.left_grid, prob.left_far, series, t1, prob, g)
        fr = pool.submit(_march, right, prob.right_grid, prob.right_far, series, t1, prob, g)
        left, right = fl.result(), fr.result()
    else:
        left = _march(left, prob.left_grid, prob.left_far, series, t1, prob, g)
        right = _march(right, prob.right_grid, prob.right_far, series, t1, prob, g)
    diag = WindowDiagnostics(t0, t1, star, derivs, derivs.det,
                             coupling_residual(star, cpl),
                             left.n_steps - nl0, right.n_steps - nr0)
    return left, right, diag


def sync_step(left: DomainState, right: DomainState, prob: CoupledProblem, g: GasParams,
              dt: float):
    """One synchronised step with a coupled RP at the half step."""
    pl = predict(left, prob.left_grid, dt, prob.left_far, g)
    pr = predict(right, prob.right_grid, dt, prob.right_far, g)
    th = left.t + 0.5 * dt
    cpl = CouplingData(eval_outtake(prob.outtake, th)[0], 0.0)
    star = solve_coupled_rp(interface_prediction(pl, prob.left_grid),
                            interface_prediction(pr, prob.right_grid), cpl, g)
    left = update(left, prob.left_grid, dt, pl, star.left_trace, prob.left_far, g)
    right = update(right, prob.right_grid, dt, pr, star.right_trace, prob.right_far, g)
    return left, right, star, cpl


def take_snapshot(left: DomainState, right: DomainState, prob: CoupledProblem,
                  g: GasParams) -> Snapshot:
    uL, _ = interface_face_state(left, prob.left_grid, g, prob.left_far)
    uR, _ = interface_face_state(right, prob.right_grid, g, prob.right_far)
    cpl = CouplingData(eval_outtake(prob.outtake, left.t)[0], 0.0)
    try:
        star = solve_coupled_rp(uL, uR, cpl, g)
    except NumericalError:  # pragma: no cover - diagnostics only
        star = None
    return Snapshot(left.t, left.prim(g), right.prim(g), prob.left_grid.centers,
                    prob.right_grid.centers, left.cells.copy(), right.cells.copy(), star)


@dataclass
class RunResult:
    snapshots: list
    windows: list
    left: DomainState
    right: DomainState
    max_residual: float = 0.0
    max_identity_residual: float = 0.0
    interface_traces: list = field(default_factory=list)


def run(prob: CoupledProblem, left: DomainState, right: DomainState, g: GasParams,
        keep_windows: bool = False, record_traces: bool = False) -> RunResult:
    """Integrate to ``prob.t_final``, emitting snapshots at the requested times."""
    from .coupled_grp import derivative_identities

    targets = sorted(set(float(t) for t in prob.snapshot_times if 0.0 <= t <= prob.t_final)
                     | {prob.t_final})
    snaps, windows, traces = [], [], []
    max_res = 0.0
    max_ident = 0.0
    if targets and targets[0] <= left.t:
        snaps.append(take_snapshot(left, right, prob, g))
        targets = [t for t in targets if t > left.t]
    pool = ThreadPoolExecutor(max_workers=2) if prob.concurrent and prob.mode == "grp" else None
    try:
        for target in targets:
            while left.t < target - 1e-14 * max(1.0, target):
                if prob.mode == "grp":
                    left, right, diag = advance_window(left, right, prob, g, target, pool)
                    res = np.abs(diag.residual) / np.maximum(
                        1.0, np.abs(np.asarray([diag.star.left_trace.p, diag.star.left_trace.rho,
                                                diag.star.left_trace.u])))
                    max_res = max(max_res, float(res.max()))
                    idn = derivative_identities(diag.derivs, diag.star.left_trace.rho,
                                                outtake_at(prob.outtake, diag.t0, diag.t1))
                    scale = max(1.0, abs(diag.derivs.d_pbar_dt), abs(diag.derivs.d_ubar_dt))
                    max_ident = max(max_ident, float(np.abs(idn).max()) / scale)
                    if keep_windows:
                        windows.append(diag)
                    if record_traces:
                        traces.append((diag.t0, diag.star.left_trace, diag.star.right_trace))
                else:
                    dt = min(cfl_dt(left, prob.c_cfl, prob.p_order, prob.left_grid.dx, g),
                             cfl_dt(right, prob.c_cfl, prob.p_order, prob.right_grid.dx, g))
                    t_lim = min(target, _next_break(prob.outtake, left.t, target))
                    if left.t + dt > t_lim - 1e-3 * dt:
                        dt = t_lim - left.t
                    t_before = left.t
                    left, right, star, cpl = sync_step(left, right, prob, g, dt)
                    if abs(left.t - t_lim) < 1e-12 * max(1.0, t_lim):
                        left.t = right.t = t_lim
                    res = np.abs(coupling_residual(star, cpl)) / np.maximum(
                        1.0, np.abs(np.asarray([star.left_trace.p, star.left_trace.rho,
                                                star.left_trace.u])))
                    max_res = max(max_res, float(res.max()))
                    if record_traces:
                        traces.append((t_before + 0.5 * dt, star.left_trace, star.right_trace))
            snaps.append(take_snapshot(left, right, prob, g))
    finally:
        if pool is not None:
            pool.shutdown()
    return RunResult(snaps, windows, left, right, max_res, max_ident, traces)
