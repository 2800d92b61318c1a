"""Second-order MUSCL-Hancock stepper for one Euler domain.

Each domain touches the coupling interface on one end (``side="L"`` means the
domain lies left of the interface, so the interface is at ``x_max``) and a
far-field boundary on the other.  Far-field faces solve an exact Riemann
problem against a pinned state; interface faces take their flux from a
prescribed interface trace.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .errors import NonPhysicalState, WindowExceeded
from .euler import (GasParams, PrimState, cons_to_prim_arr, flux, flux_arr,
                    max_wave_speed, prim_to_cons_arr)
from .riemann import godunov_state


@dataclass(frozen=True)
class DomainGrid:
    x_min: float
    x_max: float
    n_cells: int
    side: str  # "L": interface at x_max, "R": interface at x_min

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.n_cells < 2:
            raise ValueError("need at least two cells")
        if self.side not in ("L", "R"):
            raise ValueError("side must be 'L' or 'R'")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass(frozen=True)
class FarFieldSpec:
    state: PrimState


@dataclass
class DomainState:
    t: float
    cells: np.ndarray  # (n, 3) conserved cell averages
    slopes: np.ndarray | None = None  # (n, 3) primitive slopes per unit length
    # time-integrated boundary fluxes (far face, interface face), positive in +x
    far_flux_integral: np.ndarray = field(default_factory=lambda: np.zeros(3))
    iface_flux_integral: np.ndarray = field(default_factory=lambda: np.zeros(3))
    n_steps: int = 0

    def prim(self, g: GasParams) -> np.ndarray:
        return cons_to_prim_arr(self.cells, g)

    def totals(self, dx: float) -> np.ndarray:
        return self.cells.sum(axis=0) * dx


# weight of the one-sided differences in the limited central slope;
# 1 gives plain minmod, 2 the monotonized central slope
THETA = 2.0


def minmod(a, b):
    return np.where(a * b > 0.0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def limited_central(a, b, theta=THETA):
    """``minmod(theta a, (a + b)/2, theta b)`` for backward/forward differences."""
    c = 0.5 * (a + b)
    return np.where(a * b > 0.0,
                    np.sign(c) * np.minimum(np.abs(c), theta * np.minimum(np.abs(a), np.abs(b))),
                    0.0)


def reconstruct_prim(w: np.ndarray, grid: DomainGrid, far: FarFieldSpec | None) -> np.ndarray:
    """Minmod-limited central slopes of the primitive variables (per unit length).

    The far-field end uses the pinned state as a ghost cell; the interface
    cell has no outer neighbour and takes minmod of the two inner one-sided
    differences.
    """
    dw = np.diff(w, axis=0)
    s = np.zeros_like(w)
    s[1:-1] = limited_central(dw[:-1], dw[1:])
    far_ghost = np.asarray(far.state) if far is not None else None
    n = w.shape[0]
    if grid.side == "L":
        # far field at index 0, interface at n-1
        s[0] = limited_central(w[0] - far_ghost, dw[0]) if far_ghost is not None else dw[0]
        s[-1] = minmod(dw[-1], dw[-2]) if n > 2 else dw[-1]
    else:
        s[0] = minmod(dw[0], dw[1]) if n > 2 else dw[0]
        s[-1] = limited_central(dw[-1], far_ghost - w[-1]) if far_ghost is not None else dw[-1]
    return s / grid.dx


def reconstruct(state: DomainState, grid: DomainGrid, g: GasParams,
                far: FarFieldSpec | None = None) -> np.ndarray:
    return reconstruct_prim(state.prim(g), grid, far)


def cfl_dt(state: DomainState, c_cfl: float, p_order: int, dx: float, g: GasParams) -> float:
    lam = max_wave_speed(state.prim(g), g)
    return c_cfl * dx / ((2 * p_order + 1) * lam)


def interface_face_state(state: DomainState, grid: DomainGrid, g: GasParams,
                         far: FarFieldSpec | None = None):
    """Reconstructed interface-face value and the adjacent cell's slopes."""
    w = state.prim(g)
    s = reconstruct_prim(w, grid, far)
    i, sgn = (-1, 1.0) if grid.side == "L" else (0, -1.0)
    face = w[i] + sgn * 0.5 * grid.dx * s[i]
    if face[0] <= 0.0 or face[2] <= 0.0:
        face, s = w[i].copy(), s.copy()
        s[i] = 0.0
    return PrimState(*map(float, face)), tuple(map(float, s[i]))


class Prediction(NamedTuple):
    w_minus: np.ndarray  # left-face values of each cell at t + dt/2
    w_plus: np.ndarray   # right-face values of each cell at t + dt/2


def predict(state: DomainState, grid: DomainGrid, dt: float, far: FarFieldSpec,
            g: GasParams) -> Prediction:
    """Hancock half-step predictor on the limited reconstruction."""
    w = state.prim(g)
    s = reconstruct_prim(w, grid, far)
    half = 0.5 * grid.dx * s
    wm, wp = w - half, w + half
    bad = (wm[:, 0] <= 0) | (wm[:, 2] <= 0) | (wp[:, 0] <= 0) | (wp[:, 2] <= 0)
    if bad.any():
        wm[bad], wp[bad] = w[bad], w[bad]
    df = flux_arr(wp, g) - flux_arr(wm, g)
    qm = prim_to_cons_arr(wm, g) - 0.5 * dt / grid.dx * df
    qp = prim_to_cons_arr(wp, g) - 0.5 * dt / grid.dx * df
    try:
        return Prediction(cons_to_prim_arr(qm, g), cons_to_prim_arr(qp, g))
    except NonPhysicalState:
        # first-order fallback
        return Prediction(w.copy(), w.copy())


def interface_prediction(pred: Prediction, grid: DomainGrid) -> PrimState:
    w = pred.w_plus[-1] if grid.side == "L" else pred.w_minus[0]
    return PrimState(*map(float, w))


def update(state: DomainState, grid: DomainGrid, dt: float, pred: Prediction,
           iface_trace: PrimState, far: FarFieldSpec, g: GasParams) -> DomainState:
    """Conservative update given the interface trace at the half step."""
    n = grid.n_cells
    pinned = np.asarray(far.state, dtype=float)[None, :]
    if grid.side == "L":
        wl = np.vstack([pinned, pred.w_plus])
        wr = np.vstack([pred.w_minus, pred.w_plus[-1:]])  # last row placeholder
        faces = flux_arr(godunov_state(wl[:n], wr[:n], g), g)
        f_iface = flux(iface_trace, g)
        f_all = np.vstack([faces, f_iface])
        f_far = faces[0]
    else:
        wl = pred.w_plus
        wr = np.vstack([pred.w_minus[1:], pinned])
        faces = flux_arr(godunov_state(wl, wr, g), g)
        f_iface = flux(iface_trace, g)
        f_all = np.vstack([f_iface, faces])
        f_far = faces[-1]
    q = state.cells - dt / grid.dx * (f_all[1:] - f_all[:-1])
    rho = q[:, 0]
    p = (g.gamma - 1.0) * (q[:, 2] - 0.5 * q[:, 1] ** 2 / rho)
    if not (np.all(rho > 0.0) and np.all(p > 0.0)):
        raise NonPhysicalState(f"positivity lost at t={state.t + dt:.6g}")
    return DomainState(
        t=state.t + dt,
        cells=q,
        far_flux_integral=state.far_flux_integral + dt * f_far,
        iface_flux_integral=state.iface_flux_integral + dt * f_iface,
        n_steps=state.n_steps + 1,
    )


def step(state: DomainState, grid: DomainGrid, dt: float, interface_bc, far: FarFieldSpec,
         g: GasParams) -> DomainState:
    """Advance one step using an :class:`InterfaceBoundarySeries` for the interface."""
    eps = 1e-12 * max(1.0, abs(interface_bc.t1))
    if state.t < interface_bc.t0 - eps or state.t + dt > interface_bc.t1 + eps:
        raise WindowExceeded(
            f"step [{state.t}, {state.t + dt}] outside window "
            f"[{interface_bc.t0}, {interface_bc.t1}]")
    pred = predict(state, grid, dt, far, g)
    trace = interface_bc.trace(grid.side, state.t + 0.5 * dt)
    return update(state, grid, dt, pred, trace, far, g)


def initial_state(grid: DomainGrid, cell_avg_prim: np.ndarray, g: GasParams,
                  t: float = 0.0) -> DomainState:
    return DomainState(t=t, cells=prim_to_cons_arr(np.asarray(cell_avg_prim, float), g))


def with_time(state: DomainState, t: float) -> DomainState:
    return replace(state, t=t)
