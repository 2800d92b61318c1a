"""Ideal-gas state representations for the 1D Euler equations.

Scalar helpers operate on :class:`PrimState` / :class:`ConsState` tuples;
the ``*_arr`` variants work on ``(n, 3)`` arrays and are what the
finite-volume layer uses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NonPhysicalState


@dataclass(frozen=True)
class GasParams:
    gamma: float = 1.4
    r_sgc: float = 277.13333

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if not self.r_sgc > 0.0:
            raise ValueError(f"r_sgc must be positive, got {self.r_sgc}")


class PrimState(NamedTuple):
    rho: float
    u: float
    p: float


class ConsState(NamedTuple):
    rho: float
    mom: float
    en: float


def prim_to_cons(s: PrimState, g: GasParams) -> ConsState:
    rho, u, p = s
    return ConsState(rho, rho * u, p / (g.gamma - 1.0) + 0.5 * rho * u * u)


def cons_to_prim(c: ConsState, g: GasParams) -> PrimState:
    rho, mom, en = c
    if not rho > 0.0:
        raise NonPhysicalState(f"non-positive density {rho}")
    u = mom / rho
    p = (g.gamma - 1.0) * (en - 0.5 * mom * u)
    if not p > 0.0:
        raise NonPhysicalState(f"non-positive pressure {p}")
    return PrimState(rho, u, p)


def sound_speed(s: PrimState, g: GasParams) -> float:
    return math.sqrt(g.gamma * s.p / s.rho)


def temperature(s: PrimState, g: GasParams) -> float:
    return s.p / (s.rho * g.r_sgc)


def flux(s: PrimState, g: GasParams) -> np.ndarray:
    """Physical flux ``(rho u, rho u^2 + p, u (rho E + p))``."""
    rho, u, p = s
    en = p / (g.gamma - 1.0) + 0.5 * rho * u * u
    return np.array([rho * u, rho * u * u + p, u * (en + p)])


# -- array versions ---------------------------------------------------------

def prim_to_cons_arr(w: np.ndarray, g: GasParams) -> np.ndarray:
    rho, u, p = w[..., 0], w[..., 1], w[..., 2]
    out = np.empty_like(w)
    out[..., 0] = rho
    out[..., 1] = rho * u
    out[..., 2] = p / (g.gamma - 1.0) + 0.5 * rho * u * u
    return out


def cons_to_prim_arr(q: np.ndarray, g: GasParams) -> np.ndarray:
    rho = q[..., 0]
    u = q[..., 1] / rho
    p = (g.gamma - 1.0) * (q[..., 2] - 0.5 * q[..., 1] * u)
    if not (np.all(rho > 0.0) and np.all(p > 0.0)):
        raise NonPhysicalState("cell state lost positivity")
    out = np.empty_like(q)
    out[..., 0] = rho
    out[..., 1] = u
    out[..., 2] = p
    return out


def flux_arr(w: np.ndarray, g: GasParams) -> np.ndarray:
    rho, u, p = w[..., 0], w[..., 1], w[..., 2]
    en = p / (g.gamma - 1.0) + 0.5 * rho * u * u
    out = np.empty_like(w)
    out[..., 0] = rho * u
    out[..., 1] = rho * u * u + p
    out[..., 2] = u * (en + p)
    return out


def max_wave_speed(w: np.ndarray, g: GasParams) -> float:
    return float(np.max(np.abs(w[..., 1]) + np.sqrt(g.gamma * w[..., 2] / w[..., 0])))
