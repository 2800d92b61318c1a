"""Configuration, reproduction cases, error measurement and CSV output."""
from __future__ import annotations

import csv
import logging
import math
import os
import re
import warnings
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .driver import CoupledProblem, OuttakeProfile, RunResult, run
from .errors import MismatchedDomains, ParseError, ValidationError
from .euler import GasParams, PrimState, prim_to_cons_arr
from .fv import DomainGrid, DomainState, FarFieldSpec

log = logging.getLogger(__name__)

SECTIONS = {
    "gas": {"gamma", "r_sgc"},
    "left": {"x_min", "x_max", "n0", "rho", "u", "p", "bump_x", "bump_values"},
    "right": {"x_min", "x_max", "n0", "rho", "u", "p", "bump_x", "bump_values"},
    "interface": {"outtake", "value", "rate", "plateau", "t_plateau_end", "times", "values"},
    "time": {"t_final", "c_cfl", "p_order", "level", "snapshot_interval", "coupling",
             "concurrent"},
    "output": {"path"},
}
REQUIRED = {
    "gas": {"gamma", "r_sgc"},
    "left": {"x_min", "x_max", "n0", "rho", "u", "p"},
    "right": {"x_min", "x_max", "n0", "rho", "u", "p"},
    "interface": {"outtake"},
    "time": {"t_final", "c_cfl"},
}


@dataclass
class DomainSpec:
    x_min: float
    x_max: float
    n0: int
    state: PrimState
    bump_x: tuple = ()
    bump_values: tuple = ()


@dataclass
class SimConfig:
    gas: GasParams
    left: DomainSpec
    right: DomainSpec
    outtake: OuttakeProfile
    t_final: float
    c_cfl: float
    p_order: int = 1
    level: int = 5
    snapshot_interval: float = 0.0
    coupling: str = "grp"
    concurrent: bool = False
    output_path: str = "out"

    def at_level(self, level: int, **kw) -> "SimConfig":
        return replace(self, level=level, **kw)


def _floats(text, lineno):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ParseError(f"expected numbers, got {text!r}", lineno) from None


def parse_config(text: str) -> SimConfig:
    raw: dict[str, dict[str, tuple[str, int]]] = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            section = m.group(1)
            if section not in SECTIONS:
                raise ParseError(f"unknown section [{section}]", lineno)
            if section in raw:
                raise ParseError(f"duplicate section [{section}]", lineno)
            raw[section] = {}
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        if section is None:
            raise ParseError("key outside of any section", lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in SECTIONS[section]:
            raise ParseError(f"unknown key {key!r} in [{section}]", lineno)
        raw[section][key] = (val, lineno)

    for sec, keys in REQUIRED.items():
        if sec not in raw:
            raise ParseError(f"missing required section [{sec}]")
        missing = keys - raw[sec].keys()
        if missing:
            raise ParseError(f"[{sec}] missing keys: {', '.join(sorted(missing))}")

    def num(sec, key, default=None, cast=float):
        if key not in raw.get(sec, {}):
            return default
        val, ln = raw[sec][key]
        try:
            return cast(val)
        except ValueError:
            raise ParseError(f"bad value for {key}: {val!r}", ln) from None

    gamma, r_sgc = num("gas", "gamma"), num("gas", "r_sgc")
    if not gamma > 1.0:
        raise ValidationError(f"gamma > 1 violated (gamma = {gamma})")
    if not r_sgc > 0.0:
        raise ValidationError(f"r_sgc > 0 violated (r_sgc = {r_sgc})")

    def domain(sec):
        st = PrimState(num(sec, "rho"), num(sec, "u"), num(sec, "p"))
        if not (st.rho > 0 and st.p > 0):
            raise ValidationError(f"[{sec}] initial rho and p must be positive")
        spec = DomainSpec(num(sec, "x_min"), num(sec, "x_max"), num(sec, "n0", cast=int), st)
        if not spec.x_max > spec.x_min:
            raise ValidationError(f"[{sec}] x_max > x_min violated")
        if spec.n0 < 1:
            raise ValidationError(f"[{sec}] n0 >= 1 violated")
        if "bump_x" in raw[sec] or "bump_values" in raw[sec]:
            if not ("bump_x" in raw[sec] and "bump_values" in raw[sec]):
                raise ValidationError(f"[{sec}] bump_x and bump_values go together")
            spec.bump_x = _floats(*raw[sec]["bump_x"])
            spec.bump_values = _floats(*raw[sec]["bump_values"])
            if len(spec.bump_x) != len(spec.bump_values) or len(spec.bump_x) < 3:
                raise ValidationError(f"[{sec}] bump needs >= 3 matching nodes")
            if spec.bump_values[0] != spec.bump_values[-1]:
                raise ValidationError(f"[{sec}] periodic bump needs equal end values")
        return spec

    left, right = domain("left"), domain("right")
    if left.x_max != 0.0 or right.x_min != 0.0:
        raise ValidationError("the interface must sit at x = 0 (left x_max = right x_min = 0)")

    kind = raw["interface"]["outtake"][0]
    params: dict = {}
    if kind == "constant":
        params["value"] = num("interface", "value", 0.0)
    elif kind == "trapezoid":
        for k in ("rate", "plateau", "t_plateau_end"):
            v = num("interface", k)
            if v is not None:
                params[k] = v
    elif kind == "periodic_spline":
        if "times" not in raw["interface"] or "values" not in raw["interface"]:
            raise ValidationError("periodic_spline outtake needs times and values")
        params["times"] = _floats(*raw["interface"]["times"])
        params["values"] = _floats(*raw["interface"]["values"])
        if min(params["values"]) < 0:
            raise ValidationError("outtake values must be non-negative")
    else:
        raise ValidationError(f"unknown outtake kind {kind!r}")
    try:
        profile = OuttakeProfile(kind, params)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None

    t_final = num("time", "t_final")
    c_cfl = num("time", "c_cfl")
    p_order = num("time", "p_order", 1, int)
    if t_final < 0:
        raise ValidationError("t_final >= 0 violated")
    if not 0.0 < c_cfl <= 1.0:
        raise ValidationError("c_cfl in (0, 1] violated")
    if p_order < 0:
        raise ValidationError("p_order >= 0 violated")
    coupling = raw.get("time", {}).get("coupling", ("grp", 0))[0]
    if coupling not in ("grp", "sync"):
        raise ValidationError("coupling must be 'grp' or 'sync'")
    concurrent = raw.get("time", {}).get("concurrent", ("false", 0))[0].lower() in (
        "1", "true", "yes")
    return SimConfig(
        gas=GasParams(gamma, r_sgc), left=left, right=right, outtake=profile,
        t_final=t_final, c_cfl=c_cfl, p_order=p_order,
        level=num("time", "level", 5, int),
        snapshot_interval=num("time", "snapshot_interval", 0.0),
        coupling=coupling, concurrent=concurrent,
        output_path=raw.get("output", {}).get("path", ("out", 0))[0],
    )


def load_config(path_or_name: str) -> SimConfig:
    """Load a config file, or one of the shipped cases by name (``case1``...)."""
    p = Path(path_or_name)
    if p.exists():
        return parse_config(p.read_text())
    name = path_or_name if path_or_name.endswith(".cfg") else path_or_name + ".cfg"
    try:
        text = resources.files("coupledgrp").joinpath("cases").joinpath(name).read_text()
    except FileNotFoundError:
        raise ValidationError(f"no such config file or shipped case: {path_or_name}") from None
    return parse_config(text)


def shipped_case(n: int) -> SimConfig:
    return load_config(f"case{n}")


# -- problem setup -----------------------------------------------------------

def cell_averages(spec: DomainSpec, n: int) -> np.ndarray:
    """Exact cell averages of the (possibly bumped) initial primitive state."""
    edges = np.linspace(spec.x_min, spec.x_max, n + 1)
    w = np.tile(np.asarray(spec.state, float), (n, 1))
    if spec.bump_x:
        sp = CubicSpline(spec.bump_x, spec.bump_values, bc_type="periodic")
        a = np.clip(edges[:-1], spec.bump_x[0], spec.bump_x[-1])
        b = np.clip(edges[1:], spec.bump_x[0], spec.bump_x[-1])
        integ = np.array([sp.integrate(lo, hi) if hi > lo else 0.0 for lo, hi in zip(a, b)])
        w[:, 0] += integ / np.diff(edges)
    return w


def build_problem(cfg: SimConfig, level: int | None = None, coupling: str | None = None,
                  snapshot_times=None):
    level = cfg.level if level is None else level
    nl = cfg.left.n0 * 2 ** level
    nr = cfg.right.n0 * 2 ** level
    lg = DomainGrid(cfg.left.x_min, cfg.left.x_max, nl, "L")
    rg = DomainGrid(cfg.right.x_min, cfg.right.x_max, nr, "R")
    wl = cell_averages(cfg.left, nl)
    wr = cell_averages(cfg.right, nr)
    g = cfg.gas
    if snapshot_times is None:
        snapshot_times = ()
        if cfg.snapshot_interval > 0:
            k = int(math.floor(cfg.t_final / cfg.snapshot_interval + 1e-9))
            snapshot_times = tuple(i * cfg.snapshot_interval for i in range(k + 1))
    prob = CoupledProblem(
        lg, rg,
        FarFieldSpec(PrimState(*map(float, wl[0]))),
        FarFieldSpec(PrimState(*map(float, wr[-1]))),
        cfg.outtake, c_cfl=cfg.c_cfl, p_order=cfg.p_order,
        mode=coupling or cfg.coupling, concurrent=cfg.concurrent,
        t_final=cfg.t_final, snapshot_times=tuple(snapshot_times))
    left = DomainState(0.0, prim_to_cons_arr(wl, g))
    right = DomainState(0.0, prim_to_cons_arr(wr, g))
    return prob, left, right


def simulate(cfg: SimConfig, level: int | None = None, coupling: str | None = None,
             snapshot_times=None, **kw) -> RunResult:
    prob, left, right = build_problem(cfg, level, coupling, snapshot_times)
    return run(prob, left, right, cfg.gas, **kw)


# -- errors --------------------------------------------------------------------

def _restrict(fine: np.ndarray, n_coarse: int) -> np.ndarray:
    n_fine = fine.shape[0]
    if n_fine % n_coarse:
        raise MismatchedDomains(f"{n_fine} cells cannot be restricted to {n_coarse}")
    return fine.reshape(n_coarse, n_fine // n_coarse, -1).mean(axis=1)


def l1_error(run_snap, ref_snap) -> float:
    """Max over conserved components of the summed L1 errors on both domains."""
    if abs(run_snap.t - ref_snap.t) > 1e-9 * max(1.0, abs(ref_snap.t)):
        raise MismatchedDomains("snapshots are at different times")
    total = np.zeros(3)
    for a, b, xa, xb in ((run_snap.left_cons, ref_snap.left_cons, run_snap.left_x, ref_snap.left_x),
                         (run_snap.right_cons, ref_snap.right_cons, run_snap.right_x, ref_snap.right_x)):
        dxa = xa[1] - xa[0]
        dxb = xb[1] - xb[0]
        if not (math.isclose(xa[0] - dxa / 2, xb[0] - dxb / 2, abs_tol=1e-9 * max(1, abs(xa[0])))
                and math.isclose(xa[-1] + dxa / 2, xb[-1] + dxb / 2,
                                 abs_tol=1e-9 * max(1, abs(xa[-1])))):
            raise MismatchedDomains("domain bounds differ")
        total += np.abs(a - _restrict(b, a.shape[0])).sum(axis=0) * dxa
    return float(total.max())


@dataclass
class ConvergenceReport:
    rows: list = field(default_factory=list)  # (level, err, eoc or None)

    @property
    def eocs(self) -> list:
        return [r[2] for r in self.rows if r[2] is not None]


def eoc_rows(levels, errs) -> ConvergenceReport:
    rows = []
    for i, (lv, e) in enumerate(zip(levels, errs)):
        eoc = None
        if i > 0:
            prev = errs[i - 1]
            eoc = math.log2(prev / e) if prev > 0 and e > 0 else float("nan")
        rows.append((lv, e, eoc))
    return ConvergenceReport(rows)


def _final(cfg, level, coupling):
    return simulate(cfg, level, coupling, snapshot_times=()).snapshots[-1]


def convergence_study(cfg: SimConfig, levels, ref_level: int, ref_mode: str = "sync",
                      jobs: int = 1) -> ConvergenceReport:
    """Errors of coupled-GRP runs against a finely resolved reference."""
    levels = list(levels)
    if ref_level <= max(levels):
        warnings.warn("reference level is not finer than the studied levels")
    tasks = [(ref_level, ref_mode)] + [(lv, "grp") for lv in levels]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = [ex.submit(_final, cfg, lv, mode) for lv, mode in tasks]
            snaps = [f.result() for f in futs]
    else:
        snaps = [_final(cfg, lv, mode) for lv, mode in tasks]
    ref, runs = snaps[0], snaps[1:]
    errs = [l1_error(s, ref) for s in runs]
    return eoc_rows(levels, errs)


# -- output ----------------------------------------------------------------------

SNAPSHOT_COLUMNS = ("t", "domain", "x_center", "rho", "u", "p", "mom", "energy")


def write_snapshot_csv(path, snap) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SNAPSHOT_COLUMNS)
        for dom, x, prim, cons in (("L", snap.left_x, snap.left, snap.left_cons),
                                   ("R", snap.right_x, snap.right, snap.right_cons)):
            for i in range(len(x)):
                w.writerow([repr(snap.t), dom, repr(float(x[i])), *(repr(float(v)) for v in prim[i]),
                            repr(float(cons[i, 1])), repr(float(cons[i, 2]))])


def write_run(out_dir, snaps) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "index.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("index", "t", "file"))
        for i, s in enumerate(snaps):
            name = f"snapshot_{i:04d}.csv"
            write_snapshot_csv(out / name, s)
            w.writerow((i, repr(s.t), name))
    return out / "index.csv"


def read_snapshot_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return rows


def write_convergence_csv(path, report: ConvergenceReport) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("level", "err", "eoc"))
        for lv, err, eoc in report.rows:
            w.writerow((lv, repr(err), "" if eoc is None else f"{eoc:.4f}"))
