"""Test-case construction and batch orchestration.

Builds the rising-bubble cases (single-fluid reference, full bubble,
half bubble) and the 0-D sweep, runs scheme batches from freshly built
initial states, and writes all diagnostics artifacts: per-run
diagnostics CSVs, optional field dumps, the envelope CSV, the empirical
property table and the scheme-comparison table for the full bubble.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields

import numpy as np

from . import grid as gr
from . import solver as sv
from . import sweep as sw
from .grid import CourantError, Grid2D
from .kernels import TransferError
from .schemes import SchemeConfig, all_schemes, scheme_by_name
from .solver import (DiffusiveClosure, NoClosure, RelabelClosure,
                     SolverBlowup)

CASES = ("single_fluid", "full_bubble", "half_bubble", "sweep")
PRESETS = {
    # nx, nz, dx=dz (m), dt (s)
    "desk": (50, 25, 400.0, 8.0),
    "paper": (200, 100, 100.0, 2.0),
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    case: str = "full_bubble"
    scheme: str = "4"            # '1'..'6', a variant label, or 'all20'
    preset: str = "desk"
    nx: int | None = None        # overrides for the preset geometry
    nz: int | None = None
    dx: float | None = None
    dt: float | None = None
    t_end: float = 1000.0
    out: str = "out"
    dump_every: int = 0          # steps between field dumps; 0 = none
    points_per_axis: int = 50    # sweep resolution
    theta0: float = 300.0        # K, background potential temperature
    p_surface: float = 1.0e5     # Pa
    amplitude: float = 2.0       # K, bubble anomaly
    sigma_min: float = 0.1       # relabel closure target fraction
    k_sigma: float = 200.0       # m^2 s^-1, diffusive closure coefficient
    alpha: float = 0.5           # Crank-Nicolson off-centering
    literal_bubble: bool = False  # unsquared distance-formula variant

    def __post_init__(self):
        if self.case not in CASES:
            raise ConfigError(f"case: must be one of {CASES}, got {self.case!r}")
        if self.preset not in PRESETS:
            raise ConfigError(f"preset: must be one of {tuple(PRESETS)}, "
                              f"got {self.preset!r}")
        if self.timestep <= 0:
            raise ConfigError("dt: must be positive")
        if self.t_end < 0:
            raise ConfigError("t_end: must be non-negative")
        n = self.t_end / self.timestep
        if abs(n - round(n)) > 1e-9:
            raise ConfigError("t_end: must be a multiple of dt")
        if self.dump_every < 0:
            raise ConfigError("dump_every: must be non-negative")
        if self.points_per_axis < 2:
            raise ConfigError("points_per_axis: must be at least 2")
        if self.scheme != "all20":
            scheme_by_name(self.scheme)  # raises on unknown names

    @property
    def timestep(self) -> float:
        return self.dt if self.dt is not None else PRESETS[self.preset][3]

    @property
    def n_steps(self) -> int:
        return round(self.t_end / self.timestep)

    def grid(self) -> Grid2D:
        nx0, nz0, dx0, _ = PRESETS[self.preset]
        nx = self.nx if self.nx is not None else nx0
        nz = self.nz if self.nz is not None else nz0
        dx = self.dx if self.dx is not None else dx0
        # fixed 2:1 domain, horizontally centred on x = 0
        return Grid2D(nx, nz, dx, dx, x0=-0.5 * nx * dx, z0=0.0)

    def schemes(self) -> list[SchemeConfig]:
        if self.scheme == "all20":
            return all_schemes()
        return [scheme_by_name(self.scheme)]


def config_from_file(path, overrides: dict | None = None) -> RunConfig:
    """Flat key=value config with '#' comments; overrides win."""
    known = {f.name: f.type for f in fields(RunConfig)}
    raw: dict = {}
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, "
                                  f"got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in known:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            raw[key] = value
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})
    return _coerce_config(raw)


def _coerce_config(raw: dict) -> RunConfig:
    kwargs = {}
    for f in fields(RunConfig):
        if f.name not in raw:
            continue
        value = raw[f.name]
        if isinstance(value, str):
            if f.name in ("nx", "nz", "dump_every", "points_per_axis"):
                value = int(value)
            elif f.name in ("dx", "dt", "t_end", "theta0", "p_surface",
                            "amplitude", "sigma_min", "k_sigma", "alpha"):
                value = float(value)
            elif f.name == "literal_bubble":
                value = value.lower() in ("1", "true", "yes")
        kwargs[f.name] = value
    return RunConfig(**kwargs)


# --- case construction ------------------------------------------------------

def bubble_geometry(grid: Grid2D):
    """Anomaly centred horizontally, 2 km up, with 2 km radii."""
    return (0.5 * (2 * grid.x0 + grid.nx * grid.dx) + 0.0, 2000.0), \
        (2000.0, 2000.0)


def build_case(cfg: RunConfig):
    """Returns (initial ModelState, closure, scheme list); the sweep
    case has no grid state and returns (None, None, schemes)."""
    if cfg.case == "sweep":
        return None, None, cfg.schemes()
    grid = cfg.grid()
    base = sv.hydrostatic_init(grid, cfg.theta0, cfg.p_surface)
    center, radii = bubble_geometry(grid)
    if cfg.case == "single_fluid":
        state = sv.apply_bubble_perturbation(
            base, center, radii, cfg.amplitude, target=(1,),
            literal=cfg.literal_bubble)
        return state, NoClosure(), cfg.schemes()
    if cfg.case == "full_bubble":
        state = sv.apply_bubble_perturbation(
            base, center, radii, cfg.amplitude, target=(1,),
            literal=cfg.literal_bubble)
        return state, RelabelClosure(cfg.sigma_min), cfg.schemes()
    # half bubble: half of the mass inside the anomaly region belongs to
    # fluid 1 and carries the warm anomaly; fluid 0 holds the rest
    state = sv.apply_bubble_perturbation(
        base, center, radii, cfg.amplitude, target=(1,),
        literal=cfg.literal_bubble)
    L = sv.bubble_distance(grid, center, radii, cfg.literal_bubble)
    sigma1 = np.where(L < 1, 0.5, 0.0)
    rho = state.eta[1].copy()
    state.eta[1] = sigma1 * rho
    state.eta[0] = (1 - sigma1) * rho
    state.theta[0] = np.full_like(state.theta[0], cfg.theta0)
    return state, DiffusiveClosure(cfg.k_sigma), cfg.schemes()


# --- running ----------------------------------------------------------------

BLOWUP_ERRORS = (SolverBlowup, CourantError, TransferError,
                 FloatingPointError)


@dataclass
class RunResult:
    scheme: SchemeConfig | None
    energies: list            # EnergyBudget per step (index 0 = t=0)
    blowup: bool = False
    blowup_reason: str = ""
    steps_completed: int = 0
    final_state: sv.ModelState | None = None

    def de_rsf(self, step: int, reference: "RunResult"):
        """Relative energy difference from the reference run at a step."""
        if step >= len(self.energies) or step >= len(reference.energies):
            return math.inf
        return ((self.energies[step].total - reference.energies[step].total)
                / reference.energies[0].total)


def run_case(state0: sv.ModelState, closure, scheme: SchemeConfig | None,
             cfg: RunConfig, diag_path=None, reference: RunResult | None = None,
             dump_dir=None) -> RunResult:
    """Integrate one scheme from a fresh copy of the initial state,
    streaming diagnostics rows; blow-ups are recorded, not raised."""
    state = state0.copy()
    result = RunResult(scheme, [sv.energy_budget(state)])
    writer = _DiagnosticsWriter(diag_path, reference) if diag_path else None
    try:
        if writer:
            writer.row(state, result)
        _maybe_dump(state, cfg, dump_dir, 0)
        for n in range(cfg.n_steps):
            state, _ = sv.step(state, closure, scheme, cfg.timestep,
                               alpha=cfg.alpha)
            budget = sv.energy_budget(state)
            if not math.isfinite(budget.total):
                raise SolverBlowup(f"non-finite energy at step {n + 1}", n + 1)
            result.energies.append(budget)
            result.steps_completed = n + 1
            if writer:
                writer.row(state, result)
            _maybe_dump(state, cfg, dump_dir, n + 1)
    except BLOWUP_ERRORS as err:
        result.blowup = True
        result.blowup_reason = str(err)
    finally:
        if writer:
            writer.close()
    result.final_state = state
    if reference is not None and result.energies:
        last = result.de_rsf(result.steps_completed, reference)
        if not math.isfinite(last) or abs(last) > 1.0:
            result.blowup = True
            result.blowup_reason = result.blowup_reason or (
                f"relative energy departure {last:.3g}")
    return result


class _DiagnosticsWriter:
    HEADER = ("step,time,E_P,E_I,E_K,E_total,dE_rel_from_IC,dE_RSF,"
              "min_eta_0,min_eta_1,max_abs_w\n")

    def __init__(self, path, reference: RunResult | None):
        try:
            self.f = open(path, "w")
        except OSError as err:
            raise OSError(f"cannot write diagnostics CSV to {path}: {err}") \
                from err
        self.reference = reference
        self.f.write(self.HEADER)

    def row(self, state: sv.ModelState, result: RunResult):
        n = state.step_index
        b = result.energies[n]
        de_ic = (b.total - result.energies[0].total) / result.energies[0].total
        rsf = ("%.17g" % result.de_rsf(n, self.reference)
               if self.reference is not None else "")
        w_max = max(np.abs(state.w[0]).max(), np.abs(state.w[1]).max())
        self.f.write("%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g\n"
                     % (n, state.time, b.e_p, b.e_i, b.e_k, b.total,
                        de_ic, rsf, state.eta[0].min(), state.eta[1].min(),
                        w_max))

    def close(self):
        self.f.close()


DUMP_QUANTITIES = ("theta_1", "sigma_0", "u_1", "w_1")


def _maybe_dump(state: sv.ModelState, cfg: RunConfig, dump_dir, step: int):
    if not dump_dir or not cfg.dump_every:
        return
    if step % cfg.dump_every != 0 and step != cfg.n_steps:
        return
    os.makedirs(dump_dir, exist_ok=True)
    total = state.eta[0] + state.eta[1]
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma0 = np.where(total > 0, state.eta[0] / total, 0.0)
    for name, values in (
            ("theta_1", state.theta[1]),
            ("sigma_0", sigma0),
            ("u_1", gr.xfaces_to_centers(state.u[1])),
            ("w_1", gr.zfaces_to_centers(state.w[1]))):
        gr.emit_field_csv(values, state.grid, name, state.time,
                          os.path.join(dump_dir, f"{name}_{step:05d}.csv"))


# --- batch entry points -----------------------------------------------------

def run(cfg: RunConfig) -> int:
    """Execute a config end to end; returns a process exit status."""
    os.makedirs(cfg.out, exist_ok=True)
    if cfg.case == "sweep":
        envelopes = sw.run_sweep(
            sw.SweepConfig(points_per_axis=cfg.points_per_axis),
            cfg.schemes())
        sw.emit_envelope_csv(envelopes, os.path.join(cfg.out, "envelope.csv"))
        return 0

    state0, closure, schemes = build_case(cfg)
    reference = None
    if cfg.case == "full_bubble":
        # degenerate run with the inert-fluid closure disabled is the
        # single-fluid reference for the energy comparison
        reference = run_case(
            state0, NoClosure(), None, cfg,
            diag_path=os.path.join(cfg.out, "single_fluid_reference.csv"))
        if reference.blowup:
            print("single-fluid reference failed: " + reference.blowup_reason)
            return 1
    if cfg.case == "single_fluid":
        result = run_case(state0, closure, None, cfg,
                          diag_path=os.path.join(cfg.out, "diagnostics.csv"),
                          dump_dir=os.path.join(cfg.out, "fields"))
        if result.blowup:
            print("run failed: " + result.blowup_reason)
            return 1
        return 0

    rows = []
    failed = False
    for scheme in schemes:
        run_dir = os.path.join(cfg.out, scheme.label)
        os.makedirs(run_dir, exist_ok=True)
        result = run_case(state0, closure, scheme, cfg,
                          diag_path=os.path.join(run_dir, "diagnostics.csv"),
                          reference=reference,
                          dump_dir=os.path.join(run_dir, "fields"))
        rows.append((scheme, result))
        if result.blowup and len(schemes) == 1:
            failed = True
        status = ("blew up: " + result.blowup_reason if result.blowup
                  else "completed %d steps" % result.steps_completed)
        print(f"{scheme.label}: {status}")
    if cfg.case == "full_bubble":
        _emit_comparison_csv(rows, reference,
                             os.path.join(cfg.out, "scheme_comparison.csv"))
    return 1 if failed else 0


def _emit_comparison_csv(rows, reference: RunResult, path):
    """Per-scheme energy departure from the single-fluid reference at
    step 1 and at the end of the run, plus the blow-up flag."""
    with open(path, "w") as f:
        f.write("scheme_id,dE_RSF_step1,dE_RSF_end,blowup\n")
        for scheme, result in rows:
            d1 = result.de_rsf(1, reference) if result.steps_completed >= 1 \
                else math.inf
            dend = result.de_rsf(result.steps_completed, reference) \
                if not result.blowup else math.inf
            f.write("%s,%.17g,%.17g,%d\n"
                    % (scheme.label, d1, dend, int(result.blowup)))


def classify(cfg: RunConfig, out_path=None) -> dict:
    """Sweep all 20 schemes and emit the empirical property table."""
    envelopes = sw.run_sweep(sw.SweepConfig(points_per_axis=cfg.points_per_axis),
                             all_schemes())
    table = sw.classify_schemes(envelopes)
    if out_path is None:
        os.makedirs(cfg.out, exist_ok=True)
        out_path = os.path.join(cfg.out, "properties.csv")
    with open(out_path, "w") as f:
        f.write("scheme_id,positive_eta,bounded,momentum_ie,ke_decreases\n")
        for label, props in table.items():
            f.write("%s,%s,%s,%s,%s\n" % (label, props.positive_eta,
                                          props.bounded, props.momentum_ie,
                                          props.ke_decreases))
    return table
