"""Two-fluid compressible Euler integrator on the C-grid.

Time stepping: iterated semi-implicit Crank-Nicolson. Each outer
iteration recomputes advective tendencies with van Leer reconstruction,
then solves a linearized Helmholtz problem for the Exner increment so
that the equation of state holds with the implicitly updated momentum
and mass. Transfers are operator split: they act on the post-dynamics
(m) state and also relabel the stored tendencies so the next step's
explicit Crank-Nicolson contribution stays consistent with the
relabeled fluids.

Mass, potential temperature and the velocity components are prognostic
per fluid; the Exner pressure is shared. Walls on all four sides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import grid as gr
from . import kernels
from .constants import CONST
from .grid import FaceField, Grid2D
from .schemes import Method, SchemeConfig, TimeLevel


class SolverBlowup(RuntimeError):
    def __init__(self, message, step=None, fieldname=None):
        super().__init__(message)
        self.step = step
        self.fieldname = fieldname


@dataclass
class Tendencies:
    eta: list
    theta: list
    u: list
    w: list

    @classmethod
    def zeros(cls, grid: Grid2D):
        return cls(eta=[grid.zeros_c() for _ in range(2)],
                   theta=[grid.zeros_c() for _ in range(2)],
                   u=[grid.zeros_fx() for _ in range(2)],
                   w=[grid.zeros_fz() for _ in range(2)])

    def copy(self):
        return Tendencies(**{k: [a.copy() for a in getattr(self, k)]
                             for k in ("eta", "theta", "u", "w")})


@dataclass
class ModelState:
    grid: Grid2D
    eta: list      # per-fluid center fields (kg m^-3)
    theta: list    # per-fluid center fields (K)
    u: list        # per-fluid x-face velocities (m s^-1)
    w: list        # per-fluid z-face velocities (m s^-1)
    pi: np.ndarray  # shared Exner pressure at centers
    tend: Tendencies = None
    time: float = 0.0
    step_index: int = 0

    def __post_init__(self):
        if self.tend is None:
            self.tend = Tendencies.zeros(self.grid)

    def copy(self):
        return ModelState(self.grid,
                          [a.copy() for a in self.eta],
                          [a.copy() for a in self.theta],
                          [a.copy() for a in self.u],
                          [a.copy() for a in self.w],
                          self.pi.copy(), self.tend.copy(),
                          self.time, self.step_index)

    def check_finite(self):
        for name in ("eta", "theta", "u", "w"):
            for i, a in enumerate(getattr(self, name)):
                if not np.all(np.isfinite(a)):
                    raise SolverBlowup(
                        f"non-finite {name}[{i}] at step {self.step_index}",
                        self.step_index, f"{name}[{i}]")
        if not np.all(np.isfinite(self.pi)):
            raise SolverBlowup(f"non-finite pi at step {self.step_index}",
                               self.step_index, "pi")


# --- closures ---------------------------------------------------------------

@dataclass(frozen=True)
class NoClosure:
    pass


@dataclass(frozen=True)
class RelabelClosure:
    sigma_min: float = 0.1

    def __post_init__(self):
        if not 0 < self.sigma_min < 1:
            raise ValueError("sigma_min must lie in (0, 1)")


@dataclass(frozen=True)
class DiffusiveClosure:
    k_sigma: float = 200.0  # m^2 s^-1

    def __post_init__(self):
        if self.k_sigma < 0:
            raise ValueError("k_sigma must be non-negative")


# --- initialization ---------------------------------------------------------

_BETA = (1 - CONST.kappa) / CONST.kappa  # exponent in p0*pi^beta = R*sum(eta*theta)


def hydrostatic_init(grid: Grid2D, theta_profile=300.0,
                     p_surface: float = CONST.p0) -> ModelState:
    """Balanced resting state with all mass in fluid 1.

    The Exner pressure satisfies the discrete face-by-face balance
    c_p*[theta]_f*dpi/dz = -g, so the first momentum update produces no
    acceleration; mass follows from the equation of state exactly.
    """
    theta_col = np.broadcast_to(np.asarray(theta_profile, dtype=float),
                                (grid.nz,)).copy()
    if np.any(theta_col <= 0):
        raise ValueError("theta profile must be positive")
    pi_col = np.empty(grid.nz)
    pi_surf = (p_surface / CONST.p0) ** CONST.kappa
    pi_col[0] = pi_surf - CONST.g * 0.5 * grid.dz / (CONST.c_p * theta_col[0])
    for k in range(1, grid.nz):
        theta_f = 0.5 * (theta_col[k - 1] + theta_col[k])
        pi_col[k] = pi_col[k - 1] - CONST.g * grid.dz / (CONST.c_p * theta_f)
    pi = np.broadcast_to(pi_col, (grid.nx, grid.nz)).copy()
    theta = np.broadcast_to(theta_col, (grid.nx, grid.nz)).copy()
    rho = CONST.p0 * pi ** _BETA / (CONST.R * theta)
    return ModelState(grid,
                      eta=[np.zeros_like(rho), rho],
                      theta=[theta.copy(), theta.copy()],
                      u=[grid.zeros_fx(), grid.zeros_fx()],
                      w=[grid.zeros_fz(), grid.zeros_fz()],
                      pi=pi)


def bubble_distance(grid: Grid2D, center, radii, literal: bool = False):
    """Normalized distance L to the bubble center at cell centers. The
    default uses squared coordinate ratios; literal=True reproduces the
    unsquared variant."""
    x, z = grid.center_mesh()
    xc, zc = center
    xr, zr = radii
    if literal:
        arg = (x - xc) / xr + (z - zc) / zr
        return np.sqrt(np.maximum(arg, 0.0))
    return np.sqrt(((x - xc) / xr) ** 2 + ((z - zc) / zr) ** 2)


def apply_bubble_perturbation(state: ModelState, center, radii,
                              amplitude: float = 2.0, target=(1,),
                              literal: bool = False) -> ModelState:
    """Add theta' = amplitude*cos^2(pi*L/2) where L <= 1 to the target
    fluid(s); pressure and mass are left for the first solve to adjust."""
    out = state.copy()
    L = bubble_distance(state.grid, center, radii, literal)
    pert = np.where(L <= 1, amplitude * np.cos(np.pi * L / 2) ** 2, 0.0)
    for i in target:
        out.theta[i] = out.theta[i] + pert
    return out


# --- transfer-rate closures -------------------------------------------------

def fluid_density(state: ModelState, i: int):
    """rho_i from the equation of state; an empty fluid takes the
    mass-weighted mixture density so sigma_min*rho is well defined."""
    rho = CONST.p0 * state.pi ** _BETA / (CONST.R * state.theta[i])
    mixture = state.eta[0] + state.eta[1]
    return np.where(state.eta[i] == 0, mixture, rho)


def _laplacian(f, grid: Grid2D):
    """5-point Laplacian with zero-gradient walls."""
    g = np.pad(f, 1, mode="edge")
    return ((g[2:, 1:-1] - 2 * f + g[:-2, 1:-1]) / grid.dx ** 2
            + (g[1:-1, 2:] - 2 * f + g[1:-1, :-2]) / grid.dz ** 2)


def compute_transfer_rates(state: ModelState, closure, dt: float):
    """Per-cell unidirectional rates (S01, S10) in s^-1."""
    zero = state.grid.zeros_c()
    if isinstance(closure, NoClosure) or closure is None:
        return zero, zero.copy()
    if isinstance(closure, RelabelClosure):
        rho0 = fluid_density(state, 0)
        excess = np.maximum(0.0, closure.sigma_min * rho0 - state.eta[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            s10 = excess / (dt * state.eta[1])
        s10 = np.where(state.eta[1] > 0, s10, 0.0)
        return zero, s10
    if isinstance(closure, DiffusiveClosure):
        lap = _laplacian(state.eta[1] - state.eta[0], state.grid)
        out = []
        for i, sgn in ((0, 1.0), (1, -1.0)):
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                s = 0.5 * closure.k_sigma / state.eta[i] * np.maximum(0.0, sgn * lap)
            out.append(np.where(state.eta[i] > 0, s, 0.0))
        return out[0], out[1]
    raise TypeError(f"unknown closure {closure!r}")


# --- dynamics ---------------------------------------------------------------

def _u_grid_velocities(u, w, grid):
    """Advecting velocities on the faces of the x-face (u) control
    volumes: x-faces coincide with cell centers, z-faces with corners."""
    nx, nz = grid.nx, grid.nz
    vx = np.zeros((nx + 2, nz))
    vx[1:-1] = 0.5 * (u[:-1] + u[1:])
    vz = np.zeros((nx + 1, nz + 1))
    vz[1:-1, :] = 0.5 * (w[:-1, :] + w[1:, :])
    vz[0, :] = w[0, :]
    vz[-1, :] = w[-1, :]
    return vx, vz


def _w_grid_velocities(u, w, grid):
    nx, nz = grid.nx, grid.nz
    vx = np.zeros((nx + 1, nz + 1))
    vx[:, 1:-1] = 0.5 * (u[:, :-1] + u[:, 1:])
    vx[:, 0] = u[:, 0]
    vx[:, -1] = u[:, -1]
    vz = np.zeros((nx, nz + 2))
    vz[:, 1:-1] = 0.5 * (w[:, :-1] + w[:, 1:])
    return vx, vz


def _pin_walls(u, w):
    u[0, :] = 0.0
    u[-1, :] = 0.0
    w[:, 0] = 0.0
    w[:, -1] = 0.0


def _helmholtz_solve(diag, couplings, coef, rhs, grid: Grid2D):
    """Solve (diag - coef*sum_i m_i*div(D_i grad)) dpi = rhs with
    zero-flux walls; couplings is a list of (center multiplier m_i,
    face coefficient FaceField D_i) pairs."""
    nx, nz = grid.nx, grid.nz
    n = nx * nz
    idx = np.arange(n).reshape(nx, nz)
    main = diag.astype(float).copy()
    rows, cols, vals = [], [], []
    for mult, d_faces in couplings:
        ax = coef * d_faces.x[1:-1, :] / grid.dx ** 2
        az = coef * d_faces.z[:, 1:-1] / grid.dz ** 2
        main[:-1, :] += mult[:-1, :] * ax
        main[1:, :] += mult[1:, :] * ax
        main[:, :-1] += mult[:, :-1] * az
        main[:, 1:] += mult[:, 1:] * az
        rows += [idx[:-1, :].ravel(), idx[1:, :].ravel(),
                 idx[:, :-1].ravel(), idx[:, 1:].ravel()]
        cols += [idx[1:, :].ravel(), idx[:-1, :].ravel(),
                 idx[:, 1:].ravel(), idx[:, :-1].ravel()]
        vals += [-(mult[:-1, :] * ax).ravel(), -(mult[1:, :] * ax).ravel(),
                 -(mult[:, :-1] * az).ravel(), -(mult[:, 1:] * az).ravel()]
    mat = (sp.coo_matrix((np.concatenate(vals),
                          (np.concatenate(rows), np.concatenate(cols))),
                         shape=(n, n)).tocsr()
           + sp.diags(main.ravel()))
    sol = spla.spsolve(mat.tocsc(), rhs.ravel())
    if not np.all(np.isfinite(sol)):
        raise SolverBlowup("Helmholtz solve returned non-finite increment")
    res = mat @ sol - rhs.ravel()
    denom = np.abs(rhs).max() + np.abs(main).max() * (np.abs(sol).max() + 1e-300)
    return sol.reshape(nx, nz), np.abs(res).max() / denom


@dataclass
class DynamicsDiagnostics:
    eos_residual: float = 0.0
    helmholtz_residual: float = 0.0
    courant: float = 0.0


def dynamics_substep(state: ModelState, dt: float, alpha: float = 0.5,
                     n_outer: int = 2) -> tuple[ModelState, DynamicsDiagnostics]:
    """Advance advection, pressure gradient and gravity to level m
    (transfer terms excluded); updates the stored tendencies."""
    g2 = state.grid
    cp = CONST.c_p
    t = state.tend

    eta_e = [state.eta[i] + dt * (1 - alpha) * t.eta[i] for i in range(2)]
    theta_e = [state.theta[i] + dt * (1 - alpha) * t.theta[i] for i in range(2)]
    u_e = [state.u[i] + dt * (1 - alpha) * t.u[i] for i in range(2)]
    w_e = [state.w[i] + dt * (1 - alpha) * t.w[i] for i in range(2)]

    eta_k = [a.copy() for a in state.eta]
    theta_k = [a.copy() for a in state.theta]
    u_k = [a.copy() for a in state.u]
    w_k = [a.copy() for a in state.w]
    pi_k = state.pi.copy()
    diag = DynamicsDiagnostics()

    for _ in range(n_outer):
        eta_star, theta_star = [], []
        u_star, w_star = [], []
        e_faces, thetaf = [], []
        for i in range(2):
            vel = FaceField(u_k[i], w_k[i])
            diag.courant = max(diag.courant, gr.check_courant(vel, g2, dt))
            a_eta = (gr.advect_vanleer(eta_k[i], vel, g2, dt, check=False)
                     - eta_k[i]) / dt
            # theta advects in advective form: the tendency depends only
            # on the fluid's own theta and velocities, so fluids in
            # identical states stay bitwise identical
            a_theta = gr.advective_tendency(theta_k[i], u_k[i], w_k[i],
                                            g2.dx, g2.dz, dt)
            vxu, vzu = _u_grid_velocities(u_k[i], w_k[i], g2)
            a_u = gr.advective_tendency(u_k[i], vxu, vzu, g2.dx, g2.dz, dt)
            vxw, vzw = _w_grid_velocities(u_k[i], w_k[i], g2)
            a_w = gr.advective_tendency(w_k[i], vxw, vzw, g2.dx, g2.dz, dt)

            eta_star.append(eta_e[i] + alpha * dt * a_eta)
            th = theta_e[i] + alpha * dt * a_theta
            theta_star.append(th)
            u_star.append(u_e[i] + alpha * dt * a_u)
            w_star.append(w_e[i] + alpha * dt * (a_w - CONST.g))
            e_faces.append(gr.to_faces(eta_k[i], g2))
            thetaf.append(gr.to_faces(th, g2))

        grad_pik = gr.gradient(pi_k, g2)
        rhs = -CONST.p0 * pi_k ** _BETA
        couplings = []
        d0 = []
        for i in range(2):
            d0u = (u_star[i] - alpha * dt * cp * thetaf[i].x * grad_pik.x) - u_k[i]
            d0w = (w_star[i] - alpha * dt * cp * thetaf[i].z * grad_pik.z) - w_k[i]
            d0i = FaceField(d0u, d0w)
            _pin_walls(d0i.x, d0i.z)
            d0.append(d0i)
            # Theta^m = eta^m * theta^m with theta^m = theta* fixed, so
            # the pressure coupling enters through the mass equation only
            corr = theta_star[i] * gr.divergence(
                FaceField(e_faces[i].x * d0i.x, e_faces[i].z * d0i.z), g2)
            rhs += CONST.R * (eta_star[i] * theta_star[i] - alpha * dt * corr)
            couplings.append((theta_star[i],
                              FaceField(e_faces[i].x * thetaf[i].x,
                                        e_faces[i].z * thetaf[i].z)))

        diag_coef = CONST.p0 * _BETA * pi_k ** (_BETA - 1)
        coef = (alpha * dt) ** 2 * cp * CONST.R
        dpi, diag.helmholtz_residual = _helmholtz_solve(
            diag_coef, couplings, coef, rhs, g2)
        pi_k = pi_k + dpi
        grad_pi = gr.gradient(pi_k, g2)
        for i in range(2):
            u_new = u_star[i] - alpha * dt * cp * thetaf[i].x * grad_pi.x
            w_new = w_star[i] - alpha * dt * cp * thetaf[i].z * grad_pi.z
            _pin_walls(u_new, w_new)
            du = FaceField(u_new - u_k[i], w_new - w_k[i])
            eta_k[i] = eta_star[i] - alpha * dt * gr.divergence(
                FaceField(e_faces[i].x * du.x, e_faces[i].z * du.z), g2)
            theta_k[i] = theta_star[i]
            u_k[i] = u_new
            w_k[i] = w_new

    # repair tiny undershoots of the linearized mass corrector by
    # relabeling the deficit from the other fluid in the same cell
    # (conserves cell mass exactly; bitwise no-op when nothing is
    # negative); a cell negative in total is left for the blow-up check
    for i, j in ((0, 1), (1, 0)):
        deficit = np.minimum(eta_k[i], 0.0)
        move = np.maximum(deficit, -np.maximum(eta_k[j], 0.0))
        eta_k[i] = eta_k[i] - move
        eta_k[j] = eta_k[j] + move

    out = ModelState(g2, eta_k, theta_k, u_k, w_k, pi_k,
                     tend=state.tend.copy(), time=state.time + dt,
                     step_index=state.step_index + 1)
    for name, new, old in (("eta", eta_k, state.eta), ("theta", theta_k, state.theta),
                           ("u", u_k, state.u), ("w", w_k, state.w)):
        stored = getattr(out.tend, name)
        for i in range(2):
            stored[i] = ((new[i] - old[i]) / dt
                         - (1 - alpha) * getattr(t, name)[i]) / alpha
    out.check_finite()
    eos = np.abs(CONST.p0 * pi_k ** _BETA
                 - CONST.R * (eta_k[0] * theta_k[0] + eta_k[1] * theta_k[1]))
    diag.eos_residual = float((eos / (CONST.p0 * pi_k ** _BETA)).max())
    return out, diag


# --- transfers on the grid --------------------------------------------------

def _clip_rates_explicit(s01, s10, dt):
    """Limit dt*S <= 1 so explicit-mass schemes keep positive mass (the
    rate is a closure, capping it is a closure choice)."""
    cap = (1.0 - 1e-12) / dt
    return np.minimum(s01, cap), np.minimum(s10, cap)


def transfer_substep(state_m: ModelState, s01, s10, dt: float,
                     cfg: SchemeConfig, strict: bool = True) -> ModelState:
    """Apply cell mass/temperature transfers, face velocity transfers
    and the tendency relabeling; returns the n+1 state (pi unchanged:
    transfers preserve sum(eta*theta), so the equation of state still
    holds)."""
    g2 = state_m.grid
    if strict and cfg.alpha_c == 0:
        s01, s10 = _clip_rates_explicit(s01, s10, dt)
    pair = kernels.PairState(eta=tuple(state_m.eta),
                             theta=tuple(state_m.theta),
                             u=tuple(state_m.theta))  # u slot unused here
    prates = kernels.TransferRates(s01=s01, s10=s10, dt=dt)
    outcome = kernels.apply_scheme(pair, prates, cfg)
    eta_new = list(outcome.state.eta)
    theta_new = list(outcome.state.theta)

    t = state_m.tend.copy()
    lam_c01 = outcome.lambda01
    lam_c10 = outcome.lambda10
    ge0 = (1 - lam_c01) * t.eta[0] + lam_c10 * t.eta[1]
    ge1 = (1 - lam_c10) * t.eta[1] + lam_c01 * t.eta[0]
    t.eta = [ge0, ge1]

    if cfg.method is Method.METHOD1:
        eta_q = state_m.eta if cfg.q is TimeLevel.M else eta_new
        eta_r = state_m.eta if cfg.r is TimeLevel.M else eta_new
        nu01f, nu10f = gr.nu_face_fields(s01, s10, eta_q, eta_r, dt,
                                         cfg.alpha_a, g2)
        u0, u1 = gr.face_transfer_method1(state_m.u[0], state_m.u[1],
                                          nu01f.x, nu10f.x)
        w0, w1 = gr.face_transfer_method1(state_m.w[0], state_m.w[1],
                                          nu01f.z, nu10f.z)
        nu01c, nu10c = outcome.nu01, outcome.nu10
        t.theta = [_m1_tend(t.theta[0], t.theta[1], nu10c),
                   _m1_tend(t.theta[1], t.theta[0], nu01c)]
        t.u = [_m1_tend(t.u[0], t.u[1], nu10f.x),
               _m1_tend(t.u[1], t.u[0], nu01f.x)]
        t.w = [_m1_tend(t.w[0], t.w[1], nu10f.z),
               _m1_tend(t.w[1], t.w[0], nu01f.z)]
    else:
        s01f = gr.to_faces(s01, g2)
        s10f = gr.to_faces(s10, g2)
        eta0f = gr.to_faces(state_m.eta[0], g2)
        eta1f = gr.to_faces(state_m.eta[1], g2)
        lc01 = {c: kernels.lambda_coeff(getattr(s01f, c), getattr(s10f, c),
                                        dt, cfg.alpha_c) for c in "xz"}
        lc10 = {c: kernels.lambda_coeff(getattr(s10f, c), getattr(s01f, c),
                                        dt, cfg.alpha_c) for c in "xz"}
        la01 = {c: kernels.lambda_coeff(getattr(s01f, c), getattr(s10f, c),
                                        dt, cfg.alpha_a) for c in "xz"}
        la10 = {c: kernels.lambda_coeff(getattr(s10f, c), getattr(s01f, c),
                                        dt, cfg.alpha_a) for c in "xz"}
        u0, u1, n0x, n1x = gr.face_transfer_method2(
            state_m.u[0], state_m.u[1], eta0f.x, eta1f.x,
            lc01["x"], lc10["x"], la01["x"], la10["x"])
        w0, w1, n0z, n1z = gr.face_transfer_method2(
            state_m.w[0], state_m.w[1], eta0f.z, eta1f.z,
            lc01["z"], lc10["z"], la01["z"], la10["z"])

        # tendency relabeling, mass-weighted form
        lac01 = kernels.lambda_coeff(s01, s10, dt, cfg.alpha_a)
        lac10 = kernels.lambda_coeff(s10, s01, dt, cfg.alpha_a)
        t.theta = [_m2_tend(t.theta[0], t.theta[1], state_m.eta[0],
                            state_m.eta[1], lac01, lac10,
                            lam_c01, lam_c10, eta_new[0]),
                   _m2_tend(t.theta[1], t.theta[0], state_m.eta[1],
                            state_m.eta[0], lac10, lac01,
                            lam_c10, lam_c01, eta_new[1])]
        t.u = [_m2_tend(t.u[0], t.u[1], eta0f.x, eta1f.x,
                        la01["x"], la10["x"], lc01["x"], lc10["x"], n0x),
               _m2_tend(t.u[1], t.u[0], eta1f.x, eta0f.x,
                        la10["x"], la01["x"], lc10["x"], lc01["x"], n1x)]
        t.w = [_m2_tend(t.w[0], t.w[1], eta0f.z, eta1f.z,
                        la01["z"], la10["z"], lc01["z"], lc10["z"], n0z),
               _m2_tend(t.w[1], t.w[0], eta1f.z, eta0f.z,
                        la10["z"], la01["z"], lc10["z"], lc01["z"], n1z)]

    _pin_walls(u0, w0)
    _pin_walls(u1, w1)
    out = ModelState(g2, eta_new, theta_new, [u0, u1], [w0, w1],
                     state_m.pi.copy(), tend=t,
                     time=state_m.time, step_index=state_m.step_index)
    out.check_finite()
    return out


def _m1_tend(g_own, g_other, nu_in):
    """Property-fraction tendency relabeling in increment form; a full
    transfer hands over the donor tendency bitwise."""
    return np.where(nu_in == 1, g_other, g_own + nu_in * (g_other - g_own))


def _m2_tend(g_own, g_other, eta_own, eta_other, la_out, la_in,
             lc_out, lc_in, eta_new):
    """Mass-weighted tendency relabeling in increment form (exact when
    the fluids agree and the lambda pairs coincide); eta_new is the
    continuity-fraction mass (1-lc_out)*eta_own + lc_in*eta_other."""
    with np.errstate(divide="ignore", invalid="ignore"):
        res = g_own + (la_in * eta_other * (g_other - g_own)
                       + g_own * ((lc_out - la_out) * eta_own
                                  + (la_in - lc_in) * eta_other)) / eta_new
    res = np.where((eta_own == 0) & (la_in == lc_in), g_other, res)
    return np.where(eta_new == 0, g_other, res)


# --- energies ---------------------------------------------------------------

@dataclass
class EnergyBudget:
    e_p: float
    e_i: float
    e_k: float

    @property
    def total(self):
        return self.e_p + self.e_i + self.e_k


def energy_budget(state: ModelState) -> EnergyBudget:
    """Domain-integrated potential, internal and kinetic energies; the
    kinetic part is face-based and remapped to centers."""
    g2 = state.grid
    dv = g2.dx * g2.dz
    _, zc = g2.center_mesh()
    e_p = sum(float(np.sum(state.eta[i] * CONST.g * zc)) for i in range(2)) * dv
    e_i = sum(float(np.sum(state.eta[i] * state.theta[i] * CONST.c_v * state.pi))
              for i in range(2)) * dv
    n_faces = [gr.to_faces(state.eta[i], g2) for i in range(2)]
    vel = [FaceField(state.u[i], state.w[i]) for i in range(2)]
    e_k = float(np.sum(gr.kinetic_energy_cgrid(n_faces, vel))) * dv
    return EnergyBudget(e_p, e_i, e_k)


# --- one full step ----------------------------------------------------------

@dataclass
class StepDiagnostics:
    dynamics: DynamicsDiagnostics
    s_max: float = 0.0


def step(state: ModelState, closure, cfg: SchemeConfig, dt: float,
         alpha: float = 0.5, n_outer: int = 2) -> tuple[ModelState, StepDiagnostics]:
    """dynamics substep, then transfer-rate closure, then transfers."""
    state_m, ddiag = dynamics_substep(state, dt, alpha=alpha, n_outer=n_outer)
    sdiag = StepDiagnostics(ddiag)
    if isinstance(closure, NoClosure) or closure is None:
        out = state_m
    else:
        s01, s10 = compute_transfer_rates(state_m, closure, dt)
        sdiag.s_max = float(max(s01.max(), s10.max()))
        out = transfer_substep(state_m, s01, s10, dt, cfg, strict=True)
    return out, sdiag
