"""2D staggered (C-grid) discretization.

Scalars live at cell centers, shape (nx, nz); normal velocities/fluxes
live on x-faces (nx+1, nz) and z-faces (nx, nz+1). Walls on all sides:
wall-normal boundary faces carry zero flux, center->face interpolation
copies the adjacent interior center at the walls (zero gradient).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import _eta_ratio


class CourantError(RuntimeError):
    pass


@dataclass(frozen=True)
class Grid2D:
    nx: int
    nz: int
    dx: float  # m
    dz: float  # m
    x0: float = 0.0  # left edge
    z0: float = 0.0  # bottom edge

    def __post_init__(self):
        if self.dx <= 0 or self.dz <= 0:
            raise ValueError("grid spacings must be positive")

    @property
    def x_centers(self):
        return self.x0 + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def z_centers(self):
        return self.z0 + (np.arange(self.nz) + 0.5) * self.dz

    def center_mesh(self):
        return np.meshgrid(self.x_centers, self.z_centers, indexing="ij")

    def zeros_c(self):
        return np.zeros((self.nx, self.nz))

    def zeros_fx(self):
        return np.zeros((self.nx + 1, self.nz))

    def zeros_fz(self):
        return np.zeros((self.nx, self.nz + 1))


@dataclass
class FaceField:
    """Values on x-faces and z-faces of a grid."""
    x: np.ndarray  # (nx+1, nz)
    z: np.ndarray  # (nx, nz+1)

    def copy(self):
        return FaceField(self.x.copy(), self.z.copy())


def to_faces(c: np.ndarray, grid: Grid2D) -> FaceField:
    """Linear interpolation of a center field onto faces; boundary faces
    copy the adjacent interior center."""
    fx = np.empty((grid.nx + 1, grid.nz), dtype=c.dtype)
    fx[1:-1] = 0.5 * (c[:-1] + c[1:])
    fx[0] = c[0]
    fx[-1] = c[-1]
    fz = np.empty((grid.nx, grid.nz + 1), dtype=c.dtype)
    fz[:, 1:-1] = 0.5 * (c[:, :-1] + c[:, 1:])
    fz[:, 0] = c[:, 0]
    fz[:, -1] = c[:, -1]
    return FaceField(fx, fz)


def xfaces_to_centers(fx: np.ndarray) -> np.ndarray:
    """Mean of the two bounding x-faces per cell."""
    return 0.5 * (fx[:-1] + fx[1:])


def zfaces_to_centers(fz: np.ndarray) -> np.ndarray:
    return 0.5 * (fz[:, :-1] + fz[:, 1:])


def divergence(flux: FaceField, grid: Grid2D) -> np.ndarray:
    return (np.diff(flux.x, axis=0) / grid.dx
            + np.diff(flux.z, axis=1) / grid.dz)


def gradient(c: np.ndarray, grid: Grid2D) -> FaceField:
    """Face-normal difference of adjacent centers; zero on wall faces."""
    fx = np.zeros((grid.nx + 1, grid.nz), dtype=c.dtype)
    fx[1:-1] = np.diff(c, axis=0) / grid.dx
    fz = np.zeros((grid.nx, grid.nz + 1), dtype=c.dtype)
    fz[:, 1:-1] = np.diff(c, axis=1) / grid.dz
    return FaceField(fx, fz)


# --- van Leer advection -----------------------------------------------------

def _limited_slope(q, axis):
    """Van Leer (harmonic mean) limited one-cell increment, with
    zero-gradient ghost cells (boundary slopes vanish)."""
    d = np.diff(q, axis=axis)
    pad = [(0, 0), (0, 0)]
    pad[axis] = (1, 1)
    d = np.pad(d, pad)  # ghost differences are zero
    a = np.take(d, range(0, q.shape[axis]), axis=axis)
    b = np.take(d, range(1, q.shape[axis] + 1), axis=axis)
    prod = a * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = 2 * prod / (a + b)
    return np.where(prod > 0, s, 0.0)


def _face_values_axis(q, vel, cfl, axis):
    """Upwind MUSCL face values along one axis. vel has one more entry
    than q along that axis; interior faces only are reconstructed, wall
    faces take the adjacent cell value (their velocity is zero anyway)."""
    slope = _limited_slope(q, axis)
    n = q.shape[axis]
    ql = np.take(q, range(0, n - 1), axis=axis)
    qr = np.take(q, range(1, n), axis=axis)
    sl = np.take(slope, range(0, n - 1), axis=axis)
    sr = np.take(slope, range(1, n), axis=axis)
    v = np.take(vel, range(1, n), axis=axis)
    c = np.take(cfl, range(1, n), axis=axis)
    up = ql + 0.5 * sl * (1 - c)
    dn = qr - 0.5 * sr * (1 + c)
    interior = np.where(v >= 0, up, dn)
    pad = [(0, 0), (0, 0)]
    pad[axis] = (1, 1)
    out = np.pad(interior, pad)
    first = [slice(None)] * 2
    first[axis] = 0
    last = [slice(None)] * 2
    last[axis] = -1
    out[tuple(first)] = np.take(q, 0, axis=axis)
    out[tuple(last)] = np.take(q, -1, axis=axis)
    return out


def vanleer_face_values(q: np.ndarray, vel: FaceField, grid: Grid2D,
                        dt: float) -> FaceField:
    fx = _face_values_axis(q, vel.x, vel.x * (dt / grid.dx), axis=0)
    fz = _face_values_axis(q, vel.z, vel.z * (dt / grid.dz), axis=1)
    return FaceField(fx, fz)


def check_courant(vel: FaceField, grid: Grid2D, dt: float, limit=1.0):
    cmax = (np.abs(vel.x).max() * dt / grid.dx
            + np.abs(vel.z).max() * dt / grid.dz)
    if cmax > limit + 1e-12:
        raise CourantError(f"advective Courant number {cmax:.3f} exceeds {limit}")
    return cmax


def advect_vanleer(q: np.ndarray, vel: FaceField, grid: Grid2D, dt: float,
                   check: bool = True) -> np.ndarray:
    """Flux-form van Leer update of a center field by face velocities.
    Conserves the domain integral (wall fluxes are zero) and preserves
    positivity for combined Courant number <= 1."""
    if check:
        check_courant(vel, grid, dt)
    qf = vanleer_face_values(q, vel, grid, dt)
    flux = FaceField(vel.x * qf.x, vel.z * qf.z)
    return q - dt * divergence(flux, grid)


def advective_tendency(q, velx, velz, dx, dz, dt):
    """Advective-form van Leer tendency -v.grad(q) for a field whose
    storage grid is treated as cell-centered with face velocities velx,
    velz (one extra entry along the respective axis). Computed as the
    signed face fluxes of (q_face - q_center), i.e. the flux divergence
    minus q times the velocity divergence arranged so that a uniform
    field has exactly zero tendency."""
    qfx = _face_values_axis(q, velx, velx * (dt / dx), axis=0)
    qfz = _face_values_axis(q, velz, velz * (dt / dz), axis=1)
    tx = (velx[1:] * (qfx[1:] - q) - velx[:-1] * (qfx[:-1] - q)) / dx
    tz = (velz[:, 1:] * (qfz[:, 1:] - q) - velz[:, :-1] * (qfz[:, :-1] - q)) / dz
    return -(tx + tz)


# --- face transfers ---------------------------------------------------------

def nu_face_fields(s01, s10, eta_q, eta_r, dt, alpha_a, grid):
    """Method-1 property fractions on faces, built from center fields
    with the interpolation choice [S_ij eta_i^q]_f / [eta_j^r]_f.

    Returns (nu01, nu10) as FaceFields.
    """
    num01 = to_faces(s01 * eta_q[0], grid)
    num10 = to_faces(s10 * eta_q[1], grid)
    den0 = to_faces(eta_r[0], grid)
    den1 = to_faces(eta_r[1], grid)
    out = []
    for comp in ("x", "z"):
        r01 = _eta_ratio(1.0, getattr(num01, comp), getattr(den1, comp))
        r10 = _eta_ratio(1.0, getattr(num10, comp), getattr(den0, comp))
        out.append((nu_from_ratios(r01, r10, dt, alpha_a),
                    nu_from_ratios(r10, r01, dt, alpha_a)))
    (nu01x, nu10x), (nu01z, nu10z) = out
    return FaceField(nu01x, nu01z), FaceField(nu10x, nu10z)


def nu_from_ratios(r_ij, r_ji, dt, alpha_a):
    """nu = dt*r_ij / (1 + alpha_a*dt*(r_ij + r_ji)) with the infinite-
    ratio limits of the kernels module."""
    with np.errstate(invalid="ignore"):
        nu = dt * r_ij / (1 + alpha_a * dt * (r_ij + r_ji))
    if alpha_a == 1:
        nu = np.where(np.isinf(r_ij) & np.isfinite(r_ji), 1.0, nu)
        nu = np.where(np.isinf(r_ij) & np.isinf(r_ji), 0.0, nu)
    return nu


def face_transfer_method1(w0, w1, nu01, nu10):
    """Velocity relabeling with face nu fields (plain arrays, one face
    direction at a time); increment form is exact when the fluids agree,
    and a full transfer (nu = 1) hands over the donor value bitwise."""
    return (np.where(nu10 == 1, w1, w0 + nu10 * (w1 - w0)),
            np.where(nu01 == 1, w0, w1 + nu01 * (w0 - w1)))


def face_transfer_method2(w0, w1, eta0_f, eta1_f, lam_c01, lam_c10,
                          lam_a01, lam_a10):
    """Mass-weighted velocity relabeling on faces.

    Face mass N_i is advanced with the continuity fractions, face
    momentum F_i with the property fractions; returns the new
    velocities and face masses. Per-face total momentum is conserved.
    An emptied face takes the donor's velocity.
    """
    n0 = (1 - lam_c01) * eta0_f + lam_c10 * eta1_f
    n1 = (1 - lam_c10) * eta1_f + lam_c01 * eta0_f
    # increment form of F_i^{n+1}/N_i^{n+1}: exact (no rounding) when the
    # fluids agree and the lambda pairs coincide
    with np.errstate(divide="ignore", invalid="ignore"):
        w0n = w0 + (lam_a10 * eta1_f * (w1 - w0)
                    + w0 * ((lam_c01 - lam_a01) * eta0_f
                            + (lam_a10 - lam_c10) * eta1_f)) / n0
        w1n = w1 + (lam_a01 * eta0_f * (w0 - w1)
                    + w1 * ((lam_c10 - lam_a10) * eta1_f
                            + (lam_a01 - lam_c01) * eta0_f)) / n1
    w0n = np.where((eta0_f == 0) & (lam_a10 == lam_c10), w1, w0n)
    w1n = np.where((eta1_f == 0) & (lam_a01 == lam_c01), w0, w1n)
    w0n = np.where(n0 == 0, w1, w0n)
    w1n = np.where(n1 == 0, w0, w1n)
    return w0n, w1n, n0, n1


def emit_field_csv(values: np.ndarray, grid: Grid2D, quantity: str,
                   time: float, path):
    """Plain-text dump of a center field: one row per cell with
    i, k, x, z, value; the header carries the quantity tag and time."""
    if values.shape != (grid.nx, grid.nz):
        raise ValueError(f"{quantity}: expected center field shape "
                         f"{(grid.nx, grid.nz)}, got {values.shape}")
    xc, zc = grid.x_centers, grid.z_centers
    try:
        with open(path, "w") as f:
            f.write(f"# quantity={quantity} time={time:.17g}\n")
            f.write("i,k,x,z,value\n")
            for i in range(grid.nx):
                for k in range(grid.nz):
                    f.write("%d,%d,%.17g,%.17g,%.17g\n"
                            % (i, k, xc[i], zc[k], values[i, k]))
    except OSError as err:
        raise OSError(f"cannot write field CSV to {path}: {err}") from err


def kinetic_energy_cgrid(n_faces, w_faces) -> np.ndarray:
    """Cell-centered kinetic energy density from per-fluid face masses
    and velocities: sum_i 0.5*[N_i w_i^2]_c, both face directions.

    n_faces and w_faces are sequences (one per fluid) of FaceFields.
    """
    total = None
    for n_i, w_i in zip(n_faces, w_faces):
        ek = (0.5 * xfaces_to_centers(n_i.x * w_i.x ** 2)
              + 0.5 * zfaces_to_centers(n_i.z * w_i.z ** 2))
        total = ek if total is None else total + ek
    return total
