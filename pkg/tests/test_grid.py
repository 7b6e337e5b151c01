"""Staggered-grid operators, van Leer advection, and face transfers.

The advection oracle is an independent scalar-loop MUSCL/van Leer
implementation written directly from the scheme definition; the
vectorized module code must match it bitwise-exactly in float64.
Face-transfer equivalence with the 0-D kernels on uniform states is the
grid/kernel consistency oracle.
"""

import numpy as np
import pytest

from multifluid import grid as gr
from multifluid import kernels as kn
from multifluid.grid import FaceField, Grid2D
from multifluid.kernels import PairState, TransferRates
from multifluid.schemes import NAMED_SCHEMES, Method, all_schemes

EPS = np.finfo(float).eps


def make_grid(nx=12, nz=9, dx=100.0, dz=80.0):
    return Grid2D(nx=nx, nz=nz, dx=dx, dz=dz, x0=-nx * dx / 2, z0=0.0)


def linear_field(g, a=0.3, b=-0.7, c=5.0):
    x, z = g.center_mesh()
    return a * x + b * z + c


# --- basic operators --------------------------------------------------------

def test_grid_shapes_and_centers():
    g = make_grid()
    assert g.zeros_c().shape == (12, 9)
    assert g.zeros_fx().shape == (13, 9)
    assert g.zeros_fz().shape == (12, 10)
    assert g.x_centers[0] == g.x0 + 0.5 * g.dx
    assert g.z_centers[-1] == g.z0 + (g.nz - 0.5) * g.dz


def test_to_faces_linear_exact_in_interior():
    g = make_grid()
    q = linear_field(g)
    f = gr.to_faces(q, g)
    # interior x-face positions are the cell edges x0 + i*dx
    xf = g.x0 + np.arange(1, g.nx) * g.dx
    fx_exact = 0.3 * xf[:, None] + (-0.7) * g.z_centers[None, :] + 5.0
    assert np.allclose(f.x[1:-1], fx_exact, rtol=0, atol=1e-12)
    # wall faces copy the adjacent center
    assert np.array_equal(f.x[0], q[0])
    assert np.array_equal(f.x[-1], q[-1])
    assert np.array_equal(f.z[:, 0], q[:, 0])
    assert np.array_equal(f.z[:, -1], q[:, -1])


def test_faces_to_centers_roundtrip_uniform():
    g = make_grid()
    q = np.full((g.nx, g.nz), 3.25)
    f = gr.to_faces(q, g)
    assert np.array_equal(gr.xfaces_to_centers(f.x), q)
    assert np.array_equal(gr.zfaces_to_centers(f.z), q)


def test_gradient_exact_on_linear():
    g = make_grid()
    q = linear_field(g)
    grad = gr.gradient(q, g)
    assert np.allclose(grad.x[1:-1], 0.3, rtol=0, atol=1e-12)
    assert np.allclose(grad.z[:, 1:-1], -0.7, rtol=0, atol=1e-12)
    # wall-normal gradient is zero by construction
    assert np.all(grad.x[0] == 0) and np.all(grad.x[-1] == 0)
    assert np.all(grad.z[:, 0] == 0) and np.all(grad.z[:, -1] == 0)


def test_divergence_telescopes_to_boundary_fluxes():
    g = make_grid()
    rng = np.random.default_rng(0)
    flux = FaceField(rng.normal(size=(g.nx + 1, g.nz)),
                     rng.normal(size=(g.nx, g.nz + 1)))
    total = (gr.divergence(flux, g) * g.dx * g.dz).sum()
    boundary = (g.dz * (flux.x[-1].sum() - flux.x[0].sum())
                + g.dx * (flux.z[:, -1].sum() - flux.z[:, 0].sum()))
    assert abs(total - boundary) <= 1e3 * EPS * np.abs(flux.x).sum()


# --- van Leer advection -----------------------------------------------------

def _limited_slope_1d(q):
    """Scalar-loop van Leer slope with zero-gradient ghosts."""
    n = len(q)
    out = np.zeros(n)
    for i in range(n):
        a = q[i] - q[i - 1] if i > 0 else 0.0
        b = q[i + 1] - q[i] if i < n - 1 else 0.0
        if a * b > 0:
            out[i] = 2 * a * b / (a + b)
    return out


def _advect_1d_reference(q, vel, dx, dt):
    """Flux-form MUSCL update along one line; vel has len(q)+1 entries
    with zero wall velocities."""
    slope = _limited_slope_1d(q)
    n = len(q)
    flux = np.zeros(n + 1)
    for f in range(1, n):
        v = vel[f]
        c = v * dt / dx
        if v >= 0:
            qf = q[f - 1] + 0.5 * slope[f - 1] * (1 - c)
        else:
            qf = q[f] - 0.5 * slope[f] * (1 + c)
        flux[f] = v * qf
    return q - dt / dx * (flux[1:] - flux[:-1])


def test_vanleer_matches_scalar_reference_1d_slices():
    g = Grid2D(nx=24, nz=1, dx=50.0, dz=50.0)
    rng = np.random.default_rng(1)
    q = rng.uniform(0, 2, (g.nx, 1))
    vel = FaceField(np.zeros((g.nx + 1, 1)), np.zeros((g.nx, 2)))
    vel.x[1:-1, 0] = rng.uniform(-4.0, 4.0, g.nx - 1)
    dt = 5.0
    got = gr.advect_vanleer(q, vel, g, dt)
    want = _advect_1d_reference(q[:, 0], vel.x[:, 0], g.dx, dt)
    assert np.allclose(got[:, 0], want, rtol=0, atol=1e-13)


def test_vanleer_2d_matches_dimension_split_reference():
    """With purely-z velocity the 2D update reduces to independent
    column updates of the 1D reference."""
    g = make_grid(nx=6, nz=20, dx=100.0, dz=100.0)
    rng = np.random.default_rng(2)
    q = rng.uniform(0, 1, (g.nx, g.nz))
    vel = FaceField(np.zeros((g.nx + 1, g.nz)), np.zeros((g.nx, g.nz + 1)))
    vel.z[:, 1:-1] = rng.uniform(-8.0, 8.0, (g.nx, g.nz - 1))
    dt = 5.0
    got = gr.advect_vanleer(q, vel, g, dt)
    for i in range(g.nx):
        want = _advect_1d_reference(q[i], vel.z[i], g.dz, dt)
        assert np.allclose(got[i], want, rtol=0, atol=1e-13)


def test_vanleer_conserves_mass():
    g = make_grid(nx=30, nz=20)
    rng = np.random.default_rng(3)
    q = rng.uniform(0.1, 1.0, (g.nx, g.nz))
    vel = FaceField(g.zeros_fx(), g.zeros_fz())
    vel.x[1:-1] = rng.uniform(-3.0, 3.0, (g.nx - 1, g.nz))
    vel.z[:, 1:-1] = rng.uniform(-3.0, 3.0, (g.nx, g.nz - 1))
    dt = 10.0
    q1 = gr.advect_vanleer(q, vel, g, dt)
    assert abs(q1.sum() - q.sum()) <= 8 * EPS * q.sum() * q.size


def test_vanleer_tophat_positive_and_bounded():
    g = Grid2D(nx=60, nz=1, dx=100.0, dz=100.0)
    q = np.zeros((g.nx, 1))
    q[20:30] = 1.0
    vel = FaceField(np.full((g.nx + 1, 1), 10.0), np.zeros((g.nx, 2)))
    vel.x[0] = vel.x[-1] = 0.0
    dt = 8.0  # CFL 0.8
    total0 = q.sum()
    for _ in range(20):
        q = gr.advect_vanleer(q, vel, g, dt)
        assert q.min() >= 0.0
        assert q.max() <= 1.0 + 1e-12
    assert abs(q.sum() - total0) <= 1e-10


def test_courant_check_raises():
    g = make_grid()
    vel = FaceField(np.full((g.nx + 1, g.nz), 30.0), g.zeros_fz())
    with pytest.raises(gr.CourantError):
        gr.check_courant(vel, g, dt=5.0)  # C = 1.5
    assert gr.check_courant(vel, g, dt=3.0) == pytest.approx(0.9)


def test_advective_tendency_zero_on_uniform_field():
    g = make_grid()
    rng = np.random.default_rng(4)
    velx = rng.uniform(-5, 5, (g.nx + 1, g.nz))
    velz = rng.uniform(-5, 5, (g.nx, g.nz + 1))
    q = np.full((g.nx, g.nz), 301.25)
    tend = gr.advective_tendency(q, velx, velz, g.dx, g.dz, dt=8.0)
    assert np.all(tend == 0.0)


def test_advective_tendency_uniform_velocity_matches_flux_form():
    """For divergence-free (uniform) velocity the advective form equals
    the flux form divided by -1... i.e. q + dt*tend == advect_vanleer."""
    g = Grid2D(nx=40, nz=1, dx=100.0, dz=100.0)
    rng = np.random.default_rng(5)
    q = rng.uniform(0, 1, (g.nx, 1))
    velx = np.full((g.nx + 1, 1), 6.0)
    velz = np.zeros((g.nx, 2))
    dt = 8.0
    tend = gr.advective_tendency(q, velx, velz, g.dx, g.dz, dt)
    vel = FaceField(velx, velz)
    want = gr.advect_vanleer(q, vel, g, dt, check=False)
    assert np.allclose(q + dt * tend, want, rtol=0, atol=1e-12)


# --- face transfers vs 0-D kernels (uniform-state equivalence) --------------

UNIFORM = dict(eta=(0.4, 1.3), theta=(300.0, 302.0), u=(3.0, -2.0))


def _uniform_fields(g, vals):
    return tuple(np.full((g.nx, g.nz), v) for v in vals)


@pytest.mark.parametrize("cfg", [c for c in all_schemes()
                                 if c.method is Method.METHOD1],
                         ids=lambda c: c.label)
def test_face_transfer_m1_equals_kernel_on_uniform_state(cfg):
    g = make_grid(nx=5, nz=4)
    s01, s10, dt = 0.35, 0.15, 1.0
    state = PairState(**UNIFORM)
    rates = TransferRates(s01=s01, s10=s10, dt=dt)
    out = kn.apply_scheme(state, rates, cfg)

    eta = _uniform_fields(g, UNIFORM["eta"])
    eta_new, _, _ = kn.apply_mass_transfer(
        PairState(eta=eta, theta=None, u=None),
        TransferRates(s01=np.full_like(eta[0], s01),
                      s10=np.full_like(eta[0], s10), dt=dt), cfg.alpha_c)
    from multifluid.schemes import TimeLevel
    eta_q = eta if cfg.q is TimeLevel.M else eta_new
    eta_r = eta if cfg.r is TimeLevel.M else eta_new
    nu01, nu10 = gr.nu_face_fields(
        np.full_like(eta[0], s01), np.full_like(eta[0], s10),
        eta_q, eta_r, dt, cfg.alpha_a, g)
    w0 = np.full((g.nx + 1, g.nz), UNIFORM["u"][0])
    w1 = np.full((g.nx + 1, g.nz), UNIFORM["u"][1])
    w0n, w1n = gr.face_transfer_method1(w0, w1, nu01.x, nu10.x)
    assert np.all(np.abs(w0n - out.state.u[0]) <= 8 * EPS * np.abs(out.state.u[0]))
    assert np.all(np.abs(w1n - out.state.u[1]) <= 8 * EPS * np.abs(out.state.u[1]))


@pytest.mark.parametrize("cfg", [c for c in all_schemes()
                                 if c.method is Method.METHOD2],
                         ids=lambda c: c.label)
def test_face_transfer_m2_equals_kernel_on_uniform_state(cfg):
    g = make_grid(nx=5, nz=4)
    s01, s10, dt = 0.35, 0.15, 1.0
    state = PairState(**UNIFORM)
    rates = TransferRates(s01=s01, s10=s10, dt=dt)
    out = kn.apply_scheme(state, rates, cfg)

    lam_c01 = kn.lambda_coeff(s01, s10, dt, cfg.alpha_c)
    lam_c10 = kn.lambda_coeff(s10, s01, dt, cfg.alpha_c)
    lam_a01 = kn.lambda_coeff(s01, s10, dt, cfg.alpha_a)
    lam_a10 = kn.lambda_coeff(s10, s01, dt, cfg.alpha_a)
    shape = (g.nx + 1, g.nz)
    w0 = np.full(shape, UNIFORM["u"][0])
    w1 = np.full(shape, UNIFORM["u"][1])
    e0 = np.full(shape, UNIFORM["eta"][0])
    e1 = np.full(shape, UNIFORM["eta"][1])
    w0n, w1n, n0, n1 = gr.face_transfer_method2(
        w0, w1, e0, e1, lam_c01, lam_c10, lam_a01, lam_a10)
    for got, want in ((w0n, out.state.u[0]), (w1n, out.state.u[1]),
                      (n0, out.state.eta[0]), (n1, out.state.eta[1])):
        assert np.all(np.abs(got - want) <= 8 * EPS * np.abs(want))


def test_face_transfer_full_handover_is_bitwise():
    w0 = np.array([1.7348286201, -3.5])
    w1 = np.array([0.123456789012345, 2.25])
    w0n, w1n = gr.face_transfer_method1(w0, w1, np.zeros(2), np.ones(2))
    assert np.array_equal(w0n, w1)  # nu10 == 1 hands over fluid 1's value
    assert np.array_equal(w1n, w1)  # nu01 == 0 leaves fluid 1 alone


def test_face_transfer_m2_identical_fluids_bitwise():
    """When both fluids carry the same velocity and the lambda pairs
    coincide, the increment form returns it bitwise."""
    rng = np.random.default_rng(6)
    w = rng.uniform(-10, 10, 50)
    e0 = rng.uniform(0, 2, 50)
    e1 = rng.uniform(1e-3, 2, 50)
    lam01, lam10 = 0.3, 0.05
    w0n, w1n, n0, n1 = gr.face_transfer_method2(
        w, w, e0, e1, lam01, lam10, lam01, lam10)
    assert np.array_equal(w0n, w)
    assert np.array_equal(w1n, w)


def test_face_transfer_m2_conserves_momentum():
    rng = np.random.default_rng(7)
    n = 1000
    e0, e1 = rng.uniform(0, 2, n), rng.uniform(0, 2, n)
    w0, w1 = rng.uniform(-50, 50, n), rng.uniform(-50, 50, n)
    s01, s10, dt = 0.6, 0.4, 1.0
    for alpha_c, alpha_a in ((0, 0), (0, 1), (1, 0), (1, 1)):
        lc01 = kn.lambda_coeff(s01, s10, dt, alpha_c)
        lc10 = kn.lambda_coeff(s10, s01, dt, alpha_c)
        la01 = kn.lambda_coeff(s01, s10, dt, alpha_a)
        la10 = kn.lambda_coeff(s10, s01, dt, alpha_a)
        w0n, w1n, n0, n1 = gr.face_transfer_method2(
            w0, w1, e0, e1, lc01, lc10, la01, la10)
        f_m = e0 * w0 + e1 * w1
        f_n = n0 * w0n + n1 * w1n
        scale = (e0 + e1) * (np.abs(w0) + np.abs(w1))
        assert np.all(np.abs(f_n - f_m) <= 16 * EPS * scale)


# --- field CSV dumps --------------------------------------------------------

def test_emit_field_csv_roundtrip(tmp_path):
    g = make_grid(nx=3, nz=2)
    vals = np.arange(6, dtype=float).reshape(3, 2) + 0.125
    path = tmp_path / "f.csv"
    gr.emit_field_csv(vals, g, "theta_1", 42.0, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# quantity=theta_1 time=42"
    assert lines[1] == "i,k,x,z,value"
    assert len(lines) == 2 + g.nx * g.nz
    i, k, x, z, v = lines[2].split(",")
    assert (int(i), int(k)) == (0, 0)
    assert float(x) == g.x_centers[0] and float(z) == g.z_centers[0]
    assert float(v) == vals[0, 0]


def test_emit_field_csv_shape_check(tmp_path):
    g = make_grid(nx=3, nz=2)
    with pytest.raises(ValueError, match="theta_1"):
        gr.emit_field_csv(np.zeros((2, 3)), g, "theta_1", 0.0, tmp_path / "x.csv")


def test_kinetic_energy_cgrid_manual():
    g = make_grid(nx=2, nz=2)
    n = FaceField(np.full((3, 2), 2.0), np.full((2, 3), 2.0))
    w = FaceField(np.full((3, 2), 3.0), np.full((2, 3), 1.0))
    ek = gr.kinetic_energy_cgrid([n], [w])
    # 0.5*2*9 + 0.5*2*1 per cell
    assert np.allclose(ek, 10.0, rtol=0, atol=0)
