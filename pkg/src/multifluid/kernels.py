"""Pointwise (0-D) two-fluid transfer kernels.

All functions are pure and operate elementwise on scalars or numpy
arrays, preserving the input dtype (the sweep analyzer calls them with
extended-precision arrays to keep diagnostic noise below the
classification tolerances). Fluid indices are 0 and 1; a transfer
direction (i, j) moves mass from fluid i to fluid j.

By default the kernels are permissive: configurations that lose
positivity (explicit mass with dt*S > 1) or hit empty-fluid divisions
are computed anyway and flagged, so a parameter sweep can chart the
unstable region. Pass strict=True to raise instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import CONST, PI_REF
from .schemes import Method, SchemeConfig, TimeLevel


class TransferError(ValueError):
    """Precondition violation in strict mode."""


@dataclass
class PairState:
    """Two-fluid state at one point and one time level."""
    eta: tuple    # mass per unit volume (kg m^-3), fluids 0 and 1
    theta: tuple  # potential temperature (K)
    u: tuple      # velocity (m s^-1), one component suffices in 0-D

    def validate(self):
        for i in (0, 1):
            if np.any(np.asarray(self.eta[i]) < 0):
                raise TransferError("eta must be non-negative")
            if np.any(np.asarray(self.theta[i]) <= 0):
                raise TransferError("theta must be positive")


@dataclass
class TransferRates:
    s01: float  # rate fluid0 -> fluid1 (s^-1)
    s10: float  # rate fluid1 -> fluid0 (s^-1)
    dt: float   # timestep (s)

    def validate(self):
        if np.any(np.asarray(self.s01) < 0) or np.any(np.asarray(self.s10) < 0):
            raise TransferError("transfer rates must be non-negative")
        if np.any(np.asarray(self.dt) < 0):
            raise TransferError("dt must be non-negative")


@dataclass
class TransferOutcome:
    state: PairState          # state at level n+1
    lambda01: np.ndarray      # mass-transfer fractions
    lambda10: np.ndarray
    nu01: np.ndarray | None = None   # property fractions (method 1 only)
    nu10: np.ndarray | None = None
    flagged: np.ndarray | bool = False  # positivity not guaranteed here


def lambda_coeff(s_ij, s_ji, dt, alpha):
    """Mass-transfer fraction dt*S_ij / (1 + alpha*dt*(S_ji + S_ij))."""
    return dt * s_ij / (1 + alpha * dt * (s_ji + s_ij))


def apply_mass_transfer(state_m: PairState, rates: TransferRates, alpha_c,
                        strict: bool = False):
    """Exchange mass between the fluids.

    Returns (eta_new, (lambda01, lambda10), flagged). Total mass is
    conserved exactly up to rounding; positivity holds when alpha_c = 1
    or dt*S_ij <= 1 in both directions.
    """
    e0, e1 = state_m.eta
    flagged = (alpha_c == 0) & ((rates.dt * rates.s01 > 1) | (rates.dt * rates.s10 > 1))
    if strict and np.any(flagged):
        raise TransferError("explicit mass transfer with dt*S > 1 loses positivity")
    lam01 = lambda_coeff(rates.s01, rates.s10, rates.dt, alpha_c)
    lam10 = lambda_coeff(rates.s10, rates.s01, rates.dt, alpha_c)
    # net-flux form: the two increments are exact negatives of each
    # other, so the mass sum only picks up the final additions' rounding
    # (<= 1 epsilon of the total); non-negativity for lambda <= 1
    # follows from rounding monotonicity
    gain0 = lam10 * e1
    loss0 = lam01 * e0
    eta0 = e0 + (gain0 - loss0)
    eta1 = e1 + (loss0 - gain0)
    return (eta0, eta1), (lam01, lam10), flagged


def _eta_ratio(num_s, eta_q_i, eta_r_j):
    """S_ij * eta_i^q / eta_j^r with the empty-fluid convention:
    0 when the incoming product vanishes too, +inf otherwise."""
    num = num_s * eta_q_i
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.true_divide(num, eta_r_j)
    zero_den = np.asarray(eta_r_j) == 0
    if np.any(zero_den):
        ratio = np.where(zero_den, np.where(num == 0, 0.0 * num, np.inf), ratio)
    return ratio


def nu_coeff(state_m: PairState, eta_np1, rates: TransferRates,
             cfg: SchemeConfig, direction=(0, 1), strict: bool = False):
    """Method-1 property-transfer fraction nu_Aij^{q,r}.

    direction is the ordered pair (i, j). An infinite mass ratio with
    alpha_a = 1 gives the finite limit nu = 1 (empty receiving fluid
    inherits the donor's property); with alpha_a = 0 the result is
    infinite, which strict mode rejects.
    """
    if cfg.method is not Method.METHOD1:
        raise TransferError("nu_coeff applies to method 1 only")
    i, j = direction
    eq = state_m.eta if cfg.q is TimeLevel.M else eta_np1
    er = state_m.eta if cfg.r is TimeLevel.M else eta_np1
    s_ij = rates.s01 if (i, j) == (0, 1) else rates.s10
    s_ji = rates.s10 if (i, j) == (0, 1) else rates.s01
    r_ij = _eta_ratio(s_ij, eq[i], er[j])
    r_ji = _eta_ratio(s_ji, eq[j], er[i])
    with np.errstate(invalid="ignore"):
        nu = rates.dt * r_ij / (1 + cfg.alpha_a * rates.dt * (r_ij + r_ji))
    if cfg.alpha_a == 1:
        # inf/inf above: nu -> 1 when this direction's ratio blew up
        nu = np.where(np.isinf(r_ij) & np.isfinite(r_ji), 1.0, nu)
        nu = np.where(np.isinf(r_ij) & np.isinf(r_ji), 0.0, nu)
    if strict and not np.all(np.isfinite(nu)):
        raise TransferError("empty-fluid division in nu_coeff")
    return nu


def apply_method1(state_m: PairState, rates: TransferRates, cfg: SchemeConfig,
                  strict: bool = False) -> TransferOutcome:
    """Mass transfer followed by nu-weighted property transfers."""
    eta_new, (lam01, lam10), flagged = apply_mass_transfer(
        state_m, rates, cfg.alpha_c, strict=strict)
    nu01 = nu_coeff(state_m, eta_new, rates, cfg, (0, 1), strict=strict)
    nu10 = nu_coeff(state_m, eta_new, rates, cfg, (1, 0), strict=strict)
    new = {}
    for name in ("theta", "u"):
        p0, p1 = getattr(state_m, name)
        # increment form: exact (no rounding) when the fluids agree; a
        # full transfer (nu = 1) hands over the donor value bitwise
        new[name] = (np.where(nu10 == 1, p1, p0 + nu10 * (p1 - p0)),
                     np.where(nu01 == 1, p0, p1 + nu01 * (p0 - p1)))
    state = PairState(eta=eta_new, theta=new["theta"], u=new["u"])
    return TransferOutcome(state, lam01, lam10, nu01, nu10, flagged)


def apply_method2(state_m: PairState, rates: TransferRates, cfg: SchemeConfig,
                  strict: bool = False) -> TransferOutcome:
    """Mass-weighted (flux form) transfers: Phi_i = eta_i * phi_i moves
    with the lambda fractions, then phi is recovered from the new mass.
    An emptied fluid takes the donor's property value."""
    if cfg.method is not Method.METHOD2:
        raise TransferError("apply_method2 requires a method-2 config")
    eta_new, (lam01, lam10), flagged = apply_mass_transfer(
        state_m, rates, cfg.alpha_c, strict=strict)
    lam_a01 = lambda_coeff(rates.s01, rates.s10, rates.dt, cfg.alpha_a)
    lam_a10 = lambda_coeff(rates.s10, rates.s01, rates.dt, cfg.alpha_a)
    e0, e1 = state_m.eta
    empty0 = np.asarray(eta_new[0]) == 0
    empty1 = np.asarray(eta_new[1]) == 0
    if strict and np.any(empty0 | empty1):
        raise TransferError("empty fluid after method-2 mass transfer")
    new = {}
    for name in ("theta", "u"):
        p0, p1 = getattr(state_m, name)
        # increment form of Phi_i^{n+1}/eta_i^{n+1}: exact (no rounding)
        # when the fluids agree and the lambda pairs coincide
        with np.errstate(divide="ignore", invalid="ignore"):
            q0 = p0 + np.true_divide(
                lam_a10 * e1 * (p1 - p0)
                + p0 * ((lam01 - lam_a01) * e0
                        + (lam_a10 - lam10) * e1), eta_new[0])
            q1 = p1 + np.true_divide(
                lam_a01 * e0 * (p0 - p1)
                + p1 * ((lam10 - lam_a10) * e1
                        + (lam_a01 - lam01) * e0), eta_new[1])
        # a fluid that held no mass is made of donor material only; when
        # the lambda pairs coincide it takes the donor value bitwise
        q0 = np.where((np.asarray(e0) == 0) & (lam_a10 == lam10), p1, q0)
        q1 = np.where((np.asarray(e1) == 0) & (lam_a01 == lam01), p0, q1)
        q0 = np.where(empty0, p1, q0)
        q1 = np.where(empty1, p0, q1)
        new[name] = (q0, q1)
    state = PairState(eta=eta_new, theta=new["theta"], u=new["u"])
    return TransferOutcome(state, lam01, lam10, flagged=flagged)


def apply_scheme(state_m: PairState, rates: TransferRates, cfg: SchemeConfig,
                 strict: bool = False) -> TransferOutcome:
    if cfg.method is Method.METHOD1:
        return apply_method1(state_m, rates, cfg, strict=strict)
    return apply_method2(state_m, rates, cfg, strict=strict)


def mu_coeff(state_m: PairState, rates: TransferRates, alpha, direction=(0, 1)):
    """Symmetric mass-like weight in the method-2 kinetic energy drop."""
    i, j = direction
    e = state_m.eta
    s = {(0, 1): rates.s01, (1, 0): rates.s10}
    lam_ij = lambda_coeff(s[(i, j)], s[(j, i)], rates.dt, alpha)
    lam_ji = lambda_coeff(s[(j, i)], s[(i, j)], rates.dt, alpha)
    num = e[i] * e[j] * ((1 - lam_ij) * lam_ij * e[i] + (1 - lam_ji) * lam_ji * e[j])
    den = ((lam_ij * e[i] + (1 - lam_ji) * e[j])
           * (lam_ji * e[j] + (1 - lam_ij) * e[i]))
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = num / den
    return np.where(den == 0, 0.0 * num, mu)


def delta_K(state_m: PairState, rates: TransferRates, cfg: SchemeConfig):
    """Closed-form kinetic energy decrease of a method-2 transfer with
    alpha_c = alpha_a; equals KE^m - KE^{n+1} computed directly."""
    if cfg.method is not Method.METHOD2 or cfg.alpha_c != cfg.alpha_a:
        raise TransferError("delta_K requires method 2 with alpha_c = alpha_a")
    mu01 = mu_coeff(state_m, rates, cfg.alpha_c, (0, 1))
    mu10 = mu_coeff(state_m, rates, cfg.alpha_c, (1, 0))
    u0, u1 = state_m.u
    return 0.5 * (u0 - u1) * (mu01 * u0 - mu10 * u1)


@dataclass
class PairDiagnostics:
    df_rel: np.ndarray
    de_rel: np.ndarray
    mass_err: np.ndarray
    bound_violation: np.ndarray


def total_momentum(state: PairState):
    return state.eta[0] * state.u[0] + state.eta[1] * state.u[1]


def total_energy(state: PairState):
    """E_I + E_K at the fixed reference Exner pressure."""
    e_i = CONST.c_v * PI_REF * (state.eta[0] * state.theta[0]
                                + state.eta[1] * state.theta[1])
    e_k = 0.5 * (state.eta[0] * state.u[0] ** 2 + state.eta[1] * state.u[1] ** 2)
    return e_i + e_k


def pair_diagnostics(before: PairState, after: PairState,
                     f_ref=None, e_ref=None) -> PairDiagnostics:
    """Relative momentum/energy changes and boundedness check of a
    transfer. References default to the before-state values."""
    f_m = total_momentum(before)
    e_m = total_energy(before)
    if f_ref is None:
        # signed momentum can cancel to zero; use the magnitude scale
        f_ref = np.abs(before.eta[0] * before.u[0]) \
            + np.abs(before.eta[1] * before.u[1])
    if e_ref is None:
        e_ref = e_m
    f_ref = np.where(np.asarray(f_ref) == 0, 1.0, f_ref)
    e_ref = np.where(np.asarray(e_ref) == 0, 1.0, e_ref)
    with np.errstate(invalid="ignore", over="ignore"):
        df_rel = (total_momentum(after) - f_m) / f_ref
        de_rel = (total_energy(after) - e_m) / e_ref
        mass_b = before.eta[0] + before.eta[1]
        mass_err = (after.eta[0] + after.eta[1] - mass_b) / mass_b
    eps = np.finfo(np.result_type(after.u[0], np.float64)).eps
    viol = np.zeros(np.broadcast(after.u[0], after.u[1]).shape, dtype=bool)
    for name in ("theta", "u"):
        b0, b1 = getattr(before, name)
        lo = np.minimum(b0, b1)
        hi = np.maximum(b0, b1)
        # rounding of the convex update scales with |phi|, not only with
        # the interval width, so the slack carries both
        slack = 16 * eps * ((hi - lo) + np.maximum(np.abs(lo), np.abs(hi)))
        for a in getattr(after, name):
            viol |= ~np.isfinite(a) | (a < lo - slack) | (a > hi + slack)
    return PairDiagnostics(df_rel, de_rel, mass_err, viol)
