"""Energy regularization by penalized minimization over a sub-box.

Given u, minimize G(v) = E_GL(v over Omega) + h^-2 * int_Omega
phi(|v-u|^2 / 32 r0) among fields equal to u outside Omega. Descent starts
from the feasible point v = u, so the output can never raise the
Ginzburg-Landau energy; the audit tracks how little everything else moved.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .functionals import ChiCutoff, momentum_general
from .grid import ComplexField


@dataclass
class RegularizeConfig:
    h: float
    omega: tuple = None      # per-axis (lo, hi) cell index bounds; None = interior
    max_iters: int = 400
    tol: float = 1e-4        # relative gradient tolerance

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("penalty scale h must be positive")


def _omega_mask(grid, cfg):
    """Boolean cell mask for Omega. The default leaves the outermost layer
    out so the zero boundary layer survives the descent."""
    mask = np.zeros(grid.sizes, dtype=bool)
    if cfg.omega is None:
        inner = tuple(slice(1, n - 1) for n in grid.sizes)
        mask[inner] = True
        return mask
    if len(cfg.omega) != grid.dim:
        raise ValueError("omega needs one (lo, hi) pair per axis")
    sl = []
    for (lo, hi), n in zip(cfg.omega, grid.sizes):
        lo, hi = int(lo), int(hi)
        if not (0 <= lo < hi <= n):
            raise ValueError("omega bounds (%d, %d) outside grid of %d" % (lo, hi, n))
        sl.append(slice(lo, hi))
    mask[tuple(sl)] = True
    return mask


def _e_gl_omega(values, grid, model, phi, mask):
    """Ginzburg-Landau energy attributed to Omega: every link touching an
    Omega cell plus the potential over Omega cells. The 2N+1-point stencil
    restricted to Omega is the exact gradient of this sum."""
    vol = grid.cell_volume
    kin = 0.0
    for ax in range(grid.dim):
        h = grid.spacings[ax]
        d = np.diff(values, axis=ax)
        mlo = [slice(None)] * grid.dim
        mhi = [slice(None)] * grid.dim
        mlo[ax] = slice(0, grid.sizes[ax] - 1)
        mhi[ax] = slice(1, grid.sizes[ax])
        touched = mask[tuple(mlo)] | mask[tuple(mhi)]
        kin += float(np.sum(np.abs(d[touched]) ** 2)) / (h * h)
        # boundary links to the zero ghost layer
        first = [slice(None)] * grid.dim
        last = [slice(None)] * grid.dim
        first[ax] = 0
        last[ax] = grid.sizes[ax] - 1
        kin += float(np.sum(np.abs(values[tuple(first)][mask[tuple(first)]]) ** 2)) / (h * h)
        kin += float(np.sum(np.abs(values[tuple(last)][mask[tuple(last)]]) ** 2)) / (h * h)
    m = np.abs(model.r0 - values[mask])
    pot = model.a2 * float(np.sum((phi(m) ** 2 - model.r0 ** 2) ** 2))
    return (kin + pot) * vol


def _penalty(values, u_values, grid, model, phi, mask, h):
    p = np.abs(values[mask] - u_values[mask]) ** 2 / (32.0 * model.r0)
    return float(np.sum(phi(p))) * grid.cell_volume / (h * h)


def g_value(u: ComplexField, v: ComplexField, cfg: RegularizeConfig, model, phi) -> float:
    """G(v) for v equal to u outside Omega."""
    mask = _omega_mask(u.grid, cfg)
    if np.any(np.abs(v.values[~mask] - u.values[~mask]) > 0):
        raise ValueError("v must equal u outside Omega")
    return _e_gl_omega(v.values, u.grid, model, phi, mask) \
        + _penalty(v.values, u.values, u.grid, model, phi, mask, cfg.h)


def _h_map(values, r0, phi):
    """H(z) = (phi(|z-r0|)^2 - r0^2) phi(|z-r0|) phi'(|z-r0|) (z-r0)/|z-r0|,
    extended by 0 where z = r0."""
    z = values - r0
    m = np.abs(z)
    safe = np.where(m > 0, m, 1.0)
    pm = phi(m)
    return (pm ** 2 - r0 ** 2) * pm * phi.prime(m) * np.where(m > 0, z / safe, 0.0)


def _g_gradient(values, u_values, grid, model, phi, mask, h):
    """Exact discrete gradient of G on Omega (zero elsewhere):
    2 (-Lap v + 2 a^2 H(v)) + phi'(|v-u|^2/32r0) (v-u) / (16 r0 h^2)."""
    lap = kernels.laplacian(values, grid.spacings)
    grad = 2.0 * (-lap + 2.0 * model.a2 * _h_map(values, model.r0, phi))
    p = np.abs(values - u_values) ** 2 / (32.0 * model.r0)
    grad = grad + phi.prime(p) * (values - u_values) / (16.0 * model.r0 * h * h)
    grad[~mask] = 0.0
    return grad


def g_minimize(u: ComplexField, cfg: RegularizeConfig, model, phi):
    """Armijo descent on G from the feasible start v = u.

    Returns (v_h, info). G(v_h) <= G(u) holds by construction; a run that
    hits max_iters is flagged info["converged"] = False but still returned.
    """
    g = u.grid
    vol = g.cell_volume
    mask = _omega_mask(g, cfg)
    v = u.values.copy()
    gval = _e_gl_omega(v, g, model, phi, mask) + _penalty(v, u.values, g, model, phi, mask, cfg.h)
    g0 = gval
    step = 1e-2 * max(g.spacings) ** 2
    prev_v = prev_grad = None
    converged = False
    n_it = 0
    for n_it in range(1, cfg.max_iters + 1):
        grad = _g_gradient(v, u.values, g, model, phi, mask, cfg.h)
        gnorm_sq = float(np.sum(np.abs(grad) ** 2)) * vol
        scale = max(abs(gval), abs(g0), 1e-30)
        if math.sqrt(gnorm_sq) <= cfg.tol * scale:
            converged = True
            break
        if prev_v is not None:
            dv = (v - prev_v).ravel()
            dg = (grad - prev_grad).ravel()
            denom = float(np.real(np.vdot(dv, dg)))
            if denom > 0:
                bb = float(np.real(np.vdot(dv, dv))) / denom
                if np.isfinite(bb) and bb > 0:
                    step = bb
        prev_v = v.copy()
        prev_grad = grad
        t = step
        accepted = False
        for _ in range(60):
            trial = v - t * grad
            gt = _e_gl_omega(trial, g, model, phi, mask) \
                + _penalty(trial, u.values, g, model, phi, mask, cfg.h)
            if gt <= gval - 1e-4 * t * gnorm_sq:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            converged = True  # gradient no longer produces descent at fp resolution
            break
        v = trial
        gval = gt
        step = 2.0 * t
    out = ComplexField(g, v)
    out.validate_finite()
    info = {"converged": converged, "iters": n_it, "g_start": g0, "g_final": gval}
    return out, info


@dataclass
class RegularizeAudit:
    e_gl_u: float
    e_gl_vh: float
    l2_sq_diff: float
    pot_drift: float
    q_drift: float
    pinch_fraction: float

    CSV_HEADER = "e_gl_u,e_gl_vh,l2_sq_diff,pot_drift,q_drift,pinch_fraction"

    def csv_row(self):
        return "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g" % (
            self.e_gl_u, self.e_gl_vh, self.l2_sq_diff, self.pot_drift,
            self.q_drift, self.pinch_fraction)


def g_audit(u: ComplexField, v_h: ComplexField, cfg: RegularizeConfig, model, phi,
            chi: ChiCutoff = None) -> RegularizeAudit:
    """Drift report: energy drop, L^2 displacement, potential-term drift,
    momentum drift, and the fraction of interior Omega points whose modulus
    is pinched into (r0 - delta, r0 + delta) with delta = r0/2."""
    chi = chi or ChiCutoff(model.r0)
    g = u.grid
    mask = _omega_mask(g, cfg)
    vol = g.cell_volume
    e_u = _e_gl_omega(u.values, g, model, phi, mask)
    e_v = _e_gl_omega(v_h.values, g, model, phi, mask)
    diff = v_h.values - u.values
    l2 = float(np.sum(np.abs(diff[mask]) ** 2)) * vol
    mu = np.abs(model.r0 - u.values[mask])
    mv = np.abs(model.r0 - v_h.values[mask])
    pot_u = (phi(mu) ** 2 - model.r0 ** 2) ** 2
    pot_v = (phi(mv) ** 2 - model.r0 ** 2) ** 2
    pot_drift = float(np.sum(np.abs(pot_u - pot_v))) * vol
    q_drift = abs(momentum_general(u, chi) - momentum_general(v_h, chi))
    # interior = Omega eroded by 4 cells per axis
    interior = mask.copy()
    for ax in range(g.dim):
        m = interior
        for shift in (4, -4):
            rolled = np.zeros_like(mask)
            src = [slice(None)] * g.dim
            dst = [slice(None)] * g.dim
            n = g.sizes[ax]
            if shift > 0:
                src[ax] = slice(0, n - shift)
                dst[ax] = slice(shift, n)
            else:
                src[ax] = slice(-shift, n)
                dst[ax] = slice(0, n + shift)
            rolled[tuple(dst)] = mask[tuple(src)]
            m = m & rolled
        interior = m
    delta = model.r0 / 2.0
    if np.any(interior):
        mv_int = np.abs(model.r0 - v_h.values[interior])
        pinch = float(np.mean(np.abs(mv_int - model.r0) < delta))
    else:
        pinch = 1.0
    return RegularizeAudit(
        e_gl_u=e_u, e_gl_vh=e_v, l2_sq_diff=l2, pot_drift=pot_drift,
        q_drift=q_drift, pinch_fraction=pinch)
