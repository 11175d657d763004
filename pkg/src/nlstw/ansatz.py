"""Compactly supported vortex-ring test fields.

The field winds its phase by 2 pi around the ring {x1 = 0, |x'| = R} inside
a double cone of half-length A, with the modulus mollified to zero within
distance eps of the ring. It carries strictly negative momentum with
explicit endpoint bounds, and makes E_c negative for large R at any
subsonic speed, which is what seeds the constrained minimization.
"""

from dataclasses import dataclass
import math

import numpy as np

from .grid import ComplexField, DilationSpec, Grid, dilate_closed_form


class AnsatzConfigError(ValueError):
    """Parameters outside the admissible region or support exceeding the box."""


def _smoothstep_quintic(t):
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t))


@dataclass(frozen=True)
class AnsatzSpec:
    """Parameters (A, R, eps, r0); admissible iff R > 0, 0 < eps < R/2.

    A is the cone half-length; the canonical family uses A = R.
    """

    R: float
    eps: float
    A: float = None  # defaults to R
    r0: float = 1.0

    def __post_init__(self):
        if self.A is None:
            object.__setattr__(self, "A", float(self.R))
        if not (self.R > 0 and 0 < self.eps < self.R / 2):
            raise AnsatzConfigError(
                "need R > 0 and 0 < eps < R/2, got R=%g eps=%g" % (self.R, self.eps))
        if not self.A > 0:
            raise AnsatzConfigError("cone parameter A must be positive")
        if not self.r0 > 0:
            raise AnsatzConfigError("r0 must be positive")


def theta_ar(spec: AnsatzSpec, x1, rprime):
    """Piecewise phase: 0 below the cone, linear ramp across it, 2 pi above;
    0 wherever |x'| >= R. Grid points landing exactly on the cone boundary
    take the ramp branch (whose value coincides with the outside one, so the
    tie-break only fixes which expression is evaluated)."""
    x1 = np.asarray(x1, dtype=np.float64)
    rprime = np.asarray(rprime, dtype=np.float64)
    x1, rprime = np.broadcast_arrays(x1, rprime)
    inside_disk = rprime < spec.R
    gap = np.where(inside_disk, spec.R - rprime, 1.0)
    bound = spec.A * gap / spec.R
    ramp = np.pi * spec.R * x1 / (spec.A * gap) + np.pi
    theta = np.where(x1 < -bound, 0.0, np.where(x1 > bound, 2.0 * np.pi, ramp))
    return np.where(inside_disk, theta, 0.0)


def psi_mollifier(spec: AnsatzSpec, x1, rprime):
    """Radial mollifier: 0 within distance eps of the ring, 1 beyond 2 eps,
    quintic smoothstep bridge (max slope 1.875 < 2)."""
    x1 = np.asarray(x1, dtype=np.float64)
    rprime = np.asarray(rprime, dtype=np.float64)
    tau = np.sqrt(x1 ** 2 + (rprime - spec.R) ** 2) / spec.eps
    t = np.clip(tau - 1.0, 0.0, 1.0)
    return _smoothstep_quintic(t)


def sampler(spec: AnsatzSpec):
    """Closed-form sampler of the deviation field u = r0 (1 - psi e^{i theta}).

    Takes one broadcastable coordinate array per axis; usable directly with
    dilate_closed_form.
    """

    def sample(*coords):
        x1 = coords[0]
        rp = np.sqrt(sum(np.asarray(xk, dtype=np.float64) ** 2 for xk in coords[1:]))
        x1b, rpb = np.broadcast_arrays(np.asarray(x1, dtype=np.float64), rp)
        th = theta_ar(spec, x1b, rpb)
        psi = psi_mollifier(spec, x1b, rpb)
        return spec.r0 * (1.0 - psi * np.exp(1j * th))

    return sample


def support_halfwidths(spec: AnsatzSpec):
    """(x1 half-extent, transverse half-extent) of the support."""
    return max(spec.A, 2.0 * spec.eps), spec.R + 2.0 * spec.eps


def check_support(spec: AnsatzSpec, grid: Grid, margin_cells: int = 2):
    hw = grid.half_widths
    s1, st = support_halfwidths(spec)
    need1 = s1 + margin_cells * grid.spacings[0]
    if hw[0] < need1:
        raise AnsatzConfigError(
            "axis-1 half-width %.3g < support %.3g plus margin" % (hw[0], need1))
    for ax in range(1, grid.dim):
        need = st + margin_cells * grid.spacings[ax]
        if hw[ax] < need:
            raise AnsatzConfigError(
                "axis-%d half-width %.3g < support %.3g plus margin"
                % (ax + 1, hw[ax], need))


def vortex_field(spec: AnsatzSpec, grid: Grid) -> ComplexField:
    """Sample the ring field in closed form on the grid.

    The phase enters only through exp(i theta) multiplied by the mollifier,
    which vanishes on the discontinuity ring, so no branch of theta is ever
    differenced across its jump set.
    """
    check_support(spec, grid)
    u = dilate_closed_form(sampler(spec), DilationSpec(1.0, 1.0), grid)
    u.validate_finite()
    return u


def unit_ball_volume(d: int) -> float:
    """Lebesgue volume of the unit ball in R^d."""
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def momentum_bounds(spec: AnsatzSpec, dim: int):
    """Explicit endpoints for the momentum of the ring field:
    -2 pi r0^2 w_{N-1} R^{N-1} <= Q <= -2 pi r0^2 w_{N-1} (R - 2 eps)^{N-1}."""
    w = unit_ball_volume(dim - 1)
    lo = -2.0 * math.pi * spec.r0 ** 2 * w * spec.R ** (dim - 1)
    hi = -2.0 * math.pi * spec.r0 ** 2 * w * (spec.R - 2.0 * spec.eps) ** (dim - 1)
    return lo, hi


@dataclass
class AnsatzBoundsRow:
    R: float
    eps: float
    kinetic: float
    e_pot: float
    gl_pot: float
    q: float
    q_lo: float
    q_hi: float
    q_in_bounds: bool
    e_c: float

    CSV_HEADER = "R,eps,kinetic,e_pot,gl_pot,q,q_lo,q_hi,q_in_bounds,e_c"

    def csv_row(self):
        return "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g" % (
            self.R, self.eps, self.kinetic, self.e_pot, self.gl_pot, self.q,
            self.q_lo, self.q_hi, self.q_in_bounds, self.e_c)


def evaluate_bounds(spec: AnsatzSpec, grid: Grid, c: float, model, phi, chi,
                    slack: float = 0.03) -> AnsatzBoundsRow:
    """Evaluate the ring field's functionals and the momentum endpoint test
    (widened by ``slack`` for discretization)."""
    from . import functionals as fn

    u = vortex_field(spec, grid)
    rep = fn.report(u, c, model, phi, chi)
    lo, hi = momentum_bounds(spec, grid.dim)
    ok = (1.0 + slack) * lo <= rep.q <= (1.0 - slack) * hi
    return AnsatzBoundsRow(
        R=spec.R, eps=spec.eps,
        kinetic=rep.kinetic_x1 + rep.a_transverse,
        e_pot=rep.e_pot,
        gl_pot=rep.e_gl - rep.kinetic_x1 - rep.a_transverse,
        q=rep.q, q_lo=lo, q_hi=hi, q_in_bounds=ok,
        e_c=rep.e_c,
    )


def verify_bounds_sweep(specs, grid_for_spec, c, model, phi, chi, slack=0.03):
    """Rows for each spec plus ratio-stability summaries.

    ratio_kinetic: kinetic / (R^{N-2} (1 + ln(R/eps))),
    ratio_pot:     |e_pot| / (eps^2 R^{N-2}),
    ratio_gl:      gl potential / (eps^2 R^{N-2}).
    The momentum endpoint test is the only hard gate; the ratios track the
    growth rates and should stay within a factor ~2 when R doubles.
    """
    rows = []
    ratios = []
    for spec in specs:
        grid = grid_for_spec(spec)
        dim = grid.dim
        row = evaluate_bounds(spec, grid, c, model, phi, chi, slack)
        rows.append(row)
        rn2 = spec.R ** (dim - 2)
        ratios.append({
            "R": spec.R, "eps": spec.eps,
            "ratio_kinetic": row.kinetic / (rn2 * (1.0 + math.log(spec.R / spec.eps))),
            "ratio_pot": abs(row.e_pot) / (spec.eps ** 2 * rn2),
            "ratio_gl": row.gl_pot / (spec.eps ** 2 * rn2),
        })
    return rows, ratios
