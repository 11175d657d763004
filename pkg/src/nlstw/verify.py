"""Property-check suite behind the ``verify`` command.

Each check returns a CheckResult; the CLI prints one JSON line per check
and exits nonzero if any hard check fails. Tolerances are calibrated for
the default grid size and scale with (48/n)^2 where discretization error
dominates.
"""

from dataclasses import dataclass
import json

import numpy as np

from . import functionals as fn
from .ansatz import AnsatzSpec, momentum_bounds, sampler, vortex_field
from .config import build_cutoffs
from .grid import ComplexField, DilationSpec, Grid, dilate_closed_form, dilate_grid
from .nonlinearity import GrossPitaevskii
from .random_fields import smooth_compact_field
from .variational import el_gradient, projection_quadratic_root
from .functionals import e_c_simple


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def json_line(self):
        return json.dumps({
            "check": self.name, "passed": bool(self.passed),
            "value": self.value, "tolerance": self.tolerance,
            "detail": self.detail,
        })


def _disc_tol(base, n):
    return base * (48.0 / n) ** 2


def run_checks(n=48, seed=12345, model=None):
    model = model or GrossPitaevskii()
    phi, chi = build_cutoffs(model)
    rng = np.random.default_rng(seed)
    checks = []

    spec = AnsatzSpec(R=4.0, eps=1.0, r0=model.r0)
    c = 0.5 * model.v_s

    # momentum dilation law: Q(u_{1,s}) = s^{N-1} Q(u), closed-form resampling
    grid_wide = Grid((n, n, n), (2 * 7.0 / n, 2 * 13.5 / n, 2 * 13.5 / n))
    u_base = dilate_closed_form(sampler(spec), DilationSpec(1.0, 1.0), grid_wide)
    q_base = fn.momentum_general(u_base, chi)
    worst = 0.0
    for s in (0.5, 2.0):
        u_s = dilate_closed_form(sampler(spec), DilationSpec(1.0, s), grid_wide)
        q_s = fn.momentum_general(u_s, chi)
        worst = max(worst, abs(q_s - s ** 2 * q_base) / abs(q_base))
    tol = _disc_tol(0.02, n)
    checks.append(CheckResult("momentum_dilation_sigma", worst <= tol, worst, tol,
                              "max |Q(u_{1,s}) - s^2 Q| / |Q| over s in {0.5, 2}"))

    # N=3 scaling: A invariant, B_c and D scale by s^2
    rep0 = fn.report(u_base, c, model, phi, chi)
    worst = 0.0
    for s in (0.5, 2.0):
        u_s = dilate_closed_form(sampler(spec), DilationSpec(1.0, s), grid_wide)
        rep = fn.report(u_s, c, model, phi, chi)
        worst = max(worst,
                    abs(rep.a_transverse - rep0.a_transverse) / rep0.a_transverse,
                    abs(rep.b_c - s ** 2 * rep0.b_c) / abs(rep0.b_c),
                    abs(rep.d_long - s ** 2 * rep0.d_long) / rep0.d_long)
    tol = _disc_tol(0.02, n)
    checks.append(CheckResult("transverse_scaling_n3", worst <= tol, worst, tol,
                              "A invariance and s^2 laws for B_c, D"))

    # exact x1-dilation algebra vs resampled report
    grid = Grid((n, n, n), (2 * 7.0 / n, 2 * 7.0 / n, 2 * 7.0 / n))
    u = vortex_field(spec, grid)
    rep = fn.report(u, c, model, phi, chi)
    sig = 0.8
    predicted = (rep.kinetic_x1 / sig + sig * rep.e_pot + c * rep.q)
    u_sig = dilate_grid(u, DilationSpec(lam=sig, sigma=1.0))
    rep_sig = fn.report(u_sig, c, model, phi, chi)
    err = abs(rep_sig.p_c - predicted) / rep.e_gl
    tol = _disc_tol(0.02, n)
    checks.append(CheckResult("pohozaev_dilation_algebra", err <= tol, err, tol,
                              "P_c of the resampled field vs the scalar identity"))

    # generalized momentum reduces to the plain one; chi-independence
    worst_eq = 0.0
    worst_chi = 0.0
    chi2 = fn.ChiCutoff(model.r0, profile="cubic")
    for _ in range(5):
        w = smooth_compact_field(grid, rng, amplitude=0.2 * model.r0)
        qs = fn.momentum_simple(w)
        qg = fn.momentum_general(w, chi)
        qg2 = fn.momentum_general(w, chi2)
        scale = max(abs(qs), 1e-12)
        worst_eq = max(worst_eq, abs(qg - qs) / scale)
        worst_chi = max(worst_chi, abs(qg - qg2) / scale)
    checks.append(CheckResult("momentum_equivalence", worst_eq <= 1e-6,
                              worst_eq, 1e-6,
                              "generalized vs plain momentum on smooth fields"))
    checks.append(CheckResult("chi_independence", worst_chi <= 1e-6,
                              worst_chi, 1e-6,
                              "two admissible chi profiles"))

    # Euler-Lagrange gradient vs centered difference of E_c
    worst = 0.0
    t = 1e-5
    for _ in range(3):
        uu = smooth_compact_field(grid, rng, amplitude=0.3 * model.r0)
        ww = smooth_compact_field(grid, rng, amplitude=0.3 * model.r0)
        gg = el_gradient(uu, c, model)
        lhs = float(np.sum(gg.values.real * ww.values.real
                           + gg.values.imag * ww.values.imag)) * grid.cell_volume
        up = ComplexField(grid, uu.values + t * ww.values)
        um = ComplexField(grid, uu.values - t * ww.values)
        fd = (e_c_simple(up, c, model) - e_c_simple(um, c, model)) / (2 * t)
        worst = max(worst, abs(lhs - fd) / max(abs(fd), 1e-12))
    checks.append(CheckResult("el_gradient_check", worst <= 1e-6, worst, 1e-6,
                              "directional derivative of E_c"))

    # report identities at float accuracy
    nu = fn.pohozaev_coefficient(grid.dim)
    ids = max(
        abs(rep.e_c - (rep.kinetic_x1 + rep.a_transverse + c * rep.q + rep.e_pot)),
        abs(rep.b_c - (rep.kinetic_x1 + c * rep.q + rep.e_pot)),
        abs(rep.p_c - (nu * rep.a_transverse + rep.b_c)),
    ) / max(abs(rep.e_c), 1.0)
    checks.append(CheckResult("report_identities", ids <= 1e-12, ids, 1e-12,
                              "definitional algebra of the report"))

    # exact projection quadratic, including the hand case
    s0 = projection_quadratic_root(1.0, -1.0, -2.0)
    res = abs(-2.0 * s0 ** 2 - s0 + 1.0)
    ok = abs(s0 - 0.5) <= 1e-12 and res <= 1e-12
    checks.append(CheckResult("projection_hand_case", ok, abs(s0 - 0.5), 1e-12,
                              "(K1, K2, cQ) = (1, -2, -1) gives sigma = 1/2"))

    # momentum endpoint bounds for the ring field
    lo, hi = momentum_bounds(spec, grid.dim)
    ok = 1.03 * lo <= rep.q <= 0.97 * hi
    checks.append(CheckResult("ring_momentum_bounds", ok, rep.q, 0.03,
                              "Q in [%.4g, %.4g] with 3%% slack" % (lo, hi)))

    return checks
