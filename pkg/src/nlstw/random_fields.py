"""Seeded random smooth compactly supported test fields.

Used by the verification suite and the tests: a handful of low-wavenumber
Fourier modes under a smooth plateau window that vanishes identically near
the box boundary.
"""

import numpy as np

from .grid import ComplexField, Grid


def _plateau(x, half_width):
    """1 on |x| <= 0.55 hw, 0 beyond 0.85 hw, quintic smoothstep between."""
    t = np.clip((np.abs(x) / half_width - 0.55) / 0.30, 0.0, 1.0)
    s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
    return 1.0 - s


def window(grid: Grid):
    w = np.ones(grid.sizes, dtype=np.float64)
    for ax in range(grid.dim):
        shape = [1] * grid.dim
        shape[ax] = grid.sizes[ax]
        w = w * _plateau(grid.axis_coords(ax), grid.half_widths[ax]).reshape(shape)
    return w


def smooth_compact_field(grid: Grid, rng, amplitude=0.2, n_modes=4,
                         max_wavenumber=0.6, real=False) -> ComplexField:
    """Sum of ``n_modes`` random plane waves, windowed and scaled so the
    max modulus equals ``amplitude``."""
    meshes = grid.meshes()
    vals = np.zeros(grid.sizes, dtype=np.complex128)
    for _ in range(n_modes):
        k = rng.uniform(-max_wavenumber, max_wavenumber, size=grid.dim)
        phase = rng.uniform(0, 2 * np.pi)
        coef = rng.normal() + (0.0 if real else 1j * rng.normal())
        arg = sum(k[ax] * meshes[ax] for ax in range(grid.dim)) + phase
        vals = vals + coef * np.exp(1j * arg)
    if real:
        vals = vals.real.astype(np.complex128)
    vals *= window(grid)
    peak = float(np.max(np.abs(vals)))
    if peak > 0:
        vals *= amplitude / peak
    out = ComplexField(grid, vals)
    out.zero_boundary_layer()
    return out
