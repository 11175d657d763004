"""Truncated-box discretization of the deviation field u (the wave is r0 - u).

The box is centered at the origin, axis 0 of the array is the propagation
direction x1, and the field is extended by zero outside the box (the ansatz
fields are compactly supported, so the truncation is exact for them).
"""

from dataclasses import dataclass, field
import hashlib

import numpy as np

from . import kernels


class GridError(ValueError):
    """Invalid grid construction or a field/grid mismatch."""


@dataclass(frozen=True)
class Grid:
    """Cell-centered uniform grid on a box centered at 0.

    sizes: points per axis (>= 8 each, at least 3 axes)
    spacings: cell width per axis (> 0)
    """

    sizes: tuple
    spacings: tuple

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sizes)
        spacings = tuple(float(h) for h in self.spacings)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "spacings", spacings)
        if len(sizes) < 3:
            raise GridError("grid needs dimension >= 3")
        if len(spacings) != len(sizes):
            raise GridError("sizes and spacings must have equal length")
        if any(n < 8 for n in sizes):
            raise GridError("all axis sizes must be >= 8")
        if any(h <= 0 for h in spacings):
            raise GridError("all spacings must be positive")

    @classmethod
    def cube(cls, n, half_width, dim=3):
        """Cubic grid with ``n`` points per axis spanning [-hw, hw]."""
        h = 2.0 * float(half_width) / int(n)
        return cls((n,) * dim, (h,) * dim)

    @property
    def dim(self):
        return len(self.sizes)

    @property
    def half_widths(self):
        return tuple(n * h / 2.0 for n, h in zip(self.sizes, self.spacings))

    @property
    def cell_volume(self):
        return float(np.prod(self.spacings))

    def axis_coords(self, ax):
        n = self.sizes[ax]
        return (np.arange(n) - (n - 1) / 2.0) * self.spacings[ax]

    def meshes(self):
        """Sparse coordinate meshes, one per axis."""
        return np.meshgrid(*[self.axis_coords(ax) for ax in range(self.dim)],
                           indexing="ij", sparse=True)

    def descriptor_hash(self):
        text = "grid:%d:%s:%s" % (
            self.dim,
            ",".join(str(n) for n in self.sizes),
            ",".join(repr(h) for h in self.spacings),
        )
        return hashlib.sha256(text.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class DilationSpec:
    """Anisotropic dilation u(x1/lam, x'/sigma)."""

    lam: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.lam > 0 and self.sigma > 0):
            raise ValueError("dilation factors must be positive")


@dataclass
class ComplexField:
    """Complex field values on a Grid; values beyond the box are zero."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.sizes:
            raise GridError("field shape %s does not match grid %s"
                            % (v.shape, self.grid.sizes))
        self.values = v

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.sizes, dtype=np.complex128))

    def copy(self):
        return ComplexField(self.grid, self.values.copy())

    def validate_finite(self):
        if not np.all(np.isfinite(self.values.view(np.float64))):
            raise GridError("field contains non-finite values")

    def boundary_layer_max(self):
        """Largest |value| on the outermost cell layer."""
        v = self.values
        m = 0.0
        for ax in range(v.ndim):
            first = [slice(None)] * v.ndim
            last = [slice(None)] * v.ndim
            first[ax] = 0
            last[ax] = v.shape[ax] - 1
            m = max(m, float(np.max(np.abs(v[tuple(first)]))),
                    float(np.max(np.abs(v[tuple(last)]))))
        return m

    def zero_boundary_layer(self):
        """Force the outermost cell layer to exactly zero (in place)."""
        v = self.values
        for ax in range(v.ndim):
            first = [slice(None)] * v.ndim
            last = [slice(None)] * v.ndim
            first[ax] = 0
            last[ax] = v.shape[ax] - 1
            v[tuple(first)] = 0.0
            v[tuple(last)] = 0.0


def gradient(u: ComplexField):
    """Per-axis central differences with zero ghosts; returns a list of
    ComplexField, one per axis."""
    return [
        ComplexField(u.grid, kernels.central_diff(u.values, ax, u.grid.spacings[ax]))
        for ax in range(u.grid.dim)
    ]


def integrate(grid: Grid, values) -> float:
    """Midpoint rule: sum times cell volume."""
    return float(np.sum(values)) * grid.cell_volume


def dilate_closed_form(sampler, spec: DilationSpec, grid: Grid) -> ComplexField:
    """Sample ``sampler`` at the pulled-back points (x1/lam, x'/sigma).

    ``sampler`` takes one (broadcastable) coordinate array per axis and
    returns complex values; no interpolation error is introduced.
    """
    meshes = grid.meshes()
    pulled = [meshes[0] / spec.lam] + [m / spec.sigma for m in meshes[1:]]
    vals = np.asarray(sampler(*pulled), dtype=np.complex128)
    vals = np.broadcast_to(vals, grid.sizes).copy()
    out = ComplexField(grid, vals)
    out.validate_finite()
    return out


def dilate_grid(u: ComplexField, spec: DilationSpec) -> ComplexField:
    """Multilinear resampling of ``u`` at the pulled-back coordinates;
    points mapping outside the box read 0."""
    g = u.grid
    coords = []
    for ax in range(g.dim):
        n = g.sizes[ax]
        h = g.spacings[ax]
        x = g.axis_coords(ax) / (spec.lam if ax == 0 else spec.sigma)
        idx = x / h + (n - 1) / 2.0
        shape = [1] * g.dim
        shape[ax] = n
        coords.append(np.broadcast_to(idx.reshape(shape), g.sizes))
    vals = kernels.multilinear_sample(u.values, coords)
    out = ComplexField(g, vals)
    out.validate_finite()
    return out
