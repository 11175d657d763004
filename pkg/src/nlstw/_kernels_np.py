"""Pure-numpy implementations of the hot stencil kernels.

These are the reference kernels; ``nlstw._kernels`` (Cython) provides the
same signatures compiled. Ghost values outside the box are zero everywhere
(Dirichlet truncation). All reductions go through ``np.sum`` so results do
not depend on the thread count.
"""

import numpy as np

BACKEND = "numpy"


def central_diff(u, axis, h):
    """Second-order central difference along ``axis`` with zero ghosts."""
    d = np.zeros_like(u)
    n = u.shape[axis]
    src_hi = [slice(None)] * u.ndim
    src_lo = [slice(None)] * u.ndim
    dst = [slice(None)] * u.ndim
    dst[axis] = slice(1, n - 1)
    src_hi[axis] = slice(2, n)
    src_lo[axis] = slice(0, n - 2)
    d[tuple(dst)] = u[tuple(src_hi)] - u[tuple(src_lo)]
    # boundary cells: one-sided neighbour is the zero ghost
    first = [slice(None)] * u.ndim
    second = [slice(None)] * u.ndim
    first[axis] = 0
    second[axis] = 1
    d[tuple(first)] = u[tuple(second)]
    last = [slice(None)] * u.ndim
    prev = [slice(None)] * u.ndim
    last[axis] = n - 1
    prev[axis] = n - 2
    d[tuple(last)] = -u[tuple(prev)]
    d *= 1.0 / (2.0 * h)
    return d


def second_diff(u, axis, h):
    """Three-point second difference along ``axis`` with zero ghosts."""
    d = -2.0 * u
    n = u.shape[axis]
    lo = [slice(None)] * u.ndim
    hi = [slice(None)] * u.ndim
    dst_hi = [slice(None)] * u.ndim
    dst_lo = [slice(None)] * u.ndim
    lo[axis] = slice(0, n - 1)
    hi[axis] = slice(1, n)
    dst_hi[axis] = slice(1, n)
    dst_lo[axis] = slice(0, n - 1)
    d[tuple(dst_hi)] += u[tuple(lo)]
    d[tuple(dst_lo)] += u[tuple(hi)]
    d *= 1.0 / (h * h)
    return d


def laplacian(u, spacings, axes=None):
    """Standard 2N+1-point Laplacian over ``axes`` (all axes by default)."""
    if axes is None:
        axes = range(u.ndim)
    out = np.zeros_like(u)
    for ax in axes:
        out += second_diff(u, ax, spacings[ax])
    return out


def link_kinetic(u, axis, h):
    """Dirichlet-form kinetic sum along ``axis``: sum over all links of
    |u(x+he) - u(x)|^2 / h^2, including both boundary links to the zero
    ghost layer. The 3-point second difference is the exact gradient of
    this quadratic form, which is what makes the discrete Euler-Lagrange
    gradient exact."""
    d = np.diff(u, axis=axis)
    s = np.sum(np.abs(d) ** 2)
    first = [slice(None)] * u.ndim
    first[axis] = 0
    last = [slice(None)] * u.ndim
    last[axis] = u.shape[axis] - 1
    s += np.sum(np.abs(u[tuple(first)]) ** 2)
    s += np.sum(np.abs(u[tuple(last)]) ** 2)
    return float(s) / (h * h)


def el_terms(u, spacings, c, fvals, r0):
    """Fused Euler-Lagrange gradient pieces.

    Returns (gA, gB) with
      gA = -2 * (transverse Laplacian of u)
      gB = 2 * (-d^2u/dx1^2 + i c du/dx1 + fvals * (r0 - u))
    so el_gradient = gA + gB.
    """
    gA = -2.0 * laplacian(u, spacings, axes=range(1, u.ndim))
    gB = 2.0 * (
        -second_diff(u, 0, spacings[0])
        + (1j * c) * central_diff(u, 0, spacings[0])
        + fvals * (r0 - u)
    )
    return gA, gB


def field_scalars(u, spacings, r0):
    """(x1 link sum, transverse link sum, <i du/dx1, u> sum, |r0-u|^2)."""
    k1 = link_kinetic(u, 0, spacings[0])
    at = sum(link_kinetic(u, ax, spacings[ax]) for ax in range(1, u.ndim))
    d1 = central_diff(u, 0, spacings[0])
    q1 = float(np.sum(d1.real * u.imag - d1.imag * u.real))
    s = (r0 - u.real) ** 2 + u.imag ** 2
    return k1, at, q1, s


def multilinear_sample(values, coords):
    """Multilinear interpolation of ``values`` at fractional index
    coordinates ``coords`` (one array per axis); out-of-box reads are 0."""
    ndim = values.ndim
    shape = coords[0].shape
    padded = np.pad(values, 2, mode="constant")
    base = []
    frac = []
    for ax in range(ndim):
        x = np.asarray(coords[ax], dtype=np.float64)
        # anything at least one cell outside lands entirely in the zero pad;
        # the clip below only moves such points deeper into it
        x = np.clip(x, -1.5, values.shape[ax] + 0.5)
        i0 = np.floor(x).astype(np.intp)
        base.append(i0 + 2)  # shift into padded frame
        frac.append(x - i0)
    out = np.zeros(shape, dtype=values.dtype)
    for corner in range(1 << ndim):
        w = np.ones(shape, dtype=np.float64)
        idx = []
        for ax in range(ndim):
            if corner >> ax & 1:
                idx.append(base[ax] + 1)
                w = w * frac[ax]
            else:
                idx.append(base[ax])
                w = w * (1.0 - frac[ax])
        out += w * padded[tuple(idx)]
    return out
