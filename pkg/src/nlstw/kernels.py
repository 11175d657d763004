"""Kernel backend selection.

The compiled extension ``nlstw._kernels`` accelerates the 3D hot paths
(stencils, the fused Euler-Lagrange map, trilinear resampling); everything
else, and every non-3D call, runs on the numpy reference kernels in
``_kernels_np``. Set ``NLSW_FORCE_PYTHON=1`` to force the fallback.

``NLSW_THREADS`` caps the OpenMP threads of the compiled map kernels.
Only elementwise/stencil maps are threaded; reductions happen in numpy
with a fixed pairwise order, so results are bit-identical for any thread
count.
"""

import os

import numpy as np

from . import _kernels_np as _np_impl

_cy = None
if os.environ.get("NLSW_FORCE_PYTHON", "0") != "1":
    try:
        from . import _kernels as _cy  # type: ignore[no-redef]
    except ImportError:
        _cy = None

BACKEND: str = "cython" if _cy is not None else "numpy"


def num_threads() -> int:
    """Thread cap for the compiled map kernels."""
    raw = os.environ.get("NLSW_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = min(4, os.cpu_count() or 1)
    return n


def _use_cy(u) -> bool:
    return _cy is not None and u.ndim == 3 and u.dtype == np.complex128 \
        and u.flags["C_CONTIGUOUS"]


def central_diff(u, axis, h):
    if _use_cy(u):
        return _cy.central_diff_3d(u, axis, h, num_threads())
    return _np_impl.central_diff(u, axis, h)


def second_diff(u, axis, h):
    if _use_cy(u):
        return _cy.second_diff_3d(u, axis, h, num_threads())
    return _np_impl.second_diff(u, axis, h)


def laplacian(u, spacings, axes=None):
    if _use_cy(u):
        which = tuple(range(u.ndim)) if axes is None else tuple(axes)
        return _cy.laplacian_3d(u, spacings[0], spacings[1], spacings[2],
                                0 in which, 1 in which, 2 in which,
                                num_threads())
    return _np_impl.laplacian(u, spacings, axes)


def link_kinetic(u, axis, h):
    if _use_cy(u):
        return _cy.link_kinetic_3d(u, axis, h)
    return _np_impl.link_kinetic(u, axis, h)


def el_terms(u, spacings, c, fvals, r0):
    if _use_cy(u) and fvals.flags["C_CONTIGUOUS"]:
        return _cy.el_terms_3d(u, spacings[0], spacings[1], spacings[2],
                               c, fvals, r0, num_threads())
    return _np_impl.el_terms(u, spacings, c, fvals, r0)


def field_scalars(u, spacings, r0):
    if _use_cy(u):
        return _cy.field_scalars_3d(u, spacings[0], spacings[1], spacings[2], r0)
    return _np_impl.field_scalars(u, spacings, r0)


def multilinear_sample(values, coords):
    if _use_cy(values):
        c0 = np.ascontiguousarray(coords[0], dtype=np.float64)
        c1 = np.ascontiguousarray(coords[1], dtype=np.float64)
        c2 = np.ascontiguousarray(coords[2], dtype=np.float64)
        return _cy.trilinear_sample(values, c0, c1, c2, num_threads())
    return _np_impl.multilinear_sample(values, coords)
