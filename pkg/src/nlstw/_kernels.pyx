# Compiled 3D kernels: stencils, the fused Euler-Lagrange map and trilinear
# resampling. Maps parallelize over x1 slabs with OpenMP (each output cell
# written once, no reductions), so results are identical for any thread
# count; sums stay in numpy.

import numpy as np

cimport cython
cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()

BACKEND = "cython"

ctypedef double complex dcomplex


def central_diff_3d(dcomplex[:, :, ::1] u, int axis, double h, int threads):
    cdef Py_ssize_t n0 = u.shape[0], n1 = u.shape[1], n2 = u.shape[2]
    out_arr = np.empty((n0, n1, n2), dtype=np.complex128)
    cdef dcomplex[:, :, ::1] out = out_arr
    cdef double w = 1.0 / (2.0 * h)
    cdef Py_ssize_t i, j, k
    cdef dcomplex hi, lo
    if axis == 0:
        for i in prange(n0, nogil=True, num_threads=threads):
            for j in range(n1):
                for k in range(n2):
                    hi = u[i + 1, j, k] if i + 1 < n0 else 0
                    lo = u[i - 1, j, k] if i > 0 else 0
                    out[i, j, k] = w * (hi - lo)
    elif axis == 1:
        for i in prange(n0, nogil=True, num_threads=threads):
            for j in range(n1):
                for k in range(n2):
                    hi = u[i, j + 1, k] if j + 1 < n1 else 0
                    lo = u[i, j - 1, k] if j > 0 else 0
                    out[i, j, k] = w * (hi - lo)
    else:
        for i in prange(n0, nogil=True, num_threads=threads):
            for j in range(n1):
                for k in range(n2):
                    hi = u[i, j, k + 1] if k + 1 < n2 else 0
                    lo = u[i, j, k - 1] if k > 0 else 0
                    out[i, j, k] = w * (hi - lo)
    return out_arr


def second_diff_3d(dcomplex[:, :, ::1] u, int axis, double h, int threads):
    cdef Py_ssize_t n0 = u.shape[0], n1 = u.shape[1], n2 = u.shape[2]
    out_arr = np.empty((n0, n1, n2), dtype=np.complex128)
    cdef dcomplex[:, :, ::1] out = out_arr
    cdef double w = 1.0 / (h * h)
    cdef Py_ssize_t i, j, k
    cdef dcomplex hi, lo
    if axis == 0:
        for i in prange(n0, nogil=True, num_threads=threads):
            for j in range(n1):
                for k in range(n2):
                    hi = u[i + 1, j, k] if i + 1 < n0 else 0
                    lo = u[i - 1, j, k] if i > 0 else 0
                    out[i, j, k] = w * (hi + lo - 2.0 * u[i, j, k])
    elif axis == 1:
        for i in prange(n0, nogil=True, num_threads=threads):
            for j in range(n1):
                for k in range(n2):
                    hi = u[i, j + 1, k] if j + 1 < n1 else 0
                    lo = u[i, j - 1, k] if j > 0 else 0
                    out[i, j, k] = w * (hi + lo - 2.0 * u[i, j, k])
    else:
        for i in prange(n0, nogil=True, num_threads=threads):
            for j in range(n1):
                for k in range(n2):
                    hi = u[i, j, k + 1] if k + 1 < n2 else 0
                    lo = u[i, j, k - 1] if k > 0 else 0
                    out[i, j, k] = w * (hi + lo - 2.0 * u[i, j, k])
    return out_arr


def laplacian_3d(dcomplex[:, :, ::1] u, double h0, double h1, double h2,
                 bint ax0, bint ax1, bint ax2, int threads):
    cdef Py_ssize_t n0 = u.shape[0], n1 = u.shape[1], n2 = u.shape[2]
    out_arr = np.zeros((n0, n1, n2), dtype=np.complex128)
    cdef dcomplex[:, :, ::1] out = out_arr
    cdef double w0 = 1.0 / (h0 * h0), w1 = 1.0 / (h1 * h1), w2 = 1.0 / (h2 * h2)
    cdef Py_ssize_t i, j, k
    cdef dcomplex acc, c
    for i in prange(n0, nogil=True, num_threads=threads):
        for j in range(n1):
            for k in range(n2):
                c = u[i, j, k]
                acc = 0
                if ax0:
                    acc = acc + w0 * ((u[i + 1, j, k] if i + 1 < n0 else 0)
                                      + (u[i - 1, j, k] if i > 0 else 0) - 2.0 * c)
                if ax1:
                    acc = acc + w1 * ((u[i, j + 1, k] if j + 1 < n1 else 0)
                                      + (u[i, j - 1, k] if j > 0 else 0) - 2.0 * c)
                if ax2:
                    acc = acc + w2 * ((u[i, j, k + 1] if k + 1 < n2 else 0)
                                      + (u[i, j, k - 1] if k > 0 else 0) - 2.0 * c)
                out[i, j, k] = acc
    return out_arr


def link_kinetic_3d(dcomplex[:, :, ::1] u, int axis, double h):
    # sequential sum in a fixed order: deterministic
    cdef Py_ssize_t n0 = u.shape[0], n1 = u.shape[1], n2 = u.shape[2]
    cdef Py_ssize_t i, j, k
    cdef double s = 0.0, re, im
    cdef dcomplex d
    if axis == 0:
        for i in range(n0 + 1):
            for j in range(n1):
                for k in range(n2):
                    d = (u[i, j, k] if i < n0 else 0) - (u[i - 1, j, k] if i > 0 else 0)
                    s += d.real * d.real + d.imag * d.imag
    elif axis == 1:
        for i in range(n0):
            for j in range(n1 + 1):
                for k in range(n2):
                    d = (u[i, j, k] if j < n1 else 0) - (u[i, j - 1, k] if j > 0 else 0)
                    s += d.real * d.real + d.imag * d.imag
    else:
        for i in range(n0):
            for j in range(n1):
                for k in range(n2 + 1):
                    d = (u[i, j, k] if k < n2 else 0) - (u[i, j, k - 1] if k > 0 else 0)
                    s += d.real * d.real + d.imag * d.imag
    return s / (h * h)


def el_terms_3d(dcomplex[:, :, ::1] u, double h0, double h1, double h2,
                double c, double[:, :, ::1] fvals, double r0, int threads):
    cdef Py_ssize_t n0 = u.shape[0], n1 = u.shape[1], n2 = u.shape[2]
    ga_arr = np.empty((n0, n1, n2), dtype=np.complex128)
    gb_arr = np.empty((n0, n1, n2), dtype=np.complex128)
    cdef dcomplex[:, :, ::1] ga = ga_arr
    cdef dcomplex[:, :, ::1] gb = gb_arr
    cdef double w0 = 1.0 / (h0 * h0), w1 = 1.0 / (h1 * h1), w2 = 1.0 / (h2 * h2)
    cdef double wd = 1.0 / (2.0 * h0)
    cdef Py_ssize_t i, j, k
    cdef dcomplex cc, lapt, lap1, d1
    cdef dcomplex ic = 1j * c
    for i in prange(n0, nogil=True, num_threads=threads):
        for j in range(n1):
            for k in range(n2):
                cc = u[i, j, k]
                lapt = (w1 * ((u[i, j + 1, k] if j + 1 < n1 else 0)
                              + (u[i, j - 1, k] if j > 0 else 0) - 2.0 * cc)
                        + w2 * ((u[i, j, k + 1] if k + 1 < n2 else 0)
                                + (u[i, j, k - 1] if k > 0 else 0) - 2.0 * cc))
                lap1 = w0 * ((u[i + 1, j, k] if i + 1 < n0 else 0)
                             + (u[i - 1, j, k] if i > 0 else 0) - 2.0 * cc)
                d1 = wd * ((u[i + 1, j, k] if i + 1 < n0 else 0)
                           - (u[i - 1, j, k] if i > 0 else 0))
                ga[i, j, k] = -2.0 * lapt
                gb[i, j, k] = 2.0 * (-lap1 + ic * d1 + fvals[i, j, k] * (r0 - cc))
    return ga_arr, gb_arr


def field_scalars_3d(dcomplex[:, :, ::1] u, double h0, double h1, double h2,
                     double r0):
    """One-pass raw sums for the per-iteration functionals:
    (k1_link_sum/h0^2, transverse_link_sum, q1_sum, s=|r0-u|^2 array).
    Sequential fixed-order accumulation: deterministic."""
    cdef Py_ssize_t n0 = u.shape[0], n1 = u.shape[1], n2 = u.shape[2]
    s_arr = np.empty((n0, n1, n2), dtype=np.float64)
    cdef double[:, :, ::1] s = s_arr
    cdef double w0 = 1.0 / (h0 * h0), w1 = 1.0 / (h1 * h1), w2 = 1.0 / (h2 * h2)
    cdef double wd = 1.0 / (2.0 * h0)
    cdef double k1 = 0.0, at = 0.0, q1 = 0.0, re, im
    cdef Py_ssize_t i, j, k
    cdef dcomplex cc, nb, d
    for i in range(n0):
        for j in range(n1):
            for k in range(n2):
                cc = u[i, j, k]
                re = r0 - cc.real
                im = cc.imag
                s[i, j, k] = re * re + im * im
                # links to the lower neighbour (or ghost) per axis
                d = cc - (u[i - 1, j, k] if i > 0 else 0)
                k1 += w0 * (d.real * d.real + d.imag * d.imag)
                d = cc - (u[i, j - 1, k] if j > 0 else 0)
                at += w1 * (d.real * d.real + d.imag * d.imag)
                d = cc - (u[i, j, k - 1] if k > 0 else 0)
                at += w2 * (d.real * d.real + d.imag * d.imag)
                # closing boundary links
                if i == n0 - 1:
                    k1 += w0 * (cc.real * cc.real + cc.imag * cc.imag)
                if j == n1 - 1:
                    at += w1 * (cc.real * cc.real + cc.imag * cc.imag)
                if k == n2 - 1:
                    at += w2 * (cc.real * cc.real + cc.imag * cc.imag)
                # <i du/dx1, u> = -Im(d1 * conj(u)), central differences
                nb = (u[i + 1, j, k] if i + 1 < n0 else 0) \
                    - (u[i - 1, j, k] if i > 0 else 0)
                q1 += wd * (nb.real * cc.imag - nb.imag * cc.real)
    return k1, at, q1, s_arr


def trilinear_sample(dcomplex[:, :, ::1] v, double[:, :, ::1] c0,
                     double[:, :, ::1] c1, double[:, :, ::1] c2, int threads):
    cdef Py_ssize_t n0 = v.shape[0], n1 = v.shape[1], n2 = v.shape[2]
    out_arr = np.empty((n0, n1, n2), dtype=np.complex128)
    cdef dcomplex[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef double x0, x1, x2, f0, f1, f2
    cdef Py_ssize_t i0, i1, i2
    cdef dcomplex v000, v001, v010, v011, v100, v101, v110, v111
    for i in prange(n0, nogil=True, num_threads=threads):
        for j in range(n1):
            for k in range(n2):
                x0 = c0[i, j, k]
                x1 = c1[i, j, k]
                x2 = c2[i, j, k]
                if x0 <= -1.0 or x0 >= n0 or x1 <= -1.0 or x1 >= n1 \
                        or x2 <= -1.0 or x2 >= n2:
                    out[i, j, k] = 0
                    continue
                i0 = <Py_ssize_t> (x0 // 1.0)
                i1 = <Py_ssize_t> (x1 // 1.0)
                i2 = <Py_ssize_t> (x2 // 1.0)
                if x0 < 0:
                    i0 = -1
                if x1 < 0:
                    i1 = -1
                if x2 < 0:
                    i2 = -1
                f0 = x0 - i0
                f1 = x1 - i1
                f2 = x2 - i2
                v000 = v[i0, i1, i2] if (i0 >= 0 and i1 >= 0 and i2 >= 0) else 0
                v001 = v[i0, i1, i2 + 1] if (i0 >= 0 and i1 >= 0 and i2 + 1 < n2) else 0
                v010 = v[i0, i1 + 1, i2] if (i0 >= 0 and i1 + 1 < n1 and i2 >= 0) else 0
                v011 = v[i0, i1 + 1, i2 + 1] if (i0 >= 0 and i1 + 1 < n1 and i2 + 1 < n2) else 0
                v100 = v[i0 + 1, i1, i2] if (i0 + 1 < n0 and i1 >= 0 and i2 >= 0) else 0
                v101 = v[i0 + 1, i1, i2 + 1] if (i0 + 1 < n0 and i1 >= 0 and i2 + 1 < n2) else 0
                v110 = v[i0 + 1, i1 + 1, i2] if (i0 + 1 < n0 and i1 + 1 < n1 and i2 >= 0) else 0
                v111 = v[i0 + 1, i1 + 1, i2 + 1] if (i0 + 1 < n0 and i1 + 1 < n1 and i2 + 1 < n2) else 0
                out[i, j, k] = ((1 - f0) * ((1 - f1) * ((1 - f2) * v000 + f2 * v001)
                                            + f1 * ((1 - f2) * v010 + f2 * v011))
                                + f0 * ((1 - f1) * ((1 - f2) * v100 + f2 * v101)
                                        + f1 * ((1 - f2) * v110 + f2 * v111)))
    return out_arr
