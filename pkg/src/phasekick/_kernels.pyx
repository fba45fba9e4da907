# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo block kernels.

Same contract as ``_kernels_py``: each returns an ``(n_steps, 4)`` array of
per-step sums of cos(Theta), sin(Theta), cos^2, sin^2 over the block.
"""

import numpy as np

from libc.math cimport cos, sin, sqrt, log, M_PI
from libc.stdint cimport uint32_t, uint64_t, int64_t

cdef uint32_t M0 = 0xD2511F53
cdef uint32_t M1 = 0xCD9E8D57
cdef uint32_t W0 = 0x9E3779B9
cdef uint32_t W1 = 0xBB67AE85
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline void _uniforms(uint64_t seed, uint32_t step, uint64_t traj,
                           double* u1, double* u2) noexcept nogil:
    cdef uint32_t c0 = step
    cdef uint32_t c1 = <uint32_t>traj
    cdef uint32_t c2 = <uint32_t>(traj >> 32)
    cdef uint32_t c3 = 0
    cdef uint32_t k0 = <uint32_t>seed
    cdef uint32_t k1 = <uint32_t>(seed >> 32)
    cdef uint64_t p0, p1
    cdef int r
    for r in range(10):
        if r:
            k0 += W0
            k1 += W1
        p0 = <uint64_t>M0 * c0
        p1 = <uint64_t>M1 * c2
        c0 = <uint32_t>(p1 >> 32) ^ c1 ^ k0
        c1 = <uint32_t>p1
        c2 = <uint32_t>(p0 >> 32) ^ c3 ^ k1
        c3 = <uint32_t>p0
    u1[0] = (<double>((<uint64_t>(c0 >> 5)) * 67108864 + (c1 >> 6))) * INV_2_53
    u2[0] = (<double>((<uint64_t>(c2 >> 5)) * 67108864 + (c3 >> 6))) * INV_2_53


cdef inline void _add(double[:, ::1] out, Py_ssize_t i, double total) noexcept nogil:
    cdef double c = cos(total)
    cdef double s = sin(total)
    out[i, 0] += c
    out[i, 1] += s
    out[i, 2] += c * c
    out[i, 3] += s * s


def markov_block(uint64_t seed, int64_t t_start, int64_t t_count, int n_steps,
                 const double[::1] angles, int64_t init_state,
                 const double[::1] comp_cum, const int64_t[::1] row_ptr,
                 const int64_t[::1] atom_state, const double[::1] atom_cum):
    out_arr = np.zeros((n_steps, 4))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t n_comp = comp_cum.shape[0]
    cdef Py_ssize_t n_states = (row_ptr.shape[0] - 1) // n_comp
    cdef Py_ssize_t t, i, j, k, lo, hi, row
    cdef int64_t state
    cdef double total, u1, u2
    with nogil:
        for t in range(t_start, t_start + t_count):
            state = init_state
            total = 0.0
            for i in range(n_steps):
                _uniforms(seed, <uint32_t>i, <uint64_t>t, &u1, &u2)
                j = 0
                while j < n_comp - 1 and u1 >= comp_cum[j]:
                    j += 1
                row = j * n_states + state
                lo = row_ptr[row]
                hi = row_ptr[row + 1]
                k = lo
                while k < hi - 1 and u2 >= atom_cum[k]:
                    k += 1
                state = atom_state[k]
                total += angles[state]
                _add(out, i, total)
    return out_arr


def gaussian_block(uint64_t seed, int64_t t_start, int64_t t_count, int n_steps,
                   double sigma, bint correlated):
    out_arr = np.zeros((n_steps, 4))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t t, i
    cdef double total, first, u1, u2
    with nogil:
        for t in range(t_start, t_start + t_count):
            total = 0.0
            if correlated:
                _uniforms(seed, 0, <uint64_t>t, &u1, &u2)
                first = sigma * (sqrt(-2.0 * log(1.0 - u1)) * cos(2.0 * M_PI * u2))
                for i in range(n_steps):
                    _add(out, i, (i + 1) * first)
            else:
                for i in range(n_steps):
                    _uniforms(seed, <uint32_t>i, <uint64_t>t, &u1, &u2)
                    total += sigma * (sqrt(-2.0 * log(1.0 - u1)) * cos(2.0 * M_PI * u2))
                    _add(out, i, total)
    return out_arr
