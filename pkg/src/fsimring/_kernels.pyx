# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled gate kernel: one number-conserving two-site gate applied in
place over precomputed rank tables. Mirrors `_kernels_py.apply_gate`."""

cimport cython


@cython.boundscheck(False)
@cython.wraparound(False)
def apply_gate(double complex[::1] amps,
               Py_ssize_t[::1] idx_src,
               Py_ssize_t[::1] idx_dst,
               Py_ssize_t[::1] idx_both,
               double complex diag_src,
               double complex diag_dst,
               double complex hop,
               double complex hop_back,
               double complex phase11):
    cdef Py_ssize_t t, n_pair = idx_src.shape[0], n_both = idx_both.shape[0]
    cdef double complex a, b
    for t in range(n_pair):
        a = amps[idx_src[t]]
        b = amps[idx_dst[t]]
        amps[idx_dst[t]] = diag_dst * b + hop * a
        amps[idx_src[t]] = diag_src * a + hop_back * b
    for t in range(n_both):
        amps[idx_both[t]] = amps[idx_both[t]] * phase11
