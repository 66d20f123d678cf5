# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernel: per-seed min-plus column relaxation + period detection.

Mirrors ``_kernel_py`` exactly; both return bit-identical results.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef cnp.int32_t INF_C = 1 << 30
cdef cnp.int32_t CLAMP_C = (1 << 30) - 256

INF = 1 << 30
CLAMP = (1 << 30) - 256

BACKEND_NAME = "c"


def relax_column(w_prev, cnp.int64_t[::1] indptr, cnp.int32_t[::1] src,
                 cnp.int32_t[::1] cost):
    cdef Py_ssize_t n_states = indptr.shape[0] - 1
    out_np = np.empty(n_states, dtype=np.int32)
    cdef cnp.int32_t[::1] out = out_np
    cdef cnp.int32_t[::1] wp = np.ascontiguousarray(w_prev, dtype=np.int32)
    _relax(wp, indptr, src, cost, out)
    return out_np


cdef void _relax(cnp.int32_t[::1] wp, cnp.int64_t[::1] indptr,
                 cnp.int32_t[::1] src, cnp.int32_t[::1] cost,
                 cnp.int32_t[::1] out) nogil:
    cdef Py_ssize_t n_states = indptr.shape[0] - 1
    cdef Py_ssize_t t, e, e_end
    cdef cnp.int32_t best, v
    for t in range(n_states):
        best = INF_C
        e_end = indptr[t + 1]
        for e in range(indptr[t], e_end):
            v = wp[src[e]] + cost[e]
            if v < best:
                best = v
        if best >= CLAMP_C:
            best = INF_C
        out[t] = best


cdef bint _match(cnp.int32_t[::1] cur, cnp.int32_t[::1] prev,
                 cnp.int64_t* q_out) nogil:
    cdef Py_ssize_t n = cur.shape[0]
    cdef Py_ssize_t t
    cdef bint q_set = False
    cdef cnp.int64_t q = 0
    cdef cnp.int32_t a, b
    for t in range(n):
        a = cur[t]
        b = prev[t]
        if a == INF_C or b == INF_C:
            if a != b:
                return False
        else:
            if not q_set:
                q = a - b
                q_set = True
            elif a - b != q:
                return False
    q_out[0] = q
    return True


def run_seed(cnp.int64_t[::1] indptr, cnp.int32_t[::1] src, cnp.int32_t[::1] cost,
             Py_ssize_t seed, Py_ssize_t n_max, Py_ssize_t p_max, Py_ssize_t window,
             bint early_stop):
    """Same contract as ``_kernel_py.run_seed``."""
    cdef Py_ssize_t n_states = indptr.shape[0] - 1
    cdef Py_ssize_t ring_len = p_max + 1
    ring_np = np.full((ring_len, n_states), INF_C, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] ring = ring_np
    diag_np = np.full(n_max + 1, INF_C, dtype=np.int64)
    cdef cnp.int64_t[::1] diag = diag_np
    streak_np = np.zeros(p_max + 1, dtype=np.int64)
    qvals_np = np.zeros(p_max + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] streak = streak_np
    cdef cnp.int64_t[::1] qvals = qvals_np

    cdef bint found = False
    cdef bint anomaly = False
    cdef Py_ssize_t cert_n = 0, cert_p = 0, i, p, k, p_top
    cdef cnp.int64_t cert_q = 0, verified = 0, q = 0, base

    ring[0, seed] = 0
    diag[0] = 0

    with nogil:
        for i in range(1, n_max + 1):
            _relax(ring[(i - 1) % ring_len], indptr, src, cost, ring[i % ring_len])
            diag[i] = ring[i % ring_len, seed]
            if found:
                if _match(ring[i % ring_len], ring[(i - cert_p) % ring_len], &q) and q == cert_q:
                    verified += 1
                else:
                    anomaly = True
                continue
            p_top = p_max if p_max < i else i
            for p in range(1, p_top + 1):
                if not _match(ring[i % ring_len], ring[(i - p) % ring_len], &q):
                    streak[p] = 0
                    continue
                if streak[p] > 0 and qvals[p] == q:
                    streak[p] += 1
                else:
                    streak[p] = 1
                    qvals[p] = q
                if streak[p] >= window:
                    found = True
                    cert_n = i - window + 1
                    cert_p = p
                    cert_q = q
                    verified = window
                    break
            if found and early_stop:
                for k in range(i + 1, n_max + 1):
                    base = diag[k - cert_p]
                    diag[k] = INF_C if base == INF_C else base + cert_q
                break

    return diag_np, bool(found), int(cert_n), int(cert_p), int(cert_q), int(verified), bool(anomaly)
