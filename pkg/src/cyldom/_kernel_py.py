"""Pure-numpy kernel: per-seed min-plus column relaxation + period detection.

Reference implementation; the compiled extension in ``_kernel.pyx`` must
produce bit-identical results (see tests/test_kernels.py).
"""
from __future__ import annotations

import numpy as np

INF = 1 << 30
CLAMP = INF - 256  # values this large can only come from an INF source

BACKEND_NAME = "python"


def relax_column(w_prev: np.ndarray, indptr: np.ndarray, src: np.ndarray,
                 cost: np.ndarray) -> np.ndarray:
    """One column update: out[t] = min over edges into t of w_prev[src] + cost."""
    n_edges = src.shape[0]
    n_states = indptr.shape[0] - 1
    if n_edges == 0:
        return np.full(n_states, INF, dtype=np.int32)
    vals = w_prev[src] + cost
    starts = np.minimum(indptr[:-1], n_edges - 1)
    out = np.minimum.reduceat(vals, starts)
    out[indptr[:-1] == indptr[1:]] = INF
    out[out >= CLAMP] = INF
    return out


def _match(cur: np.ndarray, prev: np.ndarray) -> tuple[bool, int]:
    """Elementwise cur == prev + q with INF absorbing; returns (ok, q)."""
    finite = cur != INF
    if not np.array_equal(finite, prev != INF):
        return False, 0
    if not finite.any():
        return True, 0
    diff = cur[finite].astype(np.int64) - prev[finite]
    q = int(diff[0])
    return bool((diff == q).all()), q


def run_seed(indptr, src, cost, seed, n_max, p_max, window, early_stop):
    """Run the recurrence for one seed.

    Returns (diag, found, N, p, q, verified, anomaly): the diagonal
    series d_s(0..n_max), whether a periodicity certificate was found,
    its parameters, the number of consecutive matched columns, and an
    anomaly flag (a post-certificate mismatch, impossible if the update
    is translation invariant).
    """
    n_states = indptr.shape[0] - 1
    ring_len = p_max + 1
    ring: list[np.ndarray | None] = [None] * ring_len
    w = np.full(n_states, INF, dtype=np.int32)
    w[seed] = 0
    ring[0] = w
    diag = np.full(n_max + 1, INF, dtype=np.int64)
    diag[0] = 0
    streak = [0] * (p_max + 1)
    qval = [0] * (p_max + 1)
    found = False
    cert_n = cert_p = cert_q = verified = 0
    anomaly = False

    for i in range(1, n_max + 1):
        w = relax_column(ring[(i - 1) % ring_len], indptr, src, cost)
        ring[i % ring_len] = w
        diag[i] = w[seed]
        if found:
            ok, q = _match(w, ring[(i - cert_p) % ring_len])
            if ok and q == cert_q:
                verified += 1
            else:
                anomaly = True
            continue
        for p in range(1, min(p_max, i) + 1):
            ok, q = _match(w, ring[(i - p) % ring_len])
            if not ok:
                streak[p] = 0
                continue
            if streak[p] > 0 and qval[p] == q:
                streak[p] += 1
            else:
                streak[p] = 1
                qval[p] = q
            if streak[p] >= window:
                found = True
                cert_n, cert_p, cert_q, verified = i - window + 1, p, q, window
                break
        if found and early_stop:
            for k in range(i + 1, n_max + 1):
                base = diag[k - cert_p]
                diag[k] = INF if base == INF else base + cert_q
            break

    return diag, found, cert_n, cert_p, cert_q, verified, anomaly
