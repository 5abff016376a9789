# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Gibbs sweep for GSDMM; see _gsdmm_py.py for the reference twin."""

from libc.math cimport exp, log
from libc.stdlib cimport malloc, free

ctypedef long long i64


def sweep(i64[::1] z, i64[::1] m, i64[::1] n, i64[:, ::1] nw,
          i64[::1] doc_ptr, i64[::1] doc_words, i64[::1] doc_counts,
          i64[::1] doc_len, double[::1] uniforms,
          double alpha, double beta, Py_ssize_t K, Py_ssize_t V):
    cdef Py_ssize_t D = doc_len.shape[0]
    cdef Py_ssize_t d, k, p, j, i, start, stop, new
    cdef i64 length, c, w, nkw, nk
    cdef double lp, hi, total, r, acc
    cdef double *logp = <double *> malloc(K * sizeof(double))
    cdef double *weights = <double *> malloc(K * sizeof(double))
    if logp == NULL or weights == NULL:
        free(logp)
        free(weights)
        raise MemoryError()

    try:
        with nogil:
            for d in range(D):
                start = doc_ptr[d]
                stop = doc_ptr[d + 1]
                length = doc_len[d]

                k = z[d]
                m[k] -= 1
                n[k] -= length
                for p in range(start, stop):
                    nw[k, doc_words[p]] -= doc_counts[p]

                for k in range(K):
                    lp = log((m[k] + alpha) / ((D - 1) + K * alpha))
                    for p in range(start, stop):
                        w = doc_words[p]
                        c = doc_counts[p]
                        nkw = nw[k, w]
                        for j in range(c):
                            lp += log(nkw + beta + j)
                    nk = n[k]
                    for i in range(length):
                        lp -= log(nk + V * beta + i)
                    logp[k] = lp

                hi = logp[0]
                for k in range(1, K):
                    if logp[k] > hi:
                        hi = logp[k]
                total = 0.0
                for k in range(K):
                    weights[k] = exp(logp[k] - hi)
                    total += weights[k]

                r = uniforms[d] * total
                acc = 0.0
                new = K - 1
                for k in range(K):
                    acc += weights[k]
                    if acc > r:
                        new = k
                        break

                z[d] = new
                m[new] += 1
                n[new] += length
                for p in range(start, stop):
                    nw[new, doc_words[p]] += doc_counts[p]
    finally:
        free(logp)
        free(weights)
