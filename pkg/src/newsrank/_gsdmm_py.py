"""Pure-Python Gibbs sweep for GSDMM.

Mirror of ``_gsdmm_ext.pyx``.  Both kernels perform the same floating
point operations in the same order so that a seeded run gives identical
assignments on either backend.  Keep them in lockstep.
"""

from math import exp, log


def cluster_log_weight(k, m, n, nw_k, words, counts, length, n_docs, alpha, beta, K, V):
    lp = log((m[k] + alpha) / (n_docs - 1 + K * alpha))
    for w, c in zip(words, counts):
        nkw = nw_k[w]
        for j in range(c):
            lp += log(nkw + beta + j)
    nk = n[k]
    for i in range(length):
        lp -= log(nk + V * beta + i)
    return lp


def sweep(z, m, n, nw, doc_ptr, doc_words, doc_counts, doc_len, uniforms, alpha, beta, K, V):
    """One full sweep over all documents; updates the count arrays in place."""
    D = len(doc_len)
    z_l = z.tolist()
    m_l = m.tolist()
    n_l = n.tolist()
    nw_l = nw.tolist()
    ptr = doc_ptr.tolist()
    words_all = doc_words.tolist()
    counts_all = doc_counts.tolist()
    lens = doc_len.tolist()
    u_l = uniforms.tolist()
    logp = [0.0] * K
    weights = [0.0] * K

    for d in range(D):
        words = words_all[ptr[d]:ptr[d + 1]]
        counts = counts_all[ptr[d]:ptr[d + 1]]
        length = lens[d]

        k = z_l[d]
        m_l[k] -= 1
        n_l[k] -= length
        row = nw_l[k]
        for w, c in zip(words, counts):
            row[w] -= c

        for k in range(K):
            logp[k] = cluster_log_weight(k, m_l, n_l, nw_l[k], words, counts, length, D, alpha, beta, K, V)
        hi = logp[0]
        for k in range(1, K):
            if logp[k] > hi:
                hi = logp[k]
        total = 0.0
        for k in range(K):
            weights[k] = exp(logp[k] - hi)
            total += weights[k]

        r = u_l[d] * total
        acc = 0.0
        new = K - 1
        for k in range(K):
            acc += weights[k]
            if acc > r:
                new = k
                break

        z_l[d] = new
        m_l[new] += 1
        n_l[new] += length
        row = nw_l[new]
        for w, c in zip(words, counts):
            row[w] += c

    z[:] = z_l
    m[:] = m_l
    n[:] = n_l
    nw[:, :] = nw_l
