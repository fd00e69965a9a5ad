# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled BM25 accumulation kernel.

Must stay arithmetically identical to the pure-numpy fallback in
qasynth._bm25: same per-(query-token, document) expression, same
accumulation order (query tokens outer, postings inner).
"""


def score_all(const long long[::1] query_tids,
              const long long[::1] indptr,
              const int[::1] post_docs,
              const double[::1] post_tfs,
              const double[::1] idf,
              const double[::1] doc_norm,
              double[::1] out,
              double k1):
    cdef Py_ssize_t i, j, t, d
    cdef double k1p1 = k1 + 1.0
    cdef double w, tf
    for i in range(query_tids.shape[0]):
        t = query_tids[i]
        w = idf[t]
        for j in range(indptr[t], indptr[t + 1]):
            d = post_docs[j]
            tf = post_tfs[j]
            out[d] += w * (tf * k1p1) / (tf + doc_norm[d])
