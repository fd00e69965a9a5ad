"""BM25 scoring backend selection.

The compiled Cython kernel is used when available; otherwise a pure-numpy
fallback with the identical accumulation order takes over. Set
QASYNTH_PURE_PYTHON=1 to force the fallback. Both backends produce
bit-identical float64 scores.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from qasynth import _bm25_c

    HAVE_COMPILED = True
except ImportError:  # extension not built on this install
    _bm25_c = None
    HAVE_COMPILED = False

_FORCE_PURE = os.environ.get("QASYNTH_PURE_PYTHON", "") == "1"


def backend_name() -> str:
    return "compiled" if (HAVE_COMPILED and not _FORCE_PURE) else "pure"


def _score_all_pure(query_tids, indptr, post_docs, post_tfs, idf, doc_norm,
                    out, k1):
    k1p1 = k1 + 1.0
    for t in query_tids:
        s, e = indptr[t], indptr[t + 1]
        docs = post_docs[s:e]
        tfs = post_tfs[s:e]
        out[docs] += idf[t] * (tfs * k1p1) / (tfs + doc_norm[docs])


def score_all(query_tids: np.ndarray, indptr: np.ndarray, post_docs: np.ndarray,
              post_tfs: np.ndarray, idf: np.ndarray, doc_norm: np.ndarray,
              n_docs: int, k1: float, force_pure: bool = False) -> np.ndarray:
    """Accumulate BM25 scores for all documents against one token-id query."""
    out = np.zeros(n_docs, dtype=np.float64)
    if HAVE_COMPILED and not _FORCE_PURE and not force_pure:
        _bm25_c.score_all(query_tids, indptr, post_docs, post_tfs, idf,
                          doc_norm, out, k1)
    else:
        _score_all_pure(query_tids, indptr, post_docs, post_tfs, idf,
                        doc_norm, out, k1)
    return out
