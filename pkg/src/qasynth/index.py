"""In-process inverted index over corpus sentences with Okapi BM25 scoring.

Tokenization is shared with the metrics module so the retrieval filter and
the index agree on what a token is. IDF uses the +1-smoothed form
ln(1 + (N - df + 0.5) / (df + 0.5)) with k1=1.2, b=0.75.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Union

import numpy as np

from qasynth import _bm25
from qasynth.corpus import Corpus
from qasynth.errors import DataError
from qasynth.metrics import tokenize

K1 = 1.2
B = 0.75

INDEX_FORMAT = "qasynth-index"
INDEX_VERSION = 1


class InvertedIndex:
    """CSR-layout postings over sentences, plus precomputed BM25 factors."""

    def __init__(self, sent_ids: list[str], vocab: dict[str, int],
                 indptr: np.ndarray, post_docs: np.ndarray,
                 post_tfs: np.ndarray, doc_len: np.ndarray,
                 k1: float = K1, b: float = B) -> None:
        self.sent_ids = sent_ids
        self.sent_pos = {sid: i for i, sid in enumerate(sent_ids)}
        self.vocab = vocab
        self.indptr = indptr
        self.post_docs = post_docs
        self.post_tfs = post_tfs
        self.doc_len = doc_len
        self.k1 = k1
        self.b = b
        self.N = len(sent_ids)
        total = int(doc_len.sum())
        self.avgdl = total / self.N if self.N else 0.0
        self.df = np.diff(indptr).astype(np.int64)
        # math.log per token keeps idf bit-identical to scalar re-computation
        self.idf = np.array(
            [math.log(1.0 + (self.N - int(df) + 0.5) / (int(df) + 0.5))
             for df in self.df],
            dtype=np.float64,
        )
        if self.N and self.avgdl > 0:
            self.doc_norm = k1 * (1.0 - b + (b * doc_len.astype(np.float64)) / self.avgdl)
        else:
            self.doc_norm = np.full(self.N, k1 * (1.0 - b), dtype=np.float64)

    def query_token_ids(self, tokens: list[str]) -> np.ndarray:
        """Map query tokens to ids, dropping out-of-vocabulary tokens."""
        return np.array([self.vocab[t] for t in tokens if t in self.vocab],
                        dtype=np.int64)

    def score_all(self, query_tokens: list[str], force_pure: bool = False) -> np.ndarray:
        tids = self.query_token_ids(query_tokens)
        return _bm25.score_all(tids, self.indptr, self.post_docs, self.post_tfs,
                               self.idf, self.doc_norm, self.N, self.k1,
                               force_pure=force_pure)

    def ranked(self, query_tokens: list[str], top_k: int) -> list[tuple[str, float]]:
        """All sentences by descending score, ties broken by ascending sent_id."""
        scores = self.score_all(query_tokens)
        order = sorted(range(self.N), key=lambda i: (-scores[i], self.sent_ids[i]))
        return [(self.sent_ids[i], float(scores[i])) for i in order[:top_k]]


def build_index(corpus: Corpus) -> InvertedIndex:
    """Index every sentence of the corpus. An empty corpus yields a valid empty index."""
    sent_ids = list(corpus.sentence_order)
    doc_tokens = [tokenize(corpus.sentences[sid].text) for sid in sent_ids]
    vocab_terms = sorted({t for toks in doc_tokens for t in toks})
    vocab = {t: i for i, t in enumerate(vocab_terms)}

    postings: list[list[tuple[int, int]]] = [[] for _ in vocab_terms]
    for doc_idx, toks in enumerate(doc_tokens):
        counts: dict[str, int] = {}
        for t in toks:
            counts[t] = counts.get(t, 0) + 1
        for t, tf in counts.items():
            postings[vocab[t]].append((doc_idx, tf))

    indptr = np.zeros(len(vocab_terms) + 1, dtype=np.int64)
    for tid, plist in enumerate(postings):
        indptr[tid + 1] = indptr[tid] + len(plist)
    nnz = int(indptr[-1])
    post_docs = np.zeros(nnz, dtype=np.int32)
    post_tfs = np.zeros(nnz, dtype=np.float64)
    pos = 0
    for plist in postings:
        for doc_idx, tf in plist:  # already in ascending doc order
            post_docs[pos] = doc_idx
            post_tfs[pos] = float(tf)
            pos += 1
    doc_len = np.array([len(toks) for toks in doc_tokens], dtype=np.int64)
    return InvertedIndex(sent_ids, vocab, indptr, post_docs, post_tfs, doc_len)


def bm25_score(index: InvertedIndex, query_tokens: list[str], sent_id: str) -> float:
    """BM25 score of one indexed sentence against a token list."""
    if sent_id not in index.sent_pos:
        raise DataError(f"unknown sent_id: {sent_id!r}")
    scores = index.score_all(query_tokens)
    return float(scores[index.sent_pos[sent_id]])


def save_index(index: InvertedIndex, path: Union[str, Path]) -> None:
    """Persist as JSON Lines: header, one doc record, one record per token."""
    header = {"format": INDEX_FORMAT, "version": INDEX_VERSION,
              "k1": index.k1, "b": index.b, "n": index.N}
    terms = sorted(index.vocab, key=index.vocab.get)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, ensure_ascii=False) + "\n")
        fh.write(json.dumps({"sent_ids": index.sent_ids,
                             "doc_len": index.doc_len.tolist()},
                            ensure_ascii=False) + "\n")
        for tid, term in enumerate(terms):
            s, e = int(index.indptr[tid]), int(index.indptr[tid + 1])
            fh.write(json.dumps(
                {"token": term,
                 "postings": [[int(index.post_docs[j]), int(index.post_tfs[j])]
                              for j in range(s, e)]},
                ensure_ascii=False) + "\n")


def load_index(path: Union[str, Path]) -> InvertedIndex:
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("format") != INDEX_FORMAT:
            raise DataError(f"{path}: not a {INDEX_FORMAT} file")
        if header.get("version") != INDEX_VERSION:
            raise DataError(f"{path}: unsupported index version {header.get('version')!r}")
        body = json.loads(fh.readline())
        sent_ids = [str(s) for s in body["sent_ids"]]
        doc_len = np.array(body["doc_len"], dtype=np.int64)
        terms: list[str] = []
        plists: list[list[list[int]]] = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            terms.append(rec["token"])
            plists.append(rec["postings"])
    vocab = {t: i for i, t in enumerate(terms)}
    indptr = np.zeros(len(terms) + 1, dtype=np.int64)
    for tid, plist in enumerate(plists):
        indptr[tid + 1] = indptr[tid] + len(plist)
    nnz = int(indptr[-1])
    post_docs = np.zeros(nnz, dtype=np.int32)
    post_tfs = np.zeros(nnz, dtype=np.float64)
    pos = 0
    for plist in plists:
        for doc_idx, tf in plist:
            post_docs[pos] = doc_idx
            post_tfs[pos] = float(tf)
            pos += 1
    return InvertedIndex(sent_ids, vocab, indptr, post_docs, post_tfs, doc_len,
                         k1=float(header["k1"]), b=float(header["b"]))
