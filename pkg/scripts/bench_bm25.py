#!/usr/bin/env python3
"""Benchmark the compiled BM25 kernel against the pure-numpy fallback.

Builds a synthetic index, times full-corpus scoring for a batch of
queries with each backend, and checks the scores are bit-identical.
"""

import argparse
import random
import time

import numpy as np

from qasynth import _bm25
from qasynth.corpus import Corpus, AnnotatedSentence
from qasynth.index import build_index


def synth_corpus(n_docs: int, vocab_size: int, doc_len: int,
                 seed: int) -> Corpus:
    rng = random.Random(seed)
    words = [f"w{i}" for i in range(vocab_size)]
    corpus = Corpus()
    for i in range(n_docs):
        sid = f"s{i:06d}"
        text = " ".join(rng.choice(words) for _ in range(doc_len))
        corpus.sentences[sid] = AnnotatedSentence(sid, f"d{i}", 0, text, 0)
        corpus.sentence_order.append(sid)
        corpus._para_sentences[(f"d{i}", 0)] = [sid]
    return corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=50_000)
    parser.add_argument("--vocab", type=int, default=5_000)
    parser.add_argument("--doc-len", type=int, default=20)
    parser.add_argument("--queries", type=int, default=200)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    if not _bm25.HAVE_COMPILED:
        print("compiled kernel not available; benchmarking fallback only")

    corpus = synth_corpus(args.docs, args.vocab, args.doc_len, args.seed)
    index = build_index(corpus)
    rng = random.Random(args.seed + 1)
    queries = [
        [f"w{rng.randrange(args.vocab)}" for _ in range(args.doc_len)]
        for _ in range(args.queries)
    ]

    results = {}
    for name, force_pure in [("compiled", False), ("pure", True)]:
        if name == "compiled" and not _bm25.HAVE_COMPILED:
            continue
        t0 = time.perf_counter()
        scores = [index.score_all(q, force_pure=force_pure) for q in queries]
        elapsed = time.perf_counter() - t0
        results[name] = (elapsed, scores)
        print(f"{name:9s} {elapsed:8.3f}s  "
              f"({args.queries / elapsed:7.1f} queries/s)")

    if len(results) == 2:
        for a, b in zip(results["compiled"][1], results["pure"][1]):
            assert np.array_equal(a, b), "backends disagree"
        speedup = results["pure"][0] / results["compiled"][0]
        print(f"scores bit-identical; compiled speedup {speedup:.1f}x")


if __name__ == "__main__":
    main()
