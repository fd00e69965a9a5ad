"""SQuAD-style text normalization and token-level EM/F1.

These functions double as the near-duplicate filter for retrieval and as
the final evaluation metric, so everything downstream shares one notion
of "token".
"""

from __future__ import annotations

import re
import string
from collections import Counter

_ARTICLE_RE = re.compile(r"\b(a|an|the)\b")
_PUNCT = set(string.punctuation)


def normalize_text(s: str) -> str:
    """Lowercase, strip punctuation, drop articles, collapse whitespace."""
    s = s.lower()
    s = "".join(ch for ch in s if ch not in _PUNCT)
    s = _ARTICLE_RE.sub(" ", s)
    return " ".join(s.split())


def tokenize(s: str) -> list[str]:
    """Normalized whitespace tokens; the shared tokenization for indexing and F1."""
    return normalize_text(s).split()


def token_f1(a: str, b: str) -> float:
    """Multiset-overlap F1 between the normalized tokens of two strings.

    Both empty after normalization -> 1.0; exactly one empty -> 0.0.
    """
    ta = tokenize(a)
    tb = tokenize(b)
    if not ta and not tb:
        return 1.0
    if not ta or not tb:
        return 0.0
    common = Counter(ta) & Counter(tb)
    num_same = sum(common.values())
    if num_same == 0:
        return 0.0
    precision = num_same / len(ta)
    recall = num_same / len(tb)
    return 2 * precision * recall / (precision + recall)


def exact_match(pred: str, gold: str) -> int:
    """1 iff the normalized strings are equal."""
    return int(normalize_text(pred) == normalize_text(gold))
