"""Query the sentence index by full context sentence and enforce the
retrieval constraints: the hit must contain the answer entity, come from
outside the query's context, stay under the near-duplicate F1 cap, and
optionally share an additional entity with the query and/or its context.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from qasynth.corpus import Corpus, Entity
from qasynth.errors import DataError
from qasynth.index import InvertedIndex
from qasynth.metrics import token_f1, tokenize

DEFAULT_F1_CAP = 0.95
DEFAULT_TOP_K = 100


class MatchingMode(enum.Enum):
    """Auxiliary entity-matching requirement applied to retrieved sentences."""

    NONE = "none"
    QUERY = "query"
    CONTEXT = "context"
    QUERY_AND_CONTEXT = "both"


@dataclass
class RetrievalCandidate:
    sent_id: str
    score: float
    contains_answer: bool
    outside_context: bool
    below_f1_cap: bool
    aux_match_ok: bool

    @property
    def accepted(self) -> bool:
        return (self.contains_answer and self.outside_context
                and self.below_f1_cap and self.aux_match_ok)


def _shares_additional_entity(cand_entities: list[Entity],
                              pool: list[Entity], answer: Entity) -> bool:
    """True if some non-answer entity matches between candidate and pool."""
    ans = answer.surface.lower()
    for ce in cand_entities:
        if ce.surface.lower() == ans:
            continue
        for pe in pool:
            if pe.surface.lower() == ans:
                continue
            if ce.matches(pe):
                return True
    return False


def evaluate_candidate(corpus: Corpus, cand_id: str, score: float,
                       query_id: str, answer: Entity, mode: MatchingMode,
                       f1_cap: float) -> RetrievalCandidate:
    """Compute all four constraint flags for one scored index hit."""
    query = corpus.get_sentence(query_id)
    cand = corpus.get_sentence(cand_id)

    contains_answer = any(e.matches(answer) for e in cand.entities)
    outside_context = (cand.doc_id, cand.para_index) != (query.doc_id, query.para_index)
    below_f1_cap = token_f1(cand.text, query.text) < f1_cap

    if mode is MatchingMode.NONE:
        aux = True
    else:
        need_query = mode in (MatchingMode.QUERY, MatchingMode.QUERY_AND_CONTEXT)
        need_context = mode in (MatchingMode.CONTEXT, MatchingMode.QUERY_AND_CONTEXT)
        aux = True
        if need_query:
            aux = _shares_additional_entity(cand.entities, query.entities, answer)
        if aux and need_context:
            context_pool: list[Entity] = []
            for sid in corpus.paragraph_sentence_ids(query.doc_id, query.para_index):
                context_pool.extend(corpus.sentences[sid].entities)
            aux = _shares_additional_entity(cand.entities, context_pool, answer)
    return RetrievalCandidate(cand_id, score, contains_answer, outside_context,
                              below_f1_cap, aux)


def retrieve(index: InvertedIndex, corpus: Corpus, query_sent_id: str,
             answer: Entity, mode: MatchingMode = MatchingMode.NONE,
             top_k: int = DEFAULT_TOP_K,
             f1_cap: float = DEFAULT_F1_CAP) -> RetrievalCandidate | None:
    """Best accepted candidate for a (query sentence, answer entity) pair.

    Sentences are ranked by BM25 on the full query sentence text
    (descending, ties by ascending sent_id); the top_k pool is filtered by
    the four constraint flags and the highest-ranked survivor is returned,
    or None when nothing survives.
    """
    query = corpus.get_sentence(query_sent_id)
    if not any(e == answer for e in query.entities):
        raise DataError(
            f"answer {answer.surface!r} is not an entity of {query_sent_id!r}"
        )
    for sent_id, score in index.ranked(tokenize(query.text), top_k):
        cand = evaluate_candidate(corpus, sent_id, score, query_sent_id,
                                  answer, mode, f1_cap)
        if cand.accepted:
            return cand
    return None
