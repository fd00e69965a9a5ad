"""End-to-end generation of (context, question, answer) examples and
SQuAD v1.1 file emission, with subsampling controls.

Every emitted example carries the extractive guarantee:
context[answer_start : answer_start + len(answer_text)] == answer_text.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from qasynth.corpus import Corpus, Entity
from qasynth.errors import DataError
from qasynth.index import InvertedIndex
from qasynth.retrieval import (DEFAULT_F1_CAP, DEFAULT_TOP_K, MatchingMode,
                               retrieve)
from qasynth.templates import (TemplateParts, TemplateVariant, WhPriorTable,
                               make_question, split_fragments)

logger = logging.getLogger("qasynth.dataset")

DEFAULT_TARGET_SIZE = 50_000
DEFAULT_VALIDATION_SIZE = 1_000


@dataclass(frozen=True)
class QAExample:
    qid: str
    context: str
    question: str
    answer_text: str
    answer_start: int

    def check(self) -> None:
        if not self.question:
            raise DataError(f"{self.qid}: empty question")
        got = self.context[self.answer_start : self.answer_start + len(self.answer_text)]
        if got != self.answer_text:
            raise DataError(
                f"{self.qid}: answer {self.answer_text!r} not at context offset "
                f"{self.answer_start} (found {got!r})"
            )


@dataclass
class GenerationConfig:
    variant: TemplateVariant = TemplateVariant.WH_B_A
    mode: MatchingMode = MatchingMode.QUERY_AND_CONTEXT
    use_retrieved: bool = True
    target_size: int = DEFAULT_TARGET_SIZE
    validation_size: int = DEFAULT_VALIDATION_SIZE
    seed: int = 0
    f1_cap: float = DEFAULT_F1_CAP
    top_k: int = DEFAULT_TOP_K

    def validate(self) -> None:
        if self.target_size < 0:
            raise DataError("target_size must be >= 0")
        if not (0.0 < self.f1_cap <= 1.0):
            raise DataError("f1_cap must be in (0, 1]")
        if self.validation_size < 0 or self.validation_size > self.target_size:
            raise DataError("validation_size must fit within the target_size budget")


def _qid(sent, answer: Entity, variant: TemplateVariant) -> str:
    key = (f"{sent.doc_id}|{sent.para_index}|{sent.sent_id}|"
           f"{answer.char_start}|{answer.char_end}|{variant.value}")
    return hashlib.sha1(key.encode("utf-8")).hexdigest()[:16]


def _pair_rng(seed: int, ordinal: int) -> random.Random:
    # per-example generator so parallel workers reproduce the serial run
    return random.Random(f"{seed}:{ordinal}")


def _generate_one(corpus: Corpus, index: InvertedIndex, config: GenerationConfig,
                  priors: WhPriorTable, ordinal: int, sent_id: str,
                  entity_idx: int) -> QAExample | None:
    sent = corpus.sentences[sent_id]
    answer = sent.entities[entity_idx]

    if config.use_retrieved:
        hit = retrieve(index, corpus, sent_id, answer, config.mode,
                       top_k=config.top_k, f1_cap=config.f1_cap)
        if hit is None:
            return None
        source = corpus.sentences[hit.sent_id]
        split_at = next(e for e in source.entities if e.matches(answer))
        parts = split_fragments(source.text, split_at)
    else:
        parts = split_fragments(sent.text, answer)

    question = make_question(parts, config.variant, answer.label, priors,
                             _pair_rng(config.seed, ordinal))
    context, _, _ = corpus.get_context(sent_id)
    example = QAExample(
        qid=_qid(sent, answer, config.variant),
        context=context,
        question=question,
        answer_text=answer.surface,
        answer_start=sent.para_char_start + answer.char_start,
    )
    example.check()
    return example


_WORKER: dict = {}


def _init_worker(corpus: Corpus, index: InvertedIndex, config: GenerationConfig,
                 priors: WhPriorTable) -> None:
    _WORKER["args"] = (corpus, index, config, priors)


def _run_pair(task: tuple[int, str, int]) -> QAExample | None:
    corpus, index, config, priors = _WORKER["args"]
    return _generate_one(corpus, index, config, priors, *task)


def generate_dataset(corpus: Corpus, index: InvertedIndex,
                     config: GenerationConfig,
                     priors: WhPriorTable | None = None,
                     jobs: int = 1) -> list[QAExample]:
    """Generate examples for every (sentence, entity) pair in corpus order.

    Pairs whose retrieval yields no surviving candidate are skipped and do
    not consume the target_size budget. Output is deterministic for a fixed
    (corpus, config) and independent of the worker count.
    """
    config.validate()
    if priors is None:
        priors = WhPriorTable.default()
    if set(index.sent_ids) != set(corpus.sentence_order):
        raise DataError("index does not match the corpus (sentence ids differ)")

    tasks = []
    ordinal = 0
    for sent_id in corpus.sentence_order:
        for entity_idx in range(len(corpus.sentences[sent_id].entities)):
            tasks.append((ordinal, sent_id, entity_idx))
            ordinal += 1

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(corpus, index, config, priors)) as pool:
            results = list(pool.map(_run_pair, tasks,
                                    chunksize=max(1, len(tasks) // (jobs * 4) or 1)))
    else:
        results = [_generate_one(corpus, index, config, priors, *t) for t in tasks]

    examples: list[QAExample] = []
    seen: set[tuple[str, str, int]] = set()
    skipped = 0
    for task, ex in zip(tasks, results):
        if len(examples) >= config.target_size:
            break
        if ex is None:
            skipped += 1
            logger.debug("skipped pair %s (no surviving retrieval)", task)
            continue
        key = (ex.context, ex.question, ex.answer_start)
        if key in seen:
            continue
        seen.add(key)
        examples.append(ex)
    if skipped:
        logger.info("skipped %d pairs with no surviving retrieval", skipped)
    return examples


def split_validation(examples: list[QAExample], validation_size: int,
                     seed: int) -> tuple[list[QAExample], list[QAExample]]:
    """Seeded-shuffle partition into (train, validation), both in input order."""
    if validation_size > len(examples):
        raise DataError(
            f"validation_size {validation_size} exceeds {len(examples)} examples"
        )
    order = list(range(len(examples)))
    random.Random(seed).shuffle(order)
    val_idx = set(order[:validation_size])
    train = [ex for i, ex in enumerate(examples) if i not in val_idx]
    val = [ex for i, ex in enumerate(examples) if i in val_idx]
    return train, val


def subsample_per_context(examples: list[QAExample], n: int,
                          seed: int) -> list[QAExample]:
    """Keep one random question per context, then at most n random contexts."""
    rng = random.Random(seed)
    groups: dict[str, list[QAExample]] = {}
    for ex in examples:
        groups.setdefault(ex.context, []).append(ex)
    contexts = list(groups)
    chosen = {ctx: rng.choice(groups[ctx]) for ctx in contexts}
    if n < len(contexts):
        keep = set(rng.sample(range(len(contexts)), n))
        contexts = [ctx for i, ctx in enumerate(contexts) if i in keep]
    return [chosen[ctx] for ctx in contexts]


def to_squad_dict(examples: list[QAExample], title: str) -> dict:
    """SQuAD v1.1 object; examples sharing a context share one paragraph."""
    for ex in examples:
        ex.check()
    paragraphs: dict[str, dict] = {}
    for ex in examples:
        para = paragraphs.setdefault(ex.context, {"context": ex.context, "qas": []})
        para["qas"].append({
            "id": ex.qid,
            "question": ex.question,
            "answers": [{"text": ex.answer_text, "answer_start": ex.answer_start}],
        })
    return {"version": "1.1",
            "data": [{"title": title, "paragraphs": list(paragraphs.values())}]}


def write_squad_json(examples: list[QAExample], title: str,
                     path: Union[str, Path]) -> None:
    """Validate, then write the SQuAD v1.1 JSON file (no partial output)."""
    payload = json.dumps(to_squad_dict(examples, title), ensure_ascii=False)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload)


def read_squad_json(path: Union[str, Path]) -> list[QAExample]:
    """Flatten a SQuAD v1.1 file back into QAExamples (first answer each)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    out: list[QAExample] = []
    for article in data["data"]:
        for para in article["paragraphs"]:
            for qa in para["qas"]:
                ans = qa["answers"][0]
                out.append(QAExample(qa["id"], para["context"], qa["question"],
                                     ans["text"], int(ans["answer_start"])))
    return out
