"""Attach named-entity annotations to corpus sentences.

Annotations arrive either via the JSON Lines interchange format (one
record per sentence: {"sent_id": ..., "entities": [...]}) or from the
built-in heuristic annotator, which exists so fixtures and tests do not
depend on an external NER model.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import IO, Iterable, Union

from qasynth.corpus import Corpus, Entity, _iter_jsonl
from qasynth.errors import DataError

ANNOTATION_FORMAT = "qasynth-annotations"

_MONTHS = ("January", "February", "March", "April", "May", "June", "July",
           "August", "September", "October", "November", "December")

# Rule priority breaks ties between candidates with equal span starts and
# lengths (e.g. a four-digit year is DATE, not CARDINAL).
_RULES = [
    ("DATE", re.compile(r"\b(?:%s) \d{1,2}, \d{4}\b" % "|".join(_MONTHS))),
    ("DATE", re.compile(r"\b[12]\d{3}\b")),
    ("MONEY", re.compile(r"[$£€¥]\d[\d,]*(?:\.\d+)?")),
    ("PERCENT", re.compile(r"\b\d+(?:\.\d+)?%")),
    ("CARDINAL", re.compile(r"\b\d+\b")),
]


def heuristic_annotate(text: str,
                       gazetteer: dict[str, list[str]] | None = None) -> list[Entity]:
    """Rule-based entity spotting: gazetteer exact match plus numeric regexes.

    gazetteer maps label -> list of surface phrases. Overlaps are resolved
    left-to-right, longest match first; output is sorted by char_start.
    """
    candidates: list[tuple[int, int, int, str, str]] = []  # start, -len, prio, label, surface
    if gazetteer:
        for label, phrases in gazetteer.items():
            for phrase in phrases:
                if not phrase:
                    continue
                pat = re.compile(r"(?<!\w)" + re.escape(phrase) + r"(?!\w)")
                for m in pat.finditer(text):
                    candidates.append((m.start(), -(m.end() - m.start()), 0,
                                       label, m.group()))
    for prio, (label, pat) in enumerate(_RULES, start=1):
        for m in pat.finditer(text):
            candidates.append((m.start(), -(m.end() - m.start()), prio,
                               label, m.group()))

    candidates.sort()
    accepted: list[Entity] = []
    taken: list[tuple[int, int]] = []
    for start, neg_len, _prio, label, surface in candidates:
        end = start - neg_len
        if any(start < e and s < end for s, e in taken):
            continue
        taken.append((start, end))
        accepted.append(Entity(surface, start, end, label))
    accepted.sort(key=lambda e: e.char_start)
    return accepted


def _validate_entity(sent_text: str, sent_id: str, ent: Entity) -> None:
    if not (0 <= ent.char_start < ent.char_end <= len(sent_text)):
        raise DataError(
            f"{sent_id}: entity span [{ent.char_start},{ent.char_end}) out of bounds"
        )
    if sent_text[ent.char_start:ent.char_end] != ent.surface:
        raise DataError(
            f"{sent_id}: entity surface {ent.surface!r} != text slice "
            f"{sent_text[ent.char_start:ent.char_end]!r} at "
            f"[{ent.char_start},{ent.char_end})"
        )


def load_annotations(corpus: Corpus,
                     source: Union[str, Path, IO[str], Iterable[dict]]) -> Corpus:
    """Attach interchange-format annotations to an ingested corpus, in place.

    Sentences absent from the stream keep an empty entity list. Records
    referencing unknown sentences or with span/surface mismatches are errors.
    """
    def _apply(obj: dict, where: str) -> None:
        if "sent_id" not in obj:
            if obj.get("format") == ANNOTATION_FORMAT:
                return  # header line
            raise DataError(f"{where}: missing sent_id")
        sent_id = str(obj["sent_id"])
        if sent_id not in corpus.sentences:
            raise DataError(f"{where}: unknown sent_id {sent_id!r}")
        sent = corpus.sentences[sent_id]
        entities = []
        for rec in obj.get("entities", []):
            ent = Entity(str(rec["surface"]), int(rec["start"]), int(rec["end"]),
                         str(rec["label"]))
            _validate_entity(sent.text, sent_id, ent)
            entities.append(ent)
        entities.sort(key=lambda e: e.char_start)
        sent.entities = entities

    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            for lineno, obj in _iter_jsonl(fh):
                _apply(obj, f"line {lineno}")
    elif hasattr(source, "read"):
        for lineno, obj in _iter_jsonl(source):  # type: ignore[arg-type]
            _apply(obj, f"line {lineno}")
    else:
        for recno, obj in enumerate(source, start=1):  # type: ignore[arg-type]
            _apply(obj, f"record {recno}")
    return corpus


def annotate_with_heuristics(corpus: Corpus,
                             gazetteer: dict[str, list[str]] | None = None) -> Corpus:
    """Run the heuristic annotator over every sentence, in place."""
    for sent_id in corpus.sentence_order:
        sent = corpus.sentences[sent_id]
        sent.entities = heuristic_annotate(sent.text, gazetteer)
    return corpus


def entities_of(corpus: Corpus, sent_id: str) -> list[Entity]:
    """Stored entities of a sentence, ordered by char_start."""
    return list(corpus.get_sentence(sent_id).entities)


def load_gazetteer(path: Union[str, Path]) -> dict[str, list[str]]:
    """Gazetteer file: JSON object {label: [phrase, ...]}."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise DataError("gazetteer must be a JSON object of label -> phrases")
    return {str(k): [str(p) for p in v] for k, v in data.items()}
