"""NER model adapters.

A model is anything with annotate(texts) -> list of per-sentence entity
tuples (surface, start, end, label), offsets in Unicode scalar values.
"spaCy" models are loaded by name; the "rules" model is a dependency-free
fallback for offline use and tests.
"""

from __future__ import annotations

import re


class ModelError(Exception):
    pass


class RuleModel:
    """Small deterministic rule NER: capitalized spans, years, numbers."""

    _PROPER = re.compile(r"\b[A-Z][a-z]+(?: [A-Z][a-z]+)*\b")
    _YEAR = re.compile(r"\b[12]\d{3}\b")
    _NUMBER = re.compile(r"\b\d+\b")

    def annotate(self, texts: list[str]) -> list[list[tuple[str, int, int, str]]]:
        out = []
        for text in texts:
            ents: list[tuple[str, int, int, str]] = []
            taken: list[tuple[int, int]] = []

            def claim(start: int, end: int) -> bool:
                if any(start < e and s < end for s, e in taken):
                    return False
                taken.append((start, end))
                return True

            for m in self._PROPER.finditer(text):
                # skip a lone sentence-initial capitalized word; it is
                # usually just the start of the sentence, not a name
                if m.start() == 0 and " " not in m.group():
                    continue
                label = "PERSON" if " " in m.group() else "GPE"
                if claim(m.start(), m.end()):
                    ents.append((m.group(), m.start(), m.end(), label))
            for m in self._YEAR.finditer(text):
                if claim(m.start(), m.end()):
                    ents.append((m.group(), m.start(), m.end(), "DATE"))
            for m in self._NUMBER.finditer(text):
                if claim(m.start(), m.end()):
                    ents.append((m.group(), m.start(), m.end(), "CARDINAL"))
            ents.sort(key=lambda e: e[1])
            out.append(ents)
        return out


class SpacyModel:
    """Adapter for a spaCy pipeline; offsets come out as code points already."""

    def __init__(self, name: str, batch_size: int = 64) -> None:
        try:
            import spacy
        except ImportError as exc:
            raise ModelError("spaCy is not installed; use --model rules or "
                             "install the 'spacy' extra") from exc
        try:
            self.nlp = spacy.load(name)
        except OSError as exc:
            raise ModelError(f"could not load spaCy model {name!r}: {exc}") from exc
        self.batch_size = batch_size

    def annotate(self, texts: list[str]) -> list[list[tuple[str, int, int, str]]]:
        out = []
        for doc in self.nlp.pipe(texts, batch_size=self.batch_size):
            out.append([(ent.text, ent.start_char, ent.end_char, ent.label_)
                        for ent in doc.ents])
        return out


def load_model(name: str, batch_size: int = 64):
    if name == "rules":
        return RuleModel()
    return SpacyModel(name, batch_size)
