"""Turn a (sentence, answer entity) pair into a question string.

A sentence decomposes as [fragment A] [answer] [fragment B]; the variants
rearrange those parts around a wh-component, a "[MASK]" token, or nothing.
Wh bi-grams are sampled from a per-entity-label prior table with
cumulative-probability inversion over a caller-supplied generator.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Union

from qasynth.corpus import Entity
from qasynth.errors import DataError

FALLBACK_LABEL = "*"


class TemplateVariant(enum.Enum):
    CLOZE = "cloze"
    A_WH_B = "a-wh-b"
    WH_A_B = "wh-a-b"
    WH_B_A = "wh-b-a"
    B_A_NO_WH = "b-a-no-wh"
    WH_B_A_NO_QMARK = "wh-b-a-no-qmark"
    WH_SIMPLE_B_A = "wh-simple"
    WHAT_B_A = "what"


# Coarse 5-way grouping of entity labels to a single wh word.
WH_SIMPLE_MAP = {
    "PERSON": "who", "NORP": "who", "ORG": "who",
    "GPE": "where", "LOC": "where", "FAC": "where",
    "DATE": "when", "TIME": "when",
    "CARDINAL": "how many", "ORDINAL": "how many", "QUANTITY": "how many",
    "MONEY": "how many", "PERCENT": "how many",
}
WH_SIMPLE_DEFAULT = "what"

_TERMINALS = ".?!"


@dataclass(frozen=True)
class TemplateParts:
    fragment_a: str
    answer_surface: str
    fragment_b: str


def split_fragments(sentence: str, answer: Entity) -> TemplateParts:
    """Decompose a sentence around the answer span.

    Fragments are whitespace-trimmed; a single trailing ./!/? is stripped
    from whichever side ends the sentence.
    """
    if not (0 <= answer.char_start < answer.char_end <= len(sentence)):
        raise DataError(
            f"answer span [{answer.char_start},{answer.char_end}) invalid for "
            f"sentence of length {len(sentence)}"
        )
    if sentence[answer.char_start:answer.char_end] != answer.surface:
        raise DataError(
            f"answer surface {answer.surface!r} does not match sentence slice"
        )
    frag_a = sentence[: answer.char_start].strip()
    frag_b = sentence[answer.char_end :].strip()
    if frag_b:
        if frag_b[-1] in _TERMINALS:
            frag_b = frag_b[:-1].rstrip()
    elif frag_a and frag_a[-1] in _TERMINALS:
        # answer sits at the sentence end; terminal punctuation belongs to A
        frag_a = frag_a[:-1].rstrip()
    return TemplateParts(frag_a, answer.surface, frag_b)


def _join(parts: list[str]) -> str:
    return " ".join(p for p in parts if p)


def make_cloze(parts: TemplateParts) -> str:
    """A + " [MASK] " + B, terminal punctuation restored as "."."""
    return _join([parts.fragment_a, "[MASK]", parts.fragment_b]) + "."


class WhPriorTable:
    """Per-label categorical priors over wh bi-grams."""

    def __init__(self, table: dict[str, list[tuple[str, float]]]) -> None:
        for label, entries in table.items():
            if not entries:
                continue
            total = sum(p for _, p in entries)
            if any(p < 0 for _, p in entries):
                raise DataError(f"label {label!r}: negative probability")
            if abs(total - 1.0) > 1e-9:
                raise DataError(f"label {label!r}: probabilities sum to {total}, not 1")
            for bigram, _ in entries:
                if len(bigram.split()) != 2:
                    raise DataError(f"label {label!r}: {bigram!r} is not a bi-gram")
        self.table = table

    def entries_for(self, label: str) -> list[tuple[str, float]]:
        entries = self.table.get(label) or self.table.get(FALLBACK_LABEL)
        if not entries:
            raise DataError(f"no wh prior for label {label!r} and no fallback")
        return entries

    def sample(self, label: str, rng: random.Random) -> str:
        """Cumulative-probability inversion over the label's prior."""
        entries = self.entries_for(label)
        u = rng.random()
        acc = 0.0
        for bigram, p in entries:
            acc += p
            if u < acc:
                return bigram
        return entries[-1][0]  # guard against accumulated rounding

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "WhPriorTable":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls({label: [(str(b), float(p)) for b, p in entries]
                    for label, entries in raw.items()})

    @classmethod
    def default(cls) -> "WhPriorTable":
        raw = json.loads(
            resources.files("qasynth.data").joinpath("wh_priors.json").read_text("utf-8")
        )
        return cls({label: [(str(b), float(p)) for b, p in entries]
                    for label, entries in raw.items()})


def choose_wh(label: str, variant: TemplateVariant, prior: WhPriorTable,
              rng: random.Random) -> str:
    """Pick the wh-component for an answer label under the given variant."""
    if variant is TemplateVariant.WHAT_B_A:
        return "what"
    if variant is TemplateVariant.WH_SIMPLE_B_A:
        return WH_SIMPLE_MAP.get(label, WH_SIMPLE_DEFAULT)
    return prior.sample(label, rng)


def make_wh_question(parts: TemplateParts, variant: TemplateVariant,
                     wh: str) -> str:
    """Assemble the question string for any non-cloze variant."""
    a, b = parts.fragment_a, parts.fragment_b
    if variant is TemplateVariant.A_WH_B:
        body, qmark = _join([a, wh, b]), True
    elif variant is TemplateVariant.WH_A_B:
        body, qmark = _join([wh, a, b]), True
    elif variant is TemplateVariant.B_A_NO_WH:
        body, qmark = _join([b, a]), True
    elif variant is TemplateVariant.WH_B_A_NO_QMARK:
        body, qmark = _join([wh, b, a]), False
    elif variant in (TemplateVariant.WH_B_A, TemplateVariant.WH_SIMPLE_B_A,
                     TemplateVariant.WHAT_B_A):
        body, qmark = _join([wh, b, a]), True
    else:
        raise DataError(f"variant {variant} is not a wh template")
    if qmark:
        body += "?"
    return body[:1].upper() + body[1:] if body else body


def make_question(parts: TemplateParts, variant: TemplateVariant, label: str,
                  prior: WhPriorTable, rng: random.Random) -> str:
    if variant is TemplateVariant.CLOZE:
        return make_cloze(parts)
    wh = choose_wh(label, variant, prior, rng)
    return make_wh_question(parts, variant, wh)
