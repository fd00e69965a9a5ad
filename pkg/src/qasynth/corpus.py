"""Corpus ingestion: documents, offset-exact sentence splitting, sentence store IO.

Offsets are counted in Unicode scalar values (Python string indices), and
the sentence store declares that in its header line.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Union

from qasynth.errors import DataError

STORE_FORMAT = "qasynth-sentence-store"
STORE_VERSION = 1
OFFSET_UNIT = "unicode_scalar_values"


@dataclass(frozen=True)
class Entity:
    """A named-entity mention, with a sentence-relative character span."""

    surface: str
    char_start: int
    char_end: int  # exclusive
    label: str

    def matches(self, other: "Entity") -> bool:
        """Entity identity used throughout: case-insensitive surface + same label."""
        return (
            self.surface.lower() == other.surface.lower()
            and self.label == other.label
        )


@dataclass
class AnnotatedSentence:
    sent_id: str
    doc_id: str
    para_index: int
    text: str
    para_char_start: int  # offset of the sentence start within its paragraph
    entities: list[Entity] = field(default_factory=list)


@dataclass
class Document:
    doc_id: str
    title: str
    paragraphs: list[str]


_TERMINALS = ".?!"

# Tokens (ending in ".") after which we never split, plus lone capitals like "J.".
ABBREVIATIONS = {
    "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Ph.D.", "M.D.", "B.A.", "M.A.",
    "e.g.", "i.e.", "etc.", "cf.", "vs.", "Jr.", "Sr.", "St.", "No.", "Inc.",
    "Co.", "Corp.", "Ltd.", "Fig.", "al.",
}
_SINGLE_CAP_RE = re.compile(r"^[A-Z]\.$")


def split_sentences(paragraph: str) -> list[tuple[str, int]]:
    """Split a paragraph into (sentence_text, para_char_start) pairs.

    Rule: split after [.?!] followed by whitespace and then an uppercase
    letter or digit, unless the token ending at the period is a known
    abbreviation. Offsets satisfy paragraph[start:start+len(text)] == text.
    """
    n = len(paragraph)
    breaks: list[int] = []
    for i, ch in enumerate(paragraph):
        if ch not in _TERMINALS:
            continue
        j = i + 1
        if j >= n or not paragraph[j].isspace():
            continue
        k = j
        while k < n and paragraph[k].isspace():
            k += 1
        if k >= n or not (paragraph[k].isupper() or paragraph[k].isdigit()):
            continue
        if ch == ".":
            w = i
            while w > 0 and not paragraph[w - 1].isspace():
                w -= 1
            word = paragraph[w : i + 1]
            if word in ABBREVIATIONS or _SINGLE_CAP_RE.match(word):
                continue
        breaks.append(i + 1)

    out: list[tuple[str, int]] = []
    seg_start = 0
    for boundary in breaks + [n]:
        s, e = seg_start, boundary
        while s < e and paragraph[s].isspace():
            s += 1
        while e > s and paragraph[e - 1].isspace():
            e -= 1
        if e > s:
            out.append((paragraph[s:e], s))
        seg_start = boundary
    return out


class Corpus:
    """Immutable-after-ingest collection of documents and their sentences."""

    def __init__(self) -> None:
        self.documents: dict[str, Document] = {}
        self.sentences: dict[str, AnnotatedSentence] = {}
        self.sentence_order: list[str] = []
        # (doc_id, para_index) -> list of sent_ids, in paragraph order
        self._para_sentences: dict[tuple[str, int], list[str]] = {}

    def add_document(self, doc: Document) -> None:
        if doc.doc_id in self.documents:
            raise DataError(f"duplicate doc_id: {doc.doc_id!r}")
        self.documents[doc.doc_id] = doc
        for para_index, paragraph in enumerate(doc.paragraphs):
            key = (doc.doc_id, para_index)
            self._para_sentences[key] = []
            for k, (text, start) in enumerate(split_sentences(paragraph)):
                sent_id = f"{doc.doc_id}:{para_index}:{k}"
                sent = AnnotatedSentence(sent_id, doc.doc_id, para_index, text, start)
                self.sentences[sent_id] = sent
                self.sentence_order.append(sent_id)
                self._para_sentences[key].append(sent_id)

    def get_sentence(self, sent_id: str) -> AnnotatedSentence:
        try:
            return self.sentences[sent_id]
        except KeyError:
            raise DataError(f"unknown sent_id: {sent_id!r}") from None

    def get_context(self, sent_id: str) -> tuple[str, str, int]:
        """Return (paragraph_text, doc_id, para_index) for a sentence."""
        sent = self.get_sentence(sent_id)
        doc = self.documents.get(sent.doc_id)
        if doc is not None and sent.para_index < len(doc.paragraphs):
            return doc.paragraphs[sent.para_index], sent.doc_id, sent.para_index
        # Corpus loaded from a bare sentence store: rebuild the paragraph
        # from its sentences, padding inter-sentence gaps with spaces.
        sids = self._para_sentences[(sent.doc_id, sent.para_index)]
        parts = [(self.sentences[s].para_char_start, self.sentences[s].text) for s in sids]
        end = max(start + len(text) for start, text in parts)
        buf = [" "] * end
        for start, text in parts:
            buf[start : start + len(text)] = text
        return "".join(buf), sent.doc_id, sent.para_index

    def paragraph_sentence_ids(self, doc_id: str, para_index: int) -> list[str]:
        return self._para_sentences.get((doc_id, para_index), [])

    def __len__(self) -> int:
        return len(self.sentence_order)


def _iter_jsonl(stream: IO[str]) -> Iterator[tuple[int, dict]]:
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {lineno}: invalid JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise DataError(f"line {lineno}: expected an object")
        yield lineno, obj


def ingest_documents(source: Union[str, Path, IO[str], Iterable[dict]],
                     fmt: str = "jsonl") -> Corpus:
    """Build a corpus from a document stream.

    Only the "jsonl" format is supported: one object per line with keys
    doc_id, title, paragraphs. Re-ingesting identical input yields
    identical sentence ids.
    """
    if fmt != "jsonl":
        raise DataError(f"unknown corpus format: {fmt!r}")
    corpus = Corpus()

    def _add(record: dict, where: str) -> None:
        for key in ("doc_id", "paragraphs"):
            if key not in record:
                raise DataError(f"{where}: missing field {key!r}")
        paragraphs = record["paragraphs"]
        if not isinstance(paragraphs, list) or not all(
            isinstance(p, str) and p for p in paragraphs
        ):
            raise DataError(f"{where}: paragraphs must be non-empty strings")
        corpus.add_document(
            Document(str(record["doc_id"]), str(record.get("title", "")), paragraphs)
        )

    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            for lineno, obj in _iter_jsonl(fh):
                _add(obj, f"line {lineno}")
    elif hasattr(source, "read"):
        for lineno, obj in _iter_jsonl(source):  # type: ignore[arg-type]
            _add(obj, f"line {lineno}")
    else:
        for recno, obj in enumerate(source, start=1):  # type: ignore[arg-type]
            _add(obj, f"record {recno}")
    return corpus


def _entity_to_dict(e: Entity) -> dict:
    return {"surface": e.surface, "start": e.char_start, "end": e.char_end,
            "label": e.label}


def save_sentence_store(corpus: Corpus, path: Union[str, Path],
                        include_entities: bool = False) -> None:
    """Write the JSON Lines sentence store (header line first)."""
    header = {"format": STORE_FORMAT, "version": STORE_VERSION,
              "offset_unit": OFFSET_UNIT}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, ensure_ascii=False) + "\n")
        for sent_id in corpus.sentence_order:
            sent = corpus.sentences[sent_id]
            rec = {
                "sent_id": sent.sent_id,
                "doc_id": sent.doc_id,
                "para_index": sent.para_index,
                "para_char_start": sent.para_char_start,
                "text": sent.text,
            }
            if include_entities:
                rec["entities"] = [_entity_to_dict(e) for e in sent.entities]
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def load_sentence_store(path: Union[str, Path]) -> Corpus:
    """Load a sentence store written by save_sentence_store.

    Accepts stores with or without inline entity annotations. Paragraph
    text is reconstructed on demand from sentence offsets.
    """
    corpus = Corpus()
    with open(path, encoding="utf-8") as fh:
        for lineno, obj in _iter_jsonl(fh):
            if "sent_id" not in obj:
                if obj.get("format") == STORE_FORMAT:
                    continue  # header
                raise DataError(f"line {lineno}: missing sent_id")
            sent = AnnotatedSentence(
                sent_id=str(obj["sent_id"]),
                doc_id=str(obj["doc_id"]),
                para_index=int(obj["para_index"]),
                text=str(obj["text"]),
                para_char_start=int(obj["para_char_start"]),
            )
            for ent in obj.get("entities", []):
                entity = Entity(ent["surface"], int(ent["start"]), int(ent["end"]),
                                str(ent["label"]))
                if sent.text[entity.char_start:entity.char_end] != entity.surface:
                    raise DataError(
                        f"line {lineno}: entity surface/span mismatch in "
                        f"{sent.sent_id!r} at [{entity.char_start},{entity.char_end})"
                    )
                sent.entities.append(entity)
            if sent.sent_id in corpus.sentences:
                raise DataError(f"line {lineno}: duplicate sent_id {sent.sent_id!r}")
            corpus.sentences[sent.sent_id] = sent
            corpus.sentence_order.append(sent.sent_id)
            corpus._para_sentences.setdefault(
                (sent.doc_id, sent.para_index), []
            ).append(sent.sent_id)
    return corpus
