"""Read a sentence store, run NER, and write the annotation interchange
file. Every emitted span is validated against the store text first;
mismatching spans are dropped with a warning and counted in the summary.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

logger = logging.getLogger("nerbridge")

ANNOTATION_FORMAT = "qasynth-annotations"
STORE_FORMAT = "qasynth-sentence-store"


@dataclass
class ExportSummary:
    sentences: int
    entities: int
    warnings: int


def read_store(path: Union[str, Path]) -> list[tuple[str, str]]:
    """(sent_id, text) pairs in file order; tolerates the store header."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "sent_id" not in obj:
                if obj.get("format") == STORE_FORMAT:
                    continue
                raise ValueError(f"line {lineno}: missing sent_id")
            out.append((str(obj["sent_id"]), str(obj["text"])))
    return out


def export_annotations(store_path: Union[str, Path], out_path: Union[str, Path],
                       model, model_name: str,
                       batch_size: int = 64) -> ExportSummary:
    sentences = read_store(store_path)
    n_entities = 0
    warnings = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format": ANNOTATION_FORMAT, "version": 1,
                             "model": model_name,
                             "offset_unit": "unicode_scalar_values"},
                            ensure_ascii=False) + "\n")
        for batch_start in range(0, len(sentences), batch_size):
            batch = sentences[batch_start:batch_start + batch_size]
            annotated = model.annotate([text for _, text in batch])
            for (sent_id, text), ents in zip(batch, annotated):
                records = []
                for surface, start, end, label in ents:
                    if not (0 <= start < end <= len(text)) or \
                            text[start:end] != surface:
                        warnings += 1
                        logger.warning(
                            "%s: dropped span [%d,%d) %r (does not slice text)",
                            sent_id, start, end, surface)
                        continue
                    records.append({"surface": surface, "start": start,
                                    "end": end, "label": label})
                n_entities += len(records)
                fh.write(json.dumps({"sent_id": sent_id, "entities": records},
                                    ensure_ascii=False) + "\n")
    return ExportSummary(len(sentences), n_entities, warnings)
