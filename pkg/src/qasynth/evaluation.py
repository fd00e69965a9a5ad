"""Score prediction files against gold SQuAD v1.1 files (official EM/F1
semantics: per question, max over gold answers; macro-average x100), and
extract the named-entity-answer subset of a gold file.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Union

from qasynth.errors import DataError
from qasynth.metrics import exact_match, token_f1

logger = logging.getLogger("qasynth.evaluation")


def load_squad_file(path: Union[str, Path]) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from None
    if "data" not in data:
        raise DataError(f"{path}: not a SQuAD file (missing 'data')")
    return data


def load_predictions(path: Union[str, Path]) -> dict[str, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            preds = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(preds, dict):
        raise DataError(f"{path}: predictions must be a JSON object of qid -> answer")
    return {str(k): str(v) for k, v in preds.items()}


def evaluate(gold: dict, predictions: dict[str, str]) -> tuple[float, float, int]:
    """Return (EM%, F1%, n). Questions missing from predictions score 0."""
    em_total = 0.0
    f1_total = 0.0
    n = 0
    for article in gold["data"]:
        for para in article["paragraphs"]:
            for qa in para["qas"]:
                n += 1
                qid = qa["id"]
                golds = [a["text"] for a in qa["answers"]]
                if qid not in predictions:
                    logger.warning("no prediction for question %s; scored 0", qid)
                    continue
                pred = predictions[qid]
                em_total += max(exact_match(pred, g) for g in golds)
                f1_total += max(token_f1(pred, g) for g in golds)
    if n == 0:
        return 0.0, 0.0, 0
    return 100.0 * em_total / n, 100.0 * f1_total / n, n


def context_id(title: str, para_index: int) -> str:
    """Key used by the context-annotation file consumed by ner_subset."""
    return f"{title}#{para_index}"


def load_context_annotations(path: Union[str, Path]) -> dict[str, list[str]]:
    """JSON Lines: {"context_id": str, "entities": [{"surface": ...}, ...]}.

    Returns context_id -> list of entity surfaces.
    """
    out: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "context_id" not in obj:
                if "format" in obj:
                    continue  # header
                raise DataError(f"line {lineno}: missing context_id")
            out[str(obj["context_id"])] = [
                str(e["surface"]) for e in obj.get("entities", [])
            ]
    return out


def ner_subset(gold: dict, annotations: dict[str, list[str]]) -> dict:
    """Keep questions where some gold answer equals a context entity surface
    (case-insensitive). Output remains a valid SQuAD v1.1 object.
    """
    missing: list[str] = []
    articles = []
    for article in gold["data"]:
        title = article.get("title", "")
        paragraphs = []
        for para_index, para in enumerate(article["paragraphs"]):
            cid = context_id(title, para_index)
            if cid not in annotations:
                missing.append(cid)
                continue
            surfaces = {s.lower() for s in annotations[cid]}
            qas = [qa for qa in para["qas"]
                   if any(a["text"].lower() in surfaces for a in qa["answers"])]
            if qas:
                paragraphs.append({"context": para["context"], "qas": qas})
        if paragraphs:
            articles.append({"title": title, "paragraphs": paragraphs})
    if missing:
        raise DataError("missing annotations for contexts: " + ", ".join(missing))
    return {"version": gold.get("version", "1.1"), "data": articles}
