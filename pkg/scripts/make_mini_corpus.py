#!/usr/bin/env python3
"""Regenerate the bundled mini-corpus fixture (tests/data/).

Roughly 500 sentences over a few dozen documents. Entity mentions are
reused across documents so that retrieval with auxiliary entity matching
has survivors. Deterministic for a fixed seed.
"""

import json
import random
from pathlib import Path

PERSONS = ["Alan Turing", "Ada Lovelace", "Grace Hopper", "Kurt Godel",
           "Emmy Noether", "John von Neumann", "Claude Shannon",
           "Barbara Liskov", "Edsger Dijkstra", "Donald Knuth"]
PLACES = ["London", "Paris", "Vienna", "Budapest", "Boston", "Zurich",
          "Princeton", "Cambridge", "Berlin", "Manchester"]
ORGS = ["Bletchley Park", "Bell Labs", "Harvard University", "ETH Zurich",
        "the Royal Society", "MIT", "IBM", "Cambridge University"]

TEMPLATES = [
    "{person} visited {place} in {year}.",
    "{person} joined {org} in {year}.",
    "In {year}, {person} lectured in {place}.",
    "{person} published {number} papers while working at {org}.",
    "{org} opened a laboratory in {place} in {year}.",
    "{person} met {person2} in {place}.",
    "The archive in {place} holds {number} letters from {person}.",
    "{person} left {place} for {org} in {year}.",
]


def main() -> None:
    rng = random.Random(20240501)
    # reuse a limited set of (person, place, year) triples across documents
    triples = [(rng.choice(PERSONS), rng.choice(PLACES), rng.randint(1890, 1990))
               for _ in range(60)]

    docs = []
    for d in range(52):
        paragraphs = []
        for _p in range(rng.randint(2, 4)):
            sents = []
            for _s in range(rng.randint(2, 4)):
                person, place, year = rng.choice(triples)
                sents.append(rng.choice(TEMPLATES).format(
                    person=person, place=place, year=year,
                    person2=rng.choice([p for p in PERSONS if p != person]),
                    org=rng.choice(ORGS), number=rng.randint(2, 400),
                ))
            paragraphs.append(" ".join(sents))
        docs.append({"doc_id": f"d{d:03d}", "title": f"Document {d}",
                     "paragraphs": paragraphs})

    out_dir = Path(__file__).resolve().parent.parent / "tests" / "data"
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "mini_corpus.jsonl", "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")
    gazetteer = {"PERSON": PERSONS, "GPE": PLACES, "ORG": ORGS}
    with open(out_dir / "gazetteer.json", "w", encoding="utf-8") as fh:
        json.dump(gazetteer, fh, ensure_ascii=False, indent=2)
    n_sents = sum(p.count(".") for d in docs for p in d["paragraphs"])
    print(f"wrote {len(docs)} documents, ~{n_sents} sentences")


if __name__ == "__main__":
    main()
