import json
import random
from pathlib import Path

import pytest

from qasynth.annotate import annotate_with_heuristics, load_gazetteer
from qasynth.corpus import Corpus, Document, ingest_documents
from qasynth.index import build_index

DATA_DIR = Path(__file__).parent / "data"

# ---------------------------------------------------------------------------
# bundled mini-corpus (~500 sentences), regenerate with scripts/make_mini_corpus.py


@pytest.fixture(scope="session")
def gazetteer() -> dict:
    return load_gazetteer(DATA_DIR / "gazetteer.json")


@pytest.fixture(scope="session")
def mini_corpus(gazetteer) -> Corpus:
    corpus = ingest_documents(DATA_DIR / "mini_corpus.jsonl")
    return annotate_with_heuristics(corpus, gazetteer)


@pytest.fixture(scope="session")
def mini_index(mini_corpus):
    return build_index(mini_corpus)


# ---------------------------------------------------------------------------
# randomized corpora for oracle-equivalence tests

_PERSONS = ["Alice Brown", "Bob Stone", "Carol White", "David Green",
            "Erin Black", "Frank Gold"]
_PLACES = ["Oslo", "Lima", "Kyoto", "Dakar", "Quito", "Malta"]
_ORGS = ["Acme Labs", "Orbit Corp", "Vega Institute"]
_FILLERS = ["studied", "visited", "described", "mentioned", "praised",
            "sketched", "measured", "recalled"]

RANDOM_GAZETTEER = {"PERSON": _PERSONS, "GPE": _PLACES, "ORG": _ORGS}


def make_random_corpus(seed: int, n_sentences: int) -> Corpus:
    """A random annotated corpus whose sentences reuse a small entity pool,
    so retrieval constraints have both survivors and rejections."""
    rng = random.Random(seed)
    templates = [
        "{p} {f} {place} in {year}.",
        "{p} met {p2} in {place}.",
        "{p} {f} {org} in {year}.",
        "{org} sent {number} reports to {place}.",
        "In {year}, {p} {f} {place}.",
    ]
    corpus = Corpus()
    produced = 0
    d = 0
    while produced < n_sentences:
        paragraphs = []
        for _ in range(rng.randint(1, 3)):
            sents = []
            for _ in range(rng.randint(1, 4)):
                if produced >= n_sentences:
                    break
                p = rng.choice(_PERSONS)
                sents.append(rng.choice(templates).format(
                    p=p, p2=rng.choice([x for x in _PERSONS if x != p]),
                    f=rng.choice(_FILLERS), place=rng.choice(_PLACES),
                    org=rng.choice(_ORGS), year=rng.randint(1900, 1999),
                    number=rng.randint(2, 99),
                ))
                produced += 1
            if sents:
                paragraphs.append(" ".join(sents))
        if paragraphs:
            corpus.add_document(Document(f"doc{d:03d}", f"Doc {d}", paragraphs))
            d += 1
    return annotate_with_heuristics(corpus, RANDOM_GAZETTEER)


# ---------------------------------------------------------------------------
# one pass/fail line per acceptance criterion in the terminal summary

_acceptance_results: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and report.when in ("call", "setup"):
        if report.when == "call" or report.skipped:
            _acceptance_results[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in sorted(_acceptance_results.items()):
        name = nodeid.split("::")[-1]
        status = {"passed": "PASS", "skipped": "SKIP"}.get(outcome, "FAIL")
        terminalreporter.write_line(f"{name}: {status}")
