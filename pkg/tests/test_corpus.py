import io
import json

import pytest

from qasynth.corpus import (Corpus, Document, ingest_documents,
                            load_sentence_store, save_sentence_store,
                            split_sentences)
from qasynth.errors import DataError


def test_split_terminal_punctuation():
    assert split_sentences("A cat sat. It purred.") == [
        ("A cat sat.", 0), ("It purred.", 11)]


def test_split_no_terminal():
    assert split_sentences("No terminal punctuation") == [
        ("No terminal punctuation", 0)]


def test_split_abbreviation_blocklist():
    # frozen expected output for the abbreviation-aware rule set
    assert split_sentences("He got a Ph.D. in 1990. Then he left.") == [
        ("He got a Ph.D. in 1990.", 0), ("Then he left.", 24)]


def test_split_single_capital_initial():
    assert split_sentences("J. Smith arrived. He sat down.") == [
        ("J. Smith arrived.", 0), ("He sat down.", 18)]


def test_split_offsets_reconstruct(mini_corpus):
    # offset exactness over the whole fixture corpus
    for doc in mini_corpus.documents.values():
        for i, para in enumerate(doc.paragraphs):
            for text, start in split_sentences(para):
                assert para[start:start + len(text)] == text
                assert text == text.strip()
                assert text


def test_ingest_basic():
    corpus = ingest_documents([
        {"doc_id": "d1", "title": "T", "paragraphs": ["One. Two.", "Three."]},
    ])
    assert len(corpus.documents) == 1
    assert len(corpus) == 3
    ctx, doc_id, para = corpus.get_context("d1:0:1")
    assert (ctx, doc_id, para) == ("One. Two.", "d1", 0)


def test_ingest_empty_stream():
    assert len(ingest_documents([])) == 0


def test_ingest_duplicate_doc_id():
    with pytest.raises(DataError, match="d1"):
        ingest_documents([
            {"doc_id": "d1", "paragraphs": ["A."]},
            {"doc_id": "d1", "paragraphs": ["B."]},
        ])


def test_ingest_malformed_record_names_line():
    bad = io.StringIO('{"doc_id": "d1", "paragraphs": ["ok."]}\nnot json\n')
    with pytest.raises(DataError, match="line 2"):
        ingest_documents(bad)


def test_ingest_idempotent_ids():
    recs = [{"doc_id": "d1", "paragraphs": ["One. Two."]}]
    a = ingest_documents(recs)
    b = ingest_documents(recs)
    assert a.sentence_order == b.sentence_order
    assert [a.sentences[s].text for s in a.sentence_order] == \
           [b.sentences[s].text for s in b.sentence_order]


def test_get_context_shared_and_unknown():
    corpus = ingest_documents([{"doc_id": "d", "paragraphs": ["A cat. A dog."]}])
    assert corpus.get_context("d:0:0") == corpus.get_context("d:0:1")
    with pytest.raises(DataError):
        corpus.get_context("nope")


def test_store_round_trip(tmp_path, mini_corpus):
    path = tmp_path / "store.jsonl"
    save_sentence_store(mini_corpus, path)
    loaded = load_sentence_store(path)
    assert loaded.sentence_order == mini_corpus.sentence_order
    for sid in loaded.sentence_order:
        a, b = loaded.sentences[sid], mini_corpus.sentences[sid]
        assert (a.text, a.para_char_start, a.doc_id, a.para_index) == \
               (b.text, b.para_char_start, b.doc_id, b.para_index)


def test_store_header_declares_offset_unit(tmp_path):
    corpus = ingest_documents([{"doc_id": "d", "paragraphs": ["Hi there."]}])
    path = tmp_path / "s.jsonl"
    save_sentence_store(corpus, path)
    header = json.loads(path.read_text().splitlines()[0])
    assert header["offset_unit"] == "unicode_scalar_values"


def test_store_write_deterministic(tmp_path, mini_corpus):
    p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    save_sentence_store(mini_corpus, p1)
    save_sentence_store(mini_corpus, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_reconstructed_context_preserves_offsets(tmp_path):
    corpus = ingest_documents([
        {"doc_id": "d", "paragraphs": ["Alice ran. Bob sat. Carol left."]}])
    path = tmp_path / "s.jsonl"
    save_sentence_store(corpus, path)
    loaded = load_sentence_store(path)
    ctx, _, _ = loaded.get_context("d:0:1")
    sent = loaded.sentences["d:0:1"]
    assert ctx[sent.para_char_start:sent.para_char_start + len(sent.text)] == sent.text
