"""qasynth: synthesize extractive QA training data from a raw document corpus.

Pipeline: ingest documents -> annotate sentences with named entities ->
build a BM25 sentence index -> retrieve related sentences under entity
constraints -> rewrite them into questions with templates -> emit
SQuAD v1.1 JSON, plus EM/F1 evaluation utilities.
"""

from qasynth.errors import DataError, QasynthError

__version__ = "0.1.0"

__all__ = ["QasynthError", "DataError", "__version__"]
