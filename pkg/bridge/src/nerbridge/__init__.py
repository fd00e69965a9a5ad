"""ner-bridge: batch-export named-entity annotations for a qasynth
sentence store, producing the JSON Lines annotation interchange format.
"""

from nerbridge import cli, exporter, models

__version__ = "0.1.0"

__all__ = ["cli", "exporter", "models", "__version__"]
