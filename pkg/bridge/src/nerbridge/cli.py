import argparse
import logging
import sys

from nerbridge.exporter import export_annotations
from nerbridge.models import ModelError, load_model


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(message)s")
    parser = argparse.ArgumentParser(
        prog="ner-bridge",
        description="Export NER annotations for a sentence store")
    parser.add_argument("--store", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--model", default="rules",
                        help="spaCy model name, or 'rules' for the built-in")
    parser.add_argument("--batch-size", type=int, default=64)
    args = parser.parse_args(argv)

    try:
        model = load_model(args.model, args.batch_size)
        summary = export_annotations(args.store, args.out, model, args.model,
                                     args.batch_size)
    except (ModelError, ValueError, OSError) as exc:
        print(f"ner-bridge: {exc}", file=sys.stderr)
        return 2
    print(f"annotated {summary.sentences} sentences, "
          f"{summary.entities} entities, {summary.warnings} warnings")
    return 0


if __name__ == "__main__":
    sys.exit(main())
