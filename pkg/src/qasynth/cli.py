"""Command-line entry point: the pipeline as subcommands.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections import Counter

from qasynth import annotate as annotate_mod
from qasynth import corpus as corpus_mod
from qasynth import dataset as dataset_mod
from qasynth import evaluation as eval_mod
from qasynth import index as index_mod
from qasynth.errors import QasynthError
from qasynth.retrieval import MatchingMode
from qasynth.templates import TemplateVariant, WhPriorTable

CONFIG_ENV = "QASYNTH_CONFIG"

VARIANTS = {v.value: v for v in TemplateVariant}
MODES = {m.value: m for m in MatchingMode}


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1 (argparse's default is 2, which we reserve for data errors)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qasynth", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("ingest", help="ingest a JSONL corpus into a sentence store")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("annotate", help="attach entity annotations to a sentence store")
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--annotations", help="annotation interchange file (JSON Lines)")
    p.add_argument("--heuristic", action="store_true",
                   help="use the built-in heuristic annotator")
    p.add_argument("--gazetteer", help="gazetteer JSON for the heuristic annotator")

    p = sub.add_parser("index", help="build and persist the BM25 sentence index")
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("generate", help="generate a SQuAD-format dataset")
    p.add_argument("--store", required=True, help="annotated sentence store")
    p.add_argument("--index", required=True)
    p.add_argument("--config", default=os.environ.get(CONFIG_ENV),
                   help="JSON config file; explicit flags override it")
    p.add_argument("--variant", choices=sorted(VARIANTS))
    p.add_argument("--mode", choices=sorted(MODES))
    p.add_argument("--use-retrieved", choices=["true", "false"])
    p.add_argument("--size", type=int, help="target number of training examples")
    p.add_argument("--val-size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--f1-cap", type=float)
    p.add_argument("--top-k", type=int)
    p.add_argument("--wh-priors", help="wh bi-gram prior table (JSON)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--title", default="qasynth")
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-val")

    p = sub.add_parser("evaluate", help="score predictions against a gold SQuAD file")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--report", help="write the JSON report here as well")

    p = sub.add_parser("ner-subset",
                       help="keep only questions whose answers are context entities")
    p.add_argument("--gold", required=True)
    p.add_argument("--annotations", required=True,
                   help="JSON Lines of {context_id, entities}")
    p.add_argument("--out", required=True)

    p = sub.add_parser("stats", help="print counts for a generated training file")
    p.add_argument("--train", required=True)
    return parser


def _cmd_ingest(args) -> int:
    corpus = corpus_mod.ingest_documents(args.corpus)
    corpus_mod.save_sentence_store(corpus, args.out)
    print(f"ingested {len(corpus.documents)} documents, {len(corpus)} sentences")
    return 0


def _cmd_annotate(args) -> int:
    corpus = corpus_mod.load_sentence_store(args.store)
    if args.annotations:
        annotate_mod.load_annotations(corpus, args.annotations)
    elif args.heuristic:
        gaz = annotate_mod.load_gazetteer(args.gazetteer) if args.gazetteer else None
        annotate_mod.annotate_with_heuristics(corpus, gaz)
    else:
        print("annotate: need --annotations or --heuristic", file=sys.stderr)
        return 1
    corpus_mod.save_sentence_store(corpus, args.out, include_entities=True)
    n_ents = sum(len(s.entities) for s in corpus.sentences.values())
    print(f"annotated {len(corpus)} sentences with {n_ents} entities")
    return 0


def _cmd_index(args) -> int:
    corpus = corpus_mod.load_sentence_store(args.store)
    idx = index_mod.build_index(corpus)
    index_mod.save_index(idx, args.out)
    print(f"indexed {idx.N} sentences, {len(idx.vocab)} terms")
    return 0


def _cmd_generate(args) -> int:
    config_file: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            config_file = json.load(fh)

    def pick(flag, key, default):
        if flag is not None:
            return flag
        return config_file.get(key, default)

    use_retrieved = pick(args.use_retrieved, "use_retrieved", True)
    if isinstance(use_retrieved, str):
        use_retrieved = use_retrieved == "true"
    config = dataset_mod.GenerationConfig(
        variant=VARIANTS[pick(args.variant, "variant", "wh-b-a")],
        mode=MODES[pick(args.mode, "mode", "both")],
        use_retrieved=use_retrieved,
        target_size=pick(args.size, "target_size", dataset_mod.DEFAULT_TARGET_SIZE),
        validation_size=pick(args.val_size, "validation_size",
                             dataset_mod.DEFAULT_VALIDATION_SIZE),
        seed=pick(args.seed, "seed", 0),
        f1_cap=pick(args.f1_cap, "f1_cap", 0.95),
        top_k=pick(args.top_k, "top_k", 100),
    )
    priors_path = args.wh_priors or config_file.get("wh_priors")
    priors = WhPriorTable.from_file(priors_path) if priors_path else WhPriorTable.default()

    corpus = corpus_mod.load_sentence_store(args.store)
    idx = index_mod.load_index(args.index)
    examples = dataset_mod.generate_dataset(corpus, idx, config, priors,
                                            jobs=args.jobs)
    val_size = min(config.validation_size, len(examples))
    if val_size < config.validation_size:
        logging.getLogger("qasynth").warning(
            "only %d examples generated; validation reduced to %d",
            len(examples), val_size)
    train, val = dataset_mod.split_validation(examples, val_size, config.seed)
    dataset_mod.write_squad_json(train, args.title, args.out_train)
    if args.out_val:
        dataset_mod.write_squad_json(val, args.title, args.out_val)
    print(f"wrote {len(train)} train / {len(val)} validation examples")
    return 0


def _cmd_evaluate(args) -> int:
    gold = eval_mod.load_squad_file(args.gold)
    preds = eval_mod.load_predictions(args.pred)
    em, f1, n = eval_mod.evaluate(gold, preds)
    report = {"exact_match": em, "f1": f1, "n": n}
    print(json.dumps(report))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh)
    return 0


def _cmd_ner_subset(args) -> int:
    gold = eval_mod.load_squad_file(args.gold)
    annotations = eval_mod.load_context_annotations(args.annotations)
    subset = eval_mod.ner_subset(gold, annotations)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(subset, fh, ensure_ascii=False)
    n = sum(len(p["qas"]) for a in subset["data"] for p in a["paragraphs"])
    print(f"kept {n} questions")
    return 0


def _cmd_stats(args) -> int:
    gold = eval_mod.load_squad_file(args.train)
    openings: Counter[str] = Counter()
    contexts = set()
    n = 0
    for article in gold["data"]:
        for para in article["paragraphs"]:
            contexts.add(para["context"])
            for qa in para["qas"]:
                n += 1
                q = qa["question"]
                if "[MASK]" in q:
                    openings["cloze"] += 1
                else:
                    openings[q.split()[0].lower() if q.split() else ""] += 1
    print(f"questions: {n}")
    print(f"contexts: {len(contexts)}")
    for key, count in openings.most_common():
        print(f"  {key}: {count}")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "annotate": _cmd_annotate,
    "index": _cmd_index,
    "generate": _cmd_generate,
    "evaluate": _cmd_evaluate,
    "ner-subset": _cmd_ner_subset,
    "stats": _cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return _COMMANDS[args.command](args)
    except QasynthError as exc:
        print(f"qasynth {args.command}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qasynth {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
