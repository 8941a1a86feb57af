"""``softskill`` command-line entry point.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 internal error.
"""

import argparse
import hashlib
import json
import logging
import sys

import numpy as np

from . import __version__
from .augment import DEFAULT_EXCLUSIONS, AnnotationRecord, mine_weak_labels, select_seed_skills
from .embed import load_embeddings
from .errors import (CheckpointError, ConfigurationError, InputError, ParseError,
                     SoftSkillError, TrainingError)
from .evaluation import calibrate_threshold, evaluate_scores, filter_counts
from .jsonl import dumps, read_jsonl, write_jsonl
from .lexicon import compute_stats, load_lexicon
from .matcher import Snippet
from .model import (TrainConfig, gradient_check, load_model, predict_proba, save_model,
                    train)
from .pipeline import disambiguate, match_corpus, record_to_input, score_snippets
from .preprocess import normalize
from .represent import RepresentationMode, label_name, parse_label, represent

log = logging.getLogger("softskill")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3

GRADIENT_BOUNDS = {"mean": 1e-6, "lstm": 1e-4, "cnn": 1e-4}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- helpers

def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) in (None, "")]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"{args.command}: missing required option(s) {flags}")


def effective_config(args):
    # output destinations are not part of the configuration being recorded
    skip = ("func", "quiet", "config", "out", "log")
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return json.loads(json.dumps(cfg, default=str))


def config_hash(cfg):
    return hashlib.sha256(dumps(cfg).encode()).hexdigest()[:16]


def provenance(args):
    cfg = effective_config(args)
    return {"command": args.command, "seed": args.seed, "config_hash": config_hash(cfg), "config": cfg}


def _embeddings(args, required=False):
    if getattr(args, "embeddings", None):
        if not args.dim:
            raise UsageError("--dim is required with --embeddings")
        return load_embeddings(args.embeddings, args.dim, seed=args.seed)
    if required:
        raise UsageError(f"{args.command}: --embeddings is required here")
    return None


def _snippets(path):
    return [Snippet.from_record(r) for r in read_jsonl(path)]


def _labeled_inputs(path, mode, embeddings):
    inputs = [record_to_input(r, mode, embeddings) for r in read_jsonl(path)]
    if any(x.label is None for x in inputs):
        raise InputError(f"{path}: every record needs a label")
    return inputs


def _model_embeddings(args, model):
    needs = model.mode is RepresentationMode.MASKED_WITH_EMBEDDING
    return _embeddings(args) if needs or getattr(args, "embeddings", None) else None


def _emit(lines, quiet=False):
    if not quiet:
        for line in lines:
            print(line)


# ---------------------------------------------------------------- commands

def cmd_lexicon_stats(args):
    _need(args, "lexicon")
    lex = load_lexicon(args.lexicon)
    lines = compute_stats(lex).as_lines()
    if lex.duplicate_count:
        lines.append(f"duplicates_collapsed: {lex.duplicate_count}")
    _emit(lines)


def cmd_preprocess(args):
    _need(args, "text")
    _emit(normalize(args.text))


def cmd_match(args):
    _need(args, "lexicon", "input", "out")
    lex = load_lexicon(args.lexicon)
    snippets = match_corpus(args.input, lex, args.window, args.text_column)
    write_jsonl(args.out, (s.to_record(lex) for s in snippets), meta=provenance(args))
    _emit([f"matches: {len(snippets)}"], args.quiet)


def cmd_transform(args):
    _need(args, "mode", "input", "out")
    mode = RepresentationMode.parse(args.mode)
    table = _embeddings(args, required=mode is RepresentationMode.MASKED_WITH_EMBEDDING)
    out = []
    for rec in read_jsonl(args.input):
        x = represent(Snippet.from_record(rec), mode, table, label=parse_label(rec.get("label")))
        out.append(x.to_record())
    write_jsonl(args.out, out, meta=provenance(args))
    _emit([f"inputs: {len(out)}"], args.quiet)


def cmd_augment(args):
    _need(args, "annotations", "corpus_snippets", "out")
    annotations = [AnnotationRecord.from_record(r) for r in read_jsonl(args.annotations)]
    if not annotations:
        raise InputError("no annotations")
    negative, positive = select_seed_skills(annotations, args.neg_ratio)
    snippets = _snippets(args.corpus_snippets)
    exclusions = args.exclude if args.exclude else DEFAULT_EXCLUSIONS
    mined = mine_weak_labels(snippets, negative, "negative", exclusions, args.limit)
    mined += mine_weak_labels(snippets, positive, "positive", (), args.limit)
    records = []
    for snip, label in mined:
        rec = snip.to_record()
        rec["label"] = label_name(label)
        records.append(rec)
    write_jsonl(args.out, records, meta=provenance(args))
    _emit([f"negative_seeds: {len(negative)}", f"positive_seeds: {len(positive)}",
           f"labeled: {len(records)}"], args.quiet)


def cmd_train(args):
    _need(args, "model", "mode", "train", "out")
    config = TrainConfig(
        model_kind=args.model, mode=args.mode, learning_rate=args.lr, batch_size=args.batch_size,
        max_epochs=args.max_epochs, patience=args.patience, seed=args.seed, dropout=args.dropout,
        max_doc_len=args.max_doc_len, hidden_size=args.hidden_size,
        filter_widths=tuple(args.filter_widths), filters_per_width=args.filters_per_width,
        embedding_dim=args.dim or 100,
    )
    table = _embeddings(args, required=config.mode is RepresentationMode.MASKED_WITH_EMBEDDING)
    data = _labeled_inputs(args.train, config.mode, table)
    model, history = train(data, config, table)
    model.meta["provenance"] = provenance(args)
    save_model(model, args.out)
    if args.log:
        write_jsonl(args.log, history.epochs, meta=provenance(args))
    best = history.best
    _emit([f"epochs: {len(history.epochs)}", f"best_epoch: {history.best_epoch}",
           f"val_accuracy: {best.get('val_accuracy', float('nan')):.4f}",
           f"val_f1_weighted: {best.get('val_f1_weighted', float('nan')):.4f}"], args.quiet)


def _scores_and_labels(args):
    model = load_model(args.model)
    table = _model_embeddings(args, model)
    inputs = _labeled_inputs(args.test, model.mode, table)
    return predict_proba(model, inputs), np.array([x.label for x in inputs])


def cmd_evaluate(args):
    _need(args, "model", "test")
    scores, labels = _scores_and_labels(args)
    report = evaluate_scores(scores, labels, args.target_precision, threshold=args.threshold)
    _emit(report.as_lines(), args.quiet)
    if args.out:
        write_jsonl(args.out, [report.as_dict()], meta=provenance(args))


def cmd_calibrate(args):
    _need(args, "model", "test")
    scores, labels = _scores_and_labels(args)
    cal = calibrate_threshold(scores, labels, args.target_precision)
    rec = {"threshold": cal.threshold, "precision": cal.precision, "recall": cal.recall,
           "target_precision": cal.target_precision, "target_unattained": cal.target_unattained}
    _emit([f"{k}: {v}" for k, v in rec.items()], args.quiet)
    if args.out:
        write_jsonl(args.out, [rec], meta=provenance(args))


def _corpus_snippets(args):
    """Snippets from a ``.jsonl`` snippet file, or by matching a raw corpus against ``--lexicon``."""
    lex = load_lexicon(args.lexicon) if args.lexicon else None
    if str(args.corpus).endswith(".jsonl"):
        return _snippets(args.corpus), lex
    if lex is None:
        raise UsageError(f"{args.command}: a raw corpus needs --lexicon")
    return match_corpus(args.corpus, lex, args.window, args.text_column), lex


def cmd_disambiguate(args):
    _need(args, "lexicon", "model", "corpus", "out")
    model = load_model(args.model)
    snippets, lex = _corpus_snippets(args)
    records = disambiguate(snippets, model, args.threshold, _model_embeddings(args, model), lex)
    write_jsonl(args.out, records, meta=provenance(args))
    kept = sum(r["keep"] for r in records)
    _emit([f"matches: {len(records)}", f"kept: {kept}"], args.quiet)


def cmd_filter_report(args):
    _need(args, "model", "corpus", "out")
    model = load_model(args.model)
    snippets, lex = _corpus_snippets(args)
    scores = score_snippets(snippets, model, _model_embeddings(args, model))
    rows = filter_counts([s.skill_id for s in snippets], scores, args.threshold)
    meta = provenance(args)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(f"# seed={meta['seed']} config_hash={meta['config_hash']}\n")
        fh.write("skill_id\tskill_text\traw_count\tfiltered_count\n")
        for r in rows:
            text = lex[r.skill_id].raw_text if lex is not None else ""
            fh.write(f"{r.skill_id}\t{text}\t{r.raw_count}\t{r.filtered_count}\n")
    _emit([f"skills: {len(rows)}"], args.quiet)


def cmd_gradient_check(args):
    _need(args, "model", "mode")
    err = gradient_check(args.model, args.mode, seed=args.seed)
    bound = GRADIENT_BOUNDS[args.model if args.model in GRADIENT_BOUNDS else "mean"]
    _emit([f"max_relative_error: {err:.3e}", f"bound: {bound:.0e}",
           f"status: {'pass' if err < bound else 'fail'}"])
    if err >= bound:
        return EXIT_DATA


# ---------------------------------------------------------------- parser

def build_parser():
    parser = _Parser(prog="softskill", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--config", help="JSON file of option values; flags override it")
    common.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    def emb_flags(p):
        p.add_argument("--embeddings", help="text vector file")
        p.add_argument("--dim", type=int, help="vector dimension of --embeddings")

    def corpus_flags(p):
        p.add_argument("--window", type=int, default=10)
        p.add_argument("--text-column", help="text column of a CSV/TSV corpus")

    p = add("lexicon-stats", cmd_lexicon_stats, "summarize a lexicon file")
    p.add_argument("--lexicon")

    p = add("preprocess", cmd_preprocess, "print normalized tokens, one per line")
    p.add_argument("--text")

    p = add("match", cmd_match, "find lexicon matches and write snippets")
    p.add_argument("--lexicon")
    p.add_argument("--input", help="corpus: one document per line, or CSV/TSV")
    p.add_argument("--out")
    corpus_flags(p)

    p = add("transform", cmd_transform, "turn snippets into classifier inputs")
    p.add_argument("--mode", choices=[m.value for m in RepresentationMode])
    p.add_argument("--in", dest="input")
    p.add_argument("--out")
    emb_flags(p)

    p = add("augment", cmd_augment, "weakly label corpus snippets from seed skills")
    p.add_argument("--annotations")
    p.add_argument("--corpus-snippets")
    p.add_argument("--neg-ratio", type=float, default=0.7)
    p.add_argument("--limit", type=int, default=15000)
    p.add_argument("--exclude", action="append", help="exclusion phrase (repeatable)")
    p.add_argument("--out")

    p = add("train", cmd_train, "train a classifier")
    p.add_argument("--model", choices=["mean", "cnn", "lstm"])
    p.add_argument("--mode", choices=[m.value for m in RepresentationMode])
    p.add_argument("--train")
    p.add_argument("--out")
    p.add_argument("--log", help="write per-epoch metrics here (JSONL)")
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--max-epochs", type=int, default=100)
    p.add_argument("--patience", type=int, default=5)
    p.add_argument("--dropout", type=float)
    p.add_argument("--max-doc-len", type=int, default=30)
    p.add_argument("--hidden-size", type=int, default=100)
    p.add_argument("--filter-widths", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--filters-per-width", type=int, default=50)
    emb_flags(p)

    for name, func, text in (("evaluate", cmd_evaluate, "precision/recall/F1 at a calibrated threshold"),
                             ("calibrate", cmd_calibrate, "find the threshold meeting a precision target")):
        p = add(name, func, text)
        p.add_argument("--model")
        p.add_argument("--test", help="labeled snippets or inputs (JSONL)")
        p.add_argument("--target-precision", type=float, default=0.95)
        p.add_argument("--out")
        emb_flags(p)
        if name == "evaluate":
            p.add_argument("--threshold", type=float, help="use this threshold instead of calibrating")

    for name, func, text in (("disambiguate", cmd_disambiguate, "score every match in a corpus"),
                             ("filter-report", cmd_filter_report, "per-skill counts before/after filtering")):
        p = add(name, func, text)
        p.add_argument("--model")
        p.add_argument("--corpus", "--input", dest="corpus",
                       help="raw corpus (with --lexicon) or snippets JSONL")
        p.add_argument("--lexicon")
        p.add_argument("--threshold", type=float, default=0.5)
        p.add_argument("--out")
        corpus_flags(p)
        emb_flags(p)

    p = add("gradient-check", cmd_gradient_check, "verify backpropagation by finite differences")
    p.add_argument("--model", choices=["mean", "cnn", "lstm"])
    p.add_argument("--mode", choices=[m.value for m in RepresentationMode], default="tagged")
    return parser


def parse_args(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        raise SystemExit(EXIT_USAGE)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        file_cfg = {k.replace("-", "_"): v for k, v in file_cfg.items()}
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(file_cfg) - known)
        if unknown:
            raise UsageError(f"unknown config key(s): {', '.join(unknown)}")
        sub.set_defaults(**file_cfg)
        args = parser.parse_args(argv)
    return args


def main(argv=None):
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"softskill: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        code = args.func(args)
    except (UsageError, ConfigurationError) as exc:
        print(f"softskill {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, InputError, CheckpointError, TrainingError, KeyError, OSError) as exc:
        print(f"softskill {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SoftSkillError as exc:
        print(f"softskill {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"softskill {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
