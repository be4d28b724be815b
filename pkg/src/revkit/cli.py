"""Command line entry point.

Four commands: align produces sentence-alignment files for every
adjacent version pair of a corpus, extract-edits turns one alignment
plus word alignments (and optionally trees) into an edit file, stats
aggregates document-level revision statistics, and eval scores
predictions for the alignment, edit and intention tasks.

All outputs are written atomically and are byte-identical across reruns
on the same inputs.  REVKIT_LOG sets the logging level.
"""
from __future__ import annotations

import argparse
import logging
import multiprocessing
import os
import sys
import traceback
from collections import Counter
from typing import Callable, Iterable, Sequence

from .config import RunConfig, load_config
from .corpus import ArticleGroup, DocVersion, load_corpus
from .doc_ops import (
    DocOpKind,
    PositionHistogram,
    action_composition_by_ratio,
    count_operations,
    doc_operations,
    pearson,
    relative_positions,
    update_ratio,
)
from .edits import (
    SentenceRevision,
    WordAlignment,
    derive_reorder,
    edits_from_alignment_simple,
    edits_from_diff,
    edits_with_parse,
)
from .errors import AlignmentFormatError, FormatError, RevkitError
from .formats import (
    alignment_to_json,
    atomic_write_text,
    dump_json,
    format_csv,
    read_alignment,
    read_edit_file,
    read_pharaoh_file,
    read_tree_file,
    write_edit_file,
)
from .intention import IntentionLabel, coarse_of, ingest_predictions
from .metrics import eval_alignment, eval_classification, eval_edits_corpus
from .para_align import Thresholds, align_paragraphs
from .sent_align import align_sentences_directional, merge_bidirectional
from .similarity import make_metric

log = logging.getLogger("revkit")


def _setup_logging() -> None:
    name = os.environ.get("REVKIT_LOG", "").strip().upper()
    level = getattr(logging, name, None) if name else logging.WARNING
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if name and getattr(logging, name, None) is None:
        log.warning("ignoring invalid REVKIT_LOG value %r", name)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {
        name: getattr(args, name, None)
        for name in (
            "tau1",
            "tau2",
            "tau3",
            "tau4",
            "sentence_metric",
            "sentence_threshold",
            "max_level",
            "method",
            "kept_definition",
            "bins",
            "jobs",
        )
    }
    return load_config(getattr(args, "config", None), overrides)


def _map_jobs(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with multiprocessing.Pool(min(jobs, len(items))) as pool:
        return pool.map(fn, items)


def _groups_by_id(groups: Iterable[ArticleGroup]) -> dict[str, ArticleGroup]:
    return {g.arxiv_id: g for g in groups}


def _find_group(groups: dict[str, ArticleGroup], arxiv_id: str | None, where: str) -> ArticleGroup:
    if arxiv_id is None:
        if len(groups) == 1:
            return next(iter(groups.values()))
        raise AlignmentFormatError(
            f"{where}: no arxiv_id in file and the corpus has {len(groups)} groups"
        )
    if arxiv_id not in groups:
        raise AlignmentFormatError(f"{where}: group {arxiv_id!r} not in the corpus")
    return groups[arxiv_id]


def _pair_filename(arxiv_id: str, src_v: int, tgt_v: int) -> str:
    return f"{arxiv_id.replace('/', '_')}.v{src_v}-v{tgt_v}.json"


# ---------------------------------------------------------------------------
# align

def _align_pair(src: DocVersion, tgt: DocVersion, cfg: RunConfig):
    thresholds = Thresholds(cfg.tau1, cfg.tau2, cfg.tau3, cfg.tau4)
    paras = align_paragraphs(src, tgt, thresholds)
    metric = make_metric(cfg.sentence_metric, src, tgt)
    thr = cfg.effective_sentence_threshold()
    fwd = align_sentences_directional(paras, src, tgt, metric, thr)
    bwd = align_sentences_directional(paras.reversed(), tgt, src, metric, thr)
    return merge_bidirectional(fwd, bwd)


def _align_group(payload: tuple[ArticleGroup, RunConfig]) -> list[tuple[str, str]]:
    group, cfg = payload
    out = []
    for src, tgt in group.adjacent_pairs():
        try:
            merged = _align_pair(src, tgt, cfg)
        except ValueError as exc:
            raise RevkitError(f"group {group.arxiv_id}: {exc}") from exc
        name = _pair_filename(group.arxiv_id, src.version_index, tgt.version_index)
        out.append((name, dump_json(alignment_to_json(merged, group.arxiv_id))))
    return out


def cmd_align(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    groups = load_corpus(args.corpus, compat=args.compat)
    os.makedirs(args.out, exist_ok=True)
    payloads = [(g, cfg) for g in groups]
    written: list[str] = []
    try:
        for files in _map_jobs(_align_group, payloads, cfg.jobs):
            for name, text in files:
                path = os.path.join(args.out, name)
                atomic_write_text(path, text)
                written.append(path)
                log.info("wrote %s", path)
    except BaseException:
        for path in written:
            try:
                os.unlink(path)
            except OSError:
                pass
        raise
    return 0


# ---------------------------------------------------------------------------
# extract-edits

def cmd_extract_edits(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    groups = _groups_by_id(load_corpus(args.corpus, compat=args.compat))
    arxiv_id, alignment = read_alignment(args.alignment)
    group = _find_group(groups, arxiv_id, args.alignment)
    src = group.version(alignment.src_version)
    tgt = group.version(alignment.tgt_version)
    try:
        alignment.validate_against(src, tgt)
    except ValueError as exc:
        raise AlignmentFormatError(f"{args.alignment}: {exc}") from exc
    pairs = alignment.sorted_positive()

    was: list[WordAlignment] | None = None
    trees_src = trees_tgt = None
    if cfg.method in ("simple", "parse"):
        if args.word_alignments is None:
            raise FormatError(f"method {cfg.method} needs --word-alignments")
        was = read_pharaoh_file(args.word_alignments)
        if len(was) != len(pairs):
            raise FormatError(
                f"{args.word_alignments}: {len(was)} lines for {len(pairs)} aligned pairs"
            )
    if cfg.method == "parse":
        if args.trees_src is None or args.trees_tgt is None:
            raise FormatError("method parse needs --trees-src and --trees-tgt")
        trees_src = read_tree_file(args.trees_src)
        trees_tgt = read_tree_file(args.trees_tgt)
        for path, trees in ((args.trees_src, trees_src), (args.trees_tgt, trees_tgt)):
            if len(trees) != len(pairs):
                raise FormatError(f"{path}: {len(trees)} lines for {len(pairs)} aligned pairs")

    revisions: list[SentenceRevision] = []
    for n, (s_id, t_id, _) in enumerate(pairs):
        s = src.sentence(s_id)
        t = tgt.sentence(t_id)
        try:
            if s.surfaces() == t.surfaces():
                edits = set()  # identical pair: its input line is consumed, no edits
            elif cfg.method == "diff":
                edits = edits_from_diff(s, t)
            elif cfg.method == "simple":
                assert was is not None
                edits = edits_from_alignment_simple(s, t, was[n])
                edits |= derive_reorder(edits, was[n], s, t)
            else:
                assert was is not None and trees_src is not None and trees_tgt is not None
                if trees_src[n] is None or trees_tgt[n] is None:
                    raise FormatError(f"pair {n + 1} needs trees on both sides")
                edits = edits_with_parse(s, t, was[n], trees_src[n], trees_tgt[n], cfg.max_level)
                edits |= derive_reorder(edits, was[n], s, t)
        except ValueError as exc:
            raise FormatError(f"pair {n + 1} ({s_id} -> {t_id}): {exc}") from exc
        revisions.append(SentenceRevision(s, t, tuple(edits)))
    write_edit_file(args.out, revisions)
    log.info("wrote %s (%d revisions)", args.out, len(revisions))
    return 0


# ---------------------------------------------------------------------------
# stats

_POSITION_FILES = {
    DocOpKind.INSERTION: "positions_inserted.csv",
    DocOpKind.DELETION: "positions_deleted.csv",
    DocOpKind.REPHRASING: "positions_revised.csv",
}


def _alignment_paths(raw: Sequence[str]) -> list[str]:
    paths: list[str] = []
    for item in raw:
        if os.path.isdir(item):
            paths.extend(
                os.path.join(item, name)
                for name in sorted(os.listdir(item))
                if name.endswith(".json")
            )
        else:
            paths.append(item)
    if not paths:
        raise RevkitError("no alignment files found")
    return paths


def _stats_for_file(payload) -> dict:
    path, group, alignment, cfg = payload
    src = group.version(alignment.src_version)
    tgt = group.version(alignment.tgt_version)
    try:
        alignment.validate_against(src, tgt)
        ops = doc_operations(src, tgt, alignment)
        ratio = update_ratio(ops, src, cfg.kept_definition)
    except ValueError as exc:
        raise RevkitError(f"{path}: {exc}") from exc
    return {
        "arxiv_id": group.arxiv_id,
        "src_version": src.version_index,
        "tgt_version": tgt.version_index,
        "versions_in_group": len(group.versions),
        "time_delta": tgt.timestamp - src.timestamp,
        "ratio": ratio,
        "counts": count_operations(ops),
        "positions": {
            kind: relative_positions(ops, src, tgt, kind) for kind in _POSITION_FILES
        },
    }


def _correlation(rows: list[dict]) -> float | None:
    if len(rows) < 2:
        return None
    try:
        return pearson([r["ratio"] for r in rows], [float(r["time_delta"]) for r in rows])
    except ValueError:
        return None


def cmd_stats(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    groups = _groups_by_id(load_corpus(args.corpus, compat=args.compat))
    paths = _alignment_paths(args.alignments)
    payloads = []
    for path in paths:
        arxiv_id, alignment = read_alignment(path)
        payloads.append((path, _find_group(groups, arxiv_id, path), alignment, cfg))
    rows = _map_jobs(_stats_for_file, payloads, cfg.jobs)
    rows.sort(key=lambda r: (r["arxiv_id"], r["src_version"], r["tgt_version"]))

    total: Counter = Counter()
    for r in rows:
        total.update(r["counts"])
    correlations = {
        "overall": _correlation(rows),
        "two_version": _correlation([r for r in rows if r["versions_in_group"] == 2]),
        "multi_version": _correlation([r for r in rows if r["versions_in_group"] > 2]),
    }
    summary = {
        "pairs": len(rows),
        "groups": len({r["arxiv_id"] for r in rows}),
        "kept_definition": cfg.kept_definition,
        "operation_counts": {k.value: total.get(k, 0) for k in DocOpKind},
        "mean_update_ratio": sum(r["ratio"] for r in rows) / len(rows),
        "correlations": correlations,
    }

    os.makedirs(args.out, exist_ok=True)
    written: list[str] = []

    def emit(name: str, text: str) -> None:
        path = os.path.join(args.out, name)
        atomic_write_text(path, text)
        written.append(path)
        log.info("wrote %s", path)

    try:
        emit("summary.json", dump_json(summary))
        emit(
            "update_ratios.csv",
            format_csv(
                ("arxiv_id", "src_version", "tgt_version", "time_delta", "update_ratio"),
                [
                    (r["arxiv_id"], r["src_version"], r["tgt_version"], r["time_delta"], r["ratio"])
                    for r in rows
                ],
            ),
        )
        for kind, name in _POSITION_FILES.items():
            positions = tuple(p for r in rows for p in r["positions"][kind])
            hist = PositionHistogram(kind, positions).histogram(cfg.bins)
            emit(name, format_csv(("bin_start", "bin_end", "count"), hist))
        comp = action_composition_by_ratio(
            [(r["ratio"], r["counts"]) for r in rows], cfg.bins
        )
        emit(
            "composition.csv",
            format_csv(
                ("ratio_bin_start", "ratio_bin_end", "insertion", "deletion", "rephrasing", "total_changes"),
                [
                    (
                        b.ratio_start,
                        b.ratio_end,
                        b.fractions[DocOpKind.INSERTION],
                        b.fractions[DocOpKind.DELETION],
                        b.fractions[DocOpKind.REPHRASING],
                        b.total_changes,
                    )
                    for b in comp
                ],
            ),
        )
    except BaseException:
        for path in written:
            try:
                os.unlink(path)
            except OSError:
                pass
        raise
    return 0


# ---------------------------------------------------------------------------
# eval

def _eval_alignment_task(args: argparse.Namespace) -> dict:
    if args.corpus is None:
        raise RevkitError("task alignment needs --corpus")
    groups = _groups_by_id(load_corpus(args.corpus, compat=args.compat))
    aid_pred, pred = read_alignment(args.pred)
    aid_gold, gold = read_alignment(args.gold)
    if (pred.src_version, pred.tgt_version) != (gold.src_version, gold.tgt_version):
        raise AlignmentFormatError(
            f"prediction covers v{pred.src_version}->v{pred.tgt_version}, "
            f"gold v{gold.src_version}->v{gold.tgt_version}"
        )
    group = _find_group(groups, aid_pred or aid_gold, args.pred)
    src = group.version(pred.src_version)
    tgt = group.version(pred.tgt_version)
    try:
        res = eval_alignment(pred, gold, src, tgt)
    except ValueError as exc:
        raise AlignmentFormatError(str(exc)) from exc
    return {
        "task": "alignment",
        "precision": res.precision,
        "recall": res.recall,
        "f1": res.f1,
        "tp": res.tp,
        "fp": res.fp,
        "fn": res.fn,
    }


def _eval_edits_task(args: argparse.Namespace) -> dict:
    preds = {e.revision_id: e for e in read_edit_file(args.pred)}
    golds = read_edit_file(args.gold)
    gold_ids = {g.revision_id for g in golds}
    stray = sorted(set(preds) - gold_ids)
    if stray:
        raise FormatError(f"{args.pred}: revision ids not in gold: {', '.join(stray[:5])}")
    items = []
    for g in golds:
        p = preds.get(g.revision_id)
        items.append((p.edits if p else (), g.gold_alternatives()))
    res = eval_edits_corpus(items)
    return {
        "task": "edits",
        "precision": res.micro.precision,
        "recall": res.micro.recall,
        "f1": res.micro.f1,
        "tp": res.micro.tp,
        "fp": res.micro.fp,
        "fn": res.micro.fn,
        "exact_match_rate": res.exact_match_rate,
        "pairs": res.pairs,
    }


def _eval_intention_task(args: argparse.Namespace) -> dict:
    schema = args.classes
    golds = read_edit_file(args.gold)
    gold_labels: dict[tuple[str, int], str] = {}
    fine_values = {l.value for l in IntentionLabel}
    for g in golds:
        for n, e in enumerate(g.edits):
            if e.intention is None:
                raise FormatError(
                    f"{args.gold}: edit {n} of {g.revision_id} has no intention label"
                )
            if schema == "coarse":
                value = coarse_of(e.intention).value
            else:
                value = e.intention.value
                if value not in fine_values:
                    raise FormatError(
                        f"{args.gold}: {g.revision_id} edit {n} carries the coarse label "
                        f"{value!r}; fine-schema scoring needs fine labels"
                    )
            gold_labels[(g.revision_id, n)] = value
    with open(args.pred, encoding="utf-8") as fh:
        lines = fh.readlines()
    pred_map, errors = ingest_predictions(lines, schema=schema)
    if errors.errors:
        raise FormatError(f"{args.pred}: " + "; ".join(errors.errors))
    stray = sorted(set(pred_map) - set(gold_labels))
    if stray:
        raise FormatError(f"{args.pred}: predictions for unknown edits: {stray[:5]}")
    missing = sorted(set(gold_labels) - set(pred_map))
    if missing:
        raise FormatError(f"{args.pred}: missing predictions for {missing[:5]}")
    keys = sorted(gold_labels)
    report = eval_classification(
        [pred_map[k].value for k in keys], [gold_labels[k] for k in keys], schema=schema
    )
    return {
        "task": "intention",
        "schema": schema,
        "accuracy": report.accuracy,
        "weighted_f1": report.weighted_f1,
        "per_class": {
            label: {
                "precision": prf.precision,
                "recall": prf.recall,
                "f1": prf.f1,
                "support": report.support[label],
            }
            for label, prf in report.per_class.items()
        },
    }


def cmd_eval(args: argparse.Namespace) -> int:
    task = {
        "alignment": _eval_alignment_task,
        "edits": _eval_edits_task,
        "intention": _eval_intention_task,
    }[args.task]
    report = task(args)
    text = dump_json(report)
    sys.stdout.write(text)
    if args.out:
        atomic_write_text(args.out, text)
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--jobs", type=int, help="worker processes for per-group work")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revkit", description="Analyze revisions between versions of scientific documents."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("align", help="align sentences for every adjacent version pair")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--compat", action="store_true", help="read third-party corpus JSON shapes")
    p.add_argument("--metric", dest="sentence_metric", choices=("jaccard", "tfidf", "char3gram", "bleu"))
    p.add_argument("--threshold", dest="sentence_threshold", type=float)
    for name in ("tau1", "tau2", "tau3", "tau4"):
        p.add_argument(f"--{name}", type=float)
    _add_config_flags(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("extract-edits", help="extract span edits for one alignment file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--alignment", required=True, help="one alignment JSON file")
    p.add_argument("--out", required=True, help="output edit JSON file")
    p.add_argument("--compat", action="store_true")
    p.add_argument("--method", choices=("diff", "simple", "parse"))
    p.add_argument("--word-alignments", help="Pharaoh file, one line per aligned pair")
    p.add_argument("--trees-src", help="bracketed trees, one line per aligned pair")
    p.add_argument("--trees-tgt")
    p.add_argument("--max-level", dest="max_level", type=int)
    _add_config_flags(p)
    p.set_defaults(func=cmd_extract_edits)

    p = sub.add_parser("stats", help="document-level operation statistics")
    p.add_argument("--corpus", required=True)
    p.add_argument("--alignments", required=True, nargs="+", help="alignment files or directories")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--compat", action="store_true")
    p.add_argument("--kept-definition", dest="kept_definition", choices=("copy_only", "copy_or_rephrase"))
    p.add_argument("--bins", type=int)
    _add_config_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("eval", help="score predictions against gold")
    p.add_argument("--task", required=True, choices=("alignment", "edits", "intention"))
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--corpus", help="needed for task alignment")
    p.add_argument("--compat", action="store_true")
    p.add_argument("--classes", choices=("fine", "coarse"), default="fine")
    p.add_argument("--out", help="also write the report to this file")
    _add_config_flags(p)
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (RevkitError, OSError) as exc:
        print(f"revkit: error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        print("revkit: internal error", file=sys.stderr)
        traceback.print_exc()
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
