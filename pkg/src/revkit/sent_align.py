"""Sentence alignment within aligned paragraph pairs.

A directional pass aligns each source sentence to its best-scoring
candidate on the other side; running both directions and intersecting
gives the final symmetric alignment.  A hybrid helper partitions
candidate pairs into confident matches, confident non-matches, and a
remainder that needs human review.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .corpus import DocVersion, Sentence, SentenceId
from .para_align import ParaAlignment
from .similarity import SentenceMetric, jaccard

AUTO_ALIGNED_ABOVE = 0.7      # Jaccard above this: auto-accept
AUTO_NOT_ALIGNED_BELOW = 0.2  # Jaccard below this: auto-reject


class SentAlignLabel(Enum):
    ALIGNED = "aligned"
    PARTIAL = "partially-aligned"
    NOT_ALIGNED = "not-aligned"


AlignedPair = tuple[SentenceId, SentenceId, SentAlignLabel]


@dataclass(frozen=True)
class SentenceAlignment:
    """Labeled sentence pairs between two versions.

    not-aligned entries only ever come from gold annotation files; the
    automatic aligners express non-alignment by absence.
    """

    src_version: int
    tgt_version: int
    pairs: frozenset[AlignedPair]

    def positive_pairs(self) -> frozenset[tuple[SentenceId, SentenceId]]:
        return frozenset(
            (s, t) for s, t, label in self.pairs if label is not SentAlignLabel.NOT_ALIGNED
        )

    def labels(self) -> dict[tuple[SentenceId, SentenceId], SentAlignLabel]:
        return {(s, t): label for s, t, label in self.pairs}

    def sorted_positive(self) -> list[tuple[SentenceId, SentenceId, SentAlignLabel]]:
        return sorted(
            (p for p in self.pairs if p[2] is not SentAlignLabel.NOT_ALIGNED),
            key=lambda p: (p[0], p[1]),
        )

    def validate_against(self, src: DocVersion, tgt: DocVersion) -> None:
        if src.version_index != self.src_version or tgt.version_index != self.tgt_version:
            raise ValueError(
                f"alignment is for versions {self.src_version}->{self.tgt_version}, "
                f"got documents {src.version_index}->{tgt.version_index}"
            )
        for s, t, _ in self.pairs:
            src.sentence(s)
            tgt.sentence(t)


def _alignable_in(doc: DocVersion, para_indices: Iterable[int]) -> list[Sentence]:
    out: list[Sentence] = []
    for pi in sorted(set(para_indices)):
        para = doc.paragraph(pi)
        if para.skipped:
            continue
        out.extend(s for s in para.sentences if not s.skipped)
    return out


def align_sentences_directional(
    paras: ParaAlignment,
    src: DocVersion,
    tgt: DocVersion,
    metric: SentenceMetric,
    threshold: float,
) -> SentenceAlignment:
    """Align every source sentence to its best-scoring candidate among
    the sentences of related target paragraphs.

    A pair is kept when the best score reaches the threshold; ties break
    to the lowest target id.  The label is aligned when the score is 1 or
    the surfaces match after lowercasing, partially-aligned otherwise.
    """
    by_src: dict[int, list[int]] = {}
    for pi, pj in paras.pairs:
        by_src.setdefault(pi, []).append(pj)
    pairs: set[AlignedPair] = set()
    for pi in sorted(by_src):
        src_para = src.paragraph(pi)
        if src_para.skipped:
            continue
        candidates = _alignable_in(tgt, by_src[pi])
        if not candidates:
            continue
        for s in src_para.sentences:
            if s.skipped:
                continue
            best: Sentence | None = None
            best_score = -1.0
            for t in candidates:  # ascending id order, first max wins
                score = metric(s, t)
                if score > best_score:
                    best, best_score = t, score
            if best is None or best_score < threshold:
                continue
            if best_score == 1.0 or s.lower_surfaces() == best.lower_surfaces():
                label = SentAlignLabel.ALIGNED
            else:
                label = SentAlignLabel.PARTIAL
            pairs.add((s.id, best.id, label))
    return SentenceAlignment(src.version_index, tgt.version_index, frozenset(pairs))


def merge_bidirectional(fwd: SentenceAlignment, bwd: SentenceAlignment) -> SentenceAlignment:
    """Intersect a forward alignment with a reversed backward one.

    A pair survives when both directions proposed it; it keeps the
    aligned label only when both directions agreed on it.
    """
    if fwd.src_version != bwd.tgt_version or fwd.tgt_version != bwd.src_version:
        raise ValueError(
            f"directions do not match: forward {fwd.src_version}->{fwd.tgt_version}, "
            f"backward {bwd.src_version}->{bwd.tgt_version}"
        )
    back = {
        (t, s): label
        for s, t, label in bwd.pairs
        if label is not SentAlignLabel.NOT_ALIGNED
    }
    merged: set[AlignedPair] = set()
    for s, t, label in fwd.pairs:
        if label is SentAlignLabel.NOT_ALIGNED:
            continue
        other = back.get((s, t))
        if other is None:
            continue
        if label is SentAlignLabel.ALIGNED and other is SentAlignLabel.ALIGNED:
            merged.add((s, t, SentAlignLabel.ALIGNED))
        else:
            merged.add((s, t, SentAlignLabel.PARTIAL))
    return SentenceAlignment(fwd.src_version, fwd.tgt_version, frozenset(merged))


@dataclass(frozen=True)
class HybridPartition:
    """Candidate pairs split by Jaccard confidence."""

    auto_aligned: tuple[tuple[Sentence, Sentence], ...]
    auto_not_aligned: tuple[tuple[Sentence, Sentence], ...]
    needs_human: tuple[tuple[Sentence, Sentence], ...]


def auto_label_hybrid(candidates: Sequence[tuple[Sentence, Sentence]]) -> HybridPartition:
    """Route obvious matches and obvious non-matches automatically and
    leave the middle band for annotation.  Bounds are strict: scores
    exactly at a cutoff stay in the human band."""
    auto_yes: list[tuple[Sentence, Sentence]] = []
    auto_no: list[tuple[Sentence, Sentence]] = []
    undecided: list[tuple[Sentence, Sentence]] = []
    for s, t in candidates:
        score = jaccard(s, t)
        if score > AUTO_ALIGNED_ABOVE:
            auto_yes.append((s, t))
        elif score < AUTO_NOT_ALIGNED_BELOW:
            auto_no.append((s, t))
        else:
            undecided.append((s, t))
    return HybridPartition(tuple(auto_yes), tuple(auto_no), tuple(undecided))


def derive_transitive(a01: SentenceAlignment, a12: SentenceAlignment) -> SentenceAlignment:
    """Compose two adjacent-version alignments into a two-hop alignment.

    A pair (s, u) appears when some middle sentence links them; it is
    labeled aligned only if some connecting path is aligned on both hops.
    """
    if a01.tgt_version != a12.src_version:
        raise ValueError(
            f"cannot chain alignments: {a01.src_version}->{a01.tgt_version} "
            f"then {a12.src_version}->{a12.tgt_version}"
        )
    onward: dict[SentenceId, list[tuple[SentenceId, SentAlignLabel]]] = {}
    for t, u, label in a12.pairs:
        if label is SentAlignLabel.NOT_ALIGNED:
            continue
        onward.setdefault(t, []).append((u, label))
    best: dict[tuple[SentenceId, SentenceId], SentAlignLabel] = {}
    for s, t, first in a01.pairs:
        if first is SentAlignLabel.NOT_ALIGNED:
            continue
        for u, second in onward.get(t, ()):
            if first is SentAlignLabel.ALIGNED and second is SentAlignLabel.ALIGNED:
                label = SentAlignLabel.ALIGNED
            else:
                label = SentAlignLabel.PARTIAL
            prev = best.get((s, u))
            if prev is None or (prev is SentAlignLabel.PARTIAL and label is SentAlignLabel.ALIGNED):
                best[(s, u)] = label
    return SentenceAlignment(
        a01.src_version,
        a12.tgt_version,
        frozenset((s, u, label) for (s, u), label in best.items()),
    )


def tune_threshold(
    paras: ParaAlignment,
    src: DocVersion,
    tgt: DocVersion,
    metric: SentenceMetric,
    gold: SentenceAlignment,
    resolution: float = 0.01,
) -> float:
    """Grid-search the alignment threshold against a gold alignment,
    maximizing F1 at the given resolution (ties go to the lowest value)."""
    from .metrics import eval_alignment

    steps = int(round(1.0 / resolution))
    best_thr = 0.0
    best_f1 = -1.0
    for n in range(steps + 1):
        thr = n * resolution
        pred = align_sentences_directional(paras, src, tgt, metric, thr)
        back = align_sentences_directional(paras.reversed(), tgt, src, metric, thr)
        merged = merge_bidirectional(pred, back)
        f1 = eval_alignment(merged, gold, src, tgt).f1
        if f1 > best_f1:
            best_f1, best_thr = f1, thr
    return best_thr
