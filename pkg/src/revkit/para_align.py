"""Paragraph alignment between two document versions.

A bidirectional similarity tensor is built from sentence-level Jaccard
scores, then two threshold-gated argmax passes pick paragraph pairs.
The two passes deliberately cross directions: each argmaxes one of the
two similarity matrices but applies its thresholds to the other.  That
asymmetry is part of the published behaviour of this procedure and must
not be "fixed".
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import DocVersion, Paragraph
from .kernels import jaccard_matrix


@dataclass(frozen=True)
class Thresholds:
    """Gates for the two alignment passes.

    tau1/tau3 bound the similarity tests, tau2/tau4 bound the relative
    position distance in the first and second pass respectively.
    """

    tau1: float = 0.28
    tau2: float = 0.15
    tau3: float = 0.85
    tau4: float = 0.2

    def __post_init__(self) -> None:
        for name in ("tau1", "tau2", "tau3", "tau4"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class ParaSimTensor:
    """Paragraph similarity in both directions over the non-skipped
    paragraphs of two versions.

    sim1[i][j] averages, over the sentences of source paragraph i, the
    best Jaccard score against any sentence of target paragraph j; sim2
    swaps the roles (average over target paragraph j's sentences, max
    over source paragraph i's).  Rows/columns follow src_paragraphs and
    tgt_paragraphs, which map back to original paragraph indices.
    """

    sim1: np.ndarray
    sim2: np.ndarray
    src_paragraphs: tuple[int, ...]
    tgt_paragraphs: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.src_paragraphs)

    @property
    def l(self) -> int:
        return len(self.tgt_paragraphs)


@dataclass(frozen=True)
class ParaAlignment:
    """Aligned paragraph pairs, in original paragraph indices."""

    pairs: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def reversed(self) -> "ParaAlignment":
        return ParaAlignment(frozenset((j, i) for i, j in self.pairs))


def _sentence_sets(paragraphs: tuple[Paragraph, ...]):
    sets: list[frozenset[str]] = []
    bounds: list[tuple[int, int]] = []
    for p in paragraphs:
        start = len(sets)
        for s in p.sentences:
            if not s.skipped:
                sets.append(s.lower_token_set())
        bounds.append((start, len(sets)))
    return sets, bounds


def compute_sim_tensor(src: DocVersion, tgt: DocVersion, backend: str | None = None) -> ParaSimTensor:
    """Build both similarity matrices over the non-skipped paragraphs.

    Skipped sentences take part in neither the average nor the max; a
    paragraph whose sentences are all skipped yields a zero row/column.
    """
    if not src.paragraphs or not tgt.paragraphs:
        raise ValueError("cannot align an empty version")
    sp = src.alignable_paragraphs()
    tp = tgt.alignable_paragraphs()
    k, l = len(sp), len(tp)
    sim1 = np.zeros((k, l), dtype=np.float64)
    sim2 = np.zeros((k, l), dtype=np.float64)
    src_sets, src_bounds = _sentence_sets(sp)
    tgt_sets, tgt_bounds = _sentence_sets(tp)
    if src_sets and tgt_sets:
        matrix = jaccard_matrix(src_sets, tgt_sets, backend=backend)
        for i, (r0, r1) in enumerate(src_bounds):
            if r0 == r1:
                continue
            for j, (c0, c1) in enumerate(tgt_bounds):
                if c0 == c1:
                    continue
                block = matrix[r0:r1, c0:c1]
                sim1[i, j] = block.max(axis=1).mean()
                sim2[i, j] = block.max(axis=0).mean()
    return ParaSimTensor(
        sim1=sim1,
        sim2=sim2,
        src_paragraphs=tuple(p.index for p in sp),
        tgt_paragraphs=tuple(p.index for p in tp),
    )


def _rel_dist(i: int, k: int, j: int, l: int) -> float:
    # relative-position distance over 0-based positions in the
    # non-skipped paragraph lists
    return abs(i / k - j / l)


def align_paragraphs(
    src: DocVersion,
    tgt: DocVersion,
    thresholds: Thresholds = Thresholds(),
    backend: str | None = None,
) -> ParaAlignment:
    """Two-pass thresholded-argmax paragraph alignment.

    Pass one walks target paragraphs and argmaxes sim2 over sources but
    gates on sim1; pass two walks sources, argmaxes sim1 over targets and
    gates on sim2.  A pair is added when the gated score exceeds tau1 and
    the relative positions differ by less than tau2 (pass one) or tau4
    (pass two), or unconditionally when it exceeds tau3.  Argmax ties
    break to the lowest index.  Returned pairs use original paragraph
    indices; skipped paragraphs never appear.
    """
    t = compute_sim_tensor(src, tgt, backend=backend)
    k, l = t.k, t.l
    if k == 0 or l == 0:
        return ParaAlignment()
    chosen: set[tuple[int, int]] = set()
    for j in range(l):
        i_max = int(np.argmax(t.sim2[:, j]))
        if t.sim1[i_max, j] > thresholds.tau1 and _rel_dist(i_max, k, j, l) < thresholds.tau2:
            chosen.add((i_max, j))
        elif t.sim1[i_max, j] > thresholds.tau3:
            chosen.add((i_max, j))
    for i in range(k):
        j_max = int(np.argmax(t.sim1[i, :]))
        if t.sim2[i, j_max] > thresholds.tau1 and _rel_dist(i, k, j_max, l) < thresholds.tau4:
            chosen.add((i, j_max))
        elif t.sim2[i, j_max] > thresholds.tau3:
            chosen.add((i, j_max))
    return ParaAlignment(
        frozenset((t.src_paragraphs[i], t.tgt_paragraphs[j]) for i, j in chosen)
    )
