import random

import pytest

from revkit.corpus import SentenceId
from revkit.para_align import ParaAlignment, align_paragraphs
from revkit.sent_align import (
    SentAlignLabel,
    SentenceAlignment,
    align_sentences_directional,
    auto_label_hybrid,
    derive_transitive,
    merge_bidirectional,
    tune_threshold,
)
from revkit.similarity import char_ngram_sim, jaccard

from helpers import alignment, doc, sent
from oracles import random_doc_pair

PARA_A = [
    "the red cat sat here",
    "a dog runs fast now",
    "qq ww ee rr tt",
]
PARA_B = [
    "the red cat sat there",
    "a dog walks fast now",
    "zz xx cc vv bb",
]
DIAG = ParaAlignment(frozenset({(0, 0)}))


def two_versions(a_paras=None, b_paras=None):
    return doc([a_paras or PARA_A], 1), doc([b_paras or PARA_B], 2)


def ids(version, *sent_indices):
    return [SentenceId(version, 0, n) for n in sent_indices]


def test_directional_toy_alignment():
    a, b = two_versions()
    got = align_sentences_directional(DIAG, a, b, jaccard, 0.4)
    a1, a2 = ids(1, 0, 1)
    b1, b2 = ids(2, 0, 1)
    assert got.pairs == {
        (a1, b1, SentAlignLabel.PARTIAL),
        (a2, b2, SentAlignLabel.PARTIAL),
    }


def test_directional_identical_labeled_aligned():
    a, b = two_versions(b_paras=list(PARA_A))
    got = align_sentences_directional(DIAG, a, b, jaccard, 0.4)
    assert all(label is SentAlignLabel.ALIGNED for _, _, label in got.pairs)
    assert len(got.pairs) == 3


def test_directional_threshold_above_one_empty():
    a, b = two_versions()
    got = align_sentences_directional(DIAG, a, b, jaccard, 1.01)
    assert got.pairs == frozenset()


def test_directional_tie_breaks_to_lowest_target():
    # padding sentences keep both paragraphs over the token minimum
    a, b = two_versions(
        a_paras=["the cat sat here", "pp oo ii mm ee ll rr"],
        b_paras=["the cat sat today", "the cat sat tonight", "zz yy xx ww vv uu"],
    )
    got = align_sentences_directional(DIAG, a, b, jaccard, 0.3)
    assert got.pairs == {(ids(1, 0)[0], ids(2, 0)[0], SentAlignLabel.PARTIAL)}


def test_directional_lowercase_surface_match_counts_as_aligned():
    # raws differ in spacing, so char3gram scores below 1, but the token
    # surfaces agree after lowercasing
    a, b = two_versions(
        a_paras=["The  Red Cat Sat Here", "mm nn bb vv cc xx"],
        b_paras=["the red cat sat here", "mm nn bb vv cc xx"],
    )
    got = align_sentences_directional(DIAG, a, b, char_ngram_sim, 0.5)
    labels = {s.sentence: label for s, _, label in got.pairs}
    assert labels[0] is SentAlignLabel.ALIGNED


def test_directional_allows_many_to_one():
    a, b = two_versions(
        a_paras=["the red cat sat here", "the red cat sat here"],
        b_paras=["the red cat sat here", "jj kk ll jq kw lr"],
    )
    got = align_sentences_directional(DIAG, a, b, jaccard, 0.4)
    assert len(got.pairs) == 2
    assert {t for _, t, _ in got.pairs} == {SentenceId(2, 0, 0)}


def test_directional_skips_skipped_sentences():
    a, b = two_versions(
        a_paras=["the red cat sat here", "too short", "a dog runs fast now"],
        b_paras=list(PARA_B),
    )
    got = align_sentences_directional(DIAG, a, b, jaccard, 0.4)
    assert {s.sentence for s, _, _ in got.pairs} == {0, 2}


def test_merge_intersects_directions():
    a1, b1 = SentenceId(1, 0, 0), SentenceId(2, 0, 0)
    a2, b2 = SentenceId(1, 0, 1), SentenceId(2, 0, 1)
    a3, b3 = SentenceId(1, 0, 2), SentenceId(2, 0, 2)
    fwd = SentenceAlignment(1, 2, frozenset({
        (a1, b1, SentAlignLabel.ALIGNED),
        (a2, b2, SentAlignLabel.PARTIAL),
    }))
    bwd = SentenceAlignment(2, 1, frozenset({
        (b1, a1, SentAlignLabel.ALIGNED),
        (b3, a3, SentAlignLabel.PARTIAL),
    }))
    got = merge_bidirectional(fwd, bwd)
    assert got.src_version == 1 and got.tgt_version == 2
    assert got.pairs == {(a1, b1, SentAlignLabel.ALIGNED)}


def test_merge_downgrades_on_label_disagreement():
    a1, b1 = SentenceId(1, 0, 0), SentenceId(2, 0, 0)
    fwd = SentenceAlignment(1, 2, frozenset({(a1, b1, SentAlignLabel.ALIGNED)}))
    bwd = SentenceAlignment(2, 1, frozenset({(b1, a1, SentAlignLabel.PARTIAL)}))
    assert merge_bidirectional(fwd, bwd).pairs == {(a1, b1, SentAlignLabel.PARTIAL)}


def test_merge_requires_matching_versions():
    empty = frozenset()
    with pytest.raises(ValueError, match="directions do not match"):
        merge_bidirectional(SentenceAlignment(1, 2, empty), SentenceAlignment(1, 2, empty))


def test_merge_of_mirrored_directions_is_identity():
    a, b = two_versions()
    fwd = align_sentences_directional(DIAG, a, b, jaccard, 0.4)
    bwd = align_sentences_directional(DIAG.reversed(), b, a, jaccard, 0.4)
    merged = merge_bidirectional(fwd, bwd)
    assert merged.pairs == fwd.pairs  # symmetric toy case
    # idempotent under re-merge with its own mirror
    mirror = SentenceAlignment(2, 1, frozenset((t, s, l) for s, t, l in merged.pairs))
    assert merge_bidirectional(merged, mirror).pairs == merged.pairs


def test_positive_pairs_and_sorting():
    a1, b1 = SentenceId(1, 0, 0), SentenceId(2, 0, 0)
    a2, b2 = SentenceId(1, 0, 1), SentenceId(2, 0, 1)
    al = SentenceAlignment(1, 2, frozenset({
        (a2, b2, SentAlignLabel.PARTIAL),
        (a1, b1, SentAlignLabel.NOT_ALIGNED),
    }))
    assert al.positive_pairs() == {(a2, b2)}
    assert al.sorted_positive() == [(a2, b2, SentAlignLabel.PARTIAL)]
    assert al.labels()[(a1, b1)] is SentAlignLabel.NOT_ALIGNED


def test_validate_against_checks_ids():
    a, b = two_versions()
    good = alignment(1, 2, [((0, 0), (0, 0), None)])
    good.validate_against(a, b)
    with pytest.raises(ValueError):
        alignment(1, 2, [((0, 9), (0, 0), None)]).validate_against(a, b)
    with pytest.raises(ValueError, match="versions"):
        good.validate_against(b, a)


# ---------------------------------------------------------------------------
# hybrid routing

def test_hybrid_partition_bands():
    yes = (sent("the red cat sat here today"), sent("the red cat sat here tonight"))
    no = (sent("the red cat sat here today"), sent("a dog runs fast now there"))
    mid = (sent("the red cat sat here"), sent("the red cat sat there"))
    got = auto_label_hybrid([yes, no, mid])
    assert got.auto_aligned == (yes,)
    assert got.auto_not_aligned == (no,)
    assert got.needs_human == (mid,)


def test_hybrid_bounds_are_strict():
    # jaccard exactly 0.7 and exactly 0.2 both go to the human band
    at_upper = (
        sent("aa bb cc dd ee ff gg"),
        sent("aa bb cc dd ee ff gg hh ii jj"),
    )
    at_lower = (sent("aa bb"), sent("aa cc dd ee"))
    assert jaccard(*at_upper) == 0.7
    assert jaccard(*at_lower) == 0.2
    got = auto_label_hybrid([at_upper, at_lower])
    assert got.needs_human == (at_upper, at_lower)
    assert not got.auto_aligned and not got.auto_not_aligned


# ---------------------------------------------------------------------------
# transitive composition

def test_transitive_chain():
    a1, b1, c1 = SentenceId(1, 0, 0), SentenceId(2, 0, 0), SentenceId(3, 0, 0)
    a2, b2 = SentenceId(1, 0, 1), SentenceId(2, 0, 1)
    a01 = SentenceAlignment(1, 2, frozenset({
        (a1, b1, SentAlignLabel.ALIGNED),
        (a2, b2, SentAlignLabel.ALIGNED),  # dead end: b2 goes nowhere
    }))
    a12 = SentenceAlignment(2, 3, frozenset({(b1, c1, SentAlignLabel.PARTIAL)}))
    got = derive_transitive(a01, a12)
    assert got.src_version == 1 and got.tgt_version == 3
    assert got.pairs == {(a1, c1, SentAlignLabel.PARTIAL)}


def test_transitive_aligned_needs_both_hops_aligned():
    a1, b1, c1 = SentenceId(1, 0, 0), SentenceId(2, 0, 0), SentenceId(3, 0, 0)
    both = derive_transitive(
        SentenceAlignment(1, 2, frozenset({(a1, b1, SentAlignLabel.ALIGNED)})),
        SentenceAlignment(2, 3, frozenset({(b1, c1, SentAlignLabel.ALIGNED)})),
    )
    assert both.pairs == {(a1, c1, SentAlignLabel.ALIGNED)}


def test_transitive_best_path_wins():
    a1 = SentenceId(1, 0, 0)
    b1, b2 = SentenceId(2, 0, 0), SentenceId(2, 0, 1)
    c1 = SentenceId(3, 0, 0)
    a01 = SentenceAlignment(1, 2, frozenset({
        (a1, b1, SentAlignLabel.PARTIAL),
        (a1, b2, SentAlignLabel.ALIGNED),
    }))
    a12 = SentenceAlignment(2, 3, frozenset({
        (b1, c1, SentAlignLabel.ALIGNED),
        (b2, c1, SentAlignLabel.ALIGNED),
    }))
    assert derive_transitive(a01, a12).pairs == {(a1, c1, SentAlignLabel.ALIGNED)}


def test_transitive_version_mismatch():
    empty = frozenset()
    with pytest.raises(ValueError, match="chain"):
        derive_transitive(SentenceAlignment(1, 2, empty), SentenceAlignment(3, 4, empty))


def test_transitive_empty_is_empty():
    got = derive_transitive(
        SentenceAlignment(1, 2, frozenset()), SentenceAlignment(2, 3, frozenset())
    )
    assert got.pairs == frozenset()


# ---------------------------------------------------------------------------
# threshold behaviour

def test_threshold_monotone_on_random_docs():
    rng = random.Random(19)
    for _ in range(10):
        a, b = random_doc_pair(rng)
        paras = align_paragraphs(a, b)
        loose = align_sentences_directional(paras, a, b, jaccard, 0.2)
        tight = align_sentences_directional(paras, a, b, jaccard, 0.6)
        assert {(s, t) for s, t, _ in tight.pairs} <= {(s, t) for s, t, _ in loose.pairs}


def test_tune_threshold_picks_lowest_best():
    a, b = two_versions()
    gold = alignment(
        1, 2, [((0, 0), (0, 0), SentAlignLabel.PARTIAL), ((0, 1), (0, 1), SentAlignLabel.PARTIAL)]
    )
    got = tune_threshold(DIAG, a, b, jaccard, gold)
    # every grid point up to 2/3 gives a perfect F1 (the merge already
    # kills the zero-score stragglers), so the tie goes to 0.0
    assert got == pytest.approx(0.0)
