"""Pairwise Jaccard kernels for the alignment hot path.

Paragraph alignment needs the Jaccard score of every sentence pair across
two document versions, which dominates runtime on full-length documents.
Sentences are encoded once as sorted unique vocabulary-id arrays and the
pairwise matrix is filled either by a numba-compiled two-pointer kernel
or by a pure-numpy incidence-matrix product.  Set REVKIT_BACKEND=numpy
(or =numba) to force the choice; the default is numba when importable.
Both paths produce identical matrices.
"""
from __future__ import annotations

import logging
import os
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

try:
    import numba as nb

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    nb = None
    HAS_NUMBA = False

BACKENDS = ("numba", "numpy")

_njit_kwargs = {"nogil": True, "fastmath": False, "cache": False}


def active_backend() -> str:
    """Backend chosen by REVKIT_BACKEND, falling back to numpy when numba
    is requested but unavailable."""
    forced = os.environ.get("REVKIT_BACKEND", "").strip().lower()
    if forced and forced not in BACKENDS:
        raise ValueError(f"REVKIT_BACKEND must be one of {BACKENDS}, got {forced!r}")
    if forced == "numpy":
        return "numpy"
    if forced == "numba" and not HAS_NUMBA:
        log.warning("REVKIT_BACKEND=numba but numba is not importable; using numpy")
        return "numpy"
    if forced == "numba":
        return "numba"
    return "numba" if HAS_NUMBA else "numpy"


def encode_sets(
    sets: Sequence[frozenset[str]], vocab: dict[str, int]
) -> tuple[np.ndarray, np.ndarray]:
    """Encode token sets as one flat id array plus offsets (ids sorted and
    unique within each set); vocab is extended in place."""
    offsets = np.zeros(len(sets) + 1, dtype=np.int64)
    chunks: list[np.ndarray] = []
    for k, s in enumerate(sets):
        ids = sorted(vocab.setdefault(tok, len(vocab)) for tok in s)
        chunks.append(np.asarray(ids, dtype=np.int64))
        offsets[k + 1] = offsets[k] + len(ids)
    flat = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return flat, offsets


def _jaccard_fill_py(ids_a, offs_a, ids_b, offs_b, out):  # pragma: no cover - numba source
    n = offs_a.shape[0] - 1
    m = offs_b.shape[0] - 1
    for i in range(n):
        a0 = offs_a[i]
        a1 = offs_a[i + 1]
        for j in range(m):
            b0 = offs_b[j]
            b1 = offs_b[j + 1]
            p = a0
            q = b0
            inter = 0
            while p < a1 and q < b1:
                x = ids_a[p]
                y = ids_b[q]
                if x == y:
                    inter += 1
                    p += 1
                    q += 1
                elif x < y:
                    p += 1
                else:
                    q += 1
            union = (a1 - a0) + (b1 - b0) - inter
            if union == 0:
                out[i, j] = 1.0
            else:
                out[i, j] = inter / union


if HAS_NUMBA:
    _jaccard_fill_numba = nb.njit(**_njit_kwargs)(_jaccard_fill_py)
else:  # pragma: no cover
    _jaccard_fill_numba = None


def _jaccard_fill_numpy(ids_a, offs_a, ids_b, offs_b, out) -> None:
    n = offs_a.shape[0] - 1
    m = offs_b.shape[0] - 1
    vocab_size = 0
    if ids_a.size:
        vocab_size = int(ids_a.max()) + 1
    if ids_b.size:
        vocab_size = max(vocab_size, int(ids_b.max()) + 1)
    A = np.zeros((n, vocab_size), dtype=np.float64)
    B = np.zeros((m, vocab_size), dtype=np.float64)
    A[np.repeat(np.arange(n), np.diff(offs_a)), ids_a] = 1.0
    B[np.repeat(np.arange(m), np.diff(offs_b)), ids_b] = 1.0
    inter = A @ B.T
    sizes_a = np.diff(offs_a).astype(np.float64)
    sizes_b = np.diff(offs_b).astype(np.float64)
    union = sizes_a[:, None] + sizes_b[None, :] - inter
    np.divide(inter, union, out=out, where=union > 0)
    out[union == 0] = 1.0


def jaccard_matrix(
    sets_a: Sequence[frozenset[str]],
    sets_b: Sequence[frozenset[str]],
    backend: str | None = None,
) -> np.ndarray:
    """Jaccard similarity of every set pair, as a len(a) x len(b) matrix.

    Empty-vs-empty pairs score 1.0, matching the scalar metric.
    """
    vocab: dict[str, int] = {}
    ids_a, offs_a = encode_sets(sets_a, vocab)
    ids_b, offs_b = encode_sets(sets_b, vocab)
    out = np.zeros((len(sets_a), len(sets_b)), dtype=np.float64)
    chosen = backend or active_backend()
    if chosen not in BACKENDS:
        raise ValueError(f"unknown backend {chosen!r}")
    if chosen == "numba" and _jaccard_fill_numba is not None:
        _jaccard_fill_numba(ids_a, offs_a, ids_b, offs_b, out)
    else:
        _jaccard_fill_numpy(ids_a, offs_a, ids_b, offs_b, out)
    return out
