"""Greedy shortest-edit-script diff over token sequences.

The forward pass explores edit depths d = 0, 1, ... and records the
furthest x reached on each diagonal; backtracking through those
snapshots recovers a minimal script under unit insert/delete cost, so
the kept tokens always form a longest common subsequence.  Scripts are
canonicalised so that within every changed region deletions come before
insertions, which makes the output deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class DiffRun:
    """One maximal run of the script; keep consumes both sides, delete
    consumes only [a_start, a_end), insert only [b_start, b_end)."""

    op: str  # "keep" | "delete" | "insert"
    a_start: int
    a_end: int
    b_start: int
    b_end: int

    def __post_init__(self) -> None:
        if self.op not in ("keep", "delete", "insert"):
            raise ValueError(f"bad op {self.op!r}")


def myers_diff(a: Sequence, b: Sequence) -> list[DiffRun]:
    """Minimal edit script between two sequences (equality via ==)."""
    return _runs_from_ops(_shortest_ops(a, b))


def script_cost(script: Sequence[DiffRun]) -> int:
    """Number of inserted plus deleted tokens."""
    cost = 0
    for r in script:
        if r.op == "delete":
            cost += r.a_end - r.a_start
        elif r.op == "insert":
            cost += r.b_end - r.b_start
    return cost


def _shortest_ops(a: Sequence, b: Sequence) -> list[str]:
    n, m = len(a), len(b)
    if n == 0 and m == 0:
        return []
    v = {1: 0}
    trace: list[dict[int, int]] = []
    for d in range(n + m + 1):
        trace.append(dict(v))
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v.get(k - 1, 0) < v.get(k + 1, 0)):
                x = v.get(k + 1, 0)
            else:
                x = v.get(k - 1, 0) + 1
            y = x - k
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            v[k] = x
            if x >= n and y >= m:
                return _backtrack(trace, d, n, m)
    raise AssertionError("diff failed to terminate")  # pragma: no cover


def _backtrack(trace: list[dict[int, int]], d_final: int, n: int, m: int) -> list[str]:
    # Walk from (n, m) back to (0, 0).  trace[d] holds the diagonal
    # frontier as it stood before depth d ran, i.e. the depth d-1 result,
    # which is exactly what the forward pass consulted when choosing the
    # move at depth d.
    ops: list[str] = []
    x, y = n, m
    for d in range(d_final, 0, -1):
        v = trace[d]
        k = x - y
        if k == -d or (k != d and v.get(k - 1, 0) < v.get(k + 1, 0)):
            prev_k = k + 1
        else:
            prev_k = k - 1
        prev_x = v.get(prev_k, 0)
        prev_y = prev_x - prev_k
        while x > prev_x and y > prev_y:
            ops.append("K")
            x -= 1
            y -= 1
        if prev_k == k + 1:
            ops.append("I")
            y -= 1
        else:
            ops.append("D")
            x -= 1
    while x > 0 and y > 0:
        ops.append("K")
        x -= 1
        y -= 1
    if x != 0 or y != 0:  # pragma: no cover - backtrack must land at origin
        raise AssertionError("diff backtrack did not reach the origin")
    ops.reverse()
    return ops


def _runs_from_ops(ops: Sequence[str]) -> list[DiffRun]:
    runs: list[DiffRun] = []
    a_pos = b_pos = 0
    i = 0
    while i < len(ops):
        if ops[i] == "K":
            j = i
            while j < len(ops) and ops[j] == "K":
                j += 1
            n = j - i
            runs.append(DiffRun("keep", a_pos, a_pos + n, b_pos, b_pos + n))
            a_pos += n
            b_pos += n
            i = j
        else:
            j = i
            dels = ins = 0
            while j < len(ops) and ops[j] != "K":
                if ops[j] == "D":
                    dels += 1
                else:
                    ins += 1
                j += 1
            # deletions reported before insertions within the region
            if dels:
                runs.append(DiffRun("delete", a_pos, a_pos + dels, b_pos, b_pos))
            if ins:
                runs.append(DiffRun("insert", a_pos + dels, a_pos + dels, b_pos, b_pos + ins))
            a_pos += dels
            b_pos += ins
            i = j
    return runs
