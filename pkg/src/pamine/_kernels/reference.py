"""Pure-Python kernels: phrase-selection search and leader clustering.

These are the fallback twins of the compiled ``_speedups`` extension. The
two implementations must stay behaviourally identical: the selection search
is pure integer arithmetic, and the clustering loop performs its float
operations in the same order as the C code (sequential dot products, no
vectorized reductions) so results match bit for bit.
"""
from __future__ import annotations

import math

BACKEND_NAME = "pure-python"


def solve_selection(weights, type_rows, same_head, invalid, k, penalty, n_types=10):
    """Exact maximizer of the phrase-selection objective.

    Maximizes ``sum(w[i] * x[i]) - penalty * (uncovered types
    + same-headword chosen pairs + chosen invalid singles)`` subject to
    exactly ``k`` of the ``x`` being 1, by depth-first branch and bound over
    inclusion decisions. Ties are broken toward the lexicographically
    smallest chosen index set (include-first search order guarantees the
    first incumbent of a given score wins).

    Parameters are plain sequences: ``weights`` ints, ``type_rows`` a list
    of per-phrase iterables of type indices in ``range(n_types)``,
    ``same_head`` an NxN 0/1 matrix, ``invalid`` 0/1 flags. A type no phrase
    carries still counts as uncovered. Returns ``(objective, chosen_tuple)``.
    """
    n = len(weights)
    if not 1 <= k <= n:
        raise ValueError(f"infeasible selection size k={k} for n={n}")
    w = [int(x) for x in weights]
    inv = [int(x) for x in invalid]
    same = [[int(v) for v in row] for row in same_head]
    type_bits = [0] * n
    for i, row in enumerate(type_rows):
        for t in row:
            if not 0 <= int(t) < n_types:
                raise ValueError(f"type index {t} outside range({n_types})")
            type_bits[i] |= 1 << int(t)
    full_mask = (1 << n_types) - 1

    # suffix_top[p][c]: sum of the c largest weights among indices >= p
    suffix_top = [[0] * (k + 1) for _ in range(n + 1)]
    tail: list[int] = []
    for p in range(n - 1, -1, -1):
        # insert w[p] keeping tail sorted descending
        lo, hi = 0, len(tail)
        while lo < hi:
            mid = (lo + hi) // 2
            if tail[mid] > w[p]:
                lo = mid + 1
            else:
                hi = mid
        tail.insert(lo, w[p])
        acc = 0
        row = suffix_top[p]
        for c in range(1, k + 1):
            if c <= len(tail):
                acc += tail[c - 1]
            row[c] = acc

    best_obj = None
    best_set: tuple[int, ...] = ()
    chosen: list[int] = []

    def dfs(pos: int, count: int, wsum: int, locked: int, cover: int):
        nonlocal best_obj, best_set
        if count == k:
            uncovered = (full_mask & ~cover).bit_count()
            obj = wsum - penalty * (locked + uncovered)
            if best_obj is None or obj > best_obj:
                best_obj = obj
                best_set = tuple(chosen)
            return
        if n - pos < k - count:
            return
        bound = wsum + suffix_top[pos][k - count] - penalty * locked
        if best_obj is not None and bound <= best_obj:
            return
        # include pos
        added = inv[pos]
        row = same[pos]
        for j in chosen:
            added += row[j]
        chosen.append(pos)
        dfs(pos + 1, count + 1, wsum + w[pos], locked + added, cover | type_bits[pos])
        chosen.pop()
        # exclude pos
        dfs(pos + 1, count, wsum, locked, cover)

    dfs(0, 0, 0, 0, 0)
    assert best_obj is not None
    return best_obj, best_set


def leader_cluster(vectors, tau: float) -> list[int]:
    """Greedy leader clustering over unit-agnostic vectors.

    Iterates rows in order; each row joins the first existing cluster whose
    centroid has cosine >= tau, updating that centroid, else starts a new
    cluster. Rows must have non-zero norm. Returns the cluster id per row
    (ids numbered by creation order).
    """
    rows = [list(map(float, v)) for v in vectors]
    if not rows:
        return []
    dim = len(rows[0])
    sums: list[list[float]] = []
    norms: list[float] = []
    assignment: list[int] = []
    for vec in rows:
        acc = 0.0
        for x in vec:
            acc += x * x
        vnorm = math.sqrt(acc)
        if vnorm == 0.0:
            raise ValueError("zero-norm vector cannot be clustered")
        target = -1
        for c in range(len(sums)):
            csum = sums[c]
            dot = 0.0
            for j in range(dim):
                dot += vec[j] * csum[j]
            cos = dot / (vnorm * norms[c])
            if cos >= tau:
                target = c
                break
        if target < 0:
            sums.append(list(vec))
            norms.append(vnorm)
            assignment.append(len(sums) - 1)
        else:
            csum = sums[target]
            for j in range(dim):
                csum[j] += vec[j]
            acc = 0.0
            for x in csum:
                acc += x * x
            norms[target] = math.sqrt(acc)
            assignment.append(target)
    return assignment
