"""String similarity primitives behind the disambiguation filters.

Three metrics: edit distance, longest common subsequence and a
junk-aware contiguous-block matcher (Ratcliff/Obershelp style).
All operate on plain strings; normalization happens upstream.
"""

from __future__ import annotations


def levenshtein_distance(a: str, b: str) -> int:
    """Minimum number of single-character insert/delete/substitute edits."""
    if a == b:
        return 0
    # a shared prefix or suffix never changes the distance; strip it first
    lo = 0
    hi_a, hi_b = len(a), len(b)
    while lo < hi_a and lo < hi_b and a[lo] == b[lo]:
        lo += 1
    while hi_a > lo and hi_b > lo and a[hi_a - 1] == b[hi_b - 1]:
        hi_a -= 1
        hi_b -= 1
    a = a[lo:hi_a]
    b = b[lo:hi_b]
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(b) > len(a):
        a, b = b, a
    # two-row DP, a indexes rows
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        append = cur.append
        left = i
        for j, cb in enumerate(b, start=1):
            diag = prev[j - 1]
            if ca != cb:
                diag += 1
            v = prev[j] + 1
            if left + 1 < v:
                v = left + 1
            if diag < v:
                v = diag
            append(v)
            left = v
        prev = cur
    return prev[-1]


def lcs_length(a: str, b: str) -> int:
    """Length of the longest (not necessarily contiguous) common subsequence."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def _longest_block(a, b, alo, ahi, blo, bhi, junk):
    """Longest matching contiguous block of non-junk characters.

    Ties broken towards the smallest start in ``a``, then in ``b``.
    Returns (i, j, size).
    """
    best_i, best_j, best_size = alo, blo, 0
    j2len: dict[int, int] = {}
    for i in range(alo, ahi):
        newj2len: dict[int, int] = {}
        ca = a[i]
        if ca not in junk:
            for j in range(blo, bhi):
                if b[j] == ca:
                    k = j2len.get(j - 1, 0) + 1
                    newj2len[j] = k
                    if k > best_size:
                        best_i, best_j, best_size = i - k + 1, j - k + 1, k
        j2len = newj2len
    return best_i, best_j, best_size


def matching_block_total(a: str, b: str, junk: frozenset | set = frozenset()) -> int:
    """Total length M of matching blocks, longest-first recursive decomposition."""
    total = 0
    stack = [(0, len(a), 0, len(b))]
    while stack:
        alo, ahi, blo, bhi = stack.pop()
        i, j, size = _longest_block(a, b, alo, ahi, blo, bhi, junk)
        if size:
            total += size
            stack.append((alo, i, blo, j))
            stack.append((i + size, ahi, j + size, bhi))
    return total


def sequence_matcher_ratio(a: str, b: str, junk: frozenset | set = frozenset()) -> float:
    """2M / (|a| + |b|) over junk-free contiguous matching blocks.

    Both strings empty -> 1.0 by convention.
    """
    if not a and not b:
        return 1.0
    m = matching_block_total(a, b, junk)
    return 2.0 * m / (len(a) + len(b))
