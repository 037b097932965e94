"""Pure-Python twin of the compiled Levenshtein kernel.

Kept algorithmically identical to _editdist.pyx so that the two backends are
interchangeable; tests assert exact agreement on random inputs.
"""

from __future__ import annotations


def levenshtein(a: str, b: str) -> int:
    """Edit distance (insert/delete/substitute, unit costs) between two strings."""
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    row = list(range(lb + 1))
    for i in range(la):
        ca = a[i]
        prev = row[0]
        row[0] = i + 1
        for j in range(1, lb + 1):
            cur = row[j]
            if ca == b[j - 1]:
                best = prev
            else:
                best = min(prev, row[j - 1], cur) + 1
            row[j] = best
            prev = cur
    return row[lb]


def similarity(a: str, b: str) -> float:
    """Normalized similarity in [0, 1]: 1 - distance / max(len). Empty pair -> 1.0."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest
