# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Levenshtein kernel. mlsmells.textsim selects this module when
the extension was built, otherwise falls back to the pure-Python twin in
_editdist_py (same contract, bit-identical results)."""

from cpython.mem cimport PyMem_Free, PyMem_Malloc


def levenshtein(str a, str b):
    """Edit distance (insert/delete/substitute, unit costs) between two strings."""
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    # One working row; iterate over a's characters.
    cdef Py_ssize_t* row = <Py_ssize_t*> PyMem_Malloc((lb + 1) * sizeof(Py_ssize_t))
    if row == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, prev, cur, best
    cdef Py_UCS4 ca
    try:
        for j in range(lb + 1):
            row[j] = j
        for i in range(la):
            ca = a[i]
            prev = row[0]
            row[0] = i + 1
            for j in range(1, lb + 1):
                cur = row[j]
                if ca == <Py_UCS4> b[j - 1]:
                    best = prev
                else:
                    best = prev + 1
                    if row[j - 1] + 1 < best:
                        best = row[j - 1] + 1
                    if cur + 1 < best:
                        best = cur + 1
                row[j] = best
                prev = cur
        return row[lb]
    finally:
        PyMem_Free(row)


def similarity(str a, str b):
    """Normalized similarity in [0, 1]: 1 - distance / max(len). Empty pair -> 1.0."""
    cdef Py_ssize_t longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - <double> levenshtein(a, b) / <double> longest
