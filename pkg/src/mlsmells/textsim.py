"""Snippet similarity used to match smell instances across commits.

The Levenshtein inner loop dominates lifecycle runs on long histories, so a
compiled backend is preferred when the extension was built; otherwise the
pure-Python twin is used. Both produce identical results.
"""

from __future__ import annotations

try:
    from mlsmells._kernels._editdist import levenshtein, similarity

    BACKEND = "compiled"
except ImportError:  # extension not built; fall back to pure Python
    from mlsmells._kernels._editdist_py import levenshtein, similarity

    BACKEND = "pure-python"

__all__ = ["levenshtein", "similarity", "BACKEND"]
