"""Performance kernels: a compiled Cython edit-distance core with a
pure-Python fallback. Use mlsmells.textsim, which picks the backend."""
