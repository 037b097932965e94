"""mlsmells: ML-specific code smell detection and lifecycle mining.

Detects 14 smell kinds in Python ML code, walks git histories to find when
each instance was introduced and removed, and ships the sampling /
statistics machinery (Wilcoxon, Friedman, Cliff's delta, Cohen's kappa)
used to analyze the results.
"""

__version__ = "0.1.0"
