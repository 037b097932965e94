"""Catalog of ML-specific code smells and the rule-based detectors."""

from mlsmells.detectors.catalog import (
    PIPELINE_STAGES,
    SCOPE_EXPRESSION,
    SCOPE_FILE,
    SCOPE_LOOP,
    SCOPE_STATEMENT,
    SmellKind,
    catalog,
    kind_by_id,
)
from mlsmells.detectors.config import ALL_KIND_IDS, DetectorConfig
from mlsmells.detectors.engine import (
    DetectionReport,
    FileReport,
    ParseErrorEntry,
    SmellInstance,
    analyze_source,
    detect_file,
    detect_snapshot,
)

__all__ = [
    "ALL_KIND_IDS",
    "DetectionReport",
    "DetectorConfig",
    "FileReport",
    "ParseErrorEntry",
    "PIPELINE_STAGES",
    "SCOPE_EXPRESSION",
    "SCOPE_FILE",
    "SCOPE_LOOP",
    "SCOPE_STATEMENT",
    "SmellInstance",
    "SmellKind",
    "analyze_source",
    "catalog",
    "detect_file",
    "detect_snapshot",
    "kind_by_id",
]
