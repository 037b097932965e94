"""Per-file rule evaluation and snapshot-level aggregation."""

from __future__ import annotations

import ast
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from mlsmells.detectors.catalog import SCOPE_FILE, catalog, kind_by_id
from mlsmells.detectors.config import DetectorConfig
from mlsmells.detectors.rules import HIT_FILE, RULES, RuleContext
from mlsmells.pysource import (
    BindingTable,
    ImportTable,
    SourceFile,
    SyntaxTree,
    bind_variables,
    classify_ml_file,
    parse_source,
    resolve_imports,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SmellInstance:
    kind: str
    file: str
    line: int
    snippet: str
    commit: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "file": self.file,
            "line": self.line,
            "snippet": self.snippet,
            "commit": self.commit,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SmellInstance":
        return cls(**data)


@dataclass
class FileReport:
    path: str
    loc: int
    instances: list[SmellInstance] = field(default_factory=list)


@dataclass
class ParseErrorEntry:
    path: str
    line: int
    message: str


@dataclass
class DetectionReport:
    project: str = ""
    commit: str = ""
    files: list[FileReport] = field(default_factory=list)  # ML files only
    total_files: int = 0
    ml_files: int = 0
    total_loc: int = 0
    parse_errors: list[ParseErrorEntry] = field(default_factory=list)

    @property
    def instances(self) -> list[SmellInstance]:
        return [inst for f in self.files for inst in f.instances]

    def per_kind_counts(self) -> dict[str, int]:
        counts = {k.id: 0 for k in catalog()}
        for inst in self.instances:
            counts[inst.kind] += 1
        return counts

    def to_dict(self) -> dict:
        return {
            "project": self.project,
            "commit": self.commit,
            "total_files": self.total_files,
            "ml_files": self.ml_files,
            "total_loc": self.total_loc,
            "per_kind": self.per_kind_counts(),
            "files": [
                {
                    "path": f.path,
                    "loc": f.loc,
                    "instances": [i.to_dict() for i in f.instances],
                }
                for f in self.files
            ],
            "parse_errors": [
                {"path": e.path, "line": e.line, "message": e.message}
                for e in self.parse_errors
            ],
        }


def detect_file(
    tree: SyntaxTree,
    imports: ImportTable,
    bindings: BindingTable,
    config: DetectorConfig | None = None,
    commit: str = "",
) -> list[SmellInstance]:
    """Run every enabled rule on one parsed file.

    Instances come back sorted by (line, kind id); rule crashes are logged
    as diagnostics and never abort the file.
    """
    config = config or DetectorConfig()
    ctx = RuleContext(tree=tree, imports=imports, bindings=bindings, config=config)
    seen: set[tuple[str, int]] = set()
    instances: list[SmellInstance] = []
    for kind_id in sorted(config.enabled):
        rule = RULES[kind_id]
        try:
            hits = rule(ctx)
        except Exception:
            log.exception("rule %s crashed on %s; skipping rule", kind_id, tree.path)
            continue
        for hit in hits:
            if hit is HIT_FILE or kind_by_id(kind_id).scope == SCOPE_FILE:
                line, snippet = 1, tree.line_text(1)
            else:
                node: ast.AST = hit
                line, snippet = node.lineno, tree.snippet(node)
            key = (kind_id, line)
            if key in seen:
                continue
            seen.add(key)
            instances.append(
                SmellInstance(kind=kind_id, file=tree.path, line=line, snippet=snippet, commit=commit)
            )
    instances.sort(key=lambda i: (i.line, i.kind))
    return instances


def analyze_source(path: str, content: str, config: DetectorConfig, commit: str = "") -> dict:
    """Classify + detect one file; returns a plain dict (picklable for worker pools).

    Keys: path, loc, ml, instances (list of dicts), parse_error (None or
    {line, message}).
    """
    source = SourceFile.from_text(path, content)
    result: dict = {"path": source.path, "loc": source.loc, "ml": False, "instances": [], "parse_error": None}
    try:
        tree = parse_source(source)
    except SyntaxError as exc:
        result["parse_error"] = {"line": exc.lineno or 0, "message": exc.msg or "syntax error"}
        return result
    imports = resolve_imports(tree)
    if not classify_ml_file(imports, frozenset(config.ml_libraries)):
        return result
    result["ml"] = True
    bindings = bind_variables(tree, imports, frozenset(config.estimators))
    result["instances"] = [
        i.to_dict() for i in detect_file(tree, imports, bindings, config, commit=commit)
    ]
    return result


def _analyze_for_pool(args: tuple[str, str, dict, str]) -> dict:
    path, content, config_dict, commit = args
    return analyze_source(path, content, DetectorConfig.from_dict(config_dict), commit)


def detect_snapshot(
    checkout: str | Path,
    config: DetectorConfig | None = None,
    project: str = "",
    commit: str = "",
    jobs: int = 1,
) -> DetectionReport:
    """Detect smells in every ML-classified .py file under a checkout.

    Non-ML files are filtered out before any rule runs; unreadable files are
    logged and skipped. Results are ordered by path regardless of `jobs`.
    """
    config = config or DetectorConfig()
    root = Path(checkout)
    report = DetectionReport(project=project, commit=commit)

    sources: list[tuple[str, str]] = []
    for path in sorted(root.rglob("*.py")):
        if not path.is_file():
            continue
        rel = path.relative_to(root).as_posix()
        try:
            content = path.read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            log.warning("skipping unreadable file %s: %s", rel, exc)
            continue
        sources.append((rel, content))

    if jobs > 1 and len(sources) > 1:
        config_dict = config.to_dict()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(_analyze_for_pool, [(p, c, config_dict, commit) for p, c in sources])
            )
    else:
        results = [analyze_source(p, c, config, commit) for p, c in sources]

    results.sort(key=lambda r: r["path"])
    for res in results:
        report.total_files += 1
        report.total_loc += res["loc"]
        if res["parse_error"] is not None:
            report.parse_errors.append(
                ParseErrorEntry(
                    path=res["path"],
                    line=res["parse_error"]["line"],
                    message=res["parse_error"]["message"],
                )
            )
            continue
        if res["ml"]:
            report.ml_files += 1
            report.files.append(
                FileReport(
                    path=res["path"],
                    loc=res["loc"],
                    instances=[SmellInstance.from_dict(d) for d in res["instances"]],
                )
            )
    return report
