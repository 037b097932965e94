"""Corpus-level analysis: joins per-project mining artifacts (report.json,
commits.csv, lifecycle.csv) with the project catalog and emits the
hypothesis tests plus the segmentation / rationale / co-occurrence /
survival tables."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from statistics import mean, median

from mlsmells.analysis.stats import (
    StatResult,
    friedman,
    holm_bonferroni,
    kruskal_wallis,
    wilcoxon_rank_sum,
    wilcoxon_signed_rank,
)
from mlsmells.analysis.study import (
    cooccurrence,
    detect_self_admission,
    next_release_after,
    segment_commit,
    size_groups,
    tag_rationale,
)
from mlsmells.detectors.catalog import catalog, kind_by_id
from mlsmells.detectors.config import DetectorConfig
from mlsmells.histminer import CommitRecord, ProjectRecord, load_niche_catalog, read_commits_csv
from mlsmells.lifecycle import read_lifecycle_csv

log = logging.getLogger(__name__)

PROJECT_ARTIFACTS = ("report.json", "commits.csv", "lifecycle.csv")


class MissingArtifactError(Exception):
    """A required input artifact is absent; the message names the first one."""


@dataclass
class ProjectData:
    name: str
    loc_catalog: int
    has_ci: bool
    report: dict
    commits: list[CommitRecord]
    lifecycle: list[dict]

    @property
    def measured_loc(self) -> int:
        return int(self.report["total_loc"])

    def prevalence_per_kloc(self, kind_id: str) -> float:
        loc = self.measured_loc
        count = self.report["per_kind"].get(kind_id, 0)
        return 1000.0 * count / loc if loc > 0 else 0.0


def load_corpus(artifacts_dir: str | Path, catalog_csv: str | Path) -> list[ProjectData]:
    """Pair catalog rows with their artifact directories (matched by name).

    Raises MissingArtifactError naming the first absent input; catalog rows
    without an artifact directory are skipped with a warning.
    """
    artifacts = Path(artifacts_dir)
    if not artifacts.is_dir():
        raise MissingArtifactError(f"artifacts directory not found: {artifacts}")
    if not Path(catalog_csv).is_file():
        raise MissingArtifactError(f"catalog CSV not found: {catalog_csv}")
    records = load_niche_catalog(catalog_csv)
    projects: list[ProjectData] = []
    for record in sorted(records, key=lambda r: r.name):
        pdir = artifacts / record.name
        if not pdir.is_dir():
            log.warning("no artifacts for catalog project %s; skipped", record.name)
            continue
        for artifact in PROJECT_ARTIFACTS:
            if not (pdir / artifact).is_file():
                raise MissingArtifactError(f"missing artifact: {pdir / artifact}")
        projects.append(
            ProjectData(
                name=record.name,
                loc_catalog=record.loc,
                has_ci=record.has_ci,
                report=json.loads((pdir / "report.json").read_text(encoding="utf-8")),
                commits=read_commits_csv(pdir / "commits.csv"),
                lifecycle=read_lifecycle_csv(pdir / "lifecycle.csv"),
            )
        )
    if not projects:
        raise MissingArtifactError(f"no catalog project has artifacts under {artifacts}")
    return projects


@dataclass
class CorpusAnalysis:
    alpha: float
    holm: bool
    h0: list[dict] = field(default_factory=list)
    h1: dict = field(default_factory=dict)
    h2: list[dict] = field(default_factory=list)
    segments_rows: list[list] = field(default_factory=list)
    rationale_rows: list[list] = field(default_factory=list)
    cooccurrence_table: dict[str, dict[str, int]] = field(default_factory=dict)
    survival_rows: list[list] = field(default_factory=list)
    projects: int = 0

    def analysis_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "projects": self.projects,
            "holm_adjusted": self.holm,
            "h0": self.h0,
            "h1": self.h1,
            "h2": self.h2,
        }


def _attach_holm(entries: list[dict]) -> None:
    adjusted = holm_bonferroni([e["result"]["p_value"] for e in entries])
    for entry, adj in zip(entries, adjusted):
        entry["adjusted_p"] = adj


def analyze_corpus(
    artifacts_dir: str | Path,
    catalog_csv: str | Path,
    alpha: float = 0.05,
    holm: bool = False,
    kruskal: bool = False,
    config: DetectorConfig | None = None,
) -> CorpusAnalysis:
    projects = load_corpus(artifacts_dir, catalog_csv)
    config = config or DetectorConfig()
    kinds = catalog(config.stage_overrides)
    kind_ids = [k.id for k in kinds]
    out = CorpusAnalysis(alpha=alpha, holm=holm, projects=len(projects))

    # per-project, per-kind prevalence normalized by measured LOC
    vectors: dict[str, list[float]] = {
        kid: [p.prevalence_per_kloc(kid) for p in projects] for kid in kind_ids
    }

    # H0: pairwise smell-vs-smell prevalence over the same projects
    for kid_a, kid_b in combinations(kind_ids, 2):
        result = wilcoxon_signed_rank(vectors[kid_a], vectors[kid_b], alpha=alpha)
        out.h0.append({"kind_a": kid_a, "kind_b": kid_b, "result": result.to_dict()})
    if holm:
        _attach_holm(out.h0)

    # H1: size groups; treatments are groups, blocked by smell kind
    grouping_records = [
        _catalog_record(p) for p in projects
    ]
    grouping = size_groups(grouping_records) if len(projects) >= 3 else None
    group_names = ("small", "medium", "large")
    by_group: dict[str, list[ProjectData]] = {g: [] for g in group_names}
    if grouping is not None:
        labeled = {rec.name: rec.size_group for rec in grouping.projects}
        for p in projects:
            by_group[labeled[p.name]].append(p)
    degenerate_grouping = grouping is None or grouping.degenerate or any(
        not members for members in by_group.values()
    )
    if degenerate_grouping:
        out.h1["friedman"] = StatResult(
            test="friedman", statistic=0.0, p_value=1.0, effect_size=None,
            alpha=alpha, significant=False, method="degenerate", degenerate=True,
        ).to_dict()
    else:
        treatment_vectors = [
            [
                mean([p.prevalence_per_kloc(kid) for p in by_group[g]])
                for kid in kind_ids
            ]
            for g in group_names
        ]
        out.h1["friedman"] = friedman(treatment_vectors, alpha=alpha).to_dict()
    out.h1["degenerate_grouping"] = degenerate_grouping
    if kruskal and not degenerate_grouping:
        kw_entries = []
        for kid in kind_ids:
            groups_data = [[p.prevalence_per_kloc(kid) for p in by_group[g]] for g in group_names]
            kw_entries.append({"kind": kid, "result": kruskal_wallis(groups_data, alpha=alpha).to_dict()})
        if holm:
            _attach_holm(kw_entries)
        out.h1["kruskal_wallis_per_kind"] = kw_entries

    # H2: CI vs non-CI per kind (independent samples)
    ci = [p for p in projects if p.has_ci]
    no_ci = [p for p in projects if not p.has_ci]
    for kid in kind_ids:
        if ci and no_ci:
            result = wilcoxon_rank_sum(
                [p.prevalence_per_kloc(kid) for p in ci],
                [p.prevalence_per_kloc(kid) for p in no_ci],
                alpha=alpha,
            )
        else:
            result = StatResult(
                test="wilcoxon-rank-sum", statistic=0.0, p_value=1.0, effect_size=None,
                alpha=alpha, significant=False, method="degenerate", degenerate=True,
            )
        out.h2.append({"kind": kid, "result": result.to_dict()})
    if holm:
        _attach_holm(out.h2)

    # segmentation, rationale, co-occurrence, survival
    cooccurrence_entries: list[tuple[tuple[str, ...], list[str]]] = []
    for p in projects:
        introducing: dict[str, list[str]] = {}
        removing: dict[str, list[str]] = {}
        for row in p.lifecycle:
            introducing.setdefault(row["introducing_sha"], []).append(row["kind"])
            if row["removing_sha"]:
                removing.setdefault(row["removing_sha"], []).append(row["kind"])
        releases = [c for c in p.commits if c.is_release]
        start_ts = p.commits[0].timestamp if p.commits else 0
        total = len(p.commits)
        by_sha = {c.sha: c for c in p.commits}
        for commit in p.commits:
            label = segment_commit(commit, start_ts, total, next_release_after(commit, releases))
            out.segments_rows.append(
                [
                    p.name,
                    commit.sha,
                    commit.ordinal,
                    label.development_time,
                    label.activity_level,
                    label.release_distance,
                    "true" if commit.sha in introducing else "false",
                    "true" if commit.sha in removing else "false",
                ]
            )
        for role, mapping in (("introducing", introducing), ("removing", removing)):
            for sha in sorted(mapping, key=lambda s: by_sha[s].ordinal if s in by_sha else -1):
                commit = by_sha.get(sha)
                if commit is None:
                    continue
                tag = tag_rationale(commit.message)
                kinds_here = sorted(set(mapping[sha]))
                admitted = [
                    kid
                    for kid in kinds_here
                    if detect_self_admission(
                        commit.message,
                        kind_by_id(kid),
                        config.self_admission_terms.get(kid, ()),
                    )
                ]
                out.rationale_rows.append(
                    [
                        p.name,
                        sha,
                        role,
                        ";".join(tag.tags),
                        ";".join(kinds_here),
                        ";".join(admitted),
                    ]
                )
                if role == "introducing":
                    cooccurrence_entries.append((tag.tags, kinds_here))
    out.cooccurrence_table = cooccurrence(cooccurrence_entries, kinds)

    all_rows = [row for p in projects for row in p.lifecycle]
    for kid in kind_ids:
        rows = [r for r in all_rows if r["kind"] == kid and r["removal_mode"] != "censored"]
        censored = sum(1 for r in all_rows if r["kind"] == kid and r["removal_mode"] == "censored")
        if not rows and not censored:
            continue
        entry: list = [kid, len(rows), sum(1 for r in rows if r["removal_mode"] == "open"), censored]
        if rows:
            commits_spans = [r["lifespan_commits"] for r in rows]
            day_spans = [r["lifespan_days"] for r in rows]
            entry += [
                f"{mean(commits_spans):.6f}",
                f"{median(commits_spans):.6f}",
                f"{mean(day_spans):.6f}",
                f"{median(day_spans):.6f}",
            ]
        else:
            entry += ["", "", "", ""]
        out.survival_rows.append(entry)
    return out


def _catalog_record(p: ProjectData) -> ProjectRecord:
    return ProjectRecord(
        name=p.name, url="", stars=0, commit_count=len(p.commits), loc=p.loc_catalog, has_ci=p.has_ci
    )


SEGMENTS_COLUMNS = (
    "project",
    "sha",
    "ordinal",
    "development_time",
    "activity_level",
    "release_distance",
    "introduces",
    "removes",
)
RATIONALE_COLUMNS = ("project", "sha", "role", "tags", "kinds", "self_admitted")
SURVIVAL_COLUMNS = (
    "kind",
    "count",
    "open",
    "censored",
    "mean_commits",
    "median_commits",
    "mean_days",
    "median_days",
)


def write_analysis_outputs(analysis: CorpusAnalysis, out_dir: str | Path) -> list[Path]:
    """Write analysis.json plus the four CSV tables; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    path = out / "analysis.json"
    path.write_text(json.dumps(analysis.analysis_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(path)

    for name, columns, rows in (
        ("segments.csv", SEGMENTS_COLUMNS, analysis.segments_rows),
        ("rationale.csv", RATIONALE_COLUMNS, analysis.rationale_rows),
        ("survival.csv", SURVIVAL_COLUMNS, analysis.survival_rows),
    ):
        path = out / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows(rows)
        written.append(path)

    path = out / "cooccurrence.csv"
    kind_ids = [k.id for k in catalog()]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["tag", *kind_ids])
        for tag, row in analysis.cooccurrence_table.items():
            writer.writerow([tag, *[row[kid] for kid in kind_ids]])
    written.append(path)
    return written
