"""Study-design operations: prevalence normalization, project size
grouping, Cochran sampling, commit segmentation, rationale tagging,
self-admission, and co-occurrence tables."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from statistics import NormalDist
from typing import Iterable, Sequence

from mlsmells.detectors.catalog import SmellKind, catalog
from mlsmells.detectors.engine import DetectionReport
from mlsmells.histminer import CommitRecord, ProjectRecord

SECONDS_PER_DAY = 86400

DEV_TIME_BUCKETS = ("one week", "one month", "one year", "more than one year")
ACTIVITY_BUCKETS = ("first 10%", "first 20%", "first 50%", "after first 50%")
RELEASE_BUCKETS = ("one day", "one week", "one month", "more than one month")

RATIONALE_TAGS = ("bug-fixing", "enhancement", "new-feature", "refactoring")

# stem-prefix keyword dictionaries for commit-message tagging
DEFAULT_RATIONALE_KEYWORDS: dict[str, tuple[str, ...]] = {
    "bug-fixing": ("fix", "bug", "issue", "crash", "fail", "defect", "error", "patch"),
    "enhancement": ("improv", "enhanc", "updat", "optimi", "clean", "upgrad"),
    "new-feature": ("add", "implement", "introduc", "support", "new"),
    "refactoring": ("refactor", "restructur", "rewrit", "renam", "mov"),
}


def prevalence(report: DetectionReport, kinds: list[SmellKind] | None = None) -> dict:
    """Per-kind raw counts and counts per 1000 LOC, plus the pipeline-stage
    rollup. Normalized values are absent (None) when the report has no LOC."""
    kinds = kinds or catalog()
    counts = report.per_kind_counts()
    loc = report.total_loc
    per_kind: dict[str, dict] = {}
    per_stage: dict[str, dict] = {}
    for kind in kinds:
        count = counts.get(kind.id, 0)
        per_kloc = 1000.0 * count / loc if loc > 0 else None
        per_kind[kind.id] = {"count": count, "per_kloc": per_kloc}
        stage = per_stage.setdefault(kind.pipeline_stage, {"count": 0, "per_kloc": None})
        stage["count"] += count
        if loc > 0:
            stage["per_kloc"] = 1000.0 * stage["count"] / loc
    return {"loc": loc, "per_kind": per_kind, "per_stage": per_stage}


def quantile_linear(values: Sequence[float], q: float) -> float:
    """Linear-interpolation quantile over the order statistics."""
    if not values:
        raise ValueError("quantile of empty data")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    ordered = sorted(values)
    h = (len(ordered) - 1) * q
    lo = math.floor(h)
    hi = math.ceil(h)
    if lo == hi:
        return float(ordered[lo])
    return ordered[lo] + (h - lo) * (ordered[hi] - ordered[lo])


@dataclass
class SizeGrouping:
    small_boundary: float  # P30 of LOC
    large_boundary: float  # P60 of LOC
    projects: list[ProjectRecord]  # size_group filled in
    degenerate: bool = False

    def group(self, name: str) -> list[ProjectRecord]:
        return [p for p in self.projects if p.size_group == name]


def size_groups(projects: Sequence[ProjectRecord]) -> SizeGrouping:
    """Partition projects by LOC: small < P30, medium in [P30, P60),
    large >= P60 (linear-interpolation percentiles).

    When P30 == P60 the medium interval is empty and the split is
    meaningless; that degenerate case is flagged and everything is labeled
    medium.
    """
    if len(projects) < 3:
        raise ValueError("size grouping requires at least 3 projects")
    locs = [p.loc for p in projects]
    p30 = quantile_linear(locs, 0.30)
    p60 = quantile_linear(locs, 0.60)
    if p30 == p60:
        labeled = [replace(p, size_group="medium") for p in projects]
        return SizeGrouping(small_boundary=p30, large_boundary=p60, projects=labeled, degenerate=True)
    labeled = []
    for p in projects:
        if p.loc < p30:
            group = "small"
        elif p.loc < p60:
            group = "medium"
        else:
            group = "large"
        labeled.append(replace(p, size_group=group))
    return SizeGrouping(small_boundary=p30, large_boundary=p60, projects=labeled)


def sample_size(population: int, confidence: float = 0.95, margin: float = 0.05) -> int:
    """Cochran sample size at p=0.5 with finite-population correction,
    rounded up: n0 = z^2/4e^2, n = ceil(n0 / (1 + (n0-1)/N))."""
    if population < 1:
        raise ValueError("population must be >= 1")
    if not 0.0 < margin < 1.0:
        raise ValueError("margin must lie in (0, 1)")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    z = NormalDist().inv_cdf(1.0 - (1.0 - confidence) / 2.0)
    n0 = z * z * 0.25 / (margin * margin)
    n = math.ceil(n0 / (1.0 + (n0 - 1.0) / population))
    return min(n, population)


@dataclass(frozen=True)
class SegmentLabel:
    development_time: str
    activity_level: str
    release_distance: str


def segment_commit(
    commit: CommitRecord,
    start_timestamp: int,
    total_commits: int,
    next_release_timestamp: int | None,
) -> SegmentLabel:
    """Classify one commit on the three segmentation axes (first matching,
    i.e. smallest, bucket per axis)."""
    if commit.ordinal >= total_commits:
        raise ValueError("ordinal out of range for total_commits")
    age = commit.timestamp - start_timestamp
    if age <= 7 * SECONDS_PER_DAY:
        dev = DEV_TIME_BUCKETS[0]
    elif age <= 30 * SECONDS_PER_DAY:
        dev = DEV_TIME_BUCKETS[1]
    elif age <= 365 * SECONDS_PER_DAY:
        dev = DEV_TIME_BUCKETS[2]
    else:
        dev = DEV_TIME_BUCKETS[3]

    fraction = (commit.ordinal + 1) / total_commits
    if fraction <= 0.10:
        act = ACTIVITY_BUCKETS[0]
    elif fraction <= 0.20:
        act = ACTIVITY_BUCKETS[1]
    elif fraction <= 0.50:
        act = ACTIVITY_BUCKETS[2]
    else:
        act = ACTIVITY_BUCKETS[3]

    if next_release_timestamp is None:
        rel = RELEASE_BUCKETS[3]
    else:
        gap = next_release_timestamp - commit.timestamp
        if gap <= SECONDS_PER_DAY:
            rel = RELEASE_BUCKETS[0]
        elif gap <= 7 * SECONDS_PER_DAY:
            rel = RELEASE_BUCKETS[1]
        elif gap <= 30 * SECONDS_PER_DAY:
            rel = RELEASE_BUCKETS[2]
        else:
            rel = RELEASE_BUCKETS[3]
    return SegmentLabel(development_time=dev, activity_level=act, release_distance=rel)


def next_release_after(commit: CommitRecord, releases: Sequence[CommitRecord]) -> int | None:
    """Timestamp of the earliest release at or after this commit, if any."""
    candidates = [r.timestamp for r in releases if r.timestamp >= commit.timestamp]
    return min(candidates) if candidates else None


@dataclass(frozen=True)
class RationaleTag:
    tags: tuple[str, ...]  # ("unclassified",) when nothing matched
    matched_keywords: dict[str, tuple[str, ...]]


def tag_rationale(
    message: str,
    keywords: dict[str, tuple[str, ...]] | None = None,
) -> RationaleTag:
    """Tag a commit message by stem-prefix keyword matching
    (case-insensitive); a message may carry several tags."""
    keywords = keywords or DEFAULT_RATIONALE_KEYWORDS
    tags: list[str] = []
    matched: dict[str, tuple[str, ...]] = {}
    for tag in RATIONALE_TAGS:
        stems = keywords.get(tag, ())
        found = tuple(
            stem for stem in stems if re.search(rf"\b{re.escape(stem)}\w*", message, re.IGNORECASE)
        )
        if found:
            tags.append(tag)
            matched[tag] = found
    if not tags:
        return RationaleTag(tags=("unclassified",), matched_keywords={})
    return RationaleTag(tags=tuple(tags), matched_keywords=matched)


def _normalize_terms(text: str) -> str:
    return " ".join(re.sub(r"[^a-z0-9]+", " ", text.lower()).split())


def detect_self_admission(
    message: str,
    kind: SmellKind,
    extra_terms: Sequence[str] = (),
) -> bool:
    """True when the commit message names the smell (kind name, kind id, or
    any configured synonym), ignoring case and punctuation."""
    haystack = f" {_normalize_terms(message)} "
    terms = [kind.name, kind.id.replace("-", " "), *extra_terms]
    for term in terms:
        normalized = _normalize_terms(term)
        if normalized and f" {normalized} " in haystack:
            return True
    return False


def cooccurrence(
    entries: Iterable[tuple[Sequence[str], Sequence[str]]],
    kinds: list[SmellKind] | None = None,
) -> dict[str, dict[str, int]]:
    """tag x kind contingency table over smell-introducing commits.

    Each entry is (tags of the commit, kinds it introduced); a multi-tag
    commit increments every matching row. Axes are fully materialized so an
    empty input yields an all-zero table.
    """
    kinds = kinds or catalog()
    kind_ids = [k.id for k in kinds]
    table: dict[str, dict[str, int]] = {
        tag: {kid: 0 for kid in kind_ids} for tag in (*RATIONALE_TAGS, "unclassified")
    }
    for tags, introduced in entries:
        for tag in tags:
            row = table.get(tag)
            if row is None:
                continue
            for kid in introduced:
                if kid in row:
                    row[kid] += 1
    return table
