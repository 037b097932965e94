"""Smell lifecycle reconstruction: detect at every commit, match instances
across consecutive commits, and derive introducing/removing commits,
removal modes, censoring, and survival aggregates.

A trace is a maximal contiguous run of one instance's presence; a smell
that disappears and later reappears yields two traces.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from statistics import mean, median
from typing import IO

from mlsmells.detectors.catalog import SCOPE_FILE, kind_by_id
from mlsmells.detectors.config import DetectorConfig
from mlsmells.detectors.engine import analyze_source
from mlsmells.histminer import (
    FileIdentityMap,
    RawCommit,
    iter_raw_history,
    read_blobs,
    track_file_identity,
)
from mlsmells.textsim import similarity

log = logging.getLogger(__name__)

LIFECYCLE_CSV_COLUMNS = (
    "trace_id",
    "kind",
    "file_id",
    "introducing_sha",
    "removing_sha",
    "removal_mode",
    "lifespan_commits",
    "lifespan_days",
)

SECONDS_PER_DAY = 86400.0


@dataclass(frozen=True)
class TrackedInstance:
    """A detected instance bound to a rename-stable file id at one commit."""

    kind: str
    file_id: str
    path: str
    line: int
    snippet: str


@dataclass
class Correspondence:
    pairs: list[tuple[int, int]]
    unmatched_prev: list[int]
    unmatched_next: list[int]


def match_instances(
    prev: list[TrackedInstance],
    next: list[TrackedInstance],
    threshold: float = 0.8,
) -> Correspondence:
    """Pair instances of consecutive commits.

    Candidates share (kind, file id) and either the same line or snippet
    similarity >= threshold; pairs are taken greedily by similarity with a
    nearest-line tiebreak, each instance in at most one pair. File-scope
    kinds match on (kind, file id) alone.
    """
    candidates: list[tuple[float, int, int, int, int]] = []
    by_key: dict[tuple[str, str], list[int]] = {}
    for j, inst in enumerate(next):
        by_key.setdefault((inst.kind, inst.file_id), []).append(j)
    for i, p in enumerate(prev):
        for j in by_key.get((p.kind, p.file_id), []):
            n = next[j]
            if kind_by_id(p.kind).scope == SCOPE_FILE:
                sim, delta = 1.0, 0
            else:
                sim = 1.0 if p.snippet == n.snippet else similarity(p.snippet, n.snippet)
                delta = abs(p.line - n.line)
                if p.line != n.line and sim < threshold:
                    continue
            candidates.append((sim, delta, p.line, i, j))
    candidates.sort(key=lambda c: (-c[0], c[1], c[2], c[3], c[4]))
    used_prev: set[int] = set()
    used_next: set[int] = set()
    pairs: list[tuple[int, int]] = []
    for _, _, _, i, j in candidates:
        if i in used_prev or j in used_next:
            continue
        used_prev.add(i)
        used_next.add(j)
        pairs.append((i, j))
    pairs.sort()
    return Correspondence(
        pairs=pairs,
        unmatched_prev=[i for i in range(len(prev)) if i not in used_prev],
        unmatched_next=[j for j in range(len(next)) if j not in used_next],
    )


@dataclass
class InstanceTrace:
    trace_id: str
    kind: str
    file_id: str
    anchors: list[tuple[int, str, int, str]]  # (ordinal, sha, line, snippet)

    @property
    def first_ordinal(self) -> int:
        return self.anchors[0][0]

    @property
    def last_ordinal(self) -> int:
        return self.anchors[-1][0]


@dataclass
class LifecycleRecord:
    trace_id: str
    kind: str
    file_id: str
    introducing_sha: str
    removing_sha: str  # "" when open/censored
    removal_mode: str  # code-change | file-deletion | open | censored
    lifespan_commits: int
    lifespan_days: float
    introducing_ts: int
    removing_ts: int | None


class DetectionCache:
    """Memoizes per-blob detection keyed by (blob oid, ruleset hash).

    Optionally backed by a directory so interrupted runs resume without
    re-analyzing; hit/miss counters expose the caching contract.
    """

    def __init__(self, directory: str | Path | None = None) -> None:
        self.directory = Path(directory) if directory else None
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)
        self._mem: dict[tuple[str, str], dict] = {}
        self.hits = 0
        self.misses = 0

    def _file_for(self, oid: str, rulehash: str) -> Path:
        assert self.directory is not None
        return self.directory / f"{oid}-{rulehash[:12]}.json"

    def get(self, oid: str, rulehash: str) -> dict | None:
        key = (oid, rulehash)
        if key in self._mem:
            self.hits += 1
            return self._mem[key]
        if self.directory:
            path = self._file_for(oid, rulehash)
            if path.exists():
                value = json.loads(path.read_text(encoding="utf-8"))
                self._mem[key] = value
                self.hits += 1
                return value
        self.misses += 1
        return None

    def put(self, oid: str, rulehash: str, value: dict) -> None:
        self._mem[(oid, rulehash)] = value
        if self.directory:
            self._file_for(oid, rulehash).write_text(
                json.dumps(value, sort_keys=True), encoding="utf-8"
            )


@dataclass
class CommitDetections:
    """Per-commit instance sets plus everything needed downstream."""

    shas: list[str]
    timestamps: list[int]
    per_commit: list[list[TrackedInstance]]
    unanalyzable: set[int]
    fmap: FileIdentityMap
    cache: DetectionCache


def _is_regular_python(entry_path: str, mode: str) -> bool:
    return entry_path.endswith(".py") and mode.startswith("100")


def detect_commits(
    repo: str | Path,
    config: DetectorConfig | None = None,
    cache: DetectionCache | None = None,
    rename_threshold: int = 60,
) -> CommitDetections:
    """Run detection over every first-parent commit of a repository.

    File contents are read once per unique blob; detection results are
    cached by (blob oid, ruleset hash) so unchanged files are never
    re-analyzed, within a run or across runs with a persistent cache.
    """
    config = config or DetectorConfig()
    cache = cache or DetectionCache()
    rulehash = config.ruleset_hash()
    history: list[RawCommit] = iter_raw_history(repo)
    fmap = track_file_identity(repo, rename_threshold=rename_threshold)

    tree: dict[str, str] = {}  # path -> blob oid, replayed over history
    per_commit_paths: list[dict[str, str]] = []
    needed: set[str] = set()
    for raw in history:
        for entry in raw.entries:
            if entry.status == "D":
                tree.pop(entry.path, None)
            elif _is_regular_python(entry.path, entry.new_mode):
                tree[entry.path] = entry.new_oid
                needed.add(entry.new_oid)
            else:
                tree.pop(entry.path, None)  # .py replaced by non-regular file
        per_commit_paths.append(dict(tree))

    blobs = read_blobs(repo, needed)

    shas = [raw.sha for raw in history]
    timestamps = [raw.timestamp for raw in history]
    per_commit: list[list[TrackedInstance]] = []
    unanalyzable: set[int] = set()
    for ordinal, raw in enumerate(history):
        instances: list[TrackedInstance] = []
        broken = False
        for path in sorted(per_commit_paths[ordinal]):
            oid = per_commit_paths[ordinal][path]
            result = cache.get(oid, rulehash)
            if result is None:
                content = blobs.get(oid)
                if content is None:
                    log.error("blob %s missing for %s at %s", oid, path, raw.sha[:12])
                    broken = True
                    continue
                result = analyze_source(path, content, config)
                # cache is keyed by content; store path-free results
                result = {
                    "ml": result["ml"],
                    "loc": result["loc"],
                    "parse_error": result["parse_error"],
                    "instances": [
                        {"kind": d["kind"], "line": d["line"], "snippet": d["snippet"]}
                        for d in result["instances"]
                    ],
                }
                cache.put(oid, rulehash, result)
            if result["parse_error"] is not None:
                continue
            file_id = fmap.id_at(ordinal, path)
            if file_id is None:
                log.warning("no file id for %s at ordinal %d", path, ordinal)
                continue
            for d in result["instances"]:
                instances.append(
                    TrackedInstance(
                        kind=d["kind"],
                        file_id=file_id,
                        path=path,
                        line=d["line"],
                        snippet=d["snippet"],
                    )
                )
        if broken:
            unanalyzable.add(ordinal)
        instances.sort(key=lambda t: (t.file_id, t.kind, t.line))
        per_commit.append(instances)
    return CommitDetections(
        shas=shas,
        timestamps=timestamps,
        per_commit=per_commit,
        unanalyzable=unanalyzable,
        fmap=fmap,
        cache=cache,
    )


def classify_removal(file_id: str, removing_sha: str, fmap: FileIdentityMap) -> str:
    """file-deletion iff the instance's file id was deleted at the removing
    commit; otherwise the smell left through a code change."""
    return "file-deletion" if file_id in fmap.deleted_at.get(removing_sha, frozenset()) else "code-change"


def find_transitions(
    detections: CommitDetections,
    threshold: float = 0.8,
) -> tuple[list[LifecycleRecord], list[InstanceTrace]]:
    """Derive one lifecycle record per trace from the per-commit sets.

    An instance unmatched at the next analyzable commit closes its trace
    there (that commit is the remover); instances present at the root open
    traces introduced by the root. Commits marked unanalyzable are bridged:
    traces alive on both sides are treated as present across the gap.
    """
    shas, timestamps = detections.shas, detections.timestamps
    analyzable = [i for i in range(len(shas)) if i not in detections.unanalyzable]
    records: list[LifecycleRecord] = []
    traces: list[InstanceTrace] = []
    live: dict[int, tuple[InstanceTrace, TrackedInstance]] = {}
    counter = 0
    head = len(shas) - 1

    def open_trace(ordinal: int, inst: TrackedInstance) -> None:
        nonlocal counter
        trace = InstanceTrace(
            trace_id=f"t{counter:06d}",
            kind=inst.kind,
            file_id=inst.file_id,
            anchors=[(ordinal, shas[ordinal], inst.line, inst.snippet)],
        )
        counter += 1
        traces.append(trace)
        live[id(trace)] = (trace, inst)

    def close_trace(trace: InstanceTrace, removing_ordinal: int) -> None:
        intro = trace.first_ordinal
        mode = classify_removal(trace.file_id, shas[removing_ordinal], detections.fmap)
        records.append(
            LifecycleRecord(
                trace_id=trace.trace_id,
                kind=trace.kind,
                file_id=trace.file_id,
                introducing_sha=shas[intro],
                removing_sha=shas[removing_ordinal],
                removal_mode=mode,
                lifespan_commits=removing_ordinal - intro,
                lifespan_days=max(
                    0.0, (timestamps[removing_ordinal] - timestamps[intro]) / SECONDS_PER_DAY
                ),
                introducing_ts=timestamps[intro],
                removing_ts=timestamps[removing_ordinal],
            )
        )

    if not analyzable:
        return records, traces

    first = analyzable[0]
    for inst in detections.per_commit[first]:
        open_trace(first, inst)

    for prev_ord, next_ord in zip(analyzable, analyzable[1:]):
        live_items = sorted(live.values(), key=lambda ti: ti[0].trace_id)
        prev_insts = [inst for _, inst in live_items]
        next_insts = detections.per_commit[next_ord]
        corr = match_instances(prev_insts, next_insts, threshold=threshold)
        survivors: dict[int, tuple[InstanceTrace, TrackedInstance]] = {}
        for i, j in corr.pairs:
            trace, _ = live_items[i]
            n = next_insts[j]
            trace.anchors.append((next_ord, shas[next_ord], n.line, n.snippet))
            survivors[id(trace)] = (trace, n)
        for i in corr.unmatched_prev:
            trace, _ = live_items[i]
            close_trace(trace, next_ord)
        live = survivors
        for j in corr.unmatched_next:
            open_trace(next_ord, next_insts[j])

    for trace, _ in sorted(live.values(), key=lambda ti: ti[0].trace_id):
        intro = trace.first_ordinal
        records.append(
            LifecycleRecord(
                trace_id=trace.trace_id,
                kind=trace.kind,
                file_id=trace.file_id,
                introducing_sha=shas[intro],
                removing_sha="",
                removal_mode="open",
                lifespan_commits=head - intro,
                lifespan_days=max(0.0, (timestamps[head] - timestamps[intro]) / SECONDS_PER_DAY),
                introducing_ts=timestamps[intro],
                removing_ts=None,
            )
        )
    records.sort(key=lambda r: r.trace_id)
    return records, traces


def apply_censoring(
    records: list[LifecycleRecord], head_timestamp: int
) -> tuple[list[LifecycleRecord], list[str]]:
    """Mark open records as censored when their introduction plus the
    per-kind median removal time lies beyond the end of the history.

    Kinds with no closed record cannot be censored; they are flagged and
    left untouched.
    """
    closed_days: dict[str, list[float]] = {}
    for rec in records:
        if rec.removal_mode in ("code-change", "file-deletion"):
            closed_days.setdefault(rec.kind, []).append(rec.lifespan_days)
    flags: list[str] = []
    skipped_kinds: set[str] = set()
    out: list[LifecycleRecord] = []
    for rec in records:
        if rec.removal_mode == "open":
            days = closed_days.get(rec.kind)
            if not days:
                if rec.kind not in skipped_kinds:
                    skipped_kinds.add(rec.kind)
                    flags.append(f"censoring skipped for kind {rec.kind}: no closed records")
                out.append(rec)
                continue
            med = median(days)
            if rec.introducing_ts + med * SECONDS_PER_DAY > head_timestamp:
                out.append(
                    LifecycleRecord(
                        trace_id=rec.trace_id,
                        kind=rec.kind,
                        file_id=rec.file_id,
                        introducing_sha=rec.introducing_sha,
                        removing_sha="",
                        removal_mode="censored",
                        lifespan_commits=rec.lifespan_commits,
                        lifespan_days=rec.lifespan_days,
                        introducing_ts=rec.introducing_ts,
                        removing_ts=None,
                    )
                )
                continue
        out.append(rec)
    return out, flags


def survival_stats(records: list[LifecycleRecord]) -> dict[str, dict]:
    """Per-kind lifespan aggregates over non-censored records; kinds with no
    records are simply absent."""
    by_kind: dict[str, list[LifecycleRecord]] = {}
    for rec in records:
        if rec.removal_mode == "censored":
            continue
        by_kind.setdefault(rec.kind, []).append(rec)
    censored_counts: dict[str, int] = {}
    for rec in records:
        if rec.removal_mode == "censored":
            censored_counts[rec.kind] = censored_counts.get(rec.kind, 0) + 1
    stats: dict[str, dict] = {}
    for kind in sorted(set(by_kind) | set(censored_counts)):
        recs = by_kind.get(kind, [])
        entry: dict = {
            "count": len(recs),
            "open": sum(1 for r in recs if r.removal_mode == "open"),
            "censored": censored_counts.get(kind, 0),
        }
        if recs:
            commits = [r.lifespan_commits for r in recs]
            days = [r.lifespan_days for r in recs]
            entry.update(
                mean_commits=mean(commits),
                median_commits=median(commits),
                mean_days=mean(days),
                median_days=median(days),
            )
        stats[kind] = entry
    return stats


@dataclass
class LifecycleResult:
    records: list[LifecycleRecord]
    traces: list[InstanceTrace]
    detections: CommitDetections
    censoring_flags: list[str] = field(default_factory=list)


def run_lifecycle(
    repo: str | Path,
    config: DetectorConfig | None = None,
    cache: DetectionCache | None = None,
    threshold: float = 0.8,
    rename_threshold: int = 60,
    censor: bool = True,
) -> LifecycleResult:
    """The full per-repository pipeline: detect at every commit, build
    traces, classify removals, and apply the censoring rule."""
    detections = detect_commits(repo, config=config, cache=cache, rename_threshold=rename_threshold)
    records, traces = find_transitions(detections, threshold=threshold)
    flags: list[str] = []
    if censor and detections.timestamps:
        records, flags = apply_censoring(records, detections.timestamps[-1])
    return LifecycleResult(records=records, traces=traces, detections=detections, censoring_flags=flags)


def write_lifecycle_csv(records: list[LifecycleRecord], out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(LIFECYCLE_CSV_COLUMNS)
    for rec in records:
        writer.writerow(
            [
                rec.trace_id,
                rec.kind,
                rec.file_id,
                rec.introducing_sha,
                rec.removing_sha,
                rec.removal_mode,
                rec.lifespan_commits,
                f"{rec.lifespan_days:.6f}",
            ]
        )


def read_lifecycle_csv(path: str | Path) -> list[dict]:
    """Rows of a lifecycle.csv as dicts with numeric fields parsed."""
    rows: list[dict] = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            row["lifespan_commits"] = int(row["lifespan_commits"])
            row["lifespan_days"] = float(row["lifespan_days"])
            rows.append(row)
    return rows


def traces_to_dict(traces: list[InstanceTrace]) -> dict:
    return {
        "traces": [
            {
                "trace_id": t.trace_id,
                "kind": t.kind,
                "file_id": t.file_id,
                "anchors": [
                    {"ordinal": o, "sha": sha, "line": line, "snippet": snippet}
                    for o, sha, line, snippet in t.anchors
                ],
            }
            for t in traces
        ]
    }
