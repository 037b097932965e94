"""Git history mining: first-parent commit walking, release detection,
rename-stable file identities, and the project-catalog loader.

All git access shells out to the git CLI; each repository is read in a
constant number of subprocess calls (one `log --raw` stream per pass), so
walks stay fast on long histories and byte-identical across runs.
"""

from __future__ import annotations

import csv
import json
import logging
import re
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

log = logging.getLogger(__name__)

COMMITS_CSV_COLUMNS = (
    "sha",
    "parents",
    "timestamp",
    "ordinal",
    "files_total",
    "files_added",
    "files_removed",
    "is_release",
    "message",
)


class RepoError(Exception):
    """The path is not a usable git repository, or git itself failed."""


class CatalogFormatError(Exception):
    """The project catalog CSV is missing required columns."""


def _git(repo: str | Path, *args: str, data: bytes | None = None) -> bytes:
    cmd = ["git", "-C", str(repo), *args]
    try:
        proc = subprocess.run(cmd, input=data, capture_output=True, check=True)
    except FileNotFoundError as exc:
        raise RepoError("git executable not found") from exc
    except subprocess.CalledProcessError as exc:
        stderr = exc.stderr.decode("utf-8", "replace").strip()
        raise RepoError(f"git {' '.join(args[:2])} failed in {repo}: {stderr}") from exc
    return proc.stdout


@dataclass(frozen=True)
class DiffEntry:
    """One changed path in a commit, diffed against its first parent."""

    status: str  # A, D, M, T, R, C
    path: str  # post-image path
    old_path: str | None
    old_oid: str
    new_oid: str
    new_mode: str


@dataclass
class RawCommit:
    sha: str
    parents: tuple[str, ...]
    timestamp: int  # author date, seconds since epoch (UTC)
    message: str
    entries: list[DiffEntry]


def iter_raw_history(repo: str | Path, rename_threshold: int | None = None) -> list[RawCommit]:
    """First-parent history from root to HEAD with per-commit file changes.

    With rename_threshold (percent) set, similar delete+add pairs are folded
    into R entries; otherwise renames appear as plain A/D.
    """
    rename_args = [f"-M{rename_threshold}%"] if rename_threshold is not None else ["--no-renames"]
    out = _git(
        repo,
        "log",
        "--first-parent",
        "--reverse",
        "--raw",
        "--no-abbrev",
        "-z",
        *rename_args,
        "--format=%x01%H%x1f%P%x1f%at%x1f%B%x1e",
        "HEAD",
    ).decode("utf-8", "replace")

    commits: list[RawCommit] = []
    for chunk in out.split("\x01"):
        if not chunk:
            continue
        header, _, raw = chunk.partition("\x1e")
        sha, parents, at, message = header.split("\x1f", 3)
        entries: list[DiffEntry] = []
        tokens = [t for t in raw.split("\x00")]
        i = 0
        while i < len(tokens):
            meta = tokens[i].lstrip("\n")
            if not meta.startswith(":"):
                i += 1
                continue
            fields = meta[1:].split(" ")
            old_mode, new_mode, old_oid, new_oid, status_full = fields[:5]
            status = status_full[0]
            if status in ("R", "C"):
                old_path, path = tokens[i + 1], tokens[i + 2]
                i += 3
            else:
                old_path, path = None, tokens[i + 1]
                i += 2
            entries.append(
                DiffEntry(
                    status=status,
                    path=path,
                    old_path=old_path,
                    old_oid=old_oid,
                    new_oid=new_oid,
                    new_mode=new_mode,
                )
            )
        entries.sort(key=lambda e: (e.path, e.status))
        commits.append(
            RawCommit(
                sha=sha,
                parents=tuple(p for p in parents.split(" ") if p),
                timestamp=int(at),
                message=message.rstrip("\n"),
                entries=entries,
            )
        )
    if not commits:
        raise RepoError(f"no commits found in {repo}")
    return commits


@dataclass(frozen=True)
class CommitRecord:
    sha: str
    parents: tuple[str, ...]
    timestamp: int
    message: str
    files_total: int
    files_added: int
    files_removed: int
    ordinal: int
    is_release: bool


def detect_releases(repo: str | Path, tag_pattern: str | None = None) -> set[str]:
    """Commits pointed to by tags (annotated or lightweight), optionally
    filtered by a tag-name regex."""
    out = _git(
        repo, "for-each-ref", "refs/tags", "--format=%(objectname)%00%(*objectname)%00%(refname:short)"
    ).decode("utf-8", "replace")
    matcher = re.compile(tag_pattern) if tag_pattern else None
    shas: set[str] = set()
    for line in out.splitlines():
        if not line:
            continue
        objectname, peeled, name = line.split("\x00", 2)
        if matcher and not matcher.search(name):
            continue
        shas.add(peeled or objectname)
    return shas


def walk_history(repo: str | Path, tag_pattern: str | None = None) -> list[CommitRecord]:
    """One record per first-parent commit, root to HEAD.

    File metrics are relative to the first parent (the root commit counts
    every file as added); files_total tracks the running tree size.
    """
    releases = detect_releases(repo, tag_pattern)
    records: list[CommitRecord] = []
    total = 0
    for ordinal, raw in enumerate(iter_raw_history(repo)):
        added = sum(1 for e in raw.entries if e.status == "A")
        removed = sum(1 for e in raw.entries if e.status == "D")
        total += added - removed
        records.append(
            CommitRecord(
                sha=raw.sha,
                parents=raw.parents,
                timestamp=raw.timestamp,
                message=raw.message,
                files_total=total,
                files_added=added,
                files_removed=removed,
                ordinal=ordinal,
                is_release=raw.sha in releases,
            )
        )
    return records


@dataclass
class FileIdentityMap:
    """Stable file ids across renames on the first-parent chain.

    aliases[file_id] lists (sha, path) whenever the id appeared or changed
    path; snapshots[ordinal] maps every live path to its id at that commit;
    deleted_at[sha] lists the ids whose file was deleted there.
    """

    shas: list[str] = field(default_factory=list)
    aliases: dict[str, list[tuple[str, str]]] = field(default_factory=dict)
    snapshots: list[dict[str, str]] = field(default_factory=list)
    deleted_at: dict[str, frozenset[str]] = field(default_factory=dict)

    def id_at(self, ordinal: int, path: str) -> str | None:
        return self.snapshots[ordinal].get(path)

    def path_of(self, file_id: str, ordinal: int) -> str | None:
        for path, fid in self.snapshots[ordinal].items():
            if fid == file_id:
                return path
        return None


def track_file_identity(repo: str | Path, rename_threshold: int = 60) -> FileIdentityMap:
    """Mint an id when a path first appears and carry it across renames
    detected at the given similarity threshold. Ids are stable across
    re-runs and under appending commits."""
    fmap = FileIdentityMap()
    current: dict[str, str] = {}
    counter = 0
    for raw in iter_raw_history(repo, rename_threshold=rename_threshold):
        deleted: set[str] = set()
        for entry in [e for e in raw.entries if e.status == "D"]:
            fid = current.pop(entry.path, None)
            if fid is not None:
                deleted.add(fid)
        renames = [e for e in raw.entries if e.status == "R"]
        # pop every rename source before assigning destinations so that
        # simultaneous renames (including swaps) keep their own ids
        moved = {e.path: current.pop(e.old_path or "", None) for e in renames}
        for entry in renames:
            fid = moved[entry.path]
            if fid is None:
                fid = f"f{counter:06d}"
                counter += 1
                fmap.aliases[fid] = []
            current[entry.path] = fid
            fmap.aliases[fid].append((raw.sha, entry.path))
        for entry in [e for e in raw.entries if e.status in ("A", "C")]:
            fid = f"f{counter:06d}"
            counter += 1
            fmap.aliases[fid] = [(raw.sha, entry.path)]
            current[entry.path] = fid
        fmap.shas.append(raw.sha)
        fmap.snapshots.append(dict(current))
        fmap.deleted_at[raw.sha] = frozenset(deleted)
    return fmap


def read_blobs(repo: str | Path, oids: Iterable[str]) -> dict[str, str]:
    """Bulk-read blob contents by oid via one `cat-file --batch` call."""
    wanted = sorted(set(oids))
    if not wanted:
        return {}
    data = "\n".join(wanted).encode("ascii") + b"\n"
    out = _git(repo, "cat-file", "--batch", data=data)
    contents: dict[str, str] = {}
    pos = 0
    while pos < len(out):
        nl = out.index(b"\n", pos)
        header = out[pos:nl].decode("ascii")
        parts = header.split(" ")
        if len(parts) == 3 and parts[1] == "blob":
            size = int(parts[2])
            body = out[nl + 1 : nl + 1 + size]
            contents[parts[0]] = body.decode("utf-8", "replace")
            pos = nl + 1 + size + 1  # trailing newline after body
        else:
            # "<oid> missing" or non-blob object; skip the header line
            pos = nl + 1
    return contents


@dataclass(frozen=True)
class ProjectRecord:
    name: str
    url: str
    stars: int
    commit_count: int
    loc: int
    has_ci: bool
    size_group: str = "unassigned"


_REQUIRED_CATALOG_COLUMNS = ("name", "url", "stars", "commits", "loc", "ci")
_TRUE_WORDS = {"true", "1", "yes", "y"}
_FALSE_WORDS = {"false", "0", "no", "n"}


def load_niche_catalog(path: str | Path) -> list[ProjectRecord]:
    """Read a project-catalog CSV (columns name,url,stars,commits,loc,ci;
    extra columns ignored). Malformed rows are logged with their row number
    and skipped."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in _REQUIRED_CATALOG_COLUMNS if c not in header]
        if missing:
            raise CatalogFormatError(f"catalog {path} is missing column(s): {missing}")
        records: list[ProjectRecord] = []
        for row_num, row in enumerate(reader, start=2):
            try:
                ci_word = (row["ci"] or "").strip().lower()
                if ci_word in _TRUE_WORDS:
                    has_ci = True
                elif ci_word in _FALSE_WORDS:
                    has_ci = False
                else:
                    raise ValueError(f"unrecognized ci value {row['ci']!r}")
                records.append(
                    ProjectRecord(
                        name=row["name"].strip(),
                        url=row["url"].strip(),
                        stars=int(row["stars"]),
                        commit_count=int(row["commits"]),
                        loc=int(row["loc"]),
                        has_ci=has_ci,
                    )
                )
            except (ValueError, TypeError) as exc:
                log.warning("catalog %s row %d skipped: %s", path, row_num, exc)
    return records


def read_commits_csv(path: str | Path) -> list[CommitRecord]:
    """Inverse of write_commits_csv."""
    records: list[CommitRecord] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            records.append(
                CommitRecord(
                    sha=row["sha"],
                    parents=tuple(p for p in row["parents"].split(" ") if p),
                    timestamp=int(row["timestamp"]),
                    message=json.loads(row["message"]),
                    files_total=int(row["files_total"]),
                    files_added=int(row["files_added"]),
                    files_removed=int(row["files_removed"]),
                    ordinal=int(row["ordinal"]),
                    is_release=row["is_release"] == "true",
                )
            )
    return records


def write_commits_csv(records: list[CommitRecord], out: IO[str]) -> None:
    """Serialize commit records with a fixed column order; the message field
    is JSON-escaped so the CSV stays one physical line per commit."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COMMITS_CSV_COLUMNS)
    for rec in records:
        writer.writerow(
            [
                rec.sha,
                " ".join(rec.parents),
                rec.timestamp,
                rec.ordinal,
                rec.files_total,
                rec.files_added,
                rec.files_removed,
                "true" if rec.is_release else "false",
                json.dumps(rec.message, ensure_ascii=False),
            ]
        )
