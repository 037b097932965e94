"""Synthetic-repository generator with scripted smell events.

Builds small git histories (insert / remove / rename / line-shift /
file-delete events) and records the exact ground truth for every planted
smell, so lifecycle reconstruction can be checked against a known answer.
Snippet templates embed unique tokens long enough that distinct instances
never cross-match at the default similarity threshold.
"""

from __future__ import annotations

import random
import string
import subprocess
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path

PREAMBLE = [
    "import numpy as np",
    "import pandas as pd",
    "",
    'df = pd.read_csv("base.csv", dtype=str)',
]

# statement-scope kinds, token-parameterized so every planted instance's
# anchor snippet is unique (identical snippets would make instance identity
# observationally ambiguous and the ground truth unrecoverable)
SMELL_TEMPLATES: dict[str, tuple[str, ...]] = {
    "chain-indexing": ('val_{t} = df["col_{t}"]["key_{t}"]',),
    "nan-equivalence-misused": ("flag_{t} = (x_{t} == np.nan)",),
    "dataframe-conversion-misused": ("df_{t} = df.copy()", "arr_{t} = df_{t}.values"),
    "matmul-api-misused": ("m_{t} = np.dot(a_{t}, b_{t})",),
    "empty-column-misinit": ('df["col_{t}"] = 0',),
    "inplace-api-misused": ('df.fillna("{t}")',),
    "merge-params-not-set": ('mg_{t} = df.merge(df, on="{t}")',),
    "columns-dtype-not-set": ('df_{t} = pd.read_csv("{t}.csv")',),
}


@dataclass
class PlantedSmell:
    kind: str
    token: str
    file_name: str  # name at introduction time (renames tracked separately)
    intro_ordinal: int
    removal_ordinal: int | None = None
    removal_mode: str = "open"  # code-change | file-deletion | open


@dataclass
class GroundTruth:
    repo: Path
    smells: list[PlantedSmell]
    shas: list[str]
    timestamps: list[int]

    def expected_tuples(self) -> list[tuple[str, str, str, str, int]]:
        """(kind, introducing_sha, removing_sha, mode, lifespan_commits) per smell."""
        head = len(self.shas) - 1
        out = []
        for s in self.smells:
            removing = self.shas[s.removal_ordinal] if s.removal_ordinal is not None else ""
            end = s.removal_ordinal if s.removal_ordinal is not None else head
            out.append((s.kind, self.shas[s.intro_ordinal], removing, s.removal_mode, end - s.intro_ordinal))
        return sorted(out)


class _SynthFile:
    def __init__(self, name: str) -> None:
        self.name = name
        self.body: list[str] = ["start = 0"]
        self.alive: dict[str, PlantedSmell] = {}  # token -> smell

    def text(self) -> str:
        return "\n".join(PREAMBLE + self.body) + "\n"


class RepoBuilder:
    def __init__(self, path: str | Path, seed: int) -> None:
        self.path = Path(path)
        self.rng = random.Random(seed)
        self.files: dict[str, _SynthFile] = {}
        self.smells: list[PlantedSmell] = []
        self.ordinal = -1
        self.clock = datetime(2020, 1, 1, 12, 0, tzinfo=timezone.utc)
        self.timestamps: list[int] = []

    def _git(self, *args: str, env: dict | None = None) -> str:
        import os

        full_env = dict(os.environ)
        if env:
            full_env.update(env)
        proc = subprocess.run(
            ["git", "-C", str(self.path), *args],
            capture_output=True,
            check=True,
            text=True,
            env=full_env,
        )
        return proc.stdout

    def _token(self) -> str:
        return "".join(self.rng.choice(string.ascii_lowercase) for _ in range(10))

    def _fresh_name(self) -> str:
        while True:
            name = f"mod_{self._token()[:6]}.py"
            if name not in self.files:
                return name

    def _commit(self, message: str) -> None:
        self.ordinal += 1
        self.clock += timedelta(days=self.rng.randint(1, 3), hours=self.rng.randint(0, 12))
        stamp = self.clock.strftime("%Y-%m-%dT%H:%M:%SZ")
        self._git("add", "-A")
        self._git(
            "commit",
            "-q",
            "--allow-empty",
            "-m",
            message,
            env={"GIT_AUTHOR_DATE": stamp, "GIT_COMMITTER_DATE": stamp},
        )
        self.timestamps.append(int(self.clock.timestamp()))

    def _write_all(self) -> None:
        for f in self.files.values():
            (self.path / f.name).write_text(f.text(), encoding="utf-8")

    # -- events ---------------------------------------------------------------

    def _add_file(self) -> None:
        f = _SynthFile(self._fresh_name())
        self.files[f.name] = f

    def _insert_smell(self, f: _SynthFile, forbidden_kinds: set[str]) -> PlantedSmell | None:
        kinds = sorted(set(SMELL_TEMPLATES) - forbidden_kinds)
        if not kinds:
            return None
        kind = self.rng.choice(kinds)
        token = self._token()
        lines = [template.format(t=token) for template in SMELL_TEMPLATES[kind]]
        pos = self.rng.randint(0, len(f.body))
        for offset, line in enumerate(lines):
            f.body.insert(pos + offset, line)
        smell = PlantedSmell(kind=kind, token=token, file_name=f.name, intro_ordinal=self.ordinal + 1)
        f.alive[token] = smell
        self.smells.append(smell)
        return smell

    def _remove_smell(self, f: _SynthFile, token: str) -> None:
        smell = f.alive.pop(token)
        for template in SMELL_TEMPLATES[smell.kind]:
            f.body.remove(template.format(t=token))
        smell.removal_ordinal = self.ordinal + 1
        smell.removal_mode = "code-change"

    def _delete_file(self, f: _SynthFile) -> None:
        for smell in f.alive.values():
            smell.removal_ordinal = self.ordinal + 1
            smell.removal_mode = "file-deletion"
        f.alive.clear()
        del self.files[f.name]
        (self.path / f.name).unlink()

    def _rename_file(self, f: _SynthFile) -> None:
        new_name = self._fresh_name()
        (self.path / f.name).rename(self.path / new_name)
        del self.files[f.name]
        f.name = new_name
        self.files[new_name] = f

    def _shift_lines(self, f: _SynthFile) -> None:
        pos = self.rng.randint(0, max(0, len(f.body) - 1))
        for _ in range(self.rng.randint(1, 4)):
            f.body.insert(pos, f"pad_{self._token()[:6]} = {self.rng.randint(0, 99)}")

    def _benign_edit(self, f: _SynthFile) -> None:
        f.body.append(f'print("note {self._token()[:6]}")')

    # -- main loop -------------------------------------------------------------

    def build(self, n_commits: int) -> GroundTruth:
        self.path.mkdir(parents=True, exist_ok=True)
        self._git("init", "-q", "-b", "main")
        self._git("config", "user.email", "gen@example.invalid")
        self._git("config", "user.name", "generator")

        self._add_file()
        first = next(iter(self.files.values()))
        if self.rng.random() < 0.5:
            self._insert_smell(first, set())
        self._write_all()
        self._commit("initial import")

        while self.ordinal + 1 < n_commits:
            frozen: set[str] = set()  # renamed files stay content-identical this commit
            inserted_kinds: dict[str, set[str]] = {}
            removed_kinds: dict[str, set[str]] = {}

            # structural events first; a renamed file must not be edited in
            # the same commit or git's similarity detection could miss it
            if self.rng.random() < 0.12 and self.files:
                name = self.rng.choice(sorted(self.files))
                f = self.files[name]
                self._rename_file(f)
                frozen.add(f.name)
            if self.rng.random() < 0.08 and len(self.files) > 1:
                candidates = [n for n in sorted(self.files) if n not in frozen]
                if candidates:
                    self._delete_file(self.files[self.rng.choice(candidates)])
            if self.rng.random() < 0.10:
                self._add_file()

            for _ in range(self.rng.randint(1, 2)):
                editable = [n for n in sorted(self.files) if n not in frozen]
                if not editable:
                    self._add_file()
                    editable = [n for n in sorted(self.files) if n not in frozen]
                f = self.files[self.rng.choice(editable)]
                action = self.rng.choices(
                    ["insert", "remove", "shift", "benign"],
                    weights=[0.45, 0.30, 0.13, 0.12],
                )[0]
                if action == "insert":
                    smell = self._insert_smell(f, removed_kinds.get(f.name, set()))
                    if smell is not None:
                        inserted_kinds.setdefault(f.name, set()).add(smell.kind)
                elif action == "remove":
                    candidates = [
                        t
                        for t, s in sorted(f.alive.items())
                        if s.intro_ordinal <= self.ordinal
                        and s.kind not in inserted_kinds.get(f.name, set())
                    ]
                    if candidates:
                        token = self.rng.choice(candidates)
                        removed_kinds.setdefault(f.name, set()).add(f.alive[token].kind)
                        self._remove_smell(f, token)
                    else:
                        self._benign_edit(f)
                elif action == "shift":
                    self._shift_lines(f)
                else:
                    self._benign_edit(f)
            self._write_all()
            self._commit(f"commit {self.ordinal + 1}")

        shas = self._git("rev-list", "--first-parent", "--reverse", "HEAD").split()
        return GroundTruth(repo=self.path, smells=self.smells, shas=shas, timestamps=self.timestamps)


def build_repo(path: str | Path, seed: int, n_commits: int) -> GroundTruth:
    return RepoBuilder(path, seed).build(n_commits)
