from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
FIXTURES = TESTS_DIR / "fixtures"

sys.path.insert(0, str(TESTS_DIR))  # makes repogen importable from any test


@pytest.fixture(scope="session")
def listing_smelly() -> str:
    return (FIXTURES / "listing_smelly.py").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def listing_fixed() -> str:
    return (FIXTURES / "listing_fixed.py").read_text(encoding="utf-8")


class GitSandbox:
    """Minimal scripted-repo helper for mining tests."""

    def __init__(self, path: Path) -> None:
        self.path = path
        self.count = 0
        self.run("init", "-q", "-b", "main")
        self.run("config", "user.email", "t@example.invalid")
        self.run("config", "user.name", "tester")

    def run(self, *args: str, env: dict | None = None) -> str:
        import os

        full = dict(os.environ)
        if env:
            full.update(env)
        return subprocess.run(
            ["git", "-C", str(self.path), *args],
            check=True,
            capture_output=True,
            text=True,
            env=full,
        ).stdout

    def write(self, name: str, content: str) -> None:
        target = self.path / name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(content, encoding="utf-8")

    def delete(self, name: str) -> None:
        (self.path / name).unlink()

    def move(self, old: str, new: str) -> None:
        self.run("mv", old, new)

    def commit(self, message: str, days: int | None = None) -> str:
        self.count += 1
        day = days if days is not None else self.count
        stamp = f"2021-01-{day:02d}T00:00:00Z"
        self.run("add", "-A")
        self.run(
            "commit",
            "-q",
            "--allow-empty",
            "-m",
            message,
            env={"GIT_AUTHOR_DATE": stamp, "GIT_COMMITTER_DATE": stamp},
        )
        return self.run("rev-parse", "HEAD").strip()

    def tag(self, name: str) -> None:
        self.run("tag", name)


@pytest.fixture
def git_repo(tmp_path: Path) -> GitSandbox:
    repo = tmp_path / "repo"
    repo.mkdir()
    return GitSandbox(repo)
