"""Command-line entry point.

Subcommands: detect | mine | lifecycle | analyze | sample | validate.
Exit codes are fixed: 0 success, 1 policy failure (--fail-on-smell found
smells), 2 operational error. All outputs are deterministic for a given
(inputs, seed, config) triple.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path
from typing import NoReturn

import click

from mlsmells import __version__
from mlsmells.analysis.pipeline import MissingArtifactError, analyze_corpus, write_analysis_outputs
from mlsmells.analysis.study import sample_size
from mlsmells.analysis.validation import (
    ValidationSheet,
    cohen_kappa_sheets,
    generate_validation_package,
    majority_vote,
    precision_recall,
    read_sheet_csv,
)
from mlsmells.detectors import (
    DetectionReport,
    DetectorConfig,
    FileReport,
    SmellInstance,
    detect_snapshot,
)
from mlsmells.histminer import RepoError, walk_history, write_commits_csv
from mlsmells.lifecycle import (
    DetectionCache,
    run_lifecycle,
    traces_to_dict,
    write_lifecycle_csv,
)

EXIT_OK = 0
EXIT_POLICY = 1
EXIT_ERROR = 2

log = logging.getLogger("mlsmells")


def _fail(message: str) -> NoReturn:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_ERROR)


def _load_config(config_path: str | None) -> DetectorConfig:
    if config_path is None:
        return DetectorConfig()
    try:
        return DetectorConfig.load(config_path)
    except (OSError, ValueError) as exc:
        _fail(f"cannot load detector config {config_path}: {exc}")


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


@click.group()
@click.version_option(__version__)
@click.option("--verbose", is_flag=True, help="debug logging")
def main(verbose: bool) -> None:
    """Detect ML-specific code smells and mine their lifecycle across git history."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(), help="detector config (YAML/JSON)")
@click.option("--out", "out_dir", default="mlsmells-out", show_default=True)
@click.option("--fail-on-smell", is_flag=True, help="exit 1 when any smell is found")
@click.option("--jobs", default=None, type=int, help="parallel workers (default: all cores)")
@click.option("--project", default="", help="project name recorded in the report")
def detect(paths, config_path, out_dir, fail_on_smell, jobs, project) -> None:
    """Detect smells in one or more working trees; writes report.json."""
    config = _load_config(config_path)
    if jobs is None or jobs == 0:
        jobs = os.cpu_count() or 1
    out = Path(out_dir)
    total_instances = 0
    for path in paths:
        if not Path(path).is_dir():
            _fail(f"path does not exist or is not a directory: {path}")
    for path in paths:
        name = project or Path(path).resolve().name
        report = detect_snapshot(path, config=config, project=name, jobs=jobs)
        target = out / "report.json" if len(paths) == 1 else out / name / "report.json"
        _write_json(target, report.to_dict())
        n = len(report.instances)
        total_instances += n
        click.echo(f"{path}: {n} instance(s) in {report.ml_files} ML file(s) -> {target}")
    if fail_on_smell and total_instances > 0:
        sys.exit(EXIT_POLICY)


def _read_manifest(manifest: str) -> list[tuple[str, str]]:
    entries: list[tuple[str, str]] = []
    for raw_line in Path(manifest).read_text(encoding="utf-8").splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" in line:
            name, path = line.split("=", 1)
            entries.append((name.strip(), path.strip()))
        else:
            entries.append((Path(line).name, line))
    return entries


@main.command()
@click.argument("repos", nargs=-1, type=click.Path())
@click.option("--manifest", type=click.Path(), help="file with one `name=path` (or path) per line")
@click.option("--out", "out_dir", default="mlsmells-out", show_default=True)
@click.option("--release-tag-pattern", default=None, help="regex filtering which tags count as releases")
def mine(repos, manifest, out_dir, release_tag_pattern) -> None:
    """Extract commit histories to per-project commits.csv (resumable)."""
    entries: list[tuple[str, str]] = [(Path(r).name, r) for r in repos]
    if manifest:
        if not Path(manifest).is_file():
            _fail(f"manifest not found: {manifest}")
        entries += _read_manifest(manifest)
    if not entries:
        _fail("nothing to mine: pass repository paths or --manifest")
    out = Path(out_dir)
    for name, repo in entries:
        project_dir = out / name
        done_marker = project_dir / ".mine-done"
        if done_marker.exists():
            click.echo(f"{name}: already mined, skipping")
            continue
        try:
            records = walk_history(repo, tag_pattern=release_tag_pattern)
        except RepoError as exc:
            click.echo(f"warning: {name}: {exc}; skipped", err=True)
            continue
        project_dir.mkdir(parents=True, exist_ok=True)
        with open(project_dir / "commits.csv", "w", newline="", encoding="utf-8") as fh:
            write_commits_csv(records, fh)
        done_marker.write_text("ok\n", encoding="utf-8")
        click.echo(f"{name}: {len(records)} commit(s) -> {project_dir / 'commits.csv'}")


@main.command("lifecycle")
@click.argument("repo", type=click.Path())
@click.option("--config", "config_path", type=click.Path())
@click.option("--out", "out_dir", default="mlsmells-out", show_default=True)
@click.option("--threshold", default=0.8, show_default=True, help="snippet-similarity match threshold")
@click.option("--rename-threshold", default=60, show_default=True, help="git rename similarity (percent)")
@click.option(
    "--cache-dir",
    envvar="MLSMELLS_CACHE",
    default=None,
    help="persistent detection cache directory (env: MLSMELLS_CACHE)",
)
@click.option("--no-censor", is_flag=True, help="skip the survival censoring rule")
def lifecycle_cmd(repo, config_path, out_dir, threshold, rename_threshold, cache_dir, no_censor) -> None:
    """Track every smell instance across a repository's history."""
    config = _load_config(config_path)
    if not Path(repo).exists():
        _fail(f"repository not found: {repo}")
    cache = DetectionCache(cache_dir) if cache_dir else None
    try:
        result = run_lifecycle(
            repo,
            config=config,
            cache=cache,
            threshold=threshold,
            rename_threshold=rename_threshold,
            censor=not no_censor,
        )
    except RepoError as exc:
        _fail(str(exc))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "lifecycle.csv", "w", newline="", encoding="utf-8") as fh:
        write_lifecycle_csv(result.records, fh)
    _write_json(out / "traces.json", traces_to_dict(result.traces))
    for flag in result.censoring_flags:
        click.echo(f"note: {flag}", err=True)
    click.echo(
        f"{repo}: {len(result.records)} trace(s) over {len(result.detections.shas)} commit(s) "
        f"-> {out / 'lifecycle.csv'}"
    )


@main.command()
@click.option("--artifacts", "artifacts_dir", type=click.Path(), help="directory of per-project outputs")
@click.option("--catalog", "catalog_csv", type=click.Path(), help="project catalog CSV")
@click.option("--out", "out_dir", default="mlsmells-out", show_default=True)
@click.option("--alpha", default=0.05, show_default=True)
@click.option("--holm", is_flag=True, help="attach Holm-Bonferroni adjusted p-values")
@click.option("--kruskal", is_flag=True, help="also run per-kind Kruskal-Wallis for the size groups")
@click.option("--config", "config_path", type=click.Path())
@click.option("--sample", "sample_n", type=int, default=None, help="just print the sample size for N")
@click.option("--confidence", default=0.95, show_default=True)
@click.option("--margin", default=0.05, show_default=True)
def analyze(artifacts_dir, catalog_csv, out_dir, alpha, holm, kruskal, config_path, sample_n, confidence, margin) -> None:
    """Run the statistical analysis over mined artifacts."""
    if sample_n is not None:
        click.echo(str(sample_size(sample_n, confidence, margin)))
        return
    if not artifacts_dir:
        _fail("missing artifact: --artifacts directory")
    if not catalog_csv:
        _fail("missing artifact: --catalog CSV")
    config = _load_config(config_path)
    try:
        analysis = analyze_corpus(
            artifacts_dir, catalog_csv, alpha=alpha, holm=holm, kruskal=kruskal, config=config
        )
    except MissingArtifactError as exc:
        _fail(str(exc))
    written = write_analysis_outputs(analysis, out_dir)
    for path in written:
        click.echo(f"wrote {path}")


@main.command()
@click.argument("population", type=int)
@click.option("--confidence", default=0.95, show_default=True)
@click.option("--margin", default=0.05, show_default=True)
def sample(population, confidence, margin) -> None:
    """Cochran sample size with finite-population correction."""
    try:
        click.echo(str(sample_size(population, confidence, margin)))
    except ValueError as exc:
        _fail(str(exc))


@main.command()
@click.argument("report_json", type=click.Path(), required=False)
@click.option("--out", "out_dir", default="validation-package", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--confidence", default=0.95, show_default=True)
@click.option("--margin", default=0.05, show_default=True)
@click.option(
    "--score",
    "sheets",
    multiple=True,
    type=click.Path(),
    help="rater sheet CSVs; switches to scoring mode (kappa, majority vote, precision/recall)",
)
def validate(report_json, out_dir, seed, confidence, margin, sheets) -> None:
    """Generate a rater validation package, or score returned sheets."""
    if not sheets:
        if not report_json:
            _fail("missing artifact: report.json (or pass --score sheets)")
        if not Path(report_json).is_file():
            _fail(f"report not found: {report_json}")
        data = json.loads(Path(report_json).read_text(encoding="utf-8"))
        report = DetectionReport(
            project=data["project"],
            commit=data["commit"],
            total_files=data["total_files"],
            ml_files=data["ml_files"],
            total_loc=data["total_loc"],
            files=[
                FileReport(
                    path=f["path"],
                    loc=f["loc"],
                    instances=[SmellInstance.from_dict(i) for i in f["instances"]],
                )
                for f in data["files"]
            ],
        )
        try:
            package = generate_validation_package(
                report, out_dir, confidence=confidence, margin=margin, seed=seed
            )
        except ValueError as exc:
            _fail(str(exc))
        click.echo(f"sampled {len(package.files)} file(s) -> {package.directory}")
        return

    loaded = []
    for sheet_path in sheets:
        if not Path(sheet_path).is_file():
            _fail(f"sheet not found: {sheet_path}")
        try:
            loaded.append(read_sheet_csv(sheet_path))
        except ValueError as exc:
            _fail(str(exc))
    try:
        truth, ties = majority_vote(loaded)
        kappas = [
            {
                "rater_a": a.rater,
                "rater_b": b.rater,
                "kappa": cohen_kappa_sheets(a, b),
            }
            for i, a in enumerate(loaded)
            for b in loaded[i + 1 :]
        ]
    except ValueError as exc:
        _fail(str(exc))
    score: dict = {
        "raters": [s.rater for s in loaded],
        "pairwise_kappa": kappas,
        "majority_ties": [{"file": f, "kind": k} for f, k in ties],
    }
    if report_json:
        if not Path(report_json).is_file():
            _fail(f"report not found: {report_json}")
        data = json.loads(Path(report_json).read_text(encoding="utf-8"))
        flagged = {
            (i["file"], i["kind"]) for f in data["files"] for i in f["instances"]
        }
        tool = ValidationSheet(
            rater="tool",
            files=truth.files,
            kinds=truth.kinds,
            cells=tuple(
                tuple((file, kind) in flagged for kind in truth.kinds) for file in truth.files
            ),
        )
        score["precision_recall"] = precision_recall(tool, truth)
    out = Path(out_dir)
    _write_json(out / "score.json", score)
    click.echo(f"wrote {out / 'score.json'}")


if __name__ == "__main__":
    main()
