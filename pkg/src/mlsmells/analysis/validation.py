"""Manual-validation machinery: rater spreadsheets, inter-rater agreement,
majority-vote ground truth, tool precision/recall, and the generator for
the packages handed to human raters."""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

from mlsmells.analysis.stats import cohen_kappa
from mlsmells.analysis.study import sample_size
from mlsmells.detectors.catalog import SmellKind, catalog
from mlsmells.detectors.engine import DetectionReport


@dataclass(frozen=True)
class ValidationSheet:
    """One rater's file x smell-kind boolean matrix."""

    rater: str
    files: tuple[str, ...]
    kinds: tuple[str, ...]
    cells: tuple[tuple[bool, ...], ...]  # rows follow files, columns follow kinds

    def __post_init__(self) -> None:
        if len(self.cells) != len(self.files):
            raise ValueError("one row per file required")
        if any(len(row) != len(self.kinds) for row in self.cells):
            raise ValueError("one column per kind required")

    def flat(self) -> list[bool]:
        return [cell for row in self.cells for cell in row]

    def value(self, file: str, kind: str) -> bool:
        return self.cells[self.files.index(file)][self.kinds.index(kind)]

    def same_shape(self, other: "ValidationSheet") -> bool:
        return self.files == other.files and self.kinds == other.kinds


def sheet_from_rows(
    rater: str,
    files: Sequence[str],
    kinds: Sequence[str],
    rows: Sequence[Sequence[bool]],
) -> ValidationSheet:
    return ValidationSheet(
        rater=rater,
        files=tuple(files),
        kinds=tuple(kinds),
        cells=tuple(tuple(bool(c) for c in row) for row in rows),
    )


def write_sheet_csv(sheet: ValidationSheet, out: IO[str], empty: bool = False) -> None:
    """sheet.csv layout: header `file,<kind ids...>`, one row per file with
    Yes/No cells (blank when writing the empty template for raters)."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["file", *sheet.kinds])
    for file, row in zip(sheet.files, sheet.cells):
        if empty:
            writer.writerow([file, *[""] * len(sheet.kinds)])
        else:
            writer.writerow([file, *["Yes" if c else "No" for c in row]])


def read_sheet_csv(path: str | Path, rater: str | None = None) -> ValidationSheet:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[0] != "file":
            raise ValueError(f"{path}: first column must be 'file'")
        kinds = tuple(header[1:])
        files: list[str] = []
        rows: list[tuple[bool, ...]] = []
        for line_num, row in enumerate(reader, start=2):
            if not row:
                continue
            files.append(row[0])
            values = []
            for cell in row[1:]:
                word = cell.strip().lower()
                if word in ("yes", "y", "true", "1"):
                    values.append(True)
                elif word in ("no", "n", "false", "0"):
                    values.append(False)
                else:
                    raise ValueError(f"{path}:{line_num}: cell {cell!r} is not Yes/No")
            rows.append(tuple(values))
    return ValidationSheet(
        rater=rater or Path(path).stem, files=tuple(files), kinds=kinds, cells=tuple(rows)
    )


def cohen_kappa_sheets(a: ValidationSheet, b: ValidationSheet) -> float:
    """Inter-rater agreement over the flattened file x kind cells."""
    if not a.same_shape(b):
        raise ValueError("sheets must have identical file and kind axes")
    return cohen_kappa(a.flat(), b.flat())


def majority_vote(sheets: Sequence[ValidationSheet]) -> tuple[ValidationSheet, list[tuple[str, str]]]:
    """Ground truth: a cell is Yes iff strictly more than half the raters
    said Yes. Exact ties resolve to No and are reported."""
    if not sheets:
        raise ValueError("majority_vote requires at least one sheet")
    first = sheets[0]
    for other in sheets[1:]:
        if not first.same_shape(other):
            raise ValueError("sheets must have identical file and kind axes")
    ties: list[tuple[str, str]] = []
    rows: list[tuple[bool, ...]] = []
    n = len(sheets)
    for r, file in enumerate(first.files):
        row: list[bool] = []
        for c, kind in enumerate(first.kinds):
            yes = sum(1 for sheet in sheets if sheet.cells[r][c])
            if 2 * yes == n:
                ties.append((file, kind))
                row.append(False)
            else:
                row.append(2 * yes > n)
        rows.append(tuple(row))
    truth = ValidationSheet(rater="majority", files=first.files, kinds=first.kinds, cells=tuple(rows))
    return truth, ties


def report_to_sheet(
    report: DetectionReport, files: Sequence[str], kinds: Sequence[str]
) -> ValidationSheet:
    """Project a detection report onto a file x kind Yes/No matrix."""
    flagged = {(inst.file, inst.kind) for inst in report.instances}
    rows = [tuple((file, kind) in flagged for kind in kinds) for file in files]
    return ValidationSheet(rater="tool", files=tuple(files), kinds=tuple(kinds), cells=tuple(rows))


def precision_recall(tool: ValidationSheet, truth: ValidationSheet) -> dict:
    """Per-kind and overall precision/recall of the tool sheet against the
    ground truth; undefined ratios (zero denominators) are None."""
    if not tool.same_shape(truth):
        raise ValueError("tool and truth sheets must have identical axes")

    def ratios(tp: int, fp: int, fn: int) -> dict:
        precision = tp / (tp + fp) if tp + fp else None
        recall = tp / (tp + fn) if tp + fn else None
        return {"tp": tp, "fp": fp, "fn": fn, "precision": precision, "recall": recall}

    out: dict = {"per_kind": {}}
    total_tp = total_fp = total_fn = 0
    for c, kind in enumerate(tool.kinds):
        tp = fp = fn = 0
        for r in range(len(tool.files)):
            predicted, actual = tool.cells[r][c], truth.cells[r][c]
            if predicted and actual:
                tp += 1
            elif predicted:
                fp += 1
            elif actual:
                fn += 1
        out["per_kind"][kind] = ratios(tp, fp, fn)
        total_tp += tp
        total_fp += fp
        total_fn += fn
    out["overall"] = ratios(total_tp, total_fp, total_fn)
    return out


@dataclass
class ValidationPackage:
    directory: Path
    files: list[str]
    kinds: list[str]


def generate_validation_package(
    report: DetectionReport,
    out_dir: str | Path,
    confidence: float = 0.95,
    margin: float = 0.05,
    seed: int = 0,
    kinds: list[SmellKind] | None = None,
) -> ValidationPackage:
    """Sample ML files for manual annotation and emit the rater package:
    files.txt, a README with the smell definitions, and an empty
    file x kind spreadsheet. Sampling is uniform and fully seeded."""
    kinds = kinds or catalog()
    ml_files = sorted(f.path for f in report.files)
    if not ml_files:
        raise ValueError("report contains no ML-classified files to sample")
    k = sample_size(len(ml_files), confidence, margin)
    rng = random.Random(seed)
    sampled = sorted(rng.sample(ml_files, k))

    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "files.txt").write_text("\n".join(sampled) + "\n", encoding="utf-8")

    lines = [
        "# Manual validation package",
        "",
        f"Annotate each of the {len(sampled)} files in files.txt: for every file",
        "and every smell listed below, enter Yes in sheet.csv if the file",
        "contains that smell, No otherwise. Every cell must be filled.",
        "",
        "## Smell definitions",
        "",
    ]
    for kind in kinds:
        lines.append(f"- **{kind.name}** (`{kind.id}`, {kind.pipeline_stage}): {kind.description}")
    lines.append("")
    (directory / "README.md").write_text("\n".join(lines), encoding="utf-8")

    kind_ids = [kind.id for kind in kinds]
    template = ValidationSheet(
        rater="template",
        files=tuple(sampled),
        kinds=tuple(kind_ids),
        cells=tuple(tuple(False for _ in kind_ids) for _ in sampled),
    )
    with open(directory / "sheet.csv", "w", newline="", encoding="utf-8") as fh:
        write_sheet_csv(template, fh, empty=True)
    return ValidationPackage(directory=directory, files=sampled, kinds=kind_ids)
