"""The default catalog of 14 ML-specific code smells.

Stage assignments follow the usual pipeline-stage mapping for these smells
and can be overridden per kind through DetectorConfig.
"""

from __future__ import annotations

from dataclasses import dataclass

STAGE_DATA_CLEANING = "data cleaning"
STAGE_DATA_PREPARATION = "data preparation"
STAGE_MODEL_TRAINING = "model training"
STAGE_MODEL_EVALUATION = "model evaluation"
STAGE_GENERAL = "general"

PIPELINE_STAGES = (
    STAGE_DATA_CLEANING,
    STAGE_DATA_PREPARATION,
    STAGE_MODEL_TRAINING,
    STAGE_MODEL_EVALUATION,
    STAGE_GENERAL,
)

SCOPE_EXPRESSION = "expression"
SCOPE_STATEMENT = "statement"
SCOPE_LOOP = "loop"
SCOPE_FILE = "file"


@dataclass(frozen=True)
class SmellKind:
    id: str
    name: str
    pipeline_stage: str
    scope: str
    libraries: tuple[str, ...]
    description: str


_KINDS = (
    SmellKind(
        id="chain-indexing",
        name="Chain Indexing",
        pipeline_stage=STAGE_DATA_PREPARATION,
        scope=SCOPE_EXPRESSION,
        libraries=("pandas",),
        description=(
            "Stacked subscripts on a dataframe (df[a][b]) trigger extra "
            "intermediate frames and unpredictable chained-assignment "
            "behaviour; use df.loc[a, b]."
        ),
    ),
    SmellKind(
        id="columns-dtype-not-set",
        name="Columns and DataType Not Explicitly Set",
        pipeline_stage=STAGE_DATA_CLEANING,
        scope=SCOPE_STATEMENT,
        libraries=("pandas",),
        description=(
            "read_csv/read_table without dtype or usecols leaves column "
            "selection and types to inference, which silently drifts with "
            "the data."
        ),
    ),
    SmellKind(
        id="dataframe-conversion-misused",
        name="DataFrame Conversion API Misused",
        pipeline_stage=STAGE_DATA_PREPARATION,
        scope=SCOPE_EXPRESSION,
        libraries=("pandas",),
        description=(
            ".values on a dataframe has ambiguous return types; "
            "to_numpy() is the explicit conversion."
        ),
    ),
    SmellKind(
        id="deterministic-option-not-used",
        name="Deterministic Algorithm Option Not Used",
        pipeline_stage=STAGE_MODEL_TRAINING,
        scope=SCOPE_FILE,
        libraries=("torch",),
        description=(
            "Training code (backward passes) without "
            "use_deterministic_algorithms makes runs irreproducible on "
            "nondeterministic kernels."
        ),
    ),
    SmellKind(
        id="empty-column-misinit",
        name="Empty Column Misinitialization",
        pipeline_stage=STAGE_DATA_CLEANING,
        scope=SCOPE_STATEMENT,
        libraries=("pandas",),
        description=(
            "Initializing a new dataframe column with 0 or '' instead of "
            "NaN corrupts missing-value semantics downstream."
        ),
    ),
    SmellKind(
        id="gradients-not-cleared",
        name="Gradients Not Cleared before Backward Propagation",
        pipeline_stage=STAGE_MODEL_TRAINING,
        scope=SCOPE_LOOP,
        libraries=("torch",),
        description=(
            "backward() inside a loop without a preceding zero_grad() "
            "accumulates gradients across iterations and can blow up "
            "training."
        ),
    ),
    SmellKind(
        id="hyperparameters-not-set",
        name="Hyperparameter Not Explicitly Set",
        pipeline_stage=STAGE_MODEL_TRAINING,
        scope=SCOPE_STATEMENT,
        libraries=("sklearn", "torch", "tensorflow"),
        description=(
            "Estimator or optimizer constructed with every hyperparameter "
            "left at its default; defaults change across versions and hide "
            "tuning intent."
        ),
    ),
    SmellKind(
        id="inplace-api-misused",
        name="In-Place APIs Misused",
        pipeline_stage=STAGE_DATA_CLEANING,
        scope=SCOPE_STATEMENT,
        libraries=("pandas",),
        description=(
            "A pandas transform whose result is discarded (no assignment, "
            "no inplace=True) is a no-op the author almost certainly did "
            "not intend."
        ),
    ),
    SmellKind(
        id="matmul-api-misused",
        name="Matrix Multiplication API Misused",
        pipeline_stage=STAGE_DATA_PREPARATION,
        scope=SCOPE_EXPRESSION,
        libraries=("numpy",),
        description=(
            "np.dot on two matrices is better written as matmul/@, whose "
            "broadcasting rules match the mathematical intent."
        ),
    ),
    SmellKind(
        id="memory-not-freed",
        name="Memory Not Freed",
        pipeline_stage=STAGE_MODEL_TRAINING,
        scope=SCOPE_LOOP,
        libraries=("tensorflow", "torch"),
        description=(
            "Constructing models inside a loop without freeing "
            "(clear_session/empty_cache/del) leaks graph memory across "
            "iterations."
        ),
    ),
    SmellKind(
        id="merge-params-not-set",
        name="Merge API Parameter Not Explicitly Set",
        pipeline_stage=STAGE_DATA_PREPARATION,
        scope=SCOPE_STATEMENT,
        libraries=("pandas",),
        description=(
            "merge without explicit how/on relies on defaults that "
            "silently change join semantics when columns drift."
        ),
    ),
    SmellKind(
        id="nan-equivalence-misused",
        name="NaN Equivalence Comparison Misused",
        pipeline_stage=STAGE_DATA_CLEANING,
        scope=SCOPE_EXPRESSION,
        libraries=("numpy", "pandas"),
        description=(
            "x == np.nan is always False; NaN checks need isnan/isna."
        ),
    ),
    SmellKind(
        id="randomness-uncontrolled",
        name="Randomness Uncontrolled",
        pipeline_stage=STAGE_GENERAL,
        scope=SCOPE_FILE,
        libraries=("numpy", "torch", "tensorflow"),
        description=(
            "Random-number APIs used without any seed call make results "
            "irreproducible."
        ),
    ),
    SmellKind(
        id="unnecessary-iteration",
        name="Unnecessary Iteration",
        pipeline_stage=STAGE_DATA_PREPARATION,
        scope=SCOPE_LOOP,
        libraries=("pandas", "torch"),
        description=(
            "Looping over dataframe rows or indexing tensors element-wise "
            "where a vectorized operation exists."
        ),
    ),
)

_BY_ID = {kind.id: kind for kind in _KINDS}

assert len(_KINDS) == 14 and len(_BY_ID) == 14


def catalog(stage_overrides: dict[str, str] | None = None) -> list[SmellKind]:
    """The 14 smell kinds, ordered by id."""
    kinds = list(_KINDS)
    if stage_overrides:
        kinds = [
            SmellKind(
                id=k.id,
                name=k.name,
                pipeline_stage=stage_overrides.get(k.id, k.pipeline_stage),
                scope=k.scope,
                libraries=k.libraries,
                description=k.description,
            )
            for k in kinds
        ]
    return kinds


def kind_by_id(kind_id: str) -> SmellKind:
    try:
        return _BY_ID[kind_id]
    except KeyError:
        raise KeyError(f"unknown smell kind: {kind_id!r}") from None
