"""Statistics, sampling, segmentation, rationale tagging, and validation
scoring for the smell-lifecycle study."""

from mlsmells.analysis.stats import (
    CliffsDelta,
    StatResult,
    chi2_sf,
    cliffs_delta,
    cliffs_magnitude,
    cohen_kappa,
    friedman,
    holm_bonferroni,
    kappa_from_rates,
    kruskal_wallis,
    normal_sf,
    rankdata,
    wilcoxon_rank_sum,
    wilcoxon_signed_rank,
)
from mlsmells.analysis.study import (
    ACTIVITY_BUCKETS,
    DEFAULT_RATIONALE_KEYWORDS,
    DEV_TIME_BUCKETS,
    RATIONALE_TAGS,
    RELEASE_BUCKETS,
    RationaleTag,
    SegmentLabel,
    SizeGrouping,
    cooccurrence,
    detect_self_admission,
    next_release_after,
    prevalence,
    quantile_linear,
    sample_size,
    segment_commit,
    size_groups,
    tag_rationale,
)
from mlsmells.analysis.validation import (
    ValidationPackage,
    ValidationSheet,
    cohen_kappa_sheets,
    generate_validation_package,
    majority_vote,
    precision_recall,
    read_sheet_csv,
    report_to_sheet,
    sheet_from_rows,
    write_sheet_csv,
)

__all__ = [
    "ACTIVITY_BUCKETS",
    "CliffsDelta",
    "DEFAULT_RATIONALE_KEYWORDS",
    "DEV_TIME_BUCKETS",
    "RATIONALE_TAGS",
    "RELEASE_BUCKETS",
    "RationaleTag",
    "SegmentLabel",
    "SizeGrouping",
    "StatResult",
    "ValidationPackage",
    "ValidationSheet",
    "chi2_sf",
    "cliffs_delta",
    "cliffs_magnitude",
    "cohen_kappa",
    "cohen_kappa_sheets",
    "cooccurrence",
    "detect_self_admission",
    "friedman",
    "generate_validation_package",
    "holm_bonferroni",
    "kappa_from_rates",
    "kruskal_wallis",
    "majority_vote",
    "next_release_after",
    "normal_sf",
    "precision_recall",
    "prevalence",
    "quantile_linear",
    "rankdata",
    "read_sheet_csv",
    "report_to_sheet",
    "sample_size",
    "segment_commit",
    "sheet_from_rows",
    "size_groups",
    "tag_rationale",
    "wilcoxon_rank_sum",
    "wilcoxon_signed_rank",
    "write_sheet_csv",
]
