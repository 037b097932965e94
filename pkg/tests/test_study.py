from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlsmells.analysis.study import (
    ACTIVITY_BUCKETS,
    DEV_TIME_BUCKETS,
    RELEASE_BUCKETS,
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
from mlsmells.detectors import DetectionReport, FileReport, SmellInstance, kind_by_id
from mlsmells.histminer import CommitRecord, ProjectRecord

DAY = 86400


def commit(ordinal: int, timestamp: int, message: str = "m", release: bool = False) -> CommitRecord:
    return CommitRecord(
        sha=f"sha{ordinal}",
        parents=(),
        timestamp=timestamp,
        message=message,
        files_total=1,
        files_added=0,
        files_removed=0,
        ordinal=ordinal,
        is_release=release,
    )


def project(name: str, loc: int, ci: bool = False) -> ProjectRecord:
    return ProjectRecord(name=name, url="", stars=100, commit_count=100, loc=loc, has_ci=ci)


class TestPrevalence:
    def _report(self, n_instances: int, loc: int) -> DetectionReport:
        instances = [
            SmellInstance(kind="chain-indexing", file="a.py", line=i + 1, snippet="s")
            for i in range(n_instances)
        ]
        return DetectionReport(
            project="p",
            files=[FileReport(path="a.py", loc=loc, instances=instances)],
            total_files=1,
            ml_files=1,
            total_loc=loc,
        )

    def test_five_instances_in_ten_kloc(self):
        result = prevalence(self._report(5, 10_000))
        assert result["per_kind"]["chain-indexing"] == {"count": 5, "per_kloc": 0.5}

    def test_zero_instances(self):
        result = prevalence(self._report(0, 1000))
        assert result["per_kind"]["chain-indexing"] == {"count": 0, "per_kloc": 0.0}

    def test_zero_loc_normalization_absent(self):
        report = DetectionReport(project="p", total_files=0, ml_files=0, total_loc=0)
        result = prevalence(report)
        assert result["per_kind"]["chain-indexing"]["per_kloc"] is None

    def test_stage_rollup_partitions_counts(self):
        result = prevalence(self._report(3, 1000))
        total_from_stages = sum(s["count"] for s in result["per_stage"].values())
        total_from_kinds = sum(k["count"] for k in result["per_kind"].values())
        assert total_from_stages == total_from_kinds == 3


class TestSizeGroups:
    def test_three_projects_one_per_group(self):
        grouping = size_groups([project("a", 1), project("b", 2), project("c", 3)])
        groups = {p.name: p.size_group for p in grouping.projects}
        assert groups == {"a": "small", "b": "medium", "c": "large"}
        assert grouping.small_boundary == pytest.approx(1.6)
        assert grouping.large_boundary == pytest.approx(2.2)

    def test_all_equal_loc_degenerate_all_medium(self):
        grouping = size_groups([project(c, 5) for c in "abcd"])
        assert grouping.degenerate
        assert {p.size_group for p in grouping.projects} == {"medium"}

    def test_boundaries_use_linear_interpolation(self):
        locs = [100, 200, 300, 400, 500, 600, 700, 800, 900, 1000]
        grouping = size_groups([project(f"p{i}", loc) for i, loc in enumerate(locs)])
        assert grouping.small_boundary == pytest.approx(quantile_linear(locs, 0.30))
        assert grouping.large_boundary == pytest.approx(quantile_linear(locs, 0.60))

    def test_partition_every_project_exactly_one_group(self):
        projects = [project(f"p{i}", (i * 37) % 1000 + 1) for i in range(25)]
        grouping = size_groups(projects)
        assert len(grouping.projects) == len(projects)
        for p in grouping.projects:
            assert p.size_group in ("small", "medium", "large")

    def test_too_few_projects_rejected(self):
        with pytest.raises(ValueError):
            size_groups([project("a", 1), project("b", 2)])


class TestQuantile:
    def test_midpoint(self):
        assert quantile_linear([0, 10], 0.5) == 5.0

    def test_matches_numpy_convention(self):
        values = [3, 1, 4, 1, 5, 9, 2, 6]
        # frozen expected values computed with the (n-1)*q interpolation rule
        assert quantile_linear(values, 0.30) == pytest.approx(2.1)
        assert quantile_linear(values, 0.60) == pytest.approx(4.2)


class TestSampleSize:
    @pytest.mark.parametrize("population,expected", [(167, 117), (169, 118), (224, 142)])
    def test_paper_exact_values(self, population, expected):
        assert sample_size(population) == expected

    def test_limit_is_385(self):
        assert sample_size(10**9) == 385

    def test_monotone_in_population(self):
        values = [sample_size(n) for n in range(1, 800)]
        assert all(a <= b for a, b in zip(values, values[1:]))

    def test_tiny_population_capped(self):
        assert sample_size(1) == 1
        assert sample_size(5) == 5

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            sample_size(0)
        with pytest.raises(ValueError):
            sample_size(10, margin=0.0)
        with pytest.raises(ValueError):
            sample_size(10, confidence=1.5)


class TestSegmentation:
    def test_five_days_is_one_week_bucket(self):
        label = segment_commit(commit(3, 5 * DAY), 0, 100, None)
        assert label.development_time == "one week"

    def test_ordinal_three_of_hundred_is_first_ten_percent(self):
        label = segment_commit(commit(3, 0), 0, 100, None)
        assert label.activity_level == "first 10%"

    def test_half_day_before_release_is_one_day(self):
        label = segment_commit(commit(0, 0), 0, 10, DAY // 2)
        assert label.release_distance == "one day"

    def test_no_later_release_is_more_than_one_month(self):
        label = segment_commit(commit(0, 0), 0, 10, None)
        assert label.release_distance == "more than one month"

    def test_boundaries_first_matching_bucket(self):
        assert segment_commit(commit(0, 7 * DAY), 0, 10, None).development_time == "one week"
        assert segment_commit(commit(0, 7 * DAY + 1), 0, 10, None).development_time == "one month"
        assert segment_commit(commit(0, 366 * DAY), 0, 10, None).development_time == "more than one year"

    @settings(max_examples=100, deadline=None)
    @given(
        st.integers(0, 99),
        st.integers(0, 500 * DAY),
        st.one_of(st.none(), st.integers(0, 500 * DAY)),
    )
    def test_each_axis_assigns_exactly_one_bucket(self, ordinal, age, release_gap):
        c = commit(ordinal, age)
        next_release = age + release_gap if release_gap is not None else None
        label = segment_commit(c, 0, 100, next_release)
        assert label.development_time in DEV_TIME_BUCKETS
        assert label.activity_level in ACTIVITY_BUCKETS
        assert label.release_distance in RELEASE_BUCKETS

    def test_next_release_after(self):
        releases = [commit(5, 50 * DAY, release=True), commit(9, 90 * DAY, release=True)]
        assert next_release_after(commit(0, 10 * DAY), releases) == 50 * DAY
        assert next_release_after(commit(7, 70 * DAY), releases) == 90 * DAY
        assert next_release_after(commit(11, 100 * DAY), releases) is None


class TestRationale:
    def test_fix_crash_is_bug_fixing(self):
        assert tag_rationale("Fix crash when dataframe empty").tags == ("bug-fixing",)

    def test_add_support_is_new_feature(self):
        assert tag_rationale("Add support for TPU training").tags == ("new-feature",)

    def test_wip_unclassified(self):
        assert tag_rationale("wip").tags == ("unclassified",)

    def test_multi_tag_message_records_all(self):
        tag = tag_rationale("Fix bug and add new endpoint")
        assert set(tag.tags) == {"bug-fixing", "new-feature"}

    def test_stem_prefix_matches_inflections(self):
        assert tag_rationale("Improved the loader").tags == ("enhancement",)
        assert tag_rationale("refactoring session").tags == ("refactoring",)

    def test_case_insensitive(self):
        assert tag_rationale("FIXED THE THING").tags == ("bug-fixing",)

    def test_matched_keywords_recorded(self):
        tag = tag_rationale("fix the bug")
        assert set(tag.matched_keywords["bug-fixing"]) == {"fix", "bug"}


class TestSelfAdmission:
    def test_kind_id_phrase_matches(self):
        kind = kind_by_id("gradients-not-cleared")
        assert detect_self_admission("known issue: gradients not cleared yet", kind)

    def test_unrelated_message_does_not_match(self):
        assert not detect_self_admission("refactor", kind_by_id("gradients-not-cleared"))

    def test_configured_synonym(self):
        kind = kind_by_id("gradients-not-cleared")
        assert detect_self_admission("zero_grad missing", kind, extra_terms=("zero_grad missing",))

    def test_punctuation_and_case_insensitive(self):
        kind = kind_by_id("chain-indexing")
        assert detect_self_admission("TODO remove Chain-Indexing here", kind)

    def test_full_name_matches(self):
        kind = kind_by_id("gradients-not-cleared")
        message = "workaround: Gradients Not Cleared before Backward Propagation"
        assert detect_self_admission(message, kind)


class TestCooccurrence:
    def test_single_commit_single_cell(self):
        table = cooccurrence([(("bug-fixing",), ("chain-indexing",))])
        assert table["bug-fixing"]["chain-indexing"] == 1
        total = sum(v for row in table.values() for v in row.values())
        assert total == 1

    def test_multi_tag_increments_each_row(self):
        table = cooccurrence([(("bug-fixing", "new-feature"), ("chain-indexing",))])
        assert table["bug-fixing"]["chain-indexing"] == 1
        assert table["new-feature"]["chain-indexing"] == 1

    def test_empty_input_all_zero(self):
        table = cooccurrence([])
        assert all(v == 0 for row in table.values() for v in row.values())
        assert set(table) == {"bug-fixing", "enhancement", "new-feature", "refactoring", "unclassified"}
        assert all(len(row) == 14 for row in table.values())
