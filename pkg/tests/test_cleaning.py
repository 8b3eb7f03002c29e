from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from weblog_prep.cleaning import (
    CleaningConfig,
    clean,
    collect_robot_pairs,
    is_robot,
)
from weblog_prep.merging import JointLog
from weblog_prep.model import LogFormat, LogSource, ResourceClass
from weblog_prep.parsing import parse_line

from strategies import log_entries

SOURCE = LogSource("vanuatu", "x", LogFormat.ECLF)


@pytest.fixture
def sample_entries(sample_eclf_lines):
    return [parse_line(line, LogFormat.ECLF, SOURCE, i + 1)
            for i, line in enumerate(sample_eclf_lines)]


def joint(entries):
    counts = {}
    for e in entries:
        counts[e.server_name] = counts.get(e.server_name, 0) + 1
    return JointLog(entries=list(entries), source_counts=counts)


class TestIsRobot:
    def test_slurp_agent(self, sample_entries):
        config = CleaningConfig()
        assert is_robot(sample_entries[0], set(), config)

    def test_human_agent(self, sample_entries):
        config = CleaningConfig()
        assert not is_robot(sample_entries[2], set(), config)

    def test_robots_txt_pair_marks_whole_run(self, sample_entries):
        config = CleaningConfig()
        pairs = collect_robot_pairs(sample_entries, config)
        assert ("72.30.252.91", sample_entries[0].user_agent) in pairs
        # Same pair on a non-robots request is now a robot.
        other = replace(sample_entries[0], path="/page.html", line_number=99)
        assert is_robot(other, pairs, config)

    def test_substring_match_is_case_insensitive(self, sample_entries):
        config = CleaningConfig(robot_agent_substrings=("SLURP",))
        assert is_robot(sample_entries[0], set(), config)


class TestClean:
    def test_sample_corpus_keeps_only_the_page(self, sample_entries):
        cleaned, report = clean(joint(sample_entries), CleaningConfig())
        assert [e.path for e in cleaned.entries] == \
            ["/vanuatu/export/sites/VTO/fr/kids/volcanoes/ambrym_eruption.html"]
        assert report.removed_by_rule == {"robot": 1, "style": 1, "image": 2}
        assert report.reduction_percent == 80.0

    def test_empty_input(self):
        cleaned, report = clean(joint([]), CleaningConfig())
        assert cleaned.entries == []
        assert report.reduction_percent == 0.0
        assert report.input_count == 0

    def test_nothing_to_remove(self, sample_entries):
        page = sample_entries[2]
        entries = [replace(page, line_number=i + 1) for i in range(10)]
        cleaned, report = clean(joint(entries), CleaningConfig())
        assert report.kept_count == 10
        assert report.reduction_percent == 0.0

    def test_status_rule(self, sample_entries):
        page = replace(sample_entries[2], status=404)
        _, report = clean(joint([page]), CleaningConfig())
        assert report.removed_by_rule == {"status": 1}
        _, report = clean(joint([page]), CleaningConfig(keep_failed_status=True))
        assert report.kept_count == 1

    def test_method_rule(self, sample_entries):
        page = replace(sample_entries[2], method="OPTIONS")
        _, report = clean(joint([page]), CleaningConfig())
        assert report.removed_by_rule == {"method": 1}

    def test_first_matching_rule_gets_the_count(self, sample_entries):
        # A robot fetching an image is charged to the robot rule.
        robot_image = replace(sample_entries[0], path="/pic.gif")
        _, report = clean(joint([robot_image]), CleaningConfig())
        assert report.removed_by_rule == {"robot": 1}

    def test_page_never_removable(self):
        with pytest.raises(ValueError):
            CleaningConfig(remove_classes=frozenset({ResourceClass.PAGE}))


class TestCleanProperties:
    @settings(max_examples=150, deadline=None)
    @given(st.lists(log_entries(), max_size=40))
    def test_counts_reconcile(self, entries):
        _, report = clean(joint(entries), CleaningConfig())
        assert report.input_count == \
            report.kept_count + sum(report.removed_by_rule.values())
        assert report.input_bytes >= report.kept_bytes

    @settings(max_examples=150, deadline=None)
    @given(st.lists(log_entries(), max_size=40))
    def test_idempotent(self, entries):
        config = CleaningConfig()
        once, _ = clean(joint(entries), config)
        twice, second_report = clean(once, config)
        assert twice.entries == once.entries
        assert second_report.kept_count == second_report.input_count

    @settings(max_examples=150, deadline=None)
    @given(st.lists(log_entries(), max_size=40))
    def test_order_preserved(self, entries):
        cleaned, _ = clean(joint(entries), CleaningConfig())
        kept_ids = [id(e) for e in cleaned.entries]
        original_ids = [id(e) for e in entries if id(e) in set(kept_ids)]
        assert kept_ids == original_ids

    @settings(max_examples=150, deadline=None)
    @given(st.lists(log_entries(), max_size=40))
    def test_more_classes_never_keep_more(self, entries):
        small = CleaningConfig(remove_classes=frozenset({ResourceClass.IMAGE}))
        big = CleaningConfig()
        _, small_report = clean(joint(entries), small)
        _, big_report = clean(joint(entries), big)
        assert big_report.kept_count <= small_report.kept_count
