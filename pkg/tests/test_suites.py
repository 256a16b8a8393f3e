import json

import pytest

from qlwe.core.exceptions import ConfigError
from qlwe.harness.presets import builtin_preset, config_hash
from qlwe.harness.suites import check_fanout, check_linear_map, protocol_checks, run_suite
from qlwe.schemas.report import ChallengeStats, PassRateStats, RunReport, SuiteKind


def _names(report: RunReport) -> set:
    return {check.name for check in report.checks}


def test_invariants_pass_on_tiny():
    report = run_suite("invariants", builtin_preset("tiny"), 7)
    assert report.passed, [c for c in report.checks if not c.passed]
    assert {"robust_overlap_floor", "robust_closed_form", "g_density", "classify_partition"} <= _names(report)
    assert report.config_hash == config_hash(builtin_preset("tiny"))
    assert report.version


@pytest.mark.slow
def test_closeness_preset_checks_exactly():
    report = run_suite("invariants", builtin_preset("closeness"), 7)
    assert report.passed, [c for c in report.checks if not c.passed]
    assert {"supports_disjoint", "closeness", "shift_corrected_overlap"} <= _names(report)


def test_protocol_suite_writes_report_and_transcripts(tmp_path):
    report = run_suite("protocol", builtin_preset("tiny"), 5, prover="random", trials=40, out_dir=tmp_path)
    assert report.kind == SuiteKind.PROTOCOL
    assert report.stats.trials == 40
    assert report.passed
    assert "replay" in _names(report)
    assert (tmp_path / "transcripts.jsonl").exists()
    saved = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
    assert saved["stats"]["accepted"] == report.stats.accepted
    assert saved["passed"] is True


def test_reports_are_functions_of_preset_and_seed():
    first = run_suite("protocol", builtin_preset("tiny"), 9, prover="pass_r0", trials=30)
    second = run_suite("protocol", builtin_preset("tiny"), 9, prover="pass_r0", trials=30, workers=3)
    assert first.stats.accepted == second.stats.accepted
    assert first.stats.reasons == second.stats.reasons
    assert first.stats.per_challenge == second.stats.per_challenge


def test_extract_suite_labels_every_trial():
    report = run_suite("extract", builtin_preset("tiny"), 5, prover="pass_r0", trials=20)
    assert report.extraction.trials == 20
    assert sum(report.extraction.counts.values()) == 20
    assert report.passed


def test_simulating_kinds_need_a_desk_preset():
    with pytest.raises(ConfigError, match="not desk-runnable"):
        run_suite("invariants", builtin_preset("strict"), 1)


def test_unknown_prover_is_a_config_error():
    with pytest.raises(ConfigError):
        run_suite("protocol", builtin_preset("tiny"), 1, prover="oracle")


@pytest.mark.parametrize("accepted, passed", [(7200, False), (7300, True), (7500, True), (7700, True), (7800, False)])
def test_pass_r0_rate_window(baseline_params, accepted, passed):
    stats = PassRateStats(
        prover="pass_r0", seed=1, trials=10000, accepted=accepted, rate=accepted / 10000, ci_low=0.0, ci_high=1.0,
        per_challenge={"0": ChallengeStats(trials=5000, accepted=5000), "1": ChallengeStats(trials=5000, accepted=accepted - 5000)},
    )
    checks = {c.name: c for c in protocol_checks("pass_r0", baseline_params, stats)}
    assert checks["r0_rate"].passed
    assert checks["baseline_rate"].passed is passed


def test_linear_map_equivalence_on_small_register():
    checks = {c.name: c for c in check_linear_map(builtin_preset("tiny").params, 3)}
    assert checks["linear_map_equivalence"].passed
    assert checks["linear_map_declared_depth"].passed


@pytest.mark.slow
def test_fanout_table_is_exact():
    checks = check_fanout(3)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    assert checks[0].detail.startswith("25500 runs")
    assert {f"fanout_depth_m{m}" for m in (8, 16, 32, 64)} <= {c.name for c in checks}


@pytest.mark.slow
def test_depth_suite_on_strict_preset(tmp_path):
    report = run_suite(SuiteKind.DEPTH, builtin_preset("strict"), 3, out_dir=tmp_path)
    assert report.passed
    assert [d.family for d in report.depth] == [f"fanout(m={m})" for m in (8, 16, 32, 64)]
