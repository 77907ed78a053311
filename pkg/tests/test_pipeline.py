from __future__ import annotations

import json
import subprocess
import sys
from datetime import date

import pytest

import insightloom as il
from insightloom.cli import main as cli_main
from insightloom.engine import insight_from_json, insight_to_json
from insightloom.pipeline import Bundle, PipelineError, PipelineOptions, run_pipeline, story_component


@pytest.fixture(scope="module")
def stub_bundle() -> Bundle:
    return run_pipeline(str(il.FIXTURE_PATH), PipelineOptions(stub=True))


def test_dry_run_has_prompt_but_no_summary():
    bundle = run_pipeline(str(il.FIXTURE_PATH), PipelineOptions(dry_run=True))
    assert bundle.summary is None
    assert bundle.grounding is None
    assert bundle.prompt.paragraphs


def test_stub_bundle_contains_summary_and_grounding(stub_bundle):
    assert stub_bundle.summary is not None
    assert stub_bundle.summary.backend.value == "Stub"
    assert stub_bundle.grounding is not None
    assert stub_bundle.grounding.unsupported == []


def test_unreadable_path_fails_at_load_stage():
    with pytest.raises(PipelineError) as err:
        run_pipeline("/nonexistent/spec.json")
    assert err.value.stage == "load"


def test_bundle_json_round_trips_insights(stub_bundle):
    for insight in stub_bundle.insights:
        doc = insight_to_json(insight)
        again = insight_from_json(json.loads(json.dumps(doc)))
        assert again == insight


def test_bundle_ids_consistent(stub_bundle):
    payload = stub_bundle.to_json()
    ids = {i["id"] for i in payload["insights"]}
    assert set(payload["scores"]) == ids
    for link in payload["network"]["links"]:
        assert link["a"] in ids and link["b"] in ids
    assert set(payload["selection"]["scoreOrder"]) <= ids
    assert payload["format"] == "insightloom/1"


def test_story_components_match_selection(stub_bundle):
    assert [c.insight_id for c in stub_bundle.story_components] == stub_bundle.selection.reading_order


def test_story_component_decline_highlights_range_endpoints(stub_bundle):
    by_id = stub_bundle.insight_map()
    component = story_component(by_id["LC--DE"], stub_bundle.spec)
    assert component.chart_spec["mark"]["type"] == "line"
    rows = component.chart_spec["data"]["values"]
    highlighted = {r["x"] for r in rows if r["highlight"]}
    assert highlighted == {"2024-10-21", "2024-10-26"}


def test_story_component_skew_highlights_bars(stub_bundle):
    by_id = stub_bundle.insight_map()
    component = story_component(by_id["BCW-SK"], stub_bundle.spec)
    assert component.chart_spec["mark"]["type"] == "bar"
    rows = component.chart_spec["data"]["values"]
    highlighted = {r["x"] for r in rows if r["highlight"]}
    assert highlighted == {"Tuesday", "Wednesday"}


def test_story_component_correlation_has_empty_highlights_on_axis(stub_bundle):
    by_id = stub_bundle.insight_map()
    component = story_component(by_id["MCS-CO"], stub_bundle.spec)
    rows = component.chart_spec["data"]["values"]
    # CO mentions no dates; highlighting comes only from the two series names
    assert {r["series"] for r in rows if r["highlight"]} <= {
        "Sentiment [Very Negative]", "Sentiment [Negative]",
    }
    assert not any(r["highlight"] and r["series"] == "Sentiment [Neutral]" for r in rows)


def test_highlight_set_subset_of_fact(stub_bundle):
    for insight in stub_bundle.insights:
        component = story_component(insight, stub_bundle.spec)
        allowed = set(insight.fact.dimension_values)
        allowed.update(d.isoformat() for d in insight.fact.all_dates())
        allowed.update({f"{insight.fact.dimensions[0]} [{v}]" for v in insight.fact.dimension_values} if insight.fact.dimensions else set())
        for row in component.chart_spec["data"]["values"]:
            if row["highlight"]:
                assert row["x"] in allowed or row["series"] in allowed


def test_donut_story_uses_arc(stub_bundle):
    by_id = stub_bundle.insight_map()
    component = story_component(by_id["DCS-MX"], stub_bundle.spec)
    assert component.chart_spec["mark"]["type"] == "arc"
    assert "theta" in component.chart_spec["encoding"]


# --- CLI -----------------------------------------------------------------------


def _cli(tmp_path, *argv) -> dict | list:
    out = tmp_path / "out.json"
    code = cli_main([*argv, "--out", str(out)])
    assert code == 0
    return json.loads(out.read_text())


def test_cli_generate(tmp_path):
    payload = _cli(tmp_path, "generate", "--spec", str(il.FIXTURE_PATH))
    assert isinstance(payload, list)
    assert {"id", "panelId", "type", "text"} <= set(payload[0])


def test_cli_select_bounds(tmp_path):
    payload = _cli(tmp_path, "select", "--spec", str(il.FIXTURE_PATH), "--min", "5", "--max", "9")
    assert 5 <= len(payload["scoreOrder"]) <= 9
    assert sorted(payload["readingOrder"]) == sorted(payload["scoreOrder"])


def test_cli_summarize_stub(tmp_path):
    payload = _cli(tmp_path, "summarize", "--spec", str(il.FIXTURE_PATH), "--stub")
    assert payload["summary"]
    assert payload["grounding"]["unsupportedCount"] == 0


def test_cli_network_kinds_filter(tmp_path):
    payload = _cli(
        tmp_path, "network", "--spec", str(il.FIXTURE_PATH), "--kinds", "SharedMetric,SharedDate"
    )
    kinds = {l["kind"] for l in payload["links"]}
    assert kinds <= {"SharedMetric", "SharedDate"}


def test_cli_unknown_kind_exits_nonzero():
    with pytest.raises(SystemExit):
        cli_main(["network", "--spec", str(il.FIXTURE_PATH), "--kinds", "Bogus"])


def test_cli_bad_path_exit_code():
    assert cli_main(["generate", "--spec", "/nonexistent.json"]) == 2


def test_cli_export_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for target in (a, b):
        code = cli_main(["export", "--spec", str(il.FIXTURE_PATH), "--stub", "--out", str(target)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_entrypoint_subprocess(tmp_path):
    out = tmp_path / "sel.json"
    proc = subprocess.run(
        [sys.executable, "-m", "insightloom.cli", "select", "--spec", str(il.FIXTURE_PATH), "--out", str(out)],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["scoreOrder"]
