"""End-to-end pipeline: spec file in, scored/linked/summarized bundle out."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .detectors import DetectorConfig
from .engine import generate_insights, insights_to_json
from .facts import Insight
from .llm import (
    Backend,
    GroundingReport,
    LlmParams,
    RemoteBackend,
    StubBackend,
    SummaryResult,
    estimate_tokens,
    generate_summary,
    params_from_env,
    verify_grounding,
)
from .model import ChartType, DashboardSpec, Whole, _Whole, derive_table_view, load_dashboard, spec_to_doc
from .narrative import (
    DEFAULT_INSTRUCTION,
    MAX_TARGET,
    MIN_TARGET,
    PromptDoc,
    Selection,
    build_prompt,
    concat_baseline,
    order_for_reading,
    select_top,
    selection_to_json,
)
from .network import (
    InsightNetwork,
    LinkKind,
    NetworkConfig,
    build_network,
    network_to_json,
)
from .scoring import ScoreCard, cards_to_json, score_insights

BUNDLE_FORMAT = "insightloom/1"


class PipelineError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"pipeline failed at stage {stage!r}: {cause}")
        self.stage = stage
        self.cause = cause


_MARK_FOR_CHART = {
    ChartType.Bar: "bar",
    ChartType.Donut: "arc",
    ChartType.Line: "line",
    ChartType.MultiLine: "line",
    ChartType.Table: "bar",
}


@dataclass
class StoryComponent:
    insight_id: str
    title: str
    text: str
    chart_spec: dict

    def to_json(self) -> dict:
        return {
            "insightId": self.insight_id,
            "title": self.title,
            "text": self.text,
            "chartSpec": self.chart_spec,
        }


def _highlight_keys(insight: Insight) -> set[str]:
    keys = set(insight.fact.dimension_values)
    for d in insight.fact.all_dates():
        keys.add(d.isoformat())
    return keys


def story_component(insight: Insight, spec: DashboardSpec) -> StoryComponent:
    """Declarative chart for one insight with its mentioned values highlighted."""
    panel = spec.panel(insight.fact.panel_id)
    view = derive_table_view(spec, panel.panel_id)
    mark = _MARK_FOR_CHART[panel.chart_type]
    highlights = _highlight_keys(insight)

    fact_col = insight.fact.table_column
    if isinstance(fact_col, _Whole):
        series = [s for s in view.series if isinstance(s.table_column, _Whole)] or list(view.series)
    else:
        series = [s for s in view.series if s.table_column == fact_col]

    rows = []
    for s in series:
        for ax, v in zip(view.axis_values, s.values):
            axis = ax.isoformat() if isinstance(ax, date) else str(ax)
            highlighted = axis in highlights or (s.split_value in highlights if s.split_value else False)
            rows.append(
                {
                    "x": axis,
                    "y": v,
                    "series": s.name,
                    "highlight": bool(highlighted),
                }
            )

    x_type = "temporal" if view.time_axis else "nominal"
    encoding: dict = {
        "x": {"field": "x", "type": x_type, "title": view.time_axis or view.dimension_axis},
        "y": {"field": "y", "type": "quantitative", "title": series[0].metric if series else "value"},
    }
    if mark == "arc":
        encoding = {
            "theta": {"field": "y", "type": "quantitative"},
            "color": {"field": "x", "type": "nominal"},
            "opacity": {
                "condition": {"test": "datum.highlight", "value": 1.0},
                "value": 0.45,
            },
        }
    else:
        if len(series) > 1:
            encoding["color"] = {"field": "series", "type": "nominal"}
            encoding["opacity"] = {
                "condition": {"test": "datum.highlight", "value": 1.0},
                "value": 0.35,
            }
        else:
            encoding["color"] = {
                "condition": {"test": "datum.highlight", "value": "#d62728"},
                "value": "#4c78a8",
            }
    chart = {
        "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
        "title": panel.title,
        "mark": {"type": mark, "point": True} if mark == "line" else {"type": mark},
        "data": {"values": rows},
        "encoding": encoding,
    }
    return StoryComponent(
        insight_id=insight.id, title=panel.title, text=insight.text, chart_spec=chart
    )


@dataclass
class Bundle:
    spec: DashboardSpec
    insights: list[Insight]
    network: InsightNetwork
    cards: dict[str, ScoreCard]
    selection: Selection
    prompt: PromptDoc
    summary: SummaryResult | None
    grounding: GroundingReport | None
    story_components: list[StoryComponent] = field(default_factory=list)

    def insight_map(self) -> dict[str, Insight]:
        return {i.id: i for i in self.insights}

    def to_json(self) -> dict:
        return {
            "format": BUNDLE_FORMAT,
            "dashboard": spec_to_doc(self.spec),
            "insights": insights_to_json(self.insights),
            "network": network_to_json(self.network, cards_to_json(self.cards)),
            "scores": cards_to_json(self.cards),
            "selection": selection_to_json(self.selection),
            "prompt": {
                "instruction": self.prompt.instruction,
                "paragraphs": self.prompt.paragraphs,
                "tokenBudget": self.prompt.token_budget,
                "text": self.prompt.text,
            },
            "summary": (
                {
                    "text": self.summary.summary_text,
                    "backend": self.summary.backend.value,
                    "model": self.summary.params.model,
                    "temperature": self.summary.params.temperature,
                    "maxTokens": self.summary.params.max_tokens,
                }
                if self.summary is not None
                else None
            ),
            "grounding": self.grounding.to_json() if self.grounding is not None else None,
            "storyComponents": [c.to_json() for c in self.story_components],
            "baseline": concat_baseline(self.selection.reading_order, self.insight_map()),
        }

    def write(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n")


@dataclass
class PipelineOptions:
    min_target: int = MIN_TARGET
    max_target: int = MAX_TARGET
    kinds: frozenset[LinkKind] | None = None
    detector_config: DetectorConfig | None = None
    instruction: str = DEFAULT_INSTRUCTION
    include_titles: bool = False
    dry_run: bool = False
    stub: bool = False
    stub_script: dict[str, str] | None = None
    params: LlmParams | None = None


def run_pipeline(spec_source: str | Path | dict, options: PipelineOptions | None = None) -> Bundle:
    """load -> detect -> score -> link -> select -> order -> prompt -> summarize -> verify."""
    opts = options or PipelineOptions()

    def stage(name: str, fn):
        try:
            return fn()
        except Exception as exc:
            raise PipelineError(name, exc) from exc

    spec = stage("load", lambda: load_dashboard(spec_source))
    insights = stage("detect", lambda: generate_insights(spec, opts.detector_config))
    cards = stage("score", lambda: score_insights(insights, spec))
    net_config = NetworkConfig() if opts.kinds is None else NetworkConfig(enabled_kinds=opts.kinds)
    priorities = {iid: c.priority for iid, c in cards.items()}
    network = stage("network", lambda: build_network(insights, spec, net_config, priorities))

    by_id = {i.id: i for i in insights}
    score_order = stage(
        "select", lambda: select_top(priorities, opts.min_target, opts.max_target)
    )
    reading = stage("select", lambda: order_for_reading(score_order, spec, by_id))
    selection = Selection(
        score_order=score_order,
        reading_order=reading,
        min_target=opts.min_target,
        max_target=opts.max_target,
    )
    prompt = stage(
        "prompt",
        lambda: build_prompt(
            reading, by_id, spec, instruction=opts.instruction, include_titles=opts.include_titles
        ),
    )

    summary: SummaryResult | None = None
    grounding: GroundingReport | None = None
    if opts.dry_run:
        pass
    else:
        params = opts.params or params_from_env(max_tokens=max(prompt.token_budget, 1))
        params.max_tokens = max(prompt.token_budget, 1)
        backend: Backend = StubBackend(opts.stub_script) if opts.stub else RemoteBackend()
        summary = stage("summarize", lambda: generate_summary(prompt, params, backend))
        selected = [by_id[iid] for iid in reading]
        grounding = stage("verify", lambda: verify_grounding(summary.summary_text, selected))

    components = stage(
        "export", lambda: [story_component(by_id[iid], spec) for iid in reading]
    )
    return Bundle(
        spec=spec,
        insights=insights,
        network=network,
        cards=cards,
        selection=selection,
        prompt=prompt,
        summary=summary,
        grounding=grounding,
        story_components=components,
    )
