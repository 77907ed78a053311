"""End-to-end insight generation: view derivation, detection, text, IDs."""

from __future__ import annotations

from datetime import date
from typing import Any

from .detectors import DetectorConfig, detect_facts
from .facts import (
    ChartCategory,
    ComparisonType,
    Fact,
    Insight,
    InsightType,
    assign_id,
    categorize_chart,
)
from .model import DashboardSpec, Whole, _Whole, derive_table_view
from .textgen import render_text


def _column_key(fact: Fact) -> int:
    return -1 if isinstance(fact.table_column, _Whole) else int(fact.table_column)


def generate_insights(
    spec: DashboardSpec, config: DetectorConfig | None = None
) -> list[Insight]:
    """Generate the full insight set for a dashboard.

    Output is canonically ordered by panel, type code, then table column, so
    identical inputs always yield the identical list and ID assignment.
    """
    per_panel: list[tuple[Fact, ChartCategory]] = []
    for panel in spec.panels:
        view = derive_table_view(spec, panel.panel_id)
        category = categorize_chart(panel, view)
        for fact in detect_facts(view, category, config):
            per_panel.append((fact, category))

    per_panel.sort(
        key=lambda fc: (
            fc[0].panel_id,
            fc[0].insight_type.code,
            _column_key(fc[0]),
            fc[0].dimension_values,
            fc[0].metrics,
        )
    )

    insights: list[Insight] = []
    used: set[str] = set()
    for fact, category in per_panel:
        panel = spec.panel(fact.panel_id)
        iid = assign_id(fact, panel, used)
        used.add(iid)
        insights.append(
            Insight(id=iid, fact=fact, text=render_text(fact), chart_category=category)
        )
    return insights


def _date_ref_json(ref: date | tuple[date, date]) -> Any:
    if isinstance(ref, tuple):
        return [ref[0].isoformat(), ref[1].isoformat()]
    return ref.isoformat()


def insight_to_json(insight: Insight) -> dict:
    fact = insight.fact
    return {
        "id": insight.id,
        "panelId": fact.panel_id,
        "type": fact.insight_type.code,
        "comparison": fact.comparison_type.value,
        "chartCategory": insight.chart_category.value,
        "text": insight.text,
        "metrics": list(fact.metrics),
        "dimensions": list(fact.dimensions),
        "values": list(fact.dimension_values),
        "dates": [_date_ref_json(r) for r in fact.date_refs],
        "numbers": [[label, value] for label, value in fact.numbers],
        "percentage": fact.percentage,
        "tableColumn": None if isinstance(fact.table_column, _Whole) else fact.table_column,
        "segment": (
            {"column": fact.filter_segment[0], "value": fact.filter_segment[1]}
            if fact.filter_segment
            else None
        ),
    }


def insight_from_json(doc: dict) -> Insight:
    def parse_ref(r: Any) -> date | tuple[date, date]:
        if isinstance(r, list):
            return (date.fromisoformat(r[0]), date.fromisoformat(r[1]))
        return date.fromisoformat(r)

    fact = Fact(
        panel_id=doc["panelId"],
        insight_type=InsightType(doc["type"]),
        comparison_type=ComparisonType(doc["comparison"]),
        metrics=tuple(doc["metrics"]),
        dimensions=tuple(doc["dimensions"]),
        dimension_values=tuple(doc["values"]),
        filter_segment=(
            (doc["segment"]["column"], doc["segment"]["value"]) if doc.get("segment") else None
        ),
        date_refs=tuple(parse_ref(r) for r in doc["dates"]),
        numbers=tuple((label, float(v)) for label, v in doc["numbers"]),
        percentage=doc["percentage"],
        table_column=Whole if doc["tableColumn"] is None else int(doc["tableColumn"]),
    )
    return Insight(
        id=doc["id"],
        fact=fact,
        text=doc["text"],
        chart_category=ChartCategory(doc["chartCategory"]),
    )


def insights_to_json(insights: list[Insight]) -> list[dict]:
    return [insight_to_json(i) for i in insights]
